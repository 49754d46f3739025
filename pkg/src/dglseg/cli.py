"""Command-line surface: segment, bench, synth, bounds, serve."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import bench as bench_mod
from .dataset import DatasetManifest, load_image, load_label_map, save_image, save_label_map
from .dgl import BoundParams, error_bound_alternate, error_bound_primary, min_superpixel_size
from .errors import DglsegError
from .inputs import training_sets
from .metrics import clicks_to_reach, genie_refinement_curve, pixel_accuracy
from .pipeline import segment
from .quantize import QuantizationSpec, reduce_alphabet
from .synth import generate_natural, generate_synthetic


def _parse_bins(text: str) -> tuple[int, ...]:
    return tuple(int(b) for b in text.split(","))


def _parse_regime(text: str):
    """Regime strings: gt:F, bb:F, seeds:T[:SIDE], bbp:P[:F]."""
    parts = text.split(":")
    kind = parts[0].lower()
    args = [float(p) for p in parts[1:]]
    if kind == "gt" and len(args) == 1:
        return bench_mod.GtFraction(args[0])
    if kind == "bb" and len(args) == 1:
        return bench_mod.BbFraction(args[0])
    if kind == "seeds" and 1 <= len(args) <= 2:
        side = int(args[1]) if len(args) == 2 else 50
        return bench_mod.SeedSquares(int(args[0]), side)
    if kind == "bbp" and 1 <= len(args) <= 2:
        fill = args[1] if len(args) == 2 else 100.0
        return bench_mod.BbPerturbed(args[0], fill)
    raise argparse.ArgumentTypeError(
        f"bad regime {text!r}; use gt:F, bb:F, seeds:T[:SIDE], or bbp:P[:F]"
    )


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--colorspace", default="HSV", choices=["RGB", "HSV", "GRAY"])
    p.add_argument("--channels", default=None,
                   help="comma-separated channel indices (default: 0,1 for HSV, all otherwise)")
    p.add_argument("--bins", type=_parse_bins, default=None,
                   help="comma-separated bins per channel (default 1024,1024)")
    p.add_argument("--reduce-to-linear", action="store_true",
                   help="shrink the alphabet to at most the pixel count")
    p.add_argument("--superpixels", type=int, default=500, metavar="K")
    p.add_argument("--compactness", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exclusion", type=float, default=0.0)
    p.add_argument("--click-cost", type=int, default=2)


def _spec_from_args(args) -> QuantizationSpec:
    if args.channels is not None:
        channels = tuple(int(c) for c in args.channels.split(","))
    elif args.colorspace == "HSV":
        channels = (0, 1)
    elif args.colorspace == "GRAY":
        channels = (0,)
    else:
        channels = (0, 1, 2)
    bins = args.bins if args.bins is not None else (1024,) * len(channels)
    return QuantizationSpec(args.colorspace, channels, bins)


def _cmd_segment(args) -> int:
    image = load_image(args.image)
    annotation = load_label_map(args.labels)
    spec = _spec_from_args(args)
    if args.reduce_to_linear:
        spec = reduce_alphabet(spec, image.n_pixels)
    sets = training_sets(annotation, args.regime, image.shape, args.seed)
    result = segment(
        image, sets, spec=spec, n_superpixels=args.superpixels,
        compactness=args.compactness, click_cost=args.click_cost,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_label_map(result.pixel_labels, out / "labels.png")
    acc = pixel_accuracy(result.pixel_labels, annotation.label_field, args.exclusion)
    curve = genie_refinement_curve(result, annotation.label_field)
    stats = {
        "accuracy": acc,
        "clicks_to_99": clicks_to_reach(curve, 0.99),
        "refinement_ceiling": curve[-1][1],
        "config": result.config,
    }
    (out / "stats.json").write_text(json.dumps(stats, indent=2) + "\n")
    print(f"accuracy {acc:.4f}  superpixels {result.partition.n_superpixels}  -> {out}")
    return 0


def _cmd_bench(args) -> int:
    manifest = DatasetManifest.load(args.manifest)
    if args.config:
        config = bench_mod.BenchConfig.load(args.config)
    else:
        config = bench_mod.BenchConfig(regimes=bench_mod.paper_grid())
    if args.regime:
        config = replace(config, regimes=tuple(args.regime))
    report = bench_mod.run_benchmark(manifest, config, out_dir=args.out, plot=args.plot)
    for agg in report.aggregates:
        print(
            f"{agg.regime:>14} {agg.parameter!s:>6}: "
            f"acc {agg.mean_accuracy:.4f} +- {agg.stdev_accuracy:.4f} "
            f"(n={agg.n_runs}, clicks@0.99={agg.mean_clicks_to_99:.1f})"
        )
    return 0


def _cmd_synth(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i in range(args.count):
        seed = args.seed + i
        if args.style == "natural":
            image, annotation = generate_natural(args.regions, args.width, args.height, seed)
        else:
            image, annotation = generate_synthetic(
                args.regions, args.width, args.height, seed, args.tv
            )
        img_name = f"{args.style}_{i:03d}.png"
        gt_name = f"{args.style}_{i:03d}_gt.png"
        save_image(image, out / img_name)
        save_label_map(annotation.label_field, out / gt_name)
        entries.append((img_name, [gt_name]))
    DatasetManifest(entries, name=f"{args.style}-synthetic").save(out / "manifest.json")
    print(f"wrote {args.count} images + annotations + manifest.json to {out}")
    return 0


def _cmd_bounds(args) -> int:
    params = BoundParams(
        n_hypotheses=args.regions,
        alphabet_size=args.alphabet,
        n=args.n,
        n_min=args.ntrain,
        v_min=args.vmin,
        delta=args.delta,
    )
    primary = error_bound_primary(params)
    alternate = error_bound_alternate(params)
    print(f"alpha             : {params.alpha:.6g}")
    if params.delta is not None:
        print(f"robustness margin : {params.delta:.6g}")
    print(f"primary bound     : {primary.value:.6g}"
          + ("  (vacuous)" if primary.vacuous else ""))
    print(f"alternate bound   : {alternate.value:.6g}"
          + ("  (vacuous)" if alternate.vacuous else ""))
    try:
        n_star = min_superpixel_size(params)
        print(f"min superpixel n  : {n_star}")
    except DglsegError as exc:
        print(f"min superpixel n  : undefined ({exc})")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dglseg",
        description="Robust user-assisted multiple-region segmentation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment one image from simulated inputs")
    p.add_argument("--image", required=True)
    p.add_argument("--labels", required=True, help="reference label map (PNG/PGM)")
    p.add_argument("--regime", type=_parse_regime, default=bench_mod.GtFraction(100.0),
                   help="input regime, e.g. gt:100, bb:50, seeds:15:50, bbp:10")
    p.add_argument("--out", default="segment_out")
    _add_spec_flags(p)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("bench", help="benchmark a manifest of annotated images")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", default=None, help="JSON config (defaults to the standard grid)")
    p.add_argument("--regime", type=_parse_regime, action="append", default=None,
                   help="override config regimes (repeatable)")
    p.add_argument("--out", default="bench_out")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("synth", help="generate a synthetic annotated dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--style", choices=["iid", "natural"], default="natural")
    p.add_argument("--regions", type=int, default=4, metavar="M")
    p.add_argument("--width", type=int, default=481)
    p.add_argument("--height", type=int, default=321)
    p.add_argument("--tv", type=float, default=0.8,
                   help="exact minimum pairwise TV (iid style only)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("bounds", help="evaluate the misclassification bounds")
    p.add_argument("--regions", type=int, required=True, metavar="M")
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="test length (superpixel size)")
    p.add_argument("--ntrain", type=int, required=True, help="smallest training-set size")
    p.add_argument("--vmin", type=float, required=True)
    p.add_argument("--delta", type=float, default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("serve", help="start the local annotation service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DglsegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
