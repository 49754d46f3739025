"""Mini benchmark: manifest of generated images -> per-run and aggregate CSVs.

The same machinery the CLI `bench` verb uses; the config is echoed next
to the reports for provenance.
"""

from pathlib import Path

from dglseg.bench import BenchConfig, paper_grid, run_benchmark
from dglseg.dataset import DatasetManifest, save_image, save_label_map
from dglseg.synth import generate_natural

OUT = Path(__file__).parent / "out" / "benchmark"
DATA = Path(__file__).parent / "out" / "benchmark_data"
DATA.mkdir(parents=True, exist_ok=True)

entries = []
for i in range(4):
    image, annotation = generate_natural(3 + i % 2, 321, 241, seed=40 + i)
    save_image(image, DATA / f"img{i}.png")
    save_label_map(annotation.label_field, DATA / f"img{i}_gt.png")
    entries.append((f"img{i}.png", [f"img{i}_gt.png"]))
manifest = DatasetManifest(entries, name="demo-benchmark")
manifest.root = DATA
manifest.save(DATA / "manifest.json")

config = BenchConfig(n_superpixels=400, regimes=paper_grid())
report = run_benchmark(manifest, config, out_dir=OUT, plot=True)

print(f"{'regime':>14} {'param':>6} {'mean acc':>9} {'stdev':>7} {'clicks@99%':>11}")
for agg in report.aggregates:
    print(
        f"{agg.regime:>14} {agg.parameter!s:>6} {agg.mean_accuracy:>9.4f} "
        f"{agg.stdev_accuracy:>7.4f} {agg.mean_clicks_to_99:>11.1f}"
    )
print(f"\nreports in {OUT}")
