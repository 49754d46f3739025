"""Local HTTP service for interactive annotation sessions.

Sessions live in process memory and evict after an idle timeout. Within a
session mutations are serialized behind a lock; distinct sessions are
fully independent. Image and label-map uploads are raw request bodies
(PNG/PGM bytes); everything else is JSON under /v1.
"""

from __future__ import annotations

import io
import threading
import time
import uuid
from dataclasses import dataclass, field as dc_field

import numpy as np
from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .dataset import load_image, load_label_map
from .errors import DglsegError, InputError
from .histograms import PixelSet
from .inputs import BoundingBox, RegionAnnotation, seed_squares
from .metrics import majority_labels, pixel_accuracy
from .pipeline import SegmentationResult, relabel_superpixel, segment
from .quantize import Image, QuantizationSpec, reduce_alphabet
from .slic import SuperpixelPartition, slic
from .quantize import features

DEFAULT_IDLE_SECONDS = 1800.0
MAX_ALPHABET_CELLS = 4_200_000  # hard ceiling so one request cannot exhaust memory


# ---------------------------------------------------------------------------
# Wire schemas


class SeedInput(BaseModel):
    row: int
    col: int
    side: int = 50


class BoxInput(BaseModel):
    r1: int
    c1: int
    r2: int
    c2: int


class RegionInputs(BaseModel):
    label: int = Field(ge=1, le=255)
    seeds: list[SeedInput] = Field(default_factory=list)
    boxes: list[BoxInput] = Field(default_factory=list)
    pixels: list[tuple[int, int]] = Field(default_factory=list)


class InputsPayload(BaseModel):
    regions: list[RegionInputs]
    reset: bool = True


class SegmentParams(BaseModel):
    color_space: str = "HSV"
    channel_selection: list[int] | None = None
    bins_per_channel: list[int] | None = None
    reduce_to_linear: bool = False
    n_superpixels: int = Field(default=500, ge=1)
    compactness: float = Field(default=10.0, gt=0)
    click_cost: int = Field(default=2, ge=1)


class RelabelPayload(BaseModel):
    superpixel: int = Field(ge=0)
    label: int = Field(ge=1)


class SessionInfo(BaseModel):
    session_id: str
    width: int
    height: int
    channels: int


class SuperpixelsInfo(BaseModel):
    k_actual: int
    width: int
    height: int
    assignment_rle: list[tuple[int, int]]


class RegionSummary(BaseModel):
    label: int
    pixel_count: int


class InputsInfo(BaseModel):
    regions: list[RegionSummary]


class RefinementHint(BaseModel):
    superpixel: int
    label: int


class SegmentInfo(BaseModel):
    k_actual: int
    n_regions: int
    labels: list[int]
    clicks: int
    timing_ms: float
    accuracy: float | None = None
    refinement_hint: RefinementHint | None = None
    stale: bool = False


class RelabelInfo(BaseModel):
    clicks: int
    accuracy: float | None = None
    label: int


class GroundTruthInfo(BaseModel):
    n_regions: int


def rle_encode(values: np.ndarray) -> list[tuple[int, int]]:
    """Row-major run-length encoding as (value, run) pairs."""
    v = np.asarray(values).ravel()
    if v.size == 0:
        return []
    change = np.flatnonzero(np.diff(v)) + 1
    starts = np.concatenate([[0], change])
    ends = np.concatenate([change, [v.size]])
    return [(int(v[s]), int(e - s)) for s, e in zip(starts, ends)]


# ---------------------------------------------------------------------------
# Session state


@dataclass
class Session:
    id: str
    image: Image
    lock: threading.Lock = dc_field(default_factory=threading.Lock)
    partition: SuperpixelPartition | None = None
    partition_key: tuple | None = None
    inputs: dict[int, np.ndarray] = dc_field(default_factory=dict)
    result: SegmentationResult | None = None
    result_stale: bool = False
    clicks: int = 0
    groundtruth: RegionAnnotation | None = None
    last_touch: float = dc_field(default_factory=time.monotonic)

    def touch(self):
        self.last_touch = time.monotonic()


class SessionStore:
    def __init__(self, idle_seconds: float = DEFAULT_IDLE_SECONDS):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._idle = idle_seconds

    def add(self, session: Session) -> None:
        with self._lock:
            self._evict()
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._evict()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session {session_id}")
        session.touch()
        return session

    def _evict(self) -> None:
        now = time.monotonic()
        dead = [k for k, s in self._sessions.items() if now - s.last_touch > self._idle]
        for k in dead:
            del self._sessions[k]


# ---------------------------------------------------------------------------
# Application


def create_app(idle_seconds: float = DEFAULT_IDLE_SECONDS) -> FastAPI:
    app = FastAPI(title="dglseg service", version="1")
    # local tool: the browser UI is typically served from another port
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(idle_seconds)

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.post("/v1/session", response_model=SessionInfo)
    async def create_session(request: Request):
        body = await request.body()
        if not body:
            raise HTTPException(400, "empty upload")
        try:
            image = load_image(body)
        except DglsegError as exc:
            raise HTTPException(400, str(exc))
        session = Session(uuid.uuid4().hex, image)
        store.add(session)
        return SessionInfo(
            session_id=session.id,
            width=image.width,
            height=image.height,
            channels=image.channels,
        )

    @app.get("/v1/session/{session_id}/superpixels", response_model=SuperpixelsInfo)
    def superpixels(
        session_id: str,
        k: int = Query(default=500, ge=1),
        compactness: float = Query(default=10.0, gt=0),
    ):
        session = store.get(session_id)
        with session.lock:
            partition = _ensure_partition(session, k, compactness)
            return SuperpixelsInfo(
                k_actual=partition.n_superpixels,
                width=session.image.width,
                height=session.image.height,
                assignment_rle=rle_encode(partition.assignment),
            )

    @app.post("/v1/session/{session_id}/inputs", response_model=InputsInfo)
    def submit_inputs(session_id: str, payload: InputsPayload):
        session = store.get(session_id)
        shape = session.image.shape
        with session.lock:
            if payload.reset:
                session.inputs.clear()
            try:
                for region in payload.regions:
                    pts = _expand_region_inputs(region, shape)
                    if region.label in session.inputs:
                        pts = np.vstack([session.inputs[region.label], pts])
                    session.inputs[region.label] = np.unique(pts, axis=0)
            except DglsegError as exc:
                raise HTTPException(400, str(exc))
            session.result_stale = session.result is not None
            return InputsInfo(
                regions=[
                    RegionSummary(label=lbl, pixel_count=len(pts))
                    for lbl, pts in sorted(session.inputs.items())
                ]
            )

    @app.post("/v1/session/{session_id}/segment", response_model=SegmentInfo)
    def run_segment(session_id: str, params: SegmentParams):
        session = store.get(session_id)
        with session.lock:
            labels = sorted(session.inputs)
            if len(labels) < 2:
                raise HTTPException(
                    422,
                    f"need inputs for at least 2 regions, have {len(labels)}",
                )
            if labels != list(range(1, len(labels) + 1)):
                raise HTTPException(
                    422, f"region labels must be contiguous from 1, got {labels}"
                )
            spec = _spec_from_params(params, session.image)
            t0 = time.perf_counter()
            partition = _ensure_partition(session, params.n_superpixels, params.compactness)
            sets = [
                PixelSet(lbl, session.inputs[lbl]) for lbl in labels
            ]
            try:
                result = segment(
                    session.image,
                    sets,
                    spec=spec,
                    n_superpixels=params.n_superpixels,
                    compactness=params.compactness,
                    partition=partition,
                    click_cost=params.click_cost,
                )
            except DglsegError as exc:
                raise HTTPException(422, str(exc))
            elapsed_ms = (time.perf_counter() - t0) * 1000.0
            session.result = result
            session.result_stale = False
            session.clicks = 0
            accuracy = _session_accuracy(session)
            return SegmentInfo(
                k_actual=partition.n_superpixels,
                n_regions=len(sets),
                labels=[int(x) for x in result.superpixel_labels],
                clicks=session.clicks,
                timing_ms=elapsed_ms,
                accuracy=accuracy,
                refinement_hint=_refinement_hint(session),
            )

    @app.post("/v1/session/{session_id}/relabel", response_model=RelabelInfo)
    def relabel(session_id: str, payload: RelabelPayload):
        session = store.get(session_id)
        with session.lock:
            if session.result is None:
                raise HTTPException(409, "no segmentation result yet")
            try:
                relabel_superpixel(session.result, payload.superpixel, payload.label)
            except InputError as exc:
                raise HTTPException(422, str(exc))
            session.clicks += session.result.click_cost
            return RelabelInfo(
                clicks=session.clicks,
                accuracy=_session_accuracy(session),
                label=payload.label,
            )

    @app.post("/v1/session/{session_id}/groundtruth", response_model=GroundTruthInfo)
    async def set_groundtruth(session_id: str, request: Request):
        session = store.get(session_id)
        body = await request.body()
        try:
            annotation = load_label_map(body)
        except DglsegError as exc:
            raise HTTPException(400, str(exc))
        if annotation.shape != session.image.shape:
            raise HTTPException(422, "label map does not match the image size")
        with session.lock:
            session.groundtruth = annotation
        return GroundTruthInfo(n_regions=annotation.n_regions)

    @app.get("/v1/session/{session_id}/overlay")
    def overlay(session_id: str, opacity: float = Query(default=0.5, ge=0.0, le=1.0)):
        session = store.get(session_id)
        with session.lock:
            if session.result is None:
                raise HTTPException(409, "no segmentation result yet")
            png = _render_overlay(session.image, session.result, opacity)
        return Response(content=png, media_type="image/png")

    return app


# ---------------------------------------------------------------------------
# Helpers


def _ensure_partition(session: Session, k: int, compactness: float) -> SuperpixelPartition:
    key = (k, compactness)
    if session.partition is None or session.partition_key != key:
        spec = QuantizationSpec("HSV", (0, 1), (1024, 1024))
        if session.image.channels == 1:
            spec = QuantizationSpec("GRAY", (0,), (1024,))
        session.partition = slic(features(session.image, spec), k, compactness)
        session.partition_key = key
        session.result = None
        session.result_stale = False
    return session.partition


def _expand_region_inputs(region: RegionInputs, shape: tuple[int, int]) -> np.ndarray:
    h, w = shape
    chunks = []
    for seed in region.seeds:
        if not (0 <= seed.row < h and 0 <= seed.col < w):
            raise InputError(f"seed ({seed.row}, {seed.col}) outside the image")
        chunks.append(
            seed_squares(
                np.array([[seed.row, seed.col]]),
                points=1,
                side=seed.side,
                rng=np.random.default_rng(0),
                shape=shape,
            )
        )
    for box in region.boxes:
        chunks.append(BoundingBox(box.r1, box.c1, box.r2, box.c2).pixel_grid(shape))
    if region.pixels:
        pts = np.asarray(region.pixels, dtype=np.int64)
        if pts.min() < 0 or pts[:, 0].max() >= h or pts[:, 1].max() >= w:
            raise InputError(f"region {region.label} has pixels outside the image")
        chunks.append(pts)
    if not chunks:
        raise InputError(f"region {region.label} provided no inputs")
    return np.unique(np.vstack(chunks), axis=0)


def _spec_from_params(params: SegmentParams, image: Image) -> QuantizationSpec:
    channels = params.channel_selection
    if channels is None:
        channels = {"HSV": [0, 1], "GRAY": [0]}.get(params.color_space, [0, 1, 2])
    bins = params.bins_per_channel or [1024] * len(channels)
    try:
        spec = QuantizationSpec(params.color_space, tuple(channels), tuple(bins))
    except DglsegError as exc:
        raise HTTPException(422, str(exc))
    if params.reduce_to_linear:
        spec = reduce_alphabet(spec, image.n_pixels)
    if spec.alphabet_size > MAX_ALPHABET_CELLS:
        raise HTTPException(
            422,
            f"alphabet of {spec.alphabet_size} cells exceeds the service limit "
            f"({MAX_ALPHABET_CELLS}); reduce the bin counts",
        )
    return spec


def _session_accuracy(session: Session) -> float | None:
    if session.groundtruth is None or session.result is None:
        return None
    return pixel_accuracy(
        session.result.pixel_labels, session.groundtruth.label_field
    )


def _refinement_hint(session: Session) -> RefinementHint | None:
    """Highest-gain correction toward the reference majority, if any."""
    if session.groundtruth is None or session.result is None:
        return None
    result = session.result
    majority, counts = majority_labels(
        result.partition, session.groundtruth.label_field, result.n_regions
    )
    region_counts = counts[:, 1:]
    cur = result.superpixel_labels
    cur_correct = region_counts[np.arange(len(cur)), cur - 1]
    best = np.where(majority > 0, region_counts.max(axis=1), 0)
    gains = best - cur_correct
    k = int(np.argmax(gains))
    if gains[k] <= 0:
        return None
    return RefinementHint(superpixel=k, label=int(majority[k]))


def _render_overlay(image: Image, result: SegmentationResult, opacity: float) -> bytes:
    from PIL import Image as PILImage

    from .dataset import _LABEL_COLORS

    rgb = image.data if image.channels == 3 else np.repeat(image.data, 3, axis=2)
    tint = np.array(
        [_LABEL_COLORS[l % len(_LABEL_COLORS)] for l in range(result.n_regions + 1)],
        dtype=np.float64,
    ) / 255.0
    labels = result.pixel_labels
    out = (1.0 - opacity) * rgb + opacity * tint[labels]
    edges = np.zeros(labels.shape, dtype=bool)
    a = result.partition.assignment
    edges[:-1, :] |= a[:-1, :] != a[1:, :]
    edges[:, :-1] |= a[:, :-1] != a[:, 1:]
    out[edges] = 1.0
    buf = io.BytesIO()
    PILImage.fromarray(np.clip(out * 255, 0, 255).astype(np.uint8)).save(buf, format="PNG")
    return buf.getvalue()
