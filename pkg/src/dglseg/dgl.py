"""The DGL robust M-ary hypothesis test over quantized histograms.

Given M nominal histograms, the test precomputes one comparison set per
hypothesis pair — the cells where the first histogram's mass is at least
the second's — together with every nominal's mass on every such set. A
test sequence of cells is then labeled with the hypothesis whose nominal
masses deviate least, in the worst case over all pair sets, from the
sequence's empirical measures. The construction makes each pair set the
maximizing event for the total variation between its two nominals, so
nominal-mass gaps on a set equal the corresponding TV exactly; tests rely
on that identity.

Also provided: closed-form upper bounds on the misclassification
probability for empirically estimated nominals, and the smallest test
length at which the primary bound's exponent turns positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .histograms import Histogram
from .quantize import QuantizationSpec


@dataclass
class ScheffeFamily:
    """Membership masks of the per-pair comparison sets.

    ``masks[r]`` is a boolean vector over the alphabet for ``pairs[r]``;
    pairs are 1-based (i, j) with i < j, one per unordered hypothesis pair.
    """

    n_hypotheses: int
    spec: QuantizationSpec
    pairs: tuple[tuple[int, int], ...]
    masks: np.ndarray = field(repr=False)  # (n_pairs, alphabet) bool

    def pair_row(self, i: int, j: int) -> int:
        try:
            return self.pairs.index((i, j))
        except ValueError:
            raise InputError(f"no comparison set for pair ({i}, {j})") from None

    def mask(self, i: int, j: int) -> np.ndarray:
        return self.masks[self.pair_row(i, j)]


@dataclass
class NominalTable:
    """Nominal mass of every hypothesis on every pair set.

    ``values[m - 1, r]`` is hypothesis m's mass on ``pairs[r]``.
    """

    n_hypotheses: int
    pairs: tuple[tuple[int, int], ...]
    values: np.ndarray = field(repr=False)  # (M, n_pairs) float64

    def value(self, m: int, i: int, j: int) -> float:
        try:
            r = self.pairs.index((i, j))
        except ValueError:
            raise InputError(f"no table entry for pair ({i}, {j})") from None
        return float(self.values[m - 1, r])


@dataclass
class DecisionStats:
    """Outcome of one test: label, per-hypothesis scores, per-pair measures."""

    chosen_label: int
    scores: np.ndarray  # (M,) worst-case deviation per hypothesis
    pair_measures: np.ndarray  # (n_pairs,) empirical measure per pair set
    overridden: bool = False


def _check_hists(hists: list[Histogram]) -> None:
    if len(hists) < 2:
        raise InputError("need at least two hypotheses")
    spec = hists[0].spec
    if any(h.spec != spec for h in hists[1:]):
        raise InputError("histograms use different quantization specs")


def build_scheffe_sets(hists: list[Histogram]) -> ScheffeFamily:
    """One comparison set per pair (i, j), i < j: cells where Q_i >= Q_j."""
    _check_hists(hists)
    m = len(hists)
    pairs = tuple((i + 1, j + 1) for i in range(m) for j in range(i + 1, m))
    masks = np.empty((len(pairs), hists[0].spec.alphabet_size), dtype=bool)
    for r, (i, j) in enumerate(pairs):
        masks[r] = hists[i - 1].mass >= hists[j - 1].mass
    return ScheffeFamily(m, hists[0].spec, pairs, masks)


def build_nominal_table(hists: list[Histogram], family: ScheffeFamily) -> NominalTable:
    """Sum every nominal's mass over every pair set (exact summation)."""
    _check_hists(hists)
    if len(hists) != family.n_hypotheses or hists[0].spec != family.spec:
        raise InputError("histograms do not match the comparison family")
    stacked = np.stack([h.mass for h in hists])  # (M, alphabet)
    values = np.empty((len(hists), len(family.pairs)), dtype=np.float64)
    for r in range(len(family.pairs)):
        values[:, r] = stacked @ family.masks[r].astype(np.float64)
    return NominalTable(len(hists), family.pairs, values)


def empirical_measure(cells, mask: np.ndarray) -> float:
    """Fraction of the given cells that fall inside the mask."""
    c = np.asarray(cells, dtype=np.int64).ravel()
    if c.size == 0:
        raise InputError("empirical measure of an empty cell list is undefined")
    return float(mask[c].mean())


def classify(cells, family: ScheffeFamily, table: NominalTable) -> DecisionStats:
    """Label a cell sequence by minimal worst-case deviation.

    Every hypothesis is scored against every pair set; ties in the argmin
    break toward the smallest label.
    """
    c = np.asarray(cells, dtype=np.int64).ravel()
    if c.size == 0:
        raise InputError("cannot classify an empty cell sequence")
    if family.pairs != table.pairs:
        raise InputError("family and table disagree on hypothesis pairs")
    mu = family.masks[:, c].mean(axis=1)  # (n_pairs,)
    scores = np.abs(table.values - mu[None, :]).max(axis=1)  # (M,)
    return DecisionStats(int(np.argmin(scores)) + 1, scores, mu)


@dataclass(frozen=True)
class BoundParams:
    """Inputs to the misclassification bounds.

    alpha is the ratio of the smallest training-set size to the test
    length; delta is an optional robustness margin carried for reporting.
    """

    n_hypotheses: int
    alphabet_size: int
    n: int
    n_min: int
    v_min: float
    delta: float | None = None

    def __post_init__(self):
        if self.n_hypotheses < 2:
            raise InputError("bounds need at least two hypotheses")
        if self.alphabet_size < 2:
            raise InputError("alphabet must have at least two cells")
        if self.n < 1 or self.n_min < 1:
            raise InputError("sequence lengths must be positive")
        if not 0.0 <= self.v_min <= 1.0:
            raise InputError("v_min must lie in [0, 1]")

    @property
    def alpha(self) -> float:
        return self.n_min / self.n


@dataclass(frozen=True)
class BoundValue:
    """A bound evaluation: the value, its exponent, and a vacuity flag."""

    value: float
    exponent: float  # total decay exponent; bound = 2M * exp(-exponent)
    vacuous: bool  # True when the bound is >= 1 and carries no guarantee


def _hypothesis_penalty(m: int) -> float:
    # log(M - 1) vanishes for the binary case.
    return 2.0 * math.log(m - 1) if m > 2 else 0.0


def _bound_from_exponent(m: int, exponent: float) -> BoundValue:
    try:
        value = 2.0 * m * math.exp(-exponent)
    except OverflowError:
        value = math.inf
    return BoundValue(max(0.0, value), exponent, value >= 1.0)


def error_bound_primary(p: BoundParams) -> BoundValue:
    """First closed-form bound: exponent rate a*v^2 / (2*(2 + sqrt(a))^2),
    penalized by max{2 ln(M-1), |alphabet| ln 2}."""
    a = p.alpha
    rate = a * p.v_min**2 / (2.0 * (2.0 + math.sqrt(a)) ** 2)
    penalty = max(_hypothesis_penalty(p.n_hypotheses), p.alphabet_size * math.log(2.0))
    return _bound_from_exponent(p.n_hypotheses, p.n * rate - penalty)


def error_bound_alternate(p: BoundParams) -> BoundValue:
    """Second bound; tighter when the alphabet outgrows the test length:
    rate 2a*v^2 / (3|alphabet| + 2 sqrt(a))^2, penalty max{2 ln(M-1), ln|alphabet|}."""
    a = p.alpha
    rate = 2.0 * a * p.v_min**2 / (3.0 * p.alphabet_size + 2.0 * math.sqrt(a)) ** 2
    penalty = max(_hypothesis_penalty(p.n_hypotheses), math.log(p.alphabet_size))
    return _bound_from_exponent(p.n_hypotheses, p.n * rate - penalty)


def min_superpixel_size(p: BoundParams) -> int:
    """Smallest test length with a positive exponent in the primary bound.

    Solves n * rate > penalty for integer n with the primary bound's rate
    and penalty terms. Undefined (raises) when the separation is zero: no
    finite length suffices.
    """
    if p.v_min <= 0.0:
        raise InputError("zero separation admits no finite superpixel size")
    a = p.alpha
    if a <= 0.0:
        raise InputError("alpha must be positive")
    rate = a * p.v_min**2 / (2.0 * (2.0 + math.sqrt(a)) ** 2)
    penalty = max(_hypothesis_penalty(p.n_hypotheses), p.alphabet_size * math.log(2.0))
    threshold = penalty / rate
    return int(math.floor(threshold)) + 1
