"""Randomized and exact experiments over explicit groups.

Each experiment returns an ExperimentReport with a hard pass/fail verdict.
Verdicts on Monte Carlo quantities are decided in exact rational arithmetic
(a sigma band around the known value, or a fixed fraction gate), so a report
for a given (spec, trials, seed) triple is bit-for-bit reproducible across
backends and thread counts.

Randomness discipline: trial t of an experiment seeded with s draws from a
dedicated Philox stream keyed by (s, t).  Trials never share a stream, which
is what makes thread-parallel execution order-independent.
"""

from __future__ import annotations

import csv
import functools
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .bruhat import big_cell_mask
from .lietype import LieParams, big_cell_fraction, params_for
from .matgroup import (
    DEFAULT_ENUM_CAP,
    GroupSpec,
    Mat,
    SubgroupId,
    _random_sl_batch,
    all_perms,
    canonical_pack,
    conjugate_batch,
    enumerate_subgroup,
    group_order,
    subgroup_mats,
    weyl_rep,
)
from .setprod import (
    DEFAULT_WORK_CAP,
    ElemSet,
    iterated_product,
    product,
    times_element,
)


# ---------------------------------------------------------------------------
# gates and seeding


@dataclass(frozen=True)
class Gates:
    """Acceptance thresholds, kept rational so comparisons stay exact."""

    sigma_band: Fraction = Fraction(3)
    triple_fraction_min: Fraction = Fraction(9, 10)
    coverage_fraction_min: Fraction = Fraction(19, 20)


DEFAULT_GATES = Gates()

_GATE_FIELDS = ("sigma_band", "triple_fraction_min", "coverage_fraction_min")


def parse_gates(text: str) -> Gates:
    """key = value lines; values are parsed exactly (0.9 means 9/10)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep or not val.strip():
            raise ValueError(f"gates line {lineno}: expected key=value, got {raw!r}")
        if key not in _GATE_FIELDS:
            raise ValueError(f"gates line {lineno}: unknown gate {key!r}")
        values[key] = Fraction(val.strip())
    return Gates(**values)


@dataclass(frozen=True)
class TrialRng:
    """One Philox stream per (master seed, trial index) pair."""

    master_seed: int
    stream_index: int

    def __post_init__(self):
        if not 0 <= self.master_seed < 1 << 64:
            raise ValueError("master seed must be a 64-bit unsigned integer")
        if not 0 <= self.stream_index < 1 << 64:
            raise ValueError("stream index must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        key = (self.master_seed << 64) | self.stream_index
        return np.random.Generator(np.random.Philox(key=key))


def derive_seed(master: int, *path: int) -> int:
    """A named 64-bit subseed, stable across platforms."""
    ss = np.random.SeedSequence(entropy=[int(master), *(int(p) for p in path)])
    return int(ss.generate_state(1, np.uint64)[0])


def map_trials(trials: int, threads: int, fn: Callable[[int], object]) -> list:
    """fn over range(trials), results in trial order regardless of threads."""
    if trials < 0:
        raise ValueError("trial count must be nonnegative")
    if threads <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


# ---------------------------------------------------------------------------
# reports


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _csv_cell(value):
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class ExperimentReport:
    experiment: str
    spec: str
    seed: Optional[int]
    trials: int
    passed: bool
    exact_value: Optional[Fraction] = None
    empirical_value: Optional[Fraction] = None
    bound_value: object = None
    runtime_ms: Optional[float] = None
    extra: dict = field(default_factory=dict)
    per_trial: dict = field(default_factory=dict)

    def to_doc(self, no_timing: bool = False, include_per_trial: bool = False) -> dict:
        doc = {
            "experiment": self.experiment,
            "spec": self.spec,
            "seed": None if self.seed is None else int(self.seed),
            "trials": int(self.trials),
            "pass": bool(self.passed),
        }
        if self.exact_value is not None:
            doc["exact_value"] = _jsonable(self.exact_value)
        if self.empirical_value is not None:
            doc["empirical_value"] = _jsonable(self.empirical_value)
        if self.bound_value is not None:
            doc["bound_value"] = _jsonable(self.bound_value)
        if self.runtime_ms is not None and not no_timing:
            doc["runtime_ms"] = round(float(self.runtime_ms), 3)
        if self.extra:
            doc["extra"] = _jsonable(self.extra)
        if include_per_trial and self.per_trial:
            doc["per_trial"] = _jsonable(self.per_trial)
        return doc

    def csv_text(self) -> str:
        """Per-trial rows: trial_index, seed_stream, then metric columns."""
        if not self.per_trial:
            raise ValueError(f"experiment {self.experiment} keeps no per-trial data")
        names = sorted(self.per_trial)
        cols = {k: np.asarray(self.per_trial[k]) for k in names}
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["trial_index", "seed_stream", *names])
        for t in range(self.trials):
            writer.writerow([t, t, *(_csv_cell(cols[k][t]) for k in names)])
        return buf.getvalue()


def _finish(report: ExperimentReport, t0: float) -> ExperimentReport:
    report.runtime_ms = (time.perf_counter() - t0) * 1000.0
    return report


# ---------------------------------------------------------------------------
# exact product-decomposition experiments


def verify_uuuv(
    spec: GroupSpec,
    work_cap: int = DEFAULT_WORK_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> ExperimentReport:
    """Exact check that the four-fold product U V U V fills the group.

    Only meaningful in a centerless group: for an SL variant with nontrivial
    center the product of unipotent sets cannot separate central cosets, so
    such specs are refused rather than silently failed.
    """
    t0 = time.perf_counter()
    center = math.gcd(spec.n, spec.q - 1)
    if spec.variant == "SL" and center != 1:
        raise ValueError(
            f"{spec.name} has a center of order {center}; run the PSL variant"
        )
    u = enumerate_subgroup(spec, SubgroupId("U"), enum_cap)
    v = enumerate_subgroup(spec, SubgroupId("V"), enum_cap)
    order = group_order(spec)
    uv = product(u, v, work_cap)
    uvu = product(uv, u, work_cap)
    uvuv = product(uvu, v, work_cap)
    report = ExperimentReport(
        experiment="uuuv",
        spec=spec.name,
        seed=None,
        trials=0,
        passed=len(uvuv) == order,
        exact_value=Fraction(order),
        empirical_value=Fraction(len(uvuv)),
        extra={
            "group_order": order,
            "sizes": {"U": len(u), "UV": len(uv), "UVU": len(uvu), "UVUV": len(uvuv)},
        },
    )
    return _finish(report, t0)


def verify_toffoli(
    spec: GroupSpec,
    work_cap: int = DEFAULT_WORK_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> ExperimentReport:
    """U V U translated by Weyl representatives covers the group.

    Checks both the exact cover (the union over w of (UVU) n_w is everything)
    and the counting consequence |UVU| * |W| >= |G|.
    """
    t0 = time.perf_counter()
    u = enumerate_subgroup(spec, SubgroupId("U"), enum_cap)
    v = enumerate_subgroup(spec, SubgroupId("V"), enum_cap)
    order = group_order(spec)
    uvu = product(product(u, v, work_cap), u, work_cap)
    union = None
    for w in all_perms(spec.n):
        shifted = times_element(uvu, weyl_rep(spec, w), work_cap)
        union = shifted.codes if union is None else np.union1d(union, shifted.codes)
    weyl_order = math.factorial(spec.n)
    covers = int(union.shape[0]) == order
    counting = len(uvu) * weyl_order >= order
    report = ExperimentReport(
        experiment="toffoli",
        spec=spec.name,
        seed=None,
        trials=0,
        passed=covers and counting,
        exact_value=Fraction(order),
        empirical_value=Fraction(int(union.shape[0])),
        extra={
            "group_order": order,
            "uvu_size": len(uvu),
            "weyl_order": weyl_order,
            "union_size": int(union.shape[0]),
            "counting_bound_holds": counting,
        },
    )
    return _finish(report, t0)


# ---------------------------------------------------------------------------
# Monte Carlo: big cell membership and trivial Sylow intersections


def opposite_pair_prob(
    spec: GroupSpec,
    trials: int,
    seed: int,
    gates: Gates = DEFAULT_GATES,
    threads: int = 1,
) -> ExperimentReport:
    """Empirical frequency of big-cell elements against the exact value.

    For each uniform g, membership of g in the dense Bruhat cell is decided
    by corner minors, and independently U^g is intersected with U.  Big-cell
    membership must imply a trivial intersection (that implication is checked
    per trial), the big-cell frequency must sit inside the sigma band around
    |B|^2 / (|G| |H|), and the trivial-intersection frequency can only exceed
    the big-cell one, so it is held to the same band from below.
    """
    t0 = time.perf_counter()
    if trials < 1:
        raise ValueError("need at least one trial")
    params = params_for("A", spec.n - 1)
    exact = big_cell_fraction(params, spec.q)

    def draw(t: int) -> np.ndarray:
        return _random_sl_batch(spec, TrialRng(seed, t).generator(), 1)[0]

    gs = np.stack(map_trials(trials, threads, draw))
    in_cell = big_cell_mask(spec, gs)

    u_mats = _sylow_base(spec)
    u_codes = np.sort(canonical_pack(spec, u_mats))

    def trivial(t: int) -> bool:
        conj = conjugate_batch(spec, u_mats, gs[t])
        codes = canonical_pack(spec, conj)
        return int(np.isin(codes, u_codes).sum()) == 1

    triv = np.array(map_trials(trials, threads, trivial), dtype=bool)

    emp = Fraction(int(in_cell.sum()), trials)
    triv_frac = Fraction(int(triv.sum()), trials)
    band = gates.sigma_band**2 * exact * (1 - exact) / trials
    band_ok = (emp - exact) ** 2 <= band
    triv_ok = triv_frac >= exact or (exact - triv_frac) ** 2 <= band
    implication = bool(np.all(triv | ~in_cell))
    report = ExperimentReport(
        experiment="opposite_pair",
        spec=spec.name,
        seed=seed,
        trials=trials,
        passed=band_ok and triv_ok and implication,
        exact_value=exact,
        empirical_value=emp,
        extra={
            "big_cell_hits": int(in_cell.sum()),
            "trivial_intersection_hits": int(triv.sum()),
            "trivial_intersection_fraction": triv_frac,
            "big_cell_implies_trivial": implication,
            "band_ok": band_ok,
            "unipotent_order": int(u_mats.shape[0]),
        },
        per_trial={
            "in_big_cell": in_cell.astype(np.int8),
            "trivial_intersection": triv.astype(np.int8),
        },
    )
    return _finish(report, t0)


# ---------------------------------------------------------------------------
# Monte Carlo: products of Sylow conjugates


@functools.lru_cache(maxsize=32)
def _sylow_base(spec: GroupSpec) -> np.ndarray:
    mats = subgroup_mats(spec, SubgroupId("U"))
    mats.setflags(write=False)
    return mats


def conjugated_sylow(spec: GroupSpec, g) -> ElemSet:
    """U^g as an element set; g may be a Mat or a raw entry array."""
    entries = g.entries if isinstance(g, Mat) else np.asarray(g, dtype=np.uint8)
    return ElemSet.from_mats(spec, conjugate_batch(spec, _sylow_base(spec), entries))


def triple_product_size(spec: GroupSpec, g1, g2, g3, work_cap: int = DEFAULT_WORK_CAP) -> int:
    """|U^g1 U^g2 U^g3| by exact set product."""
    a = conjugated_sylow(spec, g1)
    b = conjugated_sylow(spec, g2)
    c = conjugated_sylow(spec, g3)
    return len(product(product(a, b, work_cap), c, work_cap))


def _triple_threshold(params: LieParams, q: int) -> tuple[int, int]:
    """(numerator power, denominator) of the squared size threshold.

    A triple product is counted as large when size^2 * d * |W| >= q^(4M+l).
    """
    num = q ** (4 * params.M + params.l)
    den = params.d_of(q) * params.weyl_order
    return num, den


def _threshold_root(num: int, den: int):
    """sqrt(num/den) as a Fraction when it is rational, else a float."""
    s = math.isqrt(num * den)
    if s * s == num * den:
        return Fraction(s, den)
    return math.sqrt(num / den)


def triple_product_stats(
    spec: GroupSpec,
    trials: int,
    seed: int,
    gates: Gates = DEFAULT_GATES,
    threads: int = 1,
    work_cap: int = DEFAULT_WORK_CAP,
) -> ExperimentReport:
    """Distribution of |U^g1 U^g2 U^g3| over independent uniform triples.

    A trial counts as large when the squared size clears q^(4M+l) / (d |W|);
    the gate asks for at least the configured fraction of large trials.
    """
    t0 = time.perf_counter()
    if trials < 1:
        raise ValueError("need at least one trial")
    params = params_for("A", spec.n - 1)
    num, den = _triple_threshold(params, spec.q)

    def one(t: int) -> tuple[int, bool]:
        rng = TrialRng(seed, t).generator()
        gs = _random_sl_batch(spec, rng, 3)
        a = conjugated_sylow(spec, gs[0])
        b = conjugated_sylow(spec, gs[1])
        c = conjugated_sylow(spec, gs[2])
        # a collision of adjacent conjugates collapses that pair to one factor
        collision = a == b or b == c
        size = len(product(product(a, b, work_cap), c, work_cap))
        return size, collision

    results = map_trials(trials, threads, one)
    sizes = np.array([r[0] for r in results], dtype=np.int64)
    collided = np.array([r[1] for r in results], dtype=bool)
    meets = np.array([s * s * den >= num for s in sizes.tolist()], dtype=bool)
    emp = Fraction(int(meets.sum()), trials)
    values, counts = np.unique(sizes, return_counts=True)
    report = ExperimentReport(
        experiment="triple_product",
        spec=spec.name,
        seed=seed,
        trials=trials,
        passed=emp >= gates.triple_fraction_min,
        empirical_value=emp,
        bound_value=_threshold_root(num, den),
        extra={
            "group_order": group_order(spec),
            "large_trials": int(meets.sum()),
            "adjacent_collisions": int(collided.sum()),
            "histogram": {str(int(v)): int(c) for v, c in zip(values, counts)},
            "fraction_gate": gates.triple_fraction_min,
        },
        per_trial={
            "product_size": sizes,
            "meets_bound": meets.astype(np.int8),
            "adjacent_collision": collided.astype(np.int8),
        },
    )
    return _finish(report, t0)


# ---------------------------------------------------------------------------
# the product-fills-the-group criterion


def bnp_criterion(
    sizes, order: int, rep_bound: int = 2, t: Optional[int] = None
) -> dict:
    """Does prod(sizes) >= |G|^t / rep_bound^(t-2)?

    When rep_bound is at most the smallest nontrivial complex representation
    dimension of the group, a yes guarantees the t-fold product of the
    underlying sets is the whole group.  Computed over exact integers.
    t defaults to the number of sizes and must match it when given.
    """
    if t is None:
        t = len(sizes)
    elif t != len(sizes):
        raise ValueError(f"t = {t} does not match {len(sizes)} sizes")
    if t < 3:
        raise ValueError("criterion needs at least three factors")
    if rep_bound < 1:
        raise ValueError("representation bound must be positive")
    lhs = 1
    for s in sizes:
        lhs *= int(s)
    rhs = Fraction(int(order) ** t, int(rep_bound) ** (t - 2))
    return {"t": t, "lhs": lhs, "rhs": rhs, "holds": Fraction(lhs) >= rhs}


def bnp_exponent_check(params: LieParams, t: int) -> dict:
    """Exponent comparison behind the choice of eleven factors.

    A t-fold product of typical Sylow-conjugate triples carries exponent
    (2M + l/2) t, while the criterion needs (2M + l) t - l (t - 2); the
    former wins exactly for t > 4.  Returned as exact rationals in t.
    """
    if t < 1:
        raise ValueError("factor count must be positive")
    lhs = (2 * Fraction(params.M) + Fraction(params.l, 2)) * t
    rhs = Fraction((2 * params.M + params.l) * t - params.l * (t - 2))
    return {"t": t, "lhs_exponent": lhs, "rhs_exponent": rhs, "holds": lhs > rhs}


def _block_sizes(spec: GroupSpec, sets: list[ElemSet], work_cap: int) -> list[int]:
    """Sizes of the five endpoint-sharing triple blocks over eleven sets.

    Blocks (0,1,2), (2,3,4), ... share endpoints; since each factor is a
    subgroup, the product of the five blocks equals the eleven-fold product.
    """
    sizes = []
    for b in range(5):
        blk = product(
            product(sets[2 * b], sets[2 * b + 1], work_cap), sets[2 * b + 2], work_cap
        )
        sizes.append(len(blk))
    return sizes


def coverage_prob(
    spec: GroupSpec,
    k: int,
    trials: int,
    seed: int,
    gates: Gates = DEFAULT_GATES,
    threads: int = 1,
    work_cap: int = DEFAULT_WORK_CAP,
) -> ExperimentReport:
    """Frequency with which k random Sylow conjugates multiply to everything.

    k = 11 is the calibrated setting: it gates on the configured coverage
    fraction and additionally tracks the five-block size criterion, whose
    firing must imply coverage trial by trial.  Other k are informational.
    """
    t0 = time.perf_counter()
    if trials < 1:
        raise ValueError("need at least one trial")
    if k < 1:
        raise ValueError("need at least one factor")
    order = group_order(spec)

    def one(t: int):
        rng = TrialRng(seed, t).generator()
        gs = _random_sl_batch(spec, rng, k)
        sets = [conjugated_sylow(spec, gs[i]) for i in range(k)]
        blocks_hold = None
        if k == 11:
            crit = bnp_criterion(_block_sizes(spec, sets, work_cap), order)
            blocks_hold = bool(crit["holds"])
        acc = iterated_product(sets, work_cap=work_cap, stop_order=order)
        return len(acc) == order, blocks_hold

    results = map_trials(trials, threads, one)
    covered = np.array([r[0] for r in results], dtype=bool)
    frac = Fraction(int(covered.sum()), trials)
    extra = {
        "k": k,
        "group_order": order,
        "covered_trials": int(covered.sum()),
    }
    per_trial = {"covered": covered.astype(np.int8)}
    if k == 11:
        blocks = np.array([r[1] for r in results], dtype=bool)
        sound = bool(np.all(covered | ~blocks))
        extra["five_block_criterion_hits"] = int(blocks.sum())
        extra["criterion_implies_coverage"] = sound
        per_trial["five_block_criterion"] = blocks.astype(np.int8)
        passed = frac >= gates.coverage_fraction_min and sound
    else:
        extra["gated"] = False
        passed = True
    report = ExperimentReport(
        experiment="coverage",
        spec=spec.name,
        seed=seed,
        trials=trials,
        passed=passed,
        empirical_value=frac,
        bound_value=gates.coverage_fraction_min if k == 11 else None,
        extra=extra,
        per_trial=per_trial,
    )
    return _finish(report, t0)


def criterion_soundness_test(
    spec: GroupSpec,
    trials: int,
    seed: int,
    rep_bound: int = 2,
    threads: int = 1,
    work_cap: int = DEFAULT_WORK_CAP,
) -> ExperimentReport:
    """Every firing of the five-block criterion must come with full coverage.

    Draws eleven conjugators per trial; when the size criterion fires, the
    eleven-fold product is computed exactly and must equal the group.  The
    pass condition is zero violations.
    """
    t0 = time.perf_counter()
    if trials < 1:
        raise ValueError("need at least one trial")
    order = group_order(spec)

    def one(t: int):
        rng = TrialRng(seed, t).generator()
        gs = _random_sl_batch(spec, rng, 11)
        sets = [conjugated_sylow(spec, gs[i]) for i in range(11)]
        crit = bnp_criterion(_block_sizes(spec, sets, work_cap), order, rep_bound)
        if not crit["holds"]:
            return False, True
        acc = iterated_product(sets, work_cap=work_cap, stop_order=order)
        return True, len(acc) == order

    results = map_trials(trials, threads, one)
    fired = np.array([r[0] for r in results], dtype=bool)
    sound = np.array([r[1] for r in results], dtype=bool)
    violations = int((fired & ~sound).sum())
    report = ExperimentReport(
        experiment="criterion_soundness",
        spec=spec.name,
        seed=seed,
        trials=trials,
        passed=violations == 0,
        extra={
            "group_order": order,
            "rep_bound": rep_bound,
            "criterion_fired": int(fired.sum()),
            "violations": violations,
        },
        per_trial={
            "criterion_fired": fired.astype(np.int8),
            "covered_when_fired": sound.astype(np.int8),
        },
    )
    return _finish(report, t0)


def random_subset(spec: GroupSpec, size: int, rng: np.random.Generator) -> ElemSet:
    """An element set built from `size` uniform draws (duplicates collapse)."""
    return ElemSet.from_mats(spec, _random_sl_batch(spec, rng, size))
