"""Sampled and exhaustive checks of the invariant against l-rank and Newton polygon.

Every record is computed independently from its seed or enumeration index, and
aggregation only counts and conjoins, so reports do not depend on the number of
worker processes.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import matrix as mx
from .dieudonne import (
    PelParams,
    canonical_mu_ordinary,
    format_module,
    from_F_block,
    hodge,
    random_module,
    validate,
)
from .hasse import mu_hasse, ver_rank_sequence
from .newton import (
    NewtonPolygon,
    enumerate_symmetric_polygons,
    is_symmetric,
    lies_on_or_above,
    mu_ordinary_polygon,
    newton_polygon,
    slope_zero_multiplicity,
)

__all__ = [
    "CensusRecord",
    "CensusReport",
    "BudgetExceeded",
    "RANDOM_CHECKS",
    "EXHAUSTIVE_CHECKS",
    "compute_verdicts",
    "run_random_census",
    "run_exhaustive_bt1",
    "rigidity_candidates",
    "verify_rigidity",
]

RANDOM_CHECKS = (
    "module_valid",
    "hasse_iff_max_ell_rank",
    "hasse_iff_mu_ordinary_polygon",
    "polygon_symmetric",
    "polygon_above_mu_ordinary",
    "ell_rank_is_slope_zero_multiplicity",
    "ver_ranks_bounded_and_stable",
)
EXHAUSTIVE_CHECKS = (
    "module_valid",
    "hasse_iff_max_ell_rank",
    "ver_ranks_bounded_and_stable",
)

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int, what: str = "matrices"):
        super().__init__(f"enumeration needs {required} {what}, budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class CensusRecord:
    sample: str
    ell_rank: int
    np: NewtonPolygon | None
    hasse_nonzero: bool
    hasse_value: str
    ver_ranks: tuple[int, ...]
    valid: bool
    verdicts: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.verdicts)

    @property
    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.verdicts if not ok]


def _stabilization_start(params: PelParams) -> int:
    # dim Omega = (a+b)r; ranks of iterates are constant from there on
    return params.n


def compute_verdicts(params: PelParams, ell_rank_: int, np: NewtonPolygon | None,
                     hasse_nonzero: bool, ver_ranks, valid: bool) -> tuple[tuple[str, bool], ...]:
    """Per-record checks, recomputable from the stored triple."""
    top = params.max_ell_rank
    start = _stabilization_start(params)
    tail = list(ver_ranks[start - 1:])
    stable = all(r <= top for r in ver_ranks) and len(set(tail)) <= 1
    out = [
        ("module_valid", valid),
        ("hasse_iff_max_ell_rank", hasse_nonzero == (ell_rank_ == top)),
    ]
    if np is not None:
        nord = mu_ordinary_polygon(params)
        out += [
            ("hasse_iff_mu_ordinary_polygon", hasse_nonzero == (np == nord)),
            ("polygon_symmetric", is_symmetric(np)),
            ("polygon_above_mu_ordinary", lies_on_or_above(np, nord)),
            ("ell_rank_is_slope_zero_multiplicity", ell_rank_ == slope_zero_multiplicity(np)),
        ]
    out.append(("ver_ranks_bounded_and_stable", stable))
    return tuple(out)


def _evaluate(params: PelParams, M, sample: str, with_polygon: bool) -> tuple[CensusRecord, str | None]:
    valid = not validate(M)
    H = hodge(M)
    h = mu_hasse(H)
    ranks = tuple(ver_rank_sequence(H))
    rank = ranks[-1] if ranks else 0
    np = newton_polygon(M) if with_polygon else None
    verdicts = compute_verdicts(params, rank, np, h.nonvanishing, ranks, valid)
    rec = CensusRecord(sample, rank, np, h.nonvanishing, str(h.value), ranks, valid, verdicts)
    return rec, (None if rec.passed else format_module(M))


@dataclass
class CensusReport:
    command: str
    params: PelParams
    sample: str
    records: list[CensusRecord]
    checks: tuple[str, ...]
    failures: list[tuple[CensusRecord, str]] = field(default_factory=list)

    @property
    def strata(self) -> list[tuple[tuple[int, str], int]]:
        counts = Counter((r.ell_rank, str(r.np) if r.np is not None else "-") for r in self.records)
        return sorted(counts.items())

    def check_passed(self, name: str) -> bool:
        return all(dict(r.verdicts).get(name, True) for r in self.records)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_text(self) -> str:
        p = self.params
        lines = [
            f"command: {self.command}",
            f"ell: {p.ell}", f"a: {p.a}", f"b: {p.b}", f"r: {p.r}", f"k: {p.k}", f"N: {p.N}",
            f"sample: {self.sample}",
            f"records: {len(self.records)}",
        ]
        for (rank, np), count in self.strata:
            lines.append(f"stratum[ell_rank={rank} np={np}]: {count}")
        for name in self.checks:
            lines.append(f"check.{name}: {'pass' if self.check_passed(name) else 'FAIL'}")
        lines.append(f"failures: {len(self.failures)}")
        for rec, module_text in self.failures:
            lines.append(f"failure[sample={rec.sample}]: {' '.join(rec.failed_checks)}")
            lines.extend("  " + ln for ln in module_text.splitlines())
        lines.append(f"verdict: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["seed", "ell_rank", "hasse_nonzero", "np"])
        for r in self.records:
            w.writerow([r.sample, r.ell_rank, str(r.hasse_nonzero).lower(),
                        str(r.np) if r.np is not None else ""])
        return buf.getvalue()


def _chunks(items: list, jobs: int) -> list[list]:
    size = max(1, -(-len(items) // (jobs * 4)))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _map(fn, params, chunks, jobs):
    if jobs <= 1 or len(chunks) <= 1:
        return [fn(params, c) for c in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, [params] * len(chunks), chunks))


def _random_chunk(params: PelParams, seeds: list[int]):
    return [_evaluate(params, random_module(params, s), str(s), True) for s in seeds]


def run_random_census(params: PelParams, count: int, seed0: int = 0, jobs: int = 1) -> CensusReport:
    """The canonical module (sample 0) plus ``count`` seeded random modules."""
    if count < 1:
        raise ValueError("count must be >= 1")
    results = [_evaluate(params, canonical_mu_ordinary(params), "canonical", True)]
    seeds = list(range(seed0, seed0 + count))
    for part in _map(_random_chunk, params, _chunks(seeds, jobs), jobs):
        results.extend(part)
    records = [r for r, _ in results]
    failures = [(r, text) for r, text in results if text is not None]
    sample = f"canonical + {count} random seeds [{seed0}, {seed0 + count})"
    return CensusReport("census-random", params, sample, records, RANDOM_CHECKS, failures)


def _exhaustive_chunk(params: PelParams, span: tuple[int, int]):
    res = params.ring
    elems = list(res.elements())
    q, n = len(elems), params.n
    target = params.b * params.r
    out = []
    for index in range(*span):
        digits = []
        i = index
        for _ in range(n * n):
            digits.append(elems[i % q])
            i //= q
        A = [digits[row * n:(row + 1) * n] for row in range(n)]
        if mx.rank(A) != target:
            continue
        out.append(_evaluate(params, from_F_block(params, A), str(index), False))
    return out


def run_exhaustive_bt1(params: PelParams, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> CensusReport:
    """Every A over F_{l^{2k}} of rank br, as a mod-l module (N = 1).

    B comes from the mod-l polarization rule in ``from_F_block``.  Newton
    polygons need a lift and are not computed here.
    """
    params = params.with_precision(1)
    q = params.ring.size
    total = q ** (params.n * params.n)
    if total > budget:
        raise BudgetExceeded(total, budget)
    step = max(1, -(-total // max(1, jobs * 16)))
    spans = [(i, min(total, i + step)) for i in range(0, total, step)]
    results = []
    for part in _map(_exhaustive_chunk, params, spans, jobs):
        results.extend(part)
    records = [r for r, _ in results]
    failures = [(r, text) for r, text in results if text is not None]
    sample = f"exhaustive: all {total} matrices over F_{q}, {len(records)} of rank {params.b * params.r}"
    return CensusReport("census-exhaustive", params, sample, records, EXHAUSTIVE_CHECKS, failures)


def rigidity_candidates(params: PelParams, max_height: int = 20) -> list[NewtonPolygon]:
    """Symmetric lattice polygons on or above N^ord with slope-0 multiplicity >= 2ar."""
    h = params.height
    if h > max_height:
        raise BudgetExceeded(h, max_height, "height")
    nord = mu_ordinary_polygon(params)
    return [P for P in enumerate_symmetric_polygons(h)
            if slope_zero_multiplicity(P) >= params.max_ell_rank and lies_on_or_above(P, nord)]


def verify_rigidity(params: PelParams, max_height: int = 20) -> bool:
    """The only candidate polygon is N^ord itself."""
    return rigidity_candidates(params, max_height) == [mu_ordinary_polygon(params)]
