"""Why fewer than five regions cannot work.

``three_region_certificate`` is an exact argument: solving the jump conditions
of a single interior region symbolically forces the second diagonal entry of
the subsolution matrix to vanish, so the determinant condition would demand
``0 > U12**2``.

``n_region_scan`` only gathers numerical evidence. It samples the free
parameters of a mirror-symmetric ansatz with one or two interior regions and
runs the verifier on each sample. It never proves anything.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

import sympy as sp

from .pressure import PotentialContext, PressureLaw
from .reduction import FanSubsolution
from .states import FanPartition, FanState, SymmetricContactDatum, TracelessSym2, boundary_states
from .verifier import Tolerances, VerificationReport, verify

EVIDENCE_LABEL = "numerical evidence (grid scan, not a proof)"


@dataclass(frozen=True)
class ContradictionCertificate:
    forced: tuple[tuple[str, float], ...]
    forced_symbolic: tuple[tuple[str, str], ...]
    det_lhs: float
    det_lhs_symbolic: str
    det_rhs_lower_bound: float
    conclusion: str

    def to_dict(self) -> dict:
        return {
            "forced": {k: v for k, v in self.forced},
            "forced_symbolic": {k: v for k, v in self.forced_symbolic},
            "det_lhs": self.det_lhs,
            "det_lhs_symbolic": self.det_lhs_symbolic,
            "det_rhs_lower_bound": self.det_rhs_lower_bound,
            "conclusion": self.conclusion,
        }


def _three_region_algebra():
    mu0, mu1 = sp.symbols("mu0 mu1", real=True)
    rho0, u0, p0 = sp.symbols("rho0 u0 p_rho0", positive=True)
    rho1, m11, m12, u11, u12, q1 = sp.symbols("rho1 m11 m12 U11 U12 q1", real=True)
    w = sp.Symbol("U11_minus_q1", real=True)

    # exterior states: m = (-+rho0 u0, 0) so -U11 + q = p(rho0) on both sides
    mass = [
        sp.Eq(mu0 * (rho0 - rho1), 0 - m12),
        sp.Eq(mu1 * (rho1 - rho0), m12 - 0),
    ]
    sol = sp.solve(mass, [rho1, m12], dict=True)
    if len(sol) != 1:
        raise RuntimeError("mass jump system did not have a unique solution")
    sol = sol[0]
    # the unique solution needs mu0 != mu1, which the speed order guarantees
    m2_eq = sp.Eq(mu0 * (0 - m12), p0 + w).subs(sol)
    w_val = sp.solve(m2_eq, w)[0]

    # p(rho1) = p(rho0) because rho1 = rho0 was forced
    p1 = p0
    second_factor = (m12**2 / rho1 + w + p1).subs(sol).subs(w, w_val)
    first_factor = (m11**2 / rho1 - w + p1 - 2 * q1).subs(sol).subs(w, w_val)
    det_lhs = sp.simplify(first_factor * second_factor)
    return {
        "rho1": sol[rho1],
        "m12": sol[m12],
        "U11 - q1": w_val,
        "det_lhs": det_lhs,
        "second_factor": sp.simplify(second_factor),
        "p0": p0,
        "rho0": rho0,
    }


def three_region_certificate(datum: SymmetricContactDatum, law: PressureLaw) -> ContradictionCertificate:
    alg = _three_region_algebra()
    p0_val = law.p(datum.rho0)
    values = {alg["rho0"]: datum.rho0, alg["p0"]: p0_val}
    forced = (
        ("rho1", float(alg["rho1"].subs(values))),
        ("m1_2", float(alg["m12"].subs(values))),
        ("U1_11 - q1", float(alg["U11 - q1"].subs(values))),
    )
    det_lhs = alg["det_lhs"]
    # structural zero: the simplified expression is the integer 0, not a float
    infeasible = det_lhs == 0
    return ContradictionCertificate(
        forced=forced,
        forced_symbolic=(
            ("rho1", str(alg["rho1"])),
            ("m1_2", str(alg["m12"])),
            ("U1_11 - q1", str(alg["U11 - q1"])),
        ),
        det_lhs=float(det_lhs.subs(values)) if not infeasible else 0.0,
        det_lhs_symbolic=str(det_lhs),
        det_rhs_lower_bound=0.0,
        conclusion="infeasible" if infeasible else "inconclusive",
    )


@dataclass(frozen=True)
class ScanGrid:
    """Per-parameter ``(low, high, count)`` ranges plus optional random samples."""

    ranges: tuple[tuple[str, float, float, int], ...]
    n_random: int = 0
    cap: int = 1_000_000

    def __post_init__(self):
        errors = []
        for name, lo, hi, count in self.ranges:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                errors.append(f"{name}: need finite low <= high")
            if count < 1:
                errors.append(f"{name}: count must be >= 1")
        if self.n_random < 0:
            errors.append("n_random must be >= 0")
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def cells(self) -> int:
        return math.prod(r[3] for r in self.ranges)

    def points(self, seed: int):
        axes = [_linspace(lo, hi, count) for _, lo, hi, count in self.ranges]
        yield from itertools.product(*axes)
        rng = random.Random(seed)
        for _ in range(self.n_random):
            yield tuple(rng.uniform(lo, hi) for _, lo, hi, _ in self.ranges)


def _linspace(lo: float, hi: float, count: int) -> list[float]:
    if count == 1:
        return [lo]
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


class GridTooLarge(ValueError):
    pass


def default_scan_grid(n: int, datum: SymmetricContactDatum, law: PressureLaw) -> ScanGrid:
    p0 = law.p(datum.rho0)
    kin = 0.5 * datum.rho0 * datum.u0**2
    span = 4 * (p0 + kin + 1)
    if n == 1:
        return ScanGrid((("s", 0.02, 5.0, 100), ("q1", p0 - span, p0 + span, 100)), n_random=0)
    if n == 2:
        mom = abs(datum.rho0 * datum.u0)
        return ScanGrid(
            (
                ("b", 0.02, 5.0, 40),
                ("m11", -3 * mom - 1, 3 * mom + 1, 50),
                ("q1", p0 - span, p0 + span, 50),
            ),
            n_random=0,
        )
    raise ValueError(f"n_region_scan handles 1 or 2 interior regions, got {n}; use construct for 3")


def symmetric_candidate(
    n: int, point: tuple[float, ...], datum: SymmetricContactDatum, law: PressureLaw, ctx: PotentialContext
) -> FanSubsolution:
    """Mirror-symmetric candidate whose jump equalities hold by construction.

    ``n = 1``: speeds ``(-s, s)``; the single region is its own mirror image,
    so ``m = 0`` and ``F = 0``; free parameters ``(s, q1)``.

    ``n = 2``: speeds ``(-b, 0, b)``; region 2 mirrors region 1; free
    parameters ``(b, m11, q1)``. The mass jump across ``y = 0`` forces
    ``m1_2 = 0`` and hence ``rho1 = rho0``.
    """
    rho0, u0 = datum.rho0, datum.u0
    p0 = law.p(rho0)
    left, right = boundary_states(datum, law, ctx)
    if n == 1:
        s, q1 = point
        region = FanState(rho0, (0.0, 0.0), TracelessSym2(q1 - p0, -s * rho0 * u0), q1, (0.0, 0.0))
        return FanSubsolution(FanPartition((-s, s)), left, right, (region,))
    if n == 2:
        b, m11, q1 = point
        e1 = q1 + law.potential(rho0, ctx) - p0
        f12 = -b * (e1 - 0.5 * rho0 * u0 * u0 - law.potential(rho0, ctx))
        r1 = FanState(rho0, (m11, 0.0), TracelessSym2(q1 - p0, -b * (rho0 * u0 + m11)), q1, (0.0, f12))
        r2 = FanState(rho0, (-m11, 0.0), r1.U, q1, (0.0, -f12))
        return FanSubsolution(FanPartition((-b, 0.0, b)), left, right, (r1, r2))
    raise ValueError(f"symmetric ansatz covers n in (1, 2), got {n}")


@dataclass
class ScanSummary:
    n: int
    cells: int
    feasible: int
    pass_counts: dict[str, int]
    best_point: tuple[float, ...] | None
    best_min_slack: float
    best_det_slack: float
    parameters: tuple[str, ...]
    seed: int
    label: str = EVIDENCE_LABEL
    ansatz: str = ""
    feasible_points: list[tuple[float, ...]] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.feasible == 0:
            return "no feasible point found"
        return f"{self.feasible} feasible point(s) found"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "ansatz": self.ansatz,
            "interior_regions": self.n,
            "parameters": list(self.parameters),
            "seed": self.seed,
            "cells": self.cells,
            "feasible": self.feasible,
            "verdict": self.verdict,
            "pass_counts": dict(sorted(self.pass_counts.items())),
            "best": {
                "point": None if self.best_point is None else list(self.best_point),
                "min_slack": self.best_min_slack,
                "det_slack": self.best_det_slack,
            },
        }


def _min_strict_slack(report: VerificationReport) -> float:
    slacks = [c.slack for c in report.conditions if c.kind.value != "equality"]
    return min(slacks) if slacks else math.inf


def n_region_scan(
    datum: SymmetricContactDatum,
    law: PressureLaw,
    n: int,
    grid: ScanGrid | None = None,
    seed: int = 0,
    ctx: PotentialContext | None = None,
    tols: Tolerances | None = None,
) -> ScanSummary:
    if n not in (1, 2):
        raise ValueError(f"n_region_scan handles 1 or 2 interior regions, got {n}; use construct for 3")
    ctx = ctx or PotentialContext(datum.rho0)
    grid = grid or default_scan_grid(n, datum, law)
    total = grid.cells + grid.n_random
    if total > grid.cap:
        raise GridTooLarge(f"scan of {total} cells exceeds the cap of {grid.cap}")
    counts: dict[str, int] = {}
    feasible = []
    best = None
    best_key = (-math.inf,)
    best_det = -math.inf
    cells = 0
    for point in grid.points(seed):
        cells += 1
        cand = symmetric_candidate(n, point, datum, law, ctx)
        report = verify(cand, law, ctx, datum=datum, tols=tols)
        for c in report.conditions:
            if c.passed:
                counts[c.id] = counts.get(c.id, 0) + 1
        if report.all_pass:
            feasible.append(point)
        key = (_min_strict_slack(report),)
        if key > best_key:
            best_key, best = key, point
            best_det = min(c.slack for c in report.conditions if c.id.startswith("subsol.det"))
    ansatz = (
        "mirror-symmetric, speeds (-s, s), region 1 self-mirrored"
        if n == 1
        else "mirror-symmetric, speeds (-b, 0, b), region 2 mirrors region 1"
    )
    return ScanSummary(
        n=n,
        cells=cells,
        feasible=len(feasible),
        pass_counts=counts,
        best_point=best,
        best_min_slack=best_key[0],
        best_det_slack=best_det,
        parameters=tuple(r[0] for r in grid.ranges),
        seed=seed,
        ansatz=ansatz,
        feasible_points=feasible,
    )
