"""Signed-slack checker for the algebraic fan-subsolution system.

Given ``N`` interior states, ``N + 1`` interface speeds and the two exterior
states, this emits one row per condition:

* ``speed.order.pair{i}``: ``mu_i < mu_{i+1}``
* ``rh.mass.iface{i}``, ``rh.m1.iface{i}``, ``rh.m2.iface{i}``: jump equalities
* ``entropy.iface{i}``: energy-flux inequality (non-strict)
* ``subsol.tr.region{k}``, ``subsol.det.region{k}``: strict matrix conditions
* ``density.region{k}``: ``rho_k > 0``

Everything is recomputed from the raw ``(rho, m, U, q, F)`` values and the
pressure law. Failures are returned as data, never raised.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum

from .pressure import PotentialContext, PressureLaw
from .reduction import FanSubsolution
from .states import FanState, Sym2, SymmetricContactDatum, boundary_states, lambda_max, subsolution_matrix


class Kind(str, Enum):
    EQUALITY = "equality"
    STRICT = "strict"
    NONSTRICT = "nonstrict"


class StructureError(ValueError):
    """Candidate is malformed (speed count does not match region count)."""


@dataclass(frozen=True)
class Tolerances:
    tol_eq: float = 1e-9
    tol_strict: float = 1e-12

    def __post_init__(self):
        if not (self.tol_eq >= 0 and self.tol_strict >= 0):
            raise ValueError("tolerances must be non-negative")


@dataclass(frozen=True)
class ConditionResult:
    id: str
    kind: Kind
    lhs: float
    rhs: float
    slack: float
    passed: bool

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.lhs), abs(self.rhs))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    conditions: list[ConditionResult]
    tolerances: Tolerances
    context: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __getitem__(self, cid: str) -> ConditionResult:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def failing(self) -> list[ConditionResult]:
        return [c for c in self.conditions if not c.passed]

    def to_dict(self) -> dict:
        return {
            "all_pass": self.all_pass,
            "tolerances": asdict(self.tolerances),
            "context": self.context,
            "conditions": [c.to_dict() for c in self.conditions],
        }


def _equality(cid: str, lhs: float, rhs: float, tols: Tolerances) -> ConditionResult:
    slack = lhs - rhs
    ok = abs(slack) <= tols.tol_eq * max(1.0, abs(lhs), abs(rhs))
    return ConditionResult(cid, Kind.EQUALITY, lhs, rhs, slack, ok)


def _less(cid: str, lhs: float, rhs: float, tols: Tolerances, strict: bool = True) -> ConditionResult:
    return _ordered(cid, lhs, rhs, rhs - lhs, tols, strict)


def _greater(cid: str, lhs: float, rhs: float, tols: Tolerances, strict: bool = True) -> ConditionResult:
    return _ordered(cid, lhs, rhs, lhs - rhs, tols, strict)


def _ordered(cid, lhs, rhs, slack, tols, strict):
    if strict:
        ok = slack > tols.tol_strict * (1.0 + abs(lhs) + abs(rhs))
        kind = Kind.STRICT
    else:
        ok = slack >= -tols.tol_eq * max(1.0, abs(lhs), abs(rhs))
        kind = Kind.NONSTRICT
    # NaN compares false everywhere, so it can never pass
    return ConditionResult(cid, kind, lhs, rhs, slack, bool(ok) and not math.isnan(slack))


def _entropy_density(s: FanState, law: PressureLaw, ctx: PotentialContext) -> float:
    return s.q + law.potential(s.rho, ctx) - law.p(s.rho)


def verify(
    candidate: FanSubsolution,
    law: PressureLaw,
    ctx: PotentialContext,
    datum: SymmetricContactDatum | None = None,
    tols: Tolerances | None = None,
) -> VerificationReport:
    """Check every condition of the algebraic system for ``candidate``.

    Parameters
    ----------
    candidate : FanSubsolution
        Speeds and states. Its exterior states are used unless ``datum`` is given.
    law, ctx : pressure law and potential reference density.
    datum : SymmetricContactDatum, optional
        When given, exterior states are rebuilt from it rather than read from
        the candidate.
    tols : Tolerances, optional
    """
    tols = tols or Tolerances()
    speeds = tuple(candidate.partition.speeds)
    n = len(candidate.interior)
    if n < 1 or len(speeds) != n + 1:
        raise StructureError(f"{n} interior regions need {n + 1} speeds, got {len(speeds)}")

    if datum is not None:
        left, right = boundary_states(datum, law, ctx)
    else:
        left, right = candidate.left, candidate.right
    states = (left, *candidate.interior, right)

    out: list[ConditionResult] = []
    for i in range(n):
        out.append(_less(f"speed.order.pair{i}", speeds[i], speeds[i + 1], tols))

    energy = []
    for s in states:
        try:
            energy.append(_entropy_density(s, law, ctx))
        except (ValueError, ArithmeticError):
            energy.append(math.nan)

    for i, mu in enumerate(speeds):
        s, t = states[i], states[i + 1]
        out.append(_equality(f"rh.mass.iface{i}", mu * (s.rho - t.rho), s.m[1] - t.m[1], tols))
        out.append(_equality(f"rh.m1.iface{i}", mu * (s.m[0] - t.m[0]), s.U.u12 - t.U.u12, tols))
        out.append(
            _equality(
                f"rh.m2.iface{i}",
                mu * (s.m[1] - t.m[1]),
                -s.U.u11 + s.q + t.U.u11 - t.q,
                tols,
            )
        )
        out.append(
            _less(f"entropy.iface{i}", mu * (energy[i] - energy[i + 1]), s.F[1] - t.F[1], tols, strict=False)
        )

    for k, s in enumerate(candidate.interior, start=1):
        m1, m2 = s.m
        if s.rho > 0:
            try:
                M = subsolution_matrix(s, law)
                tr = (m1 * m1 + m2 * m2) / s.rho + 2 * (law.p(s.rho) - s.q)
                out.append(_less(f"subsol.tr.region{k}", tr, 0.0, tols))
                out.append(_greater(f"subsol.det.region{k}", M.m11 * M.m22, M.m12 * M.m12, tols))
            except (ValueError, ArithmeticError):
                out.extend(_undefined(k))
        else:
            out.extend(_undefined(k))
        out.append(_greater(f"density.region{k}", s.rho, 0.0, tols))

    context = {
        "law": law.describe(),
        "rho_star": ctx.rho_star,
        "datum": None if datum is None else {"rho0": datum.rho0, "u0": datum.u0},
        "interior_regions": n,
    }
    return VerificationReport(out, tols, context)


def _undefined(k: int) -> list[ConditionResult]:
    nan = math.nan
    return [
        ConditionResult(f"subsol.tr.region{k}", Kind.STRICT, nan, 0.0, nan, False),
        ConditionResult(f"subsol.det.region{k}", Kind.STRICT, nan, nan, nan, False),
    ]


@dataclass(frozen=True)
class EigenCheck:
    region: str
    lambda_max: float
    trace: float
    det: float
    agrees: bool
    marginal: bool

    def to_dict(self) -> dict:
        return asdict(self)


def crosscheck_state(state: FanState, law: PressureLaw, region: str = "", tol: float = 1e-10) -> EigenCheck:
    """Compare ``lambda_max < 0`` with ``trace < 0 and det > 0`` for one state.

    The row is marginal when the eigenvalue, the trace or the determinant lies
    within ``tol`` of zero; marginal rows are never counted as disagreement.
    """
    M = subsolution_matrix(state, law)
    return sign_agreement(M.m11, M.m12, M.m22, region=region, tol=tol)


def sign_agreement(m11: float, m12: float, m22: float, region: str = "", tol: float = 1e-10) -> EigenCheck:
    M = Sym2(m11, m12, m22)
    lam = lambda_max(M)
    tr, det = M.trace, M.det
    marginal = abs(lam) < tol or abs(tr) < tol or abs(det) < tol
    agrees = marginal or ((lam < 0) == (tr < 0 and det > 0))
    return EigenCheck(region, lam, tr, det, agrees, marginal)


def eigen_crosscheck(candidate: FanSubsolution, law: PressureLaw, tol: float = 1e-10) -> list[EigenCheck]:
    return [
        crosscheck_state(s, law, region=f"region{k}", tol=tol)
        for k, s in enumerate(candidate.interior, start=1)
    ]
