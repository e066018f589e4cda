"""Deterministic choice of the symmetric parameters and the assembled subsolution.

The chain is ``b`` from ``p'(rho0)``, then ``eps`` and ``a`` by halving down a
dyadic ladder until the selection inequalities hold with a scale-aware margin,
then ``rho1``, ``q1``, ``q2``, ``m11`` in closed form, then reduction and
verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .pressure import PotentialContext, PressureDomainError, PressureLaw, dpotential_eval
from .reduction import FanSubsolution, SymmetricParameters, reduce
from .states import SymmetricContactDatum
from .verifier import Tolerances, VerificationReport, verify

ABS_MARGIN = 1e-14


class SelectionExhausted(RuntimeError):
    """No admissible value was found on the halving ladder."""


@dataclass(frozen=True)
class SelectorOptions:
    theta: float = 0.1
    eps_start: float | None = None  # None means rho0 / 2
    a_start: float | None = None  # None means b / 2
    max_halvings: int = 200

    def __post_init__(self):
        if not (0 < self.theta < 1):
            raise ValueError(f"theta must lie in (0, 1), got {self.theta!r}")
        if self.max_halvings < 1:
            raise ValueError("max_halvings must be >= 1")


@dataclass(frozen=True)
class Inequality:
    """Both sides of ``lhs < rhs`` (or ``lhs > rhs`` when ``greater``).

    ``offset`` is a quantity common to both sides. The margin is measured on
    ``lhs - offset`` and ``rhs - offset``, so a constant that cancels from the
    inequality cannot inflate it.
    """

    name: str
    lhs: float
    rhs: float
    greater: bool = False
    offset: float = 0.0

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs if self.greater else self.rhs - self.lhs

    def margin(self, theta: float) -> float:
        return theta * (abs(self.lhs - self.offset) + abs(self.rhs - self.offset)) / 2 + ABS_MARGIN

    def holds(self, theta: float) -> bool:
        # theta = 0 still demands slack > ABS_MARGIN > 0
        return self.slack >= self.margin(theta)


@dataclass(frozen=True)
class Epsilon:
    value: float
    check: Inequality
    tried: tuple[float, ...] = field(default=(), compare=False)


def choose_b(law: PressureLaw, rho0: float) -> float:
    return math.sqrt(law.dp(rho0) + 1.0)


def epsilon_condition(
    law: PressureLaw, datum: SymmetricContactDatum, ctx: PotentialContext, eps: float
) -> Inequality:
    rho0, u0 = datum.rho0, datum.u0
    low = rho0 - eps
    lhs = (
        eps * (u0 * u0 + 2 * dpotential_eval(law, rho0, ctx) + 3)
        + 2 * law.potential(low, ctx)
        - law.p(low)
        - 2 * law.potential(rho0, ctx)
        + law.p(rho0)
    )
    return Inequality("epsilon", lhs, 0.5 * rho0 * u0 * u0)


def choose_epsilon(
    law: PressureLaw,
    datum: SymmetricContactDatum,
    ctx: PotentialContext,
    opts: SelectorOptions | None = None,
) -> Epsilon:
    opts = opts or SelectorOptions()
    eps = opts.eps_start if opts.eps_start is not None else datum.rho0 / 2
    tried = []
    for _ in range(opts.max_halvings + 1):
        tried.append(eps)
        try:
            check = epsilon_condition(law, datum, ctx, eps)
        except PressureDomainError:
            # rho0 - eps left the tabulated range; a smaller eps may fit
            check = None
        if check is not None and check.holds(opts.theta):
            return Epsilon(eps, check, tuple(tried))
        eps /= 2
    raise SelectionExhausted(f"no eps found after {opts.max_halvings} halvings (last tried {tried[-1]!r})")


def compute_q2(law: PressureLaw, datum: SymmetricContactDatum, eps: float) -> float:
    rho0, u0 = datum.rho0, datum.u0
    return 0.5 * (law.p(rho0) + law.p(rho0 - eps) + 0.5 * rho0 * u0 * u0)


def a_conditions(
    law: PressureLaw,
    datum: SymmetricContactDatum,
    ctx: PotentialContext,
    b: float,
    eps: float,
    a: float,
) -> tuple[Inequality, Inequality, Inequality]:
    """The three small-``a`` inequalities, with ``h = a*eps/(b-a)`` the density jump."""
    rho0, u0 = datum.rho0, datum.u0
    h = a * eps / (b - a)
    rho1 = rho0 + h
    p0, dp0 = law.p(rho0), law.dp(rho0)
    dP0 = dpotential_eval(law, rho0, ctx)
    p_quot = (law.p(rho1) - p0) / h
    P_quot = (2 * law.potential(rho1, ctx) - 2 * law.potential(rho0, ctx)) / h
    # both sides of a1 and a2 share a term that leaves a gap of exactly 1 as
    # a -> 0; the offset removes it so the margin is attainable and, for a1,
    # independent of rho*
    a1 = Inequality("a1", P_quot - p_quot, 2 * dP0 - dp0 + 1, offset=2 * dP0 - dp0)
    a2 = Inequality("a2", p_quot * (1 + h / rho0), dp0 + 1, offset=dp0)
    abe = a * b * eps
    a3 = Inequality(
        "a3",
        (abe - 0.5 * rho0 * u0 * u0) * (-abe - p0 + law.p(rho0 - eps)),
        (a * u0 * (rho0 - eps)) ** 2,
        greater=True,
    )
    return a1, a2, a3


def choose_a(
    law: PressureLaw,
    datum: SymmetricContactDatum,
    ctx: PotentialContext,
    b: float,
    eps: float,
    opts: SelectorOptions | None = None,
) -> float:
    opts = opts or SelectorOptions()
    a = opts.a_start if opts.a_start is not None else b / 2
    if not (0 < a < b):
        raise ValueError(f"a_start must lie in (0, b), got {a!r}")
    for _ in range(opts.max_halvings + 1):
        try:
            checks = a_conditions(law, datum, ctx, b, eps, a)
        except (PressureDomainError, ZeroDivisionError):
            checks = None
        if checks is not None and all(c.holds(opts.theta) for c in checks):
            return a
        a /= 2
    raise SelectionExhausted(f"no a found after {opts.max_halvings} halvings")


def derive_parameters(
    law: PressureLaw, datum: SymmetricContactDatum, b: float, eps: float, a: float
) -> SymmetricParameters:
    """Close the parameter set from ``(a, b, eps)``: ``rho1``, ``q1``, ``q2`` and ``m11 = -rho1*u0``."""
    rho0, u0 = datum.rho0, datum.u0
    rho1 = rho0 + a * eps / (b - a)
    q1 = 0.5 * (rho1 * u0 * u0 + (rho1 - rho0) * (b * b + 1) + law.p(rho0) + law.p(rho1))
    return SymmetricParameters(
        a=a, b=b, rho1=rho1, m11=-rho1 * u0, q1=q1, q2=compute_q2(law, datum, eps)
    )


@dataclass
class Construction:
    """Everything ``construct`` selected, plus the assembled subsolution and its report."""

    params: SymmetricParameters
    eps: Epsilon
    subsolution: FanSubsolution
    report: VerificationReport
    checks: dict[str, Inequality]

    @property
    def internal_error(self) -> str | None:
        """Set when the verifier rejected what the selection guaranteed."""
        if self.report.all_pass:
            return None
        failed = ", ".join(c.id for c in self.report.failing())
        return f"internal consistency error: constructed subsolution failed {failed}"

    @property
    def b(self) -> float:
        return self.params.b

    @property
    def a(self) -> float:
        return self.params.a

    def selection_dict(self) -> dict:
        p = self.params
        return {
            "b": p.b,
            "eps": self.eps.value,
            "a": p.a,
            "rho1": p.rho1,
            "rho2": self.subsolution.interior[1].rho,
            "m11": p.m11,
            "q1": p.q1,
            "q2": p.q2,
            "checks": {
                k: {"lhs": c.lhs, "rhs": c.rhs, "slack": c.slack, "offset": c.offset, "relation": ">" if c.greater else "<"}
                for k, c in self.checks.items()
            },
        }


def entropy_remainder(
    law: PressureLaw, datum: SymmetricContactDatum, ctx: PotentialContext, params: SymmetricParameters
) -> Inequality:
    """The single interior entropy inequality left once both exterior ones are equalities."""
    rho0, u0 = datum.rho0, datum.u0
    a, b, rho1, q1, q2 = params.a, params.b, params.rho1, params.q1, params.q2
    rho2 = rho0 - (rho1 - rho0) * (b - a) / a
    e1 = q1 + law.potential(rho1, ctx) - law.p(rho1)
    lhs = b * (e1 - 0.5 * rho0 * u0 * u0 - law.potential(rho0, ctx))
    rhs = a * (e1 - q2 - law.potential(rho2, ctx) + law.p(rho2))
    return Inequality("en", lhs, rhs)


def construct(
    datum: SymmetricContactDatum,
    law: PressureLaw,
    ctx: PotentialContext | None = None,
    opts: SelectorOptions | None = None,
    tols: Tolerances | None = None,
) -> Construction:
    """Select parameters, assemble the five-region subsolution and verify it.

    A failing verification is not raised; it shows up as
    ``Construction.internal_error``.

    Raises
    ------
    SelectionExhausted
        If a halving ladder runs out.
    """
    ctx = ctx or PotentialContext(datum.rho0)
    opts = opts or SelectorOptions()
    b = choose_b(law, datum.rho0)
    eps = choose_epsilon(law, datum, ctx, opts)
    a = choose_a(law, datum, ctx, b, eps.value, opts)
    params = derive_parameters(law, datum, b, eps.value, a)
    sub = reduce(params, datum, law, ctx)
    report = verify(sub, law, ctx, datum=datum, tols=tols)
    a1, a2, a3 = a_conditions(law, datum, ctx, b, eps.value, a)
    checks = {
        "epsilon": eps.check,
        "a1": a1,
        "a2": a2,
        "a3": a3,
        "en": entropy_remainder(law, datum, ctx, params),
    }
    return Construction(params, eps, sub, report, checks)
