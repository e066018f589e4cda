"""Five-region mirror-symmetric fan subsolutions from six scalar parameters.

Speeds are ``(-b, -a, a, b)``; region 3 mirrors region 1 and region 2 carries
no momentum. Solving the twelve Rankine-Hugoniot equalities under that ansatz
leaves ``(a, b, rho1, m11, q1, q2)`` free; everything else follows in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .pressure import PotentialContext, PressureLaw
from .states import FanPartition, FanState, SymmetricContactDatum, TracelessSym2, boundary_states


class DensityPositivityError(ValueError):
    """A region density derived from the parameters is not positive."""


@dataclass(frozen=True)
class SymmetricParameters:
    a: float
    b: float
    rho1: float
    m11: float
    q1: float
    q2: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.rho1, self.m11, self.q1, self.q2)):
            raise ValueError("symmetric parameters must be finite")
        if not (0 < self.a < self.b):
            raise ValueError(f"need 0 < a < b, got a={self.a!r}, b={self.b!r}")


@dataclass(frozen=True)
class FanSubsolution:
    """Fan speeds plus the exterior and interior states, ordered left to right."""

    partition: FanPartition
    left: FanState
    right: FanState
    interior: tuple[FanState, ...]

    def __post_init__(self):
        if len(self.partition.speeds) != len(self.interior) + 1:
            raise ValueError(
                f"{len(self.interior)} interior regions need {len(self.interior) + 1} speeds, "
                f"got {len(self.partition.speeds)}"
            )

    @property
    def states(self) -> tuple[FanState, ...]:
        return (self.left, *self.interior, self.right)

    def reflect_x(self) -> "FanSubsolution":
        return FanSubsolution(
            partition=self.partition,
            left=self.left.reflect_x(),
            right=self.right.reflect_x(),
            interior=tuple(s.reflect_x() for s in self.interior),
        )


def region1_flux(
    params: SymmetricParameters, datum: SymmetricContactDatum, law: PressureLaw, ctx: PotentialContext
) -> float:
    """Second flux component of region 1 making both exterior entropy conditions equalities."""
    rho0, u0, rho1 = datum.rho0, datum.u0, params.rho1
    return -params.b * (
        params.q1
        + law.potential(rho1, ctx)
        - law.p(rho1)
        - 0.5 * rho0 * u0 * u0
        - law.potential(rho0, ctx)
    )


def reduce(
    params: SymmetricParameters, datum: SymmetricContactDatum, law: PressureLaw, ctx: PotentialContext
) -> FanSubsolution:
    a, b = params.a, params.b
    rho0, u0 = datum.rho0, datum.u0
    rho1, m11, q1, q2 = params.rho1, params.m11, params.q1, params.q2
    if rho1 <= 0:
        raise DensityPositivityError(f"rho1 = {rho1!r} is not positive")
    jump = rho1 - rho0
    # rho0 - jump*(b-a)/a equals rho1 - (b/a)*jump but does not amplify rounding by b/a
    rho2 = rho0 - jump * (b - a) / a
    if rho2 <= 0:
        raise DensityPositivityError(
            f"rho2 = {rho2!r} is not positive; rho1 must lie below b*rho0/(b-a) = {b * rho0 / (b - a)!r}"
        )

    p0 = law.p(rho0)
    region1 = FanState(
        rho=rho1,
        m=(m11, -b * jump),
        U=TracelessSym2(u11=-b * b * jump - p0 + q1, u12=-b * (rho0 * u0 + m11)),
        q=q1,
        F=(0.0, region1_flux(params, datum, law, ctx)),
    )
    region2 = FanState(
        rho=rho2,
        m=(0.0, 0.0),
        U=TracelessSym2(u11=-b * (b - a) * jump - p0 + q2, u12=-(b - a) * m11 - b * rho0 * u0),
        q=q2,
        F=(0.0, 0.0),
    )
    region3 = FanState(
        rho=rho1,
        m=(-region1.m[0], -region1.m[1]),
        U=region1.U,
        q=q1,
        F=(-region1.F[0], -region1.F[1]),
    )
    left, right = boundary_states(datum, law, ctx)
    return FanSubsolution(
        partition=FanPartition((-b, -a, a, b)),
        left=left,
        right=right,
        interior=(region1, region2, region3),
    )
