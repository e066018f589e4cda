"""Piecewise-constant fan states and the 2x2 algebra they need."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .pressure import PotentialContext, PressureLaw


@dataclass(frozen=True)
class TracelessSym2:
    """Symmetric traceless matrix ``[[u11, u12], [u12, -u11]]``."""

    u11: float
    u12: float

    @property
    def u22(self) -> float:
        return -self.u11

    def as_rows(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.u11, self.u12), (self.u12, -self.u11))


@dataclass(frozen=True)
class FanState:
    """One constant region ``(rho, m, U, q, F)`` of a fan subsolution."""

    rho: float
    m: tuple[float, float]
    U: TracelessSym2
    q: float
    F: tuple[float, float]

    def reflect_x(self) -> "FanState":
        """Image under ``x -> -x``: flips ``m1``, ``U12`` and ``F1``."""
        return FanState(
            rho=self.rho,
            m=(-self.m[0], self.m[1]),
            U=TracelessSym2(self.U.u11, -self.U.u12),
            q=self.q,
            F=(-self.F[0], self.F[1]),
        )


@dataclass(frozen=True)
class SymmetricContactDatum:
    """Riemann data ``rho_pm = rho0``, ``m_pm = (+-rho0*u0, 0)``."""

    rho0: float
    u0: float

    def __post_init__(self):
        errors = self.violations(self.rho0, self.u0)
        if errors:
            raise ValueError("; ".join(errors))

    @staticmethod
    def violations(rho0, u0) -> list[str]:
        errors = []
        if not (isinstance(rho0, (int, float)) and math.isfinite(rho0) and rho0 > 0):
            errors.append(f"rho0 must be > 0 (positive density), got {rho0!r}")
        if not (isinstance(u0, (int, float)) and math.isfinite(u0) and u0 != 0):
            errors.append(f"u0 must be nonzero (u0 != 0 is required for a contact discontinuity), got {u0!r}")
        return errors


@dataclass(frozen=True)
class FanPartition:
    """Interface speeds ``mu_0 < mu_1 < ...`` of a fan partition."""

    speeds: tuple[float, ...]

    def is_ordered(self) -> bool:
        return all(a < b for a, b in zip(self.speeds, self.speeds[1:]))


def boundary_state(rho: float, m: tuple[float, float], law: PressureLaw, ctx: PotentialContext) -> FanState:
    """Exterior state fixed by ``(rho, m)``: ``q = |m|^2/2rho + p``, ``U`` and ``F`` from it."""
    p = law.p(rho)
    m1, m2 = m
    q = (m1 * m1 + m2 * m2) / (2 * rho) + p
    # m (x) m / rho + (p - q) I, stored by its traceless part
    u11 = m1 * m1 / rho + (p - q)
    u12 = m1 * m2 / rho
    coef = (q + law.potential(rho, ctx)) / rho
    return FanState(rho=rho, m=(m1, m2), U=TracelessSym2(u11, u12), q=q, F=(coef * m1, coef * m2))


def boundary_states(
    datum: SymmetricContactDatum, law: PressureLaw, ctx: PotentialContext
) -> tuple[FanState, FanState]:
    """Return ``(left, right)`` exterior states for ``y < 0`` and ``y > 0``."""
    mom = datum.rho0 * datum.u0
    left = boundary_state(datum.rho0, (-mom, 0.0), law, ctx)
    right = boundary_state(datum.rho0, (mom, 0.0), law, ctx)
    return left, right


@dataclass(frozen=True)
class Sym2:
    """Symmetric 2x2 matrix ``[[m11, m12], [m12, m22]]``."""

    m11: float
    m12: float
    m22: float

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m12


def subsolution_matrix(s: FanState, law: PressureLaw) -> Sym2:
    """``m (x) m / rho - U + (p(rho) - q) I`` for one state."""
    m1, m2 = s.m
    shift = law.p(s.rho) - s.q
    return Sym2(
        m11=m1 * m1 / s.rho - s.U.u11 + shift,
        m12=m1 * m2 / s.rho - s.U.u12,
        m22=m2 * m2 / s.rho + s.U.u11 + shift,
    )


def lambda_max(M: Sym2) -> float:
    """Larger eigenvalue of a symmetric 2x2 matrix in closed form."""
    half_trace = 0.5 * (M.m11 + M.m22)
    return half_trace + math.hypot(0.5 * (M.m11 - M.m22), M.m12)
