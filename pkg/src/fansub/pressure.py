"""Barotropic pressure laws and the associated pressure potential.

Two kinds of law are supported: the polytropic law ``p = K * rho**gamma`` and
a tabulated law built from ``(rho, p)`` samples with a monotone piecewise-cubic
(PCHIP) interpolant. Every law exposes ``p``, ``p'``, the potential

    P(rho) = rho * integral_{rho_star}^{rho} p(r) / r**2 dr

and ``P'``. Tabulated potentials are integrated with adaptive Simpson.
"""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence


class PressureDomainError(ValueError):
    """Density outside the range where the pressure law is defined."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class PotentialContext:
    """Reference density ``rho_star`` at which the potential vanishes."""

    rho_star: float

    def __post_init__(self):
        if not (self.rho_star > 0 and math.isfinite(self.rho_star)):
            raise PressureDomainError(f"rho_star must be a positive finite number, got {self.rho_star!r}")


@dataclass(frozen=True)
class Polytropic:
    """Polytropic law ``p(rho) = K * rho**gamma`` with ``K > 0`` and ``gamma >= 1``."""

    K: float = 1.0
    gamma: float = 2.0

    def __post_init__(self):
        errors = []
        if not (self.K > 0 and math.isfinite(self.K)):
            errors.append(f"K must be > 0, got {self.K!r}")
        if not (self.gamma >= 1 and math.isfinite(self.gamma)):
            errors.append(f"gamma must be >= 1, got {self.gamma!r}")
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, math.inf)

    def check(self, rho: float) -> None:
        if not (rho > 0 and math.isfinite(rho)):
            raise PressureDomainError(f"density must be positive and finite, got {rho!r}")

    def p(self, rho: float) -> float:
        self.check(rho)
        return self.K * rho**self.gamma

    def dp(self, rho: float) -> float:
        self.check(rho)
        return self.K * self.gamma * rho ** (self.gamma - 1.0)

    def potential(self, rho: float, ctx: PotentialContext) -> float:
        self.check(rho)
        self.check(ctx.rho_star)
        K, g, rs = self.K, self.gamma, ctx.rho_star
        if g == 1.0:
            return K * rho * math.log(rho / rs)
        return K * (rho**g - rho * rs ** (g - 1.0)) / (g - 1.0)

    def describe(self) -> dict:
        return {"type": "polytropic", "K": self.K, "gamma": self.gamma}


def _pchip_slopes(x: Sequence[float], y: Sequence[float]) -> list[float]:
    # Fritsch-Butland weighted harmonic mean inside, three-point formula at the
    # ends. Slopes are kept in (0, 2.9 * secant) so every Hermite piece is
    # strictly increasing (the Fritsch-Carlson square minus its (3, 3) corner).
    n = len(x)
    h = [x[k + 1] - x[k] for k in range(n - 1)]
    delta = [(y[k + 1] - y[k]) / h[k] for k in range(n - 1)]
    d = [0.0] * n
    for k in range(1, n - 1):
        w1 = 2 * h[k] + h[k - 1]
        w2 = h[k] + 2 * h[k - 1]
        d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k])
        d[k] = min(d[k], 2.9 * min(delta[k - 1], delta[k]))

    def end(h0, h1, d0, d1):
        s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
        if s <= 0:
            return 0.5 * d0
        return min(s, 2.9 * d0)

    d[0] = end(h[0], h[1], delta[0], delta[1])
    d[-1] = end(h[-1], h[-2], delta[-1], delta[-2])
    return d


@dataclass(frozen=True)
class Tabulated:
    """Tabulated law on the closed hull of its samples.

    Parameters
    ----------
    rho, p : sequence of float
        At least four samples, both strictly increasing, all positive.
    quad_tol : float
        Absolute tolerance of the adaptive Simpson rule used for the potential.
    quad_depth : int
        Maximum bisection depth of the adaptive Simpson rule.
    source : str, optional
        Where the samples came from (echoed in reports).
    """

    rho: tuple[float, ...]
    p_samples: tuple[float, ...]
    quad_tol: float = 1e-12
    quad_depth: int = 40
    source: str | None = None
    _slopes: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rho = tuple(float(r) for r in self.rho)
        ps = tuple(float(v) for v in self.p_samples)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "p_samples", ps)
        errors = []
        if len(rho) != len(ps):
            errors.append("rho and p sample counts differ")
        if len(rho) < 4:
            errors.append(f"need at least 4 samples, got {len(rho)}")
        if any(not math.isfinite(v) for v in rho + ps):
            errors.append("samples must be finite")
        if rho and rho[0] <= 0:
            errors.append("densities must be positive")
        if ps and min(ps) <= 0:
            errors.append("pressures must be positive")
        if any(b <= a for a, b in zip(rho, rho[1:])):
            errors.append("densities must be strictly increasing")
        if any(b <= a for a, b in zip(ps, ps[1:])):
            errors.append("pressures must be strictly increasing")
        if errors:
            raise ValueError("invalid tabulated pressure law: " + "; ".join(errors))
        object.__setattr__(self, "_slopes", tuple(_pchip_slopes(rho, ps)))

    @classmethod
    def from_csv(cls, path: str | Path, **kwargs) -> "Tabulated":
        """Load two-column ``rho,p`` samples; a non-numeric first row is a header."""
        path = Path(path)
        rows = []
        with path.open(newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) < 2:
                    raise ValueError(f"{path}:{lineno}: expected two columns")
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if rows or lineno > 1:
                        raise ValueError(f"{path}:{lineno}: non-numeric row {row!r}") from None
        kwargs.setdefault("source", str(path))
        return cls(tuple(r for r, _ in rows), tuple(v for _, v in rows), **kwargs)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.rho[0], self.rho[-1])

    def check(self, rho: float) -> None:
        lo, hi = self.domain
        if not (lo <= rho <= hi):
            raise PressureDomainError(f"density {rho!r} outside tabulated range [{lo}, {hi}]")

    def _segment(self, rho: float) -> int:
        k = bisect.bisect_right(self.rho, rho) - 1
        return min(max(k, 0), len(self.rho) - 2)

    def _hermite(self, rho: float) -> tuple[float, float]:
        k = self._segment(rho)
        x0, x1 = self.rho[k], self.rho[k + 1]
        y0, y1 = self.p_samples[k], self.p_samples[k + 1]
        d0, d1 = self._slopes[k], self._slopes[k + 1]
        h = x1 - x0
        t = (rho - x0) / h
        h00 = (1 + 2 * t) * (1 - t) ** 2
        h10 = t * (1 - t) ** 2
        h01 = t * t * (3 - 2 * t)
        h11 = t * t * (t - 1)
        value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
        dh00 = 6 * t * t - 6 * t
        dh10 = 3 * t * t - 4 * t + 1
        dh01 = -dh00
        dh11 = 3 * t * t - 2 * t
        slope = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1
        return value, slope

    def p(self, rho: float) -> float:
        self.check(rho)
        return self._hermite(rho)[0]

    def dp(self, rho: float) -> float:
        self.check(rho)
        return self._hermite(rho)[1]

    def potential(self, rho: float, ctx: PotentialContext) -> float:
        self.check(rho)
        self.check(ctx.rho_star)
        lo, hi = sorted((ctx.rho_star, rho))
        if lo == hi:
            return 0.0
        # integrate knot to knot so every piece is smooth
        cuts = [lo] + [r for r in self.rho if lo < r < hi] + [hi]
        tol = self.quad_tol / (len(cuts) - 1)
        total = 0.0
        for x0, x1 in zip(cuts, cuts[1:]):
            total += adaptive_simpson(self._integrand, x0, x1, tol=tol, max_depth=self.quad_depth)
        sign = 1.0 if rho >= ctx.rho_star else -1.0
        return sign * rho * total

    def _integrand(self, r: float) -> float:
        return self._hermite(r)[0] / (r * r)

    def describe(self) -> dict:
        out = {"type": "tabulated", "samples": len(self.rho), "range": list(self.domain)}
        if self.source:
            out["csv_path"] = self.source
        return out


PressureLaw = Polytropic | Tabulated


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 40,
) -> float:
    """Integrate ``f`` over ``[a, b]`` with adaptive Simpson and Richardson correction.

    Raises
    ------
    QuadratureError
        If some subinterval still misses its share of ``tol`` at ``max_depth``.
    """
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    total = 0.0
    failed = []
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        diff = left + right - whole
        if abs(diff) <= 15 * eps:
            total += left + right + diff / 15.0
        elif depth >= max_depth:
            failed.append((a, b))
            total += left + right + diff / 15.0
        else:
            stack.append((a, m, fa, flm, fm, left, 0.5 * eps, depth + 1))
            stack.append((m, b, fm, frm, fb, right, 0.5 * eps, depth + 1))
    if failed:
        raise QuadratureError(
            f"adaptive Simpson did not converge to {tol:g} on {len(failed)} subinterval(s), "
            f"first at [{failed[0][0]!r}, {failed[0][1]!r}]"
        )
    return total


def p_eval(law: PressureLaw, rho: float) -> float:
    return law.p(rho)


def dp_eval(law: PressureLaw, rho: float) -> float:
    return law.dp(rho)


def potential_eval(law: PressureLaw, rho: float, ctx: PotentialContext) -> float:
    return law.potential(rho, ctx)


def dpotential_eval(law: PressureLaw, rho: float, ctx: PotentialContext) -> float:
    """Derivative of the potential from ``rho * P'(rho) - P(rho) = p(rho)``."""
    return (law.potential(rho, ctx) + law.p(rho)) / rho
