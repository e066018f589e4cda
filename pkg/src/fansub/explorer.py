"""Feasibility map over ``(a, eps)`` at the fixed speed ``b = sqrt(p'(rho0) + 1)``.

Each cell closes the parameter set exactly as the selector does, assembles
and verifies the subsolution, and also records the signed slack of every
selection inequality (positive = satisfied). A cell is feasible when the
verifier passes and every family slack is positive.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np

from .pressure import PotentialContext, PressureLaw
from .reduction import DensityPositivityError, reduce
from .selector import a_conditions, choose_b, derive_parameters, entropy_remainder, epsilon_condition
from .states import SymmetricContactDatum
from .verifier import Tolerances, verify

FAMILIES = ("epsilon", "a1", "a2", "a3", "en", "tr1", "det1", "tr2", "det2")
CSV_COLUMNS = ("a", "eps", "feasible", "min_slack") + tuple(f"slack_{f}" for f in FAMILIES)


class GridCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    a_range: tuple[float, float, int]
    eps_range: tuple[float, float, int]
    cap: int = 1_000_000

    @property
    def cells(self) -> int:
        return self.a_range[2] * self.eps_range[2]

    def validate(self, b: float, rho0: float) -> None:
        errors = []
        a_lo, a_hi, na = self.a_range
        e_lo, e_hi, ne = self.eps_range
        if not (0 < a_lo < a_hi < b):
            errors.append(f"a_range must satisfy 0 < low < high < b = {b!r}, got ({a_lo!r}, {a_hi!r})")
        if not (0 < e_lo < e_hi < rho0):
            errors.append(f"eps_range must satisfy 0 < low < high < rho0 = {rho0!r}, got ({e_lo!r}, {e_hi!r})")
        if na < 2 or ne < 2:
            errors.append("grid counts must be >= 2")
        if errors:
            raise ValueError("; ".join(errors))
        if self.cells > self.cap:
            raise GridCapExceeded(f"{self.cells} cells exceeds the cap of {self.cap}")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linspace(*self.a_range), np.linspace(*self.eps_range)


def default_grid(law: PressureLaw, datum: SymmetricContactDatum, count: int = 50) -> GridSpec:
    b = choose_b(law, datum.rho0)
    return GridSpec((b / 100, 0.99 * b, count), (datum.rho0 / 200, 0.99 * datum.rho0, count))


@dataclass(frozen=True)
class Cell:
    a: float
    eps: float
    feasible: bool
    min_slack: float
    slacks: dict[str, float]

    def row(self) -> list:
        return [self.a, self.eps, int(self.feasible), self.min_slack] + [self.slacks[f] for f in FAMILIES]


def family_slacks(
    law: PressureLaw, datum: SymmetricContactDatum, ctx: PotentialContext, b: float, a: float, eps: float
) -> dict[str, float]:
    """Slack of each selection inequality and reduced subsolution condition at ``(a, eps)``."""
    rho0, u0 = datum.rho0, datum.u0
    params = derive_parameters(law, datum, b, eps, a)
    rho1, q1, q2 = params.rho1, params.q1, params.q2
    rho2 = rho0 - (rho1 - rho0) * (b - a) / a
    p0, p1 = law.p(rho0), law.p(rho1)
    out = {"epsilon": epsilon_condition(law, datum, ctx, eps).slack}
    for check in a_conditions(law, datum, ctx, b, eps, a):
        out[check.name] = check.slack
    out["en"] = entropy_remainder(law, datum, ctx, params).slack
    jump = rho1 - rho0
    out["tr1"] = -(rho1 * u0 * u0 + b * b * jump * jump / rho1 + 2 * (p1 - q1))
    f1 = rho1 * u0 * u0 + b * b * jump + p0 + p1 - 2 * q1
    f2 = -b * b * jump * rho0 / rho1 - p0 + p1
    out["det1"] = f1 * f2
    p2 = law.p(rho2)
    out["tr2"] = q2 - p2
    g1 = b * (b - a) * jump + p0 + p2 - 2 * q2
    g2 = -b * (b - a) * jump - p0 + p2
    out["det2"] = g1 * g2 - (b * rho0 - (b - a) * rho1) ** 2 * u0 * u0
    return out


def evaluate_cell(
    law: PressureLaw,
    datum: SymmetricContactDatum,
    ctx: PotentialContext,
    b: float,
    a: float,
    eps: float,
    tols: Tolerances | None = None,
) -> Cell:
    try:
        slacks = family_slacks(law, datum, ctx, b, a, eps)
        sub = reduce(derive_parameters(law, datum, b, eps, a), datum, law, ctx)
        report = verify(sub, law, ctx, datum=datum, tols=tols)
    except (DensityPositivityError, ValueError, ArithmeticError):
        nan = math.nan
        return Cell(a, eps, False, nan, {f: nan for f in FAMILIES})
    strict = [c.slack for c in report.conditions if c.kind.value == "strict"]
    min_slack = min(strict + list(slacks.values()))
    feasible = report.all_pass and all(v > 0 for v in slacks.values())
    return Cell(a, eps, feasible, min_slack, slacks)


def _evaluate_row(a: float, eps_values, law, datum, ctx, b, tols) -> list[Cell]:
    return [evaluate_cell(law, datum, ctx, b, a, float(e), tols) for e in eps_values]


def scan_feasibility(
    datum: SymmetricContactDatum,
    law: PressureLaw,
    ctx: PotentialContext | None = None,
    grid: GridSpec | None = None,
    tols: Tolerances | None = None,
    workers: int = 1,
) -> list[Cell]:
    """Evaluate every cell; rows are ordered a-major, then eps.

    ``workers > 1`` spreads rows over processes; the result is identical to the
    serial scan because each cell is a pure function of its coordinates.
    """
    ctx = ctx or PotentialContext(datum.rho0)
    grid = grid or default_grid(law, datum)
    b = choose_b(law, datum.rho0)
    grid.validate(b, datum.rho0)
    a_axis, eps_axis = grid.axes()
    eps_values = tuple(float(e) for e in eps_axis)
    job = partial(_evaluate_row, eps_values=eps_values, law=law, datum=datum, ctx=ctx, b=b, tols=tols)
    a_values = [float(a) for a in a_axis]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, a_values))
    else:
        rows = [job(a) for a in a_values]
    return [cell for row in rows for cell in row]


def table_csv(table: list[Cell]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell in table:
        writer.writerow([_fmt(v) for v in cell.row()])
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def emit_csv(table: list[Cell], path: str | Path) -> Path:
    if not table:
        raise ValueError("cannot write an empty table")
    path = Path(path)
    try:
        path.write_text(table_csv(table))
    except OSError as exc:
        raise OSError(f"could not write scan CSV to {path}: {exc}") from exc
    return path


def _color(cell: Cell, scale: float) -> str:
    if math.isnan(cell.min_slack):
        return "#bdbdbd"
    t = min(1.0, math.log10(1 + abs(cell.min_slack) / scale) / math.log10(2)) if scale > 0 else 1.0
    t = 0.25 + 0.75 * t
    if cell.feasible:
        r, g, b = 1 - t * 0.9, 1 - t * 0.35, 1 - t * 0.9
    else:
        r, g, b = 1 - t * 0.15, 1 - t * 0.85, 1 - t * 0.85
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


def heatmap_svg(table: list[Cell], title: str = "feasibility of (a, eps)") -> str:
    """Self-contained SVG: green cells feasible, red infeasible, darker = larger |min_slack|."""
    a_vals = sorted({c.a for c in table})
    e_vals = sorted({c.eps for c in table})
    ai = {a: k for k, a in enumerate(a_vals)}
    ei = {e: k for k, e in enumerate(e_vals)}
    finite = sorted(abs(c.min_slack) for c in table if math.isfinite(c.min_slack))
    scale = finite[len(finite) // 2] if finite else 1.0
    cw, ch = 10, 10
    left, top, bottom, right = 70, 40, 60, 20
    width = left + cw * len(a_vals) + right
    height = top + ch * len(e_vals) + bottom
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<title>{title}</title>',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="13">{title}</text>',
    ]
    for c in table:
        x = left + cw * ai[c.a]
        y = top + ch * (len(e_vals) - 1 - ei[c.eps])
        parts.append(
            f'<rect x="{x}" y="{y}" width="{cw}" height="{ch}" fill="{_color(c, scale)}">'
            f"<title>a={c.a:.6g} eps={c.eps:.6g} min_slack={c.min_slack:.3e}</title></rect>"
        )
    x0, x1 = left, left + cw * len(a_vals)
    y0, y1 = top, top + ch * len(e_vals)
    parts.append(f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" fill="none" stroke="black"/>')
    parts.append(f'<text x="{x0}" y="{y1 + 15}" text-anchor="start">{a_vals[0]:.4g}</text>')
    parts.append(f'<text x="{x1}" y="{y1 + 15}" text-anchor="end">{a_vals[-1]:.4g}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{y1 + 35}" text-anchor="middle">a</text>')
    parts.append(f'<text x="{x0 - 5}" y="{y1}" text-anchor="end">{e_vals[0]:.4g}</text>')
    parts.append(f'<text x="{x0 - 5}" y="{y0 + 10}" text-anchor="end">{e_vals[-1]:.4g}</text>')
    parts.append(
        f'<text x="20" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {(y0 + y1) / 2:.1f})">eps</text>'
    )
    n_feasible = sum(c.feasible for c in table)
    parts.append(
        f'<text x="{x0}" y="{height - 8}">feasible cells: {n_feasible} / {len(table)} '
        f"(green feasible, red infeasible)</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_heatmap(table: list[Cell], path: str | Path, title: str = "feasibility of (a, eps)") -> Path:
    if not table:
        raise ValueError("cannot draw an empty table")
    path = Path(path)
    try:
        path.write_text(heatmap_svg(table, title))
    except OSError as exc:
        raise OSError(f"could not write heatmap SVG to {path}: {exc}") from exc
    return path
