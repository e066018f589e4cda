import itertools
import math

import pytest

from fansub.pressure import Polytropic, Tabulated
from fansub.states import SymmetricContactDatum

GAMMAS = (1.0, 1.4, 2.0, 3.0)
RHO0S = (0.5, 1.0, 2.0)
U0S = (0.3, -0.3, 1.0, -1.0, 5.0, -5.0)


def tabulated_samples(n: int = 120) -> tuple[list[float], list[float]]:
    """p = rho**1.4 + 0.5*rho on a geometric grid over [0.05, 5]."""
    lo, hi = math.log(0.05), math.log(5.0)
    rho = [math.exp(lo + (hi - lo) * k / (n - 1)) for k in range(n)]
    return rho, [r**1.4 + 0.5 * r for r in rho]


def tabulated_law() -> Tabulated:
    return Tabulated(*tabulated_samples())


def battery():
    """(id, law, datum) for every polytropic case plus the tabulated law."""
    cases = []
    for gamma, rho0, u0 in itertools.product(GAMMAS, RHO0S, U0S):
        cases.append((f"g{gamma}-r{rho0}-u{u0}", Polytropic(1.0, gamma), SymmetricContactDatum(rho0, u0)))
    tab = tabulated_law()
    for rho0, u0 in itertools.product(RHO0S, U0S):
        cases.append((f"tab-r{rho0}-u{u0}", tab, SymmetricContactDatum(rho0, u0)))
    return cases


@pytest.fixture
def golden():
    return Polytropic(1.0, 2.0), SymmetricContactDatum(1.0, 1.0)


@pytest.fixture
def tab_csv(tmp_path):
    rho, p = tabulated_samples()
    path = tmp_path / "law.csv"
    path.write_text("rho,p\n" + "".join(f"{r!r},{q!r}\n" for r, q in zip(rho, p)))
    return path


# acceptance criteria record their outcome here; the summary hook prints them
ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {title}  ({detail})")
