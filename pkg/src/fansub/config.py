"""Run configuration from a JSON file and/or command-line flags."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .pressure import PotentialContext, Polytropic, PressureLaw, Tabulated
from .selector import SelectorOptions
from .states import SymmetricContactDatum
from .verifier import Tolerances


class ConfigError(ValueError):
    """Configuration is invalid; ``problems`` lists every violation found."""

    def __init__(self, problems: list[str]):
        super().__init__("invalid configuration:\n  - " + "\n  - ".join(problems))
        self.problems = problems


@dataclass
class RunConfig:
    pressure: dict = field(default_factory=lambda: {"type": "polytropic", "K": 1.0, "gamma": 2.0})
    rho0: float | None = None
    u0: float | None = None
    rho_star: float | None = None
    theta: float = 0.1
    tolerances: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError([f"cannot read config {path}: {exc.strerror}"]) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config {path} is not valid JSON: {exc.msg} (line {exc.lineno})"]) from exc
        if not isinstance(doc, dict):
            raise ConfigError([f"config {path} must be a JSON object"])
        known = {"pressure", "rho0", "u0", "rho_star", "theta", "tolerances", "outputs"}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ConfigError([f"unknown config key(s): {', '.join(unknown)}"])
        return cls(**doc)

    def echo(self) -> dict:
        return {
            "pressure": self.pressure,
            "rho0": self.rho0,
            "u0": self.u0,
            "rho_star": self.rho_star,
            "theta": self.theta,
            "tolerances": self.tolerances,
        }

    def problems(self, need_datum: bool = True) -> list[str]:
        out = []
        out += _pressure_problems(self.pressure)
        if need_datum or self.rho0 is not None or self.u0 is not None:
            if self.rho0 is None:
                out.append("rho0 is required")
            elif not (_num(self.rho0) and self.rho0 > 0):
                out.append(f"rho0 must be > 0 (the density of the Riemann data is positive), got {self.rho0!r}")
            if self.u0 is None:
                out.append("u0 is required")
            elif not (_num(self.u0) and self.u0 != 0):
                out.append(f"u0 must be nonzero (u0 != 0: the data must carry a tangential velocity jump), got {self.u0!r}")
        if self.rho_star is not None and not (_num(self.rho_star) and self.rho_star > 0):
            out.append(f"rho_star must be > 0, got {self.rho_star!r}")
        if not (_num(self.theta) and 0 < self.theta < 1):
            out.append(f"theta must lie in (0, 1), got {self.theta!r}")
        if not isinstance(self.tolerances, dict):
            out.append("tolerances must be an object")
        else:
            for key, value in self.tolerances.items():
                if key not in ("tol_eq", "tol_strict"):
                    out.append(f"unknown tolerance {key!r}")
                elif not (_num(value) and value >= 0):
                    out.append(f"tolerance {key} must be >= 0, got {value!r}")
        return out

    def validate(self, need_datum: bool = True) -> None:
        problems = self.problems(need_datum)
        if problems:
            raise ConfigError(problems)

    def law(self) -> PressureLaw:
        spec = self.pressure
        try:
            if spec["type"] == "polytropic":
                return Polytropic(K=float(spec.get("K", 1.0)), gamma=float(spec["gamma"]))
            return Tabulated.from_csv(spec["csv_path"])
        except (OSError, ValueError) as exc:
            raise ConfigError([f"pressure law: {exc}"]) from exc

    def datum(self) -> SymmetricContactDatum:
        return SymmetricContactDatum(float(self.rho0), float(self.u0))

    def context(self, default_rho_star: float | None = None) -> PotentialContext:
        rho_star = self.rho_star if self.rho_star is not None else (default_rho_star or self.rho0)
        return PotentialContext(float(rho_star))

    def selector_options(self) -> SelectorOptions:
        return SelectorOptions(theta=float(self.theta))

    def tols(self) -> Tolerances:
        return Tolerances(**{k: float(v) for k, v in self.tolerances.items()})


def _num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _pressure_problems(spec) -> list[str]:
    if not isinstance(spec, dict) or "type" not in spec:
        return ["pressure must be an object with a 'type' of 'polytropic' or 'tabulated'"]
    if spec["type"] == "polytropic":
        out = []
        K = spec.get("K", 1.0)
        if not (_num(K) and K > 0):
            out.append(f"pressure K must be > 0, got {K!r}")
        gamma = spec.get("gamma")
        if not (_num(gamma) and gamma >= 1):
            out.append(f"pressure gamma must be >= 1, got {gamma!r}")
        return out
    if spec["type"] == "tabulated":
        path = spec.get("csv_path")
        if not isinstance(path, str):
            return ["tabulated pressure needs csv_path"]
        if not Path(path).is_file():
            return [f"tabulated pressure file not found: {path}"]
        return []
    return [f"unknown pressure type {spec['type']!r}"]


def parse_pressure_flag(text: str) -> dict:
    """``polytropic:K,gamma`` or ``tabulated:PATH`` to a pressure config object."""
    kind, _, rest = text.partition(":")
    if kind == "polytropic":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ConfigError([f"--pressure polytropic expects 'polytropic:K,gamma', got {text!r}"])
        try:
            return {"type": "polytropic", "K": float(parts[0]), "gamma": float(parts[1])}
        except ValueError:
            raise ConfigError([f"--pressure polytropic values must be numbers, got {rest!r}"]) from None
    if kind == "tabulated" and rest:
        return {"type": "tabulated", "csv_path": rest}
    raise ConfigError([f"--pressure must be 'polytropic:K,gamma' or 'tabulated:PATH', got {text!r}"])
