"""Numerical tolerances and run defaults, kept in one place."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from typing import Dict, Optional


@dataclass(frozen=True)
class Tolerances:
    root_residual: float = 1e-12  # polishing target for relator roots
    relator_residual: float = 1e-10  # ||rho(u_r) -+ I|| accepted for a representation
    parabolic: float = 1e-6  # ||tr| - 2| below this counts as parabolic
    loxodromic_margin: float = 1e-9  # |tr| > 2 - margin in the root-selection filter
    identity_residual: float = 1e-2  # McShane-type sums
    markov: float = 1e-9  # x^2 + y^2 + z^2 - xyz for the classical identity
    prune_eps: float = 1e-7  # subtree pruning threshold on |h|


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run depends on besides its positional arguments."""

    tolerances: Tolerances = DEFAULT_TOLERANCES
    max_den: int = 200
    depth: int = 4
    format: str = "auto"
    omega: Optional[complex] = None
    mirror_reduce: bool = False

    def __post_init__(self) -> None:
        for f in fields(self.tolerances):
            if not getattr(self.tolerances, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be positive")
        if self.max_den < 1:
            raise ValueError("max_den must be at least 1")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.format not in ("auto", "json", "csv", "svg", "text"):
            raise ValueError(f"unknown format {self.format!r}")

    def as_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = dict(asdict(self.tolerances))
        out.update(max_den=self.max_den, depth=self.depth, format=self.format,
                   omega=None if self.omega is None else str(self.omega),
                   mirror_reduce=self.mirror_reduce)
        return out

    def with_values(self, values: Dict[str, str]) -> "RunConfig":
        """Apply ``key=value`` overrides given as strings."""
        tol_names = {f.name for f in fields(Tolerances)}
        tol: Dict[str, float] = {}
        top: Dict[str, object] = {}
        for key, raw in values.items():
            key = key.strip().replace("-", "_")
            raw = raw.strip()
            if key in tol_names:
                tol[key] = float(raw)
            elif key in ("max_den", "depth"):
                top[key] = int(raw)
            elif key == "format":
                top[key] = raw
            elif key == "omega":
                top[key] = None if raw.lower() in ("", "none") else complex(raw.replace(" ", ""))
            elif key == "mirror_reduce":
                top[key] = raw.lower() in ("1", "true", "yes", "on")
            else:
                raise ValueError(f"unknown config key {key!r}")
        return replace(self, tolerances=replace(self.tolerances, **tol), **top)


def parse_config_text(text: str) -> Dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    out: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out
