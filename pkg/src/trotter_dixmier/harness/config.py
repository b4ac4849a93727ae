"""Experiment configuration (JSON on disk)."""
from __future__ import annotations

from dataclasses import dataclass, field
import json
import math
from pathlib import Path

from ..ideal_norms import NormKind, NormKindError
from ..kato_functions import KatoFunction, builtin
from ..trotter_kato import SCHEMES
from .operators import ConfigError, OperatorSpec

DEFAULT_N = 64


def parse_function(name: str) -> KatoFunction:
    """``exp`` or ``resolvent_power[:a]``."""
    base, _, arg = name.partition(":")
    try:
        return builtin(base, float(arg) if arg else None)
    except ValueError as exc:
        raise ConfigError(f"bad Kato function {name!r}: {exc}") from None


@dataclass
class ExperimentConfig:
    A: OperatorSpec
    B: OperatorSpec
    f: str = "exp"
    g: str = "exp"
    schemes: list = field(default_factory=lambda: list(SCHEMES))
    t: float = 1.0
    n_grid: list = field(default_factory=lambda: [8, 16, 32, 64, 128, 256, 512, 1024])
    norms: list = field(default_factory=lambda: ["operator", "dixmier", "schatten:1"])
    t0_fraction: float = 0.25
    max_n0: int = 32
    output_dir: str = "results"

    def validate(self) -> None:
        self.A.validate()
        self.B.validate()
        if self.A.n != self.B.n:
            raise ConfigError(f"A and B sizes differ ({self.A.n} vs {self.B.n})")
        parse_function(self.f)
        parse_function(self.g)
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ConfigError(f"unknown or empty schemes {bad}; expected subset of {SCHEMES}")
        if not (isinstance(self.t, (int, float)) and math.isfinite(self.t) and self.t > 0):
            raise ConfigError(f"t must be a positive number, got {self.t!r}")
        grid = self.n_grid
        if (not grid or any(not isinstance(n, int) or n < 1 for n in grid)
                or any(b <= a for a, b in zip(grid, grid[1:]))):
            raise ConfigError(f"n_grid must be strictly ascending positive integers, got {grid!r}")
        if not self.norms:
            raise ConfigError("at least one norm is required")
        self.norm_kinds()
        if not 0 < self.t0_fraction <= 0.5:
            raise ConfigError("t0_fraction must lie in (0, 0.5] so that t >= 2 t0")

    def norm_kinds(self) -> list:
        try:
            return [NormKind.parse(s) for s in self.norms]
        except NormKindError as exc:
            raise ConfigError(f"invalid norm: {exc}") from None

    def to_dict(self) -> dict:
        return {
            "A": self.A.to_dict(),
            "B": self.B.to_dict(),
            "f": self.f,
            "g": self.g,
            "schemes": list(self.schemes),
            "t": self.t,
            "n_grid": list(self.n_grid),
            "norms": list(self.norms),
            "t0_fraction": self.t0_fraction,
            "max_n0": self.max_n0,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a mapping")
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "A" not in d or "B" not in d:
            raise ConfigError("configuration needs operators 'A' and 'B'")
        kw = {k: v for k, v in d.items() if k not in ("A", "B")}
        cfg = cls(OperatorSpec.from_dict(d["A"]), OperatorSpec.from_dict(d["B"]), **kw)
        cfg.validate()
        return cfg

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration is not valid JSON: {exc}") from None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.loads(Path(path).read_text())


def default_config() -> ExperimentConfig:
    """Unit-norm Dirichlet Laplacian plus the potential ``1/(1+j)``, N = 64."""
    n = DEFAULT_N
    return ExperimentConfig(
        A=OperatorSpec("laplacian_1d", n, {"h": 1.0 / (n + 1), "normalize": True}),
        B=OperatorSpec("potential_diag", n, {"function": "inverse_linear"}),
    )


def commuting_config() -> ExperimentConfig:
    n = 16
    return ExperimentConfig(
        A=OperatorSpec("prescribed_diag", n, {"model": "harmonic", "c": 1.0}),
        B=OperatorSpec("potential_diag", n, {"function": "inverse_linear"}),
    )
