"""Finite models of the generators ``A`` and ``B``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dixmier_trace import make_model_spectrum
from ..spectral_core import operator_norm

KINDS = ("laplacian_1d", "potential_diag", "prescribed_diag", "random_psd")
POTENTIALS = ("inverse_linear", "constant", "linear")


class ConfigError(ValueError):
    """Invalid experiment or operator configuration."""


@dataclass(frozen=True)
class OperatorSpec:
    """``kind`` plus size ``n`` and kind-specific ``params``.

    * ``laplacian_1d``: ``h`` (default ``1/(n+1)``), ``normalize`` (bool)
    * ``potential_diag``: ``function`` in {inverse_linear, constant, linear}
      with ``value`` for constant, or explicit ``values``
    * ``prescribed_diag``: ``model`` in {harmonic, log_semigroup, trace_class}
      with ``c`` / ``t`` / ``r``
    * ``random_psd``: ``seed``
    """

    kind: str
    n: int
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown operator kind {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError(f"operator size must be an integer >= 2, got {self.n!r}")
        p = self.params
        if self.kind == "laplacian_1d":
            h = p.get("h", 1.0 / (self.n + 1))
            if not h > 0:
                raise ConfigError(f"laplacian_1d needs h > 0, got {h}")
        elif self.kind == "potential_diag":
            if "values" in p:
                vals = np.asarray(p["values"], dtype=float)
                if vals.shape != (self.n,) or np.any(vals < 0) or not np.all(np.isfinite(vals)):
                    raise ConfigError("potential values must be n finite non-negative numbers")
            else:
                fn = p.get("function", "inverse_linear")
                if fn not in POTENTIALS:
                    raise ConfigError(f"unknown potential function {fn!r}")
                if fn == "constant" and not p.get("value", 1.0) >= 0:
                    raise ConfigError("constant potential must be non-negative")
        elif self.kind == "prescribed_diag":
            try:
                make_model_spectrum(p.get("model", "harmonic"), self.n,
                                    **{k: p[k] for k in ("c", "t", "r") if k in p})
            except (ValueError, TypeError) as exc:
                raise ConfigError(str(exc)) from None
        elif self.kind == "random_psd":
            if not isinstance(p.get("seed", 0), int):
                raise ConfigError("random_psd seed must be an integer")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n, **self.params}

    @classmethod
    def from_dict(cls, d: dict) -> "OperatorSpec":
        if not isinstance(d, dict) or "kind" not in d or "n" not in d:
            raise ConfigError(f"operator spec needs 'kind' and 'n': {d!r}")
        params = {k: v for k, v in d.items() if k not in ("kind", "n")}
        spec = cls(d["kind"], d["n"], params)
        spec.validate()
        return spec


def laplacian_1d(n: int, h: float) -> np.ndarray:
    """Dirichlet second-difference matrix: ``2/h^2`` diagonal, ``-1/h^2`` off."""
    L = np.diag(np.full(n, 2.0)) - np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)
    return L / h ** 2


def build_operator(spec: OperatorSpec) -> np.ndarray:
    spec.validate()
    n, p = spec.n, spec.params
    if spec.kind == "laplacian_1d":
        M = laplacian_1d(n, p.get("h", 1.0 / (n + 1)))
        if p.get("normalize", False):
            M = M / operator_norm(M)
        return M
    if spec.kind == "potential_diag":
        if "values" in p:
            return np.diag(np.asarray(p["values"], dtype=float))
        fn = p.get("function", "inverse_linear")
        j = np.arange(1, n + 1, dtype=float)
        if fn == "inverse_linear":
            v = 1.0 / (1.0 + j)
        elif fn == "linear":
            v = j / n
        else:
            v = np.full(n, float(p.get("value", 1.0)))
        return np.diag(v)
    if spec.kind == "prescribed_diag":
        model = p.get("model", "harmonic")
        return np.diag(make_model_spectrum(model, n, **{k: p[k] for k in ("c", "t", "r") if k in p}))
    rng = np.random.default_rng(p.get("seed", 0))
    G = rng.standard_normal((n, n))
    X = G.T @ G
    X = 0.5 * (X + X.T)
    return X / operator_norm(X)
