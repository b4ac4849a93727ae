"""Symmetric norms of one matrix, side by side.

Every norm here is a function of the singular values alone, so a unitary
change of basis leaves the whole table unchanged.
"""
import numpy as np

from trotter_dixmier import NormKind, operator_ideal_norm, singular_values
from trotter_dixmier.spectral_core import random_unitary

rng = np.random.default_rng(0)
N = 40
# a matrix with harmonic singular values, hidden behind random unitaries
U, V = random_unitary(N, rng), random_unitary(N, rng)
X = U @ np.diag(1.0 / np.arange(1, N + 1)) @ V

print("largest singular values:", np.round(singular_values(X)[:5], 6))
for text in ("operator", "schatten:2", "schatten:1", "weak:2", "dixmier", "macaev:1", "pi:1"):
    kind = NormKind.parse(text)
    print(f"{kind.label:>12s}  {operator_ideal_norm(X, kind):.6f}")

# the trace norm grows like ln N; the Dixmier norm stays bounded by 1
for n in (10, 100, 400):
    s = 1.0 / np.arange(1, n + 1)
    print(f"N={n:4d}  trace norm {s.sum():.4f}  dixmier {NormKind.dixmier()(s):.4f}")
