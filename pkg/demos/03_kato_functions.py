"""Which scalar functions qualify as Kato functions.

A Kato function maps [0, inf) into [0, 1] with h(0) = 1 and h'(+0) = -1.
"""
import numpy as np

from trotter_dixmier.kato_functions import (
    KatoValidationError, builtin, from_callable, product_closure, validate_kato)

for h in (builtin("exp"), builtin("resolvent_power", 1.0), builtin("resolvent_power", 4.0),
          from_callable(lambda s: np.clip(np.cos(s), 0, 1), "cos")):
    rep = validate_kato(h)
    print(f"{h.name:16s} {h.params}  h'(0)={rep.right_derivative:+.6f}  "
          f"[h]_2={rep.beta_seminorm:.4f}  passed={rep.passed}")

f = builtin("exp")
try:
    product_closure(f, f)
except KatoValidationError as exc:
    print("exp(s) * exp(s):", exc)
h = product_closure(f, f, weights=(0.5, 0.5))
print("exp(s/2) * exp(s/2) passes:", validate_kato(h).passed)
