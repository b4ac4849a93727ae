"""Dixmier-trace estimates on model spectra.

The harmonic spectrum c/j has T_n -> c, a nonzero trace; a geometric
spectrum is trace class and its T_n decays to zero, but only like 1/ln n.
"""
from trotter_dixmier import dixmier_trace as dt

for c in (1.0, 2.5):
    s = dt.make_model_spectrum("harmonic", 100_000, c=c)
    est = dt.estimate_dixmier_trace(s, window_fraction=0.5, slope_tol=0.01)
    print(f"harmonic c={c}: value {est.value:.4f}, slope {est.slope:+.4f}, converged {est.converged}")

for N in (10**3, 10**4, 10**5):
    est = dt.estimate_dixmier_trace(dt.make_model_spectrum("trace_class", N, r=0.5))
    shown = est.value if est.converged else est.window_max
    print(f"trace_class N={N:>6d}: window mean {shown:.4f}, slope {est.slope:+.4f}")

# T_{2n} - T_{2n-1} shrinks for sequences with logarithmic partial sums
d = dt.telescoping_differences(dt.make_model_spectrum("harmonic", 100_000))
print("telescoping |T_2n - T_2n-1| at n = 10, 1000, 50000:",
      [f"{abs(d[k - 1]):.2e}" for k in (10, 1000, 50_000)])
