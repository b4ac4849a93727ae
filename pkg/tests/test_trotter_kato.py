import numpy as np
import pytest
import scipy.linalg

from trotter_dixmier.harness.config import default_config
from trotter_dixmier.harness.operators import build_operator
from trotter_dixmier.ideal_norms import NormKind, dixmier_norm
from trotter_dixmier.kato_functions import builtin
from trotter_dixmier.spectral_core import operator_norm, random_psd, singular_values
from trotter_dixmier.trotter_kato import (
    ErrorCurve,
    RateFitError,
    SCHEMES,
    SplittingProblem,
    approximant,
    error_curve,
    error_curves,
    exact_semigroup,
    fit_rate,
    lifting_bound_check,
    sandwich_norm,
    step_factor,
    trace_error_check,
)

EXP = builtin("exp")
RES = builtin("resolvent_power", 1.0)
GRID = (8, 16, 32, 64, 128, 256)


def _pair(n, seed):
    rng = np.random.default_rng(seed)
    A, B = random_psd(n, rng), random_psd(n, rng)
    return A / operator_norm(A), B / operator_norm(B)


@pytest.fixture(scope="module")
def laplacian_problem():
    cfg = default_config()
    return SplittingProblem.build(build_operator(cfg.A), build_operator(cfg.B))


def _direct(scheme, A, B, t, n):
    ea = lambda s: scipy.linalg.expm(-s * A)
    eb = lambda s: scipy.linalg.expm(-s * B)
    tau = t / n
    step = {"FG": ea(tau) @ eb(tau), "GF": eb(tau) @ ea(tau),
            "F_sym": eb(tau / 2) @ ea(tau) @ eb(tau / 2),
            "T_sym": ea(tau / 2) @ eb(tau) @ ea(tau / 2)}[scheme]
    return np.linalg.matrix_power(step, n)


def test_exact_at_zero_is_identity():
    A, B = _pair(5, 0)
    np.testing.assert_allclose(exact_semigroup(A, B, 0.0), np.eye(5), atol=1e-14)


def test_exact_commuting_diagonal():
    out = exact_semigroup(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]), 1.0)
    np.testing.assert_allclose(out, np.diag([np.exp(-4), np.exp(-6)]), rtol=1e-14, atol=1e-300)


def test_exact_vs_pade():
    A, B = _pair(6, 1)
    np.testing.assert_allclose(exact_semigroup(A, B, 1.3), scipy.linalg.expm(-1.3 * (A + B)), atol=1e-9)


def test_semigroup_property():
    A, B = _pair(6, 2)
    pb = SplittingProblem.build(A, B)
    lhs = exact_semigroup(pb, t=0.4) @ exact_semigroup(pb, t=0.9)
    np.testing.assert_allclose(lhs, exact_semigroup(pb, t=1.3), atol=1e-10)


def test_exact_rejects_indefinite():
    with pytest.raises(ValueError):
        exact_semigroup(np.diag([1.0, -1.0]), np.eye(2), 1.0)


def test_zero_b_gives_exact():
    A, _ = _pair(5, 3)
    out = approximant("FG", EXP, EXP, A, np.zeros((5, 5)), t=0.8, n=4)
    np.testing.assert_allclose(out, exact_semigroup(A, np.zeros((5, 5)), 0.8), atol=1e-14)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("n", [1, 3, 17])
def test_commuting_diagonal_is_exact(scheme, n):
    A, B = np.diag([0.1, 0.5, 2.0]), np.diag([1.0, 0.0, 0.3])
    np.testing.assert_allclose(approximant(scheme, EXP, EXP, A, B, t=1.0, n=n),
                               exact_semigroup(A, B, 1.0), atol=1e-14)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_approximant_vs_direct_product(scheme):
    A, B = _pair(4, 4)
    np.testing.assert_allclose(approximant(scheme, EXP, EXP, A, B, t=1.0, n=3),
                               _direct(scheme, A, B, 1.0, 3), atol=1e-9)


def test_fsym_explicit_factor_order():
    A, B = _pair(4, 5)
    ea = lambda s: scipy.linalg.expm(-s * A)
    eb = lambda s: scipy.linalg.expm(-s * B)
    t = 1.0
    ref = (eb(t / 6) @ ea(t / 3) @ eb(t / 3) @ ea(t / 3) @ eb(t / 3) @ ea(t / 3) @ eb(t / 6))
    np.testing.assert_allclose(approximant("F_sym", EXP, EXP, A, B, t=t, n=3), ref, atol=1e-9)


def test_resolvent_step_factor():
    A, B = _pair(4, 6)
    I = np.eye(4)
    ref = np.linalg.inv(I + 0.5 * A) @ np.linalg.inv(I + 0.5 * B)
    np.testing.assert_allclose(step_factor("FG", RES, RES, A, B, 0.5), ref, atol=1e-12)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("n", [1, 2, 9, 40])
def test_contractivity(scheme, n):
    A, B = _pair(6, 7)
    assert operator_norm(approximant(scheme, EXP, RES, A, 3 * B, t=2.0, n=n)) <= 1 + 1e-12


@pytest.mark.parametrize("scheme", ["F_sym", "T_sym"])
def test_symmetric_schemes_hermitian_psd(scheme):
    A, B = _pair(6, 8)
    P = approximant(scheme, EXP, EXP, A, B, t=1.0, n=5)
    np.testing.assert_allclose(P, np.conj(P.T), atol=1e-14)
    w = np.linalg.eigvalsh(P)
    assert w.min() >= -1e-12 and w.max() <= 1 + 1e-12


def test_fg_is_adjoint_of_gf():
    A, B = _pair(6, 9)
    FG = approximant("FG", EXP, RES, A, B, t=1.0, n=7)
    GF = approximant("GF", EXP, RES, A, B, t=1.0, n=7)
    np.testing.assert_allclose(FG, np.conj(GF.T), atol=1e-10)


def test_unknown_scheme():
    A, B = _pair(3, 10)
    with pytest.raises(ValueError):
        approximant("Strang", EXP, EXP, A, B, t=1.0, n=2)
    with pytest.raises(ValueError):
        approximant("FG", EXP, EXP, A, B, t=1.0, n=0)


def test_commuting_error_curve_is_floored():
    A, B = np.diag([0.1, 0.5, 2.0]), np.diag([1.0, 0.0, 0.3])
    c = error_curve("FG", EXP, EXP, A, B, t=1.0, n_grid=GRID)
    assert all(e <= 1e-12 for e in c.errors)


def test_laplacian_operator_errors_decrease(laplacian_problem):
    grid = (8, 16, 32, 64, 128, 256, 512, 1024)
    curves = error_curves("FG", EXP, EXP, laplacian_problem, t=1.0, n_grid=grid,
                          norm_kinds=(NormKind.operator(), NormKind.dixmier(), NormKind.schatten(1)))
    op = curves["operator"].errors
    assert all(b < a for a, b in zip(op, op[1:]))
    for d, s1 in zip(curves["dixmier"].errors, curves["schatten:1"].errors):
        assert d <= s1 * (1 + 1e-12)
    fit = fit_rate(curves["operator"])
    assert 0.9 <= fit.gamma <= 1.1


def test_error_curve_threads_agree(laplacian_problem, monkeypatch):
    base = error_curve("GF", EXP, EXP, laplacian_problem, t=1.0, n_grid=(8, 16, 32))
    monkeypatch.setenv("TROTTER_DIXMIER_THREADS", "3")
    threaded = error_curve("GF", EXP, EXP, laplacian_problem, t=1.0, n_grid=(8, 16, 32))
    assert threaded.errors == base.errors


def _synthetic(errs, ns=GRID, norm="operator"):
    return ErrorCurve("FG", norm, 1.0, tuple(ns), tuple(float(e) for e in errs))


def test_fit_rate_synthetic():
    ns = np.array(GRID, dtype=float)
    fit = fit_rate(_synthetic(3 / ns), skip=0)
    assert fit.gamma == pytest.approx(1.0, abs=1e-12)
    assert fit.Gamma == pytest.approx(3.0, rel=1e-12)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit_rate(_synthetic(5 * ns ** -0.5)).gamma == pytest.approx(0.5, abs=1e-12)


def test_fit_rate_default_skips_two():
    fit = fit_rate(_synthetic(3 / np.array(GRID, dtype=float)))
    assert fit.window == (32, 256) and fit.points == 4


def test_fit_rate_excludes_zero_errors():
    errs = 1 / np.array(GRID, dtype=float)
    errs[-1] = 0.0
    fit = fit_rate(_synthetic(errs), skip=0)
    assert fit.excluded == (256,) and fit.points == 5


def test_fit_rate_too_few_points():
    with pytest.raises(RateFitError):
        fit_rate(_synthetic(np.zeros(len(GRID))))
    with pytest.raises(RateFitError):
        fit_rate(_synthetic([1, 0.5, 0.25, 0.1, 0.0, 0.0]))


def test_error_curve_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        ErrorCurve("FG", "operator", 1.0, (8, 4), (0.1, 0.2))


def test_lifting_commuting_model():
    zero = _synthetic(np.zeros(len(GRID)))
    rep = lifting_bound_check(zero, _synthetic(np.zeros(len(GRID)), norm="dixmier"), 1.0)
    assert rep.n0 == GRID[0] and not rep.violations


def test_lifting_synthetic_construction():
    ns = np.array(GRID, dtype=float)
    op = _synthetic(1.0 / ns)
    # with Gamma = 1 and eps(k) = 1/k the bound is 2 * F * (1/[n/2] + 1/[(n+1)/2]) >= 2 * 4/n
    ideal = _synthetic(2.0 * 2.0 / ns, norm="dixmier")
    rep = lifting_bound_check(op, ideal, F_t0_norm=2.0)
    assert rep.Gamma_t0 == pytest.approx(1.0)
    assert rep.n0 == GRID[0]
    assert all(m >= 0 for *_, m in rep.rows)
    too_big = _synthetic(100.0 / ns, norm="dixmier")
    assert lifting_bound_check(op, too_big, F_t0_norm=2.0).n0 is None


def test_lifting_grid_mismatch():
    with pytest.raises(ValueError):
        lifting_bound_check(_synthetic(np.ones(6)), _synthetic(np.ones(5), ns=GRID[:5]), 1.0)


@pytest.mark.parametrize("t", [1.0, 2.0])
@pytest.mark.parametrize("scheme", SCHEMES)
def test_lifting_on_laplacian(laplacian_problem, scheme, t):
    grid = (8, 16, 32, 64, 128, 256, 512, 1024)
    curves = error_curves(scheme, EXP, EXP, laplacian_problem, t=t, n_grid=grid,
                          norm_kinds=(NormKind.operator(), NormKind.dixmier()))
    F = sandwich_norm(EXP, EXP, laplacian_problem, t0=t / 4)
    rep = lifting_bound_check(curves["operator"], curves["dixmier"], F)
    assert rep.n0 is not None and rep.n0 <= 32
    assert not rep.violations


def test_trace_error_commuting():
    A, B = np.diag([0.1, 0.5, 2.0]), np.diag([1.0, 0.0, 0.3])
    rep = trace_error_check("FG", EXP, EXP, A, B, t=1.0, n=8)
    assert rep.passed and rep.delta_T_N < 1e-14 and rep.dixmier_error < 1e-14


@pytest.mark.parametrize("scale", [1.0, 2.0])
def test_trace_error_laplacian(laplacian_problem, scale):
    pb = laplacian_problem
    rep = trace_error_check("FG", EXP, EXP, scale * pb.A, scale * pb.B, t=1.0, n=64)
    assert rep.passed
    assert rep.N == 64
    assert rep.dixmier_error - rep.delta_T_N >= 0


def test_araki_surrogate_log_semigroup():
    N = 64
    C = np.log(np.arange(1, N + 1, dtype=float))
    A, B = np.diag(0.3 * C), np.diag(0.7 * C)
    t, n = 1.0, 16
    t0 = t / 4
    F = sandwich_norm(EXP, EXP, A, B, t0=t0)
    assert F == pytest.approx(dixmier_norm(np.arange(1, N + 1) ** -t0), rel=1e-12)
    for k in range(1, n + 1):
        if k * t / n >= t0:
            step = dixmier_norm(singular_values(exact_semigroup(A, B, k * t / n)))
            assert step <= F * (1 + 1e-12)


def test_fit_rate_rejects_roundoff_curve():
    ns = np.array(GRID, dtype=float)
    with pytest.raises(RateFitError, match="roundoff"):
        fit_rate(_synthetic(2e-13 * ns / ns[-1] + 1e-13))
