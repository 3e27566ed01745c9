import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from secrecygame.channel import SnrSet
from secrecygame import regions
from secrecygame.errors import EmptyReductionError, WrongCaseError
from secrecygame.reduction import ReducedGame, reduce_game, reduced_kernel


def test_paper_reduction_square(paper_snr):
    rg = reduce_game(regions.corner_points(paper_snr))
    assert rg.xi_lo == pytest.approx(1.9475325801058644, abs=1e-12)
    assert rg.xi_hi == pytest.approx(2.893863915312279, abs=1e-12)
    assert rg.eta_lo == pytest.approx(0.86102358685118954, abs=1e-12)
    assert rg.eta_hi == pytest.approx(1.8073549220576041, abs=1e-12)
    assert rg.L == pytest.approx(0.94633133520641457, abs=1e-12)
    assert rg.a == pytest.approx(0.5254526021359848, abs=1e-12)
    assert rg.xi_hi - rg.xi_lo == pytest.approx(rg.L, abs=1e-12)
    assert 0.0 <= rg.a < 1.0


def test_k0_reduction(k0_snr):
    rg = reduce_game(regions.corner_points(k0_snr))
    assert rg.L == pytest.approx(0.80735492205760411, abs=1e-12)
    assert rg.a == pytest.approx(0.064986808726474892, abs=1e-12)


def test_reduce_rejects_case_n(case_n_crossing_snr):
    with pytest.raises(EmptyReductionError):
        reduce_game(regions.corner_points(case_n_crossing_snr))


def test_case_e_reduction_collapses(case_e_snr):
    rg = reduce_game(regions.corner_points(case_e_snr))
    assert rg.xi_lo == rg.xi_hi
    assert rg.eta_lo == rg.eta_hi


@pytest.mark.parametrize("fixture", ["paper_snr", "k0_snr", "case_d_snr"])
def test_kernel_agrees_with_payoff(fixture, request):
    """Closed-form kernel equals the payoff surface on the reduced square."""
    snr = request.getfixturevalue(fixture)
    cp = regions.corner_points(snr)
    rg = reduce_game(cp)
    rng = np.random.default_rng(11)
    xi = rng.uniform(rg.xi_lo, rg.xi_hi, size=100_000)
    eta = rng.uniform(rg.eta_lo, rg.eta_hi, size=100_000)
    diff = np.abs(reduced_kernel(rg, xi, eta) - regions.payoff(cp, xi, eta))
    assert diff.max() <= 1e-12
    assert np.max(np.abs(rg.kernel(xi, eta) - regions.payoff(cp, xi, eta))) == 0.0


def test_kernel_diagonals(paper_snr):
    rg = reduce_game(regions.corner_points(paper_snr))
    base = rg.xi_lo + rg.eta_lo
    # lower diagonal belongs to the zero set
    xi = rg.xi_lo + rg.a * rg.L / 2
    assert reduced_kernel(rg, xi, base + rg.a * rg.L - xi) == 0.0
    # upper diagonal attains the kernel maximum L(1-a)
    xi = rg.xi_lo + rg.L / 2
    assert reduced_kernel(rg, xi, base + rg.L - xi) == pytest.approx(
        rg.L * (1.0 - rg.a), abs=1e-12
    )
    # midpoint between the diagonals
    mid_sum = base + (rg.a + 1.0) * rg.L / 2.0
    assert reduced_kernel(rg, xi, mid_sum - xi) == pytest.approx(
        rg.L * (1.0 - rg.a) / 2.0, abs=1e-12
    )


def test_kernel_rejects_outside(paper_snr):
    rg = reduce_game(regions.corner_points(paper_snr))
    with pytest.raises(WrongCaseError):
        reduced_kernel(rg, rg.xi_lo - 0.1, rg.eta_lo)
    with pytest.raises(WrongCaseError):
        reduced_kernel(rg, rg.xi_lo, rg.eta_hi + 0.1)


def test_elimination_soundness(paper_snr):
    """Eliminated strategies never beat their clamped counterparts."""
    cp = regions.corner_points(paper_snr)
    rg = reduce_game(cp)
    etas = np.linspace(rg.eta_lo, rg.eta_hi, 101)
    # source rates below Omega_S are dominated by Omega_S
    for xi_bad in np.linspace(0.0, rg.xi_lo - 1e-9, 20):
        assert np.all(
            regions.payoff(cp, xi_bad, etas) <= regions.payoff(cp, rg.xi_lo, etas) + 1e-12
        )
    # source rates above S_D - delta_R earn zero against surviving relay rates
    for xi_bad in np.linspace(rg.xi_hi + 1e-9, rg.xi_hi + 3.0, 20):
        assert np.all(regions.payoff(cp, xi_bad, etas) == 0.0)
    xis = np.linspace(rg.xi_lo, rg.xi_hi, 101)
    # relay rates outside [delta_R, Omega_R] are inferior for the minimizer
    for eta_bad in np.linspace(0.0, rg.eta_lo - 1e-9, 20):
        assert np.all(
            regions.payoff(cp, xis, eta_bad) >= regions.payoff(cp, xis, rg.eta_lo) - 1e-12
        )
    for eta_bad in np.linspace(rg.eta_hi + 1e-9, rg.eta_hi + 3.0, 20):
        assert np.all(
            regions.payoff(cp, xis, eta_bad) >= regions.payoff(cp, xis, rg.eta_hi) - 1e-12
        )


@settings(max_examples=200, deadline=None)
@given(
    x1=st.floats(min_value=0.0, max_value=1.0),
    x2=st.floats(min_value=0.0, max_value=1.0),
    frac=st.floats(min_value=0.0, max_value=1.0),
)
def test_kernel_lipschitz_within_triangles(paper_snr, x1, x2, frac):
    """1-Lipschitz along the xi axis on each side of the upper diagonal."""
    rg = reduce_game(regions.corner_points(paper_snr))
    eta = rg.eta_lo + frac * rg.L
    xi1 = rg.xi_lo + x1 * rg.L
    xi2 = rg.xi_lo + x2 * rg.L
    upper = rg.xi_lo + rg.eta_lo + rg.L
    same_side = (xi1 + eta <= upper) == (xi2 + eta <= upper)
    if same_side:
        k1 = reduced_kernel(rg, xi1, eta)
        k2 = reduced_kernel(rg, xi2, eta)
        assert abs(k1 - k2) <= abs(xi1 - xi2) + 1e-12


def test_generic_reduction_bc_keeps_square(figure_network):
    """B/C-style geometry (relay kink above the eavesdropper's noise corner)
    still reduces to a square: the fifth elimination binds before Delta_S."""
    from secrecygame.channel import compute_snrs

    net = figure_network.replace_gain("h_RE", 0.25 + 0j)
    cp = regions.corner_points(compute_snrs(net))
    assert regions.classify(cp).tag == regions.CASE_GENERIC
    rg = reduce_game(cp)
    assert rg.eta_lo == pytest.approx(cp.delta_R, abs=1e-12)
    assert rg.eta_hi == pytest.approx(cp.Omega_R, abs=1e-12)
    assert rg.xi_lo == pytest.approx(cp.Omega_S, abs=1e-12)
    assert rg.xi_hi == pytest.approx(cp.S_D - cp.delta_R, abs=1e-12)
    assert rg.xi_hi - rg.xi_lo == pytest.approx(rg.eta_hi - rg.eta_lo, abs=1e-12)


def test_generic_reduction_fk_is_rectangle():
    """F/K-style geometry (destination kink inside the eavesdropper diagonal)
    reduces to a genuinely non-square rectangle capped at Delta_S."""
    cp = regions.corner_points(SnrSet(2.0, 8.0, 1.0, 4.0))
    assert regions.classify(cp).tag == regions.CASE_GENERIC
    rg = reduce_game(cp)
    assert rg.xi_hi == pytest.approx(cp.Delta_S, abs=1e-12)
    assert cp.Delta_S < cp.S_D - cp.delta_R
    assert rg.xi_hi - rg.xi_lo < rg.eta_hi - rg.eta_lo - 1e-3
