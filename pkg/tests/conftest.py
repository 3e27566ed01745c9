"""Shared fixtures and independent oracles for the test suite.

The oracles here are deliberately written from the raw definitions (region
inequalities, support enumeration) rather than through the package's own
boundary/LP code, so the tests check the implementation against independent
computations.
"""

import itertools
import math

import numpy as np
import pytest

from secrecygame.channel import NetworkConfig, SnrSet
from secrecygame import regions
from secrecygame.reduction import reduce_game


# --- reference instances ---------------------------------------------------


@pytest.fixture(scope="session")
def paper_snr():
    """|h_SD|=1, |h_RD|=1/2, |h_SE|=|h_RE|=2/3, P=10, N_0=1 (case A, a>1/2)."""
    return SnrSet(10.0, 2.5, 40.0 / 9.0, 40.0 / 9.0)


@pytest.fixture(scope="session")
def paper_network():
    return NetworkConfig(
        h_SD=1.0, h_RD=0.5, h_SE=2.0 / 3.0, h_RE=2.0 / 3.0, P_S=10.0, P_R=10.0, N_0=1.0
    )


@pytest.fixture(scope="session")
def k0_snr():
    """Case A with a ~ 0.065 (closed-form regime)."""
    return SnrSet(10.0, 2.5, 3.0, 4.0)


@pytest.fixture(scope="session")
def case_d_snr():
    """delta_S = Omega_S - 0.5 with a unit reduced square."""
    return SnrSet(8.0 * (2.0**2.5 - 1.0), 7.0, 3.0, 12.0)


@pytest.fixture(scope="session")
def case_e_snr():
    return SnrSet(30.0, 1.0, 3.0, 20.0)


@pytest.fixture(scope="session")
def case_l_snr():
    return SnrSet(1.0, 99.0, 0.2, 40.0)


@pytest.fixture(scope="session")
def case_m_snr():
    return SnrSet(10.0, 0.8, 3.2, 0.05)


@pytest.fixture(scope="session")
def case_n_crossing_snr():
    """Boundaries cross in the middle although both flat gaps are positive."""
    return SnrSet(10.0, 2.0, 8.0, 30.0)


@pytest.fixture(scope="session")
def figure_network():
    """Sweep base configuration used for the figure-level properties."""
    return NetworkConfig(
        h_SD=1.0,
        h_RD=0.2 - 0.2j,
        h_SE=0.4 + 0.4j,
        h_RE=0.0,
        P_S=10.0,
        P_R=10.0,
        N_0=1.0,
    )


# --- independent region membership (from the raw inequalities) --------------


def in_dest_region(snr: SnrSet, xi: float, eta: float) -> bool:
    """(xi, eta) decodable at the destination: MAC triple union noise strip."""
    mac = (
        xi <= math.log2(1 + snr.gamma_SD)
        and eta <= math.log2(1 + snr.gamma_RD)
        and xi + eta <= math.log2(1 + snr.gamma_SD + snr.gamma_RD)
    )
    strip = xi <= math.log2(1 + snr.gamma_SD / (1 + snr.gamma_RD))
    return mac or strip


def in_eaves_region(snr: SnrSet, xi: float, eta: float) -> bool:
    mac = (
        xi <= math.log2(1 + snr.gamma_SE)
        and eta <= math.log2(1 + snr.gamma_RE)
        and xi + eta <= math.log2(1 + snr.gamma_SE + snr.gamma_RE)
    )
    strip = xi <= math.log2(1 + snr.gamma_SE / (1 + snr.gamma_RE))
    return mac or strip


# --- brute-force matrix game oracle (support enumeration) -------------------


def brute_force_game(A: np.ndarray, tol: float = 1e-9):
    """Equilibrium (value, x, y) of a zero-sum matrix game by enumeration.

    Tries every pair of equal-size supports (Shapley-Snow square kernels),
    solves the equalization system, and returns the first pair passing the
    full equilibrium inequalities. Only meant for small matrices.
    """
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    for k in range(1, min(m, n) + 1):
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                sub = A[np.ix_(rows, cols)]
                # unknowns: x_k (row probs), v; equalize over support columns
                lhs = np.zeros((k + 1, k + 1))
                lhs[:k, :k] = sub.T
                lhs[:k, k] = -1.0
                lhs[k, :k] = 1.0
                rhs = np.zeros(k + 1)
                rhs[k] = 1.0
                try:
                    sol = np.linalg.solve(lhs, rhs)
                except np.linalg.LinAlgError:
                    continue
                x_s, v = sol[:k], sol[k]
                lhs_y = np.zeros((k + 1, k + 1))
                lhs_y[:k, :k] = sub
                lhs_y[:k, k] = -1.0
                lhs_y[k, :k] = 1.0
                rhs_y = np.zeros(k + 1)
                rhs_y[k] = 1.0
                try:
                    sol_y = np.linalg.solve(lhs_y, rhs_y)
                except np.linalg.LinAlgError:
                    continue
                y_s, v2 = sol_y[:k], sol_y[k]
                if abs(v - v2) > tol or x_s.min() < -tol or y_s.min() < -tol:
                    continue
                x = np.zeros(m)
                x[list(rows)] = np.clip(x_s, 0.0, None)
                y = np.zeros(n)
                y[list(cols)] = np.clip(y_s, 0.0, None)
                if (x @ A).min() >= v - tol and (A @ y).max() <= v + tol:
                    return v, x, y
    raise AssertionError("support enumeration found no equilibrium")


# --- random case-A instances -------------------------------------------------


def random_case_a_snr(rng: np.random.Generator, a_max: float = 0.5) -> SnrSet:
    """Rejection-sample a case-A geometry with offset a in [0, a_max]."""
    for _ in range(10_000):
        gsd = 10.0 ** rng.uniform(0.3, 1.5)
        grd = 10.0 ** rng.uniform(-0.3, 1.0)
        gse = gsd * rng.uniform(0.15, 0.95)
        gre = 10.0 ** rng.uniform(-0.3, 1.2)
        snr = SnrSet(gsd, grd, gse, gre)
        cp = regions.corner_points(snr)
        if regions.classify(cp).tag != regions.CASE_A:
            continue
        a = reduce_game(cp).a
        if 0.0 <= a <= a_max:
            return snr
    raise AssertionError("case-A sampler failed to produce an instance")
