import numpy as np
import pytest

from dwfsim.channels import ad, apply_channel, kraus_set, rtn
from dwfsim.linalg import dm
from dwfsim.measures import concurrence
from dwfsim.protect import (
    FilterStrengths,
    optimize_pq,
    protect_evolve,
    qmr_operator,
    success_surface,
    wm_operator,
)
from dwfsim.states import bell, two_qubit_negative
from conftest import rand_rho

NM_AD = ad(0.01, 5.0)


def test_wm_qmr_matrices():
    assert np.allclose(wm_operator(0.0), np.eye(4), atol=1e-15)
    assert np.allclose(qmr_operator(0.0), np.eye(4), atol=1e-15)
    assert np.allclose(np.diag(wm_operator(0.75)), [1.0, 0.5, 0.5, 0.25], atol=1e-12)
    assert np.allclose(np.diag(qmr_operator(0.75)), [0.25, 0.5, 0.5, 1.0], atol=1e-12)


def test_filter_strength_bounds():
    for bad in (-0.1, 1.0, 1.5):
        with pytest.raises(ValueError):
            wm_operator(bad)
        with pytest.raises(ValueError):
            qmr_operator(bad)
        with pytest.raises(ValueError):
            FilterStrengths(bad, 0.0)


def test_wm_leaves_ground_state_alone():
    ground = np.zeros(4, dtype=complex)
    ground[0] = 1.0
    for p in (0.1, 0.5, 0.99):
        assert np.allclose(wm_operator(p) @ ground, ground, atol=1e-15)


def test_combined_filter_diagonal():
    # qmr(q) wm(p) is diagonal in the excitation number k with entries
    # sqrt((1-q)^(2-k) (1-p)^k)
    p, q = 0.3, 0.6
    combined = np.diag(qmr_operator(q) @ wm_operator(p)).real
    expected = [np.sqrt((1 - q) ** (2 - k) * (1 - p) ** k) for k in (0, 1, 1, 2)]
    assert np.allclose(combined, expected, atol=1e-12)


def test_identity_pipeline():
    rho = dm(bell("phi+"))
    out = protect_evolve(rho, NM_AD, 0.0, FilterStrengths(0.0, 0.0))
    assert np.allclose(out.state, rho, atol=1e-12)
    assert out.success_probability == pytest.approx(1.0, abs=1e-12)


def test_filters_off_reduces_to_channel(rng):
    rho = rand_rho(4, rng)
    for t in (0.7, 5.0):
        out = protect_evolve(rho, NM_AD, t, FilterStrengths(0.0, 0.0))
        direct = apply_channel(rho, kraus_set(NM_AD, 2, t), "two_local")
        assert np.max(np.abs(out.state - direct)) < 1e-12
        assert out.success_probability == pytest.approx(1.0, abs=1e-10)


def test_output_is_valid_state(rng):
    for _ in range(30):
        rho = rand_rho(4, rng)
        t = rng.uniform(0, 20)
        strengths = FilterStrengths(rng.uniform(0, 0.9), rng.uniform(0, 0.9))
        channel = NM_AD if rng.uniform() < 0.5 else rtn(0.05, 0.001)
        out = protect_evolve(rho, channel, t, strengths)
        assert np.max(np.abs(out.state - out.state.conj().T)) < 1e-10
        assert np.trace(out.state).real == pytest.approx(1.0, abs=1e-10)
        assert np.min(np.linalg.eigvalsh(out.state)) > -1e-9
        assert 0 < out.success_probability <= 1 + 1e-12


def test_pipeline_order_matters(rng):
    # applying the reversal before the channel must give a different state:
    # the implementation is not accidentally commuting the stages
    rho = dm(two_qubit_negative("ns2"))
    t, strengths = 3.0, FilterStrengths(0.3, 0.5)
    out = protect_evolve(rho, NM_AD, t, strengths)
    m_wm = wm_operator(strengths.p)
    m_qmr = qmr_operator(strengths.q)
    x = m_qmr @ rho @ m_qmr.conj().T
    x = apply_channel(x, kraus_set(NM_AD, 2, t), "two_local")
    x = m_wm @ x @ m_wm.conj().T
    swapped = x / np.trace(x).real
    assert np.max(np.abs(out.state - swapped)) > 1e-3


def test_pure_input_stays_pure_without_channel():
    for label in ("phi+", "psi-"):
        rho = dm(bell(label))
        out = protect_evolve(rho, None, 0.0, FilterStrengths(0.4, 0.4))
        evals = np.linalg.eigvalsh(out.state)
        assert evals[-1] == pytest.approx(1.0, abs=1e-9)
        assert np.all(evals[:-1] < 1e-9)


def test_vanishing_success_raises():
    rho = np.zeros((4, 4), dtype=complex)
    rho[3, 3] = 1.0  # doubly excited state
    p = 1 - 1e-7  # trace scales as (1-p)^2 = 1e-14 < threshold
    with pytest.raises(ValueError):
        protect_evolve(rho, None, 0.0, FilterStrengths(p, 0.0))


def test_optimize_bell_flat_optimum():
    best, value = optimize_pq(dm(bell("phi+")), step=0.01)
    assert value == pytest.approx(1.0, abs=1e-9)
    assert best.p == 0.0 and best.q == 0.0


def test_optimize_step_validation(rng):
    with pytest.raises(ValueError):
        optimize_pq(rand_rho(4, rng), step=0.2)


def test_optimize_ns2_reaches_bell_level():
    rho = dm(two_qubit_negative("ns2"))
    best, value = optimize_pq(rho, step=0.01)
    assert value >= 0.98
    paper = protect_evolve(rho, None, 0.0, FilterStrengths(0.05, 0.74))
    assert value - concurrence(paper.state) <= 0.02


def test_success_surface_basics():
    rho = dm(bell("phi+"))
    ps, qs, grid = success_surface(rho, None, 0.0, 0.5)
    assert grid.shape == (2, 2)
    assert grid[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(grid <= 1 + 1e-12)
    assert np.all(grid > 0)


def test_success_surface_decreases_near_origin():
    rho = dm(bell("phi+"))
    _, _, grid = success_surface(rho, NM_AD, 10.0, 0.1)
    assert grid[1, 0] < grid[0, 0]
    assert grid[0, 1] < grid[0, 0]


def test_protection_costs_success_probability():
    rho = dm(two_qubit_negative("ns2"))
    strong = protect_evolve(rho, NM_AD, 0.0, FilterStrengths(0.05, 0.74))
    off = protect_evolve(rho, NM_AD, 0.0, FilterStrengths(0.0, 0.0))
    assert strong.success_probability < off.success_probability
