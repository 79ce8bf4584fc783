import numpy as np
import pytest

from qforge.errors import NotNormalized
from qforge.qmath import bell_state, random_pure_state, random_su2
from qforge.synth_pure import MAXIMAL_GUARD, solve_pure, verify_pure


def det2(psi):
    return psi[0] * psi[3] - psi[1] * psi[2]


def seam_state(rng, dist):
    """Random state with |ad - bc| = 1/2 - dist."""
    bell = np.kron(random_su2(rng), random_su2(rng)) @ bell_state("phi+")
    other = random_pure_state(rng)
    other -= np.vdot(bell, other) * bell
    other /= np.linalg.norm(other)
    # |D| of cos(t) bell + sin(t) other decreases from 1/2; bisect on t
    lo, hi = 0.0, np.pi / 2
    target = 0.5 - dist
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        psi = np.cos(mid) * bell + np.sin(mid) * other
        if abs(det2(psi / np.linalg.norm(psi))) > target:
            lo = mid
        else:
            hi = mid
    psi = np.cos(lo) * bell + np.sin(lo) * other
    return psi / np.linalg.norm(psi)


def test_product_state_recipe():
    recipe = solve_pure(np.array([0, 1, 0, 0], dtype=complex))
    assert recipe.source.theta == 0.0  # |HH> seed
    assert verify_pure(recipe, np.array([0, 1, 0, 0], dtype=complex)) > 1.0 - 1e-12


def test_random_product_states():
    rng = np.random.default_rng(3)
    for _ in range(200):
        psi = np.kron(
            random_su2(rng) @ np.array([1, 0]), random_su2(rng) @ np.array([1, 0])
        )
        recipe = solve_pure(psi)
        assert verify_pure(recipe, psi) > 1.0 - 1e-10


def test_bell_state_case_i():
    recipe = solve_pure(bell_state("phi+"))
    assert verify_pure(recipe, bell_state("phi+")) > 1.0 - 1e-12
    assert recipe.source.theta == pytest.approx(np.pi / 4.0)


def test_maximal_case_ii_exchange():
    psi = bell_state("psi+")  # a = d = 0, |b| = |c| = 1/sqrt(2)
    recipe = solve_pure(psi)
    assert verify_pure(recipe, psi) > 1.0 - 1e-12


def test_maximal_case_iii():
    psi = np.array([1.0, 1.0, -1.0, 1.0], dtype=complex) / 2.0
    assert abs(abs(det2(psi)) - 0.5) < 1e-12
    recipe = solve_pure(psi)
    assert verify_pure(recipe, psi) > 1.0 - 1e-12


def test_generic_branch_example():
    psi = np.array([0.8, 0.0, 0.0, 0.6], dtype=complex)
    recipe = solve_pure(psi)
    # alpha = sqrt(1 - sqrt(1 - 4 |ad|^2)) / sqrt(2) = 0.6 for |ad| = 0.48
    assert np.cos(recipe.source.theta) == pytest.approx(0.6, abs=1e-12)
    assert np.sin(recipe.source.theta) == pytest.approx(0.8, abs=1e-12)
    assert verify_pure(recipe, psi) > 1.0 - 1e-12


def test_alpha_is_minor_coefficient_on_generic_branch():
    rng = np.random.default_rng(21)
    for _ in range(300):
        psi = random_pure_state(rng)
        d = abs(det2(psi))
        if d < 1e-6 or abs(1.0 - 2.0 * d) < 1e-6:
            continue
        recipe = solve_pure(psi)
        alpha, beta_mag = np.cos(recipe.source.theta), np.sin(recipe.source.theta)
        assert alpha <= beta_mag + 1e-12
        assert verify_pure(recipe, psi) > 1.0 - 1e-10


def test_unitarity_all_branches():
    rng = np.random.default_rng(29)
    states = [random_pure_state(rng) for _ in range(200)]
    states += [bell_state(n) for n in ("phi+", "phi-", "psi+", "psi-")]
    states += [seam_state(rng, 10.0**-k) for k in range(3, 10)]
    states += [np.array([0, 1, 0, 0], dtype=complex)]
    for psi in states:
        recipe = solve_pure(psi)
        for u in (recipe.u_a, recipe.u_b):
            assert np.abs(u @ u.conj().T - np.eye(2)).max() < 1e-10


def test_branch_boundary_continuity():
    # |ad - bc| = 1/2 - 10^-k for k = 3..9; no blow-up at the seam
    rng = np.random.default_rng(55)
    for k in range(3, 10):
        for _ in range(5):
            psi = seam_state(rng, 10.0**-k)
            recipe = solve_pure(psi)
            assert verify_pure(recipe, psi) >= 1.0 - 1e-8, f"k={k}"


def test_near_product_stability():
    rng = np.random.default_rng(77)
    for x in (1e-11, 1e-10, 1e-9, 1e-7):
        a = np.sqrt(1.0 - x * x)
        psi = np.array([a, 0.0, 0.0, x], dtype=complex)
        recipe = solve_pure(psi)
        assert verify_pure(recipe, psi) > 1.0 - 1e-10
        # and with extra rotations thrown in
        psi2 = np.kron(random_su2(rng), random_su2(rng)) @ psi
        recipe2 = solve_pure(psi2)
        assert verify_pure(recipe2, psi2) > 1.0 - 1e-10


def test_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        solve_pure(np.array([1.0, 1.0, 0.0, 0.0], dtype=complex))


def test_waveplate_expansion_matches_unitaries():
    from qforge.elements import compose_waveplates

    rng = np.random.default_rng(31)
    for _ in range(20):
        psi = random_pure_state(rng)
        recipe = solve_pure(psi)
        for wp, u in ((recipe.wp_a, recipe.u_a), (recipe.wp_b, recipe.u_b)):
            w = compose_waveplates(wp)
            assert 1.0 - abs(np.trace(w.conj().T @ u)) / 2.0 < 1e-10


def test_guard_width():
    assert MAXIMAL_GUARD == 1e-8
