import json

import numpy as np
import pytest
from helpers import random_boundary_point, random_frequency, random_law, random_side

from vsheet.background import (
    Bump,
    ConstantBackground,
    PerturbationSpec,
    PressureLaw,
    SideState,
    make_constant_background,
    make_perturbed_background,
    sound_speed,
)
from vsheet.errors import DomainError, NondegeneracyError
from vsheet.symbols import (
    ALG,
    I2,
    A1_matrix,
    A2_matrix,
    Frequency,
    algebraic_block_printed,
    assemble_A1,
    assemble_A2,
    assemble_A2tilde,
    assemble_T_A0,
    beta_matrix,
    boundary_symbols,
    matrix_to_json,
    principal_symbol,
    symmetrizer,
)

UNIT = SideState(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def test_frequency_basics():
    f = Frequency(0.6, 0.0, 0.8)
    assert f.on_hemisphere and f.tau == complex(0.6, 0.0)
    assert not Frequency(1.0, 1.0, 1.0).on_hemisphere
    with pytest.raises(DomainError):
        Frequency(0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        Frequency(-0.1, 0.0, 1.0)
    g = Frequency.from_speed(0.7, 0.2, -1.0)
    assert g.on_hemisphere and g.eta < 0 and g.delta / g.eta == pytest.approx(0.7)


# --- interior matrices ----------------------------------------------------------


def test_A1_at_unit_density_rest_state(law):
    A = np.asarray(assemble_A1(UNIT, law))
    expected = np.zeros((7, 7))
    expected[0, 1] = expected[1, 0] = 1.0
    assert np.array_equal(A, expected)


def test_A2_at_unit_density_rest_state(law):
    A = np.asarray(assemble_A2(UNIT, law))
    expected = np.zeros((7, 7))
    expected[0, 2] = expected[2, 0] = 1.0
    assert np.array_equal(A, expected)


def test_printed_entries(law, rng):
    s = random_side(rng)
    A1, A2 = A1_matrix(s, law), A2_matrix(s, law)
    assert A1[2, 2] == s.v and A1[3, 1] == -s.F11
    assert A2[1, 3] == -s.F21 and A2[2, 6] == -s.F22
    assert np.array_equal(A1[0], [s.v, s.rho, 0, 0, 0, 0, 0])
    assert np.allclose(A1[1], [law.dp(s.rho) / s.rho, s.v, 0, -s.F11, 0, -s.F12, 0])


def test_symmetrizer_makes_both_coefficients_symmetric(rng):
    for _ in range(200):
        law = random_law(rng)
        s = random_side(rng)
        S = symmetrizer(s, law)
        for A in (A1_matrix(s, law), A2_matrix(s, law)):
            SA = S @ A
            assert np.max(np.abs(SA - SA.T)) < 1e-12 * max(1.0, np.max(np.abs(SA)))


def test_unit_weight_symmetrizer_only_works_at_unit_density(law):
    s = SideState(1.0, 0.3, 0.0, 0.8, 0.0, -0.4, 0.0)
    for rho, ok in ((1.0, True), (2.0, False)):
        st = s.replace(rho=rho)
        SA = symmetrizer(st, law, printed=True) @ A1_matrix(st, law)
        assert bool(np.max(np.abs(SA - SA.T)) < 1e-14) == ok


def test_nonpositive_density_rejected(law):
    with pytest.raises(DomainError):
        A1_matrix(SideState(1.0, 0, 0, 0, 0, 0, 0).replace(rho=-1.0), law)


def test_A2tilde_flat_states(bp_super, law):
    assert np.array_equal(np.asarray(assemble_A2tilde(bp_super.right, law)), A2_matrix(bp_super.right, law))
    assert np.array_equal(np.asarray(assemble_A2tilde(bp_super.left, law)), -A2_matrix(bp_super.left, law))


def test_A2tilde_nondegeneracy_guard(law):
    s = SideState(1.0, 0, 0, 0, 0, 0, 0, d2Phi=0.2)
    with pytest.raises(NondegeneracyError):
        assemble_A2tilde(s, law)


def test_A2tilde_constant_rank_on_perturbed_state(supersonic, law):
    b = Bump(0.05, (0, 0, 0), (1, 1, 1), "gaussian")
    pert = PerturbationSpec(phi=b, rho=b, v_r=b, F11_r=b, F12_r=b)
    bp = make_perturbed_background(supersonic, pert, (0.2, 0.3, 0.4))
    for s in (bp.right, bp.left):
        sv = np.linalg.svd(np.asarray(assemble_A2tilde(s, law)), compute_uv=False)
        assert np.sum(sv > 1e-8) == 2 and np.all(np.sort(sv)[:5] < 1e-10)


def test_T_flat_state_matches_printed_display():
    # rho = 2 with p = rho**2 gives c = 2, so c / rho = 1
    law = PressureLaw(kappa=1.0, gamma_ad=2.0)
    s = SideState(2.0, 0.4, 0.0, 0.3, 0.0, -0.2, 0.0)
    T, Ti, A0 = (np.asarray(m) for m in assemble_T_A0(s, law))
    assert T[0, 1] == T[0, 2] == 1.0
    assert T[1, 0] == 1.0 and T[1, 1] == 0.0 and T[1, 2] == 0.0
    assert T[2, 1] == 1.0 and T[2, 2] == -1.0
    assert np.array_equal(T[3:, 3:], np.eye(4))
    assert np.allclose(np.diag(A0), [1, 0.5, -0.5, 1, 1, 1, 1])


def test_closed_form_inverse_and_diagonalisation(rng):
    for _ in range(200):
        law = random_law(rng)
        s = random_side(rng, "r" if rng.random() < 0.5 else "l")
        T, Ti, A0 = (np.asarray(m) for m in assemble_T_A0(s, law))
        assert np.max(np.abs(Ti @ T - np.eye(7))) < 1e-12
        D = Ti @ np.asarray(assemble_A2tilde(s, law)) @ T
        lam = sound_speed(law, s.rho) * s.bracket / s.d2Phi
        assert np.max(np.abs(D - np.diag([0, lam, -lam, 0, 0, 0, 0]))) < 1e-12 * max(1, abs(lam))
        assert np.max(np.abs(A0 @ D - I2)) < 1e-12


def test_principal_symbol_at_eta_zero_is_A0(bp_super, law):
    s = bp_super.right
    A = np.asarray(principal_symbol(s, law, Frequency(1.0, 0.0, 0.0)))
    _, _, A0 = assemble_T_A0(s, law)
    assert np.array_equal(A, np.asarray(A0).astype(complex))


def test_principal_symbol_degree_one(rng, law):
    for _ in range(50):
        s = random_side(rng)
        f = random_frequency(rng)
        a = np.asarray(principal_symbol(s, law, f))
        b = np.asarray(principal_symbol(s, law, f.scaled(2.0)))
        assert np.max(np.abs(b - 2 * a)) < 1e-13 * np.max(np.abs(a))


def test_algebraic_rows_match_printed_block(supersonic, law, rng):
    for cb in (supersonic, ConstantBackground(1.3, 0.4, 0.7, -0.5, PressureLaw(kappa=1.2, gamma_ad=1.6))):
        bp = make_constant_background(cb)
        for _ in range(20):
            f = random_frequency(rng)
            s = bp.right
            A = np.asarray(principal_symbol(s, cb.pressure, f))
            P = algebraic_block_printed(s, cb.pressure, f.tau, f.eta)
            assert np.max(np.abs(A[list(ALG)] - P)) < 1e-13


# --- boundary symbols -------------------------------------------------------------


def test_Pi_annihilates_b(rng):
    worst = 0.0
    for _ in range(1000):
        bp = random_boundary_point(rng)
        bs = boundary_symbols(bp, random_frequency(rng))
        worst = max(worst, float(np.max(np.abs(bs.Pi @ bs.b))))
    assert worst < 1e-14


def test_beta_first_row_constant_background(bp_super, rng):
    for _ in range(20):
        bs = boundary_symbols(bp_super, random_frequency(rng))
        assert np.allclose(bs.beta[0], [1, 1, -1, -1], atol=1e-15)


def test_beta_is_top_of_PiM_and_matches_printed_form(rng):
    for _ in range(100):
        bp = random_boundary_point(rng)
        f = random_frequency(rng)
        bs = boundary_symbols(bp, f)
        scale = max(1.0, np.max(np.abs(bs.beta)))
        assert np.max(np.abs(bs.beta - bs.PiM[:2][:, [0, 1, 4, 5]])) < 1e-12 * scale
        assert np.max(np.abs(bs.beta - beta_matrix(bp, f.tau, f.eta))) < 1e-12 * scale
        # the columns not in the non-characteristic block drop out of the first two rows
        assert np.max(np.abs(bs.PiM[:2][:, [2, 3, 6, 7]])) < 1e-12 * scale


def test_lower_rows_of_PiM_carry_a(rng):
    for _ in range(50):
        bp = random_boundary_point(rng)
        PiM = boundary_symbols(bp, random_frequency(rng)).PiM
        a = bp.right.bracket**2 * (bp.right.v - bp.left.v)
        sub = PiM[2:][:, [2, 3, 6, 7]]
        expected = np.array([[-a, 0, a, 0], [-a, 0, 0, 0], [0, -a, 0, a], [0, -a, 0, 0]])
        assert np.max(np.abs(sub - expected)) < 1e-12 * max(1.0, abs(a))


def test_beta_row_degrees(bp_sub):
    f = Frequency(0.3, 0.5, 0.8).normalized()
    b1 = beta_matrix(bp_sub, f.tau, f.eta)
    b3 = beta_matrix(bp_sub, 3 * f.tau, 3 * f.eta)
    deg = np.log(np.linalg.norm(b3, axis=1) / np.linalg.norm(b1, axis=1)) / np.log(3)
    assert deg == pytest.approx([0.0, 1.0], abs=1e-12)


def test_boundary_symbols_require_boundary_point(supersonic):
    bp = make_perturbed_background(supersonic, PerturbationSpec(), (0.0, 0.0, 0.5))
    with pytest.raises(DomainError):
        boundary_symbols(bp, Frequency(1.0, 0.0, 0.0))


def test_matrix_json_round_trip(bp_super, law):
    f = Frequency(0.2, 0.1, 0.9)
    sym = principal_symbol(bp_super.right, law, f)
    d = json.loads(json.dumps(matrix_to_json(sym, side="r", degree=1, location=[0, 0, 0],
                                             frequency={"gamma": 0.2, "delta": 0.1, "eta": 0.9})))
    back = np.array([[z["re"] + 1j * z["im"] for z in row] for row in d["data"]])
    assert np.array_equal(back, np.asarray(sym))
    assert d["side"] == "r" and d["degree"] == 1
