"""The untwisted mode engine: axioms, weight bookkeeping, distinguished
vectors, and the published mode identities recomputed from scratch."""

from fractions import Fraction

import pytest

from orbifold_voa.fock import heis_act, lattice_vector, u_term, vacuum
from orbifold_voa.ring import RingParams
from orbifold_voa.untwisted import (
    commutator_check,
    e_vec,
    f_vec,
    j_vec,
    omega_vec,
    p_coeff_apply,
    vertex_mode,
)


@pytest.fixture(scope="module", params=(1, 2, 3, 4))
def params(request):
    return RingParams(request.param)


def test_identity_operator(params):
    v = u_term(params, [2, 1], 3)
    assert vertex_mode(vacuum(params), -1, v) == v
    for m in (-3, -2, 0, 1):
        assert vertex_mode(vacuum(params), m, v).is_zero()


def test_grading_mode(params):
    k = params.k
    om = omega_vec(params)
    for r in range(0, 2 * k + 1):
        e_r = lattice_vector(params, r)
        assert vertex_mode(om, 1, e_r) == e_r * Fraction(r * r, 4 * k)
        x = heis_act(-2, e_r)
        assert vertex_mode(om, 1, x) == x * (Fraction(r * r, 4 * k) + 2)


def test_translation_mode(params):
    k = params.k
    om = omega_vec(params)
    assert vertex_mode(om, 0, vacuum(params)).is_zero()
    got = vertex_mode(om, 0, lattice_vector(params, 1))
    assert got == u_term(params, [1], 1, Fraction(1, 2 * k))
    assert vertex_mode(om, -1, vacuum(params)) == om


def test_translation_derivative_property(params):
    """Modes of the operator of L(-1)u are the z-derivative modes: the
    coefficient at exponent m picks up the factor -(m+1) after the shift."""
    om = omega_vec(params)
    for u in (lattice_vector(params, 1), u_term(params, [1], 0)):
        lu = vertex_mode(om, 0, u)  # L(-1) u
        v = lattice_vector(params, 1)
        wsum = u.max_weight() + v.max_weight()
        m0 = wsum - 1 - Fraction(1, 2 * params.k) - 2
        for j in range(4):
            m = m0 + j
            lhs = vertex_mode(lu, m, v)
            rhs = vertex_mode(u, m - 1, v) * (-(m))
            # d/dz sum u_m z^(-m-1) = sum (-m-1) u_m z^(-m-2): the mode at
            # exponent m of the derivative is -(m) times the mode at m-1
            assert lhs == rhs, (params.k, m)


def test_exponent_support(params):
    k = params.k
    u = lattice_vector(params, 1)
    v = lattice_vector(params, 1)
    on_grid = -Fraction(1, 2 * k) - 1
    assert not vertex_mode(u, on_grid, v).is_zero()
    for off in (on_grid + Fraction(1, 4 * k + 1), on_grid + Fraction(1, 2)):
        if (off + Fraction(1, 2 * k)).denominator != 1:
            assert vertex_mode(u, off, v).is_zero()


def test_weight_bookkeeping(params):
    k = params.k
    u = u_term(params, [2], 1)
    v = u_term(params, [1], 1)
    for j in range(-2, 3):
        m = -Fraction(1, 2 * k) + j
        got = vertex_mode(u, m, v)
        for key in got.terms:
            assert got.key_weight(key) == u.max_weight() + v.max_weight() - m - 1


def test_truncation_soundness(params):
    """Results never depend on the cutoff argument on components within it."""
    u = e_vec(params)
    v = lattice_vector(params, params.k)
    m = -Fraction(params.k, 2) - 1
    lo = vertex_mode(u, m, v, cutoff=10)
    hi = vertex_mode(u, m, v, cutoff=50)
    assert lo == hi


def test_cutoff_guard(params):
    v = u_term(params, [5], 0)
    with pytest.raises(ValueError):
        vertex_mode(vacuum(params), -1, v, cutoff=2)


def test_distinguished_vectors_theta_parity(params):
    from orbifold_voa.fock import theta

    assert theta(omega_vec(params)) == omega_vec(params)
    assert theta(j_vec(params)) == j_vec(params)
    assert theta(e_vec(params)) == e_vec(params)
    assert theta(f_vec(params)) == f_vec(params) * (-1)
    assert omega_vec(params).max_weight() == 2
    assert j_vec(params).max_weight() == 4
    assert e_vec(params).max_weight() == params.k


def test_symmetric_mode_fixes_half_lattice_top(params):
    k = params.k
    E = e_vec(params)
    v0 = lattice_vector(params, k) + lattice_vector(params, -k)
    assert vertex_mode(E, k - 1, v0) == v0
    v1 = lattice_vector(params, k) - lattice_vector(params, -k)
    assert vertex_mode(E, k - 1, v1) == v1 * (-1)


def test_oscillator_transfer_identity(params):
    k = params.k
    E = e_vec(params)
    w = heis_act(-1, lattice_vector(params, k)) - heis_act(-1, lattice_vector(params, -k))
    v0 = lattice_vector(params, k) + lattice_vector(params, -k)
    assert vertex_mode(E, k, w) == v0 * (2 * k)


def test_zero_mode_creation_series(params):
    k = params.k
    E = e_vec(params)
    v0 = lattice_vector(params, k) + lattice_vector(params, -k)
    lhs = vertex_mode(E, 0, v0)
    rhs = p_coeff_apply(params, +1, k - 1, lattice_vector(params, k)) + p_coeff_apply(
        params, -1, k - 1, lattice_vector(params, -k)
    )
    assert lhs == rhs


def test_p_coeff_basics(params):
    v = lattice_vector(params, 1)
    assert p_coeff_apply(params, +1, 0, v) == v
    assert p_coeff_apply(params, +1, 1, v) == heis_act(-1, v)
    assert p_coeff_apply(params, -1, 1, v) == heis_act(-1, v) * (-1)


def test_commutator_with_lattice_operator():
    for k in (1, 2):
        params = RingParams(k)
        for m in (-2, -1, 0, 1, 2):
            assert commutator_check(params, m, 1, 4 if k == 1 else 3, coset=0)
    # the identity operator commutes outright
    params = RingParams(1)
    v = u_term(params, [1], 0)
    for m in (-1, 1):
        lhs = heis_act(m, vertex_mode(vacuum(params), -1, v))
        rhs = vertex_mode(vacuum(params), -1, heis_act(m, v))
        assert lhs == rhs


def test_antisymmetric_transfer_of_oscillator_zero_mode(params):
    """The zero mode of the degree-one oscillator state against the
    symmetric lattice vector lands on the antisymmetric one."""
    k = params.k
    E = e_vec(params)
    a1 = u_term(params, [1], 0)
    assert vertex_mode(E, 0, a1) == f_vec(params) * (-2 * k)
    for i in range(1, k + 1):
        assert vertex_mode(E, i, a1).is_zero()
