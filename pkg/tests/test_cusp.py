from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from charcoords.cusp import (
    TAU, TORUS_RELATOR, Cocycle, CuspShape, cocycle_from_form, cohomology_basis, const, cup_pairing,
    growth_exponent, integrate_form, is_square_integrable, omega, pairing_matrix, torus_images, word_of_class,
)
from charcoords.exact import Matrix, NumberField, Poly, det, specialize, to_complex
from charcoords.liealg import pairing_constants
from charcoords.rep import h_plus_power


def test_const_omega_pairing_is_symbolic_in_tau():
    a, b = Fraction(2, 3), -5
    for n in range(2, 7):
        c = pairing_constants(n).c
        for i in range(1, n):
            for j in range(1, n):
                want = c[i - 1] * (a * TAU - b) if i == j else 0
                assert cup_pairing(const(a, b, i), omega(j), n) == want


def test_same_family_pairings_vanish():
    for n in range(2, 6):
        for i in range(1, n):
            for j in range(1, n):
                assert cup_pairing(omega(i), omega(j), n) == 0
                assert cup_pairing(const(1, 2, i), const(3, -1, j), n) == 0


def test_pairing_is_antisymmetric():
    forms = lambda n: [omega(i) for i in range(1, n)] + [const(1, Fraction(1, 2), j) for j in range(1, n)]
    for n in range(2, 5):
        for f in forms(n):
            for g in forms(n):
                assert cup_pairing(f, g, n) == -cup_pairing(g, f, n)


def test_growth_exponents():
    for n in range(2, 11):
        for j in range(1, n):
            assert growth_exponent(const(1, 0, j), n) == -2 * j
            assert is_square_integrable(const(0, 1, j), n)
            assert growth_exponent(omega(j), n) == 2 * j
            assert not is_square_integrable(omega(j), n)


def test_cohomology_basis_n2_determinant():
    forms = cohomology_basis(2)
    assert len(forms) == 2
    c1 = pairing_constants(2).c[0]
    # an antisymmetric 2x2 matrix has determinant equal to the square of its entry
    assert det(pairing_matrix(forms, 2)) == c1**2 * TAU**2


def test_cohomology_basis_rejects_b_equal_a_tau():
    tau = NumberField([1, -1, 1], "w")([2, -4])
    with pytest.raises(ValueError):
        cohomology_basis(3, 1, tau, CuspShape(tau))
    with pytest.raises(ValueError):
        cohomology_basis(3, 2, 2 * TAU)


def test_cohomology_basis_nondegenerate():
    for n in range(2, 7):
        assert det(pairing_matrix(cohomology_basis(n), n)) != 0


def test_forms_give_cocycles():
    for n in range(2, 6):
        for i in range(1, n):
            for form in (omega(i), const(1, 3, i)):
                d = cocycle_from_form(form, n)
                assert d.relator_defect(TORUS_RELATOR).is_zero()


def test_segment_integral_is_path_independent():
    # the cocycle rule along m^p then l^q reproduces the straight segment
    for n in range(2, 7):
        for i in range(1, n):
            d = cocycle_from_form(omega(i), n)
            for pq in ((2, 0), (1, 1), (2, -1), (-1, 2)):
                assert d.evaluate(word_of_class(pq)) == integrate_form(omega(i), pq, n)


def test_longitude_value_matches_quadrature():
    K = NumberField([1, -1, 1], "w")
    tau = K([2, -4])
    cusp = CuspShape(tau, 1, -1)
    t = to_complex(tau)
    nodes, weights = np.polynomial.legendre.leggauss(12)
    for n in range(2, 6):
        hp = np.diag(np.arange(1, n, dtype=float), 1)
        hm = np.diag(np.arange(n - 1, 0, -1, dtype=float), -1)
        for i in range(1, n):
            hmi = np.linalg.matrix_power(hm, i)
            want = sum(
                w / 2 * t * scipy.linalg.expm((x + 1) / 2 * t * hp) @ hmi @ scipy.linalg.expm(-(x + 1) / 2 * t * hp)
                for x, w in zip(nodes, weights)
            )
            got = integrate_form(omega(i), (0, 1), n, cusp)
            got = np.array([[to_complex(e) for e in row] for row in got.rows])
            assert np.max(np.abs(got - want)) < 1e-11 * np.max(np.abs(want))


def test_const_integral():
    assert integrate_form(const(2, 3, 1), (1, 1), 3) == h_plus_power(3, 1) * 5


def test_coboundary_is_a_cocycle():
    n = 3
    images, inverses = torus_images(n, CuspShape())
    v = Matrix([[1, 2, 0], [0, -1, 3], [1, 0, 0]])
    cb = Cocycle.coboundary(v, images, inverses)
    assert cb.relator_defect(TORUS_RELATOR).is_zero()
    assert (cocycle_from_form(omega(1), n) + cb).relator_defect(TORUS_RELATOR).is_zero()


def test_cusp_shape_validation():
    with pytest.raises(ValueError):
        CuspShape(Fraction(1, 2))
    with pytest.raises(ValueError):
        CuspShape(TAU, 2)
    with pytest.raises(ValueError):
        omega(3).check(3)
    with pytest.raises(ValueError):
        from charcoords.cusp import TorusForm

        TorusForm("bogus", 1)


def test_minus_lift_images():
    cusp = CuspShape(TAU, -1, 1)
    assert cusp.eigenvalue(4, (1, 0)) == -1
    assert cusp.eigenvalue(3, (1, 0)) == 1
    assert cusp.eigenvalue(4, (2, 0)) == 1
    assert specialize(cusp.rho(2, (0, 1)), "tau", 0) == Matrix.identity(2)
    assert isinstance(cusp.translation((1, 1)), Poly)
