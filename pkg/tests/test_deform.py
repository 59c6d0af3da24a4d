from fractions import Fraction

import numpy as np
import pytest

from charcoords.cusp import TAU, CuspShape, cocycle_from_form, const
from charcoords.deform import (
    FirstOrderRep, basis_certificate, omega_cocycle, q_polynomial, q_polynomial_inverse_route,
    q_polynomial_oracle, sigma_derivative_matrix, sigma_derivatives_of_cocycle, torus_coboundary,
    weil_deform,
)
from charcoords.exact import Matrix, NumberField, Poly, shifted_power, to_complex

LAM = Poly.gen("lam")
FIG8_TAU = NumberField([1, -1, 1], "w")([2, -4])

# det J on gamma_1, frozen from the quadrature/expm/numpy-det oracle
# (charcoords.continuation.numeric_sigma_jacobian, independent of the exact code)
FROZEN_DET = {2: -1, 3: 16, 4: -8640, 5: 278691840, 6: -842764124160000}

LIFTS = [CuspShape(TAU, 1, 1), CuspShape(TAU, -1, 1), CuspShape(TAU, 1, -1), CuspShape(TAU, -1, -1)]


def test_n2_hand_computation():
    q = q_polynomial(1, 2)
    assert q.Q == LAM
    cert = sigma_derivative_matrix(2)
    assert cert.J == [[-1]]
    assert abs(cert.det) == 1
    assert cert.certified


@pytest.mark.parametrize("n", range(2, 7))
def test_frozen_determinants(n):
    assert sigma_derivative_matrix(n, check_oracle=False).det == FROZEN_DET[n]


@pytest.mark.parametrize("cusp", LIFTS)
def test_q_valuations_both_lifts(cusp):
    for n in range(2, 7):
        for pq in ((1, 0), (0, 1), (1, 1)):
            for i in range(1, n):
                q = q_polynomial(i, n, cusp, pq)
                assert q.Q(0) == 0
                assert q.v1 == n - i - 1
                c = cusp.eigenvalue(n, pq)
                assert q.eigenvalue == c


@pytest.mark.parametrize("cusp", LIFTS[:2])
def test_closed_form_matches_dual_number_oracle(cusp):
    for n in range(2, 6):
        for i in range(1, n):
            q = q_polynomial(i, n, cusp)
            base, first = q_polynomial_oracle(i, n, cusp)
            assert base == shifted_power("lam", q.eigenvalue, n)
            # det(lam - (1 + eps d) rho) = det(A) - eps Q
            assert first == -q.Q


def test_closed_form_matches_inverse_route():
    for n in range(2, 6):
        for i in range(1, n):
            for pq in ((1, 0), (1, 1)):
                assert q_polynomial_inverse_route(i, n, pq=pq) == q_polynomial(i, n, pq=pq).Q


def test_const_directions_have_zero_derivative():
    for n in range(2, 6):
        for cusp in LIFTS:
            cert = sigma_derivative_matrix(n, cusp, check_oracle=False)
            assert all(cert.const_rows_zero)
            for j in range(1, n):
                for a, b in ((1, 0), (0, 1), (2, -3)):
                    d = cocycle_from_form(const(a, b, j), n, cusp)
                    for word in ("m", "l", "ml", "mmL"):
                        assert all(x == 0 for x in sigma_derivatives_of_cocycle(d, word))


def test_coboundary_invariance(rng):
    for n in range(2, 6):
        for i in range(1, n):
            d = omega_cocycle(i, n)
            base = sigma_derivatives_of_cocycle(d, "m")
            for _ in range(3):
                v = Matrix([[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)])
                shifted = d + torus_coboundary(v, n)
                assert sigma_derivatives_of_cocycle(shifted, "m") == base


def test_cocycle_derivatives_match_jacobian_rows():
    for n in range(2, 6):
        cert = sigma_derivative_matrix(n, check_oracle=False)
        for i in range(1, n):
            assert sigma_derivatives_of_cocycle(omega_cocycle(i, n), "m") == cert.sigma_derivatives[i - 1]


def test_first_order_product_rule():
    n = 3
    rep = FirstOrderRep(omega_cocycle(1, n))
    r, x = rep.product("m", "l")
    r2, x2 = weil_deform(rep.cocycle, "ml")
    assert r == r2 and x == x2


@pytest.mark.parametrize("pq", [(1, 0), (1, 1), (0, 1), (2, -1)])
def test_certificates_formal_tau(pq):
    for n in range(2, 6):
        for cusp in LIFTS[:2]:
            cert = sigma_derivative_matrix(n, cusp, pq)
            assert cert.certified, cert.to_record()
            assert cert.det == cert.leading_product or cert.det == -cert.leading_product


def test_formal_det_is_power_of_translation():
    cert = sigma_derivative_matrix(3, pq=(1, 1))
    assert any("p + q*tau" in note for note in cert.notes)


def test_certificates_specialized_fig8():
    cusp = CuspShape(FIG8_TAU, 1, -1)
    for n in range(2, 6):
        for pq in ((1, 0), (1, 1), (0, 1)):
            cert = sigma_derivative_matrix(n, cusp, pq)
            assert cert.certified
            assert abs(to_complex(cert.det)) > 0


def test_numeric_determinant_oracle(fig8):
    from charcoords.continuation import numeric_sigma_jacobian

    for n in range(2, 6):
        d = np.linalg.det(numeric_sigma_jacobian(fig8, n))
        assert abs(d - FROZEN_DET[n]) < 1e-9 * abs(FROZEN_DET[n])


def test_basis_certificate():
    qs = [q_polynomial(i, 4) for i in range(1, 4)]
    rec = basis_certificate(qs)
    assert rec["ok"] and rec["valuations"] == [2, 1, 0]
    assert not basis_certificate(qs[:2])["ok"]
    with pytest.raises(ValueError):
        basis_certificate([qs[0], qs[0]])


def test_record_schema():
    rec = sigma_derivative_matrix(2).to_record()
    assert rec["Q"][0]["coeffs"] == ["0", "1"]
    assert rec["det_J"] == "-1"
    assert rec["verdict"] == "certified"
    assert rec["gamma"] == {"class": [1, 0], "word": "m"}


def test_errors():
    with pytest.raises(ValueError):
        q_polynomial(0, 3)
    with pytest.raises(ValueError):
        q_polynomial(1, 3, pq=(0, 0))
