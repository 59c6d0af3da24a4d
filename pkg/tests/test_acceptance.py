"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run ``python3 -m pytest tests/test_acceptance.py`` (the terminal summary lists
one PASS/FAIL line per criterion) or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from charcoords.cusp import TAU, CuspShape, const, cup_pairing, growth_exponent, omega, torus_images, Cocycle
from charcoords.deform import omega_cocycle, q_polynomial, sigma_derivative_matrix, sigma_derivatives_of_cocycle
from charcoords.exact import Matrix, NumberField, Poly, det
from charcoords.liealg import (
    clebsch_gordan_dims, diagonal_scaling_holds, gram_matrix, pairing_constants, parabolic_invariants, trace_form,
)
from charcoords.manifold import load_builtin, peripheral_parabolic_check
from charcoords.rep import (
    SL2_F, h_minus, h_minus_power, h_plus, h_plus_power, lower_unipotent, nilpotent_exp, random_sl2,
    sym_power, sym_power_lie, upper_unipotent,
)

RESULTS: dict[int, tuple[bool, str]] = {}


def _record(k: int, ok: bool, detail: str):
    RESULTS[k] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
    return ok


def criterion_1():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    gauss = NumberField([1, 0, 1], "i")
    beta = Poly.gen("beta")
    bad = []
    for n in range(2, 11):
        for _ in range(50):
            A, B = random_sl2(rng, gauss), random_sl2(rng, gauss)
            if sym_power(A @ B, n) != sym_power(A, n) @ sym_power(B, n):
                bad.append(f"homomorphism n={n}")
                break
        hp = sym_power_lie(SL2_F, n)
        if any(hp[i, j] != (j if j == i + 1 else 0) for i in range(n) for j in range(n)):
            bad.append(f"h+ entries n={n}")
        if sym_power(upper_unipotent(beta), n) != nilpotent_exp(h_plus(n), beta):
            bad.append(f"exp identity n={n}")
        if sym_power(upper_unipotent(beta, -1), n) != nilpotent_exp(h_plus(n), beta) * (-1) ** (n - 1):
            bad.append(f"minus lift n={n}")
        if sym_power(lower_unipotent(beta), n) != nilpotent_exp(h_minus(n), beta):
            bad.append(f"lower exp identity n={n}")
        if not all(diagonal_scaling_holds(n, i) for i in range(1, n)):
            bad.append(f"scaling n={n}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    return ok, f"n=2..10, 50 Q(i) pairs each, exact; {dt:.1f}s (limit 30s)" + (f"; failures {bad}" if bad else "")


def criterion_2():
    bad = []
    for n in range(2, 11):
        kernel = parabolic_invariants(n)  # asserts span{h+^i}
        dims = clebsch_gordan_dims(n)
        if len(kernel) != n - 1 or dims != list(range(2 * n - 1, 2, -2)) or len(dims) != n - 1:
            bad.append(n)
    return not bad, "dim ker ad(h+) = n-1 = span of h+ powers; components 2n-1,...,3 for n=2..10" + (f"; bad n {bad}" if bad else "")


def criterion_3():
    bad = []
    for n in range(2, 11):
        c = pairing_constants(n).c
        for i in range(1, n):
            for j in range(1, n):
                if trace_form(h_minus_power(n, i), h_plus_power(n, j)) != (c[i - 1] if i == j else 0):
                    bad.append(f"trace n={n} ({i},{j})")
        for a, b in ((1, 0), (Fraction(2, 3), -5)):
            for i in range(1, n):
                for j in range(1, n):
                    want = c[i - 1] * (a * TAU - b) if i == j else 0
                    if cup_pairing(const(a, b, i), omega(j), n) != want:
                        bad.append(f"cup n={n} ({i},{j})")
    for n in range(2, 9):
        if det(Matrix(gram_matrix(n))) == 0:
            bad.append(f"gram n={n}")
    return not bad, "trace(h-^i h+^j) = c_i delta_ij (n<=10), Gram nondegenerate (n<=8), cup = c_i delta_ij (a tau - b)" + (
        f"; failures {bad[:5]}" if bad else ""
    )


def criterion_4():
    ok = all(
        growth_exponent(const(1, 0, j), n) == -2 * j and growth_exponent(omega(j), n) == 2 * j
        for n in range(2, 11)
        for j in range(1, n)
    )
    return ok, "kappa(CONST j) = -2j, kappa(OMEGA i) = +2i, n=2..10"


def criterion_5():
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 9):
        for sign in (1, -1):
            cusp = CuspShape(TAU, sign, 1)
            cert = sigma_derivative_matrix(n, cusp, (1, 0), check_oracle=True)
            for q in cert.qs:
                if q.Q(0) != 0 or q.v1 != n - q.i - 1:
                    bad.append(f"n={n} sign={sign} i={q.i} valuation")
            if not cert.oracle_agrees:
                bad.append(f"n={n} sign={sign} oracle")
            if not all(cert.const_rows_zero):
                bad.append(f"n={n} sign={sign} const rows")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    return ok, f"n=2..8, both lifts: Q(0)=0, valuation n-i-1, closed form = dual-number oracle, const rows 0; {dt:.1f}s (limit 120s)" + (
        f"; failures {bad}" if bad else ""
    )


def criterion_6():
    m = load_builtin("fig8")
    cusp = peripheral_parabolic_check(m.presentation, m.lift).cusp
    bad = []
    dets = {}
    for pq in ((1, 0), (1, 1)):
        for n in range(2, 11):
            cert = sigma_derivative_matrix(n, cusp, pq, check_oracle=n <= 6)
            if not cert.det or not cert.certified:
                bad.append((n, pq))
            dets[(n, pq)] = cert.det
    n2 = sigma_derivative_matrix(2, cusp, (1, 0))
    q1 = q_polynomial(1, 2, cusp)
    n2_ok = q1.Q == Poly.gen("lam") and abs(n2.det) == 1
    ok = not bad and n2_ok
    return ok, "figure-eight tau = 2-4w: det J != 0 exactly, n=2..10, gamma (1,0) and (1,1); n=2 gives Q_1 = lam, |det J| = 1" + (
        f"; failures {bad}" if bad else ""
    )


def criterion_7():
    rng = random.Random(77)
    bad = []
    for n in range(2, 7):
        cusp = CuspShape()
        images, inverses = torus_images(n, cusp)
        cocycles = [omega_cocycle(i, n, cusp) for i in range(1, n)]
        base = [[sigma_derivatives_of_cocycle(d, w) for w in ("m", "l")] for d in cocycles]
        for _ in range(20):
            v = Matrix([[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)])
            v = v - Matrix.identity(n) * (v.trace() / n)
            cb = Cocycle.coboundary(v, images, inverses)
            for d, want in zip(cocycles, base):
                shifted = d + cb
                if [sigma_derivatives_of_cocycle(shifted, w) for w in ("m", "l")] != want:
                    bad.append(n)
                    break
    return not bad, "sigma derivatives unchanged under 20 random coboundaries, n=2..6, exact" + (f"; bad n {sorted(set(bad))}" if bad else "")


def criterion_8():
    from charcoords.continuation import CharacterSample, build_system, jacobian_agreement, target_sweep

    t0 = time.perf_counter()
    m = load_builtin("fig8")
    bad = []
    worst = {"residual": 0.0, "recovery": 0.0, "agreement": 0.0, "separation": np.inf}
    for n in (2, 3):
        S = build_system(m.presentation, m.lift, n)
        trials = target_sweep(S, 1e-3, 4, seed=n)
        for coordinate in range(n - 1):
            trials += target_sweep(S, 1e-3, 1, seed=10 + coordinate, coordinate=coordinate)
        for t in trials:
            if t.error or t.point is None:
                bad.append(f"n={n} no convergence: {t.error}")
                continue
            worst["residual"] = max(worst["residual"], t.point.residual)
            worst["recovery"] = max(worst["recovery"], t.recovery)
            if not (t.point.residual < 1e-10 and t.recovery < 1e-9):
                bad.append(f"n={n} residual {t.point.residual:.2e} recovery {t.recovery:.2e}")
        samples = [CharacterSample.of(t.point) for t in trials if t.point is not None and not t.error]
        for a in range(len(samples)):
            for b in range(a + 1, len(samples)):
                d = samples[a].distance(samples[b])
                worst["separation"] = min(worst["separation"], d)
                if not d > 1e-6:
                    bad.append(f"n={n} samples {a},{b} too close: {d:.2e}")
        for pq in ((1, 0), (1, 1)):
            e = jacobian_agreement(m, n, pq)
            worst["agreement"] = max(worst["agreement"], e)
            if not e < 1e-8:
                bad.append(f"n={n} {pq} Jacobian disagreement {e:.2e}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    return ok, (
        f"n=2,3: max residual {worst['residual']:.1e} (<1e-10), max recovery error {worst['recovery']:.1e} (<1e-9), "
        f"min character separation {worst['separation']:.1e} (>1e-6), Jacobian rel. error {worst['agreement']:.1e} (<1e-8); "
        f"{dt:.1f}s (limit 120s)" + (f"; failures {bad[:3]}" if bad else "")
    )


def criterion_9():
    from charcoords.continuation import build_system, unipotent_isolation_probe

    t0 = time.perf_counter()
    m = load_builtin("fig8")
    parts, ok = [], True
    for n in (2, 3):
        S = build_system(m.presentation, m.lift, n)
        rep = unipotent_isolation_probe(S, trials=100, radius=1e-2, seed=n)
        viol = rep.violations(1e-8)
        ok &= not viol and len(rep.converged) > 0
        parts.append(
            f"n={n}: {len(rep.converged)}/100 converged, {len(rep.nonconvergent)} non-convergent (excluded), "
            f"max distance {rep.max_distance:.1e}, {len(viol)} violations"
        )
    dt = time.perf_counter() - t0
    ok &= dt < 300
    return ok, "; ".join(parts) + f"; {dt:.1f}s (limit 300s)"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 10)}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = CRITERIA[k]()
    _record(k, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import sys

    results = [_record(k, *CRITERIA[k]()) for k in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
