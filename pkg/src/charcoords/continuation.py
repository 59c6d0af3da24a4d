"""Floating-point Newton continuation near the composite representation rho_n.

Unknowns are the entries of the generator images in SL(n, C).  The residual
stacks relator defects, ``det - 1`` per generator, ``sigma_j`` of each
peripheral word minus its target, and pinned entries of the first generator
(gauge).  Pinning removes every conjugation direction except the centralizer
of the first generator, so the Jacobian at a solution keeps an ``n - 1``
dimensional kernel and steps are taken by least squares.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.linalg

from .exact import Matrix, elementary_symmetric, to_complex
from .kernels import word_jacobian
from .manifold import HolonomyLift, Manifold, Presentation, free_reduce, peripheral_parabolic_check, peripheral_word, rho_n_of_word


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, point: "RepPoint | None" = None):
        super().__init__(message)
        self.point = point


def numeric(M: Matrix) -> np.ndarray:
    return np.array([[to_complex(e) for e in row] for row in M.rows], dtype=complex)


def sigma_and_gradients(W: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """``sigma_1..sigma_n`` of ``W`` and ``d sigma_k / dW`` (as ``n x n`` arrays).

    From the Faddeev-LeVerrier adjugates ``B_k``:
    ``d sigma_k = (-1)^(k+1) trace(B_(k-1) dW)``.
    """
    n = W.shape[0]
    ident = np.eye(n, dtype=complex)
    B = ident
    sig = np.zeros(n, dtype=complex)
    grads = []
    for k in range(1, n + 1):
        grads.append((-1) ** (k + 1) * B.T)
        AB = W @ B
        c = -np.trace(AB) / k
        sig[k - 1] = (-1) ** k * c
        B = AB + c * ident
    return sig, grads


def _encode(word: str, gens: tuple) -> tuple[np.ndarray, np.ndarray]:
    letters = np.array([gens.index(ch.lower()) for ch in word], dtype=np.int_)
    inverted = np.array([ch.isupper() for ch in word], dtype=np.uint8)
    return letters, inverted


def gauge_pins(A: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Entries of ``A`` whose pinning is transverse to the most conjugation directions.

    Chosen by column-pivoted QR on the map ``Z -> [Z, A]``.
    """
    n = A.shape[0]
    ident = np.eye(n)
    # vec([Z, A]) = (kron(I, A^T) - kron(A, I)) vec(Z) for row-major vec
    K = np.kron(ident, A.T) - np.kron(A, ident)
    _, R, piv = scipy.linalg.qr(K.T, pivoting=True)
    diag = np.abs(np.diag(R))
    r = int(np.sum(diag > tol * diag[0])) if diag.size and diag[0] else 0
    return np.sort(piv[:r])


@dataclass(frozen=True)
class RepPoint:
    generators: tuple
    matrices: np.ndarray  # (G, n, n)
    relator_defect: float
    det_defect: float
    target_defect: float
    gauge_defect: float
    iterations: int = 0
    condition: float = float("nan")
    converged: bool = False

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    @property
    def residual(self) -> float:
        return max(self.relator_defect, self.det_defect, self.target_defect, self.gauge_defect)

    def image(self, word: str) -> np.ndarray:
        M = np.eye(self.n, dtype=complex)
        for ch in word:
            g = self.matrices[self.generators.index(ch.lower())]
            M = M @ (g if ch.islower() else np.linalg.inv(g))
        return M

    def conjugate(self, P: np.ndarray) -> "RepPoint":
        Pinv = np.linalg.inv(P)
        mats = np.einsum("ij,gjk,kl->gil", Pinv, self.matrices, P)
        return RepPoint(self.generators, mats, self.relator_defect, self.det_defect,
                        self.target_defect, self.gauge_defect, self.iterations, self.condition, self.converged)


@dataclass
class System:
    """Residual map ``F(x)`` on flattened generator entries with its analytic Jacobian."""

    generators: tuple
    n: int
    relators: list  # (letters, inverted, expected value)
    peripherals: list  # (letters, inverted) per cusp
    targets: np.ndarray
    pin_index: np.ndarray  # flat indices into the first generator
    pin_values: np.ndarray
    base: np.ndarray  # (G, n, n) exact point rounded
    words: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.generators) * self.n * self.n

    @property
    def gauge_kernel(self) -> int:
        """Conjugation directions left after pinning: the centralizer of the first generator."""
        return self.n * self.n - len(self.pin_index) - 1

    def blocks(self) -> dict[str, slice]:
        n2, G = self.n * self.n, len(self.generators)
        out, start = {}, 0
        for name, size in (
            ("relator", n2 * len(self.relators)),
            ("det", G),
            ("target", len(self.targets)),
            ("gauge", len(self.pin_index)),
        ):
            out[name] = slice(start, start + size)
            start += size
        return out

    def unpack(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=complex).reshape(len(self.generators), self.n, self.n)

    def evaluate(self, x: np.ndarray, jacobian: bool = True):
        mats = self.unpack(x)
        inv = np.linalg.inv(mats)
        G, n = len(self.generators), self.n
        N = self.size
        rows, jrows = [], []
        for letters, inverted, expected in self.relators:
            W, dW = word_jacobian(mats, inv, letters, inverted)
            rows.append((W - expected).ravel())
            jrows.append(dW.reshape(n * n, N))
        dets = np.linalg.det(mats)
        rows.append(dets - 1)
        Jdet = np.zeros((G, N), dtype=complex)
        for g in range(G):
            Jdet[g, g * n * n:(g + 1) * n * n] = (dets[g] * inv[g].T).ravel()
        jrows.append(Jdet)
        sig_rows, sig_jac = [], []
        for letters, inverted in self.peripherals:
            W, dW = word_jacobian(mats, inv, letters, inverted)
            sig, grads = sigma_and_gradients(W)
            sig_rows.append(sig[: n - 1])
            for k in range(n - 1):
                sig_jac.append(np.einsum("ij,ijx->x", grads[k], dW.reshape(n, n, N)))
        rows.append(np.concatenate(sig_rows) - self.targets if sig_rows else np.zeros(0))
        jrows.append(np.array(sig_jac).reshape(len(sig_jac), N))
        rows.append(mats[0].ravel()[self.pin_index] - self.pin_values)
        Jpin = np.zeros((len(self.pin_index), N), dtype=complex)
        Jpin[np.arange(len(self.pin_index)), self.pin_index] = 1
        jrows.append(Jpin)
        F = np.concatenate(rows)
        if not jacobian:
            return F
        return F, np.vstack(jrows)

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x, jacobian=False)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)[1]

    def fd_jacobian(self, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
        """Central finite differences along real coordinate directions (F is holomorphic)."""
        x = np.asarray(x, dtype=complex).ravel()
        cols = []
        for k in range(x.size):
            e = np.zeros_like(x)
            e[k] = h
            cols.append((self.residual(x + e) - self.residual(x - e)) / (2 * h))
        return np.array(cols).T

    def point(self, x: np.ndarray, iterations: int = 0, condition: float = float("nan"), converged: bool = False) -> RepPoint:
        F = self.residual(x)
        b = self.blocks()

        def norm(s: slice) -> float:
            part = F[s]
            return float(np.max(np.abs(part))) if part.size else 0.0

        return RepPoint(
            self.generators, self.unpack(x).copy(),
            norm(b["relator"]), norm(b["det"]), norm(b["target"]), norm(b["gauge"]),
            iterations, condition, converged,
        )

    def start(self) -> np.ndarray:
        return self.base.ravel().copy()

    def with_targets(self, targets) -> "System":
        targets = np.asarray(targets, dtype=complex)
        if targets.shape != self.targets.shape:
            raise ValueError(f"expected {self.targets.size} targets, got {targets.size}")
        return System(self.generators, self.n, self.relators, self.peripherals, targets,
                      self.pin_index, self.pin_values, self.base, self.words)


def unipotent_targets(pres: Presentation, lift: HolonomyLift, n: int, pq=(1, 0)) -> np.ndarray:
    """Exact ``sigma_1..sigma_(n-1)`` of each peripheral word under ``rho_n``."""
    out = []
    for c in range(len(pres.cusps)):
        W = rho_n_of_word(lift, n, peripheral_word(pres, pq, c))
        out.extend(to_complex(elementary_symmetric(W, j)) for j in range(1, n))
    return np.array(out, dtype=complex)


def build_system(pres: Presentation, lift: HolonomyLift, n: int, targets=None, pq=(1, 0)) -> System:
    if n < 2:
        raise ValueError("n must be at least 2")
    gens = tuple(pres.generators)
    base = np.array([numeric(rho_n_of_word(lift, n, g)) for g in gens])
    relators = []
    for rel in pres.relators:
        letters, inverted = _encode(rel, gens)
        relators.append((letters, inverted, numeric(rho_n_of_word(lift, n, rel))))
    peripherals = [_encode(peripheral_word(pres, pq, c), gens) for c in range(len(pres.cusps))]
    exact_targets = unipotent_targets(pres, lift, n, pq)
    if targets is None:
        targets = exact_targets
    targets = np.asarray(targets, dtype=complex)
    if targets.shape != exact_targets.shape:
        raise ValueError(f"expected {exact_targets.size} targets (cusps x (n-1)), got {targets.size}")
    pins = gauge_pins(base[0])
    return System(gens, n, relators, peripherals, targets, pins, base[0].ravel()[pins], base,
                  {"peripheral": [peripheral_word(pres, pq, c) for c in range(len(pres.cusps))]})


def newton_solve(system: System, start, tol: float = 1e-10, max_iter: int = 60, polish: int = 3) -> RepPoint:
    """Damped Gauss-Newton with step halving; least-squares steps absorb the gauge kernel."""
    x = np.asarray(start.matrices if isinstance(start, RepPoint) else start, dtype=complex).ravel().copy()
    F, J = system.evaluate(x)
    if not np.all(np.isfinite(F)):
        raise ConvergenceError("start residual is not finite")
    norm = np.max(np.abs(F))
    it = 0
    extra = 0
    while it < max_iter:
        if norm < tol:
            # polish while steps still pay off
            if extra >= polish or norm < tol * 1e-3:
                break
            extra += 1
        goal = norm if norm >= tol else norm / 2
        dx = np.linalg.lstsq(J, -F, rcond=None)[0]
        t = 1.0
        while t > 1e-6:
            x_new = x + t * dx
            F_new = system.residual(x_new)
            n_new = np.max(np.abs(F_new))
            if np.isfinite(n_new) and n_new < goal:
                break
            t /= 2
        else:
            break  # no decrease: stalled
        it += 1
        x = x_new
        F, J = system.evaluate(x)
        norm = np.max(np.abs(F))
    s = np.linalg.svd(J, compute_uv=False)
    rank_needed = system.size - system.gauge_kernel
    numeric_rank = int(np.sum(s > 1e-8 * s[0]))
    cond = float(s[0] / s[rank_needed - 1]) if rank_needed <= s.size and s[rank_needed - 1] > 0 else float("inf")
    pt = system.point(x, it, cond, converged=norm < tol)
    if not pt.converged:
        raise ConvergenceError(f"no convergence after {it} steps (residual {norm:.3e})", pt)
    if numeric_rank < rank_needed:
        raise ConvergenceError(f"Jacobian rank {numeric_rank} below {rank_needed}: deficiency beyond the gauge", pt)
    return pt


def recovered_sigmas(system: System, point: RepPoint) -> np.ndarray:
    out = []
    for word in system.words["peripheral"]:
        sig, _ = sigma_and_gradients(point.image(word))
        out.extend(sig[: system.n - 1])
    return np.array(out)


# ---------------------------------------------------------------------------
# characters


def character_words(generators, length: int = 4) -> list[str]:
    """Freely reduced nonempty words of length at most ``length``, in a fixed order."""
    letters = [c for g in generators for c in (g, g.upper())]
    out = []
    for L in range(1, length + 1):
        for w in product(letters, repeat=L):
            s = "".join(w)
            if free_reduce(s) == s:
                out.append(s)
    return out


@dataclass(frozen=True)
class CharacterSample:
    words: tuple
    traces: np.ndarray

    @classmethod
    def of(cls, point: RepPoint, length: int = 4) -> "CharacterSample":
        words = tuple(character_words(point.generators, length))
        return cls(words, np.array([np.trace(point.image(w)) for w in words]))

    def distance(self, other: "CharacterSample") -> float:
        if self.words != other.words:
            raise ValueError("samples use different word lists")
        return float(np.max(np.abs(self.traces - other.traces)))


# ---------------------------------------------------------------------------
# probes


@dataclass
class TargetTrial:
    targets: np.ndarray
    point: RepPoint | None
    recovery: float
    error: str = ""


def target_sweep(system: System, perturb: float, trials: int, seed: int = 0, coordinate: int | None = None) -> list[TargetTrial]:
    """Solve for targets ``sigma(rho_n) + perturb * u``, ``u`` a random unit complex vector.

    With ``coordinate`` set, only that target coordinate moves (by ``perturb``).
    """
    rng = np.random.default_rng(seed)
    base = unipotent_targets_from(system)
    out = []
    for _ in range(trials):
        if coordinate is None:
            u = rng.standard_normal(base.size) + 1j * rng.standard_normal(base.size)
            u /= np.max(np.abs(u))
        else:
            u = np.zeros(base.size, dtype=complex)
            u[coordinate] = np.exp(2j * np.pi * rng.random())
        targets = base + perturb * u
        sys_t = system.with_targets(targets)
        try:
            pt = newton_solve(sys_t, system.start())
            rec = float(np.max(np.abs(recovered_sigmas(sys_t, pt) - targets)))
            out.append(TargetTrial(targets, pt, rec))
        except ConvergenceError as exc:
            out.append(TargetTrial(targets, exc.point, float("nan"), str(exc)))
    return out


def unipotent_targets_from(system: System) -> np.ndarray:
    """Targets of ``rho_n`` itself, read off the base point."""
    pt = system.point(system.start())
    return recovered_sigmas(system, pt)


@dataclass
class ProbeTrial:
    trial: int
    converged: bool
    distance: float
    residual: float
    condition: float
    iterations: int
    error: str = ""


@dataclass
class ProbeReport:
    n: int
    radius: float
    trials: list

    @property
    def converged(self) -> list[ProbeTrial]:
        return [t for t in self.trials if t.converged]

    @property
    def nonconvergent(self) -> list[ProbeTrial]:
        return [t for t in self.trials if not t.converged]

    @property
    def max_distance(self) -> float:
        return max((t.distance for t in self.converged), default=0.0)

    def violations(self, tol: float = 1e-8) -> list[ProbeTrial]:
        return [t for t in self.converged if not t.distance < tol]


def _probe_trial(system: System, reference: CharacterSample, radius: float, seed: int, trial: int, length: int) -> ProbeTrial:
    rng = np.random.default_rng([seed, trial])
    x0 = system.start()
    delta = rng.standard_normal(x0.size) + 1j * rng.standard_normal(x0.size)
    scale = np.max(np.abs(delta))
    x = x0 + (radius * delta / scale if scale else 0)
    try:
        pt = newton_solve(system, x)
    except ConvergenceError as exc:
        p = exc.point
        return ProbeTrial(trial, False, float("nan"), p.residual if p else float("nan"),
                          p.condition if p else float("nan"), p.iterations if p else 0, str(exc))
    d = CharacterSample.of(pt, length).distance(reference)
    return ProbeTrial(trial, True, d, pt.residual, pt.condition, pt.iterations)


def unipotent_isolation_probe(system: System, trials: int = 100, radius: float = 1e-2, seed: int = 0,
                              length: int = 4, jobs: int = 1) -> ProbeReport:
    """Perturb ``rho_n`` and project back onto the unipotent-boundary constraint set.

    ``system`` must carry the unipotent targets.  Trials are seeded
    individually, so the report does not depend on ``jobs``.
    """
    reference = CharacterSample.of(system.point(system.start()), length)
    args = [(system, reference, radius, seed, k, length) for k in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_probe_trial, *zip(*args)))
    else:
        results = [_probe_trial(*a) for a in args]
    return ProbeReport(system.n, radius, results)


# ---------------------------------------------------------------------------
# exact versus numeric sigma-Jacobian


def _gauss_legendre(f, order: int) -> np.ndarray:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    t = (nodes + 1) / 2
    return sum(w / 2 * f(ti) for ti, w in zip(t, weights))


def numeric_sigma_jacobian(manifold: Manifold, n: int, pq=(1, 0)) -> np.ndarray:
    """``J[i][j] = d((-1)^j sigma_j)/d omega_i`` by quadrature and the Weil deformation.

    The cocycle value on ``gamma`` is the integral of
    ``s exp(t s h_+) h_-^i exp(-t s h_+)`` over ``t in [0, 1]``, ``s = p + q tau``,
    and ``d sigma_j = (-1)^(j+1) trace(B_(j-1) d rho)`` with
    ``d rho = d(gamma) rho(gamma)``.
    """
    rep = peripheral_parabolic_check(manifold.presentation, manifold.lift)
    tau = to_complex(rep.tau)
    p, q = pq
    s = p + q * tau
    hp = np.diag(np.arange(1, n, dtype=float), 1)
    hm = np.diag(np.arange(n - 1, 0, -1, dtype=float), -1)
    word = peripheral_word(manifold.presentation, pq)
    rho = numeric(rho_n_of_word(rep.lift, n, word))
    U = scipy.linalg.expm(s * hp)
    if not (np.allclose(rho, U, atol=1e-10) or np.allclose(rho, -U, atol=1e-10)):
        raise ArithmeticError("normalized peripheral image is not +-exp(s h_+)")
    n_ = rho.shape[0]
    ident = np.eye(n_, dtype=complex)
    Bs = [ident]
    for k in range(1, n_):
        AB = rho @ Bs[-1]
        Bs.append(AB - np.trace(AB) / k * ident)
    J = np.zeros((n - 1, n - 1), dtype=complex)
    for i in range(1, n):
        hmi = np.linalg.matrix_power(hm, i)
        d = s * _gauss_legendre(lambda t: scipy.linalg.expm(t * s * hp) @ hmi @ scipy.linalg.expm(-t * s * hp), n + 1)
        X = d @ rho
        for j in range(1, n):
            J[i - 1, j - 1] = -np.trace(Bs[j - 1] @ X)
    return J


def exact_sigma_jacobian(manifold: Manifold, n: int, pq=(1, 0)) -> np.ndarray:
    from .deform import sigma_derivative_matrix

    rep = peripheral_parabolic_check(manifold.presentation, manifold.lift)
    cert = sigma_derivative_matrix(n, rep.cusp, pq, check_oracle=False)
    return np.array([[to_complex(e) for e in row] for row in cert.J])


def jacobian_agreement(manifold: Manifold, n: int, pq=(1, 0)) -> float:
    """Relative max-entry difference between the exact and numeric sigma-Jacobians."""
    E = exact_sigma_jacobian(manifold, n, pq)
    N = numeric_sigma_jacobian(manifold, n, pq)
    return float(np.max(np.abs(E - N)) / np.max(np.abs(E)))
