"""Command-line front end.

Exit status: 0 all checks pass, 1 a mathematical check failed, 2 usage or
input error.  Reports are JSON with sorted keys; exact rationals are
serialized as ``"p/q"`` strings.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Matrix, NumberField, Poly, serialize
from .manifold import LiftError, ManifoldParseError, check_relators, load_builtin, load_manifold, peripheral_parabolic_check

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    ns: list
    builtin: str | None = None
    manifold: str | None = None
    gammas: list = field(default_factory=lambda: [(1, 0)])
    tau: str = "formal"
    output: str | None = None
    seed: int = 0
    trials: int = 100
    samples: int = 5
    sweeps: int = 3
    perturb: float = 1e-3
    radius: float = 1e-2
    jobs: int = 1

    def __post_init__(self):
        if not self.ns or min(self.ns) < 2:
            raise ValueError("n must be at least 2")


def parse_n_range(text: str) -> list[int]:
    """``"3"``, ``"2..6"`` or ``"2,4,5"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out or min(out) < 2:
        raise argparse.ArgumentTypeError("n must be at least 2")
    return sorted(set(out))


def parse_gamma(text: str) -> tuple[int, int]:
    try:
        p, q = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q, got {text!r}") from None
    if (p, q) == (0, 0):
        raise argparse.ArgumentTypeError("peripheral class must be nontrivial")
    return p, q


def _n_arg(text):
    try:
        return parse_n_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ---------------------------------------------------------------------------
# verify-lemmas


def _check(name: str, fn) -> dict:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failed check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"name": name, "ok": bool(ok), "detail": detail}


def lemma_checks(n: int, seed: int = 0, samples: int = 5) -> list[dict]:
    from .cusp import TAU, CuspShape, cohomology_basis, const, growth_exponent, omega, pairing_matrix, torus_images
    from .cusp import Cocycle
    from .deform import omega_cocycle, sigma_derivatives_of_cocycle
    from .liealg import (
        adjoint_action, clebsch_gordan_dims, diagonal_scaling_holds, fixed_by_translation,
        gram_matrix, pairing_constants, parabolic_invariants, trace_form,
    )
    from .exact import det
    from .rep import (
        SL2_F, SL2_G, h_minus, h_minus_power, h_plus, h_plus_power,
        lower_unipotent, nilpotent_exp, random_sl2, sym_power, sym_power_lie, upper_unipotent,
    )

    rng = random.Random(f"{seed}:{n}")
    gauss = NumberField([1, 0, 1], "i")
    beta = Poly.gen("beta")

    def homomorphism():
        for _ in range(samples):
            A, B = random_sl2(rng, gauss), random_sl2(rng, gauss)
            if sym_power(A @ B, n) != sym_power(A, n) @ sym_power(B, n):
                return False, "product law fails"
        return True, f"{samples} random pairs over Q(i)"

    def lie_entries():
        hp, hm = h_plus(n), h_minus(n)
        ok = all(hp[i, j] == (j if j == i + 1 else 0) for i in range(n) for j in range(n))
        ok &= all(hm[i, j] == (n - j - 1 if i == j + 1 else 0) for i in range(n) for j in range(n))
        bracket = sym_power_lie(SL2_F.commutator(SL2_G), n) == hp.commutator(hm)
        return ok and bracket, "h+ has j at (j, j+1); h- has n-1..1 below the diagonal; brackets preserved"

    def exponential():
        up = sym_power(upper_unipotent(beta), n) == nilpotent_exp(h_plus(n), beta)
        low = sym_power(lower_unipotent(beta), n) == nilpotent_exp(h_minus(n), beta)
        minus = sym_power(upper_unipotent(beta, -1), n) == nilpotent_exp(h_plus(n), beta) * (-1) ** (n - 1)
        return up and low and minus, "Sym(exp(beta X)) = exp(beta Sym(X)), formal beta, both lifts"

    def scaling():
        return all(diagonal_scaling_holds(n, i) for i in range(1, n)), "Ad diag(lam, 1/lam) h+^i = lam^(2i) h+^i"

    def invariance():
        vs = [h_plus_power(n, i) for i in range(1, n)] + [h_minus_power(n, i) for i in range(1, n)]
        for _ in range(2):
            A = random_sl2(rng)
            moved = [adjoint_action(A, v) for v in vs]
            for v, Av in zip(vs, moved):
                for w, Aw in zip(vs, moved):
                    if trace_form(Av, Aw) != trace_form(v, w):
                        return False, "pairing not Ad-invariant"
        return True, "trace pairing is Ad-invariant on h+-powers and h--powers"

    def invariants():
        kernel = parabolic_invariants(n)
        fixed = all(fixed_by_translation(v, beta) for v in kernel)
        dims = clebsch_gordan_dims(n)
        expected = list(range(2 * n - 1, 2, -2))
        ok = len(kernel) == n - 1 and fixed and dims == expected and sum(dims) == n * n - 1
        return ok, {"kernel_dimension": len(kernel), "component_dimensions": dims}

    def pairing():
        c = pairing_constants(n).c
        ok = all(
            trace_form(h_minus_power(n, i), h_plus_power(n, j)) == (c[i - 1] if i == j else 0)
            for i in range(1, n) for j in range(1, n)
        )
        detail = {"c": [serialize(x) for x in c]}
        if n <= 8:
            g = det(Matrix(gram_matrix(n)))
            ok &= g != 0
            detail["gram_determinant"] = serialize(g)
        return ok, detail

    def cohomology():
        forms = cohomology_basis(n)
        P = pairing_matrix(forms, n)
        c = pairing_constants(n).c
        a, b = 1, 0
        expected = all(
            P[n - 1 + j - 1, i - 1] == (c[i - 1] * (a * TAU - b) if i == j else 0)
            for i in range(1, n) for j in range(1, n)
        )
        return expected and bool(det(P)), {"pairing_determinant": serialize(det(P))}

    def growth():
        ok = all(growth_exponent(const(1, 0, j), n) == -2 * j for j in range(1, n))
        ok &= all(growth_exponent(omega(i), n) == 2 * i for i in range(1, n))
        return ok, "const directions decay as e^(-2jt); omega_i grows as e^(2it)"

    def coboundary():
        cusp = CuspShape()
        images, inverses = torus_images(n, cusp)
        for i in range(1, n):
            d = omega_cocycle(i, n, cusp)
            base = sigma_derivatives_of_cocycle(d, "m")
            v = Matrix([[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)])
            v = v - Matrix.identity(n) * (v.trace() / n)
            shifted = d + Cocycle.coboundary(v, images, inverses)
            if sigma_derivatives_of_cocycle(shifted, "m") != base:
                return False, f"omega_{i}: sigma derivatives move under a coboundary"
        return True, "sigma derivatives depend only on the cohomology class"

    return [
        _check("sym_power_homomorphism", homomorphism),
        _check("lie_derivative_entries", lie_entries),
        _check("unipotent_exponential", exponential),
        _check("diagonal_weight_scaling", scaling),
        _check("trace_pairing_invariance", invariance),
        _check("parabolic_invariants", invariants),
        _check("pairing_constants", pairing),
        _check("cusp_cohomology_basis", cohomology),
        _check("growth_exponents", growth),
        _check("coboundary_invariance", coboundary),
    ]


def _lemma_task(args):
    n, seed, samples = args
    return {"n": n, "checks": lemma_checks(n, seed, samples)}


def _map(fn, items, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_verify_lemmas(cfg: RunConfig) -> tuple[int, dict]:
    results = _map(_lemma_task, [(n, cfg.seed, cfg.samples) for n in cfg.ns], cfg.jobs)
    ok = all(c["ok"] for r in results for c in r["checks"])
    return (EXIT_OK if ok else EXIT_FAILED), {"command": "verify-lemmas", "ok": ok, "results": results}


# ---------------------------------------------------------------------------
# certify


def _load(cfg: RunConfig):
    if cfg.manifold:
        return load_manifold(cfg.manifold)
    return load_builtin(cfg.builtin or "fig8")


def _certify_task(args):
    from .deform import sigma_derivative_matrix

    n, cusp, pq = args
    return sigma_derivative_matrix(n, cusp, pq).to_record()


def cmd_certify(cfg: RunConfig) -> tuple[int, dict]:
    from .cusp import TAU, CuspShape

    m = _load(cfg)
    relators = check_relators(m.presentation, m.lift)
    cusps = []
    tasks = []
    for c in range(len(m.presentation.cusps)):
        rep = peripheral_parabolic_check(m.presentation, m.lift, c)
        shape = rep.cusp if cfg.tau == "specialize" else CuspShape(TAU, rep.cusp.sign_m, rep.cusp.sign_l)
        cusps.append({
            "index": c,
            "meridian": rep.meridian,
            "longitude": rep.longitude,
            "meridian_trace": serialize(rep.meridian_trace),
            "longitude_trace": serialize(rep.longitude_trace),
            "tau": serialize(rep.tau),
            "sign_m": rep.cusp.sign_m,
            "sign_l": rep.cusp.sign_l,
        })
        for n in cfg.ns:
            for pq in cfg.gammas:
                tasks.append((c, (n, shape, pq)))
    records = _map(_certify_task, [t for _, t in tasks], cfg.jobs)
    for (c, _), rec in zip(tasks, records):
        rec["cusp"] = c
    ok = all(r["verdict"] == "certified" for r in records)
    doc = {
        "command": "certify",
        "manifold": m.name,
        "tau_mode": cfg.tau,
        "relators": [{"word": w, "sign": s} for w, s in relators],
        "cusps": cusps,
        "certificates": records,
        "ok": ok,
    }
    return (EXIT_OK if ok else EXIT_FAILED), doc


# ---------------------------------------------------------------------------
# continue


def _sweep_record(trial) -> dict:
    pt = trial.point
    return {
        "targets": [[t.real, t.imag] for t in trial.targets],
        "converged": bool(pt is not None and pt.converged and not trial.error),
        "residual": pt.residual if pt else None,
        "condition": pt.condition if pt else None,
        "iterations": pt.iterations if pt else None,
        "target_recovery": trial.recovery,
        "error": trial.error,
    }


def cmd_continue(cfg: RunConfig, n_cap: int = 4) -> tuple[int, dict]:
    from .continuation import CharacterSample, build_system, jacobian_agreement, target_sweep, unipotent_isolation_probe

    if max(cfg.ns) > n_cap:
        raise ValueError(f"n = {max(cfg.ns)} exceeds the cap {n_cap} for numerical runs (raise it with --n-cap)")
    m = _load(cfg)
    check_relators(m.presentation, m.lift)
    peripheral_parabolic_check(m.presentation, m.lift)
    results = []
    ok = True
    for n in cfg.ns:
        system = build_system(m.presentation, m.lift, n)
        sweeps = target_sweep(system, cfg.perturb, cfg.sweeps, seed=cfg.seed)
        solved = [t for t in sweeps if t.point is not None and not t.error]
        recovered = all(t.recovery < 1e-9 and t.point.residual < 1e-10 for t in solved) and len(solved) == len(sweeps)
        samples = [CharacterSample.of(t.point) for t in solved]
        separations = [samples[a].distance(samples[b]) for a in range(len(samples)) for b in range(a + 1, len(samples))]
        distinct = all(d > 1e-6 for d in separations)
        agreement = max(jacobian_agreement(m, n, pq) for pq in cfg.gammas)
        probe = unipotent_isolation_probe(system, cfg.trials, cfg.radius, cfg.seed, jobs=cfg.jobs)
        isolated = not probe.violations()
        passed = recovered and distinct and agreement < 1e-8 and isolated
        ok &= passed
        results.append({
            "n": n,
            "target_sweep": {
                "perturbation": cfg.perturb,
                "trials": [_sweep_record(t) for t in sweeps],
                "all_recovered": recovered,
                "pairwise_character_distances": separations,
                "distinct": distinct,
            },
            "jacobian_agreement": {"relative_error": agreement, "ok": agreement < 1e-8},
            "isolation_probe": {
                "radius": cfg.radius,
                "trials": [
                    {
                        "trial": t.trial,
                        "converged": t.converged,
                        "character_distance": t.distance if t.converged else None,
                        "residual": t.residual,
                        "condition": t.condition,
                        "iterations": t.iterations,
                        "error": t.error,
                    }
                    for t in probe.trials
                ],
                "converged": len(probe.converged),
                "nonconvergent": len(probe.nonconvergent),
                "max_distance": probe.max_distance,
                "violations": [t.trial for t in probe.violations()],
            },
            "ok": passed,
        })
    doc = {"command": "continue", "manifold": m.name, "seed": cfg.seed, "results": results, "ok": ok}
    return (EXIT_OK if ok else EXIT_FAILED), doc


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charcoords", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_n):
        p.add_argument("--n", type=_n_arg, default=parse_n_range(default_n), help=f"n, a range lo..hi or a list (default {default_n})")
        p.add_argument("--output", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1, help="worker processes")

    def source(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--builtin", choices=["fig8"], default=None)
        g.add_argument("--manifold", help="presentation file")
        p.add_argument("--gamma", type=parse_gamma, action="append", help="peripheral class p,q (repeatable; default 1,0)")

    p = sub.add_parser("verify-lemmas", help="run the exact algebraic suites")
    common(p, "2..10")
    p.add_argument("--samples", type=int, default=5, help="random SL(2, Q(i)) pairs per n")

    p = sub.add_parser("certify", help="emit the sigma-Jacobian certificate")
    common(p, "2..10")
    source(p)
    p.add_argument("--tau", choices=["formal", "specialize"], default="formal")

    p = sub.add_parser("continue", help="numerical Newton sweeps and isolation probes")
    common(p, "2..4")
    source(p)
    p.add_argument("--trials", type=int, default=100, help="isolation probe trials")
    p.add_argument("--sweeps", type=int, default=3, help="perturbed target vectors")
    p.add_argument("--target-perturb", type=float, default=1e-3)
    p.add_argument("--radius", type=float, default=1e-2)
    p.add_argument("--n-cap", type=int, default=4)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            ns=args.n,
            builtin=getattr(args, "builtin", None),
            manifold=getattr(args, "manifold", None),
            gammas=getattr(args, "gamma", None) or [(1, 0)],
            tau=getattr(args, "tau", "formal"),
            output=args.output,
            seed=args.seed,
            trials=getattr(args, "trials", 100),
            samples=getattr(args, "samples", 5),
            sweeps=getattr(args, "sweeps", 3),
            perturb=getattr(args, "target_perturb", 1e-3),
            radius=getattr(args, "radius", 1e-2),
            jobs=max(1, args.jobs),
        )
        if cfg.command == "verify-lemmas":
            code, doc = cmd_verify_lemmas(cfg)
        elif cfg.command == "certify":
            code, doc = cmd_certify(cfg)
        else:
            code, doc = cmd_continue(cfg, args.n_cap)
    except (ManifoldParseError, LiftError, KeyError, ValueError, OSError) as exc:
        print(f"charcoords: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{cfg.command}: {'ok' if code == EXIT_OK else 'FAILED'}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
