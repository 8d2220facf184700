"""Command-line front end: ``braidlab {rep,leakage,limits} ...``.

Human-readable text goes to stdout; ``--out`` receives a deterministic JSON
report (sorted keys, no timings), written atomically.
Exit codes: 0 pass, 1 analytic failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from . import leakage as lk
from . import limits as lm
from .angles import Angle
from .errors import BraidlabError, GeneratorOutOfRange, InvalidParameter, MalformedToken
from .reps import (
    DEFAULT_TOL,
    Rep,
    Tau3Choice,
    Tolerances,
    atomic_write,
    build_burau_unreduced,
    build_character,
    build_eta,
    build_ising_majorana,
    build_jones_b3,
    build_standard_type,
    composition_factor,
    evaluate,
    load_rep,
    projectively_equivalent,
    save_rep,
    unitarize,
    verify_relations,
)
from .words import parse_word

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Configuration


@dataclass(frozen=True)
class RunConfig:
    tol_relation: float = DEFAULT_TOL.relation
    tol_unitarity: float = DEFAULT_TOL.unitarity
    tol_dedup: float = 1e-6
    tol_solver: float = 1e-9
    seed: int = 0
    max_len: int = lk.MAX_ENUM_LEN
    max_ball: int = lk.DEFAULT_MAX_BALL
    out: str | None = None
    threads: int | None = None

    def __post_init__(self):
        for name in ("tol_relation", "tol_unitarity", "tol_dedup", "tol_solver"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive")
        if self.max_len < 1 or self.max_ball < 1:
            raise UsageError("caps must be at least 1")

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(self.tol_relation, self.tol_unitarity, DEFAULT_TOL.rank)


_CONFIG_KEYS = {f for f in RunConfig.__dataclass_fields__}


def build_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for key in _CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values)


# ---------------------------------------------------------------------------
# Representation and projector specs


def _kv(parts: list[str]) -> tuple[dict[str, str], list[str]]:
    kv, flags = {}, []
    for p in parts:
        if "=" in p:
            k, v = p.split("=", 1)
            kv[k.strip()] = v.strip()
        elif p:
            flags.append(p.strip())
    return kv, flags


_MODIFIERS = ("factor", "unitarize", "mirror")


def parse_rep_spec(spec: str, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> Rep:
    """Build a representation from a compact spec string.

    Examples: ``eta:3/10pi``, ``eta:1/4pi:n=4:conj``, ``jones:r=5:sign=-``,
    ``character:1/3pi:n=4``, ``burau:n=4:z=2/5pi:factor:unitarize``,
    ``standard:n=3:z=1/2pi``, ``ising6``, ``file:path.json``.
    """
    if spec.startswith("file:"):
        return load_rep(spec[5:])
    head, *rest = spec.split(":")
    head = head.strip().lower()
    if head.startswith("ising") and head[5:].isdigit():
        head, rest = "ising", [head[5:]] + rest
    kv, flags = _kv(rest)
    mods = [f for f in flags if f in _MODIFIERS]
    pos = [f for f in flags if f not in _MODIFIERS]
    try:
        if head == "eta":
            theta = Angle.parse(kv.get("theta") or pos[0])
            tau3 = Tau3Choice.CONJUGATE_OF_TAU1 if "conj" in pos[1:] else Tau3Choice.SAME_AS_TAU1
            rep = build_eta(theta, int(kv.get("n", 3)), tau3)
        elif head == "jones":
            sign = -1 if kv.get("sign", "+") in ("-", "-1") else 1
            rep = build_jones_b3(int(kv.get("r") or pos[0]), sign)
        elif head == "character":
            rep = build_character(Angle.parse(kv.get("phi") or pos[0]), int(kv.get("n", 3)))
        elif head == "burau":
            rep = build_burau_unreduced(Angle.parse(kv["z"]), int(kv["n"]))
        elif head == "standard":
            rep = build_standard_type(int(kv["n"]), Angle.parse(kv["z"]))
        elif head == "ising":
            rep = build_ising_majorana(int(kv.get("n") or pos[0]))
        else:
            raise UsageError(f"unknown representation family {head!r}")
    except (IndexError, KeyError, ValueError) as exc:
        if isinstance(exc, BraidlabError):
            raise
        raise UsageError(f"incomplete representation spec {spec!r}") from exc
    for m in mods:
        if m == "factor":
            rep = composition_factor(rep, seed)
        elif m == "unitarize":
            rep = unitarize(rep, seed)[0]
        else:
            rep = lk.mirror(rep)
    return rep if rep.tol == tol else replace(rep, tol=tol)


def parse_projector(spec: str, rep: Rep) -> lk.Subspace:
    spec = spec.strip()
    if spec in ("parity-even", "parity-odd"):
        if rep.dimension & (rep.dimension - 1) or rep.dimension < 2:
            raise UsageError("parity projectors need a Majorana representation")
        n = 2 * (rep.dimension.bit_length() - 1)
        return lk.parity_subspace(n, spec == "parity-even")
    if spec == "left-charge":
        return lk.charge_counterexample()[1]
    if spec.startswith("coords:"):
        idx = [int(x) for x in spec[7:].split(",") if x]
        return lk.Subspace.coordinates(rep.dimension, idx)
    if spec.startswith("first:"):
        return lk.Subspace.coordinates(rep.dimension, range(int(spec[6:])), spec)
    raise UsageError(f"unknown projector {spec!r}")


# ---------------------------------------------------------------------------
# Report serialization


def to_plain(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return [to_plain(v) for v in x.tolist()] if x.ndim else to_plain(x.item())
    if isinstance(x, Angle):
        return x.text()
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    return str(x)


def report_text(report: dict) -> str:
    return json.dumps(to_plain(report), sort_keys=True, indent=2) + "\n"


def emit(cfg: RunConfig, report: dict) -> None:
    if cfg.out:
        atomic_write(cfg.out, report_text(report))


def fmt_matrix(m: np.ndarray) -> str:
    rows = []
    for row in np.asarray(m):
        rows.append("  [" + ", ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row) + "]")
    return "\n".join(rows)


# ---------------------------------------------------------------------------
# rep


def _rep_from_args(args, cfg: RunConfig) -> Rep:
    if args.spec:
        return parse_rep_spec(args.spec, cfg.tolerances, cfg.seed)
    fam = args.family
    if fam is None:
        raise UsageError("give --spec or --family")
    parts = [fam]
    if fam == "eta":
        parts += [args.theta or "", f"n={args.n or 3}"] + (["conj"] if args.tau3 == "conj" else [])
    elif fam == "jones":
        parts += [f"r={args.r}", f"sign={args.sign}"]
    elif fam == "character":
        parts += [args.phi or args.theta or "", f"n={args.n or 3}"]
    elif fam in ("burau", "standard"):
        parts += [f"n={args.n}", f"z={args.z}"]
    elif fam == "ising":
        parts += [f"n={args.n or 6}"]
    parts += [m for m in _MODIFIERS if getattr(args, m, False)]
    return parse_rep_spec(":".join(parts), cfg.tolerances, cfg.seed)


def _relation_report(rep: Rep, cfg: RunConfig):
    rr = verify_relations(rep, cfg.tol_relation)
    return rr, {
        "label": rep.label,
        "n": rep.strand_count,
        "d": rep.dimension,
        "unitary": rep.unitary,
        "max_residual": rr.max_residual,
        "passed": rr.passed,
        "worst": str(rr.worst) if rr.worst else None,
    }


def cmd_rep(args, cfg: RunConfig) -> int:
    if args.action == "build":
        rep = _rep_from_args(args, cfg)
        rr, rep_json = _relation_report(rep, cfg)
        if args.save:
            save_rep(rep, args.save)
        print(f"{rep.label}: n={rep.strand_count} d={rep.dimension} unitary={rep.unitary}")
        print(f"max relation residual {rr.max_residual:.3e} -> {'PASS' if rr.passed else 'FAIL'}")
        emit(cfg, {"command": "rep build", "rep": rep_json})
        return EXIT_PASS if rr.passed else EXIT_FAIL
    if args.action == "check":
        try:
            rep = load_rep(args.infile) if args.infile else _rep_from_args(args, cfg)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            if isinstance(exc, BraidlabError):
                raise
            print(f"FAIL: cannot read representation: {exc}")
            emit(cfg, {"command": "rep check", "passed": False, "error": str(exc)})
            return EXIT_FAIL
        rr, rep_json = _relation_report(rep, cfg)
        for rel, residual in rr.entries:
            if residual > cfg.tol_relation:
                print(f"  violated: {rel}  residual {residual:.3e}")
        print(f"max relation residual {rr.max_residual:.3e} -> {'PASS' if rr.passed else 'FAIL'}")
        emit(cfg, {"command": "rep check", "rep": rep_json})
        return EXIT_PASS if rr.passed else EXIT_FAIL
    if args.action == "eval":
        rep = _rep_from_args(args, cfg)
        w = parse_word(args.word or "", rep.strand_count)
        m = evaluate(rep, w)
        print(f"{rep.label}  word [{w}]")
        print(fmt_matrix(m))
        emit(cfg, {"command": "rep eval", "label": rep.label, "word": w.format(), "matrix": m})
        return EXIT_PASS
    if args.action == "equiv":
        a = parse_rep_spec(args.a, cfg.tolerances, cfg.seed)
        b = parse_rep_spec(args.b, cfg.tolerances, cfg.seed)
        res = projectively_equivalent(a, b, tol=args.tol or 1e-8, seed=cfg.seed)
        rep_json = {"command": "rep equiv", "a": a.label, "b": b.label, "equivalent": bool(res)}
        if res:
            print(f"equivalent: scalar {res.scalar:.12g}, residual {res.residual:.3e}")
            print("similarity S (rho_b = c S rho_a S^-1):")
            print(fmt_matrix(res.similarity))
            rep_json.update(scalar=res.scalar, similarity=res.similarity, residual=res.residual)
        else:
            print(f"not equivalent (best residual {res.best_residual:.3e})")
            rep_json.update(best_residual=res.best_residual)
        emit(cfg, rep_json)
        return EXIT_PASS if res else EXIT_FAIL
    raise UsageError(args.action)


# ---------------------------------------------------------------------------
# leakage


def _solution_json(sol) -> dict:
    out = {"found": bool(sol), "type": type(sol).__name__, "residual": sol.residual}
    if isinstance(sol, lk.BridgeSolution):
        out.update(matrix=sol.matrix, arrangement=sol.spectrum_arrangement, abelian=sol.abelian,
                   method=sol.method, alternatives=len(sol.alternatives))
    elif isinstance(sol, lk.BestEffort):
        out.update(arrangement=sol.spectrum_arrangement, restarts=sol.restarts,
                   arrangements=sol.arrangements, method=sol.method, evidence=sol.evidence,
                   matrix=sol.matrix)
    else:
        out.update(details=sol.details)
    return out


def _solve(layout: lk.TwoQuditLayout, method: str, cfg: RunConfig, attempts: int):
    if method in ("closed", "auto"):
        try:
            return lk.solve_bridge_qubit_closed_form(layout)
        except lk.NotAQubitLayout:
            if method == "closed":
                raise
    return lk.solve_bridge_numeric(layout, attempts=attempts, seed=cfg.seed, tol=cfg.tol_solver,
                                   workers=cfg.threads)


def cmd_leakage(args, cfg: RunConfig) -> int:
    if args.action == "solve":
        if args.list_families:
            for name in lk.no_go_families():
                print(name)
            return EXIT_PASS
        targets = []
        if args.family == "all":
            targets = list(lk.no_go_families().items())
        elif args.family:
            fams = lk.no_go_families()
            if args.family not in fams:
                raise UsageError(f"unknown family {args.family!r}; use --list-families")
            targets = [(args.family, fams[args.family])]
        else:
            if not (args.left and args.right):
                raise UsageError("give --left and --right, or --family")
            left = parse_rep_spec(args.left, cfg.tolerances, cfg.seed)
            right = parse_rep_spec(args.right, cfg.tolerances, cfg.seed)
            if args.mirror_right:
                right = lk.mirror(right)
            targets = [(f"{args.left} x {args.right}", lambda: lk.embed_pair(left, right))]
        results, found_any = [], False
        for name, make in targets:
            layout = make()
            sol = _solve(layout, args.method, cfg, args.attempts)
            found_any |= bool(sol)
            print(f"{name}: {type(sol).__name__} residual {sol.residual:.3e}")
            if isinstance(sol, lk.BridgeSolution):
                print(fmt_matrix(sol.matrix))
            elif isinstance(sol, lk.BestEffort):
                print(f"  {sol.evidence}")
            entry = _solution_json(sol)
            entry["layout"] = name
            results.append(entry)
        emit(cfg, {"command": "leakage solve", "results": results})
        if args.expect == "none":
            return EXIT_FAIL if found_any else EXIT_PASS
        return EXIT_PASS if all(r["found"] for r in results) else EXIT_FAIL
    if args.action == "scan":
        if args.family != "eta3x3":
            raise UsageError("only the eta3x3 family has a closed-form scan")
        if args.thetas:
            grid = [Angle.parse(t) for t in args.thetas.split(",")]
        else:
            grid = lk.admissible_theta_grid(args.grid)
        rows = lk.theta_scan(grid, tol=cfg.tol_solver, workers=cfg.threads)
        print("theta,residual,pass")
        for r in rows:
            print(f"{r.theta.text()},{r.residual:.6e},{int(r.passed)}")
        passing = [r.theta.text() for r in rows if r.passed]
        print(f"# {len(rows)} admissible points, {len(passing)} passing: {' '.join(passing)}")
        emit(cfg, {"command": "leakage scan", "points": len(rows), "passing": passing,
                   "rows": [[r.theta, r.residual, r.passed] for r in rows]})
        return EXIT_PASS
    if args.action == "enum":
        rep = parse_rep_spec(args.rep, cfg.tolerances, cfg.seed)
        proj = parse_projector(args.proj, rep)
        max_len = args.maxlen
        if max_len > cfg.max_len:
            raise UsageError(f"--maxlen exceeds the configured cap {cfg.max_len}")
        report = lk.enumerate_leakage_free(rep, proj, max_len, leak_tol=args.leak_tol, eps=cfg.tol_dedup,
                                           max_ball=cfg.max_ball, seed=cfg.seed)
        s = report.summary()
        print(f"{rep.label} / {proj.label}, max_len {max_len}")
        for k in sorted(s):
            print(f"  {k}: {s[k]}")
        print("  generating set: " + "; ".join(f"[{w}]" for w in report.generating_set))
        emit(cfg, {
            "command": "leakage enum", "rep": rep.label, "projector": proj.label, "max_len": max_len,
            "summary": s, "generating_set": [w.format() for w in report.generating_set],
            "entries": [[e.word.format(), e.leakage, e.inverse_leakage, e.leaks] for e in report.entries],
        })
        return EXIT_PASS if report.closure_ok and report.inverse_closed else EXIT_FAIL
    raise UsageError(args.action)


# ---------------------------------------------------------------------------
# limits


def cmd_limits(args, cfg: RunConfig) -> int:
    if args.action == "bound":
        if args.d is None:
            raise UsageError("--d is required")
        mult = tuple(int(x) for x in args.mult.split(",")) if args.mult else None
        res = lm.formanek_N(args.d, p=args.p, multiplicities=mult)
        print(res.text() + f"  ({res.provenance})")
        out = {"command": "limits bound", "query": res.query, "value": res.value, "bound": res.bound,
               "provenance": res.provenance}
        if mult and len(mult) > 1:
            crude = lm.crude_anyon_bound(lm.EigenSpec.from_multiplicities(mult))
            arr = lm.arrangement_count(lm.EigenSpec.from_multiplicities(mult))
            print(f"arrangements {arr}; crude bound n<={crude.bound}; refined {crude.refined}")
            out.update(arrangements=arr, crude=crude.bound, refined=crude.refined)
        emit(cfg, out)
        return EXIT_PASS
    if args.action == "classify":
        if args.theta:
            theta = Angle.parse(args.theta)
        elif args.r:
            theta = lm.theta_for_jones(args.r, -1 if args.sign == "-" else 1)
        else:
            raise UsageError("give --theta or --r")
        v = lm.universality_classify(theta)
        print(f"theta={theta.text()} phi={v.phi.text()} -> {v.text()}  ({v.details})")
        emit(cfg, {"command": "limits classify", "theta": theta, "phi": v.phi,
                   "classification": v.text(), "q_order": v.q_order, "details": v.details})
        return EXIT_PASS
    if args.action == "growth":
        rep = parse_rep_spec(args.rep, cfg.tolerances, cfg.seed)
        if args.maxlen > cfg.max_len:
            raise UsageError(f"--maxlen exceeds the configured cap {cfg.max_len}")
        g = lm.image_growth(rep, args.maxlen, cfg.tol_dedup, not args.nonprojective, cfg.max_ball)
        print("radius,new,total")
        for i, (a, b) in enumerate(zip(g.new_per_radius, g.sizes)):
            print(f"{i},{a},{b}")
        print(f"{rep.label}: {g.text()}")
        emit(cfg, {"command": "limits growth", "rep": rep.label, "new_per_radius": g.new_per_radius,
                   "sizes": g.sizes, "classification": g.text()})
        return EXIT_PASS
    raise UsageError(args.action)


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--tol-relation", type=float, dest="tol_relation")
    g.add_argument("--tol-unitarity", type=float, dest="tol_unitarity")
    g.add_argument("--tol-dedup", type=float, dest="tol_dedup")
    g.add_argument("--tol-solver", type=float, dest="tol_solver")
    g.add_argument("--seed", type=int)
    g.add_argument("--max-ball", type=int, dest="max_ball")
    g.add_argument("--threads", type=int, help="worker count (capped by BRAIDLAB_THREADS)")
    g.add_argument("--config", help="JSON file with defaults for the options above")
    g.add_argument("--out", help="write the machine-readable report here")

    p = argparse.ArgumentParser(prog="braidlab", description="Braid group representations and leakage analysis")
    sub = p.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("rep", help="build, check, evaluate and compare representations")
    rsub = rep.add_subparsers(dest="action", required=True)
    for name in ("build", "check", "eval"):
        sp = rsub.add_parser(name, parents=[common])
        sp.add_argument("--spec", "--rep", dest="spec", help="representation spec, e.g. eta:1/4pi")
        sp.add_argument("--family", choices=["eta", "jones", "character", "burau", "standard", "ising"])
        sp.add_argument("--theta")
        sp.add_argument("--phi")
        sp.add_argument("--n", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--sign", default="+", choices=["+", "-"])
        sp.add_argument("--z")
        sp.add_argument("--tau3", choices=["same", "conj"], default="same")
        for m in _MODIFIERS:
            sp.add_argument(f"--{m}", action="store_true")
        if name == "build":
            sp.add_argument("--save", help="write the Rep file here")
        if name == "check":
            sp.add_argument("--in", dest="infile")
        if name == "eval":
            sp.add_argument("--word", help='signed generator tokens, e.g. "1 -2 3"')
    sp = rsub.add_parser("equiv", parents=[common])
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--tol", type=float)

    lkp = sub.add_parser("leakage", help="bridge solving, theta scans, leakage enumeration")
    lsub = lkp.add_subparsers(dest="action", required=True)
    sp = lsub.add_parser("solve", parents=[common])
    sp.add_argument("--left")
    sp.add_argument("--right")
    sp.add_argument("--mirror-right", action="store_true", help="embed the right qudit mirrored")
    sp.add_argument("--family", help="named layout family, or 'all'")
    sp.add_argument("--list-families", action="store_true")
    sp.add_argument("--method", choices=["auto", "closed", "numeric"], default="auto")
    sp.add_argument("--attempts", type=int, default=50)
    sp.add_argument("--expect", choices=["solution", "none"], default="solution")
    sp = lsub.add_parser("scan", parents=[common])
    sp.add_argument("--family", default="eta3x3")
    sp.add_argument("--grid", type=int, default=181, help="minimum number of admissible grid points")
    sp.add_argument("--thetas", help="comma-separated explicit angles")
    sp = lsub.add_parser("enum", parents=[common])
    sp.add_argument("--rep", required=True)
    sp.add_argument("--proj", required=True, help="parity-even, parity-odd, left-charge, coords:i,j,..")
    sp.add_argument("--maxlen", type=int, default=4)
    sp.add_argument("--leak-tol", type=float, default=1e-10, dest="leak_tol")

    lim = sub.add_parser("limits", help="N(d) values, universality, image growth")
    msub = lim.add_subparsers(dest="action", required=True)
    sp = msub.add_parser("bound", parents=[common])
    sp.add_argument("--d", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--mult", help="eigenvalue multiplicities, e.g. 2,1")
    sp = msub.add_parser("classify", parents=[common])
    sp.add_argument("--theta")
    sp.add_argument("--r", type=int)
    sp.add_argument("--sign", default="+", choices=["+", "-"])
    sp = msub.add_parser("growth", parents=[common])
    sp.add_argument("--rep", required=True)
    sp.add_argument("--maxlen", type=int, default=8)
    sp.add_argument("--nonprojective", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        handler = {"rep": cmd_rep, "leakage": cmd_leakage, "limits": cmd_limits}[args.command]
        return handler(args, cfg)
    except (UsageError, InvalidParameter, MalformedToken, GeneratorOutOfRange) as exc:
        print(f"braidlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BraidlabError as exc:
        print(f"FAIL: {type(exc).__name__}: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
