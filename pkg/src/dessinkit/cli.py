"""Command-line interface: ``dessinkit <subcommand> ...``.

Exit status: 0 on success, 1 on usage or input errors, 2 when a
mathematical check fails.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .collapse import ChainError, collapse_full, collapse_rational, verify_chain
from .config import RunConfig
from .groups import classify_group, nielsen_certificate, nielsen_compare
from .io import DessinFile, FormatError, dumps, load_dessin
from .monodromy import compose_covers, default_fibre_marking, passport, sigma_pullback
from .orbits import belyi_oracle, cl_construction, cl_prime_construction, eks_exists, orbit_lower_bound, verify_lemmata
from .perm import parse_partition
from .ratpoly import RatPoly
from .sqrt import sqct, theorem_checks

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 1, 2


class UsageError(Exception):
    pass


class MathCheckFailed(Exception):
    def __init__(self, report: dict, message: str):
        super().__init__(message)
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default; 2 is reserved here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _partition(text: str):
    try:
        return parse_partition(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _pjson(p) -> list[int]:
    return list(p)


def _dessin(path: str, cfg: RunConfig):
    return load_dessin(path).constellation(require_transitive=cfg.require_transitive)


# --------------------------------------------------------------------------
# subcommands


def cmd_sqct(args, cfg: RunConfig) -> dict:
    c = _dessin(args.input, cfg)
    rep = sqct(c, require_transitive=cfg.require_transitive)
    checks = theorem_checks(rep)
    out = rep.as_json()
    out["theorem_checks"] = [vars(ch) for ch in checks]
    if not all(ch.passed for ch in checks):
        raise MathCheckFailed(out, "theorem check violated")
    return out


def cmd_orbit_bound(args, cfg: RunConfig) -> dict:
    rep = orbit_lower_bound(args.psi, args.mu, args.form, guard=cfg.oracle_degree_guard, strict=cfg.strict_m_prime)
    return rep.as_json()


def cmd_exists(args, cfg: RunConfig) -> dict:
    alpha, beta = args.alpha, args.beta
    if sum(alpha) != sum(beta):
        raise UsageError("alpha and beta must partition the same integer")
    n = sum(alpha)
    out = {"alpha": _pjson(alpha), "beta": _pjson(beta), "n": n, "eks_exists": eks_exists(alpha, beta)}
    if args.oracle:
        w = belyi_oracle(alpha, beta, (n,), guard=cfg.oracle_degree_guard)
        out["oracle_exists"] = w is not None
        if w is not None:
            out["witness"] = DessinFile.from_constellation(w).to_json()
        if out["oracle_exists"] != out["eks_exists"]:
            raise MathCheckFailed(out, "criterion and oracle disagree")
    return out


def cmd_collapse(args, cfg: RunConfig) -> dict:
    bound = args.max_expand_degree or cfg.expansion_bound
    if args.r is not None:
        if args.minpoly or args.points:
            raise UsageError("--r cannot be combined with --minpoly/--points")
        chain = collapse_rational(args.r)
    else:
        minpoly = None
        if args.minpoly:
            try:
                minpoly = RatPoly([Fraction(c) for c in args.minpoly.split(",")])
            except ValueError as exc:
                raise UsageError(f"--minpoly: {exc}") from None
        points = [Fraction(p) for p in args.points.split(",")] if args.points else []
        chain = collapse_full(points, minpoly)
    out = {"chain": chain.to_json()}
    try:
        out["certificate"] = verify_chain(chain, bound).as_json()
    except ChainError as exc:
        out["certificate"] = {"passed": False, "stage": exc.stage, "error": str(exc)}
        raise MathCheckFailed(out, str(exc)) from None
    return out


def cmd_compose(args, cfg: RunConfig) -> dict:
    outer = _dessin(args.outer, cfg)
    inner = _dessin(args.inner, cfg)
    marking = default_fibre_marking(outer, args.fibre)
    comp = compose_covers(outer, inner, marking)
    return {
        "marking": {k: list(v) for k, v in marking.items()},
        "passport": [_pjson(p) for p in passport(comp)],
        "dessin": DessinFile.from_constellation(comp, provenance="compose").to_json(),
    }


def cmd_pullback(args, cfg: RunConfig) -> dict:
    c = _dessin(args.input, cfg)
    four = sigma_pullback(c)
    out = {
        "sigma_m1": [list(x) for x in four.sigma_m1.cycles()],
        "sigma0": [list(x) for x in four.sigma0.cycles()],
        "sigma1": [list(x) for x in four.sigma1.cycles()],
        "sigma_inf": [list(x) for x in four.sigma_inf.cycles()],
        "sigma_m1_trivial": four.sigma_m1.is_identity(),
    }
    if four.sigma_m1.is_identity():
        three = four.drop_trivial()
        out["dessin"] = DessinFile.from_constellation(three, provenance="pullback").to_json()
        out["transitive"] = three.transitive
    return out


def cmd_nielsen(args, cfg: RunConfig) -> dict:
    a, b = _dessin(args.a, cfg), _dessin(args.b, cfg)
    cmp = nielsen_compare(a, b, cfg.exact_nielsen_bound)
    out = {"equal": cmp.equal, "level": cmp.level, "detail": cmp.detail}
    for key, c in (("a", a), ("b", b)):
        cls = classify_group(c, cfg.exact_nielsen_bound)
        entry = {"verdict": cls.verdict, "order": cls.order, "certificate": cls.certificate}
        if cls.order is not None:
            entry["nielsen"] = nielsen_certificate(c, cfg.exact_nielsen_bound).as_json()
        out[key] = entry
    return out


def cmd_lemmata(args, cfg: RunConfig) -> dict:
    return verify_lemmata(args.t_max).as_json()


def cmd_cl_census(args, cfg: RunConfig) -> dict:
    build = cl_prime_construction if args.prime else cl_construction
    return build(args.t, run_census=not args.no_census).as_json()


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dessinkit", description="Square-root invariants and odd-degree collapse for Belyi maps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--strict-m-prime", action="store_true", default=None, help="add ell_2c = 0 to the M' witness condition")
    p.add_argument("--allow-intransitive", action="store_true", help="do not require transitive constellations")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sqct", help="square-root cycle types of a dessin")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_sqct)

    s = sub.add_parser("orbit-bound", help="Galois orbit lower bound for (psi, mu, psi)")
    s.add_argument("--psi", type=_partition, required=True)
    s.add_argument("--mu", type=_partition, required=True)
    s.add_argument("--form", choices=("main", "alternate"), default="main")
    s.set_defaults(func=cmd_orbit_bound)

    s = sub.add_parser("exists", help="existence of a cover of type (alpha, beta, n)")
    s.add_argument("--alpha", type=_partition, required=True)
    s.add_argument("--beta", type=_partition, required=True)
    s.add_argument("--oracle", action="store_true", help="also run the exhaustive search")
    s.set_defaults(func=cmd_exists)

    s = sub.add_parser("collapse", help="odd-degree collapse chain")
    s.add_argument("--r", type=_rational)
    s.add_argument("--minpoly", help="comma-separated rational coefficients, constant term first")
    s.add_argument("--points", help="comma-separated rationals")
    s.add_argument("--max-expand-degree", type=int)
    s.set_defaults(func=cmd_collapse)

    s = sub.add_parser("compose", help="compose two dessins, inner branch points on an outer fibre")
    s.add_argument("--outer", required=True)
    s.add_argument("--inner", required=True)
    s.add_argument("--fibre", choices=("0", "1", "inf"), default="0")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("pullback", help="monodromy of the pullback along 4f/(f+1)^2")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_pullback)

    s = sub.add_parser("nielsen", help="compare rational Nielsen classes")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.set_defaults(func=cmd_nielsen)

    s = sub.add_parser("lemmata", help="exact check of the n0, sum and product inequalities behind the Cl bound")
    s.add_argument("--t-max", type=int, default=200)
    s.set_defaults(func=cmd_lemmata)

    s = sub.add_parser("cl-census", help="the Cl and Cl' lower-bound constructions")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--prime", action="store_true", help="prime-degree variant")
    s.add_argument("--no-census", action="store_true", help="skip the M' enumeration")
    s.set_defaults(func=cmd_cl_census)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_env(
            strict_m_prime=args.strict_m_prime,
            require_transitive=False if args.allow_intransitive else None,
        )
    except ValueError as exc:
        print(f"dessinkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    status = EXIT_OK
    try:
        body = args.func(args, cfg)
    except MathCheckFailed as exc:
        body, status = exc.report, EXIT_MATH
        print(f"dessinkit: {exc}", file=sys.stderr)
    except (UsageError, FormatError, FileNotFoundError, ValueError) as exc:
        print(f"dessinkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {"command": args.command, "config": cfg.as_json(), "result": body}
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
