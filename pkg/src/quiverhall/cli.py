"""Command-line front end.

Every subcommand prints one JSON document (or TSV/DOT where offered) to
stdout. Errors print ``{"error": ...}`` and exit with 1 (usage), 2 (budget
or search limit) or 3 (internal invariant violation).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath

from . import forms, hall, nakajima
from .coeff_arith import PrimeField, field_from_name
from .errors import BudgetExceeded, InvariantViolation, QuiverHallError, Undecided
from .path_algebra import element_from_json, pa_multiply
from .quiver import enumerate_paths, load_quiver
from .representation import default_budget, krull_schmidt, load_rep, orbit_table

EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_INVARIANT = 3


class UsageError(QuiverHallError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _words(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _read(path: str) -> str:
    return FilePath(path).read_text(encoding="utf-8")


def _quiver(args):
    return load_quiver(_read(args.quiver))


def _check_primes(primes):
    if len(set(primes)) != len(primes):
        raise UsageError("primes must be distinct")
    for p in primes:
        PrimeField(p)


# -- subcommands -------------------------------------------------------------


def cmd_paths(args):
    Q = _quiver(args)
    paths = enumerate_paths(Q, args.max_len)
    if args.format == "tsv":
        lines = ["head\ttail\tlength\tpath"]
        lines += [f"{p.head}\t{p.tail}\t{p.length}\t{p!r}" for p in paths]
        return "\n".join(lines) + "\n"
    if args.format == "dot":
        return Q.to_dot()
    return {"count": len(paths), "paths": [p.to_json() for p in paths]}


def cmd_pa_mul(args):
    Q = _quiver(args)
    F = field_from_name(args.field)
    x = element_from_json(Q, F, json.loads(_read(args.x)))
    y = element_from_json(Q, F, json.loads(_read(args.y)))
    return {"product": pa_multiply(x, y).to_json()}


def cmd_classify(args):
    Q = _quiver(args)
    if args.format == "dot":
        return Q.to_dot()
    return forms.classify_type(Q).to_json()


def cmd_roots(args):
    Q = _quiver(args)
    roots = forms.positive_roots(Q, args.height_bound)
    if args.format == "tsv":
        lines = ["root\tkind\theight"]
        lines += [f"{','.join(map(str, r.vector))}\t{r.kind}\t{r.height}" for r in roots]
        return "\n".join(lines) + "\n"
    return {"count": len(roots), "roots": [r.to_json() for r in roots]}


def cmd_decompose(args):
    V = load_rep(_read(args.rep))
    summands = krull_schmidt(V, seed=args.seed)
    return {"count": len(summands), "summands": [{"dims": W.dim_vector(), "maps": W.to_json()["maps"]} for W in summands]}


def cmd_iso_classes(args):
    Q = _quiver(args)
    reps = orbit_table(Q, args.dims, args.prime, args.budget).representatives()
    if args.format == "tsv":
        lines = ["index\tentries"]
        lines += [f"{k}\t{','.join(map(str, V.entries()))}" for k, V in enumerate(reps)]
        return "\n".join(lines) + "\n"
    return {"count": len(reps), "classes": [V.to_json()["maps"] for V in reps]}


def cmd_gabriel(args):
    Q = _quiver(args)
    return forms.check_gabriel(Q, args.prime, args.dim_bound, args.budget)


def cmd_kac(args):
    Q = _quiver(args)
    return forms.check_kac(Q, args.prime, args.dim_bound, args.budget)


def _hall_operand(alg, rep_path, word):
    if (rep_path is None) == (word is None):
        raise UsageError("give exactly one of a representation file or a word for each factor")
    if word is not None:
        return alg.composition_monomial(word)
    V = load_rep(_read(rep_path))
    if V.quiver != alg.quiver:
        raise UsageError("representation is over a different quiver")
    if V.field != alg.field:
        raise UsageError(f"representation is over {V.field.name}, expected {alg.field.name}")
    return alg.element(alg.class_of(V))


def _algebra(args, Q):
    return hall.HallAlgebra(Q, args.prime, args.budget, args.subspace_budget)


def cmd_hall_mul(args):
    Q = _quiver(args)
    alg = _algebra(args, Q)
    x = _hall_operand(alg, args.left, args.left_word)
    y = _hall_operand(alg, args.right, args.right_word)
    return {"product": (x * y).to_json()}


def cmd_serre(args):
    Q = _quiver(args)
    if len(args.vertices) != 2:
        raise UsageError("--vertices takes exactly two vertices i,j")
    holds, residual = _algebra(args, Q).serre_check(*args.vertices)
    out = {"holds": holds}
    if not holds:
        out["residual"] = residual.to_json()
    return out


def cmd_generic(args):
    Q = _quiver(args)
    _check_primes(args.primes)
    if (args.word is None) == (args.serre is None):
        raise UsageError("give exactly one of --word or --serre")
    if args.word is not None:
        compute = lambda alg: alg.composition_monomial(args.word)  # noqa: E731
    else:
        if len(args.serre) != 2:
            raise UsageError("--serre takes exactly two vertices i,j")
        compute = lambda alg: alg.serre_residual(*args.serre)  # noqa: E731
    g = hall.generic_lift(Q, compute, args.primes, args.degree_bound, args.budget)
    return {"zero": g.is_zero(), "terms": g.to_json()}


def cmd_dim_check(args):
    Q = _quiver(args)
    return hall.finite_type_dim_check(Q, args.nu, args.prime, args.budget)


def cmd_lambda_count(args):
    Q = _quiver(args)
    pts = nakajima.lambda_points(Q, args.dims, args.prime, args.budget)
    out = {"count": len(pts)}
    if args.list:
        out["points"] = [x.rep.to_json()["maps"] for x in pts]
    return out


def cmd_stable_check(args):
    pt = nakajima.load_point(_read(args.point))
    if not isinstance(pt, nakajima.FramedPoint):
        raise UsageError("point has no framing block")
    return {"stable": nakajima.is_stable(pt)}


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quiverhall", description="Quivers, representations and Hall algebras over prime fields.")
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=None,
                        help="cap on exhaustive scans (default: $QUIVERHALL_BUDGET or 10^6)")
    common.add_argument("--subspace-budget", type=int, default=hall.SUBSPACE_BUDGET,
                        help="cap on subspace candidates per Hall product")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    common.add_argument("--format", choices=["json", "tsv", "dot"], default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_quiver(name, func, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.add_argument("-q", "--quiver", required=True, help="quiver JSON file")
        p.set_defaults(func=func)
        return p

    p = with_quiver("paths", cmd_paths, "list paths up to a length")
    p.add_argument("--max-len", type=int, default=3)

    p = with_quiver("pa-mul", cmd_pa_mul, "multiply two path algebra elements")
    p.add_argument("--field", default="Q")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    with_quiver("classify", cmd_classify, "finite / tame / wild")

    p = with_quiver("roots", cmd_roots, "positive roots up to a height")
    p.add_argument("--height-bound", type=int, default=forms.DEFAULT_HEIGHT)

    p = sub.add_parser("decompose", help="Krull-Schmidt decomposition of a representation", parents=[common])
    p.add_argument("--rep", required=True)
    p.set_defaults(func=cmd_decompose)

    p = with_quiver("iso-classes", cmd_iso_classes, "isomorphism classes over F_p")
    p.add_argument("--dims", type=_ints, required=True)
    p.add_argument("--prime", type=int, required=True)

    p = with_quiver("gabriel-check", cmd_gabriel, "indecomposables vs positive roots")
    p.add_argument("--prime", type=int, default=2)
    p.add_argument("--dim-bound", type=int, default=None)

    p = with_quiver("kac-check", cmd_kac, "indecomposable dimension vectors vs roots")
    p.add_argument("--prime", type=int, default=2)
    p.add_argument("--dim-bound", type=int, default=2)

    p = with_quiver("hall-mul", cmd_hall_mul, "product of two Hall algebra elements")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--left-word", type=_words)
    p.add_argument("--right-word", type=_words)

    p = with_quiver("serre-check", cmd_serre, "quantum Serre relation in the Hall algebra")
    p.add_argument("--vertices", type=_words, required=True)
    p.add_argument("--prime", type=int, required=True)

    p = with_quiver("generic", cmd_generic, "lift a computation across primes")
    p.add_argument("--word", type=_words)
    p.add_argument("--serre", type=_words)
    p.add_argument("--primes", type=_ints, default=[2, 3, 5, 7, 11])
    p.add_argument("--degree-bound", type=int, default=2)

    p = with_quiver("dim-check", cmd_dim_check, "compare dim H_nu with dim U+_nu")
    p.add_argument("--nu", type=_ints, required=True)
    p.add_argument("--prime", type=int, default=2)

    p = with_quiver("lambda-count", cmd_lambda_count, "count points of Lambda_V over F_p")
    p.add_argument("--dims", type=_ints, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--list", action="store_true", help="also list the points")

    p = sub.add_parser("stable-check", help="stability of a framed point", parents=[common])
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_stable_check)
    return parser


def _emit(payload, out):
    if isinstance(payload, str):
        out.write(payload)
    else:
        out.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.budget is not None and args.budget <= 0:
            raise UsageError("--budget must be positive")
        if args.budget is None:
            args.budget = default_budget()
        if args.format != "json" and args.command not in {"paths", "classify", "roots", "iso-classes"}:
            raise UsageError(f"--format {args.format} is not offered by {args.command}")
        if args.format == "dot" and args.command not in {"paths", "classify"}:
            raise UsageError(f"--format dot is not offered by {args.command}")
        if args.format == "tsv" and args.command == "classify":
            raise UsageError("--format tsv is not offered by classify")
        _emit(args.func(args), out)
        return 0
    except (BudgetExceeded, Undecided) as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__}, out)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__}, out)
        return EXIT_INVARIANT
    except (UsageError, QuiverHallError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__}, out)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
