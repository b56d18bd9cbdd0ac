"""Command line entry point: ``engelcheck <command> ...``.

Exit status 0 when every check passes, 1 when a check fails, 2 on usage
and resource errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence

from .config import Caps, PreconditionError, ResourceError
from .grading import (
    GradingAssignment,
    adjan_razborov_F,
    adjan_razborov_N,
    bound_report,
    higgins_bound,
    lemma1_bound,
    verify_lemma1_collection,
)
from .harness import SymmetrizedSumSpec, check_tau_swap, verify_eq1_implies_vanishing
from .identities import (
    Identity,
    _fresh_generators,
    consequence_report,
    describe_instance,
    engel_identity,
    polarize,
    read_identities,
)
from .lie import Gen, lyndon_basis, parse_element, parse_generator, witt_dimension
from .report import dump_json, dump_text
from .symgroup import (
    YoungTableau,
    check_decomposition,
    decompose_identity,
    essential_scalar,
    young_symmetrizer,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _signs(text) -> str:
    """Accept '+-' or 'pm' spellings of a sign vector ('pm' avoids argparse eating '--')."""
    if not isinstance(text, str):
        raise UsageError("empty sign vector: spell it with 'p' and 'm', e.g. --eps mm")
    s = text.strip().replace("p", "+").replace("m", "-")
    if not s or set(s) - {"+", "-"}:
        raise UsageError(f"bad sign vector {text!r}: use characters from '+-' (or 'pm')")
    return s


def _generators(text: str) -> list[Gen]:
    text = text.strip()
    if text.isdigit():
        return [Gen(i) for i in range(1, int(text) + 1)]
    return [parse_generator(t) for t in text.replace(" ", "").split(";" if "(" in text else ",") if t]


def _identity_args(args) -> list[Identity]:
    ids: list[Identity] = []
    if getattr(args, "identities", None):
        ids += read_identities(Path(args.identities).read_text())
    if getattr(args, "engel", None):
        ids.append(engel_identity(args.engel))
    return ids


# ---------------------------------------------------------------------------
# commands: each returns (kind, payload, passed, text override or None)


def cmd_basis(args, caps):
    gs = _generators(args.generators)
    layers = lyndon_basis(gs, args.max_weight)
    payload = {"generators": [str(g) for g in gs], "max_weight": args.max_weight, "layers": {}}
    ok = True
    for wt in range(1, args.max_weight + 1):
        mons = layers.get(wt, [])
        expected = witt_dimension(len(gs), wt)
        ok &= len(mons) == expected
        payload["layers"][str(wt)] = {
            "count": len(mons),
            "witt": expected,
            "monomials": [str(b.element()) for b in mons] if not args.counts_only else [],
        }
    return "basis", payload, ok, None


def cmd_normalize(args, caps):
    e = parse_element(args.expression)
    text = str(e)
    return "normalize", {"input": args.expression, "canonical": text, "terms": len(e)}, True, text + "\n"


def cmd_linearize(args, caps):
    ids = [Identity(parse_element(args.identity))] if args.identity else _identity_args(args)
    if len(ids) != 1:
        raise UsageError("linearize needs exactly one of --identity or --engel")
    ident = ids[0]
    var = parse_generator(args.variable)
    fresh = [parse_generator(s) for s in args.fresh.split(",")] if args.fresh else _fresh_generators(
        ident.variables, args.parts
    )
    out = polarize(ident, var, args.parts, fresh)
    payload = {
        "identity": str(ident.body),
        "variable": str(var),
        "parts": args.parts,
        "fresh": [str(g) for g in fresh],
        "polarized": str(out.body),
    }
    return "linearize", payload, True, str(out.body) + "\n"


def cmd_consequence(args, caps):
    ids = _identity_args(args)
    if not ids:
        raise UsageError("consequence needs --identities FILE or --engel N")
    target = parse_element(args.target)
    rep, cert = consequence_report(args.target, target, ids, caps)
    payload = rep.to_dict()
    if cert is not None:
        payload["certificate"] = [
            {"coefficient": c, "instance": describe_instance(cert, inst)} for inst, c in cert.terms
        ]
        payload["certificate_verified"] = cert.verify()
    text = None
    if args.format == "text":
        lines = [f"{'pass' if rep.is_consequence else 'fail'}: {args.target}"]
        lines.append(f"layer {rep.multiweight!r}: ambient {rep.ambient_dim}, rank {rep.rank}, quotient {rep.quotient_dim}")
        if cert is not None:
            lines.append(f"certificate ({len(cert)} instances, verified {cert.verify()}):")
            for inst, c in cert.terms:
                lines.append(f"  {c} * {describe_instance(cert, inst)}")
        text = "\n".join(lines) + "\n"
    return "consequence", payload, bool(rep.is_consequence), text


def _tableau(args) -> YoungTableau:
    if args.tableau_file:
        return YoungTableau.parse(Path(args.tableau_file).read_text())
    if args.tableau:
        return YoungTableau.parse(args.tableau.replace("/", "\n"))
    raise UsageError("symmetrizer needs --tableau or --tableau-file")


def cmd_symmetrizer(args, caps):
    t = _tableau(args)
    n = t.size
    if n > caps.symmetric_degree:
        raise ResourceError("symmetric_degree", caps.symmetric_degree, n, "symmetrizer")
    e = young_symmetrizer(t)
    k = essential_scalar(t)
    f = t.shape.num_standard()
    payload = {
        "tableau": [list(r) for r in t.rows],
        "shape": list(t.shape.parts),
        "support": len(e),
        "k": k,
        "k_divides_factorial": math.factorial(n) % int(k) == 0,
        "hook_length_k": math.factorial(n) // f,
        "symmetrizer": str(e) if not args.quiet else "",
    }
    ok = payload["k_divides_factorial"] and k == math.factorial(n) // f
    return "symmetrizer", payload, ok, None


def cmd_decompose(args, caps):
    pairs = decompose_identity(args.N, caps)
    checks = check_decomposition(pairs, args.N)
    payload = {
        "N": args.N,
        "count": len(pairs),
        "checks": checks,
        "construction": "seminormal (Jucys-Murphy eigenbasis)",
        "idempotents": [] if args.quiet else [
            {"tableau": [list(r) for r in t.rows], "element": str(e)} for t, e in pairs
        ],
    }
    return "decompose", payload, all(checks.values()), None


def cmd_bounds(args, caps):
    payload: dict = {}
    values: list[str] = []
    if not (args.higgins or args.lemma1 or args.ar_N or args.ar_F):
        raise UsageError("bounds needs one of --higgins, --lemma1, --ar-N, --ar-F")

    def need(flag, value):
        if value is None:
            raise UsageError(f"bounds {flag} needs {value_names[flag]}")
        return value

    value_names = {"--higgins": "-n and -r", "--lemma1": "-n and -m", "--ar-N": "-n and -r", "--ar-F": "-n, -r and -i"}
    if args.higgins:
        need("--higgins", args.n), need("--higgins", args.r)
        v = higgins_bound(args.n, args.r)
        payload["higgins"] = {"n": args.n, "r": args.r, "value": v}
        values.append(str(v))
    if args.lemma1:
        need("--lemma1", args.n), need("--lemma1", args.m)
        bound, K = lemma1_bound(args.n, args.m)
        payload["lemma1"] = bound_report(args.n, args.m).to_dict()
        values.append(f"{bound} K={K}")
    if args.ar_N:
        need("--ar-N", args.n), need("--ar-N", args.r)
        res = adjan_razborov_N(args.n, args.r, caps, round_up=args.round_up)
        payload["ar_N"] = {
            "n": args.n,
            "r": args.r,
            "value": res.value,
            "half_integer_policy": "ceil" if res.rounded_exponent else "exact",
        }
        values.append(f"{res.value} (exponent rounded up)" if res.rounded_exponent else str(res.value))
    if args.ar_F:
        need("--ar-F", args.n), need("--ar-F", args.r), need("--ar-F", args.i)
        v = adjan_razborov_F(args.n, args.r, args.i, caps)
        payload["ar_F"] = {"n": args.n, "r": args.r, "i": args.i, "value": v}
        values.append(str(v))
    return "bounds", payload, True, "\n".join(values) + "\n"


def cmd_lemma1(args, caps):
    signs = _signs(args.grading)
    g = GradingAssignment.from_signs(signs)
    rep = verify_lemma1_collection(args.n, args.m, g, args.max_weight, caps, reduced_k=args.reduced_k)
    return "lemma1", rep.to_dict(), rep.passed, None


def cmd_harness(args, caps):
    if args.tau_swap:
        eps = _signs(args.eps) if args.eps is not None else "+" * args.K
        spec = SymmetrizedSumSpec(args.R, args.K, eps)
        positions = [int(p) for p in args.positions.split(",")] if args.positions else list(range(1, args.k + 1))
        res = check_tau_swap(spec, positions, args.c1_weight)
        payload = {"R": args.R, "K": args.K, "epsilons": eps, "positions": positions, "c1_weight": args.c1_weight}
        payload.update(res.to_dict())
        return "tau_swap", payload, res.ok, None
    rep = verify_eq1_implies_vanishing(args.n, args.k, args.m, args.K, args.max_weight, caps, timings=args.timings)
    return "harness", rep.to_dict(), rep.passed, None


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-dim", type=int, default=Caps.dim, help="largest ambient layer dimension")
    common.add_argument("--cap-digits", type=int, default=Caps.digits, help="largest big-integer size in digits")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="engelcheck", description="Exact checks for Engel Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("basis", parents=[common], help="Lyndon basis layers")
    s.add_argument("--generators", "-g", default="2", help="a count, or a list like x1,x2")
    s.add_argument("--max-weight", "-w", type=int, default=4)
    s.add_argument("--counts-only", action="store_true")
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("normalize", parents=[common], help="print the canonical form of an expression")
    s.add_argument("expression")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("linearize", parents=[common], help="polarize an identity in one variable")
    s.add_argument("--identity")
    s.add_argument("--engel", type=int)
    s.add_argument("--variable", required=True)
    s.add_argument("--parts", type=int, required=True)
    s.add_argument("--fresh", help="comma separated fresh generators")
    s.set_defaults(func=cmd_linearize)

    s = sub.add_parser("consequence", parents=[common], help="decide whether a target follows from identities")
    s.add_argument("--identities", help="identity file")
    s.add_argument("--engel", type=int, help="add the n-Engel identity")
    s.add_argument("--target", required=True)
    s.set_defaults(func=cmd_consequence)

    s = sub.add_parser("symmetrizer", parents=[common], help="Young symmetrizer of a tableau")
    s.add_argument("--tableau", help="rows separated by '/', e.g. '1 2/3'")
    s.add_argument("--tableau-file")
    s.add_argument("--quiet", action="store_true", help="omit the element itself")
    s.set_defaults(func=cmd_symmetrizer)

    s = sub.add_parser("decompose", parents=[common], help="primitive idempotents summing to 1")
    s.add_argument("-N", type=int, required=True)
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("bounds", parents=[common], help="explicit numeric bounds")
    s.add_argument("--higgins", action="store_true")
    s.add_argument("--lemma1", action="store_true")
    s.add_argument("--ar-N", dest="ar_N", action="store_true")
    s.add_argument("--ar-F", dest="ar_F", action="store_true")
    s.add_argument("-n", type=int)
    s.add_argument("-r", type=int)
    s.add_argument("-m", type=int)
    s.add_argument("-i", type=int)
    s.add_argument("--round-up", action="store_true", help="ceil the half-integer exponent for odd n")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("lemma1", parents=[common], help="truncated check of the graded collection lemma")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-m", type=int, required=True)
    s.add_argument("--grading", default="+-", help="generator signs, '-' (or 'm') = odd")
    s.add_argument("--max-weight", "-W", type=int, default=5)
    s.add_argument("--reduced-k", type=int)
    s.set_defaults(func=cmd_lemma1)

    s = sub.add_parser("harness", parents=[common], help="symmetrized-sum pipeline at toy scale")
    s.add_argument("-n", type=int, default=2)
    s.add_argument("-k", type=int, default=2)
    s.add_argument("-m", type=int, default=1)
    s.add_argument("-K", type=int, default=1)
    s.add_argument("--max-weight", "-W", type=int, default=6)
    s.add_argument("--timings", action="store_true", help="include wall-clock times (not reproducible)")
    s.add_argument("--tau-swap", action="store_true", help="run the swap check instead")
    s.add_argument("-R", type=int, default=3)
    s.add_argument("--eps", help="column signs for the swap check")
    s.add_argument("--positions", help="slot numbers, e.g. 1,2")
    s.add_argument("--c1-weight", type=int, default=1)
    s.set_defaults(func=cmd_harness)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    caps = Caps(dim=args.cap_dim, digits=args.cap_digits)
    try:
        kind, payload, passed, text = args.func(args, caps)
    except UsageError as exc:
        parser.error(str(exc))
    except (ResourceError, PreconditionError, OSError) as exc:
        print(f"engelcheck {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = {"passed": passed, **payload}
    if args.format == "json":
        out = dump_json(kind, payload)
    else:
        out = text if text is not None else dump_text(payload)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
