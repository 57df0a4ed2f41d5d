"""Command-line front end.

Every subcommand reads one JSON document (stdin when no input path is
given), writes one JSON document (stdout unless -o is given), and exits
0 on success, 1 when a verification fails (the failing certificate is
the output), or 2 on malformed input or arguments.  Randomized
subcommands take --seed and default to seed 0, so runs are reproducible.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import bifiltration, deformation, graph, invariants, serialize, supermodule
from .exactalg import Matrix
from .serialize import SerializeError


def _read_document(path: str | None):
    text = sys.stdin.read() if path is None or path == "-" else open(path).read()
    return serialize.loads(text)


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as handle:
            handle.write(text)


def _emit(obj, path: str | None) -> int:
    _write(serialize.dumps(obj), path)
    return 0


def _emit_certificate(cert, path: str | None) -> int:
    _write(serialize.dumps(cert), path)
    return 0 if cert.passed else 1


def _expect(obj, *types):
    if not isinstance(obj, types):
        names = " or ".join(t.__name__ for t in types)
        raise SerializeError(f"expected {names}, got {type(obj).__name__}")
    return obj


def _filtration_arg(obj) -> supermodule.SuperFiltration:
    """Accept a filtration document, unwrapping a quotient output."""
    if isinstance(obj, deformation.OnShellModule):
        return obj.filtration
    return _expect(obj, supermodule.SuperFiltration)


def _checked_filtration(obj, output) -> supermodule.SuperFiltration | int:
    f = _filtration_arg(obj)
    cert = supermodule.check_filtration(f)
    if not cert:
        return _emit_certificate(cert, output)
    return f


# --- subcommand bodies, each returning the process exit status ---


def _cmd_example(args) -> int:
    name = args.name
    if name == "exterior4-degree":
        doc = supermodule.degree_filtration(supermodule.exterior_module(4))
    elif name == "exterior4-hodge":
        doc = supermodule.hodge_filtration(supermodule.exterior_module(4))
    elif name == "cl5-irreducible":
        doc = supermodule.irreducible_cl5()
    else:  # cl1-trivial
        doc = supermodule.trivial_filtration(supermodule.exterior_module(1))
    return _emit(doc, args.output)


def _cmd_check(args) -> int:
    obj = _read_document(args.input)
    if isinstance(obj, supermodule.SuperFiltration):
        cert = supermodule.check_filtration(obj)
    elif isinstance(obj, supermodule.CliffordSupermodule):
        cert = supermodule.check_supermodule(obj)
    elif isinstance(obj, deformation.OffShellRep):
        cert = deformation.verify_offshell(obj)
    elif isinstance(obj, deformation.OnShellModule):
        cert = supermodule.check_filtration(obj.filtration)
    elif isinstance(obj, bifiltration.BifilteredSupermodule):
        cert = bifiltration.check_bifiltered_module(obj)
    elif isinstance(obj, bifiltration.BiGradedRep):
        cert = bifiltration.verify_2d(obj)
    else:
        raise SerializeError(f"no check applies to {type(obj).__name__}")
    return _emit_certificate(cert, args.output)


def _cmd_deform(args) -> int:
    f = _checked_filtration(_read_document(args.input), args.output)
    if isinstance(f, int):
        return f
    return _emit(deformation.deform(f), args.output)


def _cmd_quotient(args) -> int:
    r = _expect(_read_document(args.input), deformation.OffShellRep)
    cert = deformation.verify_offshell(r)
    if not cert:
        return _emit_certificate(cert, args.output)
    try:
        shell = Fraction(args.k)
    except (ValueError, ZeroDivisionError):
        raise SerializeError(f"--k must be a rational, got {args.k!r}")
    if shell < 0:
        raise SerializeError("--k must be nonnegative")
    return _emit(deformation.quotient_at(r, shell), args.output)


def _cmd_roundtrip(args) -> int:
    f = _checked_filtration(_read_document(args.input), args.output)
    if isinstance(f, int):
        return f
    try:
        deformation.canonical_roundtrip_iso(f)
    except RuntimeError as exc:
        from .certificate import failing

        return _emit_certificate(failing("roundtrip", reason=str(exc)), args.output)
    from .certificate import passing

    return _emit_certificate(passing("roundtrip"), args.output)


def _cmd_invariants(args) -> int:
    f = _checked_filtration(_read_document(args.input), args.output)
    if isinstance(f, int):
        return f
    return _emit(invariants.invariant_report(f), args.output)


def _cmd_decompose(args) -> int:
    f = _checked_filtration(_read_document(args.input), args.output)
    if isinstance(f, int):
        return f
    summands = invariants.decompose(f, candidates=args.candidates, seed=args.seed)
    return _emit(serialize.encode_decomposition(summands), args.output)


def _cmd_search(args) -> int:
    obj = _read_document(args.input)
    if isinstance(obj, supermodule.SuperFiltration):
        module = obj.module
    else:
        module = _expect(obj, supermodule.CliffordSupermodule)
    try:
        target = tuple(int(part) for part in args.target.split(","))
    except ValueError:
        raise SerializeError(f"--target must be comma-separated integers, got {args.target!r}")
    try:
        found = invariants.filtration_search(module, target, args.budget, seed=args.seed)
    except ValueError as exc:
        raise SerializeError(str(exc))
    return _emit(serialize.encode_search_results(found), args.output)


def _cmd_tensor(args) -> int:
    f_plus = _filtration_arg(serialize.loads(open(args.p).read()))
    f_minus = _filtration_arg(serialize.loads(open(args.q).read()))
    for f in (f_plus, f_minus):
        cert = supermodule.check_filtration(f)
        if not cert:
            return _emit_certificate(cert, args.output)
    return _emit(bifiltration.tensor_module(f_plus, f_minus), args.output)


def _cmd_bideform(args) -> int:
    bf = _expect(_read_document(args.input), bifiltration.BifilteredSupermodule)
    cert = bifiltration.check_bifiltered_module(bf)
    if not cert:
        return _emit_certificate(cert, args.output)
    return _emit(bifiltration.bideform(bf), args.output)


def _cmd_biquotient(args) -> int:
    r = _expect(_read_document(args.input), bifiltration.BiGradedRep)
    cert = bifiltration.verify_2d(r)
    if not cert:
        return _emit_certificate(cert, args.output)
    try:
        sp = Fraction(args.shell_plus)
        sm = Fraction(args.shell_minus)
        result = bifiltration.biquotient(r, shell_plus=sp, shell_minus=sm)
    except (ValueError, ZeroDivisionError) as exc:
        raise SerializeError(str(exc))
    return _emit(result, args.output)


def _cmd_verify2d(args) -> int:
    r = _expect(_read_document(args.input), bifiltration.BiGradedRep)
    return _emit_certificate(bifiltration.verify_2d(r), args.output)


def _load_basis(path: str):
    import json

    try:
        with open(path) as handle:
            obj = json.load(handle)
        even = [[Fraction(x) for x in row] for row in obj["even"]]
        odd = [[Fraction(x) for x in row] for row in obj["odd"]]
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise SerializeError(f"bad basis file: {exc}")
    return (
        Matrix(len(even), len(even[0]) if even else 0, even),
        Matrix(len(odd), len(odd[0]) if odd else 0, odd),
    )


def _cmd_export_dot(args) -> int:
    f = _checked_filtration(_read_document(args.input), args.output)
    if isinstance(f, int):
        return f
    basis_even = basis_odd = None
    if args.basis:
        basis_even, basis_odd = _load_basis(args.basis)
    try:
        g = graph.to_graph(f, basis_even=basis_even, basis_odd=basis_odd)
    except ValueError as exc:
        from .certificate import failing

        return _emit_certificate(failing("adapted_basis", reason=str(exc)), args.output)
    _write(graph.to_dot(g), args.output)
    return 0


def _cmd_envcheck(args) -> int:
    max_degree = args.max_degree if args.max_degree is not None else args.n + 2
    try:
        cert = deformation.enveloping_quotient_check(
            args.n, max_degree, kernel_samples=args.samples, seed=args.seed
        )
    except ValueError as exc:
        raise SerializeError(str(exc))
    return _emit_certificate(cert, args.output)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliffilt",
        description="Filtered Clifford supermodules and graded supersymmetry representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, with_input=True):
        p = sub.add_parser(name, help=help_text)
        if with_input:
            p.add_argument("input", nargs="?", default=None,
                           help="input JSON path (default: stdin)")
        p.add_argument("-o", "--output", default=None, help="output path (default: stdout)")
        p.set_defaults(fn=fn)
        return p

    p = add("example", _cmd_example, "emit a named example construction", with_input=False)
    p.add_argument("name", choices=[
        "exterior4-degree", "exterior4-hodge", "cl5-irreducible", "cl1-trivial",
    ])

    add("check", _cmd_check, "validate any document, emitting a certificate")
    add("deform", _cmd_deform, "filtration to graded off-shell representation")

    p = add("quotient", _cmd_quotient, "evaluate an off-shell representation at a shell value")
    p.add_argument("--k", required=True, help="shell value, a nonnegative rational like 1 or 2/3")

    add("roundtrip", _cmd_roundtrip, "verify deform-then-quotient returns the input filtration")
    add("invariants", _cmd_invariants, "gr and source dimensions plus summand invariants")

    p = add("decompose", _cmd_decompose, "split into indecomposable filtered summands")
    p.add_argument("--candidates", type=int, default=16,
                   help="splitting attempts per level (default 16)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    p = add("search", _cmd_search, "search for filtrations with given gr dimensions")
    p.add_argument("--target", required=True, help="comma-separated gr dims, e.g. 2,8,6")
    p.add_argument("--budget", type=int, default=1000, help="random attempts (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    p = add("tensor", _cmd_tensor, "twisted tensor of two filtrations into a bifiltered module",
            with_input=False)
    p.add_argument("--p", required=True, help="plus-side filtration JSON path")
    p.add_argument("--q", required=True, help="minus-side filtration JSON path")

    add("bideform", _cmd_bideform, "bifiltered module to bigraded representation")

    p = add("biquotient", _cmd_biquotient, "evaluate a bigraded representation on shell")
    p.add_argument("--shell-plus", default="1", help="positive rational (default 1)")
    p.add_argument("--shell-minus", default="1", help="positive rational (default 1)")

    add("verify2d", _cmd_verify2d, "check all bigraded representation relations")

    p = add("export-dot", _cmd_export_dot, "render a filtration's generator graph as DOT")
    p.add_argument("--basis", default=None,
                   help='adapted basis JSON path: {"even": [[...]], "odd": [[...]]}')

    p = add("envcheck", _cmd_envcheck,
            "verify the enveloping-algebra quotient presentation at a truncation degree",
            with_input=False)
    p.add_argument("--n", type=int, required=True, help="number of Clifford generators")
    p.add_argument("--max-degree", type=int, default=None,
                   help="truncation degree, at least 3 (default n+2)")
    p.add_argument("--samples", type=int, default=100,
                   help="random kernel elements to test (default 100)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SerializeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
