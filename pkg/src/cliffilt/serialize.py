"""JSON encoding of every object the command line reads or writes.

The format is versioned by a top-level "schema" field (currently
"cliffilt/1") and dispatched by "kind".  Rational entries are strings
like "-3/2" so round-trips stay exact; matrices carry their shape
explicitly because zero-row maps are meaningful.  Encoding is
deterministic: equal objects produce byte-identical text.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .bifiltration import _COMPONENTS, BifilteredSupermodule, BiGradedRep
from .certificate import Certificate
from .clifford import CliffordAlgebra
from .deformation import GradedSpace, OffShellRep, OnShellModule
from .exactalg import Matrix, Subspace
from .graph import AdinkraGraph, Edge, Vertex
from .invariants import InvariantReport, Summand
from .supermodule import CliffordSupermodule, SuperFiltration

SCHEMA = "cliffilt/1"


class SerializeError(ValueError):
    """Input is not a well-formed document of the declared schema."""


def _rat(value) -> str:
    return str(Fraction(value))


def _unrat(value) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SerializeError(f"bad rational {value!r}") from exc


def _enc_matrix(m: Matrix) -> dict:
    return {"shape": [m.rows, m.cols], "rows": [[_rat(x) for x in row] for row in m.entries]}


def _dec_matrix(obj) -> Matrix:
    try:
        rows, cols = obj["shape"]
        entries = [[_unrat(x) for x in row] for row in obj["rows"]]
        return Matrix(int(rows), int(cols), entries)
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializeError(f"bad matrix: {exc}") from exc


def _enc_flag(s: Subspace) -> dict:
    return {"ambient": s.ambient, "rows": [[_rat(x) for x in row] for row in s.basis.entries]}


def _dec_flag(obj) -> Subspace:
    try:
        rows = [[_unrat(x) for x in row] for row in obj["rows"]]
        return Subspace.span(int(obj["ambient"]), rows)
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializeError(f"bad subspace: {exc}") from exc


def _dec_algebra(obj, n_key="n", gram_key="gram") -> CliffordAlgebra:
    try:
        return CliffordAlgebra(int(obj[n_key]), _dec_matrix(obj[gram_key]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializeError(f"bad algebra: {exc}") from exc


def _enc_module(m: CliffordSupermodule) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "module",
        "n": m.algebra.n,
        "gram": _enc_matrix(m.algebra.gram),
        "dim_even": m.dim_even,
        "dim_odd": m.dim_odd,
        "gamma_eo": [_enc_matrix(g) for g in m.gamma_eo],
        "gamma_oe": [_enc_matrix(g) for g in m.gamma_oe],
    }


def _dec_module(obj) -> CliffordSupermodule:
    algebra = _dec_algebra(obj)
    gamma_eo = [_dec_matrix(g) for g in obj["gamma_eo"]]
    gamma_oe = [_dec_matrix(g) for g in obj["gamma_oe"]]
    return CliffordSupermodule(
        algebra, gamma_eo, gamma_oe,
        dim_even=int(obj["dim_even"]), dim_odd=int(obj["dim_odd"]),
    )


def _enc_filtration(f: SuperFiltration) -> dict:
    out = _enc_module(f.module)
    out["kind"] = "filtration"
    out["even_flags"] = [_enc_flag(s) for s in f.even_flags]
    out["odd_flags"] = [_enc_flag(s) for s in f.odd_flags]
    return out


def _dec_filtration(obj) -> SuperFiltration:
    module = _dec_module(obj)
    even = [_dec_flag(s) for s in obj["even_flags"]]
    odd = [_dec_flag(s) for s in obj["odd_flags"]]
    return SuperFiltration(module, even, odd)


def _enc_offshell(r: OffShellRep) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "offshell_rep",
        "n": r.algebra.n,
        "gram": _enc_matrix(r.algebra.gram),
        "dims": list(r.dims),
        "h_maps": [_enc_matrix(h) for h in r.h_maps],
        "q_maps": [[_enc_matrix(q) for q in per] for per in r.q_maps],
    }


def _dec_offshell(obj) -> OffShellRep:
    algebra = _dec_algebra(obj)
    dims = [int(d) for d in obj["dims"]]
    h_maps = [_dec_matrix(h) for h in obj["h_maps"]]
    q_maps = [[_dec_matrix(q) for q in per] for per in obj["q_maps"]]
    return OffShellRep(algebra, dims, h_maps, q_maps)


def _enc_graded_space(s: GradedSpace) -> dict:
    return {"schema": SCHEMA, "kind": "graded_space", "dims": list(s.dims)}


def _enc_onshell(m: OnShellModule) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "onshell_module",
        "shell": _rat(m.shell),
        "filtration": _enc_filtration(m.filtration),
    }


def _dec_onshell(obj) -> OnShellModule:
    filtration = _dec_filtration(obj["filtration"])
    return OnShellModule(filtration.module, filtration, _unrat(obj["shell"]))


def _enc_bifiltered(bf: BifilteredSupermodule) -> dict:
    def grid(family):
        return [[[_enc_matrix(g[(a, b)]) for b in (0, 1)] for a in (0, 1)] for g in family]

    return {
        "schema": SCHEMA,
        "kind": "bifiltered_module",
        "p": bf.plus_algebra.n,
        "q": bf.minus_algebra.n,
        "gram_plus": _enc_matrix(bf.plus_algebra.gram),
        "gram_minus": _enc_matrix(bf.minus_algebra.gram),
        "dims": [[bf.dims[(a, b)] for b in (0, 1)] for a in (0, 1)],
        "gamma_plus": grid(bf.gamma_plus),
        "gamma_minus": grid(bf.gamma_minus),
        "biflags": [[_enc_flag(s) for s in row] for row in bf.biflags],
    }


def _dec_bifiltered(obj) -> BifilteredSupermodule:
    plus = _dec_algebra(obj, "p", "gram_plus")
    minus = _dec_algebra(obj, "q", "gram_minus")
    dims = {(a, b): int(obj["dims"][a][b]) for (a, b) in _COMPONENTS}

    def grid(encoded):
        return [{(a, b): _dec_matrix(per[a][b]) for (a, b) in _COMPONENTS} for per in encoded]

    biflags = [[_dec_flag(s) for s in row] for row in obj["biflags"]]
    return BifilteredSupermodule(
        plus, minus, dims, grid(obj["gamma_plus"]), grid(obj["gamma_minus"]), biflags
    )


def _enc_bigraded(r: BiGradedRep) -> dict:
    mp, mq = r.top_plus, r.top_minus

    def shift_grid(stored, keep):
        return [
            [_enc_matrix(stored[(m, n)]) if keep(m, n) else None for n in range(mq + 1)]
            for m in range(mp + 1)
        ]

    return {
        "schema": SCHEMA,
        "kind": "bigraded_rep",
        "p": r.plus_algebra.n,
        "q": r.minus_algebra.n,
        "gram_plus": _enc_matrix(r.plus_algebra.gram),
        "gram_minus": _enc_matrix(r.minus_algebra.gram),
        "dims": [list(row) for row in r.dims],
        "shift_plus": shift_grid(r.sp, lambda m, n: m <= mp - 2),
        "shift_minus": shift_grid(r.sm, lambda m, n: n <= mq - 2),
        "q_plus": [
            [[_enc_matrix(per[(m, n)]) for n in range(mq + 1)] for m in range(mp + 1)]
            for per in r.qp
        ],
        "q_minus": [
            [[_enc_matrix(per[(m, n)]) for n in range(mq + 1)] for m in range(mp + 1)]
            for per in r.qm
        ],
    }


def _dec_bigraded(obj) -> BiGradedRep:
    plus = _dec_algebra(obj, "p", "gram_plus")
    minus = _dec_algebra(obj, "q", "gram_minus")
    dims = [[int(d) for d in row] for row in obj["dims"]]

    def shift_grid(encoded):
        return {
            (m, n): _dec_matrix(cell)
            for m, row in enumerate(encoded)
            for n, cell in enumerate(row)
            if cell is not None
        }

    def q_grids(encoded):
        return [
            {(m, n): _dec_matrix(cell) for m, row in enumerate(per) for n, cell in enumerate(row)}
            for per in encoded
        ]

    return BiGradedRep(
        plus, minus, dims,
        shift_grid(obj["shift_plus"]), shift_grid(obj["shift_minus"]),
        q_grids(obj["q_plus"]), q_grids(obj["q_minus"]),
    )


def _enc_certificate(c: Certificate) -> dict:
    out = c.to_json_obj()
    out = {"schema": SCHEMA, "kind": "certificate", **out}
    return out


def _dec_certificate(obj) -> Certificate:
    witness = obj.get("witness")
    return Certificate(str(obj["check"]), bool(obj["pass"]), witness)


def _enc_graph(g: AdinkraGraph) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "adinkra_graph",
        "module": _enc_module(g.module),
        "vertices": [
            {"parity": v.parity, "height": v.height, "vector": [_rat(x) for x in v.vector]}
            for v in g.vertices
        ],
        "edges": [[e.source, e.target, e.generator, e.sign] for e in g.edges],
    }


def _dec_graph(obj) -> AdinkraGraph:
    module = _dec_module(obj["module"])
    vertices = [
        Vertex(int(v["parity"]), int(v["height"]), tuple(_unrat(x) for x in v["vector"]))
        for v in obj["vertices"]
    ]
    edges = [Edge(int(s), int(t), int(i), int(sign)) for s, t, i, sign in obj["edges"]]
    return AdinkraGraph(module, vertices, edges)


def _enc_report(r: InvariantReport) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "invariant_report",
        "gr_dims": list(r.gr_dims),
        "source_dims": list(r.source_dims),
        "summand_reports": [[list(gr), list(src)] for gr, src in r.summand_reports],
    }


def _dec_report(obj) -> InvariantReport:
    return InvariantReport(
        tuple(int(x) for x in obj["gr_dims"]),
        tuple(int(x) for x in obj["source_dims"]),
        tuple(
            (tuple(int(x) for x in gr), tuple(int(x) for x in src))
            for gr, src in obj["summand_reports"]
        ),
    )


def encode_decomposition(summands) -> dict:
    """Document for a list of decomposition summands."""
    return {
        "schema": SCHEMA,
        "kind": "decomposition",
        "summands": [
            {
                "status": s.status,
                "embed_even": _enc_matrix(s.embed_even),
                "embed_odd": _enc_matrix(s.embed_odd),
                "filtration": _enc_filtration(s.filtration),
            }
            for s in summands
        ],
    }


def _dec_decomposition(obj) -> list:
    return [
        Summand(
            _dec_filtration(s["filtration"]),
            _dec_matrix(s["embed_even"]),
            _dec_matrix(s["embed_odd"]),
            str(s["status"]),
        )
        for s in obj["summands"]
    ]


def encode_search_results(filtrations) -> dict:
    """Document for a list of found filtrations."""
    return {
        "schema": SCHEMA,
        "kind": "search_results",
        "count": len(filtrations),
        "filtrations": [_enc_filtration(f) for f in filtrations],
    }


def _dec_search_results(obj) -> list:
    return [_dec_filtration(f) for f in obj["filtrations"]]


_ENCODERS = [
    (SuperFiltration, _enc_filtration),
    (CliffordSupermodule, _enc_module),
    (OffShellRep, _enc_offshell),
    (GradedSpace, _enc_graded_space),
    (OnShellModule, _enc_onshell),
    (BifilteredSupermodule, _enc_bifiltered),
    (BiGradedRep, _enc_bigraded),
    (Certificate, _enc_certificate),
    (AdinkraGraph, _enc_graph),
    (InvariantReport, _enc_report),
]

_DECODERS = {
    "module": _dec_module,
    "filtration": _dec_filtration,
    "offshell_rep": _dec_offshell,
    "graded_space": lambda obj: GradedSpace(tuple(int(d) for d in obj["dims"])),
    "onshell_module": _dec_onshell,
    "bifiltered_module": _dec_bifiltered,
    "bigraded_rep": _dec_bigraded,
    "certificate": _dec_certificate,
    "adinkra_graph": _dec_graph,
    "invariant_report": _dec_report,
    "decomposition": _dec_decomposition,
    "search_results": _dec_search_results,
}


def encode(obj) -> dict:
    """JSON-compatible dict for any supported object."""
    for cls, encoder in _ENCODERS:
        if isinstance(obj, cls):
            return encoder(obj)
    raise SerializeError(f"cannot encode {type(obj).__name__}")


def decode(obj):
    """Typed object from a JSON-compatible dict; SerializeError if malformed."""
    if not isinstance(obj, dict):
        raise SerializeError("document must be a JSON object")
    if obj.get("schema") != SCHEMA:
        raise SerializeError(f"unsupported schema {obj.get('schema')!r}")
    kind = obj.get("kind")
    if kind not in _DECODERS:
        raise SerializeError(f"unknown kind {kind!r}")
    try:
        return _DECODERS[kind](obj)
    except SerializeError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SerializeError(f"malformed {kind} document: {exc}") from exc


def dumps(obj) -> str:
    """Deterministic JSON text; accepts typed objects or plain dicts."""
    if not isinstance(obj, dict):
        obj = encode(obj)
    return json.dumps(obj, indent=2) + "\n"


def loads(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializeError(f"not JSON: {exc}") from exc
    return decode(obj)
