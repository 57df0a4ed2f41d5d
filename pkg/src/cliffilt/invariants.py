"""Classification invariants of filtered Clifford supermodules.

Three invariants are computed: associated-graded dimensions, source
dimensions (new generators entering at each level), and the multiset of
(gr, source) pairs of the indecomposable summands found by `decompose`.
Scalars are rational throughout, so decomposability means over the
rationals; statuses record when indecomposability is certified and when
the search merely exhausted its budget.

`filtered_endomorphisms` is the engine: the algebra of even maps
commuting with every generator and preserving every flag.  Splitting is
by rational factorization of minimal polynomials of its elements, and
an absence of splits is certified through the structure of the algebra
modulo its radical (computed from the trace form, exact over Q).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .exactalg import Matrix, Subspace, kernel, solve
from .supermodule import CliffordSupermodule, SuperFiltration, check_filtration

CERTIFIED = "indecomposable (certified)"
EXHAUSTED = "no decomposition found (budget exhausted)"


def gr_dimensions(f: SuperFiltration) -> tuple[int, ...]:
    """Associated-graded dimensions: dim F_p - dim F_{p-2}."""
    return tuple(
        f.level(p).dim - f.level(p - 2).dim for p in range(f.top_degree + 1)
    )


def source_dimensions(f: SuperFiltration) -> tuple[int, ...]:
    """dim of F_p modulo the span of all gamma images of F_{p-1}."""
    module = f.module
    out = []
    for p in range(f.top_degree + 1):
        below = f.level(p - 1)
        span = Subspace.zero(module.dim(p % 2))
        for i in range(module.algebra.n):
            span = span + below.image(module.gamma(i, (p - 1) % 2))
        out.append(f.level(p).dim - span.dim)
    return tuple(out)


def _residual(flag: Subspace, v) -> tuple:
    """Remainder of v after pivot elimination against the flag basis."""
    work = list(v)
    for row, piv in zip(flag.basis.entries, flag.pivots):
        c = work[piv]
        if c:
            for k in range(len(work)):
                work[k] -= c * row[k]
    return tuple(work)


def filtered_endomorphisms(f: SuperFiltration) -> list[tuple[Matrix, Matrix]]:
    """Basis of even maps commuting with the action and preserving flags.

    Solved inside the graded commutant of the module, which the module
    caches; each flag contributes the linear condition that the image of
    its basis stays inside it.  The identity pair is always present.
    """
    module = f.module
    pairs = module.graded_commutant()
    if not pairs:
        return []
    columns = []
    for p in range(f.top_degree + 1):
        flag = f.level(p)
        if flag.is_full:
            continue
        block = 0 if p % 2 == 0 else 1
        for v in flag.basis.entries:
            columns.append([_residual(flag, pairs[k][block].apply(v)) for k in range(len(pairs))])
    if not columns:
        coeff_rows = [tuple(Fraction(1 if c == k else 0) for c in range(len(pairs)))
                      for k in range(len(pairs))]
    else:
        rows = []
        for k in range(len(pairs)):
            row = []
            for col in columns:
                row.extend(col[k])
            rows.append(tuple(row))
        coeff_rows = kernel(Matrix.from_rows(rows, cols=len(rows[0]))).entries
    out = []
    for coeffs in coeff_rows:
        p_even = Matrix.zeros(module.dim_even, module.dim_even)
        p_odd = Matrix.zeros(module.dim_odd, module.dim_odd)
        for c, (pe, po) in zip(coeffs, pairs):
            if c:
                p_even = p_even + pe.scale(c)
                p_odd = p_odd + po.scale(c)
        out.append((p_even, p_odd))
    return out


def _flatten(pair) -> tuple:
    pe, po = pair
    flat = []
    for row in pe.entries:
        flat.extend(row)
    for row in po.entries:
        flat.extend(row)
    return tuple(flat)


def _pair_mul(a, b):
    return (a[0] * b[0], a[1] * b[1])


def _pair_identity(module):
    return (Matrix.identity(module.dim_even), Matrix.identity(module.dim_odd))


def _trace(m: Matrix) -> Fraction:
    return sum((m.entries[i][i] for i in range(m.rows)), Fraction(0))


def _minimal_polynomial(module, pair) -> list[Fraction]:
    """Monic minimal polynomial (ascending coefficients) of an even pair."""
    power = _pair_identity(module)
    seen = [_flatten(power)]
    while True:
        power = _pair_mul(power, pair)
        flat = _flatten(power)
        stacked = Matrix.from_rows(seen, cols=len(flat))
        coeffs = solve(stacked, flat)
        if coeffs is not None:
            return [-c for c in coeffs] + [Fraction(1)]
        seen.append(flat)


def _factor_rational_poly(coeffs: list[Fraction]):
    """Irreducible factorization over Q; returns [(ascending coeffs, power)]."""
    t = sympy.Symbol("t")
    poly = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t, domain="QQ"
    )
    _, factors = poly.factor_list()
    out = []
    for fac, power in factors:
        asc = [Fraction(c.p, c.q) for c in reversed(fac.all_coeffs())]
        out.append((asc, int(power)))
    return out


def _poly_eval(coeffs: list[Fraction], m: Matrix) -> Matrix:
    acc = Matrix.zeros(m.rows, m.cols)
    ident = Matrix.identity(m.rows)
    for c in reversed(coeffs):
        acc = acc * m
        if c:
            acc = acc + ident.scale(c)
    return acc


def _restrict_filtration(f: SuperFiltration, w_even: Subspace, w_odd: Subspace):
    """Summand filtration induced on a gamma-invariant, flag-split pair."""
    module = f.module
    n = module.algebra.n
    gamma_eo = [w_odd.coordinate_matrix(w_even.basis * module.gamma(i, 0)) for i in range(n)]
    gamma_oe = [w_even.coordinate_matrix(w_odd.basis * module.gamma(i, 1)) for i in range(n)]
    sub = CliffordSupermodule(
        module.algebra, gamma_eo, gamma_oe, dim_even=w_even.dim, dim_odd=w_odd.dim
    )
    even_flags, odd_flags = [], []
    for p in range(f.top_degree + 1):
        w = w_even if p % 2 == 0 else w_odd
        inter = f.level(p) & w
        coords = w.coordinate_matrix(inter.basis)
        flag = Subspace.span(w.dim, coords.entries)
        (even_flags if p % 2 == 0 else odd_flags).append(flag)
    return SuperFiltration(sub, even_flags, odd_flags)


@dataclass(frozen=True)
class Summand:
    """One indecomposable-so-far piece of a decomposition.

    The embedding matrices have the summand's canonical basis vectors as
    rows, written in the coordinates of the decomposed module.
    """

    filtration: SuperFiltration
    embed_even: Matrix
    embed_odd: Matrix
    status: str


def _try_split(f: SuperFiltration, endos, candidates: int, rng):
    """Search for an element whose minimal polynomial factors over Q."""
    module = f.module
    ident = _pair_identity(module)
    pool = [pair for pair in endos]

    def attempt(pair):
        if _flatten(pair) == _flatten(ident):
            return None
        minpoly = _minimal_polynomial(module, pair)
        factors = _factor_rational_poly(minpoly)
        if len(factors) < 2:
            return None
        split = []
        for coeffs, power in factors:
            lifted = [Fraction(c) for c in coeffs]
            full = lifted
            for _ in range(power - 1):
                nxt = [Fraction(0)] * (len(full) + len(lifted) - 1)
                for a, ca in enumerate(full):
                    for b, cb in enumerate(lifted):
                        nxt[a + b] += ca * cb
                full = nxt
            w_even = Subspace.span(module.dim_even, kernel(_poly_eval(full, pair[0])).entries)
            w_odd = Subspace.span(module.dim_odd, kernel(_poly_eval(full, pair[1])).entries)
            split.append((w_even, w_odd))
        total = sum(we.dim + wo.dim for we, wo in split)
        if total != module.dim_even + module.dim_odd:
            return None
        return split

    for pair in pool:
        found = attempt(pair)
        if found:
            return found
    if len(endos) > 1:
        for _ in range(candidates):
            pe = Matrix.zeros(module.dim_even, module.dim_even)
            po = Matrix.zeros(module.dim_odd, module.dim_odd)
            for base in endos:
                c = rng.randint(-3, 3)
                if c:
                    pe = pe + base[0].scale(c)
                    po = po + base[1].scale(c)
            found = attempt((pe, po))
            if found:
                return found
    return None


def _certify_indecomposable(f: SuperFiltration, endos) -> str:
    """Sound no-idempotent certificates for the endomorphism algebra.

    Let E be the algebra and rad the kernel of the trace form
    (x, y) -> tr(xy) on the faithful module, which in characteristic 0
    is exactly the Jacobson radical.  Certified cases:

    * dim E/rad = 1: every element is a scalar plus a nilpotent, and an
      idempotent of that shape is 0 or the identity.
    * E semisimple, commutative, with an element whose minimal
      polynomial is irreducible of degree dim E: then E is a field.
    * E semisimple of dimension 4, noncommutative, whose trace-zero part
      squares to negative-definite scalars: a rational quaternion
      division algebra, which has no idempotents either.

    Anything else is reported as budget exhaustion, not as a proof.
    """
    module = f.module
    d = len(endos)
    gram_rows = []
    for a in endos:
        row = []
        for b in endos:
            prod = _pair_mul(a, b)
            row.append(_trace(prod[0]) + _trace(prod[1]))
        gram_rows.append(tuple(row))
    gram = Matrix.from_rows(gram_rows, cols=d)
    semisimple_dim = gram.rank()
    if semisimple_dim == 1:
        return CERTIFIED
    if semisimple_dim != d:
        return EXHAUSTED

    commutative = True
    for i in range(d):
        for j in range(i + 1, d):
            ab = _pair_mul(endos[i], endos[j])
            ba = _pair_mul(endos[j], endos[i])
            if ab[0] != ba[0] or ab[1] != ba[1]:
                commutative = False
                break
        if not commutative:
            break
    if commutative:
        candidates = list(endos)
        for i in range(d):
            for j in range(i + 1, d):
                candidates.append((endos[i][0] + endos[j][0], endos[i][1] + endos[j][1]))
        for pair in candidates:
            minpoly = _minimal_polynomial(module, pair)
            if len(minpoly) - 1 == d:
                factors = _factor_rational_poly(minpoly)
                if len(factors) == 1 and factors[0][1] == 1:
                    return CERTIFIED
        return EXHAUSTED

    if d == 4:
        dim_total = module.dim_even + module.dim_odd
        ident = _pair_identity(module)
        traceless = []
        for pair in endos:
            tr = (_trace(pair[0]) + _trace(pair[1])) / dim_total
            shifted = (pair[0] - ident[0].scale(tr), pair[1] - ident[1].scale(tr))
            if _flatten(shifted) != _flatten((Matrix.zeros(pair[0].rows, pair[0].cols),
                                              Matrix.zeros(pair[1].rows, pair[1].cols))):
                traceless.append(shifted)
        basis_rows = [_flatten(p) for p in traceless]
        if Matrix.from_rows(basis_rows, cols=len(basis_rows[0])).rank() != 3:
            return EXHAUSTED
        picked = []
        span = Subspace.zero(len(basis_rows[0]))
        for pair, row in zip(traceless, basis_rows):
            if not span.contains(row):
                picked.append(pair)
                span = span + Subspace.span(len(row), [row])
        norm_rows = []
        for a in picked:
            row = []
            for b in picked:
                anti = _pair_mul(a, b)
                ba = _pair_mul(b, a)
                combined = (anti[0] + ba[0], anti[1] + ba[1])
                diag = combined[0].entries[0][0] if combined[0].rows else combined[1].entries[0][0]
                expect = (Matrix.identity(combined[0].rows).scale(diag),
                          Matrix.identity(combined[1].rows).scale(diag))
                if combined[0] != expect[0] or combined[1] != expect[1]:
                    return EXHAUSTED
                row.append(diag)
            norm_rows.append(row)
        # negative definite symmetric form: Gaussian pivots all negative
        work = [list(r) for r in norm_rows]
        for k in range(3):
            if work[k][k] >= 0:
                return EXHAUSTED
            for r in range(k + 1, 3):
                factor = work[r][k] / work[k][k]
                for c in range(3):
                    work[r][c] -= factor * work[k][c]
        return CERTIFIED
    return EXHAUSTED


def _decompose_worker(f: SuperFiltration, candidates: int, rng) -> list[Summand]:
    module = f.module
    endos = filtered_endomorphisms(f)
    ident_even = Matrix.identity(module.dim_even)
    ident_odd = Matrix.identity(module.dim_odd)
    if module.dim_even + module.dim_odd == 0:
        return [Summand(f, ident_even, ident_odd, CERTIFIED)]
    split = _try_split(f, endos, candidates, rng)
    if split is None:
        status = _certify_indecomposable(f, endos)
        return [Summand(f, ident_even, ident_odd, status)]
    out = []
    for w_even, w_odd in split:
        piece = _restrict_filtration(f, w_even, w_odd)
        for inner in _decompose_worker(piece, candidates, rng):
            out.append(Summand(
                inner.filtration,
                inner.embed_even * w_even.basis,
                inner.embed_odd * w_odd.basis,
                inner.status,
            ))
    return out


def decompose(f: SuperFiltration, candidates: int = 16, seed: int = 0) -> list[Summand]:
    """Split into gamma-invariant, filtration-split indecomposable pieces.

    Elements of the filtered endomorphism algebra whose minimal
    polynomial factors over Q produce splits (the factor projections are
    polynomials in the element, so flags split along); the search tries
    the basis first and then seeded random integer combinations.  Each
    unsplit piece carries a status: certified indecomposable when the
    endomorphism structure proves there is no idempotent, budget
    exhaustion otherwise.  Certificates are statements over the
    rationals; a certified summand may still split after extending
    scalars.
    """
    cert = check_filtration(f)
    if not cert:
        raise ValueError(f"filtration invalid: {cert.witness}")
    rng = random.Random(seed)
    return _decompose_worker(f, candidates, rng)


@dataclass(frozen=True)
class InvariantReport:
    gr_dims: tuple[int, ...]
    source_dims: tuple[int, ...]
    summand_reports: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


@lru_cache(maxsize=None)
def invariant_report(f: SuperFiltration) -> InvariantReport:
    """All computed invariants of one filtration, cached per object."""
    summands = decompose(f)
    reports = sorted(
        (gr_dimensions(s.filtration), source_dimensions(s.filtration)) for s in summands
    )
    return InvariantReport(gr_dimensions(f), source_dimensions(f), tuple(reports))


DISTINGUISHED = "DISTINGUISHED"
INDISTINGUISHABLE = "INDISTINGUISHABLE-BY-INVARIANTS"


@dataclass(frozen=True)
class ComparisonVerdict:
    verdict: str
    by: str | None

    def __bool__(self):
        return self.verdict == INDISTINGUISHABLE


def invariant_equal(a: SuperFiltration, b: SuperFiltration) -> ComparisonVerdict:
    """Compare all invariants; never claims the modules are isomorphic.

    Cheap invariants first, the summand multiset last (it is the only
    one that needs a decomposition).
    """
    if gr_dimensions(a) != gr_dimensions(b):
        return ComparisonVerdict(DISTINGUISHED, "gr_dims")
    if source_dimensions(a) != source_dimensions(b):
        return ComparisonVerdict(DISTINGUISHED, "source_dims")
    if invariant_report(a).summand_reports != invariant_report(b).summand_reports:
        return ComparisonVerdict(DISTINGUISHED, "summand_invariants")
    return ComparisonVerdict(INDISTINGUISHABLE, None)


# ---------------------------------------------------------------------------
# Randomized constructions

def _random_vector(dim: int, rng) -> tuple:
    if dim and rng.random() < 0.4:
        k = rng.randrange(dim)
        return tuple(Fraction(1 if c == k else 0) for c in range(dim))
    return tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim))


def _random_subspace(dim: int, target: int, rng) -> Subspace | None:
    """Random subspace of exactly the target dimension, a few retries."""
    for _ in range(25):
        span = Subspace.zero(dim)
        guard = 0
        while span.dim < target and guard < 60:
            guard += 1
            grown = span + Subspace.span(dim, [_random_vector(dim, rng)])
            if grown.dim > span.dim:
                span = grown
        if span.dim == target:
            return span
    return None


def random_filtration(module: CliffordSupermodule, rng) -> SuperFiltration:
    """Seeded random valid filtration; always passes check_filtration.

    Flags are built upward from a random bottom by closing under the
    generator action plus a random enlargement, and forced full at the
    top two levels; every intermediate level therefore satisfies the
    compatibility condition by construction.  The lowest nonzero level
    is kept at degree 0 or 1 (the normalized form).
    """
    de, do = module.dim_even, module.dim_odd
    n = module.algebra.n
    m = rng.randint(1, n + 2)
    d0 = rng.randint(0, de) if m >= 2 else de
    if do == 0 and de > 0 and m >= 2:
        d0 = max(d0, 1)
    bottom = _random_subspace(de, d0, rng)
    if bottom is None:
        bottom = Subspace.full(de)
    flags = [bottom]
    for p in range(1, m + 1):
        parity = p % 2
        ambient = module.dim(parity)
        span = flags[p - 2] if p >= 2 else Subspace.zero(ambient)
        prev = flags[p - 1]
        for i in range(n):
            span = span + prev.image(module.gamma(i, (p - 1) % 2))
        if p >= m - 1:
            flags.append(Subspace.full(ambient))
            continue
        room = ambient - span.dim
        extra = rng.randint(0, room)
        if p == 1 and bottom.dim == 0 and do > 0 and span.dim == 0:
            extra = max(extra, 1)
        guard = 0
        while extra > 0 and guard < 80:
            guard += 1
            grown = span + Subspace.span(ambient, [_random_vector(ambient, rng)])
            if grown.dim > span.dim:
                span = grown
                extra -= 1
        flags.append(span)
    even_flags = [flags[p] for p in range(0, m + 1, 2)]
    odd_flags = [flags[p] for p in range(1, m + 1, 2)]
    f = SuperFiltration(module, even_flags, odd_flags)
    cert = check_filtration(f)
    if not cert:
        raise RuntimeError(f"random filtration construction broke its contract: {cert.witness}")
    return f


def filtration_search(
    module: CliffordSupermodule, target_gr_dims, budget: int, seed: int = 0
) -> list[SuperFiltration]:
    """Randomized search for filtrations with the given graded dimensions.

    Seeds the bottom flag with random subspaces of the target dimension
    and extends upward by the generator closure plus random complements;
    finds are validated and deduplicated by invariant comparison.
    """
    target = tuple(int(t) for t in target_gr_dims)
    if len(target) < 2 or any(t < 0 for t in target):
        raise ValueError("need at least levels 0 and 1 with nonnegative entries")
    even_total = sum(target[0::2])
    odd_total = sum(target[1::2])
    if even_total != module.dim_even or odd_total != module.dim_odd:
        raise ValueError(
            f"target parity sums ({even_total}, {odd_total}) do not match module "
            f"dimensions ({module.dim_even}, {module.dim_odd})"
        )
    rng = random.Random(seed)
    m = len(target) - 1
    required = []
    for p in range(m + 1):
        required.append(sum(target[p % 2:p + 1:2]))
    found: list[SuperFiltration] = []
    for _ in range(budget):
        bottom = _random_subspace(module.dim_even, target[0], rng)
        if bottom is None:
            continue
        flags = [bottom]
        ok = True
        for p in range(1, m + 1):
            parity = p % 2
            ambient = module.dim(parity)
            span = flags[p - 2] if p >= 2 else Subspace.zero(ambient)
            prev = flags[p - 1]
            for i in range(module.algebra.n):
                span = span + prev.image(module.gamma(i, (p - 1) % 2))
            if span.dim > required[p]:
                ok = False
                break
            guard = 0
            while span.dim < required[p] and guard < 80:
                guard += 1
                span = span + Subspace.span(ambient, [_random_vector(ambient, rng)])
            if span.dim != required[p]:
                ok = False
                break
            flags.append(span)
        if not ok:
            continue
        even_flags = [flags[p] for p in range(0, m + 1, 2)]
        odd_flags = [flags[p] for p in range(1, m + 1, 2)]
        candidate = SuperFiltration(module, even_flags, odd_flags)
        if not check_filtration(candidate):
            continue
        if gr_dimensions(candidate) != target:
            continue
        if any(invariant_equal(candidate, g).verdict != DISTINGUISHED for g in found):
            continue
        found.append(candidate)
    return found
