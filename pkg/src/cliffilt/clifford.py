"""Clifford algebras over the rationals with their standard filtration.

The algebra on generators g_0 .. g_{n-1} with symmetric positive
definite Gram matrix G is the quotient of the free algebra by

    g_i g_j + g_j g_i = 2 G[i][j].

Basis monomials are indexed by strictly increasing tuples of generator
indices, ordered by length and then lexicographically.  The coefficient
space Q^(2^n) used for subspace computations follows that order.

The standard filtration level F_p is spanned by the monomials with
|I| <= p and |I| = p (mod 2); levels of one parity form an increasing
flag and F_p * F_q lands in F_{p+q}.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .certificate import Certificate, failing, passing
from .exactalg import Matrix, Subspace, rational

_ZERO = Fraction(0)


def _canonical_monomials(n: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for size in range(n + 1):
        out.extend(combinations(range(n), size))
    return tuple(out)


def _is_positive_definite(gram: Matrix) -> bool:
    """Sylvester criterion with exact leading principal minors."""
    n = gram.rows
    work = [list(r) for r in gram.entries]
    # Fraction Gaussian elimination without pivoting keeps the product of
    # the leading entries equal to the ratio of consecutive leading minors.
    for k in range(n):
        if work[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            if work[i][k]:
                f = work[i][k] / work[k][k]
                work[i] = [x - f * y for x, y in zip(work[i], work[k])]
    return True


class CliffordAlgebra:
    """Finite dimensional Clifford algebra with memoized monomial products."""

    def __init__(self, n: int, gram: Matrix | None = None):
        if n < 0:
            raise ValueError("generator count must be nonnegative")
        if gram is None:
            gram = Matrix.identity(n)
        if gram.rows != n or gram.cols != n:
            raise ValueError("Gram matrix shape does not match generator count")
        if gram != gram.transpose():
            raise ValueError("Gram matrix must be symmetric")
        if not _is_positive_definite(gram):
            raise ValueError("Gram matrix must be positive definite")
        self.n = n
        self.gram = gram
        self.monomials = _canonical_monomials(n)
        self.dim = len(self.monomials)
        self.monomial_index = {m: i for i, m in enumerate(self.monomials)}
        self._product_cache: dict[tuple, dict] = {}
        self._level_cache: dict[int, Subspace] = {}

    def __eq__(self, other):
        return (
            isinstance(other, CliffordAlgebra)
            and self.n == other.n
            and self.gram == other.gram
        )

    def __hash__(self):
        return hash((self.n, self.gram))

    def __repr__(self):
        tag = "" if self.gram == Matrix.identity(self.n) else ", gram"
        return f"CliffordAlgebra({self.n}{tag})"

    def element(self, terms: dict) -> "CliffordElement":
        return CliffordElement(self, terms)

    def zero(self) -> "CliffordElement":
        return CliffordElement(self, {})

    def one(self) -> "CliffordElement":
        return CliffordElement(self, {(): Fraction(1)})

    def gamma(self, i: int) -> "CliffordElement":
        if not 0 <= i < self.n:
            raise ValueError(f"no generator {i}")
        return CliffordElement(self, {(i,): Fraction(1)})

    def basis_element(self, mono: tuple[int, ...]) -> "CliffordElement":
        if mono not in self.monomial_index:
            raise ValueError(f"not a basis monomial: {mono}")
        return CliffordElement(self, {mono: Fraction(1)})

    def from_vector(self, v) -> "CliffordElement":
        if len(v) != self.dim:
            raise ValueError("coefficient vector has wrong length")
        return CliffordElement(
            self, {m: rational(c) for m, c in zip(self.monomials, v) if c}
        )

    def monomial_product(self, a: tuple[int, ...], b: tuple[int, ...]) -> dict:
        """Product of two basis monomials as {monomial: coefficient}."""
        key = (a, b)
        hit = self._product_cache.get(key)
        if hit is not None:
            return hit
        gram = self.gram.entries
        terms: dict[tuple[int, ...], Fraction] = {}
        stack = [(list(a) + list(b), Fraction(1))]
        while stack:
            word, coeff = stack.pop()
            for k in range(len(word) - 1):
                x, y = word[k], word[k + 1]
                if x < y:
                    continue
                rest = word[:k] + word[k + 2 :]
                if x == y:
                    g = gram[x][x]
                    if g:
                        stack.append((rest, coeff * g))
                else:
                    g = 2 * gram[x][y]
                    if g:
                        stack.append((rest, coeff * g))
                    stack.append((word[:k] + [y, x] + word[k + 2 :], -coeff))
                break
            else:
                mono = tuple(word)
                acc = terms.get(mono, _ZERO) + coeff
                if acc:
                    terms[mono] = acc
                elif mono in terms:
                    del terms[mono]
        self._product_cache[key] = terms
        return terms

    def filtration_level(self, p: int) -> Subspace:
        """Subspace of Q^(2^n) spanned by monomials of length <= p, = p (mod 2)."""
        if p < 0:
            return Subspace.zero(self.dim)
        p = min(p, self.n + (0 if (self.n - p) % 2 == 0 else 1))
        hit = self._level_cache.get(p)
        if hit is not None:
            return hit
        rows = []
        for idx, mono in enumerate(self.monomials):
            if len(mono) <= p and (len(mono) - p) % 2 == 0:
                row = [_ZERO] * self.dim
                row[idx] = Fraction(1)
                rows.append(row)
        level = Subspace.span(self.dim, rows)
        self._level_cache[p] = level
        return level

    def parity_span(self, parity: int) -> Subspace:
        """Span of all monomials of the given length parity."""
        return self.filtration_level(self.n if self.n % 2 == parity % 2 else self.n + 1)


class CliffordElement:
    """Sparse algebra element: {increasing index tuple: rational coefficient}."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: CliffordAlgebra, terms: dict):
        clean = {}
        for mono, coeff in terms.items():
            mono = tuple(mono)
            if mono not in algebra.monomial_index:
                raise ValueError(f"not a basis monomial: {mono}")
            coeff = rational(coeff)
            if coeff:
                clean[mono] = coeff
        self.algebra = algebra
        self.terms = clean

    def _check_same_algebra(self, other: "CliffordElement"):
        if self.algebra != other.algebra:
            raise ValueError("elements live in different algebras")

    def __eq__(self, other):
        return (
            isinstance(other, CliffordElement)
            and self.algebra == other.algebra
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.algebra, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        self._check_same_algebra(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, _ZERO) + coeff
        return CliffordElement(self.algebra, terms)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + (-other)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "CliffordElement":
        c = rational(c)
        return CliffordElement(self.algebra, {m: c * x for m, x in self.terms.items()})

    def __rmul__(self, c) -> "CliffordElement":
        return self.scale(c)

    def __mul__(self, other: "CliffordElement") -> "CliffordElement":
        if not isinstance(other, CliffordElement):
            return NotImplemented
        self._check_same_algebra(other)
        alg = self.algebra
        terms: dict[tuple[int, ...], Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                c = ca * cb
                for mono, coeff in alg.monomial_product(ma, mb).items():
                    acc = terms.get(mono, _ZERO) + c * coeff
                    if acc:
                        terms[mono] = acc
                    elif mono in terms:
                        del terms[mono]
        return CliffordElement(alg, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def vector(self) -> tuple:
        v = [_ZERO] * self.algebra.dim
        for mono, coeff in self.terms.items():
            v[self.algebra.monomial_index[mono]] = coeff
        return tuple(v)

    def filtration_degree(self) -> int | None:
        """Smallest p with self in F_p; None for 0 and for parity-mixed elements."""
        if not self.terms:
            return None
        lengths = {len(m) for m in self.terms}
        if len({l % 2 for l in lengths}) > 1:
            return None
        return max(lengths)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[mono]
            name = "*".join(f"g{i}" for i in mono) or "1"
            bits.append(f"({c})*{name}")
        return " + ".join(bits)


def filtration_level(algebra: CliffordAlgebra, p: int) -> Subspace:
    return algebra.filtration_level(p)


def check_filtered_superalgebra(
    algebra: CliffordAlgebra, levels: dict[int, Subspace] | None = None
) -> Certificate:
    """Verify F_p * F_q <= F_{p+q} for the standard or a supplied filtration.

    With explicit `levels` (degree -> subspace of the coefficient space,
    covering 0..max key; higher degrees fall back to the full parity
    span) every product of level basis vectors is tested for membership.
    The default run checks all pairs of basis monomials.
    """
    name = "filtered_superalgebra"
    if levels is None:
        for ma in algebra.monomials:
            for mb in algebra.monomials:
                target = algebra.filtration_level(len(ma) + len(mb))
                product = algebra.basis_element(ma) * algebra.basis_element(mb)
                if not target.contains(product.vector()):
                    return failing(
                        name, left=list(ma), right=list(mb), level=len(ma) + len(mb)
                    )
        return passing(name)

    top = max(levels)

    def level_at(p: int) -> Subspace:
        if p in levels:
            return levels[p]
        if p > top:
            return algebra.parity_span(p % 2)
        return Subspace.zero(algebra.dim)

    degrees = sorted(levels)
    for p in degrees:
        for q in degrees:
            target = level_at(p + q)
            for va in levels[p].basis.entries:
                ea = algebra.from_vector(va)
                for vb in levels[q].basis.entries:
                    product = ea * algebra.from_vector(vb)
                    if not target.contains(product.vector()):
                        return failing(name, p=p, q=q, level=p + q)
    return passing(name)
