"""Two-parameter analogue of the deformation correspondence.

A bifiltered supermodule carries four components indexed by a pair of
parities: the first Clifford family g+_i flips the first index, the
second family g-_j flips the second, the two families anticommute with
each other, and a first-quadrant grid of flags F_{m,n} refines the
component of parity (m mod 2, n mod 2).  Deforming produces a bigraded
representation with two commuting injective shifts (the light-cone
translations H+P and H-P) and odd operators Q+_i, Q-_j of bidegrees
(1,0) and (0,1); the quotient by (shift - k) in both directions
collapses back onto the four corners of the grid.

The helicity operator acts on bidegree (m, n) by the scalar m - n, so
its brackets with every stored operator reduce to integer bookkeeping;
it is never stored as a matrix.

The mixed bracket {Q+_i, Q-_j} is required to vanish; together with
{Q+-_i, Q+-_j} = 2 G[i][j] (H+-P) this makes the generators close the
two-dimensional super translation algebra.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .certificate import Certificate, failing, passing
from .clifford import CliffordAlgebra, CliffordElement
from .exactalg import Matrix, Subspace, rational
from .supermodule import CliffordSupermodule, SuperFiltration, kron


# ---------------------------------------------------------------------------
# Twisted tensor product of two Clifford algebras

class TwistedProduct:
    """Cl(p) x Cl(q) with the sign-twisted multiplication.

    Basis elements are pairs of monomials; homogeneous elements multiply
    by (a1 (x) b1)(a2 (x) b2) = (-1)^{|b1||a2|} a1 a2 (x) b1 b2.  The map
    sending the pair (I, J) to the monomial I u (J + p) identifies the
    result with Cl(p + q); `embed` realizes it and `check_twisted_tensor`
    verifies it is an isomorphism of superalgebras.
    """

    def __init__(self, a: CliffordAlgebra, b: CliffordAlgebra):
        # identity Gram matrices only: the mixed generators must square
        # to the standard form for the combined algebra to be Cl(p+q)
        if a.gram != Matrix.identity(a.n) or b.gram != Matrix.identity(b.n):
            raise ValueError("twisted product requires identity Gram matrices")
        self.left = a
        self.right = b
        self.p = a.n
        self.q = b.n
        self.dim = a.dim * b.dim
        self.pairs = tuple((i, j) for i in a.monomials for j in b.monomials)
        self.pair_index = {pair: k for k, pair in enumerate(self.pairs)}
        self.ambient = CliffordAlgebra(a.n + b.n)

    def __eq__(self, other):
        return (
            isinstance(other, TwistedProduct)
            and self.left == other.left
            and self.right == other.right
        )

    def __repr__(self):
        return f"TwistedProduct(Cl({self.p}), Cl({self.q}))"

    def element(self, terms: dict) -> "TwistedElement":
        return TwistedElement(self, terms)

    def zero(self) -> "TwistedElement":
        return TwistedElement(self, {})

    def one(self) -> "TwistedElement":
        return TwistedElement(self, {((), ()): Fraction(1)})

    def generator(self, k: int) -> "TwistedElement":
        """The k-th of the p + q combined odd generators."""
        if not 0 <= k < self.p + self.q:
            raise ValueError("generator index out of range")
        if k < self.p:
            return TwistedElement(self, {((k,), ()): Fraction(1)})
        return TwistedElement(self, {((), (k - self.p,)): Fraction(1)})

    def embed(self, x: "TwistedElement") -> CliffordElement:
        """Image in Cl(p+q) under (I, J) -> I u (J + p).

        The concatenated index word is already sorted, so no reordering
        sign appears.
        """
        terms = {}
        for (mi, mj), c in x.terms.items():
            terms[mi + tuple(j + self.p for j in mj)] = c
        return self.ambient.element(terms)

    def filtration_level(self, m: int, n: int) -> Subspace:
        """Coordinate span of pairs with |I| <= m, |J| <= n, matching parities."""
        if m < 0 or n < 0:
            return Subspace.zero(self.dim)
        rows = []
        for k, (mi, mj) in enumerate(self.pairs):
            if len(mi) <= m and (len(mi) - m) % 2 == 0 and len(mj) <= n and (len(mj) - n) % 2 == 0:
                rows.append(tuple(Fraction(1 if c == k else 0) for c in range(self.dim)))
        return Subspace.span(self.dim, rows)


class TwistedElement:
    """Sparse element of a twisted product, keyed by monomial pairs."""

    def __init__(self, algebra: TwistedProduct, terms: dict):
        clean = {}
        for pair, c in terms.items():
            if pair not in algebra.pair_index:
                raise ValueError(f"unknown basis pair {pair}")
            c = rational(c)
            if c:
                clean[pair] = c
        self.algebra = algebra
        self.terms = clean

    def _check(self, other: "TwistedElement"):
        if self.algebra != other.algebra:
            raise ValueError("elements of different twisted products")

    def __eq__(self, other):
        return (
            isinstance(other, TwistedElement)
            and self.algebra == other.algebra
            and self.terms == other.terms
        )

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for pair, c in other.terms.items():
            terms[pair] = terms.get(pair, Fraction(0)) + c
        return TwistedElement(self.algebra, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TwistedElement(self.algebra, {p: -c for p, c in self.terms.items()})

    def scale(self, c):
        c = rational(c)
        return TwistedElement(self.algebra, {p: c * v for p, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other: "TwistedElement") -> "TwistedElement":
        self._check(other)
        alg = self.algebra
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                sign = -1 if (len(j1) % 2 and len(i2) % 2) else 1
                coeff = sign * c1 * c2
                for mi, ca in alg.left.monomial_product(i1, i2).items():
                    for mj, cb in alg.right.monomial_product(j1, j2).items():
                        pair = (mi, mj)
                        out[pair] = out.get(pair, Fraction(0)) + coeff * ca * cb
        return TwistedElement(alg, out)

    def is_zero(self) -> bool:
        return not self.terms

    def vector(self) -> tuple:
        v = [Fraction(0)] * self.algebra.dim
        for pair, c in self.terms.items():
            v[self.algebra.pair_index[pair]] = c
        return tuple(v)

    def __repr__(self):
        return f"TwistedElement({self.terms!r})"


def twisted_tensor(a: CliffordAlgebra, b: CliffordAlgebra) -> TwistedProduct:
    """The twisted product presentation of Cl(a.n + b.n)."""
    return TwistedProduct(a, b)


def check_twisted_tensor(t: TwistedProduct) -> Certificate:
    """Combined generators close Cl(p+q); embedding is an algebra iso."""
    name = "twisted_tensor"
    total = t.p + t.q
    gens = [t.generator(k) for k in range(total)]
    one = t.one()
    for i in range(total):
        for j in range(i, total):
            anti = gens[i] * gens[j] + gens[j] * gens[i]
            want = one.scale(2) if i == j else t.zero()
            if anti != want:
                return failing(name, kind="generator_relation", i=i, j=j)
    # multiplicativity of the identification on every pair of basis
    # elements, which is exactly the superalgebra isomorphism claim
    for pa in t.pairs:
        x = t.element({pa: 1})
        for pb in t.pairs:
            y = t.element({pb: 1})
            if t.embed(x * y) != t.embed(x) * t.embed(y):
                return failing(name, kind="not_multiplicative", left=pa, right=pb)
    images = {t.embed(t.element({pair: 1})) for pair in t.pairs}
    if len(images) != t.dim:
        return failing(name, kind="not_bijective")
    # product of bifiltration levels lands in the summed level
    for (i1, j1) in t.pairs:
        for (i2, j2) in t.pairs:
            prod = t.element({(i1, j1): 1}) * t.element({(i2, j2): 1})
            for (mi, mj) in prod.terms:
                ok_i = len(mi) <= len(i1) + len(i2) and (len(mi) - len(i1) - len(i2)) % 2 == 0
                ok_j = len(mj) <= len(j1) + len(j2) and (len(mj) - len(j1) - len(j2)) % 2 == 0
                if not (ok_i and ok_j):
                    return failing(name, kind="bifiltration", left=(i1, j1), right=(i2, j2))
    return passing(name)


# ---------------------------------------------------------------------------
# Bifiltered supermodules

_COMPONENTS = ((0, 0), (0, 1), (1, 0), (1, 1))


class BifilteredSupermodule:
    """Four parity components acted on by two anticommuting Clifford families.

    gamma_plus[i] flips the first parity index, gamma_minus[j] the
    second; both are stored per source component.  The flags F_{m,n}
    live on the grid 0..top_plus x 0..top_minus, F_{m,n} inside the
    component of parity (m mod 2, n mod 2); outside the grid flag_at
    falls back two steps (the grid's own stabilization) and negative
    indices give zero.
    """

    def __init__(self, plus_algebra, minus_algebra, dims, gamma_plus, gamma_minus, biflags):
        self.plus_algebra = plus_algebra
        self.minus_algebra = minus_algebra
        self.dims = {comp: int(dims[comp]) for comp in _COMPONENTS}
        gamma_plus = tuple(dict(g) for g in gamma_plus)
        gamma_minus = tuple(dict(g) for g in gamma_minus)
        if len(gamma_plus) != plus_algebra.n or len(gamma_minus) != minus_algebra.n:
            raise ValueError("one action matrix family per generator")
        for g in gamma_plus:
            for (a, b) in _COMPONENTS:
                if (g[(a, b)].rows, g[(a, b)].cols) != (self.dims[(a, b)], self.dims[(1 - a, b)]):
                    raise ValueError("gamma_plus shape mismatch")
        for g in gamma_minus:
            for (a, b) in _COMPONENTS:
                if (g[(a, b)].rows, g[(a, b)].cols) != (self.dims[(a, b)], self.dims[(a, 1 - b)]):
                    raise ValueError("gamma_minus shape mismatch")
        self.gamma_plus = gamma_plus
        self.gamma_minus = gamma_minus
        biflags = tuple(tuple(row) for row in biflags)
        if len(biflags) < 2 or any(len(row) != len(biflags[0]) for row in biflags) or len(biflags[0]) < 2:
            raise ValueError("flag grid must cover at least 0..1 in each direction")
        for m, row in enumerate(biflags):
            for n, flag in enumerate(row):
                if flag.ambient != self.dims[(m % 2, n % 2)]:
                    raise ValueError(f"flag ({m},{n}) lives in the wrong component")
        self.biflags = biflags

    @property
    def top_plus(self) -> int:
        return len(self.biflags) - 1

    @property
    def top_minus(self) -> int:
        return len(self.biflags[0]) - 1

    def dim(self, a: int, b: int) -> int:
        return self.dims[(a, b)]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def flag_at(self, m: int, n: int) -> Subspace:
        if m < 0 or n < 0:
            return Subspace.zero(self.dims[(m % 2, n % 2)])
        while m > self.top_plus:
            m -= 2
        while n > self.top_minus:
            n -= 2
        return self.biflags[m][n]

    def __repr__(self):
        d = self.dims
        return (
            f"BifilteredSupermodule(p={self.plus_algebra.n}, q={self.minus_algebra.n}, "
            f"dims {d[(0,0)]},{d[(0,1)]},{d[(1,0)]},{d[(1,1)]})"
        )


def check_bifiltered_module(bf: BifilteredSupermodule) -> Certificate:
    """Clifford relations of both families, anticommutation across
    families, flag nesting, corner fullness, and gamma compatibility."""
    name = "bifiltered_module"
    gp, gm = bf.gamma_plus, bf.gamma_minus
    gram_p = bf.plus_algebra.gram.entries
    gram_m = bf.minus_algebra.gram.entries
    for (a, b) in _COMPONENTS:
        ident = Matrix.identity(bf.dims[(a, b)])
        for i in range(bf.plus_algebra.n):
            for j in range(i, bf.plus_algebra.n):
                lhs = gp[i][(a, b)] * gp[j][(1 - a, b)] + gp[j][(a, b)] * gp[i][(1 - a, b)]
                if lhs != ident.scale(2 * gram_p[i][j]):
                    return failing(name, kind="plus_relation", i=i, j=j, component=(a, b))
        for i in range(bf.minus_algebra.n):
            for j in range(i, bf.minus_algebra.n):
                lhs = gm[i][(a, b)] * gm[j][(a, 1 - b)] + gm[j][(a, b)] * gm[i][(a, 1 - b)]
                if lhs != ident.scale(2 * gram_m[i][j]):
                    return failing(name, kind="minus_relation", i=i, j=j, component=(a, b))
        for i in range(bf.plus_algebra.n):
            for j in range(bf.minus_algebra.n):
                mixed = gp[i][(a, b)] * gm[j][(1 - a, b)] + gm[j][(a, b)] * gp[i][(a, 1 - b)]
                if not mixed.is_zero():
                    return failing(name, kind="families_commute", i=i, j=j, component=(a, b))
    mp, mq = bf.top_plus, bf.top_minus
    for m in range(mp + 1):
        for n in range(mq + 1):
            flag = bf.biflags[m][n]
            if m + 2 <= mp and not bf.biflags[m + 2][n].contains_subspace(flag):
                return failing(name, kind="nesting_plus", m=m, n=n)
            if n + 2 <= mq and not bf.biflags[m][n + 2].contains_subspace(flag):
                return failing(name, kind="nesting_minus", m=m, n=n)
            for i in range(bf.plus_algebra.n):
                image = flag.image(gp[i][(m % 2, n % 2)])
                if not bf.flag_at(m + 1, n).contains_subspace(image):
                    return failing(name, kind="compatibility_plus", i=i, m=m, n=n)
            for j in range(bf.minus_algebra.n):
                image = flag.image(gm[j][(m % 2, n % 2)])
                if not bf.flag_at(m, n + 1).contains_subspace(image):
                    return failing(name, kind="compatibility_minus", j=j, m=m, n=n)
    for m in (mp - 1, mp):
        for n in (mq - 1, mq):
            if not bf.biflags[m][n].is_full:
                return failing(name, kind="exhaustive", m=m, n=n)
    return passing(name)


def _block_matrix(row_dims, col_dims, blocks) -> Matrix:
    """Assemble a matrix from a {(row_block, col_block): Matrix} dict."""
    total_rows = sum(row_dims)
    total_cols = sum(col_dims)
    entries = [[Fraction(0)] * total_cols for _ in range(total_rows)]
    row_off = [sum(row_dims[:k]) for k in range(len(row_dims))]
    col_off = [sum(col_dims[:k]) for k in range(len(col_dims))]
    for (bi, bj), mat in blocks.items():
        if (mat.rows, mat.cols) != (row_dims[bi], col_dims[bj]):
            raise ValueError("block shape mismatch")
        for r in range(mat.rows):
            row = entries[row_off[bi] + r]
            for c in range(mat.cols):
                row[col_off[bj] + c] = mat.entries[r][c]
    return Matrix(total_rows, total_cols, entries)


def total_module(bf: BifilteredSupermodule) -> CliffordSupermodule:
    """The underlying Cl(p+q)-supermodule, with block Gram matrix.

    Even part is ordered (0,0) then (1,1); odd part (0,1) then (1,0).
    Generators 0..p-1 come from the plus family, p..p+q-1 from minus.
    """
    p, q = bf.plus_algebra.n, bf.minus_algebra.n
    gram = _block_matrix(
        [p, q], [p, q],
        {(0, 0): bf.plus_algebra.gram, (1, 1): bf.minus_algebra.gram},
    )
    even_dims = [bf.dims[(0, 0)], bf.dims[(1, 1)]]
    odd_dims = [bf.dims[(0, 1)], bf.dims[(1, 0)]]
    gamma_eo, gamma_oe = [], []
    for i in range(p):
        g = bf.gamma_plus[i]
        gamma_eo.append(_block_matrix(even_dims, odd_dims, {(0, 1): g[(0, 0)], (1, 0): g[(1, 1)]}))
        gamma_oe.append(_block_matrix(odd_dims, even_dims, {(0, 1): g[(0, 1)], (1, 0): g[(1, 0)]}))
    for j in range(q):
        g = bf.gamma_minus[j]
        gamma_eo.append(_block_matrix(even_dims, odd_dims, {(0, 0): g[(0, 0)], (1, 1): g[(1, 1)]}))
        gamma_oe.append(_block_matrix(odd_dims, even_dims, {(0, 0): g[(0, 1)], (1, 1): g[(1, 0)]}))
    algebra = CliffordAlgebra(p + q, gram)
    return CliffordSupermodule(
        algebra, gamma_eo, gamma_oe,
        dim_even=sum(even_dims), dim_odd=sum(odd_dims),
    )


def tensor_module(f_plus: SuperFiltration, f_minus: SuperFiltration) -> BifilteredSupermodule:
    """Twisted tensor of two filtered supermodules.

    Component (a, b) is the tensor of the parity-a and parity-b pieces;
    the minus family acts through the first factor's parity sign, which
    is what makes the two families anticommute.  The grid flag F_{m,n}
    is the span of tensors from level m of the first filtration and
    level n of the second.
    """
    mod_p, mod_m = f_plus.module, f_minus.module
    dims = {
        (a, b): mod_p.dim(a) * mod_m.dim(b) for (a, b) in _COMPONENTS
    }
    gamma_plus = []
    for i in range(mod_p.algebra.n):
        gamma_plus.append({
            (a, b): kron(mod_p.gamma(i, a), Matrix.identity(mod_m.dim(b)))
            for (a, b) in _COMPONENTS
        })
    gamma_minus = []
    for j in range(mod_m.algebra.n):
        per = {}
        for (a, b) in _COMPONENTS:
            block = kron(Matrix.identity(mod_p.dim(a)), mod_m.gamma(j, b))
            per[(a, b)] = block.scale(-1) if a else block
        gamma_minus.append(per)
    biflags = []
    for m in range(f_plus.top_degree + 1):
        row = []
        for n in range(f_minus.top_degree + 1):
            lev_p = f_plus.level(m)
            lev_m = f_minus.level(n)
            tensor = kron(lev_p.basis, lev_m.basis)
            row.append(Subspace.span(dims[(m % 2, n % 2)], tensor.entries))
        biflags.append(row)
    return BifilteredSupermodule(
        mod_p.algebra, mod_m.algebra, dims, gamma_plus, gamma_minus, biflags
    )


# ---------------------------------------------------------------------------
# Bigraded representations

class BiGradedRep:
    """Bigraded components with two commuting shifts and two Q families.

    Components live on the grid 0..top_plus x 0..top_minus; above the
    grid the data repeats with period two in each direction, with the
    corresponding shift the identity there.  shift_plus has bidegree
    (2,0), shift_minus (0,2), Qp_maps[i] (1,0), Qm_maps[j] (0,1).
    """

    def __init__(self, plus_algebra, minus_algebra, dims, sp, sm, qp, qm):
        dims = tuple(tuple(int(d) for d in row) for row in dims)
        if len(dims) < 2 or any(len(row) != len(dims[0]) for row in dims) or len(dims[0]) < 2:
            raise ValueError("component grid must cover at least 0..1 each way")
        mp, mq = len(dims) - 1, len(dims[0]) - 1
        sp, sm = dict(sp), dict(sm)
        qp = tuple(dict(per) for per in qp)
        qm = tuple(dict(per) for per in qm)
        if len(qp) != plus_algebra.n or len(qm) != minus_algebra.n:
            raise ValueError("one Q family per generator")
        for m in range(mp + 1):
            for n in range(mq + 1):
                if m <= mp - 2:
                    if (sp[(m, n)].rows, sp[(m, n)].cols) != (dims[m][n], dims[m + 2][n]):
                        raise ValueError(f"shift_plus shape mismatch at {(m, n)}")
                if n <= mq - 2:
                    if (sm[(m, n)].rows, sm[(m, n)].cols) != (dims[m][n], dims[m][n + 2]):
                        raise ValueError(f"shift_minus shape mismatch at {(m, n)}")
                for per in qp:
                    target = dims[m + 1][n] if m < mp else dims[mp - 1][n]
                    if (per[(m, n)].rows, per[(m, n)].cols) != (dims[m][n], target):
                        raise ValueError(f"Qp shape mismatch at {(m, n)}")
                for per in qm:
                    target = dims[m][n + 1] if n < mq else dims[m][mq - 1]
                    if (per[(m, n)].rows, per[(m, n)].cols) != (dims[m][n], target):
                        raise ValueError(f"Qm shape mismatch at {(m, n)}")
        self.plus_algebra = plus_algebra
        self.minus_algebra = minus_algebra
        self.dims = dims
        self.sp = sp
        self.sm = sm
        self.qp = qp
        self.qm = qm

    @property
    def top_plus(self) -> int:
        return len(self.dims) - 1

    @property
    def top_minus(self) -> int:
        return len(self.dims[0]) - 1

    def _stab(self, m: int, n: int) -> tuple[int, int]:
        while m > self.top_plus:
            m -= 2
        while n > self.top_minus:
            n -= 2
        return m, n

    def dim_at(self, m: int, n: int) -> int:
        if m < 0 or n < 0:
            return 0
        m, n = self._stab(m, n)
        return self.dims[m][n]

    def sp_at(self, m: int, n: int) -> Matrix:
        if m < 0 or n < 0:
            return Matrix.zeros(0, self.dim_at(m + 2, n))
        m, n = self._stab(m, n)
        if m >= self.top_plus - 1:
            return Matrix.identity(self.dims[m][n])
        return self.sp[(m, n)]

    def sm_at(self, m: int, n: int) -> Matrix:
        if m < 0 or n < 0:
            return Matrix.zeros(0, self.dim_at(m, n + 2))
        m, n = self._stab(m, n)
        if n >= self.top_minus - 1:
            return Matrix.identity(self.dims[m][n])
        return self.sm[(m, n)]

    def qp_at(self, i: int, m: int, n: int) -> Matrix:
        if m < 0 or n < 0:
            return Matrix.zeros(0, self.dim_at(m + 1, n))
        m, n = self._stab(m, n)
        return self.qp[i][(m, n)]

    def qm_at(self, j: int, m: int, n: int) -> Matrix:
        if m < 0 or n < 0:
            return Matrix.zeros(0, self.dim_at(m, n + 1))
        m, n = self._stab(m, n)
        return self.qm[j][(m, n)]

    def __repr__(self):
        return f"BiGradedRep(grid {self.top_plus}x{self.top_minus})"


def bideform(bf: BifilteredSupermodule) -> BiGradedRep:
    """Bigraded representation on the flag grid in canonical bases."""
    cert = check_bifiltered_module(bf)
    if not cert:
        raise ValueError(f"bifiltered module invalid: {cert.witness}")
    mp, mq = bf.top_plus, bf.top_minus
    dims = [[bf.biflags[m][n].dim for n in range(mq + 1)] for m in range(mp + 1)]
    sp, sm = {}, {}
    qp = [dict() for _ in range(bf.plus_algebra.n)]
    qm = [dict() for _ in range(bf.minus_algebra.n)]
    for m in range(mp + 1):
        for n in range(mq + 1):
            flag = bf.biflags[m][n]
            comp = (m % 2, n % 2)
            if m <= mp - 2:
                sp[(m, n)] = bf.biflags[m + 2][n].coordinate_matrix(flag.basis)
            if n <= mq - 2:
                sm[(m, n)] = bf.biflags[m][n + 2].coordinate_matrix(flag.basis)
            for i in range(bf.plus_algebra.n):
                images = flag.basis * bf.gamma_plus[i][comp]
                qp[i][(m, n)] = bf.flag_at(m + 1, n).coordinate_matrix(images)
            for j in range(bf.minus_algebra.n):
                images = flag.basis * bf.gamma_minus[j][comp]
                qm[j][(m, n)] = bf.flag_at(m, n + 1).coordinate_matrix(images)
    return BiGradedRep(bf.plus_algebra, bf.minus_algebra, dims, sp, sm, qp, qm)


def verify_2d(r: BiGradedRep) -> Certificate:
    """All brackets of the bigraded super translation algebra, exactly.

    Shift injectivity, commutation of the two shifts, the Clifford
    anticommutators against each shift, vanishing of the mixed bracket,
    commutation of shifts with all Q operators, and the helicity and
    spin-statistics bookkeeping (the diagonal operator with eigenvalue
    m - n shifts by +-1 against Q+- and by +-2 against the shifts).
    """
    name = "bigraded_relations"
    mp, mq = r.top_plus, r.top_minus
    gram_p = r.plus_algebra.gram.entries
    gram_m = r.minus_algebra.gram.entries
    for (m, n), mat in r.sp.items():
        if mat.rank() != mat.rows:
            return failing(name, kind="shift_plus_injective", m=m, n=n)
    for (m, n), mat in r.sm.items():
        if mat.rank() != mat.rows:
            return failing(name, kind="shift_minus_injective", m=m, n=n)
    for m in range(mp + 1):
        for n in range(mq + 1):
            if r.sp_at(m, n) * r.sm_at(m + 2, n) != r.sm_at(m, n) * r.sp_at(m, n + 2):
                return failing(name, kind="shifts_commute", m=m, n=n)
            for i in range(r.plus_algebra.n):
                for j in range(i, r.plus_algebra.n):
                    lhs = r.qp_at(i, m, n) * r.qp_at(j, m + 1, n) + r.qp_at(j, m, n) * r.qp_at(i, m + 1, n)
                    if lhs != r.sp_at(m, n).scale(2 * gram_p[i][j]):
                        return failing(name, kind="plus_anticommutator", i=i, j=j, m=m, n=n)
            for i in range(r.minus_algebra.n):
                for j in range(i, r.minus_algebra.n):
                    lhs = r.qm_at(i, m, n) * r.qm_at(j, m, n + 1) + r.qm_at(j, m, n) * r.qm_at(i, m, n + 1)
                    if lhs != r.sm_at(m, n).scale(2 * gram_m[i][j]):
                        return failing(name, kind="minus_anticommutator", i=i, j=j, m=m, n=n)
            for i in range(r.plus_algebra.n):
                for j in range(r.minus_algebra.n):
                    mixed = r.qp_at(i, m, n) * r.qm_at(j, m + 1, n) + r.qm_at(j, m, n) * r.qp_at(i, m, n + 1)
                    if not mixed.is_zero():
                        return failing(name, kind="mixed_bracket", i=i, j=j, m=m, n=n)
            for i in range(r.plus_algebra.n):
                if r.sp_at(m, n) * r.qp_at(i, m + 2, n) != r.qp_at(i, m, n) * r.sp_at(m + 1, n):
                    return failing(name, kind="shift_plus_Qp", i=i, m=m, n=n)
                if r.sm_at(m, n) * r.qp_at(i, m, n + 2) != r.qp_at(i, m, n) * r.sm_at(m + 1, n):
                    return failing(name, kind="shift_minus_Qp", i=i, m=m, n=n)
            for j in range(r.minus_algebra.n):
                if r.sp_at(m, n) * r.qm_at(j, m + 2, n) != r.qm_at(j, m, n) * r.sp_at(m, n + 1):
                    return failing(name, kind="shift_plus_Qm", j=j, m=m, n=n)
                if r.sm_at(m, n) * r.qm_at(j, m, n + 2) != r.qm_at(j, m, n) * r.sm_at(m, n + 1):
                    return failing(name, kind="shift_minus_Qm", j=j, m=m, n=n)
            # helicity bookkeeping: the diagonal eigenvalue m - n changes
            # by the bidegree of each operator, and parity matches m + n
            helicity = m - n
            if ((m + 1) - n) - helicity != 1 or (m - (n + 1)) - helicity != -1:
                return failing(name, kind="helicity_Q", m=m, n=n)
            if ((m + 2) - n) - helicity != 2 or (m - (n + 2)) - helicity != -2:
                return failing(name, kind="helicity_shift", m=m, n=n)
            if (helicity - (m + n)) % 2 != 0:
                return failing(name, kind="spin_statistics", m=m, n=n)
    return passing(name)


def biquotient(r: BiGradedRep, shell_plus=1, shell_minus=1) -> BifilteredSupermodule:
    """Collapse onto the four corner components at the given shell values.

    Generators act by the stored Q maps, with the wrap-around maps (the
    ones leaving the grid's top row or column) scaled by the shell
    value; the output algebras carry the correspondingly scaled Gram
    matrices.  Flags are the images of the grid components under the
    composite shifts into the corner of matching biparity.
    """
    shell_plus = rational(shell_plus)
    shell_minus = rational(shell_minus)
    if shell_plus <= 0 or shell_minus <= 0:
        raise ValueError("shell values must be positive")
    for (m, n), mat in list(r.sp.items()) + list(r.sm.items()):
        if mat.rank() != mat.rows:
            raise ValueError(f"shift not injective at {(m, n)}")
    mp, mq = r.top_plus, r.top_minus
    for m in range(mp + 1):
        for n in range(mq + 1):
            if r.sp_at(m, n) * r.sm_at(m + 2, n) != r.sm_at(m, n) * r.sp_at(m, n + 2):
                raise ValueError(f"shifts do not commute at {(m, n)}")

    def corner(a: int, b: int) -> tuple[int, int]:
        return (mp if mp % 2 == a else mp - 1, mq if mq % 2 == b else mq - 1)

    dims = {}
    for (a, b) in _COMPONENTS:
        cm, cn = corner(a, b)
        dims[(a, b)] = r.dims[cm][cn]
    gamma_plus = []
    for i in range(r.plus_algebra.n):
        per = {}
        for (a, b) in _COMPONENTS:
            cm, cn = corner(a, b)
            mat = r.qp[i][(cm, cn)]
            per[(a, b)] = mat.scale(shell_plus) if cm == mp else mat
        gamma_plus.append(per)
    gamma_minus = []
    for j in range(r.minus_algebra.n):
        per = {}
        for (a, b) in _COMPONENTS:
            cm, cn = corner(a, b)
            mat = r.qm[j][(cm, cn)]
            per[(a, b)] = mat.scale(shell_minus) if cn == mq else mat
        gamma_minus.append(per)
    biflags = []
    for m in range(mp + 1):
        row = []
        for n in range(mq + 1):
            cm, cn = corner(m % 2, n % 2)
            composite = Matrix.identity(r.dims[m][n])
            for step in range(m, cm, 2):
                composite = composite * r.sp_at(step, n)
            for step in range(n, cn, 2):
                composite = composite * r.sm_at(cm, step)
            row.append(Subspace.span(dims[(m % 2, n % 2)], composite.entries))
        biflags.append(row)
    plus_algebra = CliffordAlgebra(r.plus_algebra.n, r.plus_algebra.gram.scale(shell_plus))
    minus_algebra = CliffordAlgebra(r.minus_algebra.n, r.minus_algebra.gram.scale(shell_minus))
    return BifilteredSupermodule(plus_algebra, minus_algebra, dims, gamma_plus, gamma_minus, biflags)


@dataclass(frozen=True)
class BifilteredIso:
    """Isomorphism of bifiltered modules given per parity component."""

    component_maps: dict
    certificate: Certificate


def canonical_biroundtrip_iso(bf: BifilteredSupermodule) -> BifilteredIso:
    """Identify bf with biquotient(bideform(bf)) at shell values (1, 1).

    Component maps send a vector to its coordinates in the matching
    corner flag's canonical basis; bijectivity, intertwining with both
    generator families, and exact flag correspondence are verified.  A
    failure is a defect of the correspondence itself, so it raises.
    """
    r = bideform(bf)
    s = biquotient(r, 1, 1)
    mp, mq = bf.top_plus, bf.top_minus

    def corner(a: int, b: int) -> tuple[int, int]:
        return (mp if mp % 2 == a else mp - 1, mq if mq % 2 == b else mq - 1)

    maps = {}
    for (a, b) in _COMPONENTS:
        cm, cn = corner(a, b)
        flag = bf.biflags[cm][cn]
        maps[(a, b)] = flag.coordinate_matrix(Matrix.identity(bf.dims[(a, b)]))

    def verify() -> Certificate:
        name = "biroundtrip_iso"
        for (a, b) in _COMPONENTS:
            if maps[(a, b)].rank() != bf.dims[(a, b)] or s.dims[(a, b)] != bf.dims[(a, b)]:
                return failing(name, kind="bijective", component=(a, b))
        for (a, b) in _COMPONENTS:
            for i in range(bf.plus_algebra.n):
                if bf.gamma_plus[i][(a, b)] * maps[(1 - a, b)] != maps[(a, b)] * s.gamma_plus[i][(a, b)]:
                    return failing(name, kind="intertwine_plus", i=i, component=(a, b))
            for j in range(bf.minus_algebra.n):
                if bf.gamma_minus[j][(a, b)] * maps[(a, 1 - b)] != maps[(a, b)] * s.gamma_minus[j][(a, b)]:
                    return failing(name, kind="intertwine_minus", j=j, component=(a, b))
        for m in range(mp + 1):
            for n in range(mq + 1):
                carrier = maps[(m % 2, n % 2)]
                if bf.biflags[m][n].image(carrier) != s.biflags[m][n]:
                    return failing(name, kind="flag", m=m, n=n)
        return passing(name)

    cert = verify()
    if not cert:
        raise RuntimeError(f"biroundtrip correspondence failed: {cert.witness}")
    return BifilteredIso(maps, cert)


# ---------------------------------------------------------------------------
# Membership identities in the truncated quotient model

def _vadd(u, v):
    if u is None:
        return v
    return tuple(a + b for a, b in zip(u, v))


def _apply_shift(r: BiGradedRep, z: dict, kind: str) -> dict:
    out: dict = {}
    for (m, n), vec in z.items():
        if kind == "sigma":
            mat = r.sp_at(m, n)
            key = r._stab(m + 2, n)
        else:
            mat = r.sm_at(m, n)
            key = r._stab(m, n + 2)
        out[key] = _vadd(out.get(key), mat.apply(vec))
    return {k: v for k, v in out.items() if any(v)}


def _z_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, vec in b.items():
        cur = out.get(key)
        if cur is None:
            out[key] = tuple(-c for c in vec)
        else:
            out[key] = tuple(x - y for x, y in zip(cur, vec))
    return {k: v for k, v in out.items() if any(v)}


def membership_identities(r: BiGradedRep, samples: int = 20, seed: int = 0) -> Certificate:
    """Quotient-model identities witnessing ideal membership.

    On random truncated elements z, checks that sigma tau z - z equals
    (sigma - 1)(tau z) + (tau - 1) z, with the left side computed by the
    one-step composed shift, and that sigma z - tau z equals
    (sigma - 1) z - (tau - 1) z; both exhibit the explicit membership
    witnesses in the ideal generated by sigma - 1 and tau - 1.
    """
    name = "membership_identities"
    rng = random.Random(seed)
    mp, mq = r.top_plus, r.top_minus
    for sample in range(samples):
        z = {}
        for m in range(mp + 1):
            for n in range(mq + 1):
                vec = tuple(Fraction(rng.randint(-2, 2)) for _ in range(r.dims[m][n]))
                if any(vec):
                    z[(m, n)] = vec
        composed: dict = {}
        for (m, n), vec in z.items():
            mat = r.sp_at(m, n) * r.sm_at(m + 2, n)
            key = r._stab(m + 2, n + 2)
            composed[key] = _vadd(composed.get(key), mat.apply(vec))
        composed = {k: v for k, v in composed.items() if any(v)}
        lhs1 = _z_sub(composed, z)
        tau_z = _apply_shift(r, z, "tau")
        rhs1 = _z_sub(
            _z_sub(_apply_shift(r, tau_z, "sigma"), tau_z),
            _z_sub(z, tau_z),
        )
        if lhs1 != rhs1:
            return failing(name, kind="sigma_tau_membership", sample=sample)
        sigma_z = _apply_shift(r, z, "sigma")
        lhs2 = _z_sub(sigma_z, tau_z)
        rhs2 = _z_sub(_z_sub(sigma_z, z), _z_sub(tau_z, z))
        if lhs2 != rhs2:
            return failing(name, kind="difference_membership", sample=sample)
    return passing(name)
