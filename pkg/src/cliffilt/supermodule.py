"""Filtered supermodules over Clifford algebras.

A supermodule is a pair of rational coordinate spaces (even and odd)
with, for each generator, a parity-swapping pair of matrices acting on
row vectors.  A super filtration is a parity-separated flag

    F_0 <= F_2 <= F_4 <= ...   (inside the even part)
    F_1 <= F_3 <= F_5 <= ...   (inside the odd part)

that is exhaustive at the top two levels and satisfies
g_i . F_p <= F_{p+1}.  Levels below zero are zero and the flag lists
are indexed by p // 2.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .certificate import Certificate, failing, passing
from .clifford import CliffordAlgebra
from .exactalg import Matrix, Subspace, kernel

_ONE = Fraction(1)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; row (i, k) and column (j, l) ordered i-major."""
    rows = []
    for ra in a.entries:
        for rb in b.entries:
            rows.append([x * y for x in ra for y in rb])
    return Matrix(a.rows * b.rows, a.cols * b.cols, rows)


class CliffordSupermodule:
    """Z/2-graded module over a Clifford algebra, gamma action as matrices.

    gamma_eo[i] maps the even part to the odd part (shape dim_even x
    dim_odd, acting on row vectors), gamma_oe[i] maps back.
    """

    def __init__(
        self,
        algebra: CliffordAlgebra,
        gamma_eo: list[Matrix],
        gamma_oe: list[Matrix],
        dim_even: int | None = None,
        dim_odd: int | None = None,
    ):
        n = algebra.n
        if len(gamma_eo) != n or len(gamma_oe) != n:
            raise ValueError("need one matrix pair per generator")
        if n:
            dim_even = gamma_eo[0].rows
            dim_odd = gamma_eo[0].cols
        elif dim_even is None or dim_odd is None:
            raise ValueError("dimensions required when the algebra has no generators")
        for m in gamma_eo:
            if (m.rows, m.cols) != (dim_even, dim_odd):
                raise ValueError("gamma_eo shape mismatch")
        for m in gamma_oe:
            if (m.rows, m.cols) != (dim_odd, dim_even):
                raise ValueError("gamma_oe shape mismatch")
        self.algebra = algebra
        self.dim_even = dim_even
        self.dim_odd = dim_odd
        self.gamma_eo = tuple(gamma_eo)
        self.gamma_oe = tuple(gamma_oe)
        self._commutant: list[tuple[Matrix, Matrix]] | None = None

    def dim(self, parity: int) -> int:
        return self.dim_even if parity % 2 == 0 else self.dim_odd

    def gamma(self, i: int, parity: int) -> Matrix:
        """Matrix of g_i on the given parity component."""
        return self.gamma_eo[i] if parity % 2 == 0 else self.gamma_oe[i]

    def __eq__(self, other):
        return (
            isinstance(other, CliffordSupermodule)
            and self.algebra == other.algebra
            and self.dim_even == other.dim_even
            and self.dim_odd == other.dim_odd
            and self.gamma_eo == other.gamma_eo
            and self.gamma_oe == other.gamma_oe
        )

    def __hash__(self):
        return hash((self.algebra, self.gamma_eo, self.gamma_oe))

    def __repr__(self):
        return f"CliffordSupermodule(n={self.algebra.n}, dims=({self.dim_even}|{self.dim_odd}))"

    def graded_commutant(self) -> list[tuple[Matrix, Matrix]]:
        """Basis of parity-preserving maps commuting with every g_i.

        Pairs (P, R) with P g_eo[i] = g_eo[i] R and R g_oe[i] = g_oe[i] P.
        Assumes the module relations hold.  Cached.
        """
        if self._commutant is None:
            self._commutant = self._solve_commutant()
        return self._commutant

    def _solve_commutant(self) -> list[tuple[Matrix, Matrix]]:
        n0, n1 = self.dim_even, self.dim_odd
        if self.algebra.n == 0 or n0 == 0 or n1 == 0:
            # No constraints couple the parities: every pair of square
            # blocks commutes with an empty or one-sided action.
            pairs = []
            for r in range(n0):
                for c in range(n0):
                    p = [[_ONE if (i, j) == (r, c) else 0 for j in range(n0)] for i in range(n0)]
                    pairs.append((Matrix(n0, n0, p), Matrix.zeros(n1, n1)))
            for r in range(n1):
                for c in range(n1):
                    q = [[_ONE if (i, j) == (r, c) else 0 for j in range(n1)] for i in range(n1)]
                    pairs.append((Matrix.zeros(n0, n0), Matrix(n1, n1, q)))
            return pairs

        g00 = self.algebra.gram.entries[0][0]
        inv_g00 = g00 ** -1
        eo0, oe0 = self.gamma_eo[0], self.gamma_oe[0]

        # R is determined by P through generator 0 (R = oe0 P eo0 / g00),
        # so solve for P only; each block states sum of sign * B . P . C = 0.
        blocks = []
        for i in range(1, self.algebra.n):
            eoi, oei = self.gamma_eo[i], self.gamma_oe[i]
            blocks.append(
                [
                    (Matrix.identity(n0), eoi, _ONE),
                    ((eoi * oe0).scale(inv_g00), eo0, -_ONE),
                ]
            )
            blocks.append(
                [
                    (oe0.scale(inv_g00), eo0 * oei, _ONE),
                    (oei, Matrix.identity(n0), -_ONE),
                ]
            )

        unknowns = n0 * n0
        columns: list[list[Fraction]] = []
        for parts in blocks:
            out_rows = parts[0][0].rows
            out_cols = parts[0][1].cols
            for r in range(out_rows):
                for c in range(out_cols):
                    col = [Fraction(0)] * unknowns
                    for b, cmat, sign in parts:
                        brow = b.entries[r]
                        for k in range(n0):
                            bk = brow[k]
                            if bk:
                                for l in range(cmat.rows):
                                    cv = cmat.entries[l][c]
                                    if cv:
                                        col[k * n0 + l] += sign * bk * cv
                    columns.append(col)
        if columns:
            system = Matrix(unknowns, len(columns), list(map(list, zip(*columns))))
            basis = kernel(system)
        else:
            basis = Matrix.identity(unknowns)

        pairs = []
        for row in basis.entries:
            p = Matrix(n0, n0, [row[i * n0 : (i + 1) * n0] for i in range(n0)])
            r = (oe0 * p * eo0).scale(inv_g00)
            pairs.append((p, r))
        return pairs


def check_supermodule(m: CliffordSupermodule) -> Certificate:
    """Verify the Clifford relations on both parity components."""
    name = "supermodule_relations"
    n = m.algebra.n
    gram = m.algebra.gram.entries
    ideven = Matrix.identity(m.dim_even)
    idodd = Matrix.identity(m.dim_odd)
    for i in range(n):
        for j in range(i, n):
            want = 2 * gram[i][j]
            even_side = m.gamma_eo[i] * m.gamma_oe[j] + m.gamma_eo[j] * m.gamma_oe[i]
            if even_side != ideven.scale(want):
                return failing(name, i=i, j=j, parity=0)
            odd_side = m.gamma_oe[i] * m.gamma_eo[j] + m.gamma_oe[j] * m.gamma_eo[i]
            if odd_side != idodd.scale(want):
                return failing(name, i=i, j=j, parity=1)
    return passing(name)


class SuperFiltration:
    """Parity-separated increasing flags on a supermodule.

    even_flags[k] is F_{2k} inside the even part, odd_flags[k] is
    F_{2k+1} inside the odd part.  Both lists are nonempty; levels past
    the stored top repeat the final flag and negative levels are zero.
    """

    def __init__(self, module, even_flags, odd_flags):
        even_flags = tuple(even_flags)
        odd_flags = tuple(odd_flags)
        if not even_flags or not odd_flags:
            raise ValueError("need at least one flag per parity")
        for s in even_flags:
            if s.ambient != module.dim_even:
                raise ValueError("even flag ambient mismatch")
        for s in odd_flags:
            if s.ambient != module.dim_odd:
                raise ValueError("odd flag ambient mismatch")
        self.module = module
        self.even_flags = even_flags
        self.odd_flags = odd_flags

    @property
    def top_degree(self) -> int:
        return max(2 * (len(self.even_flags) - 1), 2 * len(self.odd_flags) - 1)

    def level(self, p: int) -> Subspace:
        if p % 2 == 0:
            if p < 0:
                return Subspace.zero(self.module.dim_even)
            return self.even_flags[min(p // 2, len(self.even_flags) - 1)]
        if p < 0:
            return Subspace.zero(self.module.dim_odd)
        return self.odd_flags[min((p - 1) // 2, len(self.odd_flags) - 1)]

    def level_dims(self) -> list[int]:
        return [self.level(p).dim for p in range(self.top_degree + 1)]

    def __eq__(self, other):
        return (
            isinstance(other, SuperFiltration)
            and self.module == other.module
            and self.even_flags == other.even_flags
            and self.odd_flags == other.odd_flags
        )

    def __hash__(self):
        return hash((self.module, self.even_flags, self.odd_flags))

    def __repr__(self):
        dims = ", ".join(str(d) for d in self.level_dims())
        return f"SuperFiltration(level dims {dims})"


def check_filtration(f: SuperFiltration) -> Certificate:
    """Nesting, exhaustiveness at the top, and gamma compatibility.

    Assumes the underlying module already passed check_supermodule.
    """
    name = "filtration"
    m = f.module
    for flags, parity in ((f.even_flags, 0), (f.odd_flags, 1)):
        for k in range(len(flags) - 1):
            if not flags[k + 1].contains_subspace(flags[k]):
                return failing(name, kind="nesting", parity=parity, level=2 * k + parity)
    if not f.even_flags[-1].is_full:
        return failing(name, kind="exhaustive", parity=0)
    if not f.odd_flags[-1].is_full:
        return failing(name, kind="exhaustive", parity=1)
    for p in range(f.top_degree + 1):
        source = f.level(p)
        target = f.level(p + 1)
        for i in range(m.algebra.n):
            if not target.contains_subspace(source.image(m.gamma(i, p))):
                return failing(name, kind="compatibility", generator=i, level=p)
    return passing(name)


def trivial_filtration(m: CliffordSupermodule) -> SuperFiltration:
    """Everything already present at levels 0 and 1."""
    return SuperFiltration(
        m, [Subspace.full(m.dim_even)], [Subspace.full(m.dim_odd)]
    )


# ---------------------------------------------------------------------------
# Exterior module with wedge-plus-contraction action


def _graded_subsets(n: int, parity: int) -> list[tuple[int, ...]]:
    out = []
    for size in range(parity, n + 1, 2):
        out.extend(combinations(range(n), size))
    return out


def exterior_module(n: int) -> CliffordSupermodule:
    """Lambda^*(R^n) with g_i acting as (e_i wedge .) + (e_i contraction).

    Basis vectors are the subsets of {0..n-1} split by size parity and
    ordered by size then lexicographically; both operations move e_i
    past the smaller indices, so g_i e_S = (-1)^{#{j in S, j < i}} e_{S xor {i}}.
    """
    algebra = CliffordAlgebra(n)
    even = _graded_subsets(n, 0)
    odd = _graded_subsets(n, 1)
    even_index = {s: k for k, s in enumerate(even)}
    odd_index = {s: k for k, s in enumerate(odd)}
    gamma_eo, gamma_oe = [], []
    for i in range(n):
        eo = [[0] * len(odd) for _ in even]
        oe = [[0] * len(even) for _ in odd]
        for subsets, index_out, grid in ((even, odd_index, eo), (odd, even_index, oe)):
            for r, s in enumerate(subsets):
                sign = (-1) ** sum(1 for j in s if j < i)
                if i in s:
                    t = tuple(j for j in s if j != i)
                else:
                    t = tuple(sorted(s + (i,)))
                grid[r][index_out[t]] = sign
        gamma_eo.append(Matrix(len(even), len(odd), eo))
        gamma_oe.append(Matrix(len(odd), len(even), oe))
    return CliffordSupermodule(
        algebra, gamma_eo, gamma_oe, dim_even=len(even), dim_odd=len(odd)
    )


def _require_exterior_shape(m: CliffordSupermodule) -> tuple[list, list]:
    n = m.algebra.n
    even = _graded_subsets(n, 0)
    odd = _graded_subsets(n, 1)
    if m.dim_even != len(even) or m.dim_odd != len(odd):
        raise ValueError("module does not have the exterior-module shape")
    return even, odd


def degree_filtration(m: CliffordSupermodule) -> SuperFiltration:
    """Filtration of an exterior module by form degree."""
    even, odd = _require_exterior_shape(m)
    n = m.algebra.n

    def flags(subsets, parity):
        out = []
        tops = range(parity, n + 1, 2) if n >= parity else [parity]
        for p in tops:
            rows = []
            for k, s in enumerate(subsets):
                if len(s) <= p:
                    row = [0] * len(subsets)
                    row[k] = 1
                    rows.append(row)
            out.append(Subspace.span(len(subsets), rows))
        return out or [Subspace.zero(len(subsets))]

    return SuperFiltration(m, flags(even, 0), flags(odd, 1))


def _hodge_sign(subset: tuple[int, ...], n: int) -> int:
    complement = tuple(j for j in range(n) if j not in subset)
    seq = subset + complement
    inversions = sum(
        1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b]
    )
    return -1 if inversions % 2 else 1


def hodge_filtration(m: CliffordSupermodule) -> SuperFiltration:
    """Self-dual refinement of the degree filtration on Lambda^*(R^4).

    Uses the Hodge star for the Euclidean metric and the standard
    orientation.  Flags: span{1 + vol} <= span{1 + vol} + Lambda^2 <= all
    on the even side, and {a + *a : a in Lambda^1} <= all on the odd side.
    """
    if m.algebra.n != 4:
        raise ValueError("the Hodge filtration is defined for exterior_module(4)")
    even, odd = _require_exterior_shape(m)
    even_index = {s: k for k, s in enumerate(even)}
    odd_index = {s: k for k, s in enumerate(odd)}

    plus0 = [0] * len(even)
    plus0[even_index[()]] = 1
    plus0[even_index[(0, 1, 2, 3)]] = _hodge_sign((), 4)

    two_forms = []
    for s in combinations(range(4), 2):
        row = [0] * len(even)
        row[even_index[s]] = 1
        two_forms.append(row)

    plus1 = []
    for i in range(4):
        s = (i,)
        complement = tuple(j for j in range(4) if j != i)
        row = [0] * len(odd)
        row[odd_index[s]] = 1
        row[odd_index[complement]] = _hodge_sign(s, 4)
        plus1.append(row)

    even_flags = [
        Subspace.span(len(even), [plus0]),
        Subspace.span(len(even), [plus0] + two_forms),
        Subspace.full(len(even)),
    ]
    odd_flags = [Subspace.span(len(odd), plus1), Subspace.full(len(odd))]
    return SuperFiltration(m, even_flags, odd_flags)


# ---------------------------------------------------------------------------
# Irreducible graded modules via anticommuting complex structures

_E = Matrix(2, 2, [[0, 1], [-1, 0]])
_S = Matrix(2, 2, [[1, 0], [0, -1]])
_T = Matrix(2, 2, [[0, 1], [1, 0]])
_I2 = Matrix.identity(2)


def _complex_structures(count: int) -> list[Matrix]:
    """`count` pairwise anticommuting matrices squaring to -1, minimal size."""
    if count == 0:
        return []
    if count == 1:
        return [_E]
    if count == 2:
        return [kron(_E, _I2), kron(_S, _E)]
    if count == 3:
        return [kron(_E, _I2), kron(_S, _E), kron(_T, _E)]
    if count == 4:
        return [
            kron(_E, kron(_I2, _I2)),
            kron(_S, kron(_E, _I2)),
            kron(_S, kron(_S, _E)),
            kron(_S, kron(_T, _E)),
        ]
    raise ValueError("complex-structure table covers at most four")


def irreducible_module(n: int) -> CliffordSupermodule:
    """The irreducible graded module for 1 <= n <= 5 generators.

    Built by doubling: with J_1..J_{n-1} anticommuting complex
    structures on the odd part, generator k < n-1 acts by (J_k, -J_k)
    and the last generator swaps the parities identically.
    """
    if not 1 <= n <= 5:
        raise ValueError("irreducible modules are tabulated for 1 <= n <= 5")
    structures = _complex_structures(n - 1)
    size = structures[0].rows if structures else 1
    gamma_eo = [j for j in structures] + [Matrix.identity(size)]
    gamma_oe = [-j for j in structures] + [Matrix.identity(size)]
    return CliffordSupermodule(CliffordAlgebra(n), gamma_eo, gamma_oe)


def irreducible_cl5() -> CliffordSupermodule:
    """The unique irreducible graded module on five generators, dims (8|8)."""
    return irreducible_module(5)


# ---------------------------------------------------------------------------
# Direct sums (block-diagonal action, levelwise flags)


def direct_sum(a: CliffordSupermodule, b: CliffordSupermodule) -> CliffordSupermodule:
    if a.algebra != b.algebra:
        raise ValueError("summands must share the algebra")

    def block(m1: Matrix, m2: Matrix) -> Matrix:
        rows = []
        for r in m1.entries:
            rows.append(list(r) + [0] * m2.cols)
        for r in m2.entries:
            rows.append([0] * m1.cols + list(r))
        return Matrix(m1.rows + m2.rows, m1.cols + m2.cols, rows)

    gamma_eo = [block(x, y) for x, y in zip(a.gamma_eo, b.gamma_eo)]
    gamma_oe = [block(x, y) for x, y in zip(a.gamma_oe, b.gamma_oe)]
    return CliffordSupermodule(
        a.algebra,
        gamma_eo,
        gamma_oe,
        dim_even=a.dim_even + b.dim_even,
        dim_odd=a.dim_odd + b.dim_odd,
    )


def direct_sum_filtration(fa: SuperFiltration, fb: SuperFiltration) -> SuperFiltration:
    """Levelwise direct sum of two filtrations on the direct sum module."""
    module = direct_sum(fa.module, fb.module)

    def embed(rows, offset, width):
        return [[0] * offset + list(r) + [0] * (width - offset - len(r)) for r in rows]

    def flags(parity):
        top = max(fa.top_degree, fb.top_degree)
        levels = [p for p in range(top + 1) if p % 2 == parity]
        width_a = fa.module.dim(parity)
        width = module.dim(parity)
        out = []
        for p in levels:
            rows = embed(fa.level(p).basis.entries, 0, width)
            rows += embed(fb.level(p).basis.entries, width_a, width)
            out.append(Subspace.span(width, rows))
        return out

    return SuperFiltration(module, flags(0), flags(1))
