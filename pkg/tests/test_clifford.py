"""Clifford algebra products against an independent sign oracle."""

import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from cliffilt.clifford import CliffordAlgebra, check_filtered_superalgebra, filtration_level
from cliffilt.exactalg import Matrix


def oracle_product(I, J):
    """Closed formula for e_I * e_J in the identity-Gram algebra.

    Sign counts the transpositions moving J's generators past I's larger
    ones; coincident indices square to 1 and drop out.
    """
    sign = (-1) ** sum(1 for a in I for b in J if a > b)
    sym = tuple(sorted(set(I) ^ set(J)))
    return sign, sym


def test_products_match_oracle_exhaustive_n4():
    alg = CliffordAlgebra(4)
    for I in alg.monomials:
        for J in alg.monomials:
            got = alg.basis_element(I) * alg.basis_element(J)
            sign, sym = oracle_product(I, J)
            assert got.terms == {sym: Fraction(sign)}, (I, J)


def test_hand_cases():
    alg = CliffordAlgebra(3)
    g = [alg.gamma(i) for i in range(3)]
    one = alg.one()
    assert g[0] * g[0] == one
    assert g[1] * g[0] == -(g[0] * g[1])
    # (g0 g1)(g1 g2) = g0 g2
    left = g[0] * g[1] * (g[1] * g[2])
    assert left == g[0] * g[2]


def test_relations_all_pairs():
    gram = Matrix(2, 2, [[2, 1], [1, 3]])
    for alg in (CliffordAlgebra(3), CliffordAlgebra(2, gram)):
        for i in range(alg.n):
            for j in range(alg.n):
                anti = alg.gamma(i) * alg.gamma(j) + alg.gamma(j) * alg.gamma(i)
                assert anti == alg.one().scale(2 * alg.gram.entries[i][j])


def test_associativity_random_triples():
    rng = random.Random(19)
    for n in range(1, 6):
        alg = CliffordAlgebra(n)
        for _ in range(12):
            def rand_elem():
                e = alg.zero()
                for _ in range(rng.randint(1, 3)):
                    mono = alg.monomials[rng.randrange(len(alg.monomials))]
                    e = e + alg.basis_element(mono).scale(rng.randint(-3, 3))
                return e

            a, b, c = rand_elem(), rand_elem(), rand_elem()
            assert (a * b) * c == a * (b * c)


def test_z2_grading_of_products():
    rng = random.Random(4)
    alg = CliffordAlgebra(4)
    for _ in range(40):
        I = alg.monomials[rng.randrange(len(alg.monomials))]
        J = alg.monomials[rng.randrange(len(alg.monomials))]
        prod = alg.basis_element(I) * alg.basis_element(J)
        for mono, coeff in prod.terms.items():
            if coeff:
                assert len(mono) % 2 == (len(I) + len(J)) % 2


def test_filtration_level_dimensions():
    # dim F_p = sum of C(N, j) over j <= p with matching parity
    for n in range(7):
        alg = CliffordAlgebra(n)
        for p in range(-1, n + 3):
            expected = sum(comb(n, j) for j in range(max(p % 2, 0), min(p, n) + 1, 2)) if p >= 0 else 0
            assert filtration_level(alg, p).dim == expected, (n, p)


def test_filtration_level_n4_known_values():
    alg = CliffordAlgebra(4)
    assert filtration_level(alg, 2).dim == 7
    assert filtration_level(alg, 1).dim == 4
    assert filtration_level(alg, -1).dim == 0


def test_check_filtered_superalgebra():
    assert check_filtered_superalgebra(CliffordAlgebra(3))
    assert check_filtered_superalgebra(CliffordAlgebra(4))
    gram = Matrix(2, 2, [[1, Fraction(1, 2)], [Fraction(1, 2), 2]])
    assert check_filtered_superalgebra(CliffordAlgebra(2, gram))


def test_gram_must_be_positive_definite():
    with pytest.raises(ValueError):
        CliffordAlgebra(2, Matrix(2, 2, [[1, 2], [2, 1]]))
    with pytest.raises(ValueError):
        CliffordAlgebra(1, Matrix(1, 1, [[0]]))
    with pytest.raises(ValueError):
        CliffordAlgebra(2, Matrix(2, 2, [[1, 1], [0, 1]]))  # not symmetric


def test_monomial_order_cardinality_then_lex():
    alg = CliffordAlgebra(3)
    assert alg.monomials == ((), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))


def test_general_gram_contraction():
    # u*v + v*u = 2<u,v> for the off-diagonal pair
    gram = Matrix(2, 2, [[1, Fraction(1, 2)], [Fraction(1, 2), 1]])
    alg = CliffordAlgebra(2, gram)
    u, v = alg.gamma(0), alg.gamma(1)
    assert u * v + v * u == alg.one()
    assert u * u == alg.one()
