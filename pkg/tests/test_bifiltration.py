"""Twisted tensor products, bifiltered modules, and the d=2 layer."""

import random
from fractions import Fraction

import pytest

from cliffilt.bifiltration import (
    BiGradedRep,
    bideform,
    biquotient,
    canonical_biroundtrip_iso,
    check_bifiltered_module,
    check_twisted_tensor,
    membership_identities,
    tensor_module,
    total_module,
    twisted_tensor,
    verify_2d,
)
from cliffilt.clifford import CliffordAlgebra
from cliffilt.exactalg import Matrix
from cliffilt.invariants import random_filtration
from cliffilt.supermodule import (
    check_supermodule,
    degree_filtration,
    exterior_module,
    trivial_filtration,
)


def test_twisted_tensor_cl2_cl3_closes_cl5():
    t = twisted_tensor(CliffordAlgebra(2), CliffordAlgebra(3))
    gens = [t.generator(k) for k in range(5)]
    for i in range(5):
        for j in range(5):
            anti = gens[i] * gens[j] + gens[j] * gens[i]
            expected = t.one().scale(2) if i == j else t.zero()
            assert anti == expected, (i, j)
    assert check_twisted_tensor(t)


def test_twisted_embedding_is_algebra_iso():
    t = twisted_tensor(CliffordAlgebra(1), CliffordAlgebra(2))
    seen = set()
    for mi in t.left.monomials:
        for mj in t.right.monomials:
            x = t.element({(mi, mj): 1})
            image = t.embed(x)
            assert len(image.terms) == 1
            seen.add(next(iter(image.terms)))
    assert len(seen) == 8


def test_twisted_associativity_random():
    rng = random.Random(13)
    for p, q in ((1, 1), (2, 2), (2, 3), (0, 3), (4, 0)):
        t = twisted_tensor(CliffordAlgebra(p), CliffordAlgebra(q))

        def rand_elem():
            e = t.zero()
            for _ in range(rng.randint(1, 3)):
                pair = t.pairs[rng.randrange(len(t.pairs))]
                e = e + t.element({pair: rng.randint(-3, 3)})
            return e

        for _ in range(8):
            a, b, c = rand_elem(), rand_elem(), rand_elem()
            assert (a * b) * c == a * (b * c)


def test_twisted_rejects_general_gram():
    gram = Matrix(2, 2, [[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        twisted_tensor(CliffordAlgebra(2, gram), CliffordAlgebra(1))


def test_twisted_bifiltration_product_rule():
    t = twisted_tensor(CliffordAlgebra(2), CliffordAlgebra(2))
    for m1, n1, m2, n2 in ((1, 0, 1, 1), (2, 1, 0, 1), (1, 2, 1, 0)):
        lev1 = t.filtration_level(m1, n1)
        lev2 = t.filtration_level(m2, n2)
        target = t.filtration_level(m1 + m2, n1 + n2)
        def from_vector(v):
            return t.element({pair: c for pair, c in zip(t.pairs, v) if c})

        for v in lev1.basis.entries:
            for w in lev2.basis.entries:
                prod = from_vector(v) * from_vector(w)
                assert target.contains(prod.vector())


def test_tensor_module_structure():
    fp = degree_filtration(exterior_module(2))
    fm = degree_filtration(exterior_module(1))
    bf = tensor_module(fp, fm)
    assert check_bifiltered_module(bf)
    # component dims multiply parity-component dims of the factors
    assert bf.dim(0, 0) == fp.module.dim_even * fm.module.dim_even
    assert bf.dim(1, 1) == fp.module.dim_odd * fm.module.dim_odd
    # flags are products, so bigraded dims are products of flag dims
    for m in range(bf.top_plus + 1):
        for n in range(bf.top_minus + 1):
            assert bf.flag_at(m, n).dim == fp.level(m).dim * fm.level(n).dim


def test_two_stage_deformation_dimension_table():
    # grading by one parameter then the other gives the same table as the
    # direct bigraded deformation
    fp = degree_filtration(exterior_module(2))
    fm = degree_filtration(exterior_module(2))
    r = bideform(tensor_module(fp, fm))
    stage_plus = [fp.level(m).dim for m in range(r.top_plus + 1)]
    stage_minus = [fm.level(n).dim for n in range(r.top_minus + 1)]
    for m, row in enumerate(r.dims):
        for n, d in enumerate(row):
            assert d == stage_plus[m] * stage_minus[n]


def test_total_module_relations():
    bf = tensor_module(degree_filtration(exterior_module(2)),
                       degree_filtration(exterior_module(2)))
    total = total_module(bf)
    assert check_supermodule(total)
    assert total.algebra.n == 4


def test_bideform_verify_roundtrip_tensor():
    bf = tensor_module(degree_filtration(exterior_module(2)),
                       degree_filtration(exterior_module(1)))
    r = bideform(bf)
    assert verify_2d(r)
    iso = canonical_biroundtrip_iso(bf)
    assert iso.certificate.passed


def test_single_component_rep():
    # no generators at all: one bosonic component, empty Q families
    bf = tensor_module(trivial_filtration(exterior_module(0)),
                       trivial_filtration(exterior_module(0)))
    assert bf.total_dim() == 1 and bf.dim(0, 0) == 1
    r = bideform(bf)
    assert verify_2d(r)
    back = biquotient(r)
    assert check_bifiltered_module(back)
    assert back.total_dim() == 1


def test_one_dim_stable_component_with_generators_fails():
    # with generators present, Q = 0 on a stable line cannot satisfy
    # {Q,Q} = 2H because the stabilized shift is the identity
    plus = CliffordAlgebra(1)
    minus = CliffordAlgebra(0)
    zero = Matrix.zeros(1, 1)
    r = BiGradedRep(plus, minus,
                    [[1, 1], [1, 1], [1, 1]],
                    {(0, 0): Matrix.identity(1), (0, 1): Matrix.identity(1)},
                    {},
                    [{(m, n): zero for m in range(3) for n in range(2)}],
                    [])
    cert = verify_2d(r)
    assert not cert
    assert cert.witness["kind"] == "plus_anticommutator"


def test_biquotient_scaled_shells():
    bf = tensor_module(degree_filtration(exterior_module(1)),
                       degree_filtration(exterior_module(1)))
    r = bideform(bf)
    out = biquotient(r, shell_plus=2, shell_minus=Fraction(1, 3))
    assert check_bifiltered_module(out)
    assert out.plus_algebra.gram == r.plus_algebra.gram.scale(2)
    assert out.minus_algebra.gram == r.minus_algebra.gram.scale(Fraction(1, 3))
    with pytest.raises(ValueError):
        biquotient(r, shell_plus=0)
    with pytest.raises(ValueError):
        biquotient(r, shell_minus=-1)


def test_membership_identities_random():
    bf = tensor_module(degree_filtration(exterior_module(2)),
                       degree_filtration(exterior_module(1)))
    assert membership_identities(bideform(bf), samples=15, seed=3)


def test_random_tensor_suite():
    rng = random.Random(55)
    for _ in range(10):
        p = rng.randint(0, 2)
        q = rng.randint(0, 4 - p if p < 2 else 2)
        fp = random_filtration(exterior_module(p), rng)
        fm = random_filtration(exterior_module(q), rng)
        bf = tensor_module(fp, fm)
        if bf.total_dim() > 16:
            continue
        assert check_bifiltered_module(bf)
        r = bideform(bf)
        assert verify_2d(r)
        assert canonical_biroundtrip_iso(bf).certificate.passed


def test_verify_2d_mutation_rejected():
    rng = random.Random(6)
    bf = tensor_module(degree_filtration(exterior_module(1)),
                       degree_filtration(exterior_module(1)))
    base = bideform(bf)
    for _ in range(6):
        qp = [dict(per) for per in base.qp]
        keys = [k for k in qp[0] if qp[0][k].rows and qp[0][k].cols]
        key = keys[rng.randrange(len(keys))]
        m = qp[0][key]
        rows = [list(row) for row in m.entries]
        rows[rng.randrange(m.rows)][rng.randrange(m.cols)] += rng.choice([1, 2, -1])
        qp[0][key] = Matrix(m.rows, m.cols, rows)
        mutant = BiGradedRep(base.plus_algebra, base.minus_algebra, base.dims,
                             base.sp, base.sm, qp, base.qm)
        cert = verify_2d(mutant)
        assert not cert and cert.witness is not None
