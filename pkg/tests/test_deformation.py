"""Deformation to graded off-shell data and the quotient back."""

import random
from fractions import Fraction

import pytest

from cliffilt.deformation import (
    GradedSpace,
    OffShellRep,
    canonical_roundtrip_iso,
    deform,
    enveloping_quotient_check,
    quotient_at,
    verify_offshell,
)
from cliffilt.exactalg import Matrix
from cliffilt.invariants import gr_dimensions, random_filtration
from cliffilt.supermodule import (
    check_filtration,
    check_supermodule,
    degree_filtration,
    exterior_module,
    hodge_filtration,
    irreducible_module,
    trivial_filtration,
)


def test_deform_shapes_and_relations():
    f = degree_filtration(exterior_module(3))
    r = deform(f)
    assert r.dims == tuple(f.level(p).dim for p in range(r.top_degree + 1))
    assert verify_offshell(r)
    m = r.top_degree
    assert len(r.h_maps) == max(m - 1, 0)
    for p, h in enumerate(r.h_maps):
        assert (h.rows, h.cols) == (r.dims[p], r.dims[p + 2])


def test_fetchers_stabilize():
    r = deform(degree_filtration(exterior_module(3)))
    m = r.top_degree
    assert r.dim_at(-1) == 0 and r.dim_at(-2) == 0
    assert r.dim_at(m + 2) == r.dim_at(m)
    assert r.h_at(m) == Matrix.identity(r.dim_at(m))
    assert r.h_at(m - 1) == Matrix.identity(r.dim_at(m - 1))
    for i in range(r.algebra.n):
        assert r.q_at(i, m + 2) == r.q_at(i, m)
        assert r.q_at(i, m + 1) == r.q_at(i, m - 1)


def test_h_bijective_in_stable_range():
    # the two top coordinate maps between consecutive same-parity flags
    for f in (degree_filtration(exterior_module(3)),
              hodge_filtration(exterior_module(4))):
        m = deform(f).top_degree
        for p in (m - 1, m):
            below = f.level(p)
            above = f.level(p + 2)
            h = above.coordinate_matrix(below.basis)
            assert h.rows == h.cols == below.dim
            assert h.rank() == h.rows


def test_quotient_shell_one_roundtrip_named():
    for f in (degree_filtration(exterior_module(4)),
              hodge_filtration(exterior_module(4)),
              trivial_filtration(exterior_module(2))):
        iso = canonical_roundtrip_iso(f)
        assert iso.certificate.passed


def test_quotient_shell_zero_gives_gr_dims():
    f = hodge_filtration(exterior_module(4))
    out = quotient_at(deform(f), 0)
    assert isinstance(out, GradedSpace)
    assert out.dims == tuple(gr_dimensions(f))


def test_quotient_scaled_shell():
    f = degree_filtration(exterior_module(2))
    on = quotient_at(deform(f), Fraction(2, 3))
    assert on.shell == Fraction(2, 3)
    # the output algebra's Gram is the scaled one and relations close on it
    assert on.module.algebra.gram == f.module.algebra.gram.scale(Fraction(2, 3))
    assert check_supermodule(on.module)
    assert check_filtration(on.filtration)


def test_quotient_negative_shell_rejected():
    r = deform(degree_filtration(exterior_module(1)))
    with pytest.raises(ValueError):
        quotient_at(r, -1)


def test_roundtrip_random_suite():
    rng = random.Random(42)
    modules = [exterior_module(n) for n in (1, 2, 3)]
    modules += [irreducible_module(n) for n in (1, 2, 3, 4)]
    for k in range(25):
        f = random_filtration(modules[k % len(modules)], rng)
        iso = canonical_roundtrip_iso(f)
        assert iso.certificate.passed
        r = deform(f)
        assert verify_offshell(r)
        # re-deforming the shell-1 quotient reproduces the graded dims
        again = deform(quotient_at(r, 1).filtration)
        assert again.dims == r.dims


def test_deform_normalized_bottom():
    # random filtrations are normalized, so degree 0 or 1 is nonzero
    rng = random.Random(9)
    for _ in range(10):
        f = random_filtration(exterior_module(2), rng)
        r = deform(f)
        assert r.dims[0] > 0 or r.dims[1] > 0


def test_single_entry_mutations_rejected():
    rng = random.Random(77)
    f = degree_filtration(exterior_module(3))
    base = deform(f)
    rejected = 0
    for _ in range(12):
        h_maps = [Matrix(h.rows, h.cols, [list(row) for row in h.entries])
                  for h in base.h_maps]
        q_maps = [[Matrix(q.rows, q.cols, [list(row) for row in q.entries])
                   for q in per] for per in base.q_maps]
        if h_maps and rng.random() < 0.5:
            target = h_maps[rng.randrange(len(h_maps))]
        else:
            per = q_maps[rng.randrange(len(q_maps))]
            target = per[rng.randrange(len(per))]
        if not target.rows or not target.cols:
            continue
        i = rng.randrange(target.rows)
        j = rng.randrange(target.cols)
        rows = [list(row) for row in target.entries]
        rows[i][j] += rng.choice([1, -1, 2])
        mutated = Matrix(target.rows, target.cols, rows)
        h_maps = [mutated if m is target else m for m in h_maps]
        q_maps = [[mutated if m is target else m for m in per] for per in q_maps]
        cert = verify_offshell(OffShellRep(base.algebra, base.dims, h_maps, q_maps))
        assert not cert and cert.witness is not None
        rejected += 1
    assert rejected >= 10


def test_offshell_constructor_validates_shapes():
    r = deform(degree_filtration(exterior_module(2)))
    with pytest.raises(ValueError):
        OffShellRep(r.algebra, r.dims, list(r.h_maps)[:-1] if r.h_maps else [],
                    [list(per) for per in r.q_maps])
    with pytest.raises(ValueError):
        OffShellRep(r.algebra, (3,), [], [[]])


def test_enveloping_quotient_small():
    assert enveloping_quotient_check(1, 4, kernel_samples=20, seed=0)
    assert enveloping_quotient_check(2, 4, kernel_samples=20, seed=1)
    with pytest.raises(ValueError):
        enveloping_quotient_check(2, 2)


def test_deform_requires_valid_filtration():
    from cliffilt.exactalg import Subspace
    from cliffilt.supermodule import SuperFiltration

    m = exterior_module(2)
    bad = SuperFiltration(m, [Subspace.span(2, [[1, 0]]), Subspace.full(2)],
                          [Subspace.zero(2), Subspace.full(2)])
    with pytest.raises(ValueError):
        deform(bad)
