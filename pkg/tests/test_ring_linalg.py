"""Tests for exact residue-ring linear algebra, checked against brute force.

The independent oracle throughout is exhaustive enumeration: spans are closed
by breadth-first addition, kernels by trying every domain element.  All
instances are kept below a few thousand elements so the oracle stays exact.
"""

import itertools
import random
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topsub.ring_linalg import (
    GroupBasis,
    ModVector,
    ProfileMismatchError,
    QuotientStructure,
    SubgroupViolationError,
    canonical_basis,
    enumerate_span,
    express_in,
    kernel,
    quotient_order,
    solve_membership,
    span_intersection,
    span_sum,
    zero_vector,
)


def brute_span(vectors, moduli):
    """All elements of the additive span, by BFS closure."""
    seen = {(0,) * len(moduli)}
    frontier = [(0,) * len(moduli)]
    vecs = [tuple(v.coords) for v in vectors]
    while frontier:
        cur = frontier.pop()
        for v in vecs:
            nxt = tuple((a + b) % m for a, b, m in zip(cur, v, moduli))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def random_vectors(rng, moduli, count):
    return [
        ModVector(tuple(rng.randrange(m) for m in moduli), moduli)
        for _ in range(count)
    ]


MODULI_CASES = [
    (4,),
    (2, 3),
    (4, 4),
    (2, 4, 8),
    (6, 4),
    (3, 9),
    (2, 2, 2, 2),
    (12,),
    (16, 2),
    (5, 25),
]


def test_trivial_examples():
    b = canonical_basis([ModVector((2,), (4,))])
    assert b.order == 2
    full = canonical_basis([ModVector((1, 0), (2, 3)), ModVector((0, 1), (2, 3))])
    assert full.order == 6


def test_derived_z4_example():
    moduli = (4, 4)
    vecs = [ModVector((2, 2), moduli), ModVector((0, 2), moduli)]
    b = canonical_basis(vecs)
    assert b.order == len(brute_span(vecs, moduli))


@pytest.mark.parametrize("moduli", MODULI_CASES)
def test_order_matches_enumeration(moduli):
    rng = random.Random(hash(moduli) & 0xFFFF)
    for trial in range(8):
        vecs = random_vectors(rng, moduli, rng.randrange(1, 5))
        b = canonical_basis(vecs)
        span = brute_span(vecs, moduli)
        assert b.order == len(span)
        # The generators really generate the same span.
        assert brute_span(list(b.generators), moduli) == span


@pytest.mark.parametrize("moduli", MODULI_CASES)
def test_canonicality(moduli):
    """Any regenerating set of the same span canonicalizes identically."""
    rng = random.Random(0xC0DE + prod(moduli))
    for trial in range(6):
        vecs = random_vectors(rng, moduli, rng.randrange(1, 5))
        b1 = canonical_basis(vecs)
        elements = list(brute_span(vecs, moduli))
        rng.shuffle(elements)
        regen = [ModVector(e, moduli) for e in elements[: max(3, len(elements) // 2)]]
        regen += [ModVector(e, moduli) for e in elements]  # full set, scrambled
        b2 = canonical_basis(regen)
        assert b1 == b2
        assert [g.coords for g in b1.generators] == [g.coords for g in b2.generators]


def test_enumerate_span_unique_coefficients():
    moduli = (4, 6)
    rng = random.Random(7)
    vecs = random_vectors(rng, moduli, 3)
    b = canonical_basis(vecs)
    elems = enumerate_span(b)
    assert len(elems) == b.order
    assert len({e.coords for e in elems}) == b.order


def test_membership_trivial_cases():
    b = canonical_basis([ModVector((2,), (4,))])
    assert solve_membership(ModVector((3,), (4,)), b) is None
    c = solve_membership(ModVector((0,), (4,)), b)
    assert c is not None
    assert all(ci * 2 % 4 == 0 for ci in c)


@pytest.mark.parametrize("moduli", [(2, 4), (3, 9), (4, 6)])
def test_membership_round_trip(moduli):
    rng = random.Random(99)
    for trial in range(10):
        vecs = random_vectors(rng, moduli, 3)
        b = canonical_basis(vecs)
        target = zero_vector(moduli)
        for v in vecs:
            target = target + rng.randrange(8) * v
        c = solve_membership(target, b)
        assert c is not None
        acc = zero_vector(moduli)
        for ci, g in zip(c, b.generators):
            acc = acc + ci * g
        assert acc.coords == target.coords


@pytest.mark.parametrize("moduli", [(4,), (2, 3), (4, 4), (2, 4)])
def test_membership_soundness_completeness(moduli):
    rng = random.Random(5)
    vecs = random_vectors(rng, moduli, 2)
    b = canonical_basis(vecs)
    span = brute_span(vecs, moduli)
    for coords in itertools.product(*[range(m) for m in moduli]):
        inside = solve_membership(ModVector(coords, moduli), b) is not None
        assert inside == (coords in span)


def test_express_in_reports_original_coefficients():
    moduli = (4, 8)
    rng = random.Random(3)
    vecs = random_vectors(rng, moduli, 4)
    target = zero_vector(moduli)
    for v in vecs:
        target = target + rng.randrange(6) * v
    c = express_in(vecs, target)
    assert c is not None
    acc = zero_vector(moduli)
    for ci, v in zip(c, vecs):
        acc = acc + ci * v
    assert acc.coords == target.coords


def test_kernel_trivial_cases():
    k = kernel([ModVector((2,), (4,))], (4,))
    assert sorted(e.coords for e in enumerate_span(k)) == [(0,), (2,)]
    k = kernel([ModVector((0,), (6,))], (6,))
    assert k.order == 6


@pytest.mark.parametrize("seed", range(6))
def test_kernel_matches_brute_force(seed):
    rng = random.Random(seed)
    dom = rng.choice([(4, 4, 4), (2, 4, 3), (6, 2, 2), (3, 3, 9)])
    rows = []
    for _ in range(rng.randrange(1, 4)):
        out_mod = rng.choice([2, 3, 4, 6])
        # Coefficient for a Z_d coordinate must be a multiple of
        # out_mod/gcd(out_mod, d) so the map is a homomorphism.
        coords = []
        for d in dom:
            step = out_mod // gcd(out_mod, d)
            coords.append(rng.randrange(out_mod // step) * step)
        rows.append(ModVector(tuple(coords), (out_mod,) * len(dom)))
    k = kernel(rows, dom)
    expected = set()
    for x in itertools.product(*[range(m) for m in dom]):
        if all(
            sum(xi * ri for xi, ri in zip(x, row.coords)) % row.moduli[0] == 0
            for row in rows
        ):
            expected.add(x)
    got = {e.coords for e in enumerate_span(k)}
    assert got == expected
    # Kernel-image duality |ker| * |im| = |domain|.
    images = []
    out_moduli = tuple(row.moduli[0] for row in rows)
    for i, m in enumerate(dom):
        unit = [0] * len(dom)
        unit[i] = 1
        images.append(
            ModVector(tuple(r.coords[i] for r in rows), out_moduli)
        )
    im = canonical_basis(images, out_moduli)
    assert k.order * im.order == prod(dom)


def test_kernel_empty_domain():
    k = kernel([], ())
    assert k.order == 1


def test_quotient_order_and_errors():
    big = canonical_basis([ModVector((1,), (4,))])
    small = canonical_basis([ModVector((2,), (4,))])
    assert quotient_order(big, small) == 2
    assert quotient_order(big, big) == 1
    with pytest.raises(SubgroupViolationError):
        quotient_order(small, big)


def test_profile_mismatch_raises():
    with pytest.raises(ProfileMismatchError):
        canonical_basis([ModVector((1,), (4,)), ModVector((1, 0), (4, 4))])
    a = canonical_basis([ModVector((1,), (4,))])
    with pytest.raises(ProfileMismatchError):
        solve_membership(ModVector((1,), (2,)), a)


@pytest.mark.parametrize("moduli", [(4, 4), (2, 4), (3, 9), (2, 6)])
def test_span_intersection(moduli):
    rng = random.Random(31 + prod(moduli))
    for trial in range(5):
        va = random_vectors(rng, moduli, 2)
        vb = random_vectors(rng, moduli, 2)
        inter = span_intersection(canonical_basis(va), canonical_basis(vb))
        expected = brute_span(va, moduli) & brute_span(vb, moduli)
        assert {e.coords for e in enumerate_span(inter)} == expected


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_sum_contains_both(data):
    moduli = data.draw(st.sampled_from([(4,), (2, 4), (3, 3), (6, 2)]))
    draw_vec = st.tuples(*[st.integers(0, m - 1) for m in moduli])
    va = [ModVector(data.draw(draw_vec), moduli) for _ in range(2)]
    vb = [ModVector(data.draw(draw_vec), moduli) for _ in range(2)]
    a, b = canonical_basis(va), canonical_basis(vb)
    s = span_sum(a, b)
    for v in va + vb:
        assert s.contains(v)
    assert s.order % a.order == 0 and s.order % b.order == 0


def test_quotient_structure_cyclic_decomposition():
    moduli = (4, 4)
    big = canonical_basis(
        [ModVector((1, 0), moduli), ModVector((0, 1), moduli)])
    small = canonical_basis([ModVector((2, 0), moduli)])
    q = QuotientStructure(big, small)
    assert sorted(q.orders) == [2, 4]
    assert q.order == 8
    # Coordinates are a homomorphism onto the abstract quotient.
    seen = set()
    for e in enumerate_span(big):
        seen.add(q.coords_of(e))
    assert len(seen) == 8
    for e in enumerate_span(small):
        assert all(c == 0 for c in q.coords_of(e))
    # Representative of each class maps back to its own coordinates.
    for coords in seen:
        assert q.coords_of(q.rep_of(coords)) == coords


@pytest.mark.parametrize("seed", range(4))
def test_quotient_structure_random(seed):
    rng = random.Random(seed + 77)
    moduli = rng.choice([(4, 4), (2, 8), (3, 9), (2, 4, 2)])
    vb = random_vectors(rng, moduli, 3)
    big = canonical_basis(vb)
    sm_elems = rng.sample(list(brute_span(vb, moduli)), 2)
    small = canonical_basis([ModVector(e, moduli) for e in sm_elems])
    q = QuotientStructure(big, small)
    assert q.order == big.order // small.order
    classes = {}
    for e in enumerate_span(big):
        classes.setdefault(q.coords_of(e), set()).add(e.coords)
    assert len(classes) == q.order
    sizes = {len(v) for v in classes.values()}
    assert sizes == {small.order}


def test_kernel_rejects_ill_defined_map():
    with pytest.raises(ValueError):
        kernel([ModVector((1, 1, 1), (2, 2, 2))], (3, 3, 9))
