"""Pauli algebra tests against the dense-matrix oracle."""

import random

import numpy as np
import pytest

from topsub.pauli_core import (
    ONE,
    PauliOperator,
    PhaseRoot,
    QuditSystem,
    SystemMismatchError,
    parse_operator,
)

from .oracles import dense_matrix, mats_equal, phase_root_value


def qubit():
    return QuditSystem([("q", 2)])


def ququart():
    return QuditSystem([("q", 4)])


def small_mixed():
    # total dimension 2*4*... keep <= 16 for the dense oracle
    return QuditSystem([("a", 2), ("b", 4)])


def test_zx_commutation_qubit():
    s = qubit()
    zx = s.z("q") * s.x("q")
    xz = s.x("q") * s.z("q")
    # Z X = w X Z with w = -1 on a qubit.
    assert zx == xz.scaled(PhaseRoot(1, 2))
    assert mats_equal(dense_matrix(zx), dense_matrix(s.z("q")) @ dense_matrix(s.x("q")))


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_zx_commutation_general(d):
    s = QuditSystem([("q", d)])
    left = s.z("q") * s.x("q")
    right = (s.x("q") * s.z("q")).scaled(PhaseRoot(1, d))
    assert left == right


def test_identity_multiplication():
    s = small_mixed()
    p = s.x("a") * s.z("b", 3)
    assert s.identity() * p == p
    assert p * p.inverse() == s.identity()


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_y_power_is_identity(d):
    s = QuditSystem([("q", d)])
    y = s.y("q")
    assert (y ** d).is_identity()
    assert mats_equal(np.linalg.matrix_power(dense_matrix(y), d), np.eye(d))


def test_y_matches_definition_on_ququart():
    s = ququart()
    y = s.y("q")
    # sqrt(i) X^dagger Z^dagger
    expect = (s.x("q").dagger() * s.z("q").dagger()).scaled(PhaseRoot(1, 8))
    assert y == expect


def test_xyz_cyclic_commutation():
    s = ququart()
    x, y, z = s.x("q"), s.y("q"), s.z("q")
    w = PhaseRoot(1, 4)
    assert x * y == (y * x).scaled(w)
    assert y * z == (z * y).scaled(w)
    assert z * x == (x * z).scaled(w)


def random_pauli(rng, system):
    paulis = {}
    for s in system.sites:
        d = system.dim_of[s]
        paulis[s] = (rng.randrange(d), rng.randrange(d))
    return PauliOperator(system, rng.randrange(system.phase_modulus), paulis)


@pytest.mark.parametrize("dims", [[2, 2], [4, 2], [3, 4], [2, 2, 4]])
def test_multiplication_against_dense(dims):
    system = QuditSystem([(f"q{i}", d) for i, d in enumerate(dims)])
    rng = random.Random(sum(dims))
    for _ in range(25):
        p, q = random_pauli(rng, system), random_pauli(rng, system)
        assert mats_equal(dense_matrix(p * q), dense_matrix(p) @ dense_matrix(q))
        assert mats_equal(dense_matrix(p.dagger()), dense_matrix(p).conj().T)


def test_normal_form_uniqueness_against_dense():
    """Operators with equal matrices have identical normal forms."""
    system = QuditSystem([("a", 2), ("b", 4)])
    rng = random.Random(11)
    seen = {}
    for _ in range(60):
        ops = [random_pauli(rng, system) for _ in range(3)]
        acc = system.identity()
        for o in ops:
            acc = acc * o
        key = dense_matrix(acc).round(8).tobytes()
        if key in seen:
            assert seen[key] == acc
        seen[key] = acc


def test_commutator_phase_examples():
    s2 = qubit()
    assert s2.z("q").commutator_phase(s2.x("q")) == PhaseRoot(1, 2)
    s4 = ququart()
    # Phi_X(Z) on an N=4 qudit is e^{-2 pi i / 4} = -i.
    assert s4.x("q").commutator_phase(s4.z("q")) == PhaseRoot(-1, 4)
    # Disjoint supports commute.
    m = small_mixed()
    assert m.x("a").commutator_phase(m.z("b")).is_one()


def test_commutator_phase_consistency_random():
    """commutator_phase equals the phase of P Q P^dagger Q^dagger."""
    system = QuditSystem([("a", 2), ("b", 4), ("c", 3)])
    rng = random.Random(2024)
    for _ in range(1000):
        p, q = random_pauli(rng, system), random_pauli(rng, system)
        chain = p * q * p.dagger() * q.dagger()
        scalar = chain.scalar_part()
        assert scalar is not None
        assert scalar == p.commutator_phase(q)
        # Antisymmetry.
        assert (p.commutator_phase(q) * q.commutator_phase(p)).is_one()


def test_commutator_bilinear():
    system = QuditSystem([("a", 4), ("b", 6)])
    rng = random.Random(5)
    for _ in range(50):
        p, q, r = (random_pauli(rng, system) for _ in range(3))
        lhs = p.commutator_phase(q * r)
        rhs = p.commutator_phase(q) * p.commutator_phase(r)
        assert lhs == rhs


def test_operator_order():
    s4 = ququart()
    assert s4.x("q").operator_order() == 4
    assert s4.identity().operator_order() == 1
    s3 = QuditSystem([("q", 3)])
    w_id = s3.scalar(PhaseRoot(1, 3))
    assert w_id.operator_order() == 3
    # Verified against repeated multiplication.
    acc = w_id
    k = 1
    while not acc.is_identity():
        acc = acc * w_id
        k += 1
    assert k == 3
    assert s4.y("q").operator_order() == 4


def test_order_against_dense_random():
    system = QuditSystem([("a", 4), ("b", 2)])
    rng = random.Random(17)
    for _ in range(20):
        p = random_pauli(rng, system)
        k = p.operator_order()
        m = dense_matrix(p)
        assert mats_equal(np.linalg.matrix_power(m, k), np.eye(m.shape[0]))
        for j in range(1, k):
            if mats_equal(np.linalg.matrix_power(m, j), np.eye(m.shape[0])):
                pytest.fail(f"order overestimated: {j} < {k}")


def test_system_mismatch():
    a, b = qubit(), ququart()
    with pytest.raises(SystemMismatchError):
        a.x("q") * b.x("q")


def test_vector_round_trip():
    system = QuditSystem([("a", 2), ("b", 4), ("c", 3)])
    rng = random.Random(9)
    for _ in range(20):
        p = random_pauli(rng, system)
        q = system.from_vector(p.to_vector(), p.phase)
        assert q == p


def test_render_parse_round_trip():
    system = QuditSystem([((0, 0, "eh"), 4), ((0, 1, "ev"), 2)])
    rng = random.Random(13)
    for _ in range(30):
        p = random_pauli(rng, system)
        assert parse_operator(system, p.render()) == p
    assert parse_operator(system, "I") == system.identity()


def test_phase_root_algebra():
    i = PhaseRoot(1, 4)
    assert (i * i) == PhaseRoot(1, 2)
    assert (i ** 4).is_one()
    assert i.conjugate() == PhaseRoot(3, 4)
    assert np.isclose(phase_root_value(i), 1j)
    assert PhaseRoot(2, 8) == PhaseRoot(1, 4)
    assert repr(PhaseRoot(1, 2)) == "-1"
