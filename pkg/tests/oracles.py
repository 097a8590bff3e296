"""Shared brute-force oracles used by the test suite.

The dense-matrix oracle realizes generalized Pauli operators as explicit
complex matrices (for total dimension <= ~64), giving an implementation-
independent ground truth for products, phases and commutators.
"""

import numpy as np


def dense_x(d):
    m = np.zeros((d, d), dtype=complex)
    for a in range(d):
        m[(a + 1) % d, a] = 1.0
    return m


def dense_z(d):
    w = np.exp(2j * np.pi / d)
    return np.diag([w ** a for a in range(d)])


def dense_matrix(op):
    """Dense matrix of a PauliOperator (site order = system order)."""
    sysm = op.system
    total = np.array([[np.exp(2j * np.pi * op.phase.num / op.phase.den)]])
    for s in sysm.sites:
        d = sysm.dim_of[s]
        x, z = op.paulis.get(s, (0, 0))
        local = np.linalg.matrix_power(dense_x(d), x % d) @ \
            np.linalg.matrix_power(dense_z(d), z % d)
        total = np.kron(total, local)
    return total


def phase_root_value(ph):
    return np.exp(2j * np.pi * ph.num / ph.den)


def mats_equal(a, b, tol=1e-9):
    return np.allclose(a, b, atol=tol)
