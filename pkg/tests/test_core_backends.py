"""Parity between the compiled Howell kernel and the pure-Python fallback.

The Howell form is canonical, so both backends must return identical H for
the same input; the transform may differ but must satisfy H = T @ A mod M.
"""

import random

import numpy as np
import pytest

from topsub._core import BACKEND, howell_py

if BACKEND != "compiled":
    pytest.skip("compiled backend unavailable", allow_module_level=True)

from topsub._core import howell_cy


def random_matrix(rng, r, c, M):
    return np.array([[rng.randrange(M) for _ in range(c)] for _ in range(r)],
                    dtype=np.int64)


@pytest.mark.parametrize("M", [2, 3, 4, 6, 8, 12, 16, 30])
def test_backend_parity(M):
    rng = random.Random(M)
    for trial in range(15):
        r, c = rng.randrange(1, 8), rng.randrange(1, 8)
        a = random_matrix(rng, r, c, M)
        h1, t1 = howell_py.howell_transform(a, M)
        h2, t2 = howell_cy.howell_transform(a, M)
        assert np.array_equal(h1, h2), (a, M)
        assert np.array_equal((t1 @ a) % M, h1)
        assert np.array_equal((t2 @ a) % M, h2)


@pytest.mark.parametrize("M", [2, 4, 9, 12])
def test_solver_parity(M):
    rng = random.Random(100 + M)
    for trial in range(20):
        r, c = rng.randrange(1, 6), rng.randrange(1, 6)
        a = random_matrix(rng, r, c, M)
        h = howell_py.howell(a, M)
        coeffs = np.array([rng.randrange(M) for _ in range(h.shape[0])],
                          dtype=np.int64)
        target = (coeffs @ h) % M if h.shape[0] else np.zeros(c, dtype=np.int64)
        s1 = howell_py.solve_upper(h, M, target)
        s2 = howell_cy.solve_upper(h, M, target)
        assert s1 is not None and s2 is not None
        assert np.array_equal((s1 @ h) % M, target)
        assert np.array_equal((s2 @ h) % M, target)
        # a vector outside the span must be rejected by both
        out = target.copy()
        out[rng.randrange(c)] += 1
        r1 = howell_py.solve_upper(h, M, out)
        r2 = howell_cy.solve_upper(h, M, out)
        assert (r1 is None) == (r2 is None)
        if r1 is not None:
            assert np.array_equal((r1 @ h) % M, out % M)
            assert np.array_equal((r2 @ h) % M, out % M)
