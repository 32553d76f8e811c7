import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _frozen as frozen
from entropygames.linalg import (
    Matrix,
    ReducibleMatrixError,
    Vector,
    certify_radius_lower,
    certify_radius_upper,
    gelfand_bounds,
    mat_mul,
    mat_vec,
    one_norm,
    perron_vector,
    rat,
    spectral_radius,
    strongly_connected_components,
    vec_mat,
)

RUNNING = Matrix(((2, 1, 1), (1, 0, 1), (1, 1, 2)))
RUNNING_RHO = (3 + math.sqrt(17)) / 2


def test_matrix_validation():
    with pytest.raises(ValueError):
        Matrix(((1, 2), (3,)))
    with pytest.raises(ValueError):
        Matrix(())
    m = Matrix(((Fraction(1, 2), 2),))
    assert m.rows == 1 and m.cols == 2
    assert m.data[0][0] == Fraction(1, 2)


def test_matrix_flags():
    assert RUNNING.is_nonnegative
    assert not RUNNING.is_positive
    assert Matrix(((1, 2), (3, 4))).is_positive
    assert not Matrix(((-1,),)).is_nonnegative


def test_vector_orientation():
    v = Vector((1, 2), orientation="row")
    assert len(v) == 2 and v[1] == 2
    with pytest.raises(ValueError):
        Vector((1,), orientation="diagonal")


def test_mat_mul_running_product():
    a = Matrix(((1, 1, 0), (1, 0, 1), (0, 1, 1)))
    e = Matrix(((1, 0, 0), (1, 1, 1), (0, 0, 1)))
    assert mat_mul(a, e) == RUNNING


def test_mat_mul_identity_and_dot():
    m = Matrix(((5, 6), (7, 8)))
    assert mat_mul(Matrix.identity(2), m) == m
    assert mat_mul(Matrix(((1, 2),)), Matrix(((3,), (4,)))) == Matrix(((11,),))
    with pytest.raises(ValueError):
        mat_mul(Matrix(((1, 2),)), Matrix(((1, 2),)))


def test_mat_vec_and_vec_mat():
    m = Matrix(((1, 2), (3, 4)))
    assert tuple(mat_vec(m, (1, 1))) == (Fraction(3), Fraction(7))
    assert tuple(vec_mat((1, 1), m)) == (Fraction(4), Fraction(6))


def test_one_norm():
    assert one_norm(RUNNING) == 10
    assert one_norm(Matrix(((-1, 2),))) == 3
    assert one_norm((1, -2, 3)) == 6
    assert one_norm(Vector((Fraction(1, 2), Fraction(1, 2)))) == 1


def test_spectral_radius_running():
    est = spectral_radius(RUNNING, Fraction(1, 10**10))
    assert est.converged
    assert float(est.lower) <= RUNNING_RHO <= float(est.upper)
    assert est.upper - est.lower <= Fraction(1, 10**9)
    assert est.value == pytest.approx(RUNNING_RHO, abs=1e-9)


def test_spectral_radius_trivia():
    assert spectral_radius(Matrix.identity(4)).value == pytest.approx(1.0, abs=1e-9)
    assert spectral_radius(Matrix(((1, 1), (1, 1)))).value == pytest.approx(2.0, abs=1e-9)
    assert spectral_radius(Matrix(((0, 1), (1, 0)))).value == pytest.approx(1.0, abs=1e-9)


def test_spectral_radius_reducible_paths():
    nilpotent = spectral_radius(Matrix(((0, 1), (0, 0))))
    assert nilpotent.lower == 0
    assert nilpotent.upper <= Fraction(1, 10**9)
    triangular = spectral_radius(Matrix(((2, 5), (0, 3))))
    assert float(triangular.lower) <= 3.0 <= float(triangular.upper)
    assert triangular.upper - triangular.lower <= Fraction(1, 10**9)


def test_spectral_radius_rejects_bad_input():
    with pytest.raises(ValueError):
        spectral_radius(Matrix(((1, 2, 3), (4, 5, 6))))
    with pytest.raises(ValueError):
        spectral_radius(Matrix(((-1,),)))


def test_certificates_exact():
    v = (1, 1, 1)
    # row sums are 4, 2, 4: the max bounds from above, the min from below
    assert certify_radius_upper(RUNNING, 4, v)
    assert not certify_radius_upper(RUNNING, Fraction(7, 2), v)
    assert certify_radius_lower(RUNNING, 2, v)
    assert not certify_radius_lower(RUNNING, Fraction(5, 2), v)
    with pytest.raises(ValueError):
        certify_radius_upper(RUNNING, 4, (1, 0, 1))
    with pytest.raises(ValueError):
        certify_radius_lower(RUNNING, 2, (0, 0, 0))


def test_certificate_witnesses_from_estimate():
    est = spectral_radius(RUNNING)
    assert certify_radius_upper(RUNNING, est.upper, est.witness_upper)
    assert certify_radius_lower(RUNNING, est.lower, est.witness_lower)


def test_perron_vector_running():
    v = perron_vector(RUNNING, Fraction(1, 10**10))
    expect = frozen.PERRON_RUNNING
    assert sum(v.entries) == 1
    for got, want in zip(v.entries, expect):
        assert float(got) == pytest.approx(want, abs=1e-8)
    # symmetry of the matrix forces v1 = v3
    assert abs(v.entries[0] - v.entries[2]) < Fraction(1, 10**8)


def test_perron_vector_flat():
    v = perron_vector(Matrix(((1, 1), (1, 1))))
    assert [float(x) for x in v.entries] == pytest.approx([0.5, 0.5], abs=1e-10)


def test_perron_vector_reducible_error():
    with pytest.raises(ReducibleMatrixError) as exc:
        perron_vector(Matrix.identity(3))
    assert len(exc.value.components) == 3


def test_strongly_connected_components():
    # 0 -> 1 -> 0 is one block, 2 feeds into it but is its own block
    adjacency = [[1], [0], [0]]
    comps = strongly_connected_components(adjacency)
    assert sorted(sorted(c) for c in comps) == [[0, 1], [2]]


def test_gelfand_bounds_decrease_toward_radius():
    bounds = gelfand_bounds(RUNNING, doublings=6)
    assert all(b >= RUNNING_RHO - 1e-9 for b in bounds)
    assert bounds[-1] < bounds[0]
    # norm^(1/64) of the 64th power still carries a constant^(1/64) factor
    assert bounds[-1] <= RUNNING_RHO * 1.05


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.randoms(use_true_random=False))
def test_enclosure_contains_numpy_radius(n, rng):
    entries = [[Fraction(rng.randint(0, 8), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
    m = Matrix(tuple(tuple(row) for row in entries))
    est = spectral_radius(m, Fraction(1, 10**8))
    reference = max(abs(np.linalg.eigvals(np.array(m.to_floats()))))
    assert float(est.lower) <= reference + 1e-6
    assert float(est.upper) >= reference - 1e-6
