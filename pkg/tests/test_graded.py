import numpy as np
import pytest

from wlp.errors import DegreeError, GenerationFailed, NotFiniteLength, ShapeError
from wlp.graded import (
    GradedMap,
    HilbertFunction,
    ci_instance,
    coker_dims,
    expected_hilbert,
    free_dim,
    kernel_dims,
    phi_matrix,
    phi_rank,
    random_instance,
    scan_bounds,
)
from wlp.linalg import GF32003, rank
from wlp.poly import HomogPoly, monomial_basis, mult_matrix, num_monomials

P = 32003

X2 = HomogPoly(2, (1, 0, 0, 0, 0, 0))
XY = HomogPoly(2, (0, 1, 0, 0, 0, 0))
Y2 = HomogPoly(2, (0, 0, 0, 1, 0, 0))
Z2 = HomogPoly(2, (0, 0, 0, 0, 0, 1))


def monomial_quotient_dims(exponent_caps, top):
    """Brute-force Hilbert function of R modulo pure powers x^a, y^b, z^c."""
    a, b, c = exponent_caps
    dims = []
    for d in range(top + 1):
        dims.append(
            sum(
                1
                for (i, j, k) in monomial_basis(d)
                if i < a and j < b and k < c
            )
        )
    return dims


def test_free_dim_examples():
    assert free_dim((0,), 2) == 6
    assert free_dim((7, 2, 2, 2), 5) == 0 + 3 * 10
    assert free_dim((1, 0), 5) == 15 + 21
    assert free_dim((3,), 2) == 0


def test_expected_hilbert_examples():
    assert expected_hilbert((7, 2, 2, 2), (1, 0), 5) == 7
    assert expected_hilbert((7, 2, 2, 2), (1, 0), 0) == 1
    assert expected_hilbert((7, 2, 2, 2), (1, 0), -1) == 0
    with pytest.raises(ShapeError):
        expected_hilbert((1, 2), (1, 0), 3)


def test_scan_bounds_examples():
    assert scan_bounds((7, 2, 2, 2), (1, 0)) == (0, 9)
    assert scan_bounds((8, 2, 2, 2, 2), (1, 0, 0)) == (0, 12)


def test_graded_map_validation():
    with pytest.raises(ShapeError):
        GradedMap((1, 1), (0,), ((HomogPoly.zero(1), HomogPoly.zero(1)),))
    with pytest.raises(DegreeError):
        GradedMap((2, 2, 2), (0,), ((X2, X2, HomogPoly.zero(1)),))


def test_phi_matrix_koszul_squares():
    m = ci_instance(X2, Y2, Z2)
    A = phi_matrix(m, 2)
    assert A.shape == (6, 3)
    assert rank(A) == 3
    # below the smallest target twist the matrix has no rows
    assert phi_matrix(m, -1).shape == (0, 0)


def test_phi_matrix_block_structure(k1_map):
    d = 5
    m = k1_map
    A = phi_matrix(m, d)
    roff = 0
    for j, b in enumerate(m.target):
        coff = 0
        rd = num_monomials(d - b)
        for i, a in enumerate(m.source):
            cd = num_monomials(d - a)
            block = A[roff : roff + rd, coff : coff + cd]
            expected = mult_matrix(m.entries[j][i], d - a, m.field)
            assert (block == expected).all()
            coff += cd
        roff += rd


def test_coker_dims_koszul_squares_matches_monomial_oracle():
    m = ci_instance(X2, Y2, Z2)
    h = coker_dims(m)
    oracle = monomial_quotient_dims((2, 2, 2), 3)
    assert h.offset == 0
    assert list(h.dims) == oracle == [1, 3, 3, 1]


def test_coker_dims_unstable_k1_shape(k1_map):
    h = coker_dims(k1_map)
    assert h.offset == 0
    assert h.dims == (1, 4, 6, 7, 7, 7, 7, 6, 4, 1)


def test_coker_dims_unstable_k0_shape(k0_map):
    h = coker_dims(k0_map)
    assert h.offset == 0
    assert h.dims == (2, 7, 11, 14, 16, 17, 17, 17, 16, 14, 11, 7, 2)


def test_coker_dims_matches_expected_everywhere(k1_map):
    m = k1_map
    h = coker_dims(m)
    lo, top = scan_bounds(m.source, m.target)
    for d in range(lo - 2, top + 3):
        assert h.value(d) == expected_hilbert(m.source, m.target, d)
    assert h.total == sum(
        expected_hilbert(m.source, m.target, d) for d in range(lo, top + 1)
    )


def test_coker_dims_rejects_non_regular_sequence():
    # x^2, xy, y^2 vanish together at [0:0:1]; the quotient is not finite
    m = ci_instance(X2, XY, Y2)
    with pytest.raises(NotFiniteLength):
        coker_dims(m)


def test_kernel_dims_examples(k1_map):
    assert kernel_dims(k1_map, 4) == 0
    assert kernel_dims(k1_map, 5) == 1
    assert kernel_dims(k1_map, 1) == 0  # below min source twist


def test_kernel_dims_monotone(k1_map):
    vals = [kernel_dims(k1_map, t) for t in range(0, 12)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_random_instance_deterministic():
    a = random_instance((2, 2, 2), (0,), np.random.default_rng(3))
    b = random_instance((2, 2, 2), (0,), np.random.default_rng(3))
    assert a.entries == b.entries


def test_random_instance_infeasible_pattern():
    with pytest.raises(GenerationFailed):
        random_instance((1, 1, 1), (5,), np.random.default_rng(0))


def test_random_instance_degenerate_but_plausible_pattern():
    # columns and rows all admit nonzero entries, yet generic cokernels
    # still fail the finite-length certificate
    with pytest.raises(GenerationFailed):
        random_instance((0, 0, 0, 3), (0, 2), np.random.default_rng(0))


def test_random_instance_shape_check():
    with pytest.raises(ShapeError):
        random_instance((1, 1), (0,), np.random.default_rng(0))


def test_ci_instance_linear_forms():
    rng = np.random.default_rng(8)
    from wlp.poly import random_homog

    m = ci_instance(*(random_homog(1, rng) for _ in range(3)))
    h = coker_dims(m)
    assert h.offset == 0 and h.dims == (1,)


def test_ci_instance_rejects_constants():
    with pytest.raises(ValueError):
        ci_instance(HomogPoly(0, (1,)), X2, Y2)


def test_hilbert_function_trimming_and_values():
    h = HilbertFunction.from_values(2, [0, 0, 1, 5, 0, 0])
    assert h.offset == 4 and h.dims == (1, 5)
    assert h.value(4) == 1 and h.value(3) == 0 and h.value(100) == 0
    z = HilbertFunction.from_values(3, [0, 0])
    assert z.is_zero and z.min_deg is None
    with pytest.raises(ValueError):
        HilbertFunction(0, (0, 1))


def test_zero_cokernel_instance():
    # three generic constants are surjective onto one generator
    m = random_instance((0, 0, 0), (0,), np.random.default_rng(12))
    h = coker_dims(m)
    assert h.is_zero


def test_phi_rank_cache_consistency(k1_map):
    d = 6
    direct = rank(phi_matrix(k1_map, d), GF32003)
    assert phi_rank(k1_map, d) == direct
