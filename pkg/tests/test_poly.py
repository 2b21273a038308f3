import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wlp.linalg import GF32003, RATIONALS
from wlp.poly import (
    BinaryForm,
    HomogPoly,
    LineParam,
    binary_dim,
    binary_mult_matrix,
    line_is_valid,
    monomial_basis,
    mult_matrix,
    num_monomials,
    random_homog,
    random_line,
    restrict_to_line,
)

P = 32003


# --- independent symbolic oracles ------------------------------------------


def dict_mul(f: HomogPoly, g: HomogPoly, p=P):
    """Expand f*g monomial by monomial into a dict."""
    out = {}
    for mf, cf in zip(monomial_basis(f.degree), f.coeffs):
        if cf == 0:
            continue
        for mg, cg in zip(monomial_basis(g.degree), g.coeffs):
            if cg == 0:
                continue
            key = (mf[0] + mg[0], mf[1] + mg[1], mf[2] + mg[2])
            out[key] = (out.get(key, 0) + cf * cg) % p
    return {k: v for k, v in out.items() if v}


def poly_from_dict(d, degree):
    coeffs = [d.get(mon, 0) for mon in monomial_basis(degree)]
    return HomogPoly(degree, tuple(coeffs))


def bin_mul(u, v, p=P):
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            out[i + j] = (out[i + j] + a * b) % p
    return out


def small_poly(draw, degree, scale=20):
    n = num_monomials(degree)
    coeffs = draw(st.lists(st.integers(0, scale), min_size=n, max_size=n))
    return HomogPoly(degree, tuple(c % P for c in coeffs))


# --- monomial basis ----------------------------------------------------------


def test_monomial_basis_small_degrees():
    assert monomial_basis(0) == ((0, 0, 0),)
    assert monomial_basis(1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert monomial_basis(2) == (
        (2, 0, 0),
        (1, 1, 0),
        (1, 0, 1),
        (0, 2, 0),
        (0, 1, 1),
        (0, 0, 2),
    )
    assert monomial_basis(-1) == ()


def test_monomial_basis_counts_up_to_20():
    for d in range(21):
        basis = monomial_basis(d)
        assert len(basis) == num_monomials(d) == (d + 2) * (d + 1) // 2
        assert all(sum(mon) == d for mon in basis)
        assert sorted(basis, reverse=True) == list(basis)


def test_homog_poly_validation():
    with pytest.raises(ValueError):
        HomogPoly(2, (1, 2, 3))
    assert HomogPoly.zero(-4).coeffs == ()
    assert HomogPoly.zero(1).is_zero


# --- multiplication matrices -------------------------------------------------


def test_mult_matrix_by_z_degree_zero():
    z = HomogPoly(1, (0, 0, 1))
    M = mult_matrix(z, 0)
    assert M.shape == (3, 1)
    assert list(M[:, 0]) == [0, 0, 1]


def test_mult_matrix_zero_poly():
    M = mult_matrix(HomogPoly.zero(2), 3)
    assert M.shape == (num_monomials(5), num_monomials(3))
    assert not M.any()


def test_mult_matrix_x_plus_y_expansion():
    f = HomogPoly(1, (1, 1, 0))  # x + y
    M = mult_matrix(f, 1)
    # column of x must be the coefficient vector of x^2 + xy
    xcol = {mon: int(M[i, 0]) for i, mon in enumerate(monomial_basis(2))}
    assert xcol == {(2, 0, 0): 1, (1, 1, 0): 1, (1, 0, 1): 0, (0, 2, 0): 0, (0, 1, 1): 0, (0, 0, 2): 0} | {
        m: 0 for m in monomial_basis(2) if m not in {(2, 0, 0), (1, 1, 0)}
    }


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_mult_matrix_matches_symbolic_expansion(data):
    e = data.draw(st.integers(0, 3))
    d = data.draw(st.integers(0, 3))
    f = small_poly(data.draw, e)
    g = small_poly(data.draw, d)
    M = mult_matrix(f, d)
    vec = M @ np.array(g.coeffs, dtype=np.int64) % P
    fg = dict_mul(f, g)
    expected = [fg.get(mon, 0) for mon in monomial_basis(d + e)]
    assert list(map(int, vec)) == expected


# --- random generation ---------------------------------------------------------


def test_random_homog_deterministic():
    a = random_homog(3, np.random.default_rng(9))
    b = random_homog(3, np.random.default_rng(9))
    assert a == b


def test_random_homog_rarely_hits_zero_coeffs():
    rng = np.random.default_rng(1)
    hits = sum(
        all(c != 0 for c in random_homog(1, rng).coeffs) for _ in range(1000)
    )
    assert hits >= 990


def test_random_homog_rationals_uses_same_integer_stream():
    a = random_homog(2, np.random.default_rng(4), GF32003)
    b = random_homog(2, np.random.default_rng(4), RATIONALS)
    assert a.coeffs == b.coeffs


# --- lines and restriction -----------------------------------------------------

# the line x = s, y = t, z = s + t
LINE_ST = LineParam((1, 0, 1), (0, 1, 1))


def test_line_validation():
    with pytest.raises(ValueError):
        LineParam((1, 0), (0, 1, 0))
    assert line_is_valid(LINE_ST)
    assert not line_is_valid(LineParam((1, 2, 3), (2, 4, 6)))
    # proportional only after reduction mod p
    assert not line_is_valid(LineParam((1, 0, 0), (P, 0, 0)))
    assert line_is_valid(LineParam((1, 0, 0), (P, 0, 1)))


def test_restrict_coordinate_functions():
    x = HomogPoly(1, (1, 0, 0))
    z = HomogPoly(1, (0, 0, 1))
    assert restrict_to_line(x, LINE_ST).coeffs == (1, 0)
    assert restrict_to_line(z, LINE_ST).coeffs == (1, 1)


def test_restrict_xz_minus_y_squared():
    # xz - y^2 on (s, t, s+t) gives s^2 + st - t^2
    f = HomogPoly(2, (0, 0, 1, P - 1, 0, 0))
    assert restrict_to_line(f, LINE_ST).coeffs == (1, 1, P - 1)


def test_restrict_zero_poly():
    assert restrict_to_line(HomogPoly.zero(3), LINE_ST).coeffs == (0, 0, 0, 0)
    assert restrict_to_line(HomogPoly.zero(-2), LINE_ST).coeffs == ()


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_restrict_is_multiplicative(data):
    f = small_poly(data.draw, data.draw(st.integers(0, 3)))
    g = small_poly(data.draw, data.draw(st.integers(0, 3)))
    line = random_line(np.random.default_rng(data.draw(st.integers(0, 10**6))))
    fg = poly_from_dict(dict_mul(f, g), f.degree + g.degree)
    lhs = restrict_to_line(fg, line).coeffs
    rhs = bin_mul(restrict_to_line(f, line).coeffs, restrict_to_line(g, line).coeffs)
    assert list(lhs) == rhs


def test_restrict_over_rationals_keeps_integers():
    f = HomogPoly(2, (3, 0, 0, 0, 0, 5))
    out = restrict_to_line(f, LINE_ST, RATIONALS)
    assert out.coeffs == (8, 10, 5)  # 3s^2 + 5(s+t)^2


# --- binary forms ---------------------------------------------------------------


def test_binary_mult_matrix_toeplitz():
    g = BinaryForm(1, (2, 3))
    M = binary_mult_matrix(g, 2)
    assert M.shape == (4, 3)
    v = np.array([1, 0, 5], dtype=np.int64)  # s^2 + 5t^2
    prod = list(M @ v % P)
    assert prod == [2, 3, 10, 15]  # (2s+3t)(s^2+5t^2)


def test_binary_mult_matrix_degenerate_shapes():
    assert binary_mult_matrix(BinaryForm.zero(-3), 1).shape == (0, 2)
    assert binary_mult_matrix(BinaryForm(1, (1, 1)), -1).shape == (binary_dim(0), 0)
