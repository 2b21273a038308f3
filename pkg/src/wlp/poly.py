"""Homogeneous polynomials in K[x,y,z] and binary forms on a line.

The monomial order is graded-lex with x > y > z (exponent triples in
descending lexicographic order).  All matrices, serialized files, and
golden values are pinned to this order.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

import numpy as np

from .linalg import GF32003, FieldSpec

__all__ = [
    "num_monomials",
    "binary_dim",
    "monomial_basis",
    "HomogPoly",
    "random_homog",
    "mult_matrix",
    "LineParam",
    "line_is_valid",
    "random_line",
    "BinaryForm",
    "restrict_to_line",
    "binary_mult_matrix",
]


def num_monomials(d: int) -> int:
    """Dimension of the degree-d piece of K[x,y,z]; zero for negative d."""
    return comb(d + 2, 2) if d >= 0 else 0


def binary_dim(d: int) -> int:
    """Dimension of the degree-d piece of K[s,t]; zero for negative d."""
    return d + 1 if d >= 0 else 0


@functools.lru_cache(maxsize=None)
def monomial_basis(d: int) -> tuple[tuple[int, int, int], ...]:
    """All degree-d monomials x^i y^j z^k, graded-lex with x > y > z."""
    if d < 0:
        return ()
    return tuple(
        (i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)
    )


@functools.lru_cache(maxsize=None)
def _monomial_index(d: int) -> dict[tuple[int, int, int], int]:
    return {mon: i for i, mon in enumerate(monomial_basis(d))}


@dataclass(frozen=True)
class HomogPoly:
    """Dense homogeneous polynomial; coeffs[i] pairs with monomial_basis(degree)[i].

    The zero polynomial carries an explicit degree so mixed-degree entry
    grids stay uniformly typed; a negative degree forces the empty tuple.
    """

    degree: int
    coeffs: tuple

    def __post_init__(self) -> None:
        if len(self.coeffs) != num_monomials(self.degree):
            raise ValueError(
                f"degree-{self.degree} polynomial needs "
                f"{num_monomials(self.degree)} coefficients, got {len(self.coeffs)}"
            )

    @staticmethod
    def zero(degree: int) -> "HomogPoly":
        return HomogPoly(degree, (0,) * num_monomials(degree))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def terms(self):
        """Yield (exponent triple, coefficient) over the nonzero terms."""
        for mon, c in zip(monomial_basis(self.degree), self.coeffs):
            if c != 0:
                yield mon, c


def random_homog(d: int, rng: np.random.Generator, field: FieldSpec = GF32003) -> HomogPoly:
    """Every coefficient uniform over the sampling range; seed-deterministic."""
    if d < 0:
        raise ValueError("random polynomials need degree >= 0")
    vals = rng.integers(0, field.sample_bound, size=num_monomials(d))
    return HomogPoly(d, tuple(int(v) for v in vals))


def mult_matrix(f: HomogPoly, d: int, field: FieldSpec = GF32003) -> np.ndarray:
    """Matrix of g -> f*g from degree d to degree d + deg(f), canonical bases."""
    rows = num_monomials(d + f.degree)
    cols = num_monomials(d)
    out = np.zeros((rows, cols), dtype=field.dtype)
    if rows == 0 or cols == 0 or f.is_zero:
        return out
    idx = _monomial_index(d + f.degree)
    fterms = list(f.terms())
    for col, mon in enumerate(monomial_basis(d)):
        for fm, c in fterms:
            out[idx[(fm[0] + mon[0], fm[1] + mon[1], fm[2] + mon[2])], col] = c
    return out


@dataclass(frozen=True)
class LineParam:
    """Line [s:t] -> s*p0 + t*p1 in P^2; the points must be independent."""

    p0: tuple
    p1: tuple

    def __post_init__(self) -> None:
        if len(self.p0) != 3 or len(self.p1) != 3:
            raise ValueError("line points need three coordinates")


def line_is_valid(line: LineParam, field: FieldSpec = GF32003) -> bool:
    """True when p0, p1 stay linearly independent after field reduction."""
    minors = (
        line.p0[0] * line.p1[1] - line.p0[1] * line.p1[0],
        line.p0[0] * line.p1[2] - line.p0[2] * line.p1[0],
        line.p0[1] * line.p1[2] - line.p0[2] * line.p1[1],
    )
    return any(field.reduce(m) != 0 for m in minors)


def random_line(rng: np.random.Generator, field: FieldSpec = GF32003) -> LineParam:
    while True:
        vals = rng.integers(0, field.sample_bound, size=6)
        line = LineParam(tuple(int(v) for v in vals[:3]), tuple(int(v) for v in vals[3:]))
        if line_is_valid(line, field):
            return line


@dataclass(frozen=True)
class BinaryForm:
    """Dense binary form in (s, t); coeffs ordered s^d, s^(d-1)t, ..., t^d."""

    degree: int
    coeffs: tuple

    def __post_init__(self) -> None:
        if len(self.coeffs) != binary_dim(self.degree):
            raise ValueError(
                f"degree-{self.degree} binary form needs {binary_dim(self.degree)} "
                f"coefficients, got {len(self.coeffs)}"
            )

    @staticmethod
    def zero(degree: int) -> "BinaryForm":
        return BinaryForm(degree, (0,) * binary_dim(degree))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def _conv(u: tuple, v: tuple, field: FieldSpec) -> tuple:
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a == 0:
            continue
        for j, b in enumerate(v):
            if b:
                out[i + j] += a * b
    return tuple(field.reduce(x) for x in out)


def restrict_to_line(f: HomogPoly, line: LineParam, field: FieldSpec = GF32003) -> BinaryForm:
    """Substitute the line parametrization into f, yielding a binary form."""
    d = f.degree
    if d < 0:
        return BinaryForm(d, ())
    lins = [
        (field.reduce(line.p0[v]), field.reduce(line.p1[v])) for v in range(3)
    ]
    pows = []
    for lin in lins:
        table = [(1,)]
        for _ in range(d):
            table.append(_conv(table[-1], lin, field))
        pows.append(table)
    acc = [0] * (d + 1)
    for (i, j, k), c in f.terms():
        term = _conv(_conv(pows[0][i], pows[1][j], field), pows[2][k], field)
        for u, val in enumerate(term):
            acc[u] += c * val
    return BinaryForm(d, tuple(field.reduce(x) for x in acc))


def binary_mult_matrix(g: BinaryForm, d: int, field: FieldSpec = GF32003) -> np.ndarray:
    """Matrix of h -> g*h from degree d to degree d + deg(g) in K[s,t]."""
    rows = binary_dim(d + g.degree)
    cols = binary_dim(d)
    out = np.zeros((rows, cols), dtype=field.dtype)
    if rows and cols and not g.is_zero:
        for u, c in enumerate(g.coeffs):
            if c:
                for j in range(cols):
                    out[u + j, j] = c
    return out
