"""Exact 2x2 linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` values.  ``Mat2`` is an immutable
2x2 matrix, ``ProjMat2`` its canonical representative in PGL2 and
``ProjPoint`` a point of the projective line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Union

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]


class LinearAlgebraError(ValueError):
    """Raised when an exact linear algebra precondition fails."""


def scalar(x: ScalarLike) -> Fraction:
    """Coerce an int, Fraction or string ("n" or "n/d") to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip().replace("−", "-")
        if not text or any(ch in text for ch in ".eE_ "):
            raise ValueError(f"malformed scalar {x!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


def scalar_str(x: Fraction) -> str:
    return str(x)


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Return the nonnegative rational square root of ``x``, or None."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class Mat2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, scalar(getattr(self, name)))

    @classmethod
    def of(cls, rows: Sequence[Sequence[ScalarLike]]) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(scalar(a), scalar(b), scalar(c), scalar(d))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    @classmethod
    def diag(cls, x: ScalarLike, y: ScalarLike) -> "Mat2":
        return cls(scalar(x), Fraction(0), Fraction(0), scalar(y))

    def rows(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return ((self.a, self.b), (self.c, self.d))

    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def trace(self) -> Fraction:
        return self.a + self.d

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def scale(self, s: ScalarLike) -> "Mat2":
        s = scalar(s)
        return Mat2(s * self.a, s * self.b, s * self.c, s * self.d)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __neg__(self) -> "Mat2":
        return self.scale(-1)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def inv(self) -> "Mat2":
        return mat_inv(self)

    def apply(self, v: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def to_json(self) -> list[list[str]]:
        return [[scalar_str(self.a), scalar_str(self.b)], [scalar_str(self.c), scalar_str(self.d)]]

    @classmethod
    def from_json(cls, data) -> "Mat2":
        if (
            not isinstance(data, (list, tuple))
            or len(data) != 2
            or any(not isinstance(r, (list, tuple)) or len(r) != 2 for r in data)
        ):
            raise ValueError(f"expected a 2x2 array of scalar strings, got {data!r}")
        return cls.of(data)

    def __repr__(self) -> str:
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


IDENTITY = Mat2.identity()


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return Mat2(
        a.a * b.a + a.b * b.c,
        a.a * b.b + a.b * b.d,
        a.c * b.a + a.d * b.c,
        a.c * b.b + a.d * b.d,
    )


def mat_prod(mats: Iterable[Mat2]) -> Mat2:
    out = IDENTITY
    for m in mats:
        out = out @ m
    return out


def mat_inv(a: Mat2) -> Mat2:
    det = a.det()
    if det == 0:
        raise LinearAlgebraError(f"singular matrix {a!r} has no inverse")
    return Mat2(a.d / det, -a.b / det, -a.c / det, a.a / det)


def conjugate(g: Mat2, m: Mat2) -> Mat2:
    """Return g m g^-1."""
    return g @ m @ mat_inv(g)


@dataclass(frozen=True)
class ProjPoint:
    """A point [p:q] of the projective line, stored with p = 1 or (p, q) = (0, 1)."""

    p: Fraction
    q: Fraction

    def __post_init__(self):
        p, q = scalar(self.p), scalar(self.q)
        if p == 0 and q == 0:
            raise LinearAlgebraError("[0:0] is not a projective point")
        if p != 0:
            p, q = Fraction(1), q / p
        else:
            q = Fraction(1)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def vector(self) -> tuple[Fraction, Fraction]:
        return (self.p, self.q)

    def __repr__(self) -> str:
        return f"[{self.p}:{self.q}]"


@dataclass(frozen=True)
class ProjMat2:
    """Element of PGL2; ``rep`` has its first nonzero entry (reading order) equal to 1."""

    rep: Mat2

    def __post_init__(self):
        object.__setattr__(self, "rep", _canonical(self.rep))

    def __matmul__(self, other: "ProjMat2") -> "ProjMat2":
        return ProjMat2(self.rep @ other.rep)

    def inv(self) -> "ProjMat2":
        return ProjMat2(mat_inv(self.rep))

    def __repr__(self) -> str:
        r = self.rep
        return f"ProjMat2([[{r.a}, {r.b}], [{r.c}, {r.d}]])"


def _canonical(a: Mat2) -> Mat2:
    if a.det() == 0:
        raise LinearAlgebraError(f"singular matrix {a!r} is not in PGL2")
    lead = next(x for x in a.entries() if x != 0)
    return a.scale(1 / lead)


def proj_normalize(a: Mat2) -> ProjMat2:
    return ProjMat2(a)


def eigenline(a: Mat2, lam: ScalarLike) -> ProjPoint:
    """Projective kernel of ``a - lam*I``.

    Raises if ``lam`` is not an eigenvalue (with a distinct message when the
    characteristic roots are irrational), or if ``a == lam*I`` so that every
    line is an eigenline.
    """
    lam = scalar(lam)
    s = a - Mat2.diag(lam, lam)
    if s.det() != 0:
        if rational_eigenvalues(a) is None:
            raise LinearAlgebraError(f"eigenvalues of {a!r} are not in the field of rationals")
        raise LinearAlgebraError(f"{lam} is not an eigenvalue of {a!r}")
    if s.a == 0 and s.b == 0 and s.c == 0 and s.d == 0:
        raise LinearAlgebraError("eigenline not unique: matrix is central")
    # a nonzero row (x, y) of s has kernel spanned by (-y, x)
    if s.a != 0 or s.b != 0:
        return ProjPoint(-s.b, s.a)
    return ProjPoint(-s.d, s.c)


def rational_eigenvalues(a: Mat2) -> tuple[Fraction, ...] | None:
    """Distinct rational roots of the characteristic polynomial, or None if irrational."""
    t, det = a.trace(), a.det()
    root = rational_sqrt(t * t - 4 * det)
    if root is None:
        return None
    if root == 0:
        return (t / 2,)
    return ((t + root) / 2, (t - root) / 2)


def is_invariant_line(m: Mat2, line: ProjPoint) -> bool:
    x, y = line.vector()
    mx, my = m.apply((x, y))
    return mx * y - my * x == 0


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of a rational matrix, via reduced row echelon form."""
    m = [list(map(scalar, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][col]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(v)
    return basis
