"""Fenchel-Nielsen coordinates on the open stratum, and the unstable splitting.

Frame convention used throughout.  Pants ``i`` (2 <= i <= k-1) carries a
frame ``F_i`` (columns form a basis) in which

* the puncture monodromy ``B_i`` is ``A_i = diag(c_i, 1/c_i)``,
* the outgoing prefix ``M_i = B_1...B_i`` is ``R_i^-1``,
* the incoming prefix ``M_{i-1}`` is ``(A_i R_i)^-1``,

where ``R_i`` is the normal form with upper-right entry 1.  Inverting the
circle monodromies keeps ``M_{i-1} B_i = M_i`` consistent with
``R'_{i-1} = A_i R_i``; traces are unaffected.  The glueing matrix
``P_i = F_{i+1}^-1 F_i`` then satisfies ``R'_i P_i = P_i R_i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .charvar import (
    ClassTag,
    Problem,
    RepTuple,
    Stability,
    classify_stratum,
    very_generic,
)
from .exact_linear import (
    IDENTITY,
    LinearAlgebraError,
    Mat2,
    ProjMat2,
    ProjPoint,
    eigenline,
    mat_inv,
    mat_prod,
    scalar,
    scalar_str,
)


class FenchelNielsenError(ValueError):
    pass


class StratumError(FenchelNielsenError):
    """The tuple is outside the open stratum; ``index`` names the offending pants or circle."""

    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(message)


class ConsistencyError(FenchelNielsenError):
    """An internal identity failed; indicates a bug rather than bad input."""


def _nonexceptional(c: Fraction) -> Fraction:
    c = scalar(c)
    if c in (0, 1, -1):
        raise FenchelNielsenError(f"eigenvalue {c} must avoid 0, 1, -1")
    return c


@dataclass(frozen=True)
class QPoint:
    t: Fraction
    dir: ProjPoint

    def __post_init__(self):
        t = scalar(self.t)
        object.__setattr__(self, "t", t)
        if t in (2, -2):
            raise FenchelNielsenError(f"QPoint trace t={t} must avoid 2 and -2")
        p, q = self.dir.p, self.dir.q
        if p * p + t * p * q + q * q == 0:
            raise FenchelNielsenError(f"QPoint [{p}:{q}] lies on the conic p^2 + t p q + q^2 = 0 (t={t})")

    @classmethod
    def of(cls, t, p, q) -> "QPoint":
        return cls(scalar(t), ProjPoint(scalar(p), scalar(q)))

    @property
    def p(self) -> Fraction:
        return self.dir.p

    @property
    def q(self) -> Fraction:
        return self.dir.q

    def to_json(self) -> dict:
        return {"t": scalar_str(self.t), "p": scalar_str(self.p), "q": scalar_str(self.q)}

    @classmethod
    def from_json(cls, data: dict) -> "QPoint":
        try:
            return cls.of(data["t"], data["p"], data["q"])
        except (KeyError, TypeError):
            raise FenchelNielsenError(f"coordinate entry needs 't', 'p', 'q': {data!r}") from None


@dataclass(frozen=True)
class FNCoords:
    """Coordinates for circles 2..k-2, stored in index order."""

    points: tuple[QPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> QPoint:
        """Indexed by circle number, ``coords[2]`` is the first point."""
        if not 2 <= i < len(self.points) + 2:
            raise IndexError(i)
        return self.points[i - 2]

    def to_json(self) -> dict:
        return {"coords": [pt.to_json() for pt in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "FNCoords":
        try:
            raw = data["coords"]
        except (KeyError, TypeError):
            raise FenchelNielsenError("coordinates JSON needs a 'coords' list") from None
        if not isinstance(raw, list):
            raise FenchelNielsenError("'coords' must be a list")
        return cls(tuple(QPoint.from_json(d) for d in raw))


@dataclass(frozen=True)
class PantsMatrices:
    A: Mat2
    R: Mat2
    Rprev: Mat2
    u: Fraction
    w: Fraction


# ---------------------------------------------------------------- normal forms


def u_coeff(t_prev, t, c) -> Fraction:
    t_prev, t, c = scalar(t_prev), scalar(t), _nonexceptional(c)
    return (t_prev - t / c) / (c - 1 / c)


def pants_matrices(t_prev, t, c) -> PantsMatrices:
    t_prev, t, c = scalar(t_prev), scalar(t), _nonexceptional(c)
    u = u_coeff(t_prev, t, c)
    w = u * (t - u) - 1
    A = Mat2.diag(c, 1 / c)
    R = Mat2(u, Fraction(1), w, t - u)
    return PantsMatrices(A=A, R=R, Rprev=A @ R, u=u, w=w)


def t_matrix(t) -> Mat2:
    return Mat2(Fraction(0), Fraction(1), Fraction(-1), scalar(t))


def u_matrix(u) -> Mat2:
    return Mat2(Fraction(1), Fraction(0), scalar(u), Fraction(1))


def half_power_proxy(c) -> Mat2:
    """diag(c, 1), equal to diag(c^1/2, c^-1/2) in PGL2."""
    return Mat2.diag(_nonexceptional(c), 1)


def q_commutant(qp: QPoint) -> ProjMat2:
    p, q, t = qp.p, qp.q, qp.t
    return ProjMat2(Mat2(p, q, -q, p + t * q))


def qpoint_from_commutant(t, Q: ProjMat2) -> QPoint:
    t = scalar(t)
    if t in (2, -2):
        raise FenchelNielsenError(f"trace t={t} must avoid 2 and -2")
    T = t_matrix(t)
    m = Q.rep
    if T @ m != m @ T:
        raise FenchelNielsenError(f"{Q!r} does not commute with T({t})")
    return QPoint(t, ProjPoint(m.a, m.b))


# ---------------------------------------------------------------- decode / encode


def _traces(coords: FNCoords, problem: Problem) -> dict[int, Fraction]:
    """Circle traces t_1..t_{k-1}, with the formal end values."""
    k = problem.k
    ts = {1: problem.trace(1), k - 1: problem.trace(k)}
    for i in range(2, k - 1):
        ts[i] = coords[i].t
    return ts


def _all_pants(ts: dict[int, Fraction], problem: Problem) -> dict[int, PantsMatrices]:
    return {
        i: pants_matrices(ts[i - 1], ts[i], problem.classes[i - 1])
        for i in range(2, problem.k)
    }


def glueing_matrix(qp: QPoint, pm: PantsMatrices, pm_next: PantsMatrices, c_next) -> Mat2:
    """P_i = U_{i+1}^-1 diag(c_{i+1}, 1) Q_i U_i (a representative in GL2)."""
    Q = q_commutant(qp).rep
    return mat_inv(u_matrix(pm_next.u)) @ half_power_proxy(c_next) @ Q @ u_matrix(pm.u)


def fn_decode(coords: FNCoords, problem: Problem) -> RepTuple:
    k = problem.k
    if not very_generic(problem.classes):
        raise FenchelNielsenError(f"classes {list(map(str, problem.classes))} are not very generic")
    if len(coords) != k - 3:
        raise FenchelNielsenError(f"expected {k - 3} coordinates for k={k}, got {len(coords)}")
    ts = _traces(coords, problem)
    pants = _all_pants(ts, problem)

    frames = {2: IDENTITY}
    for i in range(2, k - 1):
        P = glueing_matrix(coords[i], pants[i], pants[i + 1], problem.classes[i])
        frames[i + 1] = frames[i] @ mat_inv(P)

    def to_global(i: int, m: Mat2) -> Mat2:
        F = frames[i]
        return F @ m @ mat_inv(F)

    mats = [mat_inv(pants[2].Rprev)]
    mats += [to_global(i, pants[i].A) for i in range(2, k)]
    mats.append(to_global(k - 1, pants[k - 1].R))
    return RepTuple(tuple(mats))


def pants_frame(rep: RepTuple, problem: Problem, i: int) -> Mat2:
    """The frame of pants ``i`` described in the module docstring, up to scalars."""
    c = problem.classes[i - 1]
    B = rep[i]
    try:
        e1 = eigenline(B, c).vector()
        e2 = eigenline(B, 1 / c).vector()
    except LinearAlgebraError as exc:
        raise FenchelNielsenError(f"pants {i}: {exc}") from None
    base = Mat2(e1[0], e2[0], e1[1], e2[1])
    x = (mat_inv(base) @ rep.prefix(i) @ base).b
    if x == 0:
        raise StratumError(f"pants {i} unstable", i)
    # rescale e2 so the outgoing monodromy R_i^-1 has upper-right entry -1
    s = -1 / x
    return Mat2(e1[0], s * e2[0], e1[1], s * e2[1])


def _check_open_stratum(rep: RepTuple, problem: Problem) -> None:
    datum = classify_stratum(rep, problem)
    for i, s in enumerate(datum.sigma, 2):
        if s is Stability.UNSTABLE:
            raise StratumError(f"pants {i} unstable", i)
    for i, g in enumerate(datum.gclass, 2):
        if g.tag is not ClassTag.REGULAR:
            raise StratumError(f"circle {i} monodromy is {g.tag.value} (trace {g.trace})", i)


def fn_encode(rep: RepTuple, problem: Problem) -> FNCoords:
    k = problem.k
    _check_open_stratum(rep, problem)
    ts = {1: problem.trace(1), k - 1: problem.trace(k)}
    ts.update({i: rep.prefix(i).trace() for i in range(2, k - 1)})
    pants = _all_pants(ts, problem)

    frames = {}
    for i in range(2, k):
        F = pants_frame(rep, problem, i)
        Finv = mat_inv(F)
        pm = pants[i]
        if Finv @ rep.prefix(i) @ F != mat_inv(pm.R) or Finv @ rep.prefix(i - 1) @ F != mat_inv(pm.Rprev):
            raise ConsistencyError(f"pants {i}: framed monodromy differs from the normal form")
        frames[i] = F

    points = []
    for i in range(2, k - 1):
        P = mat_inv(frames[i + 1]) @ frames[i]
        c_next = problem.classes[i]
        Q = mat_inv(half_power_proxy(c_next)) @ u_matrix(pants[i + 1].u) @ P @ mat_inv(u_matrix(pants[i].u))
        T = t_matrix(ts[i])
        if T @ Q != Q @ T:
            raise ConsistencyError(f"circle {i}: Q does not commute with T")
        points.append(qpoint_from_commutant(ts[i], ProjMat2(Q)))
    return FNCoords(tuple(points))


# ---------------------------------------------------------------- sampling


def _random_fraction(rng: random.Random, height: int, nonzero: bool = False) -> Fraction:
    while True:
        num = rng.randint(-height, height)
        if num or not nonzero:
            return Fraction(num, rng.randint(1, height))


def sample_qpoint(rng: random.Random, height: int) -> QPoint:
    while True:
        t = _random_fraction(rng, height)
        if t not in (2, -2):
            break
    while True:
        p, q = _random_fraction(rng, height), _random_fraction(rng, height)
        if (p or q) and p * p + t * p * q + q * q != 0:
            return QPoint(t, ProjPoint(p, q))


def seeded_rng(seed: int, *context) -> random.Random:
    """Mersenne Twister seeded from a string key; stable across platforms and runs."""
    key = "|".join([str(seed), *map(str, context)])
    return random.Random(key)


def sample_fn(problem: Problem, seed: int, height: int) -> FNCoords:
    return sample_fn_many(problem, seed, height, 1)[0]


def sample_fn_many(problem: Problem, seed: int, height: int, n: int) -> list[FNCoords]:
    """``n`` coordinate tuples from one stream; the first equals ``sample_fn``."""
    if height < 1:
        raise FenchelNielsenError("height must be >= 1")
    rng = seeded_rng(seed, "fn", ",".join(map(str, problem.classes)), height)
    return [
        FNCoords(tuple(sample_qpoint(rng, height) for _ in range(problem.k - 3)))
        for _ in range(n)
    ]


# ---------------------------------------------------------------- unstable splitting


@dataclass(frozen=True)
class SplitInput:
    """A framed tuple (A_1..A_i) with A_1...A_i R = I, R = diag(1/b, b), unstable at A_i.

    ``A_i`` is lower triangular with diagonal (c_i, 1/c_i) and the circle
    eigenvalues satisfy ``b_prev = b / c_i``.
    """

    tuple: tuple[Mat2, ...]
    R: Mat2
    b_prev: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        mats = tuple(self.tuple)
        object.__setattr__(self, "tuple", mats)
        b_prev, b, c = scalar(self.b_prev), scalar(self.b), _nonexceptional(self.c)
        object.__setattr__(self, "b_prev", b_prev)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        _check_eigenvalue_pair(b_prev, b, c)
        if self.R != Mat2.diag(1 / b, b):
            raise FenchelNielsenError("R must be diag(1/b, b)")
        if len(mats) < 2:
            raise FenchelNielsenError("need at least two matrices A_1, ..., A_i")
        Ai = mats[-1]
        if Ai.b != 0 or Ai.a != c or Ai.d != 1 / c:
            raise FenchelNielsenError(f"A_i must be lower triangular with diagonal ({c}, {1 / c}), got {Ai!r}")
        if mat_prod(mats) @ self.R != IDENTITY:
            raise FenchelNielsenError("relation A_1...A_i R = I fails")

    @property
    def y(self) -> Fraction:
        return self.tuple[-1].c


def _check_eigenvalue_pair(b_prev: Fraction, b: Fraction, c: Fraction) -> None:
    if b in (0, 1, -1):
        raise FenchelNielsenError(f"b={b} must satisfy b != 1/b")
    if b_prev in (0, 1, -1):
        raise FenchelNielsenError(f"b_prev={b_prev} must satisfy b_prev != 1/b_prev")
    if b_prev * c != b:
        raise FenchelNielsenError(f"eigenvalues must satisfy b_prev = b / c (got b_prev={b_prev}, b={b}, c={c})")


def split_shift(y, b_prev, b) -> Fraction:
    """u with U A_i R U^-1 = diag(1/b_prev, b_prev) for U = [[1, 0], [u, 1]]."""
    y, b_prev, b = scalar(y), scalar(b_prev), scalar(b)
    if b_prev * b_prev == 1:
        raise FenchelNielsenError("b_prev = 1/b_prev makes the splitting undefined")
    return -(y / b) / (1 / b_prev - b_prev)


def unstable_split(inp: SplitInput) -> tuple[Fraction, tuple[Mat2, ...], Mat2]:
    y = inp.y
    U = u_matrix(split_shift(y, inp.b_prev, inp.b))
    Uinv = mat_inv(U)
    head = tuple(U @ A @ Uinv for A in inp.tuple[:-1])
    Rprev = Mat2.diag(1 / inp.b_prev, inp.b_prev)
    if mat_prod(head) @ Rprev != IDENTITY:
        raise ConsistencyError("split tuple fails A'_1...A'_{i-1} R' = I")
    return y, head, Rprev


def unstable_unsplit(y, tuple2: Sequence[Mat2], b_prev, b, c) -> SplitInput:
    y, b_prev, b, c = scalar(y), scalar(b_prev), scalar(b), _nonexceptional(c)
    _check_eigenvalue_pair(b_prev, b, c)
    head = tuple(tuple2)
    if mat_prod(head) @ Mat2.diag(1 / b_prev, b_prev) != IDENTITY:
        raise FenchelNielsenError("relation A'_1...A'_{i-1} R' = I fails")
    U = u_matrix(split_shift(y, b_prev, b))
    Uinv = mat_inv(U)
    mats = tuple(Uinv @ A @ U for A in head) + (Mat2(c, Fraction(0), y, 1 / c),)
    return SplitInput(mats, Mat2.diag(1 / b, b), b_prev, b, c)
