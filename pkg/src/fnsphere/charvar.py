"""Representation tuples of the k-punctured sphere and their combinatorial data.

A point of the representation variety is a tuple ``(B_1, ..., B_k)`` of
determinant-one matrices with ``B_1 B_2 ... B_k = I``; ``B_i`` is the
monodromy around the i-th puncture.  The sphere is cut into pants
``S_2, ..., S_{k-1}``; pants ``i`` sees the prefix product
``M_{i-1} = B_1 ... B_{i-1}`` on its incoming circle, ``B_i`` on the puncture
and ``M_i = M_{i-1} B_i`` on its outgoing circle.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .exact_linear import (
    IDENTITY,
    Mat2,
    ProjMat2,
    ProjPoint,
    eigenline,
    is_invariant_line,
    mat_prod,
    nullspace,
    rational_eigenvalues,
    scalar,
    scalar_str,
)

MAX_GENERICITY_K = 24


class CharVarError(ValueError):
    pass


class RepValidationError(CharVarError):
    """Raised by :func:`rep_validate`; ``failures`` lists ``(index, reason)`` pairs (1-based)."""

    def __init__(self, failures: list[tuple[int, str]]):
        self.failures = failures
        super().__init__("; ".join(f"{reason} at {i}" for i, reason in failures))


@dataclass(frozen=True)
class Problem:
    k: int
    classes: tuple[Fraction, ...]

    def __post_init__(self):
        classes = tuple(scalar(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        if self.k < 4:
            raise CharVarError(f"need k >= 4 punctures, got k={self.k}")
        if len(classes) != self.k:
            raise CharVarError(f"k={self.k} but {len(classes)} eigenvalues given")
        for i, c in enumerate(classes, 1):
            if c in (0, 1, -1):
                raise CharVarError(f"eigenvalue c_{i} = {c} is forbidden (must avoid 0, 1, -1)")

    @classmethod
    def of(cls, classes: Sequence) -> "Problem":
        return cls(len(classes), tuple(scalar(c) for c in classes))

    def trace(self, i: int) -> Fraction:
        """Trace c_i + 1/c_i of the i-th conjugacy class (1-based)."""
        c = self.classes[i - 1]
        return c + 1 / c

    def to_json(self) -> dict:
        return {"k": self.k, "classes": [scalar_str(c) for c in self.classes]}

    @classmethod
    def from_json(cls, data: dict) -> "Problem":
        try:
            k, classes = data["k"], data["classes"]
        except (KeyError, TypeError) as exc:
            raise CharVarError(f"problem JSON needs 'k' and 'classes': {exc}") from None
        if not isinstance(k, int) or not isinstance(classes, list):
            raise CharVarError("problem JSON: 'k' must be an integer and 'classes' a list")
        return cls(k, tuple(scalar(c) for c in classes))


@dataclass(frozen=True)
class RepTuple:
    matrices: tuple[Mat2, ...]

    def __post_init__(self):
        mats = tuple(self.matrices)
        object.__setattr__(self, "matrices", mats)
        for i, m in enumerate(mats, 1):
            if m.det() != 1:
                raise RepValidationError([(i, "determinant ≠ 1")])
        if mat_prod(mats) != IDENTITY:
            raise RepValidationError([(len(mats), "product B_1...B_k ≠ I")])

    @classmethod
    def unchecked(cls, matrices: Sequence[Mat2]) -> "RepTuple":
        """Build without enforcing the invariants, for diagnostics on bad input."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrices", tuple(matrices))
        return obj

    def __len__(self) -> int:
        return len(self.matrices)

    def __getitem__(self, i: int) -> Mat2:
        """1-based access: ``rep[1]`` is ``B_1``."""
        if not 1 <= i <= len(self.matrices):
            raise IndexError(i)
        return self.matrices[i - 1]

    def prefix(self, i: int) -> Mat2:
        """M_i = B_1 ... B_i (M_0 = I)."""
        return mat_prod(self.matrices[:i])

    def conjugated(self, g: Mat2) -> "RepTuple":
        ginv = g.inv()
        return RepTuple(tuple(g @ m @ ginv for m in self.matrices))

    def to_json(self) -> dict:
        return {"matrices": [m.to_json() for m in self.matrices]}

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "RepTuple":
        try:
            raw = data["matrices"]
        except (KeyError, TypeError):
            raise CharVarError("rep JSON needs a 'matrices' list") from None
        if not isinstance(raw, list):
            raise CharVarError("rep JSON: 'matrices' must be a list")
        mats = tuple(Mat2.from_json(m) for m in raw)
        return cls(mats) if check else cls.unchecked(mats)


@dataclass(frozen=True)
class PantsData:
    index: int
    prev: Mat2
    puncture: Mat2
    exit: Mat2


class Stability(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


class ClassTag(str, enum.Enum):
    CENTRAL_PLUS = "central_plus"
    CENTRAL_MINUS = "central_minus"
    UNIPOTENT_PLUS = "unipotent_plus"
    UNIPOTENT_MINUS = "unipotent_minus"
    REGULAR = "regular"


@dataclass(frozen=True)
class MonodromyClass:
    tag: ClassTag
    trace: Fraction


@dataclass(frozen=True)
class StratumDatum:
    sigma: tuple[Stability, ...]
    gclass: tuple[MonodromyClass, ...]

    @property
    def is_open_stratum(self) -> bool:
        return all(s is Stability.STABLE for s in self.sigma) and all(
            g.tag is ClassTag.REGULAR for g in self.gclass
        )

    def to_json(self) -> dict:
        return {
            "sigma": [s.value for s in self.sigma],
            "gclass": [g.tag.value for g in self.gclass],
        }


# ---------------------------------------------------------------- genericity


def _sign_vectors(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.product((1, -1), repeat=n)


def _check_entries(classes: Sequence[Fraction]) -> list[Fraction]:
    cs = [scalar(c) for c in classes]
    if any(c == 0 for c in cs):
        raise CharVarError("eigenvalues must be nonzero")
    if len(cs) > MAX_GENERICITY_K:
        raise CharVarError(f"genericity brute force is limited to k <= {MAX_GENERICITY_K}")
    return cs


def _signed_product(cs: Sequence[Fraction], eps: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for c, e in zip(cs, eps):
        out = out * c if e == 1 else out / c
    return out


def kostov_witness(classes: Sequence) -> tuple[int, ...] | None:
    """First sign vector (in lexicographic order, +1 before -1) with product 1."""
    cs = _check_entries(classes)
    for eps in _sign_vectors(len(cs)):
        if _signed_product(cs, eps) == 1:
            return eps
    return None


def kostov_generic(classes: Sequence) -> bool:
    return kostov_witness(classes) is None


def very_generic_witness(classes: Sequence) -> tuple[str, int, tuple[int, ...], Fraction] | None:
    """Return ``(side, i, eps, product)`` for the first prefix/suffix violation, or None.

    ``side`` is "prefix" for (c_1..c_i) and "suffix" for (c_i..c_k); ``i`` is 1-based.
    """
    cs = _check_entries(classes)
    k = len(cs)
    for i in range(1, k + 1):
        for side, part in (("prefix", cs[:i]), ("suffix", cs[i - 1 :])):
            for eps in _sign_vectors(len(part)):
                prod = _signed_product(part, eps)
                if prod == 1 or prod == -1:
                    return side, i, eps, prod
    return None


def very_generic(classes: Sequence) -> bool:
    return very_generic_witness(classes) is None


# ---------------------------------------------------------------- validation


def rep_validate(rep: RepTuple, problem: Problem) -> None:
    """Raise :class:`RepValidationError` listing every failed check."""
    mats = rep.matrices
    if len(mats) != problem.k:
        raise RepValidationError([(0, f"expected {problem.k} matrices, got {len(mats)}")])
    failures = []
    for i, m in enumerate(mats, 1):
        if m.det() != 1:
            failures.append((i, "determinant ≠ 1"))
        elif m.trace() != problem.trace(i):
            failures.append((i, "trace mismatch"))
        elif m.is_scalar():
            failures.append((i, "central matrix"))
    if mat_prod(mats) != IDENTITY:
        failures.append((len(mats), "product ≠ I"))
    if failures:
        raise RepValidationError(failures)


def common_invariant_line(mats: Sequence[Mat2]) -> ProjPoint | None:
    """A rational line invariant under every matrix, if one exists."""
    pivot = next((m for m in mats if not m.is_scalar()), None)
    if pivot is None:
        return ProjPoint(1, 0)
    roots = rational_eigenvalues(pivot)
    if roots is None:
        return None
    for lam in roots:
        line = eigenline(pivot, lam)
        if all(is_invariant_line(m, line) for m in mats):
            return line
    return None


def is_irreducible(rep: RepTuple) -> bool:
    """True iff the tuple has no common invariant line over any extension of Q.

    Eigenlines of a rational 2x2 matrix live in its splitting field, so
    quadratic extensions suffice.  When the pivot matrix has irrational
    eigenvalues its two eigenlines are Galois conjugate: one is invariant
    under all matrices iff both are, iff every matrix commutes with the pivot.
    """
    mats = rep.matrices
    pivot = next((m for m in mats if not m.is_scalar()), None)
    if pivot is None:
        return False
    if rational_eigenvalues(pivot) is None:
        return not all(m @ pivot == pivot @ m for m in mats)
    return common_invariant_line(mats) is None


def circle_trace(rep: RepTuple, i: int) -> Fraction:
    k = len(rep)
    if not 2 <= i <= k - 2:
        raise CharVarError(f"circle index {i} outside 2..{k - 2}")
    return rep.prefix(i).trace()


def classify_circle_monodromy(m: Mat2) -> MonodromyClass:
    if m.det() != 1:
        raise CharVarError(f"monodromy {m!r} does not have determinant 1")
    t = m.trace()
    if m == IDENTITY:
        tag = ClassTag.CENTRAL_PLUS
    elif m == -IDENTITY:
        tag = ClassTag.CENTRAL_MINUS
    elif t == 2:
        tag = ClassTag.UNIPOTENT_PLUS
    elif t == -2:
        tag = ClassTag.UNIPOTENT_MINUS
    else:
        tag = ClassTag.REGULAR
    return MonodromyClass(tag, t)


def pants_restriction(rep: RepTuple, i: int) -> PantsData:
    k = len(rep)
    if not 2 <= i <= k - 1:
        raise CharVarError(f"pants index {i} outside 2..{k - 1}")
    prev = rep.prefix(i - 1)
    b = rep[i]
    return PantsData(i, prev, b, prev @ b)


def destabilizing_line(p: PantsData, c: Fraction) -> ProjPoint:
    """The 1/c-eigenline of the puncture monodromy, checked against the class."""
    c = scalar(c)
    if c in (0, 1, -1):
        raise CharVarError(f"eigenvalue {c} must avoid 0, 1, -1")
    if p.puncture.trace() != c + 1 / c or p.puncture.det() != 1:
        raise CharVarError(f"puncture monodromy at pants {p.index} is not in the class of {c}")
    return eigenline(p.puncture, 1 / c)


def is_pants_stable(p: PantsData, c: Fraction) -> bool:
    line = destabilizing_line(p, c)
    return not is_invariant_line(p.prev, line)


def classify_stratum(rep: RepTuple, problem: Problem) -> StratumDatum:
    rep_validate(rep, problem)
    k = problem.k
    sigma = tuple(
        Stability.STABLE
        if is_pants_stable(pants_restriction(rep, i), problem.classes[i - 1])
        else Stability.UNSTABLE
        for i in range(2, k)
    )
    gclass = tuple(classify_circle_monodromy(rep.prefix(i)) for i in range(2, k - 1))
    return StratumDatum(sigma, gclass)


# ---------------------------------------------------------------- conjugacy


def _conjugator_system(r1: Sequence[Mat2], r2: Sequence[Mat2]) -> list[list[Fraction]]:
    # unknown g = [[x0, x1], [x2, x3]]; equations B'_i g - g B_i = 0
    rows = []
    for b, bp in zip(r1, r2):
        for r in range(2):
            for c in range(2):
                row = [Fraction(0)] * 4
                for j in range(2):
                    row[2 * j + c] += bp.rows()[r][j]
                    row[2 * r + j] -= b.rows()[j][c]
                rows.append(row)
    return rows


def find_conjugator(r1: RepTuple, r2: RepTuple) -> ProjMat2 | None:
    """Projective g with g B_i g^-1 = B'_i for all i, or None.

    The solutions form a linear space; det is a quadratic form on it.  A
    nonzero polynomial of degree <= 2 in each variable cannot vanish on the
    whole grid {0, 1, 2}^n, so scanning that grid decides whether an
    invertible solution exists.
    """
    if len(r1) != len(r2):
        raise CharVarError("tuples have different lengths")
    basis = nullspace(_conjugator_system(r1.matrices, r2.matrices), 4)
    if not basis:
        return None
    for coeffs in itertools.product(range(3), repeat=len(basis)):
        if not any(coeffs):
            continue
        v = [sum(a * vec[j] for a, vec in zip(coeffs, basis)) for j in range(4)]
        g = Mat2(*v)
        if g.det() != 0:
            return ProjMat2(g)
    return None
