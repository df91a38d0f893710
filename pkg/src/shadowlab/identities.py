"""Formal binomial sums, translation invariance, and the wall reduction engine.

A formal sum is a sparse integer-coefficient map over lattice points
(upper, lower), one point per binomial coefficient C(upper, lower).  An
identity of such sums is *invariant* when it stays true under every
simultaneous shift of all upper and all lower indices; ``is_invariantly_zero``
decides that exactly by Pascal-normalizing every term down to the minimum
upper index and checking that all coefficients cancel.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .exact import Seq, binom, _checked

# empirical invariance window used by grid cross-checks; wide enough to expose
# every hidden term of the desk-scale sums exercised here
GRID_LO = -4
GRID_HI = 8

Point = tuple[int, int]


class BinomialSum:
    """Sparse integer-coefficient sum of binomial coefficients C(upper, lower)."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Point, int] | Iterable[tuple[Point, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Point, int] = {}
        for (upper, lower), c in items:
            if not c:
                continue
            key = (int(upper), int(lower))
            new = acc.get(key, 0) + c
            if new:
                acc[key] = new
            else:
                del acc[key]
        self._coeffs = acc

    @classmethod
    def term(cls, upper: int, lower: int, coeff: int = 1) -> "BinomialSum":
        return cls({(upper, lower): coeff})

    @classmethod
    def from_seq(cls, s: Seq, level: int | None = None) -> "BinomialSum":
        """Formal expansion C(a_0, level) + C(a_1, level-1) + ... of a sequence."""
        level = s.level if level is None else level
        return cls(((a, level - i), 1) for i, a in enumerate(s.terms))

    def items(self) -> list[tuple[Point, int]]:
        return sorted(self._coeffs.items())

    def coefficient(self, upper: int, lower: int) -> int:
        return self._coeffs.get((upper, lower), 0)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BinomialSum) and self._coeffs == other._coeffs

    def __add__(self, other: "BinomialSum") -> "BinomialSum":
        acc = dict(self._coeffs)
        for key, c in other._coeffs.items():
            new = acc.get(key, 0) + c
            if new:
                acc[key] = new
            else:
                acc.pop(key, None)
        out = BinomialSum.__new__(BinomialSum)
        out._coeffs = acc
        return out

    def __neg__(self) -> "BinomialSum":
        out = BinomialSum.__new__(BinomialSum)
        out._coeffs = {key: -c for key, c in self._coeffs.items()}
        return out

    def __sub__(self, other: "BinomialSum") -> "BinomialSum":
        return self + (-other)

    def __repr__(self) -> str:
        if not self._coeffs:
            return "BinomialSum(0)"
        bits = [f"{c:+d}*C({u},{l})" for (u, l), c in self.items()]
        return "BinomialSum(" + " ".join(bits) + ")"

    def evaluate(self) -> int:
        return _checked(sum(c * binom(u, l) for (u, l), c in self._coeffs.items()))

    def translate(self, r: int, slide: int) -> "BinomialSum":
        """Shift every upper index by r and every lower index by slide."""
        out = BinomialSum.__new__(BinomialSum)
        out._coeffs = {(u + r, l + slide): c for (u, l), c in self._coeffs.items()}
        return out


def translate(s: BinomialSum, r: int, slide: int) -> BinomialSum:
    return s.translate(r, slide)


def is_invariantly_zero(s: BinomialSum) -> bool:
    """Decide whether s is zero as a translation-invariant identity.

    Every term with upper index above the minimum present is rewritten with
    the Pascal step C(n, k) -> C(n-1, k) + C(n-1, k-1) until all terms sit on
    one upper index; the sum is invariantly zero iff everything cancelled.
    """
    coeffs = dict(s._coeffs)
    if not coeffs:
        return True
    floor = min(u for (u, _l) in coeffs)
    top = max(u for (u, _l) in coeffs)
    for u in range(top, floor, -1):
        row = [(key, c) for key, c in coeffs.items() if key[0] == u]
        for (uu, l), c in row:
            del coeffs[(uu, l)]
            for key in ((u - 1, l), (u - 1, l - 1)):
                new = coeffs.get(key, 0) + c
                if new:
                    coeffs[key] = new
                else:
                    coeffs.pop(key, None)
    return not coeffs


def is_zero_on_grid(
    s: BinomialSum, lo: int = GRID_LO, hi: int = GRID_HI
) -> bool:
    """Empirical cross-check: evaluate every translate on the [lo, hi]^2 grid."""
    return all(
        s.translate(r, t).evaluate() == 0
        for r, t in product(range(lo, hi + 1), repeat=2)
    )


def diagonal_difference(n: int, k: int, i: int) -> BinomialSum:
    """C(n,k) minus its i-step expansion along the diagonal; invariantly zero."""
    if i < 1:
        raise ValueError("need i >= 1")
    rhs = [((n - s, k - s + 1), 1) for s in range(1, i + 1)]
    rhs.append(((n - i, k - i), 1))
    return BinomialSum.term(n, k) - BinomialSum(rhs)


def vertical_difference(n: int, k: int, i: int) -> BinomialSum:
    """C(n,k) minus its i-step expansion down the column; invariantly zero."""
    if i < 1:
        raise ValueError("need i >= 1")
    rhs = [((n - s, k - 1), 1) for s in range(1, i + 1)]
    rhs.append(((n - i, k), 1))
    return BinomialSum.term(n, k) - BinomialSum(rhs)


@dataclass(frozen=True)
class Wall:
    """Nonincreasing sequence w with a level; expands to sum C(w_i + level - i, w_i).

    The expansion has exactly one term on each of the consecutive diagonals
    level - h ... level.  The empty wall is Wall((), 0).
    """

    w: tuple[int, ...]
    level: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.w, tuple):
            object.__setattr__(self, "w", tuple(self.w))
        if self.level < 0:
            raise ValueError("wall level must be nonnegative")
        if self.w:
            if any(a < b for a, b in zip(self.w, self.w[1:])):
                raise ValueError("wall sequence must be nonincreasing")
            if any(x < 0 for x in self.w):
                raise ValueError("wall entries must be nonnegative")
            if len(self.w) - 1 > self.level:
                raise ValueError("wall height exceeds its level")

    def is_empty(self) -> bool:
        return not self.w

    @property
    def height(self) -> int:
        if not self.w:
            raise ValueError("empty wall has no height")
        return len(self.w) - 1

    def points(self) -> list[Point]:
        return [(x + self.level - i, x) for i, x in enumerate(self.w)]

    def expand(self) -> BinomialSum:
        return BinomialSum((p, 1) for p in self.points())


def wall_expand(wall: Wall) -> BinomialSum:
    return wall.expand()


@dataclass(frozen=True)
class Rubble:
    """Multiset of terms C(x, 0) with x >= 0; evaluates to the term count."""

    uppers: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "uppers", tuple(sorted(self.uppers)))
        if any(x < 0 for x in self.uppers):
            raise ValueError("rubble uppers must be nonnegative")

    def to_sum(self) -> BinomialSum:
        return BinomialSum(((x, 0), 1) for x in self.uppers)

    def evaluate(self) -> int:
        return len(self.uppers)


@dataclass(frozen=True)
class Pavement:
    """Multiset of terms C(i-1, i) with i >= 1; evaluates to zero."""

    columns: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "columns", tuple(sorted(self.columns)))
        if any(i < 1 for i in self.columns):
            raise ValueError("pavement columns must be >= 1")

    def to_sum(self) -> BinomialSum:
        return BinomialSum(((i - 1, i), 1) for i in self.columns)

    def evaluate(self) -> int:
        return 0


def dominates(wall: Wall, b: Seq | tuple[int, ...], k: int) -> bool:
    """Wall-above-expression test: conditions on the top diagonal, shared
    columns, and the first column; an empty expression is always dominated."""
    terms = b.terms if isinstance(b, Seq) else tuple(b)
    if not terms:
        return True
    if wall.is_empty():
        return False
    t = len(terms) - 1
    ell = wall.level
    if terms[0] - k > ell:  # (D1)
        return False
    for i, wi in enumerate(wall.w):  # (D2)
        j = k - wi
        if 0 <= j <= t and terms[j] >= wi + ell - i:
            return False
    return wall.w[0] <= k  # (D3)


@dataclass
class ReductionOutcome:
    """Result of the recursive wall reduction.

    The defining identities, both invariantly zero as differences:
      expand(b) + expand(c)  ==  expand(b_out) + expand(c_out) + pavement + shared
      expand(wall)           ==  expand(wall_out) + rubble + shared
    and terminally either wall_out is empty or b_out and c_out both are.
    """

    wall_out: Wall
    b_out: Seq
    c_out: Seq
    rubble: Rubble
    pavement: Pavement
    shared: BinomialSum


def _rebalance(b: list[int], c: list[int]) -> tuple[list[int], list[int]]:
    """Componentwise max/min relabeling; preserves the per-column multiset."""
    if len(b) < len(c):
        b, c = c, b
    for i in range(len(c)):
        if c[i] > b[i]:
            b[i], c[i] = c[i], b[i]
    return b, c


def _is_decomposition_shape(terms: list[int], k: int) -> bool:
    if not terms:
        return True
    if len(terms) > k:
        return False
    if any(a <= b for a, b in zip(terms, terms[1:])):
        return False
    return terms[0] >= 0 and terms[-1] - (k - (len(terms) - 1)) >= 0


def _weak_dominates(wall_points: list[Point], terms: list[int], k: int, ell: int) -> bool:
    if not terms:
        return True
    if terms[0] - k > ell:
        return False
    t = len(terms) - 1
    for i, (u, l) in enumerate(wall_points):
        j = k - l
        if 0 <= j <= t and terms[j] > u:
            return False
    return wall_points[0][1] <= k


def _terms_to_wall(points: list[Point]) -> Wall:
    if not points:
        return Wall((), 0)
    diags = [u - l for (u, l) in points]
    top = diags[0]
    if diags != list(range(top, top - len(points), -1)):
        raise RuntimeError(f"wall fragments not on consecutive diagonals: {points}")
    lowers = [l for (_u, l) in points]
    return Wall(tuple(lowers), top)


def recursive_reduce(wall: Wall, b: Seq, c: Seq, k: int) -> ReductionOutcome:
    """Reduce a wall against a dominated pair of cascade sequences.

    Repeatedly peels the interaction between the wall's lowest term and the
    tail of b: collisions move shared coefficients into ``shared``, wall
    fragments pushed into column 0 become rubble, sequence fragments pushed
    below diagonal 0 become pavement.  Stops once the wall or both sequences
    are exhausted.  The two defining identities are verified before
    returning.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not b.terms or wall.is_empty():
        raise ValueError("wall and b must both be nonempty")
    if not (b.is_k_binomial(k) and (not c.terms or c.is_k_binomial(k))):
        raise ValueError("b and c must be cascade decompositions at level k")
    if len(c.terms) > len(b.terms) or any(
        ci > bi for bi, ci in zip(b.terms, c.terms)
    ):
        raise ValueError("need max{b, c} = b and min{b, c} = c")
    if wall.w[-1] < 1:
        raise ValueError("wall must end at column >= 1")
    points = wall.points()
    ell = wall.level
    if not (_weak_dominates(points, list(b.terms), k, ell)
            and _weak_dominates(points, list(c.terms), k, ell)):
        raise ValueError("wall must dominate both sequences")

    terms = list(points)  # (upper, lower), diagonal-descending
    bb = list(b.terms)
    cc = list(c.terms)
    rub: list[int] = []
    pav: list[int] = []
    shared: Counter[Point] = Counter()

    guard = wall.expand().evaluate() + len(terms) + 8
    steps = 0
    while terms and bb:
        steps += 1
        if steps > guard:
            raise RuntimeError("reduction failed to terminate within its measure")
        t = len(bb) - 1
        q = k - t
        j = bb[-1] - q
        bu, bl = terms[-1]
        v, d = bl, bu - bl
        ib = k - v
        if ib <= t:
            # wall bottom sits in a column b occupies: absorb b's tail into
            # shared, shedding one vertical run per consumed column
            terms.pop()
            fresh: list[Point] = []
            upper = bu
            for s in range(ib, t + 1):
                col = k - s
                p = bb[s]
                if p > upper:
                    raise RuntimeError("domination lost during cascade")
                if p == upper and s < t:
                    raise RuntimeError(
                        "boundary collision with a longer tail is not reducible"
                    )
                shared[(p, col)] += 1
                lo = p if s == t else p + 1
                if col - 1 == 0:
                    rub.extend(range(lo, upper))
                else:
                    fresh.extend((x, col - 1) for x in range(lo, upper))
                upper = p
            terms = sorted(terms + fresh, key=lambda pt: pt[1] - pt[0])
            bb, cc = _rebalance(bb[:ib] + cc[ib:], cc[:ib])
        elif j >= d:
            # b's last diagonal meets the wall: consume the wall from that
            # diagonal downward, one collision per diagonal
            idx = (terms[0][0] - terms[0][1]) - j
            tail = terms[idx:]
            terms = terms[:idx]
            for pos, (tu, tl) in enumerate(tail):
                jj = tu - tl
                cur = bb[-1]
                cur_col = k - (len(bb) - 1)
                if cur - cur_col != jj:
                    raise RuntimeError("diagonal misalignment in wall consumption")
                dist = cur_col - tl
                if dist < 0:
                    raise RuntimeError("domination lost during wall consumption")
                shared[(tu, tl)] += 1
                if dist == 0:
                    if pos != len(tail) - 1:
                        raise RuntimeError(
                            "boundary collision inside the wall tail is not reducible"
                        )
                    bb = bb[:-1]
                elif jj == 0:
                    pav.extend(range(tl + 1, cur_col + 1))
                    bb = bb[:-1]
                else:
                    bb = bb[:-1] + [cur - s for s in range(1, dist + 1)]
            bb, cc = _rebalance(bb, cc)
        else:
            # wall bottom is strictly above and left of b's last term: slide
            # the term along its diagonal into the wall's column and collide
            cur = bb[-1]
            dist = q - v
            landed = cur - dist
            shared[(landed, v)] += 1
            terms.pop()
            if v - 1 == 0:
                rub.extend(range(landed, bu))
            else:
                terms = sorted(
                    terms + [(x, v - 1) for x in range(landed, bu)],
                    key=lambda pt: pt[1] - pt[0],
                )
            if j == 0:
                pav.extend(range(v + 1, q + 1))
                bb = bb[:-1]
            else:
                bb = bb[:-1] + [cur - s for s in range(1, dist + 1)]
            bb, cc = _rebalance(bb, cc)

        if not _is_decomposition_shape(bb, k) or not _is_decomposition_shape(cc, k):
            raise RuntimeError("reduction produced an invalid sequence")

    outcome = ReductionOutcome(
        wall_out=_terms_to_wall(terms),
        b_out=Seq(tuple(bb), k),
        c_out=Seq(tuple(cc), k),
        rubble=Rubble(tuple(rub)),
        pavement=Pavement(tuple(pav)),
        shared=BinomialSum(shared),
    )
    _verify_outcome(wall, b, c, k, outcome)
    return outcome


def _verify_outcome(
    wall: Wall, b: Seq, c: Seq, k: int, outcome: ReductionOutcome
) -> None:
    seq_side = (
        BinomialSum.from_seq(b, k)
        + BinomialSum.from_seq(c, k)
        - BinomialSum.from_seq(outcome.b_out, k)
        - BinomialSum.from_seq(outcome.c_out, k)
        - outcome.pavement.to_sum()
        - outcome.shared
    )
    wall_side = (
        wall.expand()
        - outcome.wall_out.expand()
        - outcome.rubble.to_sum()
        - outcome.shared
    )
    if not is_invariantly_zero(seq_side):
        raise RuntimeError("sequence-side reduction identity failed")
    if not is_invariantly_zero(wall_side):
        raise RuntimeError("wall-side reduction identity failed")
    if not outcome.wall_out.is_empty() and outcome.b_out.terms:
        raise RuntimeError("reduction stopped before a terminal state")
