"""Exact arithmetic: generalized binomials, sequence sums, cascade decompositions.

Every quantity is a plain Python int, but all entry points funnel results
through a signed 128-bit range check so an overflow is an explicit error
instead of a silently huge number.
"""

from __future__ import annotations

from dataclasses import dataclass

INT128_MAX = 2**127 - 1
INT128_MIN = -(2**127)


class ExactOverflowError(OverflowError):
    """A checked operation left the signed 128-bit range."""


def _checked(value: int) -> int:
    if not INT128_MIN <= value <= INT128_MAX:
        raise ExactOverflowError(f"{value} exceeds the signed 128-bit range")
    return value


def binom(n: int, k: int, *, strict: bool = False) -> int:
    """Generalized binomial coefficient over the integers.

    Conventions: C(n, k) = 0 for k < 0 and C(0, 0) = 1.  For n < 0 the
    falling-factorial extension applies, e.g. C(-10, 2) = 55.  With
    ``strict=True`` any n < k (including all n < 0) yields 0 instead; the
    flag exists for sensitivity testing against that alternative reading.
    """
    if k < 0:
        return 0
    if k == 0:
        return 1
    if n < 0:
        if strict:
            return 0
        mirrored = binom(k - n - 1, k)
        return -mirrored if k % 2 else mirrored
    if k > n:
        return 0
    k = min(k, n - k)
    result = 1
    for i in range(1, k + 1):
        # multiply-then-divide keeps every intermediate equal to C(n, i)
        result = _checked(result * (n - i + 1)) // i
    return result


@dataclass(frozen=True)
class Seq:
    """Integer sequence (a_0, ..., a_t) anchored at a level k.

    Evaluated at level j it means C(a_0, j) + C(a_1, j-1) + ... ; the stored
    level is the anchor the sequence was built for (a cascade decomposition
    at level k, say) and is the default evaluation level.
    """

    terms: tuple[int, ...]
    level: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if not isinstance(self.terms, tuple):
            object.__setattr__(self, "terms", tuple(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_strictly_decreasing(self) -> bool:
        return all(a > b for a, b in zip(self.terms, self.terms[1:]))

    def is_nonneg(self) -> bool:
        return all(a >= 0 for a in self.terms)

    def is_k_binomial(self, k: int | None = None) -> bool:
        """True iff this is a valid cascade decomposition at level k."""
        k = self.level if k is None else k
        if not self.terms:
            return True
        t = len(self.terms) - 1
        if t + 1 > k:
            return False
        if not self.is_strictly_decreasing():
            return False
        return self.terms[-1] >= k - t >= 1


EMPTY = Seq((), 0)


def seq_value(s: Seq, level: int | None = None) -> int:
    """Evaluate C(a_0, level) + C(a_1, level-1) + ...; empty sequence gives 0."""
    level = s.level if level is None else level
    return _checked(sum(binom(a, level - i) for i, a in enumerate(s.terms)))


def seq_shift(s: Seq, i: int, j: int, level: int | None = None) -> int:
    """Evaluate the shifted sum C(a_0 - i, level - j) + C(a_1 - i, level - j - 1) + ..."""
    level = s.level if level is None else level
    return _checked(sum(binom(a - i, level - j - r) for r, a in enumerate(s.terms)))


def seq_minus(s: Seq, d: int) -> Seq:
    """Decrease every term by d; length and anchor level are unchanged."""
    return Seq(tuple(a - d for a in s.terms), s.level)


def lex_cmp(a: Seq | tuple[int, ...], b: Seq | tuple[int, ...]) -> int:
    """Lexicographic comparison; on a prefix tie the longer sequence is greater.

    Returns a negative, zero, or positive int.  The empty sequence is the
    minimum.
    """
    ta = a.terms if isinstance(a, Seq) else tuple(a)
    tb = b.terms if isinstance(b, Seq) else tuple(b)
    for x, y in zip(ta, tb):
        if x != y:
            return -1 if x < y else 1
    if len(ta) == len(tb):
        return 0
    return -1 if len(ta) < len(tb) else 1


def decompose(m: int, k: int) -> Seq:
    """Greedy cascade decomposition of m >= 0 at level k >= 1.

    Returns the unique Seq with strictly decreasing terms, length <= k and
    last term >= its own lower index, summing to m; 0 decomposes to the
    empty sequence.
    """
    if k < 1:
        raise ValueError("level k must be >= 1")
    if m < 0:
        raise ValueError("cannot decompose a negative integer")
    _checked(m)
    def fits(a: int, j: int, rem: int) -> bool:
        try:
            return binom(a, j) <= rem
        except ExactOverflowError:
            return False

    terms: list[int] = []
    rem = m
    j = k
    while rem > 0:
        # largest a with C(a, j) <= rem, by doubling then bisection
        lo = j
        hi = j + 1
        while fits(hi, j, rem):
            lo, hi = hi, 2 * hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if fits(mid, j, rem):
                lo = mid
            else:
                hi = mid
        terms.append(lo)
        rem -= binom(lo, j)
        j -= 1
    seq = Seq(tuple(terms), k)
    assert seq.is_k_binomial(k) and seq_value(seq, k) == m
    return seq
