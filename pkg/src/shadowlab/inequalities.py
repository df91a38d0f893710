"""Exact verification of the binomial-sequence inequalities and equality cases.

The check functions evaluate every clause and report which hypotheses an
input violates instead of rejecting it, so published counterexamples can be
classified.  The sweep helpers enumerate the full hypothesis space at desk
scale and are the acceptance oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .exact import Seq, binom, lex_cmp, seq_minus, seq_shift, seq_value


@dataclass
class InequalityRow:
    i: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class AbcReport:
    """Clause-by-clause evaluation of one (a, b, c) instance."""

    k: int
    k1: int
    k2: int
    hypotheses: dict[str, bool]
    inequality_at: dict[int, InequalityRow]
    shifted_at: dict[int, InequalityRow]
    equality_at_1: bool = False
    equality_propagates: bool = False

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.inequality_at.values())


def _evaluate(a: Seq, b: Seq, c: Seq, k: int, k1: int, k2: int) -> AbcReport:
    rows = {
        i: InequalityRow(
            i,
            seq_value(a, k - i),
            seq_value(b, k1 - i) + seq_value(c, k2 - i),
        )
        for i in range(0, k + 1)
    }
    shifted = {
        i: InequalityRow(
            i,
            seq_shift(a, i, i, k),
            seq_shift(b, i, i, k1) + seq_shift(c, i, i, k2),
        )
        for i in range(0, k + 1)
    }
    eq1 = rows[1].equal if k >= 1 else False
    propagates = eq1 and all(rows[i].equal for i in range(1, k + 1))
    return AbcReport(
        k=k,
        k1=k1,
        k2=k2,
        hypotheses={},
        inequality_at=rows,
        shifted_at=shifted,
        equality_at_1=eq1,
        equality_propagates=propagates,
    )


def check_abc(a: Seq, b: Seq, c: Seq, k: int) -> AbcReport:
    """Evaluate the split m = C(b, k) + C(c, k-1) against all its clauses.

    ``a`` must be the cascade decomposition of a positive integer; b and c
    may violate the hypotheses, in which case the violations are recorded
    and the inequality rows still computed.
    """
    if not (a.terms and a.is_k_binomial(k)):
        raise ValueError("a must be the cascade decomposition of a positive integer")
    report = _evaluate(a, b, c, k, k, k - 1)
    report.hypotheses = {
        "equality_base": report.inequality_at[0].equal,
        "b_nonempty": bool(b.terms),
        "lex": bool(b.terms) and lex_cmp(b, seq_minus(a, 1)) >= 0,
        "nonneg": b.is_nonneg() and c.is_nonneg(),
        "decreasing": b.is_strictly_decreasing() and c.is_strictly_decreasing(),
        "b_lower_bounds": all(bj >= k - j - 1 for j, bj in enumerate(b.terms)),
        "c_lower_bounds": all(cj >= k - 2 - j for j, cj in enumerate(c.terms)),
    }
    return report


def check_abck(a: Seq, b: Seq, c: Seq, k: int, k1: int, k2: int) -> AbcReport:
    """Generalized-level variant: requires k1, k2 >= k, or (k1, k2) = (k, k-1)
    with nonempty b at least a - 1 in lex order."""
    if not (a.terms and a.is_k_binomial(k)):
        raise ValueError("a must be the cascade decomposition of a positive integer")
    if k1 >= k and k2 >= k:
        pass
    elif (k1, k2) == (k, k - 1):
        if not b.terms or lex_cmp(b, seq_minus(a, 1)) < 0:
            raise ValueError(
                "the (k, k-1) case needs a nonempty b at least a - 1 in lex order"
            )
    else:
        raise ValueError("need k1, k2 >= k or (k1, k2) = (k, k-1)")
    report = _evaluate(a, b, c, k, k1, k2)
    report.hypotheses = {
        "equality_base": report.inequality_at[0].equal,
        "nonneg": b.is_nonneg() and c.is_nonneg(),
        "decreasing": b.is_strictly_decreasing() and c.is_strictly_decreasing(),
        "b_lower_bounds": all(bj >= k1 - j - 1 for j, bj in enumerate(b.terms)),
        "c_lower_bounds": all(cj >= k2 - j - 1 for j, cj in enumerate(c.terms)),
    }
    return report


def _decreasing_sequences(min_at, value_of, cap: int, max_len: int):
    """Strictly decreasing nonnegative tuples with term bounds and a value cap.

    ``min_at(j)`` is the least admissible value at index j; ``value_of``
    maps (term, index) to its contribution, assumed nondecreasing in the
    term.  ``max_len`` cuts the enumeration where further terms can only
    contribute zero to every evaluated row, so longer tails would be
    representation noise.  The empty tuple comes first.
    """
    top = 0
    while value_of(top + 1, 0) <= cap:
        top += 1

    out: list[tuple[tuple[int, ...], int]] = [((), 0)]

    def rec(prefix: list[int], value: int) -> None:
        j = len(prefix)
        if j >= max_len:
            return
        lo = max(min_at(j), 0)
        hi = (prefix[-1] - 1) if prefix else top
        for term in range(lo, hi + 1):
            v = value + value_of(term, j)
            if v > cap:
                break
            prefix.append(term)
            out.append((tuple(prefix), v))
            rec(prefix, v)
            prefix.pop()

    rec([], 0)
    return out


def _row_vector(terms: tuple[int, ...], base: int, k: int) -> tuple[int, ...]:
    """Sequence values at levels base, base - 1, ..., base - k."""
    return tuple(
        sum(binom(x, base - i - j) for j, x in enumerate(terms))
        for i in range(k + 1)
    )


def _lex_ge(x: tuple[int, ...], y: tuple[int, ...]) -> bool:
    for xi, yi in zip(x, y):
        if xi != yi:
            return xi > yi
    return len(x) >= len(y)


def _cascades(k: int, amax: int) -> list[Seq]:
    out = []
    for length in range(1, k + 1):
        for terms in combinations(range(amax, 0, -1), length):
            seq = Seq(terms, k)
            if seq.is_k_binomial(k):
                out.append(seq)
    return out


def _split_universe(k: int, cap: int):
    """The admissible (b, c) space for level-k splits, with row vectors.

    b is strictly decreasing nonnegative with b_j >= k - j - 1, c likewise
    with c_j >= k - 2 - j; lengths are bounded at the last index whose
    evaluation level is still nonnegative (k and k - 1 entries past that
    contribute zero everywhere).
    """
    bs = [
        (t, _row_vector(t, k, k))
        for t, _v in _decreasing_sequences(
            lambda j: k - j - 1, lambda term, j: binom(term, k - j), cap, k + 1
        )
    ]
    cs = [
        (t, _row_vector(t, k - 1, k))
        for t, _v in _decreasing_sequences(
            lambda j: k - 2 - j, lambda term, j: binom(term, k - 1 - j), cap, k
        )
    ]
    c_by_value: dict[int, list[tuple[tuple[int, ...], tuple[int, ...]]]] = {}
    for t, rows in cs:
        c_by_value.setdefault(rows[0], []).append((t, rows))
    return bs, c_by_value


def lemma_sweep(k: int, amax: int) -> dict:
    """Exhaustively verify the inequality family and equality propagation.

    Sweeps every cascade a with a_0 <= amax against every admissible (b, c)
    with value(b, k) + value(c, k-1) = value(a, k) and b at least a - 1 in
    lex order; records any failed inequality or failed propagation.
    """
    cap = seq_value(Seq(tuple(range(amax, amax - k, -1)), k), k)
    bs, c_by_value = _split_universe(k, cap)
    checked = 0
    violations: list[tuple] = []
    for a in _cascades(k, amax):
        arows = _row_vector(a.terms, k, k)
        m = arows[0]
        a1 = tuple(x - 1 for x in a.terms)
        for b_terms, brows in bs:
            if not b_terms or brows[0] > m:
                continue
            if not _lex_ge(b_terms, a1):
                continue
            for c_terms, crows in c_by_value.get(m - brows[0], ()):
                checked += 1
                rows_ok = True
                for i in range(1, k + 1):
                    if arows[i] > brows[i] + crows[i]:
                        rows_ok = False
                        violations.append((a.terms, b_terms, c_terms, "inequality", i))
                        break
                if not rows_ok:
                    continue
                if arows[1] == brows[1] + crows[1] and any(
                    arows[i] != brows[i] + crows[i] for i in range(2, k + 1)
                ):
                    violations.append((a.terms, b_terms, c_terms, "propagation", 0))
    return {"k": k, "amax": amax, "checked": checked, "violations": violations}


def general_level_sweep(k: int, amax: int, kmax_shift: int = 2) -> dict:
    """Verify the generalized-level inequalities for all k1, k2 >= k."""
    a_list = _cascades(k, amax)
    cap = max(seq_value(a, k) for a in a_list)
    checked = 0
    violations: list[tuple] = []
    for k1 in range(k, k + kmax_shift + 1):
        for k2 in range(k, k + kmax_shift + 1):
            bs = _decreasing_sequences(
                lambda j: k1 - j - 1, lambda term, j: binom(term, k1 - j), cap, k1 + 1
            )
            cs = _decreasing_sequences(
                lambda j: k2 - j - 1, lambda term, j: binom(term, k2 - j), cap, k2 + 1
            )
            c_by_value: dict[int, list[tuple[int, ...]]] = {}
            for t, v in cs:
                c_by_value.setdefault(v, []).append(t)
            for a in a_list:
                m = seq_value(a, k)
                lhs = seq_value(a, k - 1)
                s_lhs = seq_shift(a, 1, 1, k)
                for b_terms, b_val in bs:
                    if b_val > m:
                        continue
                    b = Seq(b_terms, k1)
                    b_level = seq_value(b, k1 - 1)
                    b_shift = seq_shift(b, 1, 1, k1)
                    for c_terms in c_by_value.get(m - b_val, ()):
                        checked += 1
                        c = Seq(c_terms, k2)
                        rhs = b_level + seq_value(c, k2 - 1)
                        s_rhs = b_shift + seq_shift(c, 1, 1, k2)
                        if lhs > rhs or s_lhs > s_rhs:
                            violations.append((a.terms, b_terms, c_terms, k1, k2))
    return {"checked": checked, "violations": violations}


def equality_splits(a: Seq, k: int) -> list[tuple[Seq, Seq]]:
    """All (b, c) splits achieving equality at levels k and k - 1.

    Emitted from the two closed-form families at every admissible cut index,
    plus the full-decrement split b = c = a - 1; requires the cascade of a to
    be shorter than k.
    """
    if not (a.terms and a.is_k_binomial(k)):
        raise ValueError("a must be the cascade decomposition of a positive integer")
    t = len(a.terms) - 1
    if t + 1 >= k:
        raise ValueError("the split formulas require a cascade shorter than k")
    terms = a.terms
    pairs: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for i in range(0, t + 2):
        if 0 < i <= t and not terms[i - 1] - 1 > terms[i]:
            continue
        head = tuple(x - 1 for x in terms[:i])
        if i <= t:
            b1 = head + (terms[i],)
            c1 = head + terms[i + 1 :]
            pairs.add((b1, c1))
        b2 = head + terms[i:]
        c2 = head
        pairs.add((b2, c2))
    out = []
    m = seq_value(a, k)
    bound = seq_value(a, k - 1)
    for b_terms, c_terms in sorted(pairs):
        b = Seq(b_terms, k)
        c = Seq(c_terms, k - 1)
        assert seq_value(b, k) + seq_value(c, k - 1) == m
        assert seq_value(b, k - 1) + seq_value(c, k - 2) == bound
        out.append((b, c))
    return out


def split_profile(b: Seq, c: Seq, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Values of b and c at every level the inequalities evaluate.

    Two pairs with equal profiles are the same split: boundary terms that
    contribute identically at every level from k downward are representation
    noise, not a different choice.
    """
    return (
        tuple(seq_value(b, k - i) for i in range(0, k + 1)),
        tuple(seq_value(c, k - 1 - i) for i in range(0, k + 1)),
    )


def brute_force_equality_splits(a: Seq, k: int) -> list[tuple[Seq, Seq]]:
    """Independent enumeration of every hypothesis-satisfying equality split."""
    if not (a.terms and a.is_k_binomial(k)):
        raise ValueError("a must be the cascade decomposition of a positive integer")
    m = seq_value(a, k)
    bound = seq_value(a, k - 1)
    a1 = tuple(x - 1 for x in a.terms)
    bs, c_by_value = _split_universe(k, m)
    out = []
    for b_terms, brows in bs:
        if not b_terms or not _lex_ge(b_terms, a1):
            continue
        for c_terms, crows in c_by_value.get(m - brows[0], ()):
            if brows[1] + crows[1] == bound:
                out.append((Seq(b_terms, k), Seq(c_terms, k - 1)))
    return sorted(out, key=lambda bc: (bc[0].terms, bc[1].terms))


def splits_comparison(amax: int, kmax: int) -> dict:
    """Closed-form splits vs brute force for every admissible cascade.

    Compared by value profile; an "extra" is an exhaustive split whose
    profile no formula pair matches, a "missing" entry the converse.
    """
    extras: list[tuple] = []
    missing: list[tuple] = []
    checked = 0
    for k in range(2, kmax + 1):
        for a in _cascades(k, amax):
            if len(a.terms) >= k:
                continue
            checked += 1
            formula = {split_profile(b, c, k) for b, c in equality_splits(a, k)}
            brute = {
                split_profile(b, c, k)
                for b, c in brute_force_equality_splits(a, k)
            }
            for pair in brute - formula:
                extras.append((k, a.terms, pair))
            for pair in formula - brute:
                missing.append((k, a.terms, pair))
    return {"checked": checked, "extras": extras, "missing": missing}


# ---------------------------------------------------------------------------
# real-valued conjecture scan

def real_binom(x: float, j: int) -> float:
    """Falling-factorial binomial with a real upper index."""
    if j < 0:
        return 0.0
    out = 1.0
    for i in range(j):
        out *= (x - i) / (i + 1)
    return out


def _solve_z(target: float, k: int, hi: float, tol: float = 1e-13) -> float:
    """Monotone bisection for C(z, k-1) = target on z in [k-2, hi]."""
    lo = float(k - 2)
    if target <= 0.0:
        return lo
    f_hi = real_binom(hi, k - 1)
    if f_hi < target:
        raise RuntimeError("bisection bracket does not contain the target")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if real_binom(mid, k - 1) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, abs(hi)):
            return 0.5 * (lo + hi)
    raise RuntimeError("bisection failed to converge")


@dataclass
class ConjectureReport:
    k: int
    xs: list[float]
    min_slack: float
    argmin: tuple[float, float, float]  # (x, y, z)
    near_violations: list[tuple[float, float, float, float]] = field(
        default_factory=list
    )


def conjecture_scan(
    k: int, x_grid: list[float], y_samples: int = 41, tol: float = 1e-9
) -> ConjectureReport:
    """Scan the real-variable shadow inequality on a grid; reports only.

    For each x and each y in [x-1, x], z solves C(z, k-1) = C(x, k) - C(y, k)
    and the slack C(y, k-1) + C(z, k-2) - C(x, k-1) is recorded.  A negative
    slack beyond tolerance is a near-violation, never an assertion.
    """
    if k < 2:
        raise ValueError("the scan needs k >= 2")
    if any(x < k for x in x_grid):
        raise ValueError("grid values must be at least k")
    best = float("inf")
    argmin = (float("nan"),) * 3
    near: list[tuple[float, float, float, float]] = []
    for x in x_grid:
        for i in range(y_samples):
            y = (x - 1.0) + i / (y_samples - 1) if y_samples > 1 else x
            target = real_binom(x, k) - real_binom(y, k)
            z = _solve_z(target, k, hi=float(x))
            slack = real_binom(y, k - 1) + real_binom(z, k - 2) - real_binom(x, k - 1)
            if slack < best:
                best = slack
                argmin = (x, y, z)
            if slack < -tol:
                near.append((x, y, z, slack))
    return ConjectureReport(
        k=k, xs=list(x_grid), min_slack=best, argmin=argmin, near_violations=near
    )
