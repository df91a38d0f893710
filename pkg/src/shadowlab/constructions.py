"""Explicit families: forbidden-pair constructions, block unions, perturbed segments."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .exact import binom, decompose, seq_value
from .families import (
    KFamily,
    are_isomorphic,
    colex_rank,
    colex_unrank,
    compact_support,
    degree,
    initial_segment,
    join,
    shadow,
)
from .extremal import kk_bound


@dataclass(frozen=True)
class ForbiddenPairSpec:
    """Parameters for the family of k-sets avoiding a list of forbidden pairs.

    ``pairs`` are 2-subsets of [n]; an optional explicit deletion family (on
    the ground set away from the pairs) or a regular deletion shape (t, r)
    thins the family without changing its shadow.
    """

    n: int
    k: int
    pairs: tuple[tuple[int, int], ...]
    deletion: KFamily | None = None
    regular_deletion: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        seen = set()
        for pair in self.pairs:
            x, y = pair
            if not (1 <= x < y <= self.n):
                raise ValueError(f"bad pair {pair}")
            if pair in seen:
                raise ValueError(f"repeated pair {pair}")
            seen.add(pair)

    @classmethod
    def complete_pairs(
        cls, n: int, k: int, m: int, regular_deletion: tuple[int, int] | None = None
    ) -> "ForbiddenPairSpec":
        """All pairs inside [m]: the shape with closed-form cardinalities."""
        return cls(
            n, k, tuple(combinations(range(1, m + 1), 2)), None, regular_deletion
        )


def regular_family(ground_size: int, k: int, r: int) -> KFamily:
    """r cyclic-shift block partitions of the ground cycle; r-regular k-sets."""
    if ground_size % k:
        raise ValueError("k must divide the ground size")
    t = ground_size // k
    if not 1 <= r <= min(k, t):
        raise ValueError("need 1 <= r <= min(k, ground_size / k)")
    sets = []
    for shift in range(r):
        for block in range(t):
            sets.append(
                [((block * k + s + shift) % ground_size) + 1 for s in range(k)]
            )
    family = KFamily.from_sets(ground_size, k, sets)
    assert len(family) == t * r
    return family


def forbidden_pair_family(spec: ForbiddenPairSpec) -> KFamily:
    """Materialize the k-sets of [n] containing none of the forbidden pairs."""
    n, k = spec.n, spec.k
    pair_masks = [(1 << (x - 1)) | (1 << (y - 1)) for x, y in spec.pairs]
    keep = []
    for s in combinations(range(1, n + 1), k):
        mask = 0
        for e in s:
            mask |= 1 << (e - 1)
        if all(mask & pm != pm for pm in pair_masks):
            keep.append(mask)
    family = KFamily(n, k, tuple(sorted(keep)))
    deletion = spec.deletion
    if spec.regular_deletion is not None:
        if deletion is not None:
            raise ValueError("give either an explicit or a regular deletion")
        t, r = spec.regular_deletion
        m = _pair_support_size(spec)
        if n != t * k + m:
            raise ValueError("regular deletion needs n = t*k + m")
        shifted = regular_family(t * k, k, r)
        deletion = KFamily.from_sets(
            n, k, ([e + m for e in s] for s in shifted.sets())
        )
    if deletion is not None:
        pair_support = 0
        for pm in pair_masks:
            pair_support |= pm
        del_masks = set(deletion.masks)
        for dm in del_masks:
            if dm & pair_support:
                raise ValueError("deletion must avoid the forbidden-pair support")
            if dm not in set(family.masks):
                raise ValueError("deletion is not inside the family")
        family = KFamily(n, k, tuple(m for m in family.masks if m not in del_masks))
    return family


def _pair_support_size(spec: ForbiddenPairSpec) -> int:
    support = {e for pair in spec.pairs for e in pair}
    m = len(support)
    if support != set(range(1, m + 1)) or spec.pairs != tuple(
        combinations(range(1, m + 1), 2)
    ):
        raise ValueError("closed-form cardinalities need all pairs inside [m]")
    return m


def _avoiding_count(n: int, k: int, m: int) -> int:
    """|k-sets of [n] with at most one element in [m]| = C(n-m, k) + m*C(n-m, k-1)."""
    return binom(n - m, k) + m * binom(n - m, k - 1)


def forbidden_pair_cardinalities(spec: ForbiddenPairSpec) -> dict:
    """Closed-form cardinalities, cascades, and extremality verdicts.

    Works at any ground size; requires the all-pairs-inside-[m] shape.  The
    report covers the undeleted family, the optional regular deletion, and
    the per-element split into link and deleted star for both element
    classes (inside and outside [m]).
    """
    n, k = spec.n, spec.k
    m = _pair_support_size(spec)
    if m < 3 or n < m + 3:
        raise ValueError("need m >= 3 and n >= m + 3")
    if spec.deletion is not None:
        raise ValueError("the arithmetic report needs a regular deletion shape")

    def entry(size: int, shadow_size: int, level: int) -> dict:
        return {
            "size": size,
            "cascade": list(decompose(size, level).terms),
            "shadow": shadow_size,
            "shadow_cascade": list(decompose(shadow_size, level - 1).terms),
            "extremal": shadow_size == kk_bound(size, level, 1),
        }

    base_size = _avoiding_count(n, k, m)
    base_shadow = _avoiding_count(n, k - 1, m)
    report: dict = {
        "n": n,
        "k": k,
        "m": m,
        "inclusion_exclusion": binom(n, k)
        - sum(binom(m, i) * binom(n - m, k - i) for i in range(2, k + 1)),
        "base": entry(base_size, base_shadow, k),
    }
    tr = 0
    if spec.regular_deletion is not None:
        t, r = spec.regular_deletion
        if n != t * k + m:
            raise ValueError("regular deletion needs n = t*k + m")
        if not 1 <= r <= min(k, t):
            raise ValueError("need 1 <= r <= min(k, t)")
        tr = t * r
        report["deletion"] = {"t": t, "r": r, "size": tr}
        report["thinned"] = entry(base_size - tr, base_shadow, k)

    def element_entry(x_in_pairs: bool) -> dict:
        mm = m - 1 if x_in_pairs else m
        link_size = _avoiding_count(n - 1, k - 1, mm)
        link_shadow = _avoiding_count(n - 1, k - 2, mm)
        rest_size = _avoiding_count(n - 1, k, mm)
        rest_shadow = _avoiding_count(n - 1, k - 1, mm)
        if tr:
            if x_in_pairs:
                rest_size -= tr
            else:
                link_size -= spec.regular_deletion[1]
                rest_size -= tr - spec.regular_deletion[1]
        total = report["thinned"] if tr else report["base"]
        out = {
            "link": entry(link_size, link_shadow, k - 1),
            "deleted": entry(rest_size, rest_shadow, k),
        }
        out["numeric_identity"] = kk_bound(total["size"], k, 1) == kk_bound(
            rest_size, k, 1
        ) + seq_value(decompose(link_size, k - 1), k - 2)
        return out

    report["element_outside_pairs"] = element_entry(False)
    report["element_inside_pairs"] = element_entry(True)
    return report


def example_32_family(n: int, k: int, variant: str) -> KFamily:
    """Block unions that fail only the extremality clause at one element.

    Variant "b" glues a full lower layer, a disjoint-interval block joined to
    the top element, and a segment joined to n; the designated element is n
    and the non-extremal part is the deleted star.  Variant "c" replaces the
    joined block by a deliberately non-extremal subfamily of the shadow,
    joined to n + 1, making the link the non-extremal part.  Both families
    have exactly the cardinality of the full k-layer on [n].
    """
    if k < 3 or n <= k:
        raise ValueError("need k >= 3 and n > k")
    m2 = binom(n - 2, k - 2)
    if variant == "b":
        if 2 * n > 64:
            raise ValueError("ground set too large")
        lower = initial_segment(n, k, binom(n - 1, k))
        interval = list(combinations(range(n + 1, 2 * n - 1), k - 1))
        block = join(interval, [[2 * n]])
        tail = join(initial_segment(n, k - 1, m2), [[n]])
        family = KFamily(
            2 * n,
            k,
            tuple(sorted(set(lower.masks) | set(block.masks) | set(tail.masks))),
        )
        assert len(family) == binom(n, k)
        return compact_support(family)
    if variant == "c":
        m1 = binom(n - 1, k) + binom(n - 2, k - 1)
        segment = initial_segment(n, k, m1)
        block = join(_nonextremal_subfamily(n, k, m1, m2), [[n + 1]])
        family = KFamily(
            n + 1,
            k,
            tuple(sorted(set(segment.masks) | set(block.masks))),
        )
        assert len(family) == binom(n, k)
        return family
    raise ValueError("variant must be 'b' or 'c'")


def _nonextremal_subfamily(n: int, k: int, m1: int, size: int) -> KFamily:
    """A non-extremal (k-1)-family of the given size inside the segment shadow.

    Starts from the colex segment of that size and swaps one of its sets for
    a later set of the shadow until extremality breaks; the last position is
    tried first, then earlier ones.
    """
    shadow_len = kk_bound(m1, k, 1)
    if size >= shadow_len:
        raise ValueError("no room to perturb inside the shadow")
    segment = [colex_unrank(rank, k - 1) for rank in range(size)]
    bound = kk_bound(size, k - 1, 1)
    for drop in range(size - 1, -1, -1):
        base = segment[:drop] + segment[drop + 1 :]
        for successor in range(size, shadow_len):
            candidate = KFamily.from_sets(
                n, k - 1, base + [colex_unrank(successor, k - 1)]
            )
            if len(shadow(candidate)) > bound:
                return candidate
    raise RuntimeError("no non-extremal subfamily found in the shadow")


def example_33_family(n: int, k: int) -> KFamily:
    """Disjoint-interval union failing only the inclusion clause.

    A colex segment on [n] plus a segment of (k-1)-sets of the interval
    [n+2, 2n] joined to 2n+1; the designated element is the top label of the
    compacted family.
    """
    if k < 3 or n <= k:
        raise ValueError("need k >= 3 and n > k")
    if 2 * n + 1 > 64:
        raise ValueError("ground set too large")
    m1 = binom(n - 1, k) + binom(n - 2, k - 1)
    m2 = binom(n - 2, k - 2)
    segment = initial_segment(n, k, m1)
    inner = initial_segment(n - 1, k - 1, m2)
    shifted = [[e + n + 1 for e in s] for s in inner.sets()]
    block = join(shifted, [[2 * n + 1]])
    family = KFamily(
        2 * n + 1, k, tuple(sorted(set(segment.masks) | set(block.masks)))
    )
    assert len(family) == binom(n, k)
    return compact_support(family)


def _transposed_masks(family: KFamily, x: int, y: int) -> set[int]:
    """Images of the member masks under the transposition (x, y)."""
    bx, by = 1 << (x - 1), 1 << (y - 1)
    out = set()
    for m in family.masks:
        has_x, has_y = bool(m & bx), bool(m & by)
        if has_x != has_y:
            m ^= bx | by
        out.add(m)
    return out


@dataclass
class PerturbationResult:
    """Swap of the last segment member for a set off its cascade position.

    ``kind`` is "ok" for a verified new extremal family, "in_segment" when
    the replacement already sits inside the segment (no family is formed),
    or "isomorphic" when the swapped family merely relabels the segment
    (the family is kept for inspection).  Only "ok" results carry the
    guarantee of a non-isomorphic extremal family with the segment's shadow.
    """

    segment: KFamily
    removed: tuple[int, ...]
    added: tuple[int, ...]
    kind: str
    family: KFamily | None = None

    @property
    def degenerate(self) -> bool:
        return self.kind != "ok"


def perturbed_colex(n: int, k: int, m: int) -> PerturbationResult:
    """Perturb the length-m colex segment along its last cascade diagonal.

    Requires the cascade of m to have full length k and its last diagonal to
    start strictly after index 0 (otherwise the segment is unique anyway).
    The last member trades the element at the diagonal's start for the
    successor of the smallest cascade entry.  Both failure modes are tagged
    results, not errors: the replacement can land inside the segment, and an
    off-segment replacement can still relabel the segment, because swapping
    the two smallest-cascade labels fixes everything else.  Desk-scale scans
    show every admissible instance lands in one of the two; genuinely new
    extremal classes at these sizes come from enumeration or the
    forbidden-pair constructions instead.
    """
    a = decompose(m, k)
    if len(a.terms) != k:
        raise ValueError("the perturbation needs a full-length cascade")
    terms = a.terms
    alpha = terms[k - 1]
    r = next(i for i in range(k) if terms[i] - (k - i) == alpha - 1)
    if r == 0:
        raise ValueError(
            "the whole cascade sits on one diagonal; the segment is unique here"
        )
    x_set = tuple(sorted([t + 1 for t in terms[:-1]] + [alpha]))
    if x_set[-1] > n:
        raise ValueError("segment does not fit the ground set")
    removed_elem = terms[r] + 1 if r <= k - 2 else alpha
    added_elem = alpha + 1
    x_new = tuple(sorted(set(x_set) - {removed_elem} | {added_elem}))
    segment = initial_segment(n, k, m)
    assert colex_rank(x_set) == m - 1
    if colex_rank(x_new) < m:
        return PerturbationResult(
            segment=segment, removed=x_set, added=x_new, kind="in_segment"
        )
    masks = set(segment.masks)
    masks.remove(sum(1 << (e - 1) for e in x_set))
    masks.add(sum(1 << (e - 1) for e in x_new))
    family = KFamily(n, k, tuple(sorted(masks)))
    assert len(family) == m
    if shadow(family).masks != shadow(segment).masks:
        raise RuntimeError("perturbation changed the shadow")
    isomorphic: bool | None = None
    if _transposed_masks(family, removed_elem, added_elem) == set(segment.masks):
        isomorphic = True  # the swap is a pure relabeling
    else:
        seg_degrees = sorted(degree(segment, x) for x in segment.support())
        fam_degrees = sorted(degree(family, x) for x in family.support())
        if seg_degrees != fam_degrees:
            isomorphic = False
        elif len(family.support()) <= 10:
            isomorphic = are_isomorphic(family, segment)
    if isomorphic:
        return PerturbationResult(
            segment=segment,
            removed=x_set,
            added=x_new,
            kind="isomorphic",
            family=family,
        )
    return PerturbationResult(
        segment=segment, removed=x_set, added=x_new, kind="ok", family=family
    )
