"""Families of k-subsets of [n] as sorted bit vectors.

Elements are 1-based; element i occupies bit i-1, so numeric order of the
masks coincides with colex order on the sets.  All operations are pure and
return new families.
"""

from __future__ import annotations

import json
from itertools import combinations
from dataclasses import dataclass
from typing import IO, Iterable

from .exact import binom

MAX_GROUND = 64
ISO_SUPPORT_LIMIT = 10
_ISO_BUDGET = 2_000_000


class BudgetError(RuntimeError):
    """A search or enumeration exceeded its configured budget."""


def _mask_of(elements: Iterable[int], n: int) -> int:
    mask = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside ground set [{n}]")
        bit = 1 << (e - 1)
        if mask & bit:
            raise ValueError(f"repeated element {e}")
        mask |= bit
    return mask


def _elements_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


@dataclass(frozen=True)
class KFamily:
    """Family of k-subsets of [n], stored as ascending distinct bit masks.

    k = 0 (the family containing the empty set) is representable so iterated
    shadows can bottom out; the JSON interchange format only carries k >= 1.
    """

    n: int
    k: int
    masks: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.k <= self.n <= MAX_GROUND:
            raise ValueError(f"need 0 <= k <= n <= {MAX_GROUND}")
        if not isinstance(self.masks, tuple):
            object.__setattr__(self, "masks", tuple(self.masks))
        prev = -1
        for m in self.masks:
            if m <= prev:
                raise ValueError("masks must be strictly ascending")
            if m >> self.n:
                raise ValueError("mask outside ground set")
            if m.bit_count() != self.k:
                raise ValueError("set of wrong cardinality")
            prev = m

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> "KFamily":
        masks = sorted({_mask_of(s, n) for s in sets})
        return cls(n, k, tuple(masks))

    def sets(self) -> list[tuple[int, ...]]:
        return [_elements_of(m) for m in self.masks]

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, item: int | Iterable[int]) -> bool:
        mask = item if isinstance(item, int) else _mask_of(item, self.n)
        return mask in set(self.masks)

    def support_mask(self) -> int:
        out = 0
        for m in self.masks:
            out |= m
        return out

    def support(self) -> tuple[int, ...]:
        return _elements_of(self.support_mask())


def shadow(family: KFamily) -> KFamily:
    """All (k-1)-subsets contained in at least one member."""
    if family.k < 1:
        raise ValueError("shadow needs k >= 1")
    out: set[int] = set()
    for m in family.masks:
        rest = m
        while rest:
            low = rest & -rest
            out.add(m ^ low)
            rest ^= low
    return KFamily(family.n, family.k - 1, tuple(sorted(out)))


def iterated_shadow(family: KFamily, i: int) -> KFamily:
    if not 0 <= i <= family.k:
        raise ValueError("iteration count out of range")
    out = family
    for _ in range(i):
        out = shadow(out)
    return out


def upper_shadow(family: KFamily, steps: int = 1) -> KFamily:
    """All (k+steps)-supersets within [n] of some member."""
    if steps < 0 or family.k + steps > family.n:
        raise ValueError("upper shadow out of range")
    full = (1 << family.n) - 1
    current = set(family.masks)
    for _ in range(steps):
        grown: set[int] = set()
        for m in current:
            rest = full & ~m
            while rest:
                low = rest & -rest
                grown.add(m | low)
                rest ^= low
        current = grown
    return KFamily(family.n, family.k + steps, tuple(sorted(current)))


def link(family: KFamily, x: int) -> KFamily:
    """Members containing x, with x removed; a (k-1)-family on the same ground."""
    if not 1 <= x <= family.n:
        raise ValueError("element outside ground set")
    bit = 1 << (x - 1)
    masks = sorted(m ^ bit for m in family.masks if m & bit)
    return KFamily(family.n, family.k - 1, tuple(masks))


def delete_star(family: KFamily, x: int) -> KFamily:
    """Members not containing x."""
    if not 1 <= x <= family.n:
        raise ValueError("element outside ground set")
    bit = 1 << (x - 1)
    return KFamily(family.n, family.k, tuple(m for m in family.masks if not m & bit))


def degree(family: KFamily, x: int) -> int:
    if not 1 <= x <= family.n:
        raise ValueError("element outside ground set")
    bit = 1 << (x - 1)
    return sum(1 for m in family.masks if m & bit)


def min_degree_element(family: KFamily) -> int:
    """Support element of minimum degree, ties broken by smallest label."""
    support = family.support()
    if not support:
        raise ValueError("family has empty support")
    return min(support, key=lambda x: (degree(family, x), x))


def colex_rank(elements: Iterable[int]) -> int:
    """0-based colex rank: sum of C(x_i - 1, i) over the ascending elements."""
    xs = sorted(elements)
    if len(set(xs)) != len(xs) or (xs and xs[0] < 1):
        raise ValueError("need distinct positive elements")
    return sum(binom(x - 1, i) for i, x in enumerate(xs, start=1))


def colex_unrank(rank: int, k: int) -> tuple[int, ...]:
    """Inverse of colex_rank for k-sets."""
    if rank < 0 or k < 0:
        raise ValueError("rank and k must be nonnegative")
    out: list[int] = []
    rem = rank
    for j in range(k, 0, -1):
        x = j
        while binom(x, j) <= rem:
            x += 1
        out.append(x)
        rem -= binom(x - 1, j)
    if rem:
        raise ValueError("rank does not unrank cleanly")
    return tuple(reversed(out))


def initial_segment(n: int, k: int, m: int) -> KFamily:
    """First m sets of C([n], k) in colex order."""
    if k < 1 or not 0 <= m <= binom(n, k):
        raise ValueError("segment length out of range")
    return KFamily.from_sets(n, k, (colex_unrank(r, k) for r in range(m)))


def join(a: KFamily | Iterable[Iterable[int]], b: KFamily | Iterable[Iterable[int]]) -> KFamily:
    """All unions x | y for x in a, y in b; the unions must share one size."""

    def normalize(fam) -> tuple[int, list[int]]:
        if isinstance(fam, KFamily):
            return fam.n, list(fam.masks)
        sets = [tuple(s) for s in fam]
        n = max((max(s) for s in sets if s), default=1)
        return n, [_mask_of(s, n) for s in sets]

    na, ma = normalize(a)
    nb, mb = normalize(b)
    n = max(na, nb)
    unions = {x | y for x in ma for y in mb}
    if not unions:
        raise ValueError("cannot join empty families")
    sizes = {u.bit_count() for u in unions}
    if len(sizes) != 1:
        raise ValueError(f"joined sets have mixed sizes {sorted(sizes)}")
    return KFamily(n, sizes.pop(), tuple(sorted(unions)))


def compact_support(family: KFamily) -> KFamily:
    """Relabel the support order-preservingly onto [s]."""
    support = family.support()
    relabel = {x: i + 1 for i, x in enumerate(support)}
    s = len(support)
    return KFamily.from_sets(
        max(s, family.k), family.k,
        ([relabel[e] for e in elems] for elems in family.sets()),
    )


def _stable_refine(
    color: dict[int, int],
    support: list[int],
    pair_deg: dict[tuple[int, int], int],
) -> dict[int, int]:
    """Iterate degree/codegree refinement to a fixpoint, rank-compressed.

    Signatures are built from the current ranks and pairwise co-degrees
    only, so the result depends on the abstract structure alone and
    isomorphic inputs refine to corresponding rank colorings.
    """
    while True:
        signature = {
            x: (
                color[x],
                tuple(sorted((color[y], pair_deg[(x, y)]) for y in support if y != x)),
            )
            for x in support
        }
        ranks = {sig: i for i, sig in enumerate(sorted(set(signature.values())))}
        new = {x: ranks[signature[x]] for x in support}
        if len(set(new.values())) == len(set(color.values())):
            return new
        color = new


def canonical_form(family: KFamily) -> KFamily:
    """Least relabeled image over structure-respecting relabelings.

    Individualization-refinement search: refine the support coloring by
    degrees and co-degrees, branch over the members of the first class that
    is still ambiguous, and take the least member image over all discrete
    leaves.  Every step is color-driven, so isomorphic families explore
    corresponding search trees and receive equal canonical forms.
    """
    support = list(family.support())
    s = len(support)
    if s > ISO_SUPPORT_LIMIT:
        raise ValueError(f"support larger than the {ISO_SUPPORT_LIMIT}-element search bound")
    if s == 0:
        return KFamily(max(family.k, 1) if family.k else 1, family.k, family.masks)
    if len(family) == binom(s, k := family.k):
        return KFamily.from_sets(s, k, combinations(range(1, s + 1), k))
    pair_deg = {
        (x, y): sum(
            1 for m in family.masks if m & (1 << (x - 1)) and m & (1 << (y - 1))
        )
        for x in support
        for y in support
        if x != y
    }
    sets = family.sets()
    best: tuple[int, ...] | None = None
    leaves = 0

    def descend(color: dict[int, int]) -> None:
        nonlocal best, leaves
        classes: dict[int, list[int]] = {}
        for x in support:
            classes.setdefault(color[x], []).append(x)
        ambiguous = [c for c in sorted(classes) if len(classes[c]) > 1]
        if not ambiguous:
            leaves += 1
            if leaves > _ISO_BUDGET:
                raise BudgetError("canonical form search too large")
            mapping = {x: color[x] + 1 for x in support}
            image = tuple(
                sorted(sum(1 << (mapping[e] - 1) for e in elems) for elems in sets)
            )
            if best is None or image < best:
                best = image
            return
        target = classes[ambiguous[0]]
        for chosen in target:
            split = {
                x: (color[x], 0 if x == chosen else 1) for x in support
            }
            ranks = {sig: i for i, sig in enumerate(sorted(set(split.values())))}
            descend(_stable_refine({x: ranks[split[x]] for x in support}, support, pair_deg))

    descend(_stable_refine({x: degree(family, x) for x in support}, support, pair_deg))
    assert best is not None
    return KFamily(s, family.k, best)


def are_isomorphic(a: KFamily, b: KFamily) -> bool:
    """True iff some relabeling of the supports maps a onto b."""
    if a.k != b.k or len(a) != len(b):
        return False
    sa, sb = a.support(), b.support()
    if len(sa) != len(sb):
        return False
    da = sorted(degree(a, x) for x in sa)
    db = sorted(degree(b, x) for x in sb)
    if da != db:
        return False
    return canonical_form(a) == canonical_form(b)


def to_dict(family: KFamily) -> dict:
    return {"n": family.n, "k": family.k, "sets": [list(s) for s in family.sets()]}


def from_dict(data: dict) -> KFamily:
    try:
        n, k, sets = data["n"], data["k"], data["sets"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed family object: {exc}") from None
    if not (isinstance(n, int) and isinstance(k, int) and 1 <= k <= n <= MAX_GROUND):
        raise ValueError("need integers 1 <= k <= n <= 64")
    fam = KFamily.from_sets(n, k, sets)
    if len(fam) != len(sets):
        raise ValueError("duplicate sets in family")
    return fam


def write_family(family: KFamily, fp: IO[str]) -> None:
    if family.k < 1:
        raise ValueError("interchange format requires k >= 1")
    json.dump(to_dict(family), fp, sort_keys=True)
    fp.write("\n")


def read_family(fp: IO[str]) -> KFamily:
    return from_dict(json.load(fp))
