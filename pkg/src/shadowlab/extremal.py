"""Shadow-minimization bounds, extremality tests, characterization, enumeration.

The exhaustive machinery indexes families of a small layer C([n], k) by the
bit pattern of chosen positions and keeps one shared table of shadow masks,
so full sweeps over every subfamily are flat table loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .exact import Seq, binom, decompose, lex_cmp, seq_minus, seq_value
from .families import (
    BudgetError,
    KFamily,
    are_isomorphic,
    canonical_form,
    degree,
    delete_star,
    link,
    min_degree_element,
    shadow,
)

SWEEP_LAYER_LIMIT = 20  # 2^20 table entries; larger layers take slower paths
COMBINATION_BUDGET = 3_000_000


def kk_bound(m: int, k: int, i: int = 1) -> int:
    """Lower bound for the i-iterated shadow of any m-member k-family."""
    if m < 0:
        raise ValueError("family size must be nonnegative")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 <= i <= k - 1:
        raise ValueError("iteration out of range")
    if i == 0:
        return m
    return seq_value(decompose(m, k), k - i)


def is_extremal(family: KFamily) -> bool:
    """True iff the shadow meets the lower bound exactly."""
    if not family.masks:
        raise ValueError("extremality is undefined for the empty family")
    if family.k == 1:
        return True  # the shadow is the single empty set
    return len(shadow(family)) == kk_bound(len(family), family.k, 1)


def shadow_chain_check(family: KFamily) -> bool:
    """For an extremal family, all iterated shadows must meet their bounds."""
    if not is_extremal(family):
        raise ValueError("shadow chain check requires an extremal family")
    a = decompose(len(family), family.k)
    current = family
    for i in range(1, family.k):
        current = shadow(current)
        if len(current) != seq_value(a, family.k - i):
            return False
    return True


@dataclass
class ElementCheck:
    """Outcome of the characterization conditions at one support element."""

    x: int
    link_size: int
    deleted_size: int
    threshold: int
    branch: str  # "strict" | "equality" | "neither"
    inclusion: bool | None = None
    deleted_extremal: bool | None = None
    link_extremal: bool | None = None
    numeric: bool | None = None
    ok: bool = False


@dataclass
class CharacterizationReport:
    n: int
    k: int
    size: int
    cascade: tuple[int, ...]
    elements: list[ElementCheck]
    verdict: bool
    witnesses: tuple[int, ...]

    def element(self, x: int) -> ElementCheck:
        for check in self.elements:
            if check.x == x:
                return check
        raise KeyError(x)


def _check_element(family: KFamily, x: int, a: Seq) -> ElementCheck:
    k = family.k
    m = len(family)
    lk = link(family, x)
    rest = delete_star(family, x)
    threshold = seq_value(seq_minus(a, 1), k)
    check = ElementCheck(
        x=x,
        link_size=len(lk),
        deleted_size=len(rest),
        threshold=threshold,
        branch="neither",
    )
    if len(rest) < threshold:
        return check
    shadow_rest = shadow(rest) if rest.masks else KFamily(family.n, k - 1, ())
    link_masks = set(lk.masks)
    rest_masks = set(shadow_rest.masks)
    if len(rest) > threshold:
        check.branch = "strict"
        check.inclusion = link_masks <= rest_masks
        check.deleted_extremal = is_extremal(rest)
        check.link_extremal = is_extremal(lk)
        b = decompose(len(rest), k)
        c = decompose(len(lk), k - 1)
        check.numeric = seq_value(a, k - 1) == seq_value(b, k - 1) + seq_value(c, k - 2)
        check.ok = bool(
            check.inclusion
            and check.deleted_extremal
            and check.link_extremal
            and check.numeric
        )
    else:
        check.branch = "equality"
        check.inclusion = rest_masks <= link_masks
        check.link_extremal = is_extremal(lk)
        check.ok = bool(check.inclusion and check.link_extremal)
    return check


def characterize(family: KFamily) -> CharacterizationReport:
    """Evaluate the recursive extremality conditions at every support element.

    Requires k >= 2 and full support: every element of [n] must have positive
    degree.  The overall verdict is the conjunction over elements; any single
    passing element already certifies extremality.
    """
    if family.k < 2:
        raise ValueError("characterization requires k >= 2")
    if not family.masks:
        raise ValueError("characterization requires a nonempty family")
    if family.support() != tuple(range(1, family.n + 1)):
        raise ValueError("support gap: some element of [n] has degree zero")
    a = decompose(len(family), family.k)
    elements = [_check_element(family, x, a) for x in range(1, family.n + 1)]
    return CharacterizationReport(
        n=family.n,
        k=family.k,
        size=len(family),
        cascade=a.terms,
        elements=elements,
        verdict=all(e.ok for e in elements),
        witnesses=tuple(e.x for e in elements if e.ok),
    )


def certify_by_witness(family: KFamily, x: int) -> bool:
    """Single-element certificate: conditions holding at x alone prove extremality."""
    if family.k < 2:
        raise ValueError("characterization requires k >= 2")
    if family.support() != tuple(range(1, family.n + 1)):
        raise ValueError("support gap: some element of [n] has degree zero")
    a = decompose(len(family), family.k)
    return _check_element(family, x, a).ok


def min_degree_bound_check(family: KFamily) -> bool:
    """Deleting a minimum-degree star leaves a cascade at least a - 1."""
    if len(family) <= 1 or not (family.n > family.k > 1):
        raise ValueError("need |S| > 1 and n > k > 1")
    if family.support() != tuple(range(1, family.n + 1)):
        raise ValueError("support gap: some element of [n] has degree zero")
    x = min_degree_element(family)
    a = decompose(len(family), family.k)
    b = decompose(len(family) - degree(family, x), family.k)
    return bool(b.terms) and lex_cmp(b, seq_minus(a, 1)) >= 0


class _Layer:
    """Shared tables for exhaustive sweeps over subfamilies of C([n], k)."""

    def __init__(self, n: int, k: int):
        if not 1 <= k <= n:
            raise ValueError("need 1 <= k <= n")
        self.n, self.k = n, k
        self.masks = [sum(1 << (e - 1) for e in s) for s in combinations(range(1, n + 1), k)]
        self.masks.sort()
        self.size = len(self.masks)
        subs = [sum(1 << (e - 1) for e in s) for s in combinations(range(1, n + 1), k - 1)]
        subs.sort()
        self.sub_index = {m: i for i, m in enumerate(subs)}
        self.sub_masks = subs
        self.shed = []
        for m in self.masks:
            bits = 0
            rest = m
            while rest:
                low = rest & -rest
                bits |= 1 << self.sub_index[m ^ low]
                rest ^= low
            self.shed.append(bits)
        self._shadow_table: list[int] | None = None
        self._pop_table: list[int] | None = None

    def tables(self) -> tuple[list[int], list[int]]:
        """Per-subfamily shadow masks and member counts, built on first use."""
        if self._shadow_table is None:
            if self.size > SWEEP_LAYER_LIMIT:
                raise BudgetError(f"layer of size {self.size} exceeds the sweep limit")
            total = 1 << self.size
            shed = self.shed
            low_index = {1 << i: i for i in range(self.size)}
            sh = [0] * total
            pop = [0] * total
            for f in range(1, total):
                low = f & -f
                rest = f ^ low
                sh[f] = sh[rest] | shed[low_index[low]]
                pop[f] = pop[rest] + 1
            self._shadow_table = sh
            self._pop_table = pop
        return self._shadow_table, self._pop_table

    def family(self, pattern: int) -> KFamily:
        chosen = [self.masks[i] for i in range(self.size) if pattern >> i & 1]
        return KFamily(self.n, self.k, tuple(chosen))


@lru_cache(maxsize=8)
def _layer(n: int, k: int) -> _Layer:
    return _Layer(n, k)


@lru_cache(maxsize=8)
def _min_shadow_table(n: int, k: int) -> list[int]:
    """min |shadow| per family size over all subfamilies of C([n], k)."""
    layer = _layer(n, k)
    sh, pop = layer.tables()
    best = [0] + [1 << 62] * layer.size
    for f in range(1, 1 << layer.size):
        count = sh[f].bit_count()
        m = pop[f]
        if count < best[m]:
            best[m] = count
    return best


def brute_force_min_shadow(n: int, k: int, m: int, budget: int | None = None) -> int:
    """Minimum shadow size over all m-subsets of C([n], k), by enumeration."""
    layer_size = binom(n, k)
    if not 1 <= m <= layer_size:
        raise ValueError("family size out of range")
    if k == 1:
        return 1
    if layer_size <= SWEEP_LAYER_LIMIT:
        return _min_shadow_table(n, k)[m]
    if binom(layer_size, m) > (COMBINATION_BUDGET if budget is None else budget):
        raise BudgetError(
            f"C({layer_size}, {m}) combinations exceed the enumeration budget"
        )
    layer = _layer(n, k)
    best: int | None = None
    for chosen in combinations(layer.shed, m):
        acc = 0
        for bits in chosen:
            acc |= bits
        count = acc.bit_count()
        if best is None or count < best:
            best = count
    assert best is not None
    return best


@lru_cache(maxsize=4)
def _extremal_patterns_by_size(n: int, k: int) -> dict[int, list[int]]:
    """All extremal subfamilies of the layer, grouped by size, as bit patterns."""
    layer = _layer(n, k)
    sh, pop = layer.tables()
    bounds = [0] + [kk_bound(m, k, 1) for m in range(1, layer.size + 1)]
    out: dict[int, list[int]] = {m: [] for m in range(1, layer.size + 1)}
    if k == 1:
        for f in range(1, 1 << layer.size):
            out[pop[f]].append(f)
        return out
    for f in range(1, 1 << layer.size):
        if sh[f].bit_count() == bounds[pop[f]]:
            out[pop[f]].append(f)
    return out


def _enum_exhaustive(n: int, k: int, m: int) -> list[KFamily]:
    layer = _layer(n, k)
    if layer.size > SWEEP_LAYER_LIMIT:
        raise BudgetError("layer too large for exhaustive enumeration")
    patterns = _extremal_patterns_by_size(n, k).get(m, [])
    return [layer.family(p) for p in patterns]


@lru_cache(maxsize=None)
def _enum_recursive(n: int, k: int, m: int) -> frozenset[tuple[int, ...]]:
    """Extremal families on ground [n] generated by the recursive branches.

    A family either avoids n entirely, or splits at n into a deleted part B
    and a link L; the strict branch needs both parts extremal with the
    numeric identity, the equality branch needs an extremal L covering the
    shadow of an otherwise arbitrary B.
    """
    if m == 0:
        return frozenset({()})
    if k > n or m > binom(n, k):
        return frozenset()
    if k == 1:
        return frozenset(
            tuple(sorted(sum(1 << (e - 1) for e in (x,)) for x in chosen))
            for chosen in combinations(range(1, n + 1), m)
        )
    if m == 1:
        return frozenset(
            (sum(1 << (e - 1) for e in s),) for s in combinations(range(1, n + 1), k)
        )
    out: set[tuple[int, ...]] = set(_enum_recursive(n - 1, k, m))
    a = decompose(m, k)
    threshold = seq_value(seq_minus(a, 1), k)
    top_bit = 1 << (n - 1)
    bound_m = seq_value(a, k - 1)
    for d in range(1, min(binom(n - 1, k - 1), m) + 1):
        rest = m - d
        if rest > threshold:
            link_part = seq_value(decompose(d, k - 1), k - 2)
            if bound_m != kk_bound(rest, k, 1) + link_part:
                continue
            links = _enum_recursive(n - 1, k - 1, d)
            deletes = _enum_recursive(n - 1, k, rest)
            for lmask in links:
                lset = set(lmask)
                for bmask in deletes:
                    if not _shadow_covers(bmask, lset, k):
                        continue
                    fam = tuple(sorted(bmask + tuple(x | top_bit for x in lmask)))
                    out.add(fam)
        elif rest == threshold:
            links = _enum_recursive(n - 1, k - 1, d)
            for lmask in links:
                lset = set(lmask)
                universe = _covered_supersets(lset, n - 1, k)
                if len(universe) < rest:
                    continue
                if binom(len(universe), rest) > COMBINATION_BUDGET:
                    raise BudgetError("equality branch exceeds the combination budget")
                for chosen in combinations(universe, rest):
                    fam = tuple(sorted(chosen + tuple(x | top_bit for x in lmask)))
                    out.add(fam)
    return frozenset(out)


def _shadow_covers(bmask: tuple[int, ...], link_masks: set[int], k: int) -> bool:
    """True iff every link set lies in the shadow of the deleted part."""
    covered: set[int] = set()
    for m in bmask:
        rest = m
        while rest:
            low = rest & -rest
            covered.add(m ^ low)
            rest ^= low
    return link_masks <= covered


def _covered_supersets(link_masks: set[int], n: int, k: int) -> list[int]:
    """k-sets of [n] all of whose (k-1)-subsets lie in the link."""
    out = []
    for s in combinations(range(1, n + 1), k):
        m = sum(1 << (e - 1) for e in s)
        rest = m
        good = True
        while rest:
            low = rest & -rest
            if m ^ low not in link_masks:
                good = False
                break
            rest ^= low
        if good:
            out.append(m)
    return out


def enumerate_extremal(
    n: int, k: int, m: int, up_to_iso: bool = False, method: str = "exhaustive"
) -> list[KFamily]:
    """All extremal m-subsets of C([n], k); canonical forms if up_to_iso."""
    if not 1 <= m <= binom(n, k):
        raise ValueError("family size out of range")
    if method == "exhaustive":
        families = _enum_exhaustive(n, k, m)
    elif method == "recursive":
        if n > 10:
            raise BudgetError("recursive enumeration bounded at n <= 10")
        families = [
            KFamily(n, k, masks) for masks in sorted(_enum_recursive(n, k, m))
        ]
        if k > 1:
            families = [f for f in families if is_extremal(f)]
    else:
        raise ValueError(f"unknown method {method!r}")
    if not up_to_iso:
        return families
    classes: list[KFamily] = []
    seen: set[tuple[int, tuple[int, ...]]] = set()
    for family in families:
        canon = canonical_form(family)
        key = (canon.n, canon.masks)
        if key not in seen:
            seen.add(key)
            classes.append(canon)
    return classes


def uniqueness_predicate(n: int, k: int, m: int) -> bool:
    """True iff the colex segment should be the unique extremal family."""
    if not 0 < m <= binom(n, k):
        raise ValueError("family size out of range")
    a = decompose(m, k)
    if len(a) < k:
        return True
    return any(m == binom(np, k) - 1 for np in range(k + 1, n + 1))


# ---------------------------------------------------------------------------
# flat-table sweeps over every subfamily of one layer

class _SweepTables:
    """Precomputed per-element tables for full characterization sweeps at k = 3."""

    def __init__(self, n: int):
        self.n = n
        layer = _layer(n, 3)
        self.layer = layer
        self.shadow_table, self.pop_table = layer.tables()
        self.member = [0] * (n + 1)  # per element: positions whose triple contains it
        for i, mask in enumerate(layer.masks):
            for x in range(1, n + 1):
                if mask >> (x - 1) & 1:
                    self.member[x] |= 1 << i
        # per (element, layer position): the link pair as a sub-layer bit
        self.pair_bit = [[0] * layer.size for _ in range(n + 1)]
        for x in range(1, n + 1):
            bit = 1 << (x - 1)
            for i, mask in enumerate(layer.masks):
                if mask & bit:
                    self.pair_bit[x][i] = 1 << layer.sub_index[mask ^ bit]
        # support of each subfamily of the pair layer (vertex masks)
        pair_count = len(layer.sub_masks)
        self.pair_support = [0] * (1 << pair_count)
        low_index = {1 << i: i for i in range(pair_count)}
        for f in range(1, 1 << pair_count):
            low = f & -f
            self.pair_support[f] = self.pair_support[f ^ low] | layer.sub_masks[low_index[low]]
        # triple-support of each subfamily, for iterating over support elements
        self.tri_support = [0] * (1 << layer.size)
        tri_low = {1 << i: i for i in range(layer.size)}
        sup = self.tri_support
        for f in range(1, 1 << layer.size):
            low = f & -f
            sup[f] = sup[f ^ low] | layer.masks[tri_low[low]]
        size = layer.size
        self.bound3 = [0] + [kk_bound(m, 3, 1) for m in range(1, size + 1)]
        self.threshold3 = [0] + [
            seq_value(seq_minus(decompose(m, 3), 1), 3) for m in range(1, size + 1)
        ]
        pair_layer = binom(n, 2)
        self.bound2 = [0] + [kk_bound(m, 2, 1) for m in range(1, pair_layer + 1)]


@lru_cache(maxsize=2)
def _sweep_tables(n: int) -> _SweepTables:
    return _SweepTables(n)


def _fast_characterize_verdict(tables: _SweepTables, pattern: int) -> bool:
    """Characterization verdict for a k = 3 subfamily given as layer positions.

    Mirrors ``characterize`` exactly, but over the support of the family (so
    implicitly on the support-compacted ground set) and purely with table
    lookups.
    """
    pop = tables.pop_table
    shadow_table = tables.shadow_table
    m = pop[pattern]
    thr = tables.threshold3[m]
    bound_m = tables.bound3[m]
    support = tables.tri_support[pattern]
    x = 1
    while support:
        if support & 1:
            members = pattern & tables.member[x]
            d = pop[members]
            rest_pattern = pattern ^ members
            rest = m - d
            if rest < thr:
                return False
            link_mask = 0
            probe = members
            pair_bits = tables.pair_bit[x]
            while probe:
                low = probe & -probe
                link_mask |= pair_bits[low.bit_length() - 1]
                probe ^= low
            rest_shadow = shadow_table[rest_pattern]
            if rest > thr:
                if link_mask & ~rest_shadow:
                    return False  # link not inside the deleted part's shadow
                if rest_shadow.bit_count() != tables.bound3[rest]:
                    return False  # deleted part not extremal
                if tables.pair_support[link_mask].bit_count() != tables.bound2[d]:
                    return False  # link not extremal
                if bound_m != tables.bound3[rest] + tables.bound2[d]:
                    return False  # numeric identity fails
            else:
                if rest_shadow & ~link_mask:
                    return False  # deleted part's shadow escapes the link
                if tables.pair_support[link_mask].bit_count() != tables.bound2[d]:
                    return False  # link not extremal
        support >>= 1
        x += 1
    return True


def characterization_sweep(n: int, k: int = 3) -> dict:
    """Compare the characterization verdict with direct extremality for every
    nonempty subfamily of C([n], k); returns counts and any mismatches."""
    if k != 3:
        raise ValueError("the full sweep is built for k = 3 layers")
    tables = _sweep_tables(n)
    shadow_table, pop = tables.shadow_table, tables.pop_table
    bound3 = tables.bound3
    verdictor = _fast_characterize_verdict
    mismatches: list[int] = []
    extremal_count = 0
    total = 1 << tables.layer.size
    for pattern in range(1, total):
        extremal = shadow_table[pattern].bit_count() == bound3[pop[pattern]]
        if extremal:
            extremal_count += 1
        if verdictor(tables, pattern) != extremal:
            mismatches.append(pattern)
    return {
        "n": n,
        "k": k,
        "checked": total - 1,
        "extremal": extremal_count,
        "mismatches": mismatches,
    }


def extremal_iso_classes(n: int, k: int, m: int) -> list[KFamily]:
    """Isomorphism classes of extremal m-subsets of C([n], k), as canonical forms."""
    patterns = _extremal_patterns_by_size(n, k).get(m, [])
    layer = _layer(n, k)
    seen: set[tuple[int, tuple[int, ...]]] = set()
    classes: list[KFamily] = []
    degree_buckets: dict[tuple[int, ...], list[KFamily]] = {}
    for pattern in patterns:
        family = layer.family(pattern)
        support = family.support()
        profile = tuple(sorted(degree(family, x) for x in support))
        bucket = degree_buckets.setdefault(profile, [])
        if any(are_isomorphic(family, rep) for rep in bucket):
            continue
        bucket.append(family)
        canon = canonical_form(family)
        key = (canon.n, canon.masks)
        if key not in seen:
            seen.add(key)
            classes.append(canon)
    return classes


def min_degree_sweep(n: int, k: int) -> int:
    """Check the minimum-degree deletion bound over every admissible subfamily;
    returns the number checked, raising on the first violation."""
    layer = _layer(n, k)
    sh, pop = layer.tables()
    member = [0] * (n + 1)
    for i, mask in enumerate(layer.masks):
        for x in range(1, n + 1):
            if mask >> (x - 1) & 1:
                member[x] |= 1 << i
    support_table = [0] * (1 << layer.size)
    low_index = {1 << i: i for i in range(layer.size)}
    for f in range(1, 1 << layer.size):
        low = f & -f
        support_table[f] = support_table[f ^ low] | layer.masks[low_index[low]]
    cascades = [None] + [decompose(m, k) for m in range(1, layer.size + 1)]
    dec_table = [Seq((), k)] + [decompose(v, k) for v in range(1, layer.size + 1)]
    checked = 0
    full = tuple(range(1, n + 1))
    for pattern in range(1, 1 << layer.size):
        m = pop[pattern]
        if m <= 1:
            continue
        support = support_table[pattern]
        if support != (1 << n) - 1:
            continue  # the bound is stated for full support
        dmin = min(pop[pattern & member[x]] for x in full)
        b = dec_table[m - dmin]
        a = cascades[m]
        if not b.terms or lex_cmp(b, seq_minus(a, 1)) < 0:
            raise AssertionError(f"minimum-degree bound failed at pattern {pattern}")
        checked += 1
    return checked
