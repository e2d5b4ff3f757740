"""Finite orders, Alexandroff spaces and finite lattices.

Conventions used everywhere in the package:

* a finite space is stored as its specialization order, and its open sets
  are exactly the *down-sets* of that order;
* subsets are enumerated in a fixed order (by size, then lexicographically
  by element position), so every listing is deterministic.

Elements may be any hashable values.  Internally subsets are bitmasks over
the element tuple.
"""

from __future__ import annotations

from functools import cached_property
from typing import Hashable, Iterable, Iterator

import numpy as np

#: Largest lattice for which the all-subsets definitional routines run.
DEFINITIONAL_CAP = 16


class OrderError(ValueError):
    """Data does not describe a valid order, space or lattice."""


class CapExceeded(ValueError):
    """An exhaustive routine was asked to run beyond its size cap."""


def sort_key(x):
    """Total, deterministic sort key for the mixed labels used in this package."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, len(x), tuple(sort_key(i) for i in x))
    if isinstance(x, frozenset):
        return (3, len(x), tuple(sorted(sort_key(i) for i in x)))
    return (4, repr(x))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinPreorder:
    """A finite preorder, given by its elements and the full relation ``<=``.

    The relation is stored as bitmasks: ``below[i]`` has bit ``j`` set iff
    ``elements[j] <= elements[i]``.
    """

    def __init__(self, elements: Iterable[Hashable], relation: Iterable[tuple]):
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        if len(index) != len(elements):
            raise OrderError("duplicate elements")
        below = [1 << i for i in range(len(elements))]
        for pair in relation:
            x, y = pair
            if x not in index or y not in index:
                raise OrderError(f"pair {pair!r} mentions an unknown element")
            below[index[y]] |= 1 << index[x]
        for i, m in enumerate(below):
            for j in _bits(m):
                if below[j] & ~m:
                    x, y = elements[j], elements[i]
                    raise OrderError(f"relation is not transitive at {x!r} <= {y!r}")
        self.elements = elements
        self.index = index
        self.below = tuple(below)
        self._check()

    def _check(self):
        pass

    @classmethod
    def from_pairs(cls, elements, pairs):
        """Reflexive-transitive closure of ``pairs`` (e.g. covering pairs)."""
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        below = [1 << i for i in range(len(elements))]
        for pair in pairs:
            x, y = pair
            if x not in index or y not in index:
                raise OrderError(f"pair {pair!r} mentions an unknown element")
            below[index[y]] |= 1 << index[x]
        changed = True
        while changed:
            changed = False
            for i in range(len(below)):
                m = below[i]
                for j in _bits(m):
                    m |= below[j]
                if m != below[i]:
                    below[i] = m
                    changed = True
        rel = [(elements[j], elements[i]) for i, m in enumerate(below) for j in _bits(m)]
        return cls(elements, rel)

    @classmethod
    def from_masks(cls, elements, below):
        rel = [(elements[j], elements[i]) for i, m in enumerate(below) for j in _bits(m)]
        return cls(elements, rel)

    @classmethod
    def discrete(cls, elements):
        return cls(elements, ())

    @classmethod
    def chain(cls, n: int):
        return cls.from_pairs(range(n), [(i, i + 1) for i in range(n - 1)])

    # -- basic queries -------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"{type(self).__name__}({list(self.elements)!r}, covers={self.covers()!r})"

    def __eq__(self, other):
        if not isinstance(other, FinPreorder):
            return NotImplemented
        return set(self.elements) == set(other.elements) and self.relation == other.relation

    def __hash__(self):
        return hash((frozenset(self.elements), self.relation))

    @cached_property
    def above(self) -> tuple:
        above = [0] * len(self.elements)
        for i, m in enumerate(self.below):
            for j in _bits(m):
                above[j] |= 1 << i
        return tuple(above)

    @cached_property
    def relation(self) -> frozenset:
        e = self.elements
        return frozenset((e[j], e[i]) for i, m in enumerate(self.below) for j in _bits(m))

    def leq(self, x, y) -> bool:
        return bool(self.below[self.index[y]] >> self.index[x] & 1)

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def mask(self, subset: Iterable) -> int:
        m = 0
        for x in subset:
            m |= 1 << self.index[x]
        return m

    def subset(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in _bits(mask))

    def down_closure(self, subset) -> frozenset:
        m = 0
        for i in _bits(self.mask(subset)):
            m |= self.below[i]
        return self.subset(m)

    def up_closure(self, subset) -> frozenset:
        m = 0
        for i in _bits(self.mask(subset)):
            m |= self.above[i]
        return self.subset(m)

    def is_down_set(self, subset) -> bool:
        m = self.mask(subset)
        return all(self.below[i] & ~m == 0 for i in _bits(m))

    def is_up_set(self, subset) -> bool:
        m = self.mask(subset)
        return all(self.above[i] & ~m == 0 for i in _bits(m))

    def covers(self) -> list:
        """Covering pairs ``(x, y)``: x < y with nothing strictly between."""
        e = self.elements
        out = []
        for i, m in enumerate(self.below):
            strict = [j for j in _bits(m) if not (self.below[j] >> i & 1)]
            for j in strict:
                if not any(k != j and self.below[k] >> j & 1 for k in strict):
                    out.append((e[j], e[i]))
        return sorted(out, key=sort_key)

    def is_antisymmetric(self) -> bool:
        return all(not (self.below[j] >> i & 1) for i, m in enumerate(self.below)
                   for j in _bits(m) if j != i)

    def linear_extension(self) -> list:
        """Elements sorted so that x < y implies x comes first."""
        order = sorted(range(len(self.elements)),
                       key=lambda i: (bin(self.below[i]).count("1"), i))
        return [self.elements[i] for i in order]

    # -- derived orders ------------------------------------------------------

    def subposet(self, subset):
        keep = [x for x in self.elements if x in set(subset)]
        kept = set(keep)
        return type(self)(keep, [(x, y) for (x, y) in self.relation if x in kept and y in kept])

    def dual(self):
        return type(self)(self.elements, [(y, x) for (x, y) in self.relation])

    def relabel(self, mapping):
        return type(self)([mapping[x] for x in self.elements],
                          [(mapping[x], mapping[y]) for (x, y) in self.relation])

    def product(self, other):
        elems = [(x, y) for x in self.elements for y in other.elements]
        rel = [((x, y), (x2, y2)) for (x, x2) in self.relation for (y, y2) in other.relation]
        return type(self)(elems, rel)

    # -- down-set enumeration ------------------------------------------------

    @cached_property
    def _down_set_masks(self) -> tuple:
        # Equivalent elements (same down-set) enter or leave together.
        classes = {}
        for i, m in enumerate(self.below):
            classes.setdefault(m, 0)
            classes[m] |= 1 << i
        groups = sorted(classes.items(), key=lambda kv: (bin(kv[0]).count("1"), kv[1]))
        out = []

        def rec(k, mask):
            if k == len(groups):
                out.append(mask)
                return
            down, members = groups[k]
            rec(k + 1, mask)
            if (down & ~members) & ~mask == 0:
                rec(k + 1, mask | members)

        rec(0, 0)
        return tuple(sorted(out, key=_mask_key))

    def down_set_masks(self) -> tuple:
        return self._down_set_masks

    def down_sets(self) -> list:
        """All down-sets, ordered by size and then lexicographically."""
        return [self.subset(m) for m in self._down_set_masks]

    def up_sets(self) -> list:
        d = self.dual()
        return [frozenset(s) for s in d.down_sets()]


def _mask_key(mask: int):
    return (bin(mask).count("1"), tuple(_bits(mask)))


class FinPoset(FinPreorder):
    """A finite partial order; construction fails on any cycle."""

    def _check(self):
        for i, m in enumerate(self.below):
            for j in _bits(m):
                if j != i and self.below[j] >> i & 1:
                    raise OrderError(
                        f"cycle: {self.elements[j]!r} <= {self.elements[i]!r} <= {self.elements[j]!r}")


def down_sets(P: FinPreorder) -> list:
    return P.down_sets()


# ---------------------------------------------------------------------------
# Finite spaces


class FinSpace:
    """A finite T0 space, stored as its specialization poset.

    Open sets are the down-sets of ``order``.
    """

    def __init__(self, order: FinPoset):
        if not isinstance(order, FinPoset):
            order = FinPoset(order.elements, order.relation)
        self.order = order

    @classmethod
    def from_covers(cls, points, covers=()):
        return cls(FinPoset.from_pairs(points, covers))

    @classmethod
    def discrete(cls, points):
        return cls(FinPoset.discrete(points))

    @classmethod
    def empty(cls):
        return cls(FinPoset((), ()))

    @classmethod
    def sierpinski(cls):
        """Points 0 < 1; ``{0}`` is open and ``{1}`` is not."""
        return cls(FinPoset.chain(2))

    @classmethod
    def from_opens(cls, points, opens):
        """Recover the space from its open sets (must form a T0 topology)."""
        points = tuple(points)
        opens = [frozenset(u) for u in opens]
        rel = [(x, y) for x in points for y in points
               if all(x in u for u in opens if y in u)]
        try:
            space = cls(FinPoset(points, rel))
        except OrderError as exc:
            raise OrderError(f"not a T0 space: {exc}") from None
        if set(opens) != set(space.opens()):
            raise OrderError("open family is not a topology")
        return space

    @property
    def points(self):
        return self.order.elements

    def __len__(self):
        return len(self.order)

    def __eq__(self, other):
        return isinstance(other, FinSpace) and self.order == other.order

    def __hash__(self):
        return hash(self.order)

    def __repr__(self):
        return f"FinSpace({list(self.points)!r}, covers={self.order.covers()!r})"

    def opens(self) -> list:
        return self.order.down_sets()

    def is_open(self, subset) -> bool:
        return self.order.is_down_set(subset)

    def interior(self, subset) -> frozenset:
        """Largest open set inside ``subset``."""
        s = frozenset(subset)
        m = self.order.mask(s & set(self.points))
        keep = 0
        for i in _bits(m):
            if self.order.below[i] & ~m == 0:
                keep |= 1 << i
        return self.order.subset(keep)

    def closure(self, subset) -> frozenset:
        return self.order.up_closure(subset)

    def subspace(self, subset):
        return FinSpace(self.order.subposet(subset))

    def product(self, other):
        return FinSpace(self.order.product(other.order))

    def relabel(self, mapping):
        return FinSpace(self.order.relabel(mapping))


def interior(Y: FinSpace, S) -> frozenset:
    return Y.interior(S)


# ---------------------------------------------------------------------------
# Finite lattices


class FinLattice:
    """A finite lattice; meets and joins are derived from the order."""

    def __init__(self, order: FinPoset):
        if not isinstance(order, FinPoset):
            order = FinPoset(order.elements, order.relation)
        n = len(order)
        if n == 0:
            raise OrderError("a lattice needs at least one element")
        self.order = order
        below, above = order.below, order.above
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                meet[i, j] = meet[j, i] = self._extremum(below[i] & below[j], below, order, i, j, "meet")
                join[i, j] = join[j, i] = self._extremum(above[i] & above[j], above, order, i, j, "join")
        self._meet = meet
        self._join = join
        full = (1 << n) - 1
        self._top = next(i for i in range(n) if below[i] == full)
        self._bottom = next(i for i in range(n) if above[i] == full)

    @staticmethod
    def _extremum(bounds, other_side, order, i, j, what):
        for k in _bits(bounds):
            if bounds & ~other_side[k] == 0:
                return k
        x, y = order.elements[i], order.elements[j]
        raise OrderError(f"no {what} for {x!r} and {y!r}")

    @classmethod
    def from_covers(cls, elements, covers):
        return cls(FinPoset.from_pairs(elements, covers))

    @property
    def elements(self):
        return self.order.elements

    @property
    def top(self):
        return self.order.elements[self._top]

    @property
    def bottom(self):
        return self.order.elements[self._bottom]

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order.elements)

    def __eq__(self, other):
        return isinstance(other, FinLattice) and self.order == other.order

    def __hash__(self):
        return hash(self.order)

    def __repr__(self):
        return f"FinLattice({list(self.elements)!r}, covers={self.order.covers()!r})"

    def leq(self, x, y) -> bool:
        return self.order.leq(x, y)

    def meet(self, x, y):
        ix = self.order.index
        return self.elements[self._meet[ix[x], ix[y]]]

    def join(self, x, y):
        ix = self.order.index
        return self.elements[self._join[ix[x], ix[y]]]

    def join_all(self, xs):
        r = self.bottom
        for x in xs:
            r = self.join(r, x)
        return r

    def meet_all(self, xs):
        r = self.top
        for x in xs:
            r = self.meet(r, x)
        return r

    def is_distributive(self) -> bool:
        m, j = self._meet, self._join
        n = len(self)
        return all(m[a, j[b, c]] == j[m[a, b], m[a, c]]
                   for a in range(n) for b in range(n) for c in range(n))

    def up_sets(self) -> list:
        return self.order.up_sets()

    # -- all-subsets tables for the definitional routines --------------------

    def _require_cap(self):
        if len(self) > DEFINITIONAL_CAP:
            raise CapExceeded(
                f"lattice has {len(self)} elements; definitional routines are capped at {DEFINITIONAL_CAP}")

    @cached_property
    def subset_joins(self) -> np.ndarray:
        """``subset_joins[S]`` is the index of the join of the subset with bitmask S."""
        self._require_cap()
        n = len(self)
        out = np.empty(1 << n, dtype=np.int64)
        out[0] = self._bottom
        for i in range(n):
            lo = out[: 1 << i]
            out[1 << i: 1 << (i + 1)] = self._join[lo, i]
        return out

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        n = len(self)
        m = np.zeros((n, n), dtype=bool)
        for i, b in enumerate(self.order.below):
            for j in _bits(b):
                m[j, i] = True
        return m

    @cached_property
    def way_below_matrix(self) -> np.ndarray:
        self._require_cap()
        n = len(self)
        joins = self.subset_joins
        covered = self.leq_matrix[:, joins]  # covered[v, S]: v <= join(S)
        wb = np.zeros((n, n), dtype=bool)
        for u in range(n):
            reach = _exists_submask(covered[u])
            for v in range(n):
                wb[u, v] = bool(np.all(~covered[v] | reach))
        return wb


def _exists_submask(g: np.ndarray) -> np.ndarray:
    """``out[S]`` is true iff ``g[F]`` holds for some F contained in S."""
    out = g.copy()
    n = out.size.bit_length() - 1
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return out


def open_lattice(Y: FinSpace) -> FinLattice:
    """The lattice of open sets of ``Y`` ordered by inclusion."""
    masks = Y.order.down_set_masks()
    opens = [Y.order.subset(m) for m in masks]
    rel = [(opens[a], opens[b]) for a, ma in enumerate(masks)
           for b, mb in enumerate(masks) if ma & ~mb == 0]
    return FinLattice(FinPoset(opens, rel))


class ScottOpenFamily:
    """The Scott-open subsets of a finite lattice."""

    def __init__(self, lattice: FinLattice, members):
        self.lattice = lattice
        self.members = tuple(members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, H):
        return frozenset(H) in set(self.members)

    def __repr__(self):
        return f"ScottOpenFamily({len(self.members)} members)"


def is_scott_open(L: FinLattice, H) -> bool:
    """Test ``H`` against the definition, quantifying over every subset S of L."""
    n = len(L)
    idx = L.order.index
    inside = np.zeros(n, dtype=bool)
    for x in H:
        inside[idx[x]] = True
    up = np.zeros(n, dtype=bool)
    for i in np.flatnonzero(inside):
        up |= L.leq_matrix[i]
    if not np.array_equal(up, inside):
        return False
    hit = inside[L.subset_joins]
    return bool(np.all(~hit | _exists_submask(hit)))


def scott_opens(L: FinLattice) -> ScottOpenFamily:
    """All Scott-open subsets of L, computed from the definition."""
    L._require_cap()
    n = len(L)
    # Up-closure of every subset at once, by a submask transform on bits.
    upmask = np.zeros(1 << n, dtype=np.int64)
    above = L.order.above
    for i in range(n):
        upmask[1 << i: 1 << (i + 1)] = upmask[: 1 << i] | above[i]
    candidates = np.flatnonzero(upmask == np.arange(1 << n))
    members = []
    for m in candidates:
        H = L.order.subset(int(m))
        if is_scott_open(L, H):
            members.append((int(m), H))
    members.sort(key=lambda t: _mask_key(t[0]))
    return ScottOpenFamily(L, [H for _, H in members])


def scott_lattice(L: FinLattice) -> FinLattice:
    """The Scott opens of L as a lattice under inclusion."""
    fam = list(scott_opens(L))
    rel = [(a, b) for a in fam for b in fam if a <= b]
    return FinLattice(FinPoset(fam, rel))


def way_below(L: FinLattice, u, v) -> bool:
    """``u << v``: every S with v <= join(S) has a finite F in S with u <= join(F)."""
    idx = L.order.index
    return bool(L.way_below_matrix[idx[u], idx[v]])


def is_continuous_lattice(L: FinLattice) -> bool:
    return all(L.join_all(u for u in L if way_below(L, u, v)) == v for v in L)
