"""Exhaustive enumeration of small orders, lattices and maps.

Everything here is brute force on purpose: these generators feed the
oracles and the acceptance suite, so they avoid any cleverness that the
deciders might share.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations, product

from .order import FinLattice, FinPoset, FinPreorder, OrderError, sort_key


def subsets(xs):
    """All subsets of ``xs`` as frozensets, by size then position."""
    xs = list(xs)
    for k in range(len(xs) + 1):
        for combo in combinations(xs, k):
            yield frozenset(combo)


def _transitive(n, below):
    for i in range(n):
        for j in range(n):
            if below[i] >> j & 1 and below[j] & ~below[i]:
                return False
    return True


def canonical_key(n, pairs, labels=None):
    """Smallest relabelling of a structure on ``range(n)`` over all permutations.

    ``pairs`` is a set of index pairs; ``labels`` an optional per-point
    label tuple.  Two structures are isomorphic iff their keys agree.
    """
    best = None
    lab = labels if labels is not None else (None,) * n
    for perm in permutations(range(n)):
        rel = tuple(sorted((perm[i], perm[j]) for i, j in pairs))
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        lk = tuple(sort_key(lab[inv[k]]) for k in range(n))
        key = (lk, rel)
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def posets_up_to_iso(n: int) -> tuple:
    """Posets on ``range(n)``, one per isomorphism class.

    Every finite poset has a natural labelling, so it suffices to search
    transitive relations contained in ``i < j``.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = {}
    for k in range(1 << len(pairs)):
        below = [1 << i for i in range(n)]
        chosen = []
        for t, (i, j) in enumerate(pairs):
            if k >> t & 1:
                below[j] |= 1 << i
                chosen.append((i, j))
        if not _transitive(n, below):
            continue
        key = canonical_key(n, chosen)
        if key not in seen:
            seen[key] = FinPoset(range(n), chosen)
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=None)
def preorders_up_to_iso(n: int) -> tuple:
    """Preorders on ``range(n)``, one per isomorphism class."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = {}
    for k in range(1 << len(pairs)):
        below = [1 << i for i in range(n)]
        chosen = []
        for t, (i, j) in enumerate(pairs):
            if k >> t & 1:
                below[j] |= 1 << i
                chosen.append((i, j))
        if not _transitive(n, below):
            continue
        key = canonical_key(n, chosen)
        if key not in seen:
            seen[key] = FinPreorder(range(n), chosen)
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=None)
def lattices_up_to_iso(n: int) -> tuple:
    """Lattices with exactly ``n`` elements, one per isomorphism class.

    Elements are ``0..n-1`` with 0 the bottom and ``n-1`` the top.
    """
    if n == 0:
        return ()
    if n == 1:
        return (FinLattice(FinPoset([0], [])),)
    out = []
    for mid in posets_up_to_iso(n - 2):
        rel = [(i + 1, j + 1) for (i, j) in mid.relation]
        rel += [(0, k) for k in range(n)] + [(k, n - 1) for k in range(n)]
        try:
            out.append(FinLattice(FinPoset(range(n), rel)))
        except OrderError:
            continue
    return tuple(out)


def monotone_maps(P: FinPreorder, Q: FinPreorder, fixed=None, allowed=None):
    """All order-preserving maps ``P -> Q`` as dicts.

    ``fixed`` pins some values; ``allowed(x)`` restricts candidate images.
    """
    elems = P.linear_extension()
    fixed = dict(fixed or {})
    targets = list(Q.elements)
    before = {x: [y for y in elems[:k] if P.leq(y, x) or P.leq(x, y)] for k, x in enumerate(elems)}

    def rec(k, f):
        if k == len(elems):
            yield dict(f)
            return
        x = elems[k]
        cands = [fixed[x]] if x in fixed else (allowed(x) if allowed else targets)
        for t in cands:
            ok = True
            for y in before[x]:
                if P.leq(y, x) and not Q.leq(f[y], t):
                    ok = False
                    break
                if P.leq(x, y) and not Q.leq(t, f[y]):
                    ok = False
                    break
            if ok:
                f[x] = t
                yield from rec(k + 1, f)
        f.pop(x, None)

    yield from rec(0, {})


def functions(xs, ys):
    xs, ys = list(xs), list(ys)
    for img in product(ys, repeat=len(xs)):
        yield dict(zip(xs, img))


def meet_maps(L0: FinLattice, L1: FinLattice):
    """All maps ``L0 -> L1`` preserving the top and binary meets."""
    for f in monotone_maps(L0.order, L1.order, fixed={L0.top: L1.top}):
        if all(f[L0.meet(x, y)] == L1.meet(f[x], f[y]) for x in L0 for y in L0):
            yield f


def objects_over(B: FinPoset, max_points: int, min_points: int = 0):
    """Posets with a monotone map to ``B``, one per isomorphism class over B.

    Yields ``(P, q)`` with P on ``range(n)`` and q a dict.
    """
    for n in range(min_points, max_points + 1):
        seen = set()
        for P in posets_up_to_iso(n):
            strict = [(i, j) for (i, j) in P.relation if i != j]
            for q in monotone_maps(P, B):
                key = canonical_key(n, strict, tuple(q[i] for i in range(n)))
                if key in seen:
                    continue
                seen.add(key)
                yield P, q


def discrete_objects_over(B: FinPoset, max_points: int):
    """Finite sets with a map to ``B`` up to iso (multisets of fibre sizes)."""
    elems = list(B.elements)
    for n in range(max_points + 1):
        for sizes in product(range(n + 1), repeat=len(elems)):
            if sum(sizes) != n:
                continue
            q = {}
            k = 0
            for b, s in zip(elems, sizes):
                for _ in range(s):
                    q[k] = b
                    k += 1
            yield FinPoset.discrete(range(n)), q


def nonempty_posets(max_n: int):
    for n in range(1, max_n + 1):
        yield from posets_up_to_iso(n)
