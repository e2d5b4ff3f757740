"""Exponentiability deciders and exponential constructions.

Flat doctrines reduce exponentiability of an object over ``B`` to its
decomposition: every comparison must be invertible, and for top/loc each
connecting vertical must also be doubly continuous and each fibre's open
lattice continuous.  On finite data the last two always hold, but they are
still evaluated from their definitions.
"""

from __future__ import annotations

from typing import NamedTuple

from .catprof import Exponential, NotExponentiable, VerificationFailed, cat_exponential
from .doctrines import Doctrine, MeetMap, opens_of
from .enumeration import monotone_maps, subsets
from .glueing import ObjectOverB, decompose, fiber_product, loc_over_to_top, top_over_to_loc
from .laxcat import Check, LaxFunctor, strict_pairs, strict_triples
from .order import (FinLattice, FinPoset, FinSpace, OrderError, is_continuous_lattice,
                    scott_lattice, scott_opens, sort_key, way_below)

__all__ = [
    "nhat", "way_below_rel", "doubly_continuous", "preserves_directed_joins",
    "FiberwiseScottOpen", "fiberwise_scott_opens", "epsilon_continuous",
    "Failure", "ExpVerdict", "check_exponentiable", "exponential_over_B",
    "locally_closed", "NotExponentiable", "VerificationFailed", "Exponential",
]


# ---------------------------------------------------------------------------
# Scott-open transpose and relative way-below


def nhat(n: MeetMap) -> MeetMap:
    """``H0 |-> union of all Scott opens H1 of the target with n^-1 H1 ⊆ H0``."""
    S0, S1 = scott_lattice(n.source), scott_lattice(n.target)
    pre = {H1: n.preimage(H1) for H1 in S1}
    table = {}
    for H0 in S0:
        u = frozenset()
        for H1, p in pre.items():
            if p <= H0:
                u |= H1
        table[H0] = u
    return MeetMap(S0, S1, table, check=False)


def _meet_of(L: FinLattice, H):
    return L.meet_all(H)


def way_below_rel(n: MeetMap, H0, u1, v1, _nh=None) -> bool:
    """``u1`` way below ``v1`` relative to the Scott open ``H0``."""
    L1 = n.target
    nh = _nh if _nh is not None else nhat(n)
    H0 = frozenset(H0)
    return (way_below(L1, u1, v1) and v1 in nh(H0)
            and L1.leq(u1, n(_meet_of(n.source, H0))))


def doubly_continuous(n: MeetMap) -> bool:
    """Source continuous, and every ``v1`` is the join of the elements
    relatively way below it for some Scott open of the source."""
    L0, L1 = n.source, n.target
    if not is_continuous_lattice(L0):
        return False
    nh = nhat(n)
    opens0 = list(scott_opens(L0))
    for v1 in L1:
        approx = [u1 for u1 in L1 if any(way_below_rel(n, H0, u1, v1, nh) for H0 in opens0)]
        if L1.join_all(approx) != v1:
            return False
    return True


def preserves_directed_joins(n: MeetMap) -> bool:
    """``n`` sends joins of directed subsets to joins of images."""
    L0, L1 = n.source, n.target
    elems = list(L0)
    for S in subsets(elems):
        if not S:
            continue
        if not all(any(L0.leq(a, c) and L0.leq(b, c) for c in S) for a in S for b in S):
            continue
        if n(L0.join_all(S)) != L1.join_all(n(x) for x in S):
            return False
    return True


# ---------------------------------------------------------------------------
# Fibrewise Scott opens and the evaluation test


class FiberwiseScottOpen(NamedTuple):
    base: FinPoset
    members: dict  # b -> frozenset of fibre opens

    def __repr__(self):
        return f"FiberwiseScottOpen({ {b: len(H) for b, H in self.members.items()} })"


def _top_object(q: ObjectOverB) -> ObjectOverB:
    if q.doctrine is Doctrine.LOC:
        return loc_over_to_top(q)
    if q.doctrine is not Doctrine.TOP:
        raise ValueError("fibrewise Scott opens are defined for top and loc objects")
    return q


def fiberwise_scott_opens(q: ObjectOverB, cap: int = 4096):
    """Families ``(H_b)`` of Scott opens of the fibre open-lattices such that
    ``V_c in H_c`` implies ``V_b in H_b`` for every open V of the total
    space and every ``b < c``."""
    q = _top_object(q)
    B = q.base
    Y = q.total
    elems = B.linear_extension()
    fib = {b: frozenset(q.fibre(b)) for b in elems}
    fam = {b: list(scott_opens(opens_of(Y.subspace(fib[b])))) for b in elems}
    opens = Y.opens()
    pairs = strict_pairs(B)
    restr = [(b, c, [(V & fib[b], V & fib[c]) for V in opens]) for (b, c) in pairs]
    count = 0

    def ok_so_far(H):
        for b, c, vs in restr:
            if b in H and c in H:
                Hb, Hc = H[b], H[c]
                for Vb, Vc in vs:
                    if Vc in Hc and Vb not in Hb:
                        return False
        return True

    def rec(k, H):
        nonlocal count
        if k == len(elems):
            count += 1
            if count > cap:
                from .order import CapExceeded
                raise CapExceeded(f"more than {cap} fibrewise Scott opens")
            yield FiberwiseScottOpen(B, dict(H))
            return
        b = elems[k]
        for Hb in fam[b]:
            H[b] = frozenset(Hb)
            if ok_so_far(H):
                yield from rec(k + 1, H)
        H.pop(b, None)

    yield from rec(0, {})


def epsilon_continuous(q: ObjectOverB) -> Check:
    """For every fibre open ``V_b`` and point ``y`` of it, some fibrewise
    Scott open H has ``V_b in H_b`` and y in the interior (in the total
    space) of the union over c of the intersection of ``H_c``.

    On success the witness maps each ``(b, V_b, y)`` to its H; on failure it
    is the first ``(b, V_b, y)`` without one.
    """
    q = _top_object(q)
    Y = q.total
    B = q.base
    fams = list(fiberwise_scott_opens(q))
    fib = {b: frozenset(q.fibre(b)) for b in B.elements}
    cores = []
    for H in fams:
        core = frozenset()
        for c, Hc in H.members.items():
            inter = fib[c]
            for V in Hc:
                inter &= V
            core |= inter
        cores.append(Y.interior(core))
    witnesses = {}
    for b in B.elements:
        for Vb in opens_of(Y.subspace(fib[b])):
            for y in sorted(Vb, key=sort_key):
                found = None
                for H, core in zip(fams, cores):
                    if Vb in H.members[b] and y in core:
                        found = H
                        break
                if found is None:
                    return Check(False, (b, Vb, y))
                witnesses[(b, Vb, y)] = found
    return Check(True, witnesses)


# ---------------------------------------------------------------------------
# Verdicts


class Failure(NamedTuple):
    kind: str
    where: tuple

    def __str__(self):
        return f"{self.kind}({','.join(str(w) for w in self.where)})"


class ExpVerdict(NamedTuple):
    decision: bool
    failures: list

    def __bool__(self):
        return self.decision

    def __str__(self):
        if self.decision:
            return "exponentiable"
        return "not exponentiable: " + ", ".join(str(f) for f in self.failures)


def check_exponentiable(F: LaxFunctor) -> ExpVerdict:
    """Decide exponentiability of the object glued from ``F``."""
    d = F.doctrine
    failures = []
    for t in strict_triples(F.base):
        b, c, e = t
        if d.flat:
            if F.composite(b, c, e) != F.verticals[(b, e)]:
                failures.append(Failure("NotPseudo", t))
        else:
            sub = F.restrict([b, c, e])
            if not sub.is_pseudo():
                failures.append(Failure("NotPseudo", t))
    if d in (Doctrine.TOP, Doctrine.LOC):
        for b, c in strict_pairs(F.base):
            if not doubly_continuous(F.verticals[(b, c)]):
                failures.append(Failure("NotDoublyContinuous", (b, c)))
        for b in F.base.elements:
            L = opens_of(F.objects[b]) if d is Doctrine.TOP else F.objects[b]
            if not is_continuous_lattice(L):
                failures.append(Failure("FiberNotExponentiable", (b,)))
    return ExpVerdict(not failures, failures)


def locally_closed(A, space: FinSpace) -> bool:
    """``A`` is the intersection of an open and a closed set."""
    A = frozenset(A)
    opens = space.opens()
    closed = [frozenset(space.points) - U for U in opens]
    return any(U & C == A for U in opens for C in closed)


# ---------------------------------------------------------------------------
# Exponentials in top / pos / rel


def _flat_exponential(Y: ObjectOverB, Z: ObjectOverB):
    d = Y.doctrine
    B = Y.base
    PY, PZ = Y.order, Z.order
    fy = {b: PY.subposet(Y.fibre(b)) for b in B.elements}
    fz = {b: PZ.subposet(Z.fibre(b)) for b in B.elements}
    points = []
    maps = {}
    for b in B.elements:
        for i, h in enumerate(monotone_maps(fy[b], fz[b])):
            maps[(b, i)] = h
            points.append((b, i))
    rel = []
    for (b, i) in points:
        for (c, j) in points:
            if not B.leq(b, c):
                continue
            h, k = maps[(b, i)], maps[(c, j)]
            if all(PZ.leq(h[y], k[y2]) for y in fy[b].elements for y2 in fy[c].elements if PY.leq(y, y2)):
                rel.append(((b, i), (c, j)))
    try:
        P = FinPoset(points, rel)
    except OrderError as exc:
        raise VerificationFailed(f"exponential order is not a partial order: {exc}") from None
    total = FinSpace(P) if d is Doctrine.TOP else P
    E = ObjectOverB(d, total, B, {p: p[0] for p in points})
    EY = fiber_product(E, Y)
    ev = {(e, y): maps[e][y] for (e, y) in EY.points}
    return Exponential(E, ev, None), maps


def exponential_over_B(Y: ObjectOverB, Z: ObjectOverB, verify: bool = True, size_cap: int = 3) -> Exponential:
    """``Z^Y`` over B.  The fibre over b consists of the maps ``Y_b -> Z_b``;
    ``h <= k`` across ``b <= c`` when ``h(y) <= k(y')`` for all ``y <= y'``
    with y over b and y' over c.  The evaluation sends ``(h, y)`` to
    ``h(y)``.  The result is checked by the adjunction oracle unless
    ``verify`` is false.
    """
    d = Y.doctrine
    if d is Doctrine.CAT:
        return cat_exponential(Y, Z, verify=verify, test_cap=size_cap)
    if Z.doctrine is not d or Z.base != Y.base:
        raise ValueError("objects must live over the same base in the same doctrine")
    if d is Doctrine.LOC:
        top = exponential_over_B(loc_over_to_top(Y), loc_over_to_top(Z), verify, size_cap)
        return Exponential(top_over_to_loc(top.obj), top.evaluation, top.report)
    verdict = check_exponentiable(decompose(Y))
    if not verdict:
        raise NotExponentiable(str(verdict), verdict.failures)
    result, _ = _flat_exponential(Y, Z)
    if verify:
        from .oracle import verify_adjunction
        report = verify_adjunction(Y, result, Z, size_cap=size_cap)
        if not report.verdict:
            raise VerificationFailed("adjunction oracle rejected the exponential", report)
        result = Exponential(result.obj, result.evaluation, report)
    return result
