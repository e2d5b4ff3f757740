"""Vertical normal lax functors from a finite poset into a doctrine.

A lax functor ``X`` over base ``B`` stores an object ``X_b`` per element,
a vertical ``X_bc`` per strict pair ``b < c`` (identities on the diagonal
are implied, never stored), and -- for cat only -- comparison data
``(X_cd . X_bc) -> X_bd`` per strict triple, as a dict from composite
class labels to elements of ``X_bd``.  In flat doctrines the comparison is
a proposition and is recomputed whenever it is needed.
"""

from __future__ import annotations

from itertools import product as iproduct
from typing import NamedTuple

from . import doctrines as dct
from .doctrines import Doctrine, as_doctrine
from .enumeration import posets_up_to_iso
from .order import FinPoset, FinSpace, sort_key


class Violation(NamedTuple):
    kind: str
    where: tuple
    message: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.message}"


class Check(NamedTuple):
    """Boolean result with the first offending location (or ``None``)."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def strict_pairs(B: FinPoset) -> list:
    return sorted(((b, c) for (b, c) in B.relation if b != c), key=sort_key)


def strict_triples(B: FinPoset) -> list:
    pairs = strict_pairs(B)
    out = [(b, c, d) for (b, c) in pairs for (c2, d) in pairs if c2 == c]
    return sorted(out, key=sort_key)


def strict_quads(B: FinPoset) -> list:
    out = [(b, c, d, e) for (b, c, d) in strict_triples(B) for (d2, e) in strict_pairs(B) if d2 == d]
    return sorted(out, key=sort_key)


class LaxFunctor:
    def __init__(self, doctrine, base: FinPoset, objects, verticals, comparisons=None):
        self.doctrine = as_doctrine(doctrine)
        self.base = base
        self.objects = dict(objects)
        self.verticals = dict(verticals)
        self.comparisons = dict(comparisons or {})
        self._composites = {}

    def __repr__(self):
        return (f"LaxFunctor({self.doctrine.value}, base={list(self.base.elements)!r}, "
                f"{len(self.verticals)} verticals)")

    def __eq__(self, other):
        return (isinstance(other, LaxFunctor) and self.doctrine == other.doctrine
                and self.base == other.base and self.objects == other.objects
                and self.verticals == other.verticals
                and (self.doctrine.flat or self.comparisons == other.comparisons))

    def __hash__(self):
        return hash((self.doctrine, self.base))

    def vertical(self, b, c):
        if b == c:
            return dct.v_identity(self.doctrine, self.objects[b])
        return self.verticals[(b, c)]

    def composite(self, b, c, d):
        """``X_cd . X_bc`` (cached)."""
        key = (b, c, d)
        if key not in self._composites:
            self._composites[key] = dct.v_compose(self.doctrine, self.vertical(b, c), self.vertical(c, d))
        return self._composites[key]

    # -- validation ----------------------------------------------------------

    def validate(self) -> list:
        """All violated invariants, first by location then by kind."""
        d = self.doctrine
        out = []
        for b in self.base.elements:
            if b not in self.objects:
                out.append(Violation("missing-object", (b,), "no object"))
            elif not dct.object_kind(d, self.objects[b]):
                out.append(Violation("object-kind", (b,), f"not a {d.value} object"))
        if out:
            return out
        pairs = strict_pairs(self.base)
        for key in self.verticals:
            if tuple(key) not in set(pairs):
                out.append(Violation("extra-vertical", tuple(key), "not a strict pair of the base"))
        for b, c in pairs:
            v = self.verticals.get((b, c))
            if v is None:
                out.append(Violation("missing-vertical", (b, c), "no vertical"))
                continue
            if d is Doctrine.CAT:
                src, tgt = v.source, v.target
            else:
                src, tgt = dct.v_source(d, v), dct.v_target(d, v)
            if src != self.objects[b] or tgt != self.objects[c]:
                out.append(Violation("boundary", (b, c), "vertical has the wrong boundary"))
                continue
            problems = v.violations()
            if problems:
                out.append(Violation("vertical", (b, c), problems[0]))
        if out:
            return out
        for t in strict_triples(self.base):
            b, c, e = t
            comp = self.composite(b, c, e)
            if d.flat:
                if not dct.special_cell_exists(d, comp, self.verticals[(b, e)]):
                    out.append(Violation("comparison", t, "composite and direct vertical are not related"))
            else:
                data = self.comparisons.get(t)
                if data is None:
                    out.append(Violation("comparison", t, "no comparison data"))
                    continue
                problems = dct.cell_check(d, comp, self.verticals[(b, e)], data)
                if problems:
                    out.append(Violation("comparison", t, problems[0]))
        if out or d.flat:
            return out
        for q in strict_quads(self.base):
            bad = self._coherence_failure(*q)
            if bad is not None:
                out.append(Violation("coherence", q, bad))
        return out

    def _coherence_failure(self, b, c, d, e):
        phi = self.comparisons
        bcd = self.composite(b, c, d).pair_class
        cde = self.composite(c, d, e).pair_class
        bce = self.composite(b, c, e).pair_class
        bde = self.composite(b, d, e).pair_class
        Xbc, Xcd, Xde = self.verticals[(b, c)], self.verticals[(c, d)], self.verticals[(d, e)]
        by_c = {}
        for y, (cc, dd) in Xcd.elements.items():
            by_c.setdefault(cc, []).append(y)
        by_d = {}
        for z, (dd, ee) in Xde.elements.items():
            by_d.setdefault(dd, []).append(z)
        for x, (a, cc) in Xbc.elements.items():
            for y in by_c.get(cc, ()):
                for z in by_d.get(Xcd.elements[y][1], ()):
                    w = phi[(c, d, e)][cde[(z, y)]]
                    one = phi[(b, c, e)][bce[(w, x)]]
                    v = phi[(b, c, d)][bcd[(y, x)]]
                    two = phi[(b, d, e)][bde[(z, v)]]
                    if one != two:
                        return f"associativity of comparisons fails on {(z, y, x)!r}"
        return None

    # -- pseudo-functoriality ----------------------------------------------

    def is_pseudo(self) -> Check:
        """Whether every comparison is invertible; witness = first failing triple."""
        d = self.doctrine
        for t in strict_triples(self.base):
            b, c, e = t
            if d.flat:
                if self.composite(b, c, e) != self.verticals[(b, e)]:
                    return Check(False, t)
            else:
                data = self.comparisons[t]
                comp = self.composite(b, c, e)
                target = self.verticals[(b, e)]
                if set(data) != set(comp.elements) or len(set(data.values())) != len(data) \
                        or set(data.values()) != set(target.elements):
                    return Check(False, t)
        return Check(True, None)

    # -- restriction and extension -------------------------------------------

    def restrict(self, A) -> "LaxFunctor":
        keep = set(A)
        sub = self.base.subposet(keep)
        return LaxFunctor(self.doctrine, sub,
                          {b: X for b, X in self.objects.items() if b in keep},
                          {k: v for k, v in self.verticals.items() if k[0] in keep and k[1] in keep},
                          {k: v for k, v in self.comparisons.items() if set(k) <= keep})

    def extend_zero(self, B: FinPoset) -> "LaxFunctor":
        """Extend by the zero object off the current base."""
        d = self.doctrine
        A = set(self.base.elements)
        if not A <= set(B.elements):
            raise ValueError("base is not contained in the new base")
        for (a, a2) in self.base.relation:
            if not B.leq(a, a2):
                raise ValueError("base order is not induced from the new base")
        zero = dct.zero_object(d)
        objects = {b: self.objects[b] if b in A else zero for b in B.elements}
        verts = {}
        for b, c in strict_pairs(B):
            if b in A and c in A:
                verts[(b, c)] = self.verticals[(b, c)]
            elif c not in A:
                verts[(b, c)] = dct.to_zero(d, objects[b])
            else:
                verts[(b, c)] = dct.from_zero(d, objects[c])
        comps = {}
        if not d.flat:
            for t in strict_triples(B):
                comps[t] = dict(self.comparisons[t]) if set(t) <= A else {}
        return LaxFunctor(d, B, objects, verts, comps)

    # -- fibres as a single object ------------------------------------------

    def points(self, b) -> tuple:
        X = self.objects[b]
        if self.doctrine is Doctrine.TOP:
            return X.points
        if self.doctrine is Doctrine.CAT:
            return X.objects
        return X.elements


# ---------------------------------------------------------------------------
# Products


def product_lax(X: LaxFunctor, Y: LaxFunctor) -> LaxFunctor:
    """Fibrewise product; comparisons are induced from the two factors."""
    if X.doctrine != Y.doctrine or X.base != Y.base:
        raise ValueError("factors must share doctrine and base")
    d = X.doctrine
    B = X.base
    objects = {b: dct.product(d, X.objects[b], Y.objects[b]).obj for b in B.elements}
    verts = {(b, c): dct.product_vertical(d, X.verticals[(b, c)], Y.verticals[(b, c)])
             for (b, c) in strict_pairs(B)}
    comps = {}
    if not d.flat:
        for t in strict_triples(B):
            b, c, e = t
            P = LaxFunctor(d, B, objects, verts)
            comp = P.composite(b, c, e)
            cx, cy = X.composite(b, c, e).pair_class, Y.composite(b, c, e).pair_class
            data = {}
            for (zz, xx), label in comp.pair_class.items():
                if label in data:
                    continue
                data[label] = (X.comparisons[t][cx[(zz[0], xx[0])]], Y.comparisons[t][cy[(zz[1], xx[1])]])
            comps[t] = data
    return LaxFunctor(d, B, objects, verts, comps)


class ThetaCell(NamedTuple):
    """Comparison from the composite of products to the product of composites."""

    source: object
    target: object
    data: object
    exists: bool
    invertible: bool


def theta(X: LaxFunctor, Y: LaxFunctor, b, c, e) -> ThetaCell:
    """``(X_ce x Y_ce) . (X_bc x Y_bc) => X_be x Y_be``: project onto each
    factor's composite, then apply that factor's comparison."""
    d = X.doctrine
    target = dct.product_vertical(d, X.verticals[(b, e)], Y.verticals[(b, e)])
    source = dct.v_compose(d, dct.product_vertical(d, X.vertical(b, c), Y.vertical(b, c)),
                           dct.product_vertical(d, X.vertical(c, e), Y.vertical(c, e)))
    if d.flat:
        ok = dct.special_cell_exists(d, source, target)
        return ThetaCell(source, target, None, ok, ok and source == target)
    mx, my = X.composite(b, c, e), Y.composite(b, c, e)
    kx, ky = X.comparisons[(b, c, e)], Y.comparisons[(b, c, e)]
    data = {}
    for (zz, xx), label in source.pair_class.items():
        data.setdefault(label, (kx[mx.pair_class[(zz[0], xx[0])]], ky[my.pair_class[(zz[1], xx[1])]]))
    ok = not dct.cell_check(d, source, target, data)
    inv = ok and len(set(data.values())) == len(data) and set(data.values()) == set(target.elements)
    return ThetaCell(source, target, data, ok, inv)


def fibre_candidates(d, max_size: int) -> list:
    """Objects of a flat doctrine with at most ``max_size`` points, up to iso."""
    d = as_doctrine(d)
    out = []
    for n in range(max_size + 1):
        if d is Doctrine.REL:
            out.append(FinPoset.discrete(range(n)))
            continue
        for P in posets_up_to_iso(n):
            if d is Doctrine.TOP:
                out.append(FinSpace(P))
            elif d is Doctrine.LOC:
                out.append(dct.opens_of(FinSpace(P)))
            else:
                out.append(P)
    return out


def lax_functors(d, B: FinPoset, max_fibre: int, pseudo_only=False):
    """Enumerate valid lax functors over ``B`` in a flat doctrine."""
    d = as_doctrine(d)
    elems = list(B.elements)
    pairs = strict_pairs(B)
    cands = fibre_candidates(d, max_fibre)
    for objs in iproduct(cands, repeat=len(elems)):
        objects = dict(zip(elems, objs))
        choices = [list(dct.verticals(d, objects[b], objects[c])) for (b, c) in pairs]
        for vs in iproduct(*choices):
            F = LaxFunctor(d, B, objects, dict(zip(pairs, vs)))
            if any(not dct.special_cell_exists(d, F.composite(*t), F.verticals[(t[0], t[2])])
                   for t in strict_triples(B)):
                continue
            if pseudo_only and not F.is_pseudo():
                continue
            yield F


def preserves_pseudo(Y: LaxFunctor, b, c, e, sample_bound: int) -> Check:
    """Bounded test that ``- x Y`` keeps the triple ``b<c<e`` pseudo.

    Every pseudo ``X`` on the chain ``b<c<e`` with fibres of at most
    ``sample_bound`` points is tried; the witness is the first ``X`` whose
    theta cell is not invertible.  Flat doctrines only.
    """
    d = Y.doctrine
    if not d.flat:
        raise ValueError("preserves_pseudo is implemented for flat doctrines")
    chain = Y.base.subposet([b, c, e])
    Yr = Y.restrict([b, c, e])
    for X in lax_functors(d, chain, sample_bound, pseudo_only=True):
        if not theta(X, Yr, b, c, e).invertible:
            return Check(False, X)
    return Check(True, None)


# ---------------------------------------------------------------------------
# Horizontal transformations


class HorizontalTransformation:
    """Components ``f_b: X_b -> Y_b`` with a cell in every square.

    For cat, ``cells[(b, c)]`` holds the element map of the square at
    ``b < c``.
    """

    def __init__(self, source: LaxFunctor, target: LaxFunctor, components, cells=None):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.cells = dict(cells or {})

    def validate(self) -> list:
        X, Y = self.source, self.target
        d = X.doctrine
        out = []
        if X.base != Y.base or X.doctrine != Y.doctrine:
            return [Violation("boundary", (), "source and target differ in base or doctrine")]
        for b in X.base.elements:
            f = self.components.get(b)
            if f is None or not dct.is_horizontal(d, X.objects[b], Y.objects[b], f):
                out.append(Violation("component", (b,), "not a horizontal map"))
        if out:
            return out
        for b, c in strict_pairs(X.base):
            if d.flat:
                if not dct.cell_exists(d, self.components[b], X.verticals[(b, c)],
                                       Y.verticals[(b, c)], self.components[c]):
                    out.append(Violation("square", (b, c), "no cell fills the square"))
            else:
                data = self.cells.get((b, c))
                problems = ["missing cell"] if data is None else dct.cell_check(
                    d, X.verticals[(b, c)], Y.verticals[(b, c)], data,
                    self.components[b], self.components[c])
                if problems:
                    out.append(Violation("square", (b, c), problems[0]))
        if out or d.flat:
            return out
        for t in strict_triples(X.base):
            b, c, e = t
            cx = X.composite(b, c, e)
            for (y, x), label in cx.pair_class.items():
                left = self.cells[(b, e)][X.comparisons[t][label]]
                img = (self.cells[(c, e)][y], self.cells[(b, c)][x])
                right = Y.comparisons[t][Y.composite(b, c, e).pair_class[img]]
                if left != right:
                    out.append(Violation("compatibility", t, f"comparison squares disagree on {(y, x)!r}"))
                    break
        return out

    def __repr__(self):
        return f"HorizontalTransformation({self.components!r})"


def transformations(X: LaxFunctor, Y: LaxFunctor):
    """Enumerate horizontal transformations ``X -> Y`` (flat doctrines)."""
    d = X.doctrine
    elems = list(X.base.elements)
    choices = [list(dct.horizontal_maps(d, X.objects[b], Y.objects[b])) for b in elems]
    for fs in iproduct(*choices):
        h = HorizontalTransformation(X, Y, dict(zip(elems, fs)))
        if all(dct.cell_exists(d, h.components[b], X.verticals[(b, c)], Y.verticals[(b, c)], h.components[c])
               for (b, c) in strict_pairs(X.base)):
            yield h


def terminal_lax(d, B: FinPoset) -> LaxFunctor:
    """The lax functor with a one-point fibre everywhere and identity-like verticals."""
    d = as_doctrine(d)
    pt = {Doctrine.TOP: FinSpace.discrete(["*"]),
          Doctrine.POS: FinPoset(["*"], []),
          Doctrine.REL: FinPoset(["*"], []),
          Doctrine.LOC: dct.opens_of(FinSpace.discrete(["*"]))}
    if d is Doctrine.CAT:
        from .cat import FinCat, hom_profunctor
        T = FinCat.terminal()
        verts = {p: hom_profunctor(T) for p in strict_pairs(B)}
        idm = ("id", "*")
        comps = {t: {(idm, idm): idm} for t in strict_triples(B)}
        return LaxFunctor(d, B, {b: T for b in B.elements}, verts, comps)
    X = pt[d]
    return LaxFunctor(d, B, {b: X for b in B.elements},
                      {p: dct.v_identity(d, X) for p in strict_pairs(B)})
