"""Finite categories, functors and set-valued profunctors.

A profunctor ``m: X0 -/-> X1`` assigns a finite set ``m(a, c)`` to objects
``a`` of X0 and ``c`` of X1.  Elements behave like arrows ``a -> c``: a
morphism ``g: a' -> a`` of X0 acts on the left (``x.g`` lies in
``m(a', c)``) and ``h: c -> c'`` of X1 acts on the right (``h.x`` lies in
``m(a, c')``).
"""

from __future__ import annotations

from functools import cached_property
from itertools import product as iproduct

from .order import FinPoset, OrderError, sort_key
from .unionfind import UnionFind


class CategoryError(ValueError):
    """Category, functor or profunctor data violates its axioms."""


def _sorted(xs):
    return sorted(xs, key=sort_key)


class FinCat:
    """A finite category given by explicit tables.

    ``compose[(g, f)]`` is ``g . f`` (first f, then g), defined exactly when
    ``tgt(f) == src(g)``.
    """

    def __init__(self, objects, morphisms, identities, compose, check=True):
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.identities = dict(identities)
        self.compose = dict(compose)
        if check:
            problems = self.violations()
            if problems:
                raise CategoryError(problems[0])

    def violations(self) -> list:
        out = []
        objs = set(self.objects)
        for f, (a, b) in self.morphisms.items():
            if a not in objs or b not in objs:
                out.append(f"morphism {f!r} has unknown endpoint")
        for a in self.objects:
            i = self.identities.get(a)
            if i is None or self.morphisms.get(i) != (a, a):
                out.append(f"bad identity on {a!r}")
        if out:
            return out
        for f, (a, b) in self.morphisms.items():
            for g in self.out_of(b):
                h = self.compose.get((g, f))
                if h is None or self.morphisms.get(h) != (a, self.morphisms[g][1]):
                    out.append(f"composite of {g!r} after {f!r} missing or mistyped")
        if out:
            return out
        for f, (a, b) in self.morphisms.items():
            if self.compose[(f, self.identities[a])] != f or self.compose[(self.identities[b], f)] != f:
                out.append(f"unit law fails at {f!r}")
        for f, (a, b) in self.morphisms.items():
            for g in self.out_of(b):
                gf = self.compose[(g, f)]
                for h in self.out_of(self.morphisms[g][1]):
                    if self.compose[(h, gf)] != self.compose[(self.compose[(h, g)], f)]:
                        out.append(f"associativity fails at {h!r}, {g!r}, {f!r}")
        return out

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_poset(cls, P):
        mors = {(x, y): (x, y) for (x, y) in P.relation}
        ids = {x: (x, x) for x in P.elements}
        comp = {((y, z), (x, y)): (x, z) for (x, y) in P.relation for (y2, z) in P.relation if y2 == y}
        return cls(P.elements, mors, ids, comp, check=False)

    @classmethod
    def free(cls, objects, edges):
        """Free category on an acyclic multigraph; ``edges`` is ``[(name, src, tgt)]``.

        Morphisms are paths, labelled by tuples of edge names (identities by
        ``("id", object)``).
        """
        objects = tuple(objects)
        out_edges = {a: [] for a in objects}
        for name, a, b in edges:
            out_edges[a].append((name, b))
        paths = {}
        for a in objects:
            stack = [((), a)]
            while stack:
                p, end = stack.pop()
                if p:
                    paths[p] = (a, end)
                if len(p) > len(edges):
                    raise CategoryError("edge graph has a cycle")
                for name, b in out_edges[end]:
                    stack.append((p + (name,), b))
        ids = {a: ("id", a) for a in objects}
        mors = dict(paths)
        mors.update({("id", a): (a, a) for a in objects})

        def path(m):
            return () if m[0] == "id" and len(m) == 2 and m[1] in ids else m

        comp = {}
        for f, (a, b) in mors.items():
            for g, (b2, c) in mors.items():
                if b2 != b:
                    continue
                p = path(f) + path(g)
                comp[(g, f)] = p if p else ids[a]
        return cls(objects, mors, ids, comp)

    @classmethod
    def monoid(cls, elements, multiply, unit, obj="*"):
        """One-object category; ``multiply(g, f)`` is ``g . f``."""
        mors = {e: (obj, obj) for e in elements}
        comp = {(g, f): multiply(g, f) for g in elements for f in elements}
        return cls((obj,), mors, {obj: unit}, comp)

    @classmethod
    def empty(cls):
        return cls((), {}, {}, {}, check=False)

    @classmethod
    def terminal(cls, obj="*"):
        return cls((obj,), {("id", obj): (obj, obj)}, {obj: ("id", obj)},
                   {(("id", obj), ("id", obj)): ("id", obj)}, check=False)

    # -- queries ---------------------------------------------------------------

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def __eq__(self, other):
        return (isinstance(other, FinCat) and set(self.objects) == set(other.objects)
                and self.morphisms == other.morphisms and self.identities == other.identities
                and self.compose == other.compose)

    def __hash__(self):
        return hash((frozenset(self.objects), len(self.morphisms)))

    def src(self, f):
        return self.morphisms[f][0]

    def tgt(self, f):
        return self.morphisms[f][1]

    def comp(self, g, f):
        return self.compose[(g, f)]

    def id(self, a):
        return self.identities[a]

    @cached_property
    def _homs(self):
        homs = {}
        for f, ab in self.morphisms.items():
            homs.setdefault(ab, []).append(f)
        return {k: tuple(_sorted(v)) for k, v in homs.items()}

    def hom(self, a, b) -> tuple:
        return self._homs.get((a, b), ())

    @cached_property
    def _out(self):
        out = {a: [] for a in self.objects}
        for f, (a, _) in self.morphisms.items():
            out[a].append(f)
        return {a: tuple(_sorted(v)) for a, v in out.items()}

    @cached_property
    def _in(self):
        into = {a: [] for a in self.objects}
        for f, (_, b) in self.morphisms.items():
            into[b].append(f)
        return {a: tuple(_sorted(v)) for a, v in into.items()}

    def out_of(self, a) -> tuple:
        return self._out.get(a, ())

    def into(self, b) -> tuple:
        return self._in.get(b, ())

    def sorted_morphisms(self) -> list:
        cached = self.__dict__.get("_sorted_mors")
        if cached is None:
            cached = self._sorted_mors = _sorted(self.morphisms)
        return list(cached)

    def is_identity(self, f) -> bool:
        return self.identities.get(self.src(f)) == f

    def is_thin(self) -> bool:
        return all(len(v) <= 1 for v in self._homs.values())

    def as_poset(self) -> FinPoset:
        """The poset of a thin, skeletal category."""
        if not self.is_thin():
            raise CategoryError("category is not thin")
        return FinPoset(self.objects, [ab for ab in self.morphisms.values()])

    def full_subcategory(self, objects):
        keep = set(objects)
        objs = [a for a in self.objects if a in keep]
        mors = {f: ab for f, ab in self.morphisms.items() if ab[0] in keep and ab[1] in keep}
        comp = {k: v for k, v in self.compose.items() if k[0] in mors and k[1] in mors}
        return FinCat(objs, mors, {a: self.identities[a] for a in objs}, comp, check=False)

    def product(self, other):
        objs = [(a, b) for a in self.objects for b in other.objects]
        mors = {(f, g): ((self.src(f), other.src(g)), (self.tgt(f), other.tgt(g)))
                for f in self.morphisms for g in other.morphisms}
        ids = {(a, b): (self.identities[a], other.identities[b]) for (a, b) in objs}
        comp = {((f2, g2), (f1, g1)): (self.compose[(f2, f1)], other.compose[(g2, g1)])
                for (f2, f1) in self.compose for (g2, g1) in other.compose}
        return FinCat(objs, mors, ids, comp, check=False)


class FinFunctor:
    """A functor between finite categories."""

    def __init__(self, source: FinCat, target: FinCat, obj_map, mor_map, check=True):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        if check:
            problems = self.violations()
            if problems:
                raise CategoryError(problems[0])

    def violations(self) -> list:
        S, T = self.source, self.target
        out = []
        for a in S.objects:
            if self.obj_map.get(a) not in set(T.objects):
                out.append(f"object {a!r} not mapped into the target")
        for f, (a, b) in S.morphisms.items():
            h = self.mor_map.get(f)
            if h not in T.morphisms or T.morphisms[h] != (self.obj_map.get(a), self.obj_map.get(b)):
                out.append(f"morphism {f!r} mapped badly")
        if out:
            return out
        for a in S.objects:
            if self.mor_map[S.identities[a]] != T.identities[self.obj_map[a]]:
                out.append(f"identity on {a!r} not preserved")
        for (g, f), h in S.compose.items():
            if T.compose[(self.mor_map[g], self.mor_map[f])] != self.mor_map[h]:
                out.append(f"composite {g!r} . {f!r} not preserved")
        return out

    def __call__(self, x):
        if x in self.mor_map:
            return self.mor_map[x]
        return self.obj_map[x]

    def ob(self, a):
        return self.obj_map[a]

    def mor(self, f):
        return self.mor_map[f]

    def then(self, other: "FinFunctor") -> "FinFunctor":
        return FinFunctor(self.source, other.target,
                          {a: other.obj_map[b] for a, b in self.obj_map.items()},
                          {f: other.mor_map[g] for f, g in self.mor_map.items()}, check=False)

    def __eq__(self, other):
        return (isinstance(other, FinFunctor) and self.obj_map == other.obj_map
                and self.mor_map == other.mor_map)

    def __hash__(self):
        return hash(tuple(sorted(self.obj_map.items(), key=sort_key)))

    def __repr__(self):
        return f"FinFunctor({self.obj_map!r})"


def _functor_plan(C: FinCat):
    """Non-identity morphisms in search order, and for each one the
    composition equations that become checkable once it is assigned."""
    plan = C.__dict__.get("_plan")
    if plan is not None:
        return plan
    mors = [f for f in C.sorted_morphisms() if not C.is_identity(f)]
    checks = {f: [] for f in mors}
    order = {f: k for k, f in enumerate(mors)}
    for (g, f), h in C.compose.items():
        if C.is_identity(g) or C.is_identity(f):
            continue
        last = max(order[g], order[f], order[h] if h in order else -1)
        checks[mors[last]].append((g, f, h))
    C._plan = (mors, checks)
    return C._plan


def functors(C: FinCat, D: FinCat, base=None):
    """Enumerate all functors C -> D.

    ``base=(p, q)`` restricts to functors F with ``q . F == p`` (functors
    over a common base category).
    """
    objs = list(C.objects)
    p, q = base if base is not None else (None, None)
    mors, checks = _functor_plan(C)

    def obj_choices(a):
        if p is None:
            return D.objects
        return [b for b in D.objects if q.obj_map[b] == p.obj_map[a]]

    def mor_choices(f, om):
        cands = D.hom(om[C.src(f)], om[C.tgt(f)])
        if p is None:
            return cands
        want = p.mor_map[f]
        return [g for g in cands if q.mor_map[g] == want]

    def rec_obj(k, om):
        if k == len(objs):
            mm = {C.identities[a]: D.identities[om[a]] for a in objs}
            yield from rec_mor(0, om, mm)
            return
        for b in obj_choices(objs[k]):
            om[objs[k]] = b
            yield from rec_obj(k + 1, om)
        om.pop(objs[k], None)

    def rec_mor(k, om, mm):
        if k == len(mors):
            yield FinFunctor(C, D, dict(om), dict(mm), check=False)
            return
        f = mors[k]
        for g in mor_choices(f, om):
            mm[f] = g
            if all(D.compose[(mm[a], mm[b])] == mm[c] for a, b, c in checks[f]):
                yield from rec_mor(k + 1, om, mm)
        mm.pop(f, None)

    yield from rec_obj(0, {})


# ---------------------------------------------------------------------------
# Profunctors


class Profunctor:
    """Set-valued profunctor with explicit left and right action tables.

    ``elements`` maps each element label to its component ``(a, c)``;
    ``left[(x, g)]`` is ``x.g`` and ``right[(h, x)]`` is ``h.x``.
    """

    def __init__(self, source: FinCat, target: FinCat, elements, left, right, check=True):
        self.source = source
        self.target = target
        self.elements = dict(elements)
        self.left = dict(left)
        self.right = dict(right)
        self.pair_class = None
        if check:
            problems = self.violations()
            if problems:
                raise CategoryError(problems[0])

    @cached_property
    def _components(self):
        comp = {}
        for x, ac in self.elements.items():
            comp.setdefault(ac, []).append(x)
        return {k: tuple(_sorted(v)) for k, v in comp.items()}

    def component(self, a, c) -> tuple:
        return self._components.get((a, c), ())

    def sorted_elements(self) -> list:
        return _sorted(self.elements)

    def violations(self) -> list:
        X0, X1 = self.source, self.target
        out = []
        for x, (a, c) in self.elements.items():
            if a not in set(X0.objects) or c not in set(X1.objects):
                return [f"element {x!r} lies over unknown objects"]
            for g in X0.into(a):
                y = self.left.get((x, g))
                if y is None or self.elements.get(y) != (X0.src(g), c):
                    out.append(f"left action of {g!r} on {x!r} missing or mistyped")
            for h in X1.out_of(c):
                y = self.right.get((h, x))
                if y is None or self.elements.get(y) != (a, X1.tgt(h)):
                    out.append(f"right action of {h!r} on {x!r} missing or mistyped")
        if out:
            return out
        for x, (a, c) in self.elements.items():
            if self.left[(x, X0.identities[a])] != x or self.right[(X1.identities[c], x)] != x:
                out.append(f"identities do not act trivially on {x!r}")
            for g in X0.into(a):
                xg = self.left[(x, g)]
                for g2 in X0.into(X0.src(g)):
                    if self.left[(xg, g2)] != self.left[(x, X0.compose[(g, g2)])]:
                        out.append(f"left action not functorial at {x!r}")
                for h in X1.out_of(c):
                    if self.left[(self.right[(h, x)], g)] != self.right[(h, xg)]:
                        out.append(f"actions do not commute at {x!r}")
            for h in X1.out_of(c):
                hx = self.right[(h, x)]
                for h2 in X1.out_of(X1.tgt(h)):
                    if self.right[(h2, hx)] != self.right[(X1.compose[(h2, h)], x)]:
                        out.append(f"right action not functorial at {x!r}")
        return out

    def __repr__(self):
        return f"Profunctor({len(self.elements)} elements)"

    def __eq__(self, other):
        return (isinstance(other, Profunctor) and self.source == other.source
                and self.target == other.target and self.elements == other.elements
                and self.left == other.left and self.right == other.right)

    def __hash__(self):
        return hash(len(self.elements))


def hom_profunctor(X: FinCat) -> Profunctor:
    elements = dict(X.morphisms)
    left = {(x, g): X.compose[(x, g)] for x in X.morphisms for g in X.into(X.src(x))}
    right = {(h, x): X.compose[(h, x)] for x in X.morphisms for h in X.out_of(X.tgt(x))}
    return Profunctor(X, X, elements, left, right, check=False)


def empty_profunctor(X0: FinCat, X1: FinCat) -> Profunctor:
    return Profunctor(X0, X1, {}, {}, {}, check=False)


def compose_prof(m: Profunctor, n: Profunctor) -> Profunctor:
    """Coend composite ``n . m`` of ``m: X0 -/-> X1`` and ``n: X1 -/-> X2``.

    Pairs ``(y, x)`` with x in m(a, b) and y in n(b, c) are identified along
    ``(y.g, x) ~ (y, g.x)``; each class is labelled by its smallest pair.
    ``result.pair_class`` maps every pair to its class label.
    """
    X1 = m.target
    if n.source != X1:
        raise CategoryError("profunctors are not composable")
    by_source = {}
    for x, (a, b) in m.elements.items():
        by_source.setdefault(b, []).append(x)
    n_by_source = {}
    for y, (b, c) in n.elements.items():
        n_by_source.setdefault(b, []).append(y)
    uf = UnionFind()
    for b in X1.objects:
        for x in by_source.get(b, ()):
            for y in n_by_source.get(b, ()):
                uf.add((y, x))
    for g, (b, b2) in X1.morphisms.items():
        for x in by_source.get(b, ()):
            gx = m.right[(g, x)]
            for y in n_by_source.get(b2, ()):
                uf.union((n.left[(y, g)], x), (y, gx))
    pair_class = {pair: uf.find(pair) for pair in uf.parent}
    elements = {}
    for (y, x), label in pair_class.items():
        elements[label] = (m.elements[x][0], n.elements[y][1])
    X0, X2 = m.source, n.target
    left, right = {}, {}
    for label, (a, c) in elements.items():
        y, x = label
        for g in X0.into(a):
            left[(label, g)] = pair_class[(y, m.left[(x, g)])]
        for h in X2.out_of(c):
            right[(h, label)] = pair_class[(n.right[(h, y)], x)]
    out = Profunctor(X0, X2, elements, left, right, check=False)
    out.pair_class = pair_class
    return out


def product_profunctor(m: Profunctor, n: Profunctor) -> Profunctor:
    P0 = m.source.product(n.source)
    P1 = m.target.product(n.target)
    elements = {(x, y): ((m.elements[x][0], n.elements[y][0]), (m.elements[x][1], n.elements[y][1]))
                for x in m.elements for y in n.elements}
    left, right = {}, {}
    for (x, y), (a, c) in elements.items():
        for (g1, g2) in (tuple(g) for g in P0.into(a)):
            left[((x, y), (g1, g2))] = (m.left[(x, g1)], n.left[(y, g2)])
        for (h1, h2) in (tuple(h) for h in P1.out_of(c)):
            right[((h1, h2), (x, y))] = (m.right[(h1, x)], n.right[(h2, y)])
    return Profunctor(P0, P1, elements, left, right, check=False)


def is_natural_map(m: Profunctor, n: Profunctor, data, f0=None, f1=None) -> list:
    """Check that ``data`` (element map) is a cell ``m -> n(f0-, f1-)``.

    ``f0``/``f1`` default to identities.  Returns a list of problems.
    """
    F0 = f0.mor_map if f0 is not None else None
    F1 = f1.mor_map if f1 is not None else None
    O0 = f0.obj_map if f0 is not None else None
    O1 = f1.obj_map if f1 is not None else None
    out = []
    for x, (a, c) in m.elements.items():
        t = data.get(x)
        want = (O0[a] if O0 else a, O1[c] if O1 else c)
        if t is None or n.elements.get(t) != want:
            out.append(f"component at {x!r} missing or mistyped")
    if out:
        return out
    for (x, g), xg in m.left.items():
        gg = F0[g] if F0 else g
        if data[xg] != n.left[(data[x], gg)]:
            out.append(f"not natural for left action of {g!r} on {x!r}")
    for (h, x), hx in m.right.items():
        hh = F1[h] if F1 else h
        if data[hx] != n.right[(hh, data[x])]:
            out.append(f"not natural for right action of {h!r} on {x!r}")
    return out


def find_profunctor_iso(m: Profunctor, n: Profunctor, cap: int = 6):
    """Search a componentwise bijection ``m -> n`` commuting with both actions.

    Returns the element map, or ``None``.  Components larger than ``cap`` raise.
    """
    if m.source != n.source or m.target != n.target:
        return None
    comps = set(m._components) | set(n._components)
    for ac in comps:
        if len(m._components.get(ac, ())) != len(n._components.get(ac, ())):
            return None
        if len(m._components.get(ac, ())) > cap:
            from .order import CapExceeded
            raise CapExceeded(f"component {ac!r} exceeds cap {cap}")
    neighbours = {x: [] for x in m.elements}
    for (x, g), y in m.left.items():
        neighbours[x].append(("L", g, y))
    for (h, x), y in m.right.items():
        neighbours[x].append(("R", h, y))
    elems = m.sorted_elements()

    def propagate(assign, used, x, t):
        stack = [(x, t)]
        new = []
        while stack:
            a, b = stack.pop()
            if a in assign:
                if assign[a] != b:
                    return None, new
                continue
            if b in used:
                return None, new
            assign[a] = b
            used.add(b)
            new.append(a)
            for kind, k, y in neighbours[a]:
                z = n.left[(b, k)] if kind == "L" else n.right[(k, b)]
                stack.append((y, z))
        return True, new

    def rec(assign, used):
        free = [x for x in elems if x not in assign]
        if not free:
            return dict(assign)
        x = free[0]
        for t in n.component(*m.elements[x]):
            if t in used:
                continue
            ok, new = propagate(assign, used, x, t)
            if ok:
                res = rec(assign, used)
                if res is not None:
                    return res
            for a in new:
                used.discard(assign.pop(a))
        return None

    return rec({}, set())
