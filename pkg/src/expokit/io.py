"""Instance files: parsing and deterministic serialization.

An instance file is a YAML (or JSON) mapping.  All sections are optional
and key order does not matter::

    doctrine: top                 # default doctrine for lax / objects_over
    posets:
      B: {elements: [0, 1, 2], covers: [[0, 1], [1, 2]]}
    spaces:                       # finite spaces, opens = down-sets
      Y: {points: [a, b], covers: [[a, b]]}
    lattices:
      L: {elements: [0, a, 1], covers: [[0, a], [a, 1]]}
    meetmaps:
      n: {source: L, target: L, table: [[0, 0], [a, 1], [1, 1]]}
    categories:
      C: {poset: B}                                   # thin category
      D: {objects: [x, y], edges: [[f, x, y]]}        # free category
      E: {objects: [x, y], morphisms: [[f, x, y]],    # explicit form
          identities: [[x, ix], [y, iy]], compose: [[f, ix, f], ...]}
    objects_over:
      q: {base: B, total: Y, projection: [[a, 0], [b, 2]]}
    lax:
      F: {base: B, objects: [[0, Y0], [1, Y1]],
          verticals: [{from: 0, to: 1, table: [[[], []], [[a], [b]]]}]}

Lists stand for tuples inside labels, and ``{set: [...]}`` for a
frozenset.  Objects inside ``lax`` and ``objects_over`` may be given by
name or inline.  Vertical data is ``table`` (top: open -> open, loc:
element -> element), ``pairs`` (pos/rel), or ``elements``/``left``/
``right`` (cat) with ``comparisons`` as ``{triple: [b, c, d], map: [...]}``.
"""

from __future__ import annotations

import json

import yaml

from .cat import FinCat, FinFunctor, Profunctor
from .doctrines import Doctrine, MeetMap, OrderIdeal, Relation, as_doctrine, opens_of
from .glueing import ObjectOverB
from .laxcat import LaxFunctor
from .order import FinLattice, FinPoset, FinSpace, sort_key


class InstanceError(ValueError):
    """The instance file is malformed or refers to something undefined."""


# ---------------------------------------------------------------------------
# label encoding


def decode(x):
    if isinstance(x, list):
        return tuple(decode(i) for i in x)
    if isinstance(x, dict) and set(x) == {"set"}:
        return frozenset(decode(i) for i in x["set"])
    return x


def encode(x):
    if isinstance(x, tuple):
        return [encode(i) for i in x]
    if isinstance(x, frozenset):
        return {"set": [encode(i) for i in sorted(x, key=sort_key)]}
    return x


def _pairs(data):
    """Accept ``[[k, v], ...]`` or a mapping."""
    if data is None:
        return []
    if isinstance(data, dict):
        return [(decode(k), decode(v)) for k, v in data.items()]
    out = []
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise InstanceError(f"expected a pair, got {item!r}")
        out.append((decode(item[0]), decode(item[1])))
    return out


def _open(x):
    """An open set: a list of points (or an encoded set)."""
    if isinstance(x, dict):
        return decode(x)
    return frozenset(decode(i) for i in (x or []))


def _require(d, key, what):
    if not isinstance(d, dict) or key not in d:
        raise InstanceError(f"{what} needs a '{key}' entry")
    return d[key]


# ---------------------------------------------------------------------------
# parsing


class Instance:
    """Resolved contents of an instance file."""

    SECTIONS = ("posets", "spaces", "lattices", "meetmaps", "categories", "objects_over", "lax")

    def __init__(self, doctrine=None):
        self.doctrine = as_doctrine(doctrine) if doctrine else None
        for s in self.SECTIONS:
            setattr(self, s, {})

    def lookup(self, name, sections=SECTIONS):
        for s in sections:
            table = getattr(self, s)
            if name in table:
                return table[name]
        raise InstanceError(f"undefined name {name!r}")

    def first(self, section):
        table = getattr(self, section)
        if not table:
            raise InstanceError(f"the file defines no {section}")
        return next(iter(table.items()))


def parse_poset(d) -> FinPoset:
    elems = [decode(x) for x in _require(d, "elements", "a poset")]
    if "leq" in d:
        return FinPoset(elems, _pairs(d["leq"]))
    return FinPoset.from_pairs(elems, _pairs(d.get("covers")))


def parse_space(d) -> FinSpace:
    pts = [decode(x) for x in _require(d, "points", "a space")]
    if "opens" in d:
        return FinSpace.from_opens(pts, [_open(u) for u in d["opens"]])
    if "leq" in d:
        return FinSpace(FinPoset(pts, _pairs(d["leq"])))
    return FinSpace(FinPoset.from_pairs(pts, _pairs(d.get("covers"))))


def parse_lattice(d) -> FinLattice:
    return FinLattice(parse_poset(d))


def parse_category(d, inst=None) -> FinCat:
    if "poset" in d:
        P = d["poset"]
        P = inst.lookup(P, ("posets",)) if isinstance(P, str) and inst else parse_poset(P)
        return FinCat.from_poset(P)
    if "edges" in d:
        edges = [tuple(decode(x) for x in e) for e in d["edges"]]
        return FinCat.free([decode(x) for x in d["objects"]], edges)
    objs = [decode(x) for x in _require(d, "objects", "a category")]
    mors = {}
    for m in _require(d, "morphisms", "a category"):
        name, s, t = (decode(x) for x in m)
        mors[name] = (s, t)
    ids = dict(_pairs(_require(d, "identities", "a category")))
    comp = {}
    for g, f, h in (tuple(decode(x) for x in row) for row in d.get("compose", [])):
        comp[(g, f)] = h
    return FinCat(objs, mors, ids, comp)


def _object(inst, d, value, where):
    """Resolve a doctrine object given by name or inline."""
    d = as_doctrine(d)
    if isinstance(value, str) and not value.startswith("{"):
        for section in ("spaces", "posets", "lattices", "categories"):
            table = getattr(inst, section)
            if value in table:
                X = table[value]
                if d is Doctrine.TOP and isinstance(X, FinPoset):
                    return FinSpace(X)
                if d is Doctrine.CAT and isinstance(X, FinPoset):
                    return FinCat.from_poset(X)
                if d is Doctrine.LOC and isinstance(X, FinSpace):
                    return opens_of(X)
                if d in (Doctrine.POS, Doctrine.REL) and isinstance(X, FinSpace):
                    return X.order
                return X
        raise InstanceError(f"{where}: undefined object {value!r}")
    if not isinstance(value, dict):
        raise InstanceError(f"{where}: cannot read an object from {value!r}")
    if d is Doctrine.TOP:
        return parse_space(value) if "points" in value else FinSpace(parse_poset(value))
    if d is Doctrine.LOC:
        if "points" in value:
            return opens_of(parse_space(value))
        return parse_lattice(value)
    if d is Doctrine.CAT:
        return parse_category(value, inst)
    if "points" in value:
        return parse_space(value).order
    return parse_poset(value)


def parse_vertical(d, X0, X1, v, where=""):
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        table = {_open(a): _open(b) for a, b in _require(v, "table", where)}
        L0 = opens_of(X0)
        for U in L0:
            table.setdefault(U, None)
        if any(val is None for val in table.values()):
            missing = [U for U, val in table.items() if val is None]
            raise InstanceError(f"{where}: table misses the open {sorted(missing[0], key=sort_key)!r}")
        return MeetMap(L0, opens_of(X1), table)
    if d is Doctrine.LOC:
        return MeetMap(X0, X1, dict(_pairs(_require(v, "table", where))))
    if d is Doctrine.POS:
        return OrderIdeal(X0, X1, _pairs(v.get("pairs", [])))
    if d is Doctrine.REL:
        return Relation(X0, X1, _pairs(v.get("pairs", [])))
    elements = {decode(k): tuple(decode(x) for x in val) for k, val in _pairs_raw(v.get("elements", []))}
    left = {(decode(x), decode(g)): decode(y) for x, g, y in v.get("left", [])}
    right = {(decode(h), decode(x)): decode(y) for h, x, y in v.get("right", [])}
    return Profunctor(X0, X1, elements, left, right)


def _pairs_raw(data):
    if isinstance(data, dict):
        return list(data.items())
    return [(row[0], row[1]) for row in data]


def parse_lax(inst, name, v, default_doctrine) -> LaxFunctor:
    d = as_doctrine(v.get("doctrine", default_doctrine) or "top")
    B = v.get("base")
    B = inst.lookup(B, ("posets",)) if isinstance(B, str) else parse_poset(_require(v, "base", f"lax {name}"))
    objects = {b: _object(inst, d, X, f"lax {name}") for b, X in _pairs_raw_decoded(v.get("objects", []))}
    verts = {}
    for row in v.get("verticals", []):
        b, c = decode(_require(row, "from", f"lax {name}")), decode(_require(row, "to", f"lax {name}"))
        if b not in objects or c not in objects:
            raise InstanceError(f"lax {name}: vertical {b!r} -> {c!r} has no objects")
        verts[(b, c)] = parse_vertical(d, objects[b], objects[c], row, f"lax {name} vertical {(b, c)!r}")
    comps = {}
    for row in v.get("comparisons", []):
        t = decode(_require(row, "triple", f"lax {name}"))
        comps[t] = dict(_pairs(row.get("map", [])))
    F = LaxFunctor(d, B, objects, verts, comps)
    problems = F.validate()
    if problems:
        raise InstanceError(f"lax {name}: {problems[0]}")
    return F


def _pairs_raw_decoded(data):
    return [(decode(k), v) for k, v in _pairs_raw(data)]


def parse_object_over(inst, name, v, default_doctrine) -> ObjectOverB:
    d = as_doctrine(v.get("doctrine", default_doctrine) or "top")
    B = v.get("base")
    B = inst.lookup(B, ("posets",)) if isinstance(B, str) else parse_poset(_require(v, "base", f"object {name}"))
    total = _object(inst, d, _require(v, "total", f"object {name}"), f"object {name}")
    proj = dict(_pairs(_require(v, "projection", f"object {name}")))
    if d is Doctrine.CAT:
        from .catprof import over_poset
        missing = [a for a in total.objects if a not in proj]
        if missing:
            raise InstanceError(f"object {name}: object {missing[0]!r} has no image")
        try:
            return over_poset(total, B, proj)
        except (KeyError, ValueError) as exc:
            raise InstanceError(f"object {name}: projection is not a functor ({exc})") from None
    if d is Doctrine.LOC:
        proj = {_open(k) if isinstance(k, list) else k: v2 for k, v2 in proj.items()}
    q = ObjectOverB(d, total, B, proj)
    problems = q.validate()
    if problems:
        raise InstanceError(f"object {name}: {problems[0]}")
    return q


def parse_instance(doc, doctrine=None) -> Instance:
    """Resolve a decoded document; ``doctrine`` overrides the file's default."""
    if not isinstance(doc, dict):
        raise InstanceError("an instance file must be a mapping")
    inst = Instance(doctrine or doc.get("doctrine"))
    for name, v in (doc.get("posets") or {}).items():
        inst.posets[name] = parse_poset(v)
    for name, v in (doc.get("spaces") or {}).items():
        inst.spaces[name] = parse_space(v)
    for name, v in (doc.get("lattices") or {}).items():
        inst.lattices[name] = parse_lattice(v)
    for name, v in (doc.get("meetmaps") or {}).items():
        L0 = inst.lookup(_require(v, "source", f"meetmap {name}"), ("lattices",))
        L1 = inst.lookup(_require(v, "target", f"meetmap {name}"), ("lattices",))
        inst.meetmaps[name] = MeetMap(L0, L1, dict(_pairs(_require(v, "table", f"meetmap {name}"))))
    for name, v in (doc.get("categories") or {}).items():
        inst.categories[name] = parse_category(v, inst)
    for name, v in (doc.get("objects_over") or {}).items():
        inst.objects_over[name] = parse_object_over(inst, name, v, inst.doctrine)
    for name, v in (doc.get("lax") or {}).items():
        inst.lax[name] = parse_lax(inst, name, v, inst.doctrine)
    return inst


def load_text(text: str, doctrine=None) -> Instance:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InstanceError(f"cannot parse instance: {exc}") from None
    return parse_instance(doc, doctrine)


def load_file(path, doctrine=None) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return load_text(fh.read(), doctrine)


# ---------------------------------------------------------------------------
# serialization


def _lab(xs):
    return [encode(x) for x in sorted(xs, key=sort_key)]


def _rows(pairs):
    return [[encode(a), encode(b)] for a, b in sorted(pairs, key=sort_key)]


def dump_poset(P: FinPoset) -> dict:
    return {"elements": [encode(x) for x in P.elements], "covers": _rows(P.covers())}


def dump_space(Y: FinSpace) -> dict:
    return {"points": [encode(x) for x in Y.points], "covers": _rows(Y.order.covers())}


def dump_lattice(L: FinLattice) -> dict:
    return dump_poset(L.order)


def dump_category(C: FinCat) -> dict:
    return {
        "objects": [encode(a) for a in C.objects],
        "morphisms": [[encode(f), encode(s), encode(t)] for f, (s, t) in
                      sorted(C.morphisms.items(), key=lambda kv: sort_key(kv[0]))],
        "identities": _rows(C.identities.items()),
        "compose": [[encode(g), encode(f), encode(h)] for (g, f), h in
                    sorted(C.compose.items(), key=lambda kv: sort_key(kv[0]))],
    }


def dump_meetmap(n: MeetMap, names=("L0", "L1")) -> dict:
    return {"source": names[0], "target": names[1], "table": _rows(n.table.items())}


def dump_object(d, X) -> dict:
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return dump_space(X)
    if d is Doctrine.CAT:
        return dump_category(X)
    if d is Doctrine.LOC:
        return dump_lattice(X)
    return dump_poset(X)


def dump_vertical(d, v) -> dict:
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return {"table": [[_lab(U), _lab(W)] for U, W in sorted(v.table.items(), key=lambda kv: sort_key(kv[0]))]}
    if d is Doctrine.LOC:
        return {"table": _rows(v.table.items())}
    if d in (Doctrine.POS, Doctrine.REL):
        return {"pairs": _rows(v.pairs)}
    return {
        "elements": [[encode(x), [encode(a), encode(c)]] for x, (a, c) in
                     sorted(v.elements.items(), key=lambda kv: sort_key(kv[0]))],
        "left": [[encode(x), encode(g), encode(y)] for (x, g), y in
                 sorted(v.left.items(), key=lambda kv: sort_key(kv[0]))],
        "right": [[encode(h), encode(x), encode(y)] for (h, x), y in
                  sorted(v.right.items(), key=lambda kv: sort_key(kv[0]))],
    }


def dump_lax(F: LaxFunctor) -> dict:
    d = F.doctrine
    out = {
        "doctrine": d.value,
        "base": dump_poset(F.base),
        "objects": [[encode(b), dump_object(d, F.objects[b])] for b in F.base.elements],
        "verticals": [dict({"from": encode(b), "to": encode(c)}, **dump_vertical(d, v))
                      for (b, c), v in sorted(F.verticals.items(), key=lambda kv: sort_key(kv[0]))],
    }
    if not d.flat:
        out["comparisons"] = [{"triple": encode(t), "map": _rows(m.items())}
                              for t, m in sorted(F.comparisons.items(), key=lambda kv: sort_key(kv[0]))]
    return out


def dump_object_over(q: ObjectOverB) -> dict:
    d = q.doctrine
    if d is Doctrine.CAT:
        proj = q.projection.obj_map
    else:
        proj = q.projection
    return {"doctrine": d.value, "base": dump_poset(q.base), "total": dump_object(d, q.total),
            "projection": _rows(proj.items())}


def dump(x, name="x") -> dict:
    """A one-entry instance document holding ``x``."""
    if isinstance(x, LaxFunctor):
        return {"lax": {name: dump_lax(x)}}
    if isinstance(x, ObjectOverB):
        return {"objects_over": {name: dump_object_over(x)}}
    if isinstance(x, FinSpace):
        return {"spaces": {name: dump_space(x)}}
    if isinstance(x, FinLattice):
        return {"lattices": {name: dump_lattice(x)}}
    if isinstance(x, FinPoset):
        return {"posets": {name: dump_poset(x)}}
    if isinstance(x, FinCat):
        return {"categories": {name: dump_category(x)}}
    if isinstance(x, MeetMap):
        return {"lattices": {"L0": dump_lattice(x.source), "L1": dump_lattice(x.target)},
                "meetmaps": {name: dump_meetmap(x)}}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def to_text(doc, as_json=False) -> str:
    if as_json:
        return json.dumps(doc, indent=2, sort_keys=False)
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def roundtrip(x, name="x"):
    """``parse(print(x))``: serialize and read back the named entry."""
    inst = load_text(to_text(dump(x, name)))
    return inst.lookup(name)
