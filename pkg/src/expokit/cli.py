"""``expo-kit`` command-line front end.

Exit codes: 0 the property holds, 1 it fails (a witness is printed),
2 the input is invalid, 3 the oracle was inconclusive at its cap.
See :mod:`expokit.io` for the instance-file grammar.
"""

from __future__ import annotations

import argparse
import os
import sys

from .cat import CategoryError
from .catprof import NotExponentiable, VerificationFailed, giraud_conduche
from .doctrines import Doctrine, DoctrineError, MeetMap
from .expcheck import check_exponentiable, doubly_continuous, epsilon_continuous, exponential_over_B
from .glueing import decompose, glue
from .io import InstanceError, dump_lax, dump_object_over, encode, load_file, to_text
from .laxcat import strict_triples
from .oracle import pushout_diagram, verify_adjunction, verify_pushout, verify_quotient_preservation
from .order import OrderError, sort_key

HOLDS, FAILS, INVALID, INCONCLUSIVE = 0, 1, 2, 3

DEFAULT_CAPS = {"exp": 3, "adjunction": 3, "quotient": 4, "pushout": 4}


class UsageError(Exception):
    pass


def _cap(args, key):
    if args.cap is not None:
        return args.cap
    env = os.environ.get("EXPOKIT_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"EXPOKIT_CAP must be an integer, got {env!r}") from None
    return DEFAULT_CAPS[key]


def _jsonable(x):
    x = encode(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(i) for i in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return repr(x)


class Output:
    def __init__(self, as_json, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def doc(self, doc):
        self.stream.write(to_text(doc, self.as_json))
        if self.as_json:
            self.stream.write("\n")

    def verdict(self, what, ok, witness=None, extra=None):
        if self.as_json:
            payload = {"check": what, "holds": bool(ok), "witness": _jsonable(witness)}
            if extra:
                payload.update(extra)
            self.doc(payload)
        else:
            line = f"{what}: holds" if ok else f"{what}: fails"
            if not ok and witness is not None:
                line += f" -- {witness}"
            print(line, file=self.stream)

    def report(self, what, report):
        if self.as_json:
            d = report.to_dict()
            d["oracle"] = what
            self.doc(d)
        else:
            print(f"{what}: {report.status} (cap {report.cap})", file=self.stream)
            for k, v in report.statistics.items():
                print(f"  {k}: {v}", file=self.stream)
            if report.counterexample is not None:
                print(f"  counterexample: {report.counterexample!r}", file=self.stream)


# ---------------------------------------------------------------------------
# name resolution


def _object_over(inst, name):
    if name is None:
        if inst.objects_over:
            return inst.first("objects_over")[1]
        if inst.lax:
            return glue(inst.first("lax")[1])
        raise InstanceError("the file defines no objects over a base")
    if name in inst.objects_over:
        return inst.objects_over[name]
    if name in inst.lax:
        return glue(inst.lax[name])
    raise InstanceError(f"no object over a base named {name!r}")


def _decompose(q):
    """Decompose, dropping base tags only from points that carry them."""
    if q.doctrine in (Doctrine.CAT, Doctrine.LOC):
        return decompose(q)
    tagged = all(isinstance(p, tuple) and len(p) == 2 and p[0] == q.over(p) for p in q.points)
    return decompose(q, untag=tagged and bool(q.points))


def _lax(inst, name):
    if name is None:
        if inst.lax:
            return inst.first("lax")[1]
        if inst.objects_over:
            return _decompose(inst.first("objects_over")[1])
        raise InstanceError("the file defines no lax functors or objects over a base")
    if name in inst.lax:
        return inst.lax[name]
    if name in inst.objects_over:
        return _decompose(inst.objects_over[name])
    raise InstanceError(f"no lax functor named {name!r}")


def _pair(inst, args):
    Y = _object_over(inst, args.y or args.name)
    if args.z is not None:
        Z = _object_over(inst, args.z)
    elif len(inst.objects_over) >= 2:
        Z = list(inst.objects_over.values())[1]
    else:
        Z = Y
    return Y, Z


# ---------------------------------------------------------------------------
# commands


def cmd_decompose(inst, args, out):
    q = _object_over(inst, args.name)
    out.doc({"lax": {args.name or "decomposed": dump_lax(_decompose(q))}})
    return HOLDS


def cmd_glue(inst, args, out):
    F = _lax(inst, args.name)
    out.doc({"objects_over": {args.name or "glued": dump_object_over(glue(F))}})
    return HOLDS


def cmd_check(inst, args, out):
    what = args.what
    if what == "pseudo":
        res = _lax(inst, args.name).is_pseudo()
        w = None if res.ok else f"NotPseudo({','.join(str(x) for x in res.witness)})"
        out.verdict("pseudo", res.ok, w)
        return HOLDS if res.ok else FAILS
    if what == "exp":
        verdict = check_exponentiable(_lax(inst, args.name))
        w = None if verdict else ", ".join(str(f) for f in verdict.failures)
        out.verdict("exponentiable", verdict.decision, w)
        return HOLDS if verdict else FAILS
    if what == "gc":
        q = _object_over(inst, args.name)
        if q.doctrine is not Doctrine.CAT:
            raise UsageError("--what gc needs a category over a base (doctrine cat)")
        res = giraud_conduche(q)
        out.verdict("factorization lifting", res.ok, res.witness)
        return HOLDS if res.ok else FAILS
    if what == "dc":
        maps = _meet_maps(inst, args.name)
        for label, n in maps:
            if not doubly_continuous(n):
                out.verdict("doubly continuous", False, label)
                return FAILS
        out.verdict("doubly continuous", True, extra={"checked": len(maps)} if out.as_json else None)
        return HOLDS
    if what == "eps":
        res = epsilon_continuous(_object_over(inst, args.name))
        out.verdict("epsilon continuous", res.ok, None if res.ok else res.witness)
        return HOLDS if res.ok else FAILS
    raise UsageError(f"unknown check {what!r}")


def _meet_maps(inst, name):
    if name is not None and name in inst.meetmaps:
        return [(name, inst.meetmaps[name])]
    if name is None and inst.meetmaps:
        return sorted(inst.meetmaps.items())
    F = _lax(inst, name)
    if F.doctrine not in (Doctrine.TOP, Doctrine.LOC):
        raise UsageError("--what dc needs meet maps or a top/loc instance")
    return [((b, c), v) for (b, c), v in sorted(F.verticals.items(), key=lambda kv: sort_key(kv[0]))
            if isinstance(v, MeetMap)]


def _dump_exponential(E):
    ev = E.evaluation
    if hasattr(ev, "obj_map"):
        rows = sorted(ev.obj_map.items(), key=lambda kv: sort_key(kv[0]))
    else:
        rows = sorted(ev.items(), key=lambda kv: sort_key(kv[0]))
    doc = {"objects_over": {"exponential": dump_object_over(E.obj)},
           "evaluation": [[encode(a), encode(b)] for a, b in rows]}
    if E.report is not None:
        doc["oracle"] = E.report.to_dict()
    return doc


def cmd_exp(inst, args, out):
    Y, Z = _pair(inst, args)
    cap = _cap(args, "exp")
    try:
        E = exponential_over_B(Y, Z, verify=cap > 0, size_cap=cap)
    except NotExponentiable as exc:
        out.verdict("exponentiable", False, exc.args[0] if exc.args else exc)
        return FAILS
    except VerificationFailed as exc:
        out.verdict("exponential verified", False, exc.args[0])
        return FAILS
    out.doc(_dump_exponential(E))
    if cap <= 0:
        return INCONCLUSIVE
    return HOLDS


def cmd_oracle(inst, args, out):
    what = args.what
    cap = _cap(args, what)
    if what == "adjunction":
        Y, Z = _pair(inst, args)
        try:
            E = exponential_over_B(Y, Z, verify=False)
        except NotExponentiable as exc:
            out.verdict("exponentiable", False, exc.args[0] if exc.args else exc)
            return FAILS
        report = verify_adjunction(Y, E, Z, size_cap=cap)
    elif what == "quotient":
        report = verify_quotient_preservation(_object_over(inst, args.name), size_cap=cap)
    elif what == "pushout":
        q = _object_over(inst, args.name)
        if q.doctrine in (Doctrine.CAT, Doctrine.LOC):
            raise UsageError("the pushout oracle covers the top, pos and rel doctrines")
        report = None
        for t in strict_triples(q.base):
            span, cocone = pushout_diagram(q, *t)
            r = verify_pushout(q.doctrine, span, cocone, cap=cap)
            r.statistics["triple"] = t
            if report is None or r.status == "fail" or (r.inconclusive and report.status == "pass"):
                report = r
            if r.status == "fail":
                break
        if report is None:
            from .oracle import OracleReport
            report = OracleReport(cap > 0, None, {"triples": 0}, cap, inconclusive=cap <= 0)
    else:
        raise UsageError(f"unknown oracle {what!r}")
    out.report(what, report)
    if report.inconclusive:
        return INCONCLUSIVE
    return HOLDS if report.verdict else FAILS


COMMANDS = {"decompose": cmd_decompose, "glue": cmd_glue, "check": cmd_check,
            "exp": cmd_exp, "oracle": cmd_oracle}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--doctrine", choices=[d.value for d in Doctrine],
                        help="doctrine (overrides the file's 'doctrine' key)")
    common.add_argument("--input", required=True, help="instance file (YAML or JSON)")
    common.add_argument("--name", help="object, lax functor or meet map to use")
    common.add_argument("--cap", type=int, help="oracle size cap (default: $EXPOKIT_CAP or per-oracle)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="expo-kit", description="Exponentiability toolkit for finite objects over a poset.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("decompose", parents=[common], help="object over B -> lax functor")
    sub.add_parser("glue", parents=[common], help="lax functor -> object over B")
    p = sub.add_parser("check", parents=[common], help="decide a property")
    p.add_argument("--what", required=True, choices=["pseudo", "exp", "gc", "dc", "eps"])
    p = sub.add_parser("exp", parents=[common], help="build an exponential Z^Y")
    p.add_argument("--y", help="exponent object (default: first object)")
    p.add_argument("--z", help="base of the exponential (default: second object, else Y)")
    p = sub.add_parser("oracle", parents=[common], help="run a brute-force oracle")
    p.add_argument("--what", required=True, choices=["adjunction", "quotient", "pushout"])
    p.add_argument("--y", help="exponent object for the adjunction oracle")
    p.add_argument("--z", help="second object for the adjunction oracle")
    return parser


def main(argv=None, stdout=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for attr in ("y", "z"):
        if not hasattr(args, attr):
            setattr(args, attr, None)
    out = Output(args.json, stdout)
    try:
        inst = load_file(args.input, args.doctrine)
        return COMMANDS[args.command](inst, args, out)
    except (InstanceError, OrderError, CategoryError, DoctrineError, UsageError,
            KeyError, ValueError, TypeError, OSError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
