"""Command-line front end.

Exit status: 0 when every asserted invariant held, 2 when a budget or a
truncation boundary left something undecided, 1 on a violation or an error.
All JSON is written with sorted keys and carries no timings.
"""
import argparse
import json
import math
import sys
from fractions import Fraction

from . import fixtures as fx
from . import suites
from .angles import ModelError, cone, fineness_report, rho_constant
from .constants import ConstantError, ConstantSet, exploratory, paper_faithful
from .cylinders import cylinder, select_l, triangles
from .graph import BudgetExceeded, FineGraph, GraphError, hyperbolicity_delta, sort_ids
from .lamination import LaminationError, laminate
from .paths import stability_constant
from .presentations import (GraphModel, PresentationError, cayley_ball, coned_off,
                            parse_presentation)
from .slices import (BoundViolation, IncompleteError, SliceError, check_slice_lemmas,
                     order_slices, slice_metrics, triangle_slices)

PASS, VIOLATION, INCONCLUSIVE = 0, 1, 2


class InputError(Exception):
    """Malformed input; the message carries the location."""


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [_jsonable(v) for v in sort_ids(x)]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x


def dumps(obj):
    return json.dumps(_jsonable(obj), sort_keys=True, indent=1)


def _emit(args, payload):
    text = dumps(payload) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def _vertex(text):
    try:
        return int(text)
    except ValueError:
        return text


def load_graph(args):
    """FineGraph (and model, if any) from --graph, --model or --fixture."""
    if getattr(args, "model", None):
        data = _read_json(args.model)
        try:
            M = GraphModel.from_dict(data)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"{args.model}: bad model ({type(e).__name__}: {e})") from None
        return M.graph, M
    if getattr(args, "graph", None):
        data = _read_json(args.graph)
        try:
            return FineGraph.from_dict(data), None
        except KeyError as e:
            raise InputError(f"{args.graph}: missing key {e}") from None
        except (TypeError, ValueError) as e:
            raise InputError(f"{args.graph}: {e}") from None
    if getattr(args, "fixture", None):
        if args.fixture in fx.MODELS:
            M = fx.model(args.fixture)
            return M.graph, M
        try:
            return fx.graph(args.fixture), None
        except KeyError:
            raise InputError(f"unknown fixture {args.fixture!r}") from None
    raise InputError("one of --graph, --model or --fixture is required")


def load_pres(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return parse_presentation(text)
    except PresentationError as e:
        raise InputError(f"{path}: {e}") from None


def constants_for(args, g, report=None):
    """ConstantSet from --constants, or built for the graph per --regime."""
    if getattr(args, "constants", None):
        data = _read_json(args.constants)
        data = data.get("constants", data)
        try:
            C = ConstantSet.from_dict(data)
        except (KeyError, TypeError) as e:
            raise InputError(f"{args.constants}: bad constant set ({e})") from None
    elif args.regime == "paper":
        delta = hyperbolicity_delta(g)
        if args.epsilon is not None:
            eps, D, note = args.epsilon, args.stability_d or 0, "epsilon override"
        else:
            lam = 1000 * max(int(delta), 2)
            Lam = args.stability_lambda or lam
            try:
                D, eps, info = stability_constant(g, Lam, samples=args.samples,
                                                  seed=args.seed, budget=args.budget_search)
            except (RuntimeError, ValueError) as e:
                raise BudgetExceeded(f"stability constant with Lambda={Lam}: {e}") from None
            eps = max(int(eps), 1)
            note = f"N_emp with Lambda={Lam}, seed {args.seed}"
            if report is not None:
                report["stability"] = {"D": D, "N": eps, **info}
        try:
            rho = int(rho_constant(g))
        except ModelError:
            rho = 0
        C = paper_faithful(delta, eps, stability_D=D, rho=rho, capa_mu=args.capa or 1,
                           provenance={"epsilon": note,
                                       "capa_mu": "override" if args.capa else "default 1"})
    else:
        C = exploratory(delta=args.delta, lambda_=args.lambda_, epsilon=args.epsilon or 1,
                        mu=args.mu, l=args.l or 2)
    if getattr(args, "l", None):
        C = C.with_l(args.l)
    return C


# -- commands -------------------------------------------------------------

def cmd_build(args):
    if args.fixture:
        g, M = load_graph(args)
        if M is None:
            _emit(args, g.to_dict())
            return PASS, None
    else:
        if not args.pres:
            raise InputError("build needs --pres or --fixture")
        pres = load_pres(args.pres)
        if args.radius is None:
            raise InputError("build --pres needs --radius")
        M = cayley_ball(pres, args.radius, budget=args.budget_search)
        if args.coned:
            M = coned_off(M)
    _emit(args, M.to_dict())
    return PASS, None


def cmd_certify(args):
    g, M = load_graph(args)
    d = hyperbolicity_delta(g)
    out = {"vertices": len(g), "edges": len(g.edges),
           "delta": {"raw": int(d), "clamped": max(int(d), 2),
                     "witness": list(d.witness) if d.witness else None,
                     "lower_bound_only": d.lower_bound_only}}
    status = PASS
    try:
        out["fineness"] = fineness_report(g, args.circuit_length, args.budget_circuits)
    except BudgetExceeded as e:
        out["fineness"] = {"L": args.circuit_length, "error": str(e)}
        status = INCONCLUSIVE
    try:
        r = rho_constant(g)
        out["rho"] = {"value": int(r), "violations": [list(t) for t in r.violations]}
    except ModelError as e:
        out["rho"] = {"value": None, "note": str(e)}
    if M is not None:
        out["boundary"] = len(M.boundary_vertices)
        out["truncation_radius"] = M.truncation_radius
    return status, out


def cmd_constants(args):
    g, _ = load_graph(args)
    rep = {"seed": args.seed}
    C = constants_for(args, g, rep)
    rep["constants"] = C.to_dict()
    rep["paper_violations"] = C.paper_violations()
    return PASS, rep


def cmd_cyl(args):
    g, M = load_graph(args)
    C = constants_for(args, g)
    x, y = _vertex(args.x), _vertex(args.y)
    for v in (x, y):
        if v not in g:
            raise InputError(f"vertex {v!r} is not in the graph")
    c = cylinder(g, x, y, C.l, C, budget=args.budget_search, geod_cap=args.budget_geodesics,
                 keep_witnesses=args.witnesses)
    out = c.to_dict(with_witnesses=args.witnesses)
    if M is not None:
        out["meets_boundary"] = bool(c.members & M.boundary_vertices)
    return (PASS if c.complete else INCONCLUSIVE), out


def cmd_slices(args):
    g, _ = load_graph(args)
    C = constants_for(args, g)
    x, y = _vertex(args.x), _vertex(args.y)
    dec = order_slices(g, x, y, C.l, C, budget=args.budget_search,
                       geod_cap=args.budget_geodesics)
    diam, cons = slice_metrics(g, dec)
    out = dec.to_dict()
    out["metrics"] = {"same_slice_diameter": diam, "consecutive_distance": cons,
                      "bounds": {"diameter": 200 * C.delta, "consecutive": 1000 * C.delta}}
    ok = dec.report.get("partition", True) and not dec.report.get("consecutive_parabolic")
    status = PASS if ok else VIOLATION
    if C.regime == "paper-faithful" and (diam > 200 * C.delta or cons > 1000 * C.delta):
        status = VIOLATION
    return status, out


def _word(name):
    return name[0].upper() if name.endswith("^-1") else name


def cmd_triangle(args):
    g, M = load_graph(args)
    if M is None:
        raise InputError("triangle needs a --model with a group action")
    C = constants_for(args, g)
    F = args.gens.split(",") if args.gens else sorted(M.action)
    for a in F:
        if a not in M.action:
            raise InputError(f"generator {a!r} has no action in the model")
    p = M.basepoint
    tri, _ = triangles(p, F, M.action)
    out = {"generators": F, "triangles": []}
    try:
        l, rep = select_l(g, p, F, C, budget=args.budget_search, actions=M.action)
        out["selection"] = rep
    except LookupError as e:
        rep = e.args[0]
        out["selection"] = rep
        l = C.l
    out["l"] = l
    out["vacuous"] = rep.get("vacuous")
    status = PASS if "chosen" in rep else INCONCLUSIVE
    words = [tuple(_word(w) for w in t) for t in tri]
    if args.words:
        words = [tuple(t.split(",")) for t in args.words.split(";") if t.strip()]
        if any(len(t) != 3 for t in words):
            raise InputError("--words: expected alpha,beta,gamma;...")
    for a, b, c in words:
        entry = {"word": [a, b, c]}
        try:
            dec = triangle_slices(g, p, a, b, c, l, C,
                                  budget=args.budget_search, actions=M.action,
                                  geod_cap=args.budget_geodesics)
        except IncompleteError as e:
            entry["inconclusive"] = str(e)
            if status == PASS:
                status = INCONCLUSIVE
        except BoundViolation as e:
            entry["violation"] = str(e)
            status = VIOLATION
        else:
            entry["decomposition"] = dec.to_dict()
            entry["lemmas"] = {k: check_slice_lemmas(g, d, args.budget_geodesics)
                               for k, d in sorted(dec.sides.items())}
        out["triangles"].append(entry)
    return status, out


def _parse_images(text):
    images = {}
    for part in (text or "").split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise InputError(f"--images: expected gen=word, got {part!r}")
        k, v = part.split("=", 1)
        images[k.strip()] = v.strip()
    return images


def lamination_payload(r):
    KG = r["K"]
    return {"checks": r["checks"], "skeleton": r["skeleton"],
            "markings": {g: [[m.index, m.position, m.slice, m.kind] for m in ms]
                         for g, ms in r["complex"].markings.items()},
            "faces": [{"word": f.word, "leaves": f.leaves, "singular": f.singular,
                       "report": f.report} for f in r["faces"]],
            "K": {"vertices": [list(v) for v in KG.vertices],
                  "edges": [[list(a), list(b), f, gap] for a, b, f, gap in KG.edges],
                  "components": [[list(v) for v in c] for c in KG.components],
                  "pruned": KG.pruned, "types": KG.types},
            "decompositions": {g: d.to_dict() for g, d in r["decompositions"].items()}}


def cmd_laminate(args):
    g, M = load_graph(args)
    if M is None:
        raise InputError("laminate needs --model")
    pres = load_pres(args.pres)
    C = constants_for(args, g)
    r = laminate(M, pres, C.l, C, images=_parse_images(args.images),
                 budget=args.budget_search, geod_cap=args.budget_geodesics)
    out = lamination_payload(r)
    return (PASS if all(r["checks"].values()) else VIOLATION), out


def cmd_suite(args):
    only = args.only.split(",") if args.only else None
    res = suites.run_all(seed=args.seed, only=only)
    status = {"pass": PASS, "fail": VIOLATION, "inconclusive": INCONCLUSIVE}[res["verdict"]]
    return status, res


def _dot(g, highlight=(), extra_edges=(), name="G"):
    hl = set(highlight)
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        attrs = []
        if v in g.parabolic:
            attrs.append("shape=box")
        if v in hl:
            attrs.append("style=filled, fillcolor=gold")
        lines.append(f'  "{v}"' + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for a, b in g.edges:
        lines.append(f'  "{a}" -- "{b}";')
    lines.extend(extra_edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args):
    if args.lam:
        data = _read_json(args.lam)
        try:
            K = data["K"]
        except KeyError:
            raise InputError(f"{args.lam}: missing key 'K'") from None
        lines = ["graph K {"]
        for v in K["vertices"]:
            shape = "point" if v[0] == "c" else "ellipse"
            lines.append(f'  "{"/".join(map(str, v))}" [shape={shape}];')
        for a, b, f, gap in K["edges"]:
            lines.append(f'  "{"/".join(map(str, a))}" -- "{"/".join(map(str, b))}" '
                         f'[label="face {f}"];')
        lines.append("}")
        text = "\n".join(lines) + "\n"
    else:
        g, _ = load_graph(args)
        hl = ()
        if args.cone_edge:
            u, w = (_vertex(t) for t in args.cone_edge.split(","))
            if not g.has_edge(u, w):
                raise InputError(f"--cone-edge {args.cone_edge}: not an edge")
            hl = cone(g, (u, w), u, args.d, args.theta)
        elif args.cyl:
            data = _read_json(args.cyl)
            hl = data.get("members", [])
        text = _dot(g, hl)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return PASS, None


COMMANDS = {
    "build": cmd_build, "certify": cmd_certify, "constants": cmd_constants,
    "cyl": cmd_cyl, "slices": cmd_slices, "triangle": cmd_triangle,
    "laminate": cmd_laminate, "suite": cmd_suite, "export-dot": cmd_export_dot,
}


def _source_flags(p):
    p.add_argument("--graph", help="FineGraph JSON")
    p.add_argument("--model", help="GraphModel JSON (from build)")
    p.add_argument("--fixture", help="name of a bundled fixture")


def _budget_flags(p):
    p.add_argument("--budget-search", type=int, default=10 ** 6)
    p.add_argument("--budget-geodesics", type=int, default=1000)
    p.add_argument("--budget-circuits", type=int, default=10 ** 6)


def _constant_flags(p):
    p.add_argument("--regime", choices=("paper", "exploratory"), default="exploratory")
    p.add_argument("--constants", help="ConstantSet JSON (overrides --regime)")
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--lambda", dest="lambda_", type=int, default=4)
    p.add_argument("--epsilon", type=int)
    p.add_argument("--mu", type=int, default=3)
    p.add_argument("--l", type=int)
    p.add_argument("--capa", type=int, help="override for Capa(mu)")
    p.add_argument("--stability-d", type=int)
    p.add_argument("--stability-lambda", type=int,
                   help="Lambda for the empirical epsilon (default: lambda)")
    p.add_argument("--samples", type=int, default=50)


def build_parser():
    ap = argparse.ArgumentParser(prog="coarsecyl", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
        _budget_flags(p)
        if name != "suite":
            _source_flags(p)
        if name in ("constants", "cyl", "slices", "triangle", "laminate"):
            _constant_flags(p)
        if name in ("build", "laminate"):
            p.add_argument("--pres", help="presentation file")
        if name == "build":
            p.add_argument("--radius", type=int)
            p.add_argument("--coned", action="store_true")
        if name == "certify":
            p.add_argument("--circuit-length", type=int, default=8)
        if name in ("cyl", "slices"):
            p.add_argument("--x", required=True)
            p.add_argument("--y", required=True)
        if name == "cyl":
            p.add_argument("--witnesses", action="store_true")
        if name == "triangle":
            p.add_argument("--gens", help="comma-separated generators (default: all)")
            p.add_argument("--words", help="explicit triangles 'alpha,beta,gamma;...' "
                                           "(capital letter = inverse)")
        if name == "laminate":
            p.add_argument("--images", help="gen=word,... images in the model's group")
        if name == "suite":
            p.add_argument("--only", help="comma-separated suite names")
        if name == "export-dot":
            p.add_argument("--cone-edge", help="u,w: highlight cone(e=(u,w), u, d, theta)")
            p.add_argument("--d", type=int, default=2)
            p.add_argument("--theta", type=int, default=2)
            p.add_argument("--cyl", help="cylinder JSON whose members are highlighted")
            p.add_argument("--lam", help="lamination JSON; emits K")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    for flag in ("budget_search", "budget_geodesics", "budget_circuits"):
        if getattr(args, flag) <= 0:
            print(f"error: --{flag.replace('_', '-')} must be positive", file=sys.stderr)
            return VIOLATION
    try:
        status, payload = COMMANDS[args.cmd](args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return VIOLATION
    except BudgetExceeded as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        _emit(args, {"command": args.cmd, "status": "inconclusive", "reason": str(e),
                     "seed": args.seed})
        return INCONCLUSIVE
    except IncompleteError as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        _emit(args, {"command": args.cmd, "status": "inconclusive", "reason": str(e),
                     "seed": args.seed})
        return INCONCLUSIVE
    except (GraphError, ConstantError, SliceError, LaminationError, PresentationError,
            BoundViolation, LookupError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return VIOLATION
    if payload is not None:
        payload = dict(payload)
        payload.setdefault("command", args.cmd)
        payload.setdefault("seed", args.seed)
        payload["status"] = {PASS: "pass", VIOLATION: "violation",
                             INCONCLUSIVE: "inconclusive"}[status]
        _emit(args, payload)
    return status


if __name__ == "__main__":
    sys.exit(main())
