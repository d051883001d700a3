"""Command-line entry point: task-driven analysis of instance documents.

Verdicts go to stdout as JSON; diagnostics go to stderr.  Exit codes:
0 every task decided, 2 some task undecided, 1 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import fixtures as fixture_mod
from . import io as gio
from .algebra import Subspace, center
from .bimodule import phi_partial_rep_check, pics_membership, verify_isomul
from .crossed import ExtractionInvalid, build_crossed_product, extract_tpa, verify_tpa
from .decision import Report
from .galois import azumaya_check, decompose_epsilon, galois_check, gamma_action, invariants
from .gmod import GradedModule, build_end_ring, check_astor, classify_end, induce
from .graded import (DEFAULT_BUDGET, NotEpsilonStrong, check_remark_identities,
                     detect_epsilon, is_epsilon_crossed_product, is_symmetrically_graded,
                     matcro_decide)
from .semiperfect import IdempotentFrame, index_partial_action, theorem_semicase_check
from .io import DocumentError


class TaskContext:
    def __init__(self, instance, seed=0, budget=DEFAULT_BUDGET, trials=1000):
        self.instance = instance
        self.seed = seed
        self.budget = budget
        self.trials = trials
        self._graded = None
        self._eps = None
        self._frame = None

    def graded(self):
        if self._graded is None:
            if self.instance.graded is not None:
                self._graded = self.instance.graded
            elif self.instance.tpa is not None:
                self._graded = build_crossed_product(self.instance.tpa)
            else:
                raise DocumentError("/", "document carries no grading or partial action")
        return self._graded

    def epsilon(self):
        if self._eps is None:
            self._eps = detect_epsilon(self.graded())
        return self._eps

    def frame(self):
        if self._frame is None:
            g = self.graded()
            r, _ = g.R_corner()
            if self.instance.frame_doc is not None:
                self._frame = gio.frame_from_json(r, self.instance.frame_doc)
            else:
                from .semiperfect import frame_from_commutative_corner
                self._frame = frame_from_commutative_corner(g)
        return self._frame


def _jvec(field, v):
    return [field.scalar_to_json(x) for x in v]


def _eps_table(graded, eps):
    f = graded.algebra.field
    return {gio._elem_key(graded.group, g): _jvec(f, v) for g, v in eps.items()}


def _report_detail(rep: Report):
    return {"checks": rep.to_json(), "ok": rep.ok}


# -- task implementations ---------------------------------------------------


def task_verify(ctx, arg):
    g = ctx.graded()
    return "pass", {"dim": g.algebra.dim,
                    "support": [g.group.element_to_json(s) for s in g.support()]}


def task_symmetric(ctx, arg):
    ok = is_symmetrically_graded(ctx.graded())
    return ("pass" if ok else "fail"), {"symmetric": ok}


def task_epsilon(ctx, arg):
    g = ctx.graded()
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"degree": g.group.element_to_json(eps.degree),
                        "reason": eps.reason}
    return "pass", {"epsilon": _eps_table(g, eps)}


def task_remark(ctx, arg):
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": "not epsilon-strong"}
    rep = check_remark_identities(ctx.graded(), eps)
    return ("pass" if rep.ok else "fail"), _report_detail(rep)


def task_crossed(ctx, arg):
    g = ctx.graded()
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": f"not epsilon-strong at {eps.degree}: {eps.reason}"}
    dec = is_epsilon_crossed_product(g, eps, seed=ctx.seed, budget=ctx.budget,
                                     trials=ctx.trials)
    f = g.algebra.field
    detail = {"status": dec.status, "checked": dec.checked, "reason": dec.reason}
    if dec.is_yes:
        detail["witnesses"] = {
            gio._elem_key(g.group, gg): {"element": _jvec(f, w.element),
                                         "inverse": _jvec(f, w.inverse)}
            for gg, w in dec.witnesses.items()}
    if dec.failing_degree is not None:
        detail["failing_degree"] = g.group.element_to_json(dec.failing_degree)
    return {"yes": "pass", "no": "fail", "undecided": "undecided"}[dec.status], detail


def task_matrix(ctx, arg):
    n = int(arg or 2)
    res = matcro_decide(ctx.graded(), n, seed=ctx.seed, budget=ctx.budget,
                        trials=ctx.trials)
    crossed = res["crossed"].status
    gen = res["generator_status"]
    if "undecided" in (crossed, gen):
        verdict = "undecided"
    else:
        verdict = "pass" if res["agreement"] else "fail"
    return verdict, {"n": n, "crossed": crossed, "generator": gen,
                     "agreement": res["agreement"], "theta_route": res["theta_route"]}


def task_tpa_verify(ctx, arg):
    if ctx.instance.tpa is None:
        raise DocumentError("/tpa", "document carries no partial action")
    rep = verify_tpa(ctx.instance.tpa)
    return ("pass" if rep.ok else "fail"), _report_detail(rep)


def task_tpa_build(ctx, arg):
    t = ctx.instance.tpa
    if t is None:
        raise DocumentError("/tpa", "document carries no partial action")
    ring = build_crossed_product(t)
    eps = detect_epsilon(ring)
    ok = not isinstance(eps, NotEpsilonStrong)
    detail = {"dim": ring.algebra.dim,
              "support": [ring.group.element_to_json(s) for s in ring.support()]}
    if ok:
        detail["epsilon"] = _eps_table(ring, eps)
    return ("pass" if ok else "fail"), detail


def task_tpa_roundtrip(ctx, arg):
    t = ctx.instance.tpa
    if t is None:
        raise DocumentError("/tpa", "document carries no partial action")
    rep = verify_tpa(t)
    if not rep.ok:
        return "fail", {"stage": "axioms", **_report_detail(rep)}
    ring = build_crossed_product(t)
    eps = detect_epsilon(ring)
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"stage": "epsilon", "reason": eps.reason}
    dec = is_epsilon_crossed_product(ring, eps, seed=ctx.seed, budget=ctx.budget,
                                     trials=ctx.trials)
    if not dec.is_yes:
        return ({"no": "fail", "undecided": "undecided"}[dec.status],
                {"stage": "witnesses", "reason": dec.reason})
    try:
        extract_tpa(ring, eps, dec.witnesses)
    except ExtractionInvalid as exc:
        return "fail", {"stage": "extract", "reason": str(exc)}
    return "pass", {"dim": ring.algebra.dim}


def task_pic_membership(ctx, arg):
    g = ctx.graded()
    out = {}
    ok = True
    for gg in g.support():
        res = pics_membership(g.component_bimodule(gg))
        out[gio._elem_key(g.group, gg)] = res["member"]
        ok = ok and res["member"]
    return ("pass" if ok else "fail"), {"members": out}


def task_rep_check(ctx, arg):
    g = ctx.graded()
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": "not epsilon-strong"}
    pairs = [(a, b) for a in g.support() for b in g.support()]
    rep = phi_partial_rep_check(g, eps, pairs, budget=ctx.budget)
    verdict = "pass" if rep.ok else "fail"
    if any("undecided" in str(d) for _, okk, d in rep.entries if not okk):
        verdict = "undecided"
    return verdict, _report_detail(rep)


def task_isomul(ctx, arg):
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": "not epsilon-strong"}
    rep = verify_isomul(ctx.graded(), eps)
    return ("pass" if rep.ok else "fail"), _report_detail(rep)


def task_center_action(ctx, arg):
    g = ctx.graded()
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": "not epsilon-strong"}
    act = gamma_action(g, eps)
    # decomposition independence of the restricted transports
    alt = {gg: decompose_epsilon(g, eps, gg, variant=1) for gg in g.support()}
    act2 = gamma_action(g, eps, alt)
    same = all(
        np.array_equal(act.restricted_matrix(gg), act2.restricted_matrix(gg))
        for gg in g.support())
    detail = {"center_dim": act.zdim(),
              "domains": {gio._elem_key(g.group, gg): int(act.domains[gg].shape[0])
                          for gg in g.support()},
              "decomposition_independent": same}
    return ("pass" if same else "fail"), detail


def task_invariants(ctx, arg):
    g = ctx.graded()
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": "not epsilon-strong"}
    act = gamma_action(g, eps)
    inv = invariants(act, eps)
    return "pass", {"invariants_dim": inv.dim, "center_dim": act.zdim()}


def task_galois(ctx, arg):
    g = ctx.graded()
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": "not epsilon-strong"}
    act = gamma_action(g, eps)
    coords = galois_check(g, eps, act)
    if coords is None:
        return "fail", {"galois": False}
    f = g.algebra.field
    return "pass", {"galois": True,
                    "coordinates": [[_jvec(f, x), _jvec(f, y)] for x, y in coords.pairs]}


def task_azumaya(ctx, arg):
    g = ctx.graded()
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": "not epsilon-strong"}
    act = gamma_action(g, eps)
    inv = invariants(act, eps)
    rep = azumaya_check(g, inv)
    return ("pass" if rep.ok else "fail"), _report_detail(rep)


def _resolve_module(ctx, arg):
    g = ctx.graded()
    if not arg or arg == "regular":
        return GradedModule.regular(g)
    if arg in ctx.instance.modules:
        return ctx.instance.modules[arg]
    raise DocumentError(f"/modules/{arg}", "no such module")


def task_end_classify(ctx, arg):
    m = _resolve_module(ctx, arg)
    res = classify_end(m, seed=ctx.seed, budget=ctx.budget, trials=ctx.trials)
    rep = res["report"]
    verdict = "pass" if rep.ok else "fail"
    if res["partial_crossed"] == "undecided":
        verdict = "undecided"
    return verdict, {
        "epsilon_strong": res["epsilon_strong"],
        "strongly_graded": res["strongly_graded"],
        "partial_crossed": res["partial_crossed"],
        "module_routes": {k: (v if not isinstance(v, bool) else bool(v))
                          for k, v in res["module_routes"].items()},
        "routes_agree": rep.ok,
    }


def task_end_build(ctx, arg):
    m = _resolve_module(ctx, arg)
    ring, _ = build_end_ring(m)
    return "pass", {"dim": ring.algebra.dim,
                    "support": [ring.group.element_to_json(s) for s in ring.support()],
                    "component_dims": {gio._elem_key(ring.group, s): ring.component_dim(s)
                                       for s in ring.support()}}


def _resolve_left_module(ctx, arg):
    if arg in ctx.instance.left_modules:
        return ctx.instance.left_modules[arg]
    raise DocumentError(f"/left_modules/{arg}", "no such left module")


def task_induce(ctx, arg):
    n = _resolve_left_module(ctx, arg)
    ind = induce(ctx.graded(), n)
    g = ctx.graded()
    return "pass", {"dim": ind.dim,
                    "degrees": [g.group.element_to_json(d) for d in ind.degrees]}


def task_astor(ctx, arg):
    n = _resolve_left_module(ctx, arg)
    res = check_astor(ctx.graded(), n, seed=ctx.seed, budget=ctx.budget)
    rep = res["report"]
    return ("pass" if rep.ok else "fail"), {
        "hypothesis": res["hypothesis"],
        "epsilon_strong": res["epsilon_strong"],
        "invariant": res["invariant"],
        "partial_crossed": res["partial_crossed"],
        "checks": rep.to_json(),
    }


def task_semiperfect(ctx, arg):
    g = ctx.graded()
    eps = ctx.epsilon()
    if isinstance(eps, NotEpsilonStrong):
        return "fail", {"reason": "not epsilon-strong"}
    frame = ctx.frame()
    x = None
    if arg:
        x = [int(v) for v in arg.split(",")]
    res = theorem_semicase_check(g, eps, frame, X=x, budget=ctx.budget, seed=ctx.seed)
    rep = res["report"]
    critical = {"stabilizer equals epsilon route", "subring epsilon-strong",
                "END of induced summand epsilon-strong",
                "END of induced summand is a partial crossed product"}
    ok = all(okk for name, okk, _ in rep.entries if name in critical)
    return ("pass" if ok else "fail"), {
        "subgroup": [g.group.element_to_json(m) for m in res["subgroup_members"]],
        "crossed": res["crossed"],
        "checks": rep.to_json(),
    }


def task_orbits(ctx, arg):
    g = ctx.graded()
    frame = ctx.frame()
    act, rep = index_partial_action(g, frame, budget=ctx.budget, seed=ctx.seed)
    verdict = "pass" if rep.ok else "fail"
    if any(name == "undecided-free" and not okk for name, okk, _ in rep.entries):
        verdict = "undecided"
    return verdict, {
        "domains": {gio._elem_key(g.group, gg): list(dom)
                    for gg, dom in act.domains.items()},
        "maps": {gio._elem_key(g.group, gg): {str(i): j for i, j in m.items()}
                 for gg, m in act.maps.items()},
        "checks": rep.to_json(),
    }


TASKS = {
    "verify": task_verify,
    "symmetric": task_symmetric,
    "epsilon": task_epsilon,
    "remark": task_remark,
    "crossed": task_crossed,
    "matrix": task_matrix,
    "tpa-verify": task_tpa_verify,
    "tpa-build": task_tpa_build,
    "tpa-roundtrip": task_tpa_roundtrip,
    "pic-membership": task_pic_membership,
    "rep-check": task_rep_check,
    "isomul": task_isomul,
    "center-action": task_center_action,
    "invariants": task_invariants,
    "galois": task_galois,
    "azumaya": task_azumaya,
    "end-build": task_end_build,
    "end-classify": task_end_classify,
    "induce": task_induce,
    "astor": task_astor,
    "semiperfect": task_semiperfect,
    "orbits": task_orbits,
}


def run_tasks(instance, tasks, seed=0, budget=DEFAULT_BUDGET, trials=1000):
    ctx = TaskContext(instance, seed=seed, budget=budget, trials=trials)
    results = []
    for spec_str in tasks:
        name, _, arg = spec_str.partition(":")
        if name not in TASKS:
            raise DocumentError("/tasks", f"unknown task {spec_str!r}")
        t0 = time.monotonic()
        verdict, detail = TASKS[name](ctx, arg)
        ms = int((time.monotonic() - t0) * 1000)
        results.append({"task": spec_str, "verdict": verdict, "detail": detail, "ms": ms})
    return {
        "version": gio.DOCUMENT_VERSION,
        "seed": seed,
        "budget": budget,
        "tasks": results,
    }


def report_exit_code(report):
    if any(t["verdict"] == "undecided" for t in report["tasks"]):
        return 2
    return 0


# ---------------------------------------------------------------------------


def _load_document(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError("/", f"invalid JSON: {exc}")
    return gio.parse_document(doc)


def _emit(report):
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=1) + "\n")


def _run_command(args, tasks=None):
    try:
        instance = _load_document(args.file)
        task_list = tasks if tasks is not None else (args.task or instance.tasks)
        if not task_list:
            raise DocumentError("/tasks", "no tasks requested")
        report = run_tasks(instance, task_list, seed=args.seed, budget=args.budget,
                           trials=args.trials)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(report)
    return report_exit_code(report)


def _add_common(p, with_file=True):
    if with_file:
        p.add_argument("--file", "-f", required=True, help="instance document (JSON)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--json", action="store_true", help="JSON output (always on)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="grado",
                                     description="exact computations with graded rings")
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run document tasks")
    _add_common(runp)
    runp.add_argument("--task", action="append", help="task name (repeatable)")

    groups = {
        "graded": {"verify": ["verify"], "epsilon": ["epsilon"],
                   "crossed-decide": ["crossed"], "symmetric": ["symmetric"],
                   "remark": ["remark"]},
        "crossed": {"verify": ["tpa-verify"], "build": ["tpa-build"],
                    "extract": ["tpa-roundtrip"]},
        "pic": {"membership": ["pic-membership"], "rep-check": ["rep-check"],
                "isomul": ["isomul"]},
        "center": {"action": ["center-action"], "invariants": ["invariants"],
                   "galois": ["galois"], "azumaya": ["azumaya"]},
        "end": {"build": ["end-build"], "classify": ["end-classify"]},
        "module": {"induce": None, "astor": None},
        "semiperfect": {"analyze": ["semiperfect"], "orbits": ["orbits"]},
    }
    for gname, cmds in groups.items():
        gp = sub.add_parser(gname)
        gsub = gp.add_subparsers(dest="subcommand", required=True)
        for cname in cmds:
            cp = gsub.add_parser(cname)
            _add_common(cp)
            if gname == "module":
                cp.add_argument("--name", required=True, help="left module name")
            if gname == "end":
                cp.add_argument("--name", default="regular", help="graded module name")
            if gname == "semiperfect" and cname == "analyze":
                cp.add_argument("--x", default="", help="comma-separated frame indices")

    mp = sub.add_parser("matrix")
    msub = mp.add_subparsers(dest="subcommand", required=True)
    ma = msub.add_parser("analyze")
    _add_common(ma)
    ma.add_argument("--n", type=int, default=2)

    fx = sub.add_parser("fixtures", help="bundled instances")
    fx.add_argument("--list", action="store_true")
    fx.add_argument("--emit", metavar="NAME")
    fx.add_argument("--verify", metavar="NAME")
    fx.add_argument("--seed", type=int, default=0)
    fx.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    fx.add_argument("--trials", type=int, default=1000)

    args = parser.parse_args(argv)

    if args.command == "run":
        return _run_command(args)
    if args.command == "matrix":
        return _run_command(args, tasks=[f"matrix:{args.n}"])
    if args.command == "fixtures":
        return _fixtures_command(args)
    if args.command in groups:
        cmds = groups[args.command]
        tasks = cmds[args.subcommand]
        if args.command == "module":
            tasks = [f"{args.subcommand}:{args.name}"]
        elif args.command == "end":
            tasks = [f"{'end-build' if args.subcommand == 'build' else 'end-classify'}:{args.name}"]
        elif args.command == "semiperfect" and args.subcommand == "analyze" and args.x:
            tasks = [f"semiperfect:{args.x}"]
        return _run_command(args, tasks=tasks)
    parser.error(f"unknown command {args.command}")
    return 1


def _fixtures_command(args):
    from .fixtures import REGISTRY, fixture_document

    if args.emit:
        if args.emit not in REGISTRY:
            print(f"error: unknown fixture {args.emit!r}", file=sys.stderr)
            return 1
        sys.stdout.write(gio.dumps(fixture_document(args.emit)))
        return 0
    if args.verify:
        if args.verify not in REGISTRY:
            print(f"error: unknown fixture {args.verify!r}", file=sys.stderr)
            return 1
        entry = REGISTRY[args.verify]
        doc = fixture_document(args.verify)
        instance = gio.parse_document(doc)
        report = run_tasks(instance, doc["tasks"], seed=entry.get("seed", 0),
                           budget=args.budget, trials=args.trials)
        got = [(t["task"], t["verdict"]) for t in report["tasks"]]
        expected = [tuple(x) for x in entry["expected"]]
        ok = got == expected
        _emit({"fixture": args.verify, "expected": expected, "got": got, "match": ok})
        return 0 if ok else 2
    names = sorted(REGISTRY)
    _emit({"fixtures": {n: {"tasks": REGISTRY[n]["tasks"],
                            "expected": REGISTRY[n]["expected"]} for n in names}})
    return 0


if __name__ == "__main__":
    sys.exit(main())
