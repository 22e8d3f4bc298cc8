"""Command-line front end: run scenario files, list built-ins, run the acceptance suite.

Scenario files are YAML documents with a strict schema::

    schema: 1
    group: {family: sl, n: 2, form: borel}
    variety: {kind: projective, n: 3}
    tasks: [present, hilbert]
    options: {cutoff: 20, seed: 0, format: text}

Exit codes: 0 success, 1 a verification failed (report still written),
2 parse or validation error, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Any

import yaml

from . import __version__
from .charts import Chart, ChartError, bott_samelson, flag, grassmannian, projective
from .cohomology import (FORMS, DimensionCertificateError, GroupSpec, HilbertMismatchError, InterpolationError,
                         ScenarioError, build_zero_scheme, component_table, components,
                         equivariant_hilbert_series, fiber_check, gkm_graph, gkm_ring_dims, localization_check,
                         ordinary_dims, presentation, random_regular_point, subalgebra_dims,
                         weyl_invariant_dims)
from .lie import weyl_orbits
from .symbolic import DEFAULT_CUTOFF, DEFAULT_STEP_BUDGET, HilbertSeries, ResourceBudgetError

SCHEMA = 1
EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
TASKS = ("present", "hilbert", "fiber-check", "components", "gkm-compare", "weyl-check", "restrict", "localize")
VARIETY_PARAMS = {
    "projective": ("n",),
    "grassmannian": ("k", "n"),
    "flag": ("n",),
    "bott_samelson": ("word", "n"),
}


class ScenarioInputError(ValueError):
    """Parse or validation error, carrying a source position when known."""

    def __init__(self, message: str, node: yaml.Node | None = None, path: str | None = None):
        if node is not None:
            mark = node.start_mark
            message = f"{path}:{mark.line + 1}:{mark.column + 1}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


# ----------------------------------------------------------------------------
# scenario parsing

@dataclass
class Task:
    name: str
    labels: list | None = None
    expected_series: HilbertSeries | None = None


@dataclass
class Scenario:
    group: GroupSpec
    chart: Chart
    tasks: list[Task]
    cutoff: int = DEFAULT_CUTOFF
    seed: int = 0
    format: str = "text"
    budget: int = DEFAULT_STEP_BUDGET
    samples: int = 5
    source: str = "<scenario>"


class _Reader:
    """Typed access to a composed YAML node tree with positioned errors."""

    def __init__(self, path: str):
        self.path = path

    def error(self, message: str, node: yaml.Node | None) -> ScenarioInputError:
        return ScenarioInputError(message, node, self.path)

    def mapping(self, node: yaml.Node, what: str, allowed: tuple, required: tuple = ()) -> dict:
        if not isinstance(node, yaml.MappingNode):
            raise self.error(f"{what} must be a mapping", node)
        out = {}
        for k, v in node.value:
            key = self.scalar(k, f"key in {what}")
            if key in out:
                raise self.error(f"duplicate key {key!r} in {what}", k)
            if key not in allowed:
                raise self.error(f"unknown key {key!r} in {what}; allowed: {', '.join(allowed)}", k)
            out[key] = (k, v)
        for key in required:
            if key not in out:
                raise self.error(f"{what} is missing required key {key!r}", node)
        return out

    def scalar(self, node: yaml.Node, what: str) -> str:
        if not isinstance(node, yaml.ScalarNode):
            raise self.error(f"{what} must be a scalar", node)
        return node.value

    def integer(self, node: yaml.Node, what: str, low: int | None = None, high: int | None = None) -> int:
        text = self.scalar(node, what)
        if node.tag != "tag:yaml.org,2002:int":
            raise self.error(f"{what} must be an integer, got {text!r}", node)
        value = int(text)
        if (low is not None and value < low) or (high is not None and value > high):
            bounds = f"{low if low is not None else '-inf'}..{high if high is not None else 'inf'}"
            raise self.error(f"{what} = {value} is outside {bounds}", node)
        return value

    def choice(self, node: yaml.Node, what: str, options) -> str:
        text = self.scalar(node, what)
        if text not in options:
            raise self.error(f"{what} must be one of {', '.join(options)}, got {text!r}", node)
        return text

    def sequence(self, node: yaml.Node, what: str) -> list:
        if not isinstance(node, yaml.SequenceNode):
            raise self.error(f"{what} must be a list", node)
        return list(node.value)

    def int_list(self, node: yaml.Node, what: str) -> list[int]:
        return [self.integer(x, f"entry of {what}") for x in self.sequence(node, what)]


def parse_scenario(text: str, path: str = "<scenario>") -> Scenario:
    """Parse and validate scenario text; raises ScenarioInputError."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else path
        raise ScenarioInputError(f"{where}: parse error: {exc.problem or exc.context}") from None
    except yaml.YAMLError as exc:
        raise ScenarioInputError(f"parse error: {exc}", path=path) from None
    if root is None:
        raise ScenarioInputError("empty scenario file", path=path)
    r = _Reader(path)
    top = r.mapping(root, "scenario", ("schema", "group", "variety", "tasks", "options"),
                    ("schema", "group", "variety", "tasks"))
    schema = r.integer(top["schema"][1], "schema")
    if schema != SCHEMA:
        raise r.error(f"unsupported schema {schema}; this version reads schema {SCHEMA}", top["schema"][1])

    gnode = top["group"][1]
    g = r.mapping(gnode, "group", ("family", "n", "form"), ("family", "n", "form"))
    r.choice(g["family"][1], "group.family", ("sl",))
    n = r.integer(g["n"][1], "group.n", 2, 12)
    form = r.choice(g["form"][1], "group.form", FORMS)
    try:
        group = GroupSpec(n, form)
    except ScenarioError as exc:
        raise r.error(str(exc), gnode) from None

    vnode = top["variety"][1]
    kind_node = r.mapping(vnode, "variety", ("kind", "n", "k", "word"), ("kind",))["kind"][1]
    kind = r.choice(kind_node, "variety.kind", tuple(VARIETY_PARAMS))
    params = r.mapping(vnode, "variety", ("kind",) + VARIETY_PARAMS[kind], ("kind",) + VARIETY_PARAMS[kind])
    try:
        if kind == "projective":
            chart = projective(r.integer(params["n"][1], "variety.n", 1, 12))
        elif kind == "grassmannian":
            chart = grassmannian(r.integer(params["k"][1], "variety.k", 1, 12),
                                 r.integer(params["n"][1], "variety.n", 2, 12))
        elif kind == "flag":
            chart = flag(r.integer(params["n"][1], "variety.n", 2, 6))
        else:
            chart = bott_samelson(r.int_list(params["word"][1], "variety.word"),
                                  r.integer(params["n"][1], "variety.n", 2, 8))
    except ChartError as exc:
        raise r.error(str(exc), vnode) from None
    if group.n != 2 and group.n != chart.ambient:
        raise r.error(f"sl{group.n} acts on C^{group.n}, but {chart.describe()} needs "
                      f"{chart.ambient}x{chart.ambient} matrices", gnode)

    scen = Scenario(group, chart, [], source=path)
    if "options" in top:
        opts = r.mapping(top["options"][1], "options", ("cutoff", "seed", "format", "budget", "samples"))
        if "cutoff" in opts:
            scen.cutoff = r.integer(opts["cutoff"][1], "options.cutoff", 0, 200)
        if "seed" in opts:
            scen.seed = r.integer(opts["seed"][1], "options.seed", 0)
        if "format" in opts:
            scen.format = r.choice(opts["format"][1], "options.format", ("text", "machine"))
        if "budget" in opts:
            scen.budget = r.integer(opts["budget"][1], "options.budget", 1)
        if "samples" in opts:
            scen.samples = r.integer(opts["samples"][1], "options.samples", 1, 100)

    tnode = top["tasks"][1]
    items = r.sequence(tnode, "tasks")
    if not items:
        raise r.error("tasks must not be empty", tnode)
    for item in items:
        scen.tasks.append(_parse_task(r, item, scen))
    return scen


def _parse_task(r: _Reader, node: yaml.Node, scen: Scenario) -> Task:
    if isinstance(node, yaml.ScalarNode):
        name = r.choice(node, "task", TASKS)
        task = Task(name)
        body = None
    else:
        entries = r.mapping(node, "task", TASKS)
        if len(entries) != 1:
            raise r.error("a task entry must have exactly one key", node)
        (name, (_, body)), = entries.items()
        task = Task(name)
    if name == "restrict":
        if body is None:
            raise r.error("restrict needs a labels list", node)
        body_keys = r.mapping(body, "restrict", ("labels", "expected_series"), ("labels",))
        task.labels = _parse_labels(r, body_keys["labels"][1], scen.chart)
        if "expected_series" in body_keys:
            es = r.mapping(body_keys["expected_series"][1], "expected_series", ("numerator", "denominator"),
                           ("numerator", "denominator"))
            task.expected_series = HilbertSeries(tuple(r.int_list(es["numerator"][1], "numerator")),
                                                 tuple(r.int_list(es["denominator"][1], "denominator")))
    elif body is not None and not (isinstance(body, yaml.ScalarNode) and body.value in ("", "null", "~")):
        raise r.error(f"task {name!r} takes no arguments", body)
    _check_task(r, task, scen, node)
    return task


def _parse_labels(r: _Reader, node: yaml.Node, chart: Chart) -> list:
    valid = chart.labels()
    out = []
    for item in r.sequence(node, "labels"):
        if isinstance(item, yaml.SequenceNode):
            lab = tuple(r.int_list(item, "label"))
        else:
            lab = r.integer(item, "label")
        if lab not in valid:
            raise r.error(f"{lab} is not a fixed-point label of {chart.describe()}", item)
        if lab in out:
            raise r.error(f"duplicate label {lab}", item)
        out.append(lab)
    return sorted(out, key=valid.index)


def _check_task(r: _Reader, task: Task, scen: Scenario, node: yaml.Node) -> None:
    kind = scen.group.base_kind
    chart = scen.chart
    name = task.name
    if name == "components" and kind != "solvable":
        raise r.error("components requires a Borel (solvable) group form", node)
    if name == "localize":
        if kind != "solvable" or chart.kind not in ("projective", "grassmannian"):
            raise r.error("localize requires a Borel group form and a projective or grassmannian variety", node)
    if name == "gkm-compare":
        if kind != "solvable" or chart.kind == "bott_samelson":
            raise r.error("gkm-compare requires a Borel group form and a projective, grassmannian or flag variety",
                          node)
        if scen.group.n == 2 and chart.ambient > 2:
            raise r.error("gkm-compare needs the full torus; the embedded SL2 torus has rank one", node)
    if name == "weyl-check":
        if kind == "point" or chart.kind == "bott_samelson":
            raise r.error("weyl-check requires a Borel or Kostant form on a projective, grassmannian or flag variety",
                          node)
    if name == "restrict":
        if kind == "point" or chart.kind == "bott_samelson":
            raise r.error("restrict requires a Borel or Kostant form on a projective, grassmannian or flag variety",
                          node)


# ----------------------------------------------------------------------------
# running

@dataclass
class TaskReport:
    name: str
    passed: bool | None
    data: dict = field(default_factory=dict)


def _series_block(hs: HilbertSeries, cutoff: int) -> dict:
    return {"numerator": list(hs.numerator), "denominator": list(hs.denominator_factors),
            "series": str(hs), "coefficients": hs.even_coefficients(cutoff)}


def _counterpart(scen: Scenario, form_kind: str):
    """Zero scheme of the same chart with the Borel or Kostant form."""
    if scen.group.n == 2:
        form = "embedded_sl2_borel" if form_kind == "solvable" else "embedded_sl2_kostant"
    else:
        form = "borel" if form_kind == "solvable" else "kostant"
    return build_zero_scheme(GroupSpec(scen.group.n, form), scen.chart, scen.budget)


class Runner:
    def __init__(self, scen: Scenario):
        self.scen = scen
        self.z = build_zero_scheme(scen.group, scen.chart, scen.budget)
        self._atlas = None
        self._borel = None

    def atlas(self):
        if self._atlas is None:
            self._atlas = components(self.z, self.scen.seed)
        return self._atlas

    def borel_atlas(self):
        if self.z.base_kind == "solvable":
            return self.atlas()
        if self._borel is None:
            self._borel = components(_counterpart(self.scen, "solvable"), self.scen.seed)
        return self._borel

    def run(self, task: Task) -> TaskReport:
        return getattr(self, "task_" + task.name.replace("-", "_"))(task)

    def task_present(self, task: Task) -> TaskReport:
        p = presentation(self.z)
        data = {"base_variables": [[n, w] for n, w in p.base_vars],
                "chart_variables": [[n, w] for n, w in p.chart_vars],
                "substitutions": [[n, s] for n, s in p.substitutions.items()],
                "relations": p.rendered(),
                "ideal_equal_to_input": p.verified}
        return TaskReport("present", p.verified, data)

    def task_hilbert(self, task: Task) -> TaskReport:
        c = self.scen.cutoff
        hs = equivariant_hilbert_series(self.z, c)
        data = _series_block(hs, c)
        data["standard_monomial_counts"] = data["coefficients"]
        data["ordinary_dims"] = ordinary_dims(self.z, c)
        return TaskReport("hilbert", True, data)

    def task_fiber_check(self, task: Task) -> TaskReport:
        rng = random.Random(self.scen.seed)
        fibers = []
        ok = True
        points = [{n: 0 for n in self.z.base_names}]
        if self.z.base_names:
            points += [random_regular_point(self.z, rng) for _ in range(self.scen.samples)]
        for pt in points:
            rep = fiber_check(self.z, pt)
            ok &= rep.passed
            fibers.append({"point": {k: str(v) for k, v in pt.items()}, "multiplicity": rep.multiplicity,
                           "distinct": rep.distinct, "squarefree_certificate": rep.squarefree,
                           "regular_semisimple": rep.regular_semisimple, "expected": rep.expected,
                           "passed": rep.passed})
        return TaskReport("fiber-check", ok, {"fibers": fibers})

    def task_components(self, task: Task) -> TaskReport:
        table = component_table(self.atlas())
        data = {"count": len(table), "fixed_points": self.scen.chart.fixed_point_count(),
                "families": [{"label": _label_json(lab), "coordinates": [[n, s] for n, s in coords.items()]}
                             for lab, coords in table]}
        return TaskReport("components", len(table) == self.scen.chart.fixed_point_count(), data)

    def task_gkm_compare(self, task: Task) -> TaskReport:
        c = self.scen.cutoff
        graph = gkm_graph(self.scen.chart, self.z.torus)
        gkm = gkm_ring_dims(graph, c)
        zs = equivariant_hilbert_series(self.z, c).even_coefficients(c)
        ok = gkm == zs and graph.is_connected() and all(any(ch) for _, _, ch in graph.edges)
        data = {"vertices": len(graph.vertices), "edges": len(graph.edges), "gkm_dims": gkm,
                "zero_scheme_dims": zs}
        return TaskReport("gkm-compare", ok, data)

    def task_weyl_check(self, task: Task) -> TaskReport:
        c = self.scen.cutoff
        atlas = self.borel_atlas()
        inv = weyl_invariant_dims(atlas, c)
        zk = self.z if self.z.base_kind == "reductive" else _counterpart(self.scen, "reductive")
        kd = equivariant_hilbert_series(zk, c).even_coefficients(c)
        orbits = weyl_orbits(atlas.labels, self.scen.chart.kind, atlas.torus.weyl_group())
        data = {"invariant_dims": inv, "kostant_dims": kd,
                "orbits": [[_label_json(x) for x in o] for o in orbits]}
        return TaskReport("weyl-check", inv == kd, data)

    def task_restrict(self, task: Task) -> TaskReport:
        c = self.scen.cutoff
        if self.z.base_kind == "solvable":
            dims = subalgebra_dims(self.atlas(), task.labels, c)
        else:
            dims = weyl_invariant_dims(self.borel_atlas(), c, labels=task.labels)
        data = {"labels": [_label_json(x) for x in task.labels], "dims": dims}
        passed = None
        if task.expected_series is not None:
            want = task.expected_series.even_coefficients(c)
            data["expected"] = want
            passed = dims == want
        return TaskReport("restrict", passed, data)

    def task_localize(self, task: Task) -> TaskReport:
        rep = localization_check(self.z, self.atlas(), samples=self.scen.samples, seed=self.scen.seed)
        data = {"checks": rep.checks,
                "failures": [{"label": _label_json(lab), "k": k, "lhs": str(l), "rhs": str(rr)}
                             for lab, k, _, l, rr in rep.failures]}
        return TaskReport("localize", rep.passed, data)


def _label_json(lab):
    return list(lab) if isinstance(lab, tuple) else lab


def run_scenario(scen: Scenario) -> tuple[dict, int]:
    """Execute all tasks; returns the report and the exit code."""
    runner = Runner(scen)
    reports = []
    for t in scen.tasks:
        try:
            reports.append(runner.run(t))
        except (HilbertMismatchError, InterpolationError) as exc:
            # a failed verification is a task verdict, not an aborted run
            reports.append(TaskReport(t.name, False, {"error": str(exc)}))
    failed = any(r.passed is False for r in reports)
    report = {
        "schema": SCHEMA,
        "scenario": {"group": scen.group.describe(), "variety": scen.chart.describe(),
                     "cutoff": scen.cutoff, "seed": scen.seed},
        "tasks": [{"task": r.name, "verdict": _verdict(r.passed), **r.data} for r in reports],
        "result": "fail" if failed else "pass",
    }
    return report, EXIT_VERIFY if failed else EXIT_OK


def _verdict(passed) -> str:
    return "n/a" if passed is None else ("pass" if passed else "fail")


def format_report(report: dict, fmt: str) -> str:
    if fmt == "machine":
        return json.dumps(report, indent=2, sort_keys=False, ensure_ascii=True) + "\n"
    lines = [f"schema: {report['schema']}"]
    sc = report["scenario"]
    lines.append(f"scenario: {sc['group']} on {sc['variety']} (cutoff {sc['cutoff']}, seed {sc['seed']})")
    for t in report["tasks"]:
        lines.append(f"task {t['task']}: {t['verdict']}")
        for key, value in t.items():
            if key in ("task", "verdict"):
                continue
            lines.extend(_text_value(key, value, "  "))
    lines.append(f"result: {report['result']}")
    return "\n".join(lines) + "\n"


def _text_value(key: str, value: Any, indent: str) -> list[str]:
    if isinstance(value, list) and value and all(isinstance(x, dict) for x in value):
        out = [f"{indent}{key}:"]
        for item in value:
            out.append(f"{indent}  - " + ", ".join(f"{k}={_inline(v)}" for k, v in item.items()))
        return out
    if isinstance(value, list) and value and all(isinstance(x, str) for x in value):
        return [f"{indent}{key}:"] + [f"{indent}  {x}" for x in value]
    return [f"{indent}{key}: {_inline(value)}"]


def _inline(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "[" + ", ".join(_inline(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_inline(v)}" for k, v in value.items()) + "}"
    return str(value)


# ----------------------------------------------------------------------------
# built-in catalog

def builtin_charts() -> list[Chart]:
    out = [projective(n) for n in range(1, 7)]
    out += [grassmannian(2, 4), flag(3)]
    out += [bott_samelson(w, 3) for w in ((1,), (1, 2), (1, 2, 1), (2, 1, 2, 1))]
    return out


def list_builtins() -> str:
    lines = [f"schema: {SCHEMA}", "group forms: " + ", ".join(FORMS)]
    width = max(len(c.describe()) for c in builtin_charts())
    for c in builtin_charts():
        lines.append(f"{c.describe():<{width}}  dim {c.dimension}  fixed points {c.fixed_point_count()}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="equicoh", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"equicoh {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario")
    run.add_argument("--out", help="write the report here instead of standard output")
    run.add_argument("--cutoff", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--format", choices=("text", "machine"))
    sub.add_parser("list", help="list built-in varieties")
    sub.add_parser("verify-all", help="run the acceptance suite")
    return ap


def _cmd_run(args) -> int:
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    try:
        scen = parse_scenario(text, args.scenario)
    except ScenarioInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.cutoff is not None:
        if args.cutoff < 0:
            print("error: --cutoff must be nonnegative", file=sys.stderr)
            return EXIT_INPUT
        scen.cutoff = args.cutoff
    if args.seed is not None:
        scen.seed = args.seed
    if args.format is not None:
        scen.format = args.format
    try:
        report, code = run_scenario(scen)
    except ResourceBudgetError as exc:
        print(f"error: resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ScenarioError, DimensionCertificateError) as exc:
        print(f"error: {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (HilbertMismatchError, InterpolationError) as exc:
        print(f"error: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    out = format_report(report, scen.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


def _cmd_verify_all() -> int:
    from .acceptance import run_all

    results = run_all(lambda line: print(line.splitlines()[0], flush=True))
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "list":
        sys.stdout.write(list_builtins())
        return EXIT_OK
    return _cmd_verify_all()


if __name__ == "__main__":
    sys.exit(main())
