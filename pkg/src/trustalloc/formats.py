"""Reading and writing scenario files, belief snapshots, observations and tables.

Structured documents are YAML with a ``format_version`` key; tables are CSV
with one header row and floats printed to 9 significant digits. See
``docs/formats.md`` for the field-by-field reference.
"""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path

import numpy as np
import yaml

from .capability import AgentKind, CapabilitySpace, Observation, Outcome, validate_vector
from .errors import ParseError, ValidationError
from .reward import AGENTS, RewardParams
from .simulation import (
    FIXED,
    UNIFORM,
    Allocator,
    EpisodeLog,
    GroundTruthAgent,
    Metrics,
    Scenario,
    TaskStreamSpec,
)
from .trust import FACTORED, JOINT, CapabilityBelief, Sigmoid, Step, SuccessModel

FORMAT_VERSION = 1

_Loader = getattr(yaml, "CSafeLoader", yaml.SafeLoader)
_Dumper = getattr(yaml, "CSafeDumper", yaml.SafeDumper)
_PATH_TOKEN = re.compile(r"([^.\[\]]+)|\[(\d+)\]")


def fmt(x: float) -> str:
    return f"{x:.9g}"


# -- YAML helpers -------------------------------------------------------------

def _line_index(node, path="", out=None) -> dict:
    """Map dotted field paths to 1-based source lines."""
    out = {} if out is None else out
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            key = f"{path}.{k.value}" if path else str(k.value)
            _line_index(v, key, out)
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _line_index(v, f"{path}[{i}]", out)
    return out


def _load_yaml(text: str, source):
    try:
        node = yaml.compose(text, Loader=_Loader)
        data = yaml.load(text, Loader=_Loader)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark else None
        raise ParseError(str(exc.problem or exc), path=source, line=line) from exc
    except yaml.YAMLError as exc:
        raise ParseError(str(exc), path=source) from exc
    if not isinstance(data, dict):
        raise ParseError("top level must be a mapping", path=source, line=1)
    lines = _line_index(node) if node is not None else {}
    return data, lines


class _Fields:
    """Typed access to a parsed document that reports the failing field and line."""

    def __init__(self, data, lines):
        self.data = data
        self.lines = lines

    def line(self, path):
        while path:
            if path in self.lines:
                return self.lines[path]
            path = re.sub(r"(\.[^.\[\]]+|\[\d+\])$", "", path)
        return None

    def fail(self, path, message):
        raise ValidationError(message, field=path, line=self.line(path))

    def get(self, path, default=KeyError):
        cur = self.data
        for key, index in _PATH_TOKEN.findall(path):
            if key and isinstance(cur, dict) and key in cur:
                cur = cur[key]
            elif index and isinstance(cur, list) and int(index) < len(cur):
                cur = cur[int(index)]
            elif default is KeyError:
                self.fail(path, "required field is missing")
            else:
                return default
        return cur

    def number(self, path, default=KeyError, integer=False):
        v = self.get(path, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(path, f"expected a number, got {v!r}")
        if integer and int(v) != v:
            self.fail(path, f"expected an integer, got {v!r}")
        return int(v) if integer else float(v)

    def numbers(self, path, default=KeyError):
        v = self.get(path, default)
        if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v):
            self.fail(path, f"expected a list of numbers, got {v!r}")
        return [float(x) for x in v]


def _check_version(f: _Fields):
    version = f.get("format_version", None)
    if version != FORMAT_VERSION:
        f.fail("format_version", f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")


# -- success models -----------------------------------------------------------

def model_to_dict(model: SuccessModel) -> dict:
    if isinstance(model, Step):
        return {"type": "step"}
    beta = list(model.beta) if isinstance(model.beta, tuple) else model.beta
    return {"type": "sigmoid", "beta": beta}


def _model(f: _Fields, path) -> SuccessModel:
    kind = f.get(f"{path}.type")
    if kind == "step":
        return Step()
    if kind == "sigmoid":
        raw = f.get(f"{path}.beta", 0.05)
        beta = f.numbers(f"{path}.beta") if isinstance(raw, list) else f.number(f"{path}.beta", 0.05)
        try:
            return Sigmoid(tuple(beta) if isinstance(beta, list) else beta)
        except ValueError as exc:
            f.fail(f"{path}.beta", str(exc))
    f.fail(f"{path}.type", f"unknown success model {kind!r} (expected step or sigmoid)")


# -- scenario -----------------------------------------------------------------

_REWARD_FIELDS = {
    "success_weights": "reward.success_weights",
    "success_base": "reward.success_base",
    "failure_value": "reward.failure_value",
    "cost_base": "reward.costs",
    "cost_weights": "reward.costs",
    "cost_base.human": "reward.costs.human.base",
    "cost_base.robot": "reward.costs.robot.base",
    "cost_weights.human": "reward.costs.human.weights",
    "cost_weights.robot": "reward.costs.robot.weights",
}


def scenario_from_text(text: str, source="<scenario>") -> Scenario:
    data, lines = _load_yaml(text, source)
    f = _Fields(data, lines)
    _check_version(f)

    try:
        space = CapabilitySpace(f.number("space.n", integer=True), f.number("space.grid_resolution", 101, integer=True))
    except ValueError as exc:
        f.fail("space", str(exc))

    raw_agents = f.get("agents")
    if not isinstance(raw_agents, list):
        f.fail("agents", "expected a list of agents")
    agents = []
    for i in range(len(raw_agents)):
        try:
            kind = AgentKind(f.get(f"agents[{i}].kind"))
        except ValueError:
            f.fail(f"agents[{i}].kind", "expected 'human' or 'robot'")
        agents.append(GroundTruthAgent(kind, _vector_field(f, f"agents[{i}].true_capabilities", space)))
    if sorted(a.kind.value for a in agents) != sorted(k.value for k in AGENTS):
        f.fail("agents", "need exactly one human and one robot")

    dist = f.get("stream.distribution", UNIFORM)
    if dist == UNIFORM:
        distribution = UNIFORM
    elif isinstance(dist, dict) and "fixed" in dist:
        fixed = dist["fixed"]
        if not isinstance(fixed, list) or not fixed:
            f.fail("stream.distribution.fixed", "expected a non-empty list of requirement vectors")
        distribution = tuple(
            _vector_field(f, f"stream.distribution.fixed[{j}]", space) for j in range(len(fixed))
        )
    else:
        f.fail("stream.distribution", f"expected 'uniform' or {{fixed: [...]}}, got {dist!r}")
    count = f.number("stream.count", integer=True)
    if count < 1:
        f.fail("stream.count", "must be >= 1")
    stream_seed = f.get("stream.seed", None)
    if stream_seed is not None:
        stream_seed = f.number("stream.seed", integer=True)
    stream = TaskStreamSpec(count, distribution, stream_seed)

    costs = {}
    for kind in AGENTS:
        base = f.number(f"reward.costs.{kind.value}.base")
        weights = f.numbers(f"reward.costs.{kind.value}.weights", [0.0] * space.n)
        costs[kind] = (base, weights)
    try:
        params = RewardParams(
            success_weights=tuple(f.numbers("reward.success_weights")),
            success_base=f.number("reward.success_base", 0.0),
            failure_value=f.number("reward.failure_value", 0.0),
            cost_base={k: c[0] for k, c in costs.items()},
            cost_weights={k: tuple(c[1]) for k, c in costs.items()},
        )
    except ValidationError as exc:
        f.fail(_REWARD_FIELDS.get(exc.field, "reward"), str(exc))
    if params.n != space.n:
        f.fail("reward.success_weights", f"expected {space.n} weights, got {params.n}")

    alloc = f.get("allocator", "trust_based")
    try:
        if isinstance(alloc, dict) and set(alloc) == {FIXED}:
            allocator = Allocator(FIXED, AgentKind(alloc[FIXED]))
        elif isinstance(alloc, str):
            allocator = Allocator(alloc)
        else:
            raise ValueError(f"unrecognized allocator {alloc!r}")
    except ValueError as exc:
        f.fail("allocator", str(exc))

    tie = f.get("tie_break", AgentKind.ROBOT.value)
    try:
        tie = AgentKind(tie)
    except ValueError:
        f.fail("tie_break", "expected 'human' or 'robot'")

    return Scenario(
        space=space,
        agents=tuple(agents),
        stream=stream,
        reward_params=params,
        success_model=_model(f, "models.ground_truth") if "ground_truth" in f.get("models", {}) else Step(),
        belief_model=_model(f, "models.belief") if "belief" in f.get("models", {}) else Sigmoid(0.05),
        allocator=allocator,
        seed=f.number("seed", 0, integer=True),
        final_tie_break=tie,
    )


def _vector_field(f: _Fields, path, space):
    raw = f.numbers(path)
    try:
        return validate_vector(raw, space)
    except ValueError as exc:
        f.fail(path, str(exc))


def parse_scenario(path) -> Scenario:
    path = Path(path)
    return scenario_from_text(path.read_text(), source=str(path))


def scenario_to_dict(sc: Scenario) -> dict:
    p = sc.reward_params
    if sc.stream.distribution == UNIFORM:
        dist = UNIFORM
    else:
        dist = {"fixed": [list(v) for v in sc.stream.distribution]}
    if sc.allocator.name == FIXED:
        alloc = {FIXED: sc.allocator.agent.value}
    else:
        alloc = sc.allocator.name
    doc = {
        "format_version": FORMAT_VERSION,
        "space": {"n": sc.space.n, "grid_resolution": sc.space.grid_resolution},
        "agents": [{"kind": a.kind.value, "true_capabilities": list(a.true_capabilities)} for a in sc.agents],
        "stream": {"count": sc.stream.count, "distribution": dist},
        "models": {"ground_truth": model_to_dict(sc.success_model), "belief": model_to_dict(sc.belief_model)},
        "reward": {
            "success_weights": list(p.success_weights),
            "success_base": p.success_base,
            "failure_value": p.failure_value,
            "costs": {
                k.value: {"base": p.cost_base[k], "weights": list(p.cost_weights[k])} for k in AGENTS
            },
        },
        "allocator": alloc,
        "tie_break": sc.final_tie_break.value,
        "seed": sc.seed,
    }
    if sc.stream.seed is not None:
        doc["stream"]["seed"] = sc.stream.seed
    return doc


def scenario_to_text(sc: Scenario) -> str:
    return yaml.dump(scenario_to_dict(sc), Dumper=_Dumper, sort_keys=False, default_flow_style=None)


def write_scenario(sc: Scenario, path):
    Path(path).write_text(scenario_to_text(sc))


# -- belief snapshots ---------------------------------------------------------

def belief_to_text(belief: CapabilityBelief) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "capability_belief",
        "space": {"n": belief.space.n, "grid_resolution": belief.space.grid_resolution},
        "storage": belief.storage,
        "shape": list(belief.weights.shape),
        # row-major; repr-formatted floats round-trip exactly
        "weights": [float(x) for x in np.ravel(belief.weights, order="C")],
    }
    return yaml.dump(doc, Dumper=_Dumper, sort_keys=False, default_flow_style=None, width=100)


def belief_from_text(text: str, source="<belief>") -> CapabilityBelief:
    data, lines = _load_yaml(text, source)
    f = _Fields(data, lines)
    _check_version(f)
    try:
        space = CapabilitySpace(f.number("space.n", integer=True), f.number("space.grid_resolution", integer=True))
    except ValueError as exc:
        f.fail("space", str(exc))
    storage = f.get("storage")
    if storage not in (JOINT, FACTORED):
        f.fail("storage", f"expected joint or factored, got {storage!r}")
    weights = np.asarray(f.numbers("weights"), dtype=float)
    shape = (space.grid_resolution,) * space.n if storage == JOINT else (space.n, space.grid_resolution)
    if weights.size != int(np.prod(shape)):
        f.fail("weights", f"expected {int(np.prod(shape))} weights, got {weights.size}")
    try:
        return CapabilityBelief(space, weights.reshape(shape, order="C"), storage)
    except ValueError as exc:
        f.fail("weights", str(exc))


def save_belief(belief: CapabilityBelief, path):
    Path(path).write_text(belief_to_text(belief))


def load_belief(path) -> CapabilityBelief:
    path = Path(path)
    return belief_from_text(path.read_text(), source=str(path))


# -- observations -------------------------------------------------------------

def read_observations(path, space: CapabilitySpace | None = None) -> list[Observation]:
    """Rows of requirement components followed by ``S`` or ``F``.

    A header row and ``#`` comment lines are skipped. Without ``space`` the
    dimension is taken from the first data row.
    """
    path = Path(path)
    out = []
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            row = [c.strip() for c in row]
            if not row or not any(row) or row[0].startswith("#"):
                continue
            if not out and _is_header(row):
                continue
            if len(row) < 2:
                raise ParseError("expected requirement values followed by S or F", path=str(path), line=lineno)
            try:
                reqs = [float(c) for c in row[:-1]]
            except ValueError:
                raise ParseError(f"non-numeric requirement in {row!r}", path=str(path), line=lineno) from None
            try:
                outcome = Outcome(row[-1].upper())
            except ValueError:
                raise ParseError(f"outcome must be S or F, got {row[-1]!r}", path=str(path), line=lineno) from None
            if space is None:
                space = CapabilitySpace(len(reqs))
            try:
                vec = validate_vector(reqs, space)
            except ValueError as exc:
                raise ValidationError(str(exc), field="requirements", line=lineno) from exc
            out.append(Observation(vec, outcome))
    if not out:
        raise ParseError("no observations found", path=str(path))
    return out


def _is_header(row) -> bool:
    try:
        float(row[0])
        return False
    except ValueError:
        return True


def write_observations(observations, path):
    n = len(observations[0].requirements)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"req_{i}" for i in range(n)] + ["outcome"])
        for o in observations:
            w.writerow([fmt(v) for v in o.requirements] + [o.outcome.value])


# -- run artifacts ------------------------------------------------------------

def episode_table(log: EpisodeLog, n: int) -> str:
    header = ["task_index", "task_id"] + [f"req_{i}" for i in range(n)]
    for k in AGENTS:
        header += [f"trust_{k.value}", f"expected_{k.value}"]
    header += ["chosen", "tie_broken", "outcome", "realized_reward", "cumulative_reward"]
    for k in AGENTS:
        for i in range(n):
            header += [f"{k.value}_lower_{i}", f"{k.value}_upper_{i}", f"{k.value}_mean_{i}"]

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    total = 0.0
    for r in log.records:
        total += r.realized_reward
        row = [r.index, r.task_id] + [fmt(v) for v in r.requirements]
        for k in AGENTS:
            row += [fmt(r.trust[k]), fmt(r.expected[k])]
        row += [r.chosen.value, int(r.tie_broken), r.outcome.value, fmt(r.realized_reward), fmt(total)]
        for k in AGENTS:
            for i in range(n):
                row += [fmt(r.bounds[k][i, 0]), fmt(r.bounds[k][i, 1]), fmt(r.means[k][i])]
        w.writerow(row)
    return buf.getvalue()


TRACE_HEADER = ["step", "agent", "dim", "lower", "upper", "true_value"]


def episode_bounds_table(log: EpisodeLog, scenario: Scenario) -> str:
    """Long-format bounds per task index, agent and dimension."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for r in log.records:
        for k in AGENTS:
            truth = scenario.agent(k).true_capabilities
            for i in range(scenario.space.n):
                w.writerow([r.index, k.value, i, fmt(r.bounds[k][i, 0]), fmt(r.bounds[k][i, 1]), fmt(truth[i])])
    return buf.getvalue()


def fit_trace_table(trace, truth=None, agent="trustee") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    steps, n = trace.lower.shape
    for s in range(steps):
        for i in range(n):
            tv = fmt(truth[i]) if truth is not None else ""
            w.writerow([s, agent, i, fmt(trace.lower[s, i]), fmt(trace.upper[s, i]), tv])
    return buf.getvalue()


def metrics_to_text(metrics: Metrics, scenario: Scenario) -> str:
    doc = {"format_version": FORMAT_VERSION, "allocator": _allocator_label(scenario), "seed": scenario.seed}
    doc.update(metrics.to_dict())
    return yaml.dump(doc, Dumper=_Dumper, sort_keys=False)


def _allocator_label(sc: Scenario) -> str:
    if sc.allocator.name == FIXED:
        return f"{FIXED}:{sc.allocator.agent.value}"
    return sc.allocator.name


def load_yaml_doc(path) -> dict:
    path = Path(path)
    data, _ = _load_yaml(path.read_text(), str(path))
    return data


def dump_yaml(doc) -> str:
    return yaml.dump(doc, Dumper=_Dumper, sort_keys=False)
