"""Network representation: variables, CPDs, validation, serialization.

Networks are immutable after construction; all inference operations are
pure functions over them. Validation never raises -- it returns a report
so callers can surface every problem at once.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Union

import numpy as np

from dcaw.errors import InvalidEvidenceError, InvalidNetworkError, TooManyParentsError

BINARY_STATES = ("false", "true")

ROW_SUM_TOL = 1e-9

# Evidence is a plain mapping variable id -> observed state label.
EvidenceSet = Mapping[str, str]


@dataclass(frozen=True)
class Variable:
    id: str
    name: str = ""
    states: tuple[str, ...] = BINARY_STATES

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if not self.name:
            object.__setattr__(self, "name", self.id)

    @property
    def card(self) -> int:
        return len(self.states)

    def state_index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise InvalidEvidenceError(
                f"{state!r} is not a state of variable {self.id!r}"
            ) from None


@dataclass(frozen=True)
class Cpt:
    """Explicit conditional probability table.

    ``rows`` has one row per joint parent-state combination, row-major over
    the parent order (the last parent's state varies fastest), and one
    column per child state.
    """

    child: str
    parents: tuple[str, ...]
    rows: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        rows = np.asarray(self.rows, dtype=float)
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)


@dataclass(frozen=True)
class NoisyOrCpd:
    """Noisy-OR parameterization for a binary child of binary parents.

    P(child=true | active parent set S) = 1 - (1-leak) * prod_{i in S} (1 - link_probs[i])
    """

    child: str
    parents: tuple[str, ...]
    link_probs: tuple[float, ...]
    leak: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "link_probs", tuple(float(p) for p in self.link_probs))
        object.__setattr__(self, "leak", float(self.leak))


Cpd = Union[Cpt, NoisyOrCpd]


@dataclass(frozen=True)
class Network:
    variables: tuple[Variable, ...]
    cpds: tuple[Cpd, ...]
    name: str = "network"

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "cpds", tuple(self.cpds))

    @cached_property
    def variables_by_id(self) -> dict[str, Variable]:
        return {v.id: v for v in self.variables}

    @cached_property
    def cpd_by_child(self) -> dict[str, Cpd]:
        return {c.child: c for c in self.cpds}

    @cached_property
    def children_of(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v.id: [] for v in self.variables}
        for cpd in self.cpds:
            for p in cpd.parents:
                if p in out:
                    out[p].append(cpd.child)
        return {k: tuple(v) for k, v in out.items()}

    def var(self, var_id: str) -> Variable:
        try:
            return self.variables_by_id[var_id]
        except KeyError:
            raise InvalidNetworkError(f"unknown variable {var_id!r}") from None

    def card(self, var_id: str) -> int:
        return self.var(var_id).card

    def parents(self, var_id: str) -> tuple[str, ...]:
        return self.cpd_by_child[var_id].parents

    def replace_cpds(self, new_cpds: Iterable[Cpd]) -> "Network":
        return Network(self.variables, tuple(new_cpds), self.name)


@dataclass(frozen=True)
class Finding:
    variable_id: str
    kind: str
    message: str
    deviation: float | None = None


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    def kinds(self) -> set[str]:
        return {f.kind for f in self.findings}


def expand_noisy_or(cpd: NoisyOrCpd) -> Cpt:
    """Materialize a noisy-OR CPD into an explicit table.

    Rows follow the same row-major convention as Cpt; parent state index 1
    means the parent is active.
    """
    n = len(cpd.parents)
    if n > 16:
        raise TooManyParentsError(
            f"noisy-OR expansion limited to 16 parents, got {n} for {cpd.child!r}"
        )
    if len(cpd.link_probs) != n:
        raise InvalidNetworkError(
            f"noisy-OR for {cpd.child!r} has {len(cpd.link_probs)} link probabilities "
            f"for {n} parents"
        )
    rows = np.empty((2 ** n, 2), dtype=float)
    for r, states in enumerate(product((0, 1), repeat=n)):
        miss = (1.0 - cpd.leak) * math.prod(
            1.0 - p for p, s in zip(cpd.link_probs, states) if s == 1
        )
        rows[r, 0] = miss
        rows[r, 1] = 1.0 - miss
    return Cpt(child=cpd.child, parents=cpd.parents, rows=rows)


def _find_cycle(net: Network, ids: set[str]) -> list[str]:
    """Return the ids on one directed cycle of the parent->child relation, or []."""
    graph = {
        c.child: [p for p in c.parents if p in ids]
        for c in net.cpds
        if c.child in ids
    }
    color: dict[str, int] = {}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = 1
        stack.append(node)
        for nxt in graph.get(node, ()):
            if color.get(nxt, 0) == 1:
                return stack[stack.index(nxt):]
            if color.get(nxt, 0) == 0:
                found = visit(nxt)
                if found is not None:
                    return found
        stack.pop()
        color[node] = 2
        return None

    for start in sorted(graph):
        if color.get(start, 0) == 0:
            found = visit(start)
            if found is not None:
                return found
    return []


def validate_network(net: Network) -> ValidationReport:
    """Check every network invariant; reports findings instead of raising."""
    findings: list[Finding] = []
    seen: set[str] = set()
    for v in net.variables:
        if v.id in seen:
            findings.append(Finding(v.id, "duplicate-id", f"variable id {v.id!r} appears twice"))
        seen.add(v.id)
        if len(v.states) < 2:
            findings.append(Finding(v.id, "shape", f"variable {v.id!r} needs at least 2 states"))
        if len(set(v.states)) != len(v.states):
            findings.append(Finding(v.id, "duplicate-id", f"variable {v.id!r} has duplicate state labels"))

    ids = set(seen)
    with_cpd: set[str] = set()
    for cpd in net.cpds:
        vid = cpd.child
        if vid in with_cpd:
            findings.append(Finding(vid, "duplicate-id", f"variable {vid!r} has more than one CPD"))
        with_cpd.add(vid)
        if vid not in ids:
            findings.append(Finding(vid, "dangling-reference", f"CPD child {vid!r} is not a variable"))
            continue
        dangling = [p for p in cpd.parents if p not in ids]
        for p in dangling:
            findings.append(Finding(vid, "dangling-reference", f"parent {p!r} of {vid!r} is not a variable"))
        if dangling:
            continue
        if len(set(cpd.parents)) != len(cpd.parents):
            findings.append(Finding(vid, "shape", f"duplicate parent in CPD of {vid!r}"))
            continue
        if isinstance(cpd, NoisyOrCpd):
            nonbinary = [x for x in (vid, *cpd.parents) if net.var(x).card != 2]
            if nonbinary:
                findings.append(Finding(vid, "shape", f"noisy-OR members must be binary: {nonbinary}"))
            if len(cpd.link_probs) != len(cpd.parents):
                findings.append(Finding(vid, "shape", f"noisy-OR for {vid!r}: one link probability per parent required"))
            for p in (*cpd.link_probs, cpd.leak):
                if not (0.0 <= p <= 1.0):
                    findings.append(Finding(vid, "range", f"noisy-OR parameter {p} outside [0,1] for {vid!r}"))
        else:
            n_rows = math.prod(net.card(p) for p in cpd.parents)
            expected = (n_rows, net.card(vid))
            if cpd.rows.shape != expected:
                findings.append(Finding(
                    vid, "shape",
                    f"CPT of {vid!r} has shape {cpd.rows.shape}, expected {expected}",
                ))
                continue
            if np.any(cpd.rows < -1e-12) or np.any(cpd.rows > 1 + 1e-12):
                findings.append(Finding(vid, "range", f"CPT of {vid!r} has entries outside [0,1]"))
            sums = cpd.rows.sum(axis=1)
            for r, s in enumerate(sums):
                if abs(s - 1.0) > ROW_SUM_TOL:
                    findings.append(Finding(
                        vid, "row-sum",
                        f"row {r} of {vid!r} sums to {s:.12g}",
                        deviation=abs(s - 1.0),
                    ))

    for vid in sorted(ids - with_cpd):
        findings.append(Finding(vid, "missing-cpd", f"variable {vid!r} has no CPD"))

    cycle = _find_cycle(net, ids)
    if cycle:
        findings.append(Finding(cycle[0], "cycle", f"cycle through {' -> '.join(cycle + [cycle[0]])}"))

    return ValidationReport(tuple(findings))


def require_valid(net: Network) -> None:
    report = validate_network(net)
    if not report.ok:
        raise InvalidNetworkError(
            f"network {net.name!r} is invalid: "
            + "; ".join(f.message for f in report.findings[:5]),
            detail=[f.kind for f in report.findings],
        )


def validate_evidence(net: Network, evidence: EvidenceSet) -> dict[str, int]:
    """Map evidence to state indices, rejecting unknown variables/states."""
    out: dict[str, int] = {}
    for var_id, state in evidence.items():
        if var_id not in net.variables_by_id:
            raise InvalidEvidenceError(f"evidence on unknown variable {var_id!r}")
        out[var_id] = net.var(var_id).state_index(state)
    return out


def topological_order(net: Network) -> list[str]:
    """Variable ids, parents before children. Requires an acyclic network."""
    indeg = {v.id: 0 for v in net.variables}
    for cpd in net.cpds:
        indeg[cpd.child] += len([p for p in cpd.parents if p in indeg])
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order: list[str] = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for child in net.children_of.get(v, ()):
            indeg[child] -= 1
            if indeg[child] == 0:
                ready.append(child)
        ready.sort()
    if len(order) != len(net.variables):
        raise InvalidNetworkError("network contains a cycle")
    return order


# --- serialization ----------------------------------------------------
#
# Versioned structured-text document. Floats are written at 12 significant
# digits, so parse . serialize is the identity up to that precision.

FORMAT_NAME = "dcaw-network"
FORMAT_VERSION = 1


def _round12(x: float) -> float:
    return float(f"{float(x):.12g}")


def network_to_document(net: Network) -> dict:
    cpds = []
    for cpd in net.cpds:
        if isinstance(cpd, NoisyOrCpd):
            cpds.append({
                "type": "noisy-or",
                "child": cpd.child,
                "parents": list(cpd.parents),
                "link_probs": [_round12(p) for p in cpd.link_probs],
                "leak": _round12(cpd.leak),
            })
        else:
            cpds.append({
                "type": "cpt",
                "child": cpd.child,
                "parents": list(cpd.parents),
                "rows": [[_round12(x) for x in row] for row in cpd.rows],
            })
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "name": net.name,
        "variables": [
            {"id": v.id, "name": v.name, "states": list(v.states)}
            for v in net.variables
        ],
        "cpds": cpds,
    }


def network_from_document(doc: Mapping) -> Network:
    if not isinstance(doc, Mapping):
        raise InvalidNetworkError("network document must be a mapping")
    if doc.get("format") != FORMAT_NAME:
        raise InvalidNetworkError(f"not a {FORMAT_NAME} document")
    if doc.get("version") != FORMAT_VERSION:
        raise InvalidNetworkError(f"unsupported network document version {doc.get('version')!r}")
    try:
        variables = tuple(
            Variable(id=v["id"], name=v.get("name", ""), states=tuple(v["states"]))
            for v in doc["variables"]
        )
        cpds: list[Cpd] = []
        for c in doc["cpds"]:
            if c["type"] == "noisy-or":
                cpds.append(NoisyOrCpd(
                    child=c["child"],
                    parents=tuple(c["parents"]),
                    link_probs=tuple(c["link_probs"]),
                    leak=c.get("leak", 0.0),
                ))
            elif c["type"] == "cpt":
                cpds.append(Cpt(
                    child=c["child"],
                    parents=tuple(c["parents"]),
                    rows=np.array(c["rows"], dtype=float),
                ))
            else:
                raise InvalidNetworkError(f"unknown CPD type {c['type']!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidNetworkError(f"malformed network document: {exc}") from exc
    return Network(variables=variables, cpds=tuple(cpds), name=doc.get("name", "network"))


def network_to_json(net: Network) -> str:
    return json.dumps(network_to_document(net), indent=2) + "\n"


def network_from_json(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidNetworkError(f"invalid JSON: {exc}") from exc
    return network_from_document(doc)
