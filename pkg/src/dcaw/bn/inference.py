"""Exact inference by variable elimination.

Evidence is applied by slicing factors before elimination; the elimination
order comes from a greedy min-degree heuristic on the moralized graph.
Posteriors from these routines must agree with the brute-force oracle in
``dcaw.bn.oracle`` -- the test suite enforces that equivalence.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

import numpy as np

from dcaw.bn import factors as fa
from dcaw.bn.network import (
    EvidenceSet,
    Network,
    require_valid,
    validate_evidence,
)
from dcaw.errors import EvidenceInconsistentError

PROB_SUM_TOL = 1e-9


def min_degree_order(net: Network, keep: Iterable[str] = ()) -> list[str]:
    """Greedy elimination order over all variables not in ``keep``.

    Operates on the moralized graph (each CPD family forms a clique);
    picks the minimum-degree variable at each step, ties broken by lowest
    variable id, and connects the chosen variable's neighbors (fill-in).
    Any valid order yields identical posteriors; the heuristic only
    controls intermediate factor sizes.
    """
    keep = set(keep)
    adj: dict[str, set[str]] = {v.id: set() for v in net.variables}
    for cpd in net.cpds:
        clique = [cpd.child, *cpd.parents]
        for a in clique:
            for b in clique:
                if a != b:
                    adj[a].add(b)
    order: list[str] = []
    remaining = set(adj)
    while True:
        candidates = [v for v in remaining if v not in keep]
        if not candidates:
            break
        best = min(candidates, key=lambda v: (len(adj[v] & remaining), v))
        neighbors = adj[best] & remaining
        for a in neighbors:
            adj[a] |= neighbors - {a}
            adj[a].discard(best)
        remaining.discard(best)
        order.append(best)
    return order


def _sliced_factors(
    net: Network, evidence_idx: Mapping[str, int]
) -> tuple[list[fa.Factor], float]:
    """Factors of the network with observed variables sliced out.

    Returns (factors over unobserved variables only, scalar product of the
    fully-sliced factors).
    """
    out: list[fa.Factor] = []
    scalar = 1.0
    for cpd in net.cpds:
        f = fa.cpd_factor(net, cpd)
        for var in f.scope:
            if var in evidence_idx:
                f = fa.reduce_var(f, var, evidence_idx[var])
        if f.is_scalar:
            scalar *= float(f.values)
        else:
            out.append(f)
    return out, scalar


def _order_for(
    factors: Sequence[fa.Factor], keep: set[str]
) -> list[str]:
    """Min-degree order for the graph induced by already-sliced factors."""
    adj: dict[str, set[str]] = {}
    for f in factors:
        for a in f.scope:
            adj.setdefault(a, set()).update(v for v in f.scope if v != a)
    order: list[str] = []
    remaining = set(adj)
    while True:
        candidates = [v for v in remaining if v not in keep]
        if not candidates:
            break
        best = min(candidates, key=lambda v: (len(adj[v] & remaining), v))
        neighbors = adj[best] & remaining
        for a in neighbors:
            adj[a] |= neighbors - {a}
            adj[a].discard(best)
        remaining.discard(best)
        order.append(best)
    return order


def _eliminate(
    factors: Sequence[fa.Factor],
    keep: tuple[str, ...],
    scalar: float = 1.0,
    order: Sequence[str] | None = None,
) -> tuple[fa.Factor, float]:
    """Sum out everything outside ``keep``.

    Returns the unnormalized joint over ``keep`` (axes in keep order,
    restricted to variables that actually occur) and its total mass, which
    equals P(evidence) when the factors came from ``_sliced_factors``.
    """
    live = list(factors)
    if order is None:
        order = _order_for(live, set(keep))
    for var in order:
        bucket = [f for f in live if var in f.scope]
        if not bucket:
            continue
        live = [f for f in live if var not in f.scope]
        merged = fa.sum_out(fa.product(bucket), var)
        if merged.is_scalar:
            scalar *= float(merged.values)
        else:
            live.append(merged)
    joint = fa.product(live)
    joint = fa.marginalize_to(joint, tuple(v for v in keep if v in joint.scope))
    values = joint.values * scalar
    return fa.Factor(joint.scope, values), float(values.sum())


def joint_posterior(
    net: Network,
    evidence: EvidenceSet,
    keep: Sequence[str],
    elimination_order: Sequence[str] | None = None,
) -> fa.Factor:
    """Normalized joint posterior over the unobserved variables of ``keep``.

    Observed members of ``keep`` are dropped from the returned scope (their
    posterior is the evidence indicator). Any ``elimination_order`` covering
    the variables outside ``keep`` and the evidence yields the same result;
    the default comes from the min-degree heuristic.
    """
    evidence_idx = validate_evidence(net, evidence)
    sliced, scalar = _sliced_factors(net, evidence_idx)
    wanted = tuple(v for v in keep if v not in evidence_idx)
    joint, z = _eliminate(sliced, wanted, scalar, order=elimination_order)
    if z <= 0.0:
        raise EvidenceInconsistentError("evidence has probability 0 under the model")
    return fa.Factor(joint.scope, joint.values / z)


def posterior(
    net: Network, evidence: EvidenceSet, targets: Sequence[str]
) -> dict[str, np.ndarray]:
    """Marginal posterior of each target variable given evidence.

    Observed targets get an indicator vector at the observed state.
    Every returned vector sums to 1 within 1e-9.
    """
    require_valid(net)
    evidence_idx = validate_evidence(net, evidence)
    result: dict[str, np.ndarray] = {}
    if not targets:
        return result
    sliced, scalar = _sliced_factors(net, evidence_idx)
    z: float | None = None
    for target in targets:
        net.var(target)
        if target in evidence_idx:
            vec = np.zeros(net.card(target))
            vec[evidence_idx[target]] = 1.0
            result[target] = vec
            continue
        order = min_degree_order(net, keep={target, *evidence_idx})
        joint, total = _eliminate(sliced, (target,), scalar, order=order)
        if z is None:
            z = total
        if total <= 0.0:
            raise EvidenceInconsistentError("evidence has probability 0 under the model")
        vec = joint.values / total
        assert abs(vec.sum() - 1.0) <= PROB_SUM_TOL
        result[target] = vec
    if z is None and evidence_idx:
        # All targets observed: still reject impossible evidence.
        _, total = _eliminate(sliced, (), scalar)
        if total <= 0.0:
            raise EvidenceInconsistentError("evidence has probability 0 under the model")
    return result


def evidence_probability(net: Network, evidence: EvidenceSet) -> float:
    """P(evidence) under the network."""
    evidence_idx = validate_evidence(net, evidence)
    sliced, scalar = _sliced_factors(net, evidence_idx)
    _, z = _eliminate(sliced, (), scalar)
    return z


def log_likelihood(net: Network, records: Iterable[Mapping[str, str]]) -> float:
    """Sum over records of log P(observed assignments).

    A record with probability 0 under the model makes the result -inf.
    Records with no observations contribute log 1 = 0.
    """
    require_valid(net)
    total = 0.0
    for record in records:
        z = evidence_probability(net, record)
        if z <= 0.0:
            return -math.inf
        total += math.log(z)
    return total
