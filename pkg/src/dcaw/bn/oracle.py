"""Brute-force posterior oracle used to verify variable elimination.

Deliberately independent of the factor/elimination machinery: it builds
the full joint table over the relevant variables by broadcasting raw CPD
arrays and sums configurations consistent with the evidence.

Unobserved non-target leaf variables are pruned first: a childless
variable's CPD rows each sum to 1, so summing it out of the joint is the
identity. Pruning keeps the enumerated table small enough to check
queries on the shipped layered model; the state-space guard applies to
the table that is actually enumerated.
"""

from __future__ import annotations

import math
from itertools import product as iter_product

import numpy as np

from dcaw.bn.network import (
    EvidenceSet,
    Network,
    NoisyOrCpd,
    validate_evidence,
)
from dcaw.errors import EvidenceInconsistentError, StateSpaceTooLargeError

MAX_JOINT_CONFIGURATIONS = 2 ** 20


def _noisy_or_rows(cpd: NoisyOrCpd) -> np.ndarray:
    rows = np.empty((2 ** len(cpd.parents), 2), dtype=float)
    for r, states in enumerate(iter_product((0, 1), repeat=len(cpd.parents))):
        miss = (1.0 - cpd.leak) * math.prod(
            1.0 - p for p, s in zip(cpd.link_probs, states) if s == 1
        )
        rows[r] = (miss, 1.0 - miss)
    return rows


def _prune_barren(net: Network, observed: set[str], target: str) -> list[str]:
    """Ids that must stay: ancestral closure after dropping barren leaves."""
    remaining = {v.id for v in net.variables}
    changed = True
    while changed:
        changed = False
        children: dict[str, int] = {v: 0 for v in remaining}
        for cpd in net.cpds:
            if cpd.child not in remaining:
                continue
            for p in cpd.parents:
                if p in remaining:
                    children[p] += 1
        for v in sorted(remaining):
            if v != target and v not in observed and children[v] == 0:
                remaining.discard(v)
                changed = True
    return [v.id for v in net.variables if v.id in remaining]


def enumerate_posterior(
    net: Network, evidence: EvidenceSet, target: str
) -> np.ndarray:
    """Exact posterior over the target's states by joint enumeration.

    Sums the joint probability of every configuration consistent with the
    evidence and renormalizes. Raises if the (pruned) joint state space
    exceeds 2^20 configurations or the evidence has probability 0.
    """
    evidence_idx = validate_evidence(net, evidence)
    net.var(target)
    order = _prune_barren(net, set(evidence_idx), target)
    axis_of = {v: i for i, v in enumerate(order)}
    cards = [net.card(v) for v in order]
    if math.prod(cards) > MAX_JOINT_CONFIGURATIONS:
        raise StateSpaceTooLargeError(
            f"joint state space of {math.prod(cards)} configurations exceeds "
            f"{MAX_JOINT_CONFIGURATIONS}"
        )

    joint = np.ones(cards, dtype=float)
    for cpd in net.cpds:
        if cpd.child not in axis_of:
            continue
        rows = _noisy_or_rows(cpd) if isinstance(cpd, NoisyOrCpd) else cpd.rows
        family = (*cpd.parents, cpd.child)
        table = np.asarray(rows).reshape([net.card(v) for v in family])
        positions = [axis_of[v] for v in family]
        perm = sorted(range(len(family)), key=lambda i: positions[i])
        shape = [1] * len(order)
        for i in perm:
            shape[positions[i]] = net.card(family[i])
        joint = joint * table.transpose(perm).reshape(shape)

    for var, idx in evidence_idx.items():
        indicator = np.zeros(net.card(var))
        indicator[idx] = 1.0
        shape = [1] * len(order)
        shape[axis_of[var]] = net.card(var)
        joint = joint * indicator.reshape(shape)

    other_axes = tuple(i for v, i in axis_of.items() if v != target)
    vec = joint.sum(axis=other_axes) if other_axes else joint
    z = vec.sum()
    if z <= 0.0:
        raise EvidenceInconsistentError("evidence has probability 0 under the model")
    return vec / z
