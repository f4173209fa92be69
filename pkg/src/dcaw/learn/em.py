"""ML counting and EM parameter learning with pseudo-count smoothing.

The E-step runs exact inference per record conditioned on that record's
observations; the M-step renormalizes smoothed expected counts. Noisy-OR
children are handled by expanding to a table for the E-step and refitting
link/leak against the expected-count table by coordinate descent, warm
started from the current parameters so every step is a valid generalized
EM step (the objective never decreases).

``loglik_trace`` records the objective EM ascends: the marginal
log-likelihood, plus the Dirichlet smoothing term when pseudo_count > 0
(raw likelihood alone is not monotone under smoothed M-steps).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from dcaw.bn import factors as fa
from dcaw.bn.inference import _eliminate
from dcaw.bn.network import (
    Cpt,
    Network,
    NoisyOrCpd,
    expand_noisy_or,
    require_valid,
    validate_evidence,
)
from dcaw.errors import ImpossibleRecordError, IncompleteRecordError, InvalidNetworkError
from dcaw.learn.records import RecordSet

_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class LearnConfig:
    max_iterations: int = 200
    tolerance: float = 1e-6
    pseudo_count: float = 1.0
    seed: int = 0
    frozen_variables: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.max_iterations < 1:
            raise InvalidNetworkError("max_iterations must be a positive integer")
        if self.tolerance <= 0:
            raise InvalidNetworkError("tolerance must be positive")
        if self.pseudo_count < 0:
            raise InvalidNetworkError("pseudo_count must be nonnegative")
        object.__setattr__(self, "frozen_variables", frozenset(self.frozen_variables))


@dataclass(frozen=True)
class LearnResult:
    network: Network
    loglik_trace: tuple[float, ...]
    iterations: int
    converged: bool


def initialize_parameters(
    structure: Network, seed: int, frozen: Iterable[str] = ()
) -> Network:
    """Random restart point: Dirichlet(1) rows, noisy-OR links in (0.05, 0.95).

    Deterministic given the seed. Variables in ``frozen`` keep their CPDs
    (used for deterministic-OR category nodes that must not be perturbed).
    """
    require_valid(structure)
    frozen = set(frozen)
    rng = np.random.default_rng(seed)
    new_cpds = []
    for cpd in structure.cpds:
        if cpd.child in frozen:
            new_cpds.append(cpd)
        elif isinstance(cpd, NoisyOrCpd):
            links = rng.uniform(0.05, 0.95, size=len(cpd.parents))
            leak = rng.uniform(0.05, 0.95)
            new_cpds.append(replace(cpd, link_probs=tuple(links), leak=float(leak)))
        else:
            rows = rng.dirichlet(np.ones(cpd.rows.shape[1]), size=cpd.rows.shape[0])
            new_cpds.append(Cpt(cpd.child, cpd.parents, rows))
    return structure.replace_cpds(new_cpds)


def ml_counting(structure: Network, records: RecordSet, pseudo_count: float = 0.0) -> Network:
    """Maximum-likelihood CPTs from complete records, with smoothing.

    Every record must assign every variable; noisy-OR children are not
    supported here (learn them with em_learn, which refits the
    parameterization from expected counts).
    """
    require_valid(structure)
    if any(isinstance(c, NoisyOrCpd) for c in structure.cpds):
        raise InvalidNetworkError(
            "ml_counting requires explicit CPTs; use em_learn for noisy-OR children"
        )
    records.validate_against(structure)
    all_ids = {v.id for v in structure.variables}
    for i, record in enumerate(records):
        missing = all_ids - set(record)
        if missing:
            raise IncompleteRecordError(
                f"record {i} is missing variables {sorted(missing)[:5]}"
            )
    counts = _zero_counts(structure, frozen=frozenset())
    for record in records:
        ev = validate_evidence(structure, record)
        for cpd in structure.cpds:
            idx = tuple(ev[v] for v in (*cpd.parents, cpd.child))
            counts[cpd.child][idx] += 1.0
    return _normalize_counts(structure, counts, pseudo_count, frozen=frozenset())


def em_learn(structure: Network, records: RecordSet, config: LearnConfig) -> LearnResult:
    """EM from the structure's current parameters.

    Stops when the objective changes by less than ``tolerance`` or after
    ``max_iterations`` M-steps. On complete data the result matches
    ml_counting with the same pseudo_count.
    """
    require_valid(structure)
    records.validate_against(structure)
    net = structure
    objective, counts = _e_step(net, records, config)
    trace = [objective]
    iterations = 0
    converged = False
    for it in range(1, config.max_iterations + 1):
        net = _m_step(net, counts, config)
        objective, counts = _e_step(net, records, config)
        trace.append(objective)
        iterations = it
        if abs(trace[-1] - trace[-2]) < config.tolerance:
            converged = True
            break
    return LearnResult(net, tuple(trace), iterations, converged)


# --- internals ----------------------------------------------------------

def _zero_counts(net: Network, frozen: frozenset[str]) -> dict[str, np.ndarray]:
    counts = {}
    for cpd in net.cpds:
        if cpd.child in frozen:
            continue
        shape = [net.card(p) for p in cpd.parents] + [net.card(cpd.child)]
        counts[cpd.child] = np.zeros(shape)
    return counts


# Reserved scope name for the record axis in the batched E-step. Variable
# ids are user strings; the NUL prefix keeps collisions impossible.
_RECORD_AXIS = "\x00records"


def _e_step(
    net: Network, records: RecordSet, config: LearnConfig
) -> tuple[float, dict[str, np.ndarray]]:
    """Expected family counts and the EM objective, batched over records.

    Evidence enters as per-record indicator factors sharing a record axis,
    so one elimination per family covers every record simultaneously.
    """
    counts = _zero_counts(net, config.frozen_variables)
    n = len(records)
    if n == 0:
        return _smoothing_term(net, config), counts

    factors = [fa.cpd_factor(net, cpd) for cpd in net.cpds]
    observed: dict[str, np.ndarray] = {}
    for i, record in enumerate(records):
        for var, state_idx in validate_evidence(net, record).items():
            lam = observed.get(var)
            if lam is None:
                lam = observed[var] = np.ones((n, net.card(var)))
            lam[i, :] = 0.0
            lam[i, state_idx] = 1.0
    factors += [fa.Factor((_RECORD_AXIS, var), lam) for var, lam in observed.items()]

    z_joint, _ = _eliminate(factors, (_RECORD_AXIS,))
    z = (
        np.broadcast_to(z_joint.values, (n,)).astype(float)
        if z_joint.scope != (_RECORD_AXIS,)
        else z_joint.values
    )
    bad = np.flatnonzero(z <= 0.0)
    if bad.size:
        raise ImpossibleRecordError(
            f"record {int(bad[0])} has probability 0 under the current parameters"
        )
    loglik = float(np.log(z).sum())

    for cpd in net.cpds:
        if cpd.child in config.frozen_variables:
            continue
        family = (*cpd.parents, cpd.child)
        joint, _ = _eliminate(factors, (_RECORD_AXIS, *family))
        values = joint.values
        if joint.scope != (_RECORD_AXIS, *family):
            # No record observed anything: the joint lacks the record axis.
            values = np.broadcast_to(
                values, (n,) + tuple(net.card(v) for v in family)
            )
        weights = (1.0 / z).reshape((n,) + (1,) * len(family))
        counts[cpd.child][...] = (values * weights).sum(axis=0)
    return loglik + _smoothing_term(net, config), counts


def _smoothing_term(net: Network, config: LearnConfig) -> float:
    """Dirichlet log-prior of the learnable parameters (0 when unsmoothed)."""
    if config.pseudo_count == 0.0:
        return 0.0
    total = 0.0
    for cpd in net.cpds:
        if cpd.child in config.frozen_variables:
            continue
        rows = expand_noisy_or(cpd).rows if isinstance(cpd, NoisyOrCpd) else cpd.rows
        total += float(np.log(np.maximum(rows, _LOG_FLOOR)).sum())
    return config.pseudo_count * total


def _normalize_counts(
    net: Network,
    counts: dict[str, np.ndarray],
    pseudo_count: float,
    frozen: frozenset[str],
) -> Network:
    new_cpds = []
    for cpd in net.cpds:
        if cpd.child in frozen or cpd.child not in counts:
            new_cpds.append(cpd)
            continue
        smoothed = counts[cpd.child] + pseudo_count
        card = smoothed.shape[-1]
        table = smoothed.reshape(-1, card)
        if isinstance(cpd, NoisyOrCpd):
            new_cpds.append(_refit_noisy_or(cpd, table))
            continue
        totals = table.sum(axis=1, keepdims=True)
        # A parent configuration with zero expected mass carries no
        # information; its row keeps the previous parameters.
        rows = np.where(totals > 0, table / np.where(totals > 0, totals, 1.0), cpd.rows)
        new_cpds.append(Cpt(cpd.child, cpd.parents, rows))
    return net.replace_cpds(new_cpds)


def _m_step(net: Network, counts: dict[str, np.ndarray], config: LearnConfig) -> Network:
    return _normalize_counts(net, counts, config.pseudo_count, config.frozen_variables)


def _refit_noisy_or(cpd: NoisyOrCpd, counts: np.ndarray, sweeps: int = 100) -> NoisyOrCpd:
    """Project expected counts back onto the noisy-OR parameterization.

    Minimizes the cross-entropy between the count table and the noisy-OR
    table (equivalently KL up to a constant) by bounded coordinate
    descent, warm started from the current parameters; a coordinate move
    is kept only if it improves the objective.
    """
    k = len(cpd.parents)
    active = np.zeros((2 ** k, k))
    for r in range(2 ** k):
        for j in range(k):
            active[r, j] = (r >> (k - 1 - j)) & 1

    def objective(links: np.ndarray, leak: float) -> float:
        miss = (1.0 - leak) * np.prod(
            np.where(active > 0, 1.0 - links, 1.0), axis=1
        )
        q_true = np.clip(1.0 - miss, _LOG_FLOOR, 1.0)
        q_false = np.clip(miss, _LOG_FLOOR, 1.0)
        return -float(counts[:, 1] @ np.log(q_true) + counts[:, 0] @ np.log(q_false))

    links = np.array(cpd.link_probs, dtype=float)
    leak = float(cpd.leak)
    best = objective(links, leak)
    for _ in range(sweeps):
        moved = 0.0
        for j in range(k + 1):
            def coord(x: float) -> float:
                if j < k:
                    trial = links.copy()
                    trial[j] = x
                    return objective(trial, leak)
                return objective(links, x)

            res = minimize_scalar(
                coord, bounds=(0.0, 1.0), method="bounded",
                options={"xatol": 1e-11},
            )
            if res.fun < best:
                moved = max(moved, abs(res.x - (links[j] if j < k else leak)))
                best = res.fun
                if j < k:
                    links[j] = res.x
                else:
                    leak = res.x
        if moved < 1e-12:
            break
    return replace(cpd, link_probs=tuple(links), leak=leak)
