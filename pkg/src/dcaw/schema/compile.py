"""Compile a cause-effect model into a layered binary network.

Layers: causes are roots with priors; each cause category is a
deterministic OR of its member causes ("the category happened" is
definitionally "some member cause happened"); each problem is a full-CPT
child of every cause category; each effect category is a full-CPT child
of every problem; each effect hangs off its own effect category.

Category OR nodes are listed in ``frozen_variables`` so learning leaves
them deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dcaw.bn.network import (
    BINARY_STATES,
    Cpd,
    Cpt,
    Network,
    NoisyOrCpd,
    Variable,
    validate_network,
)
from dcaw.errors import InvalidNetworkError
from dcaw.schema.model import CauseEffectModel, validate_model


@dataclass(frozen=True)
class CompiledModel:
    model: CauseEffectModel
    network: Network
    node_map: dict[str, str]
    frozen_variables: frozenset[str]
    warnings: tuple[str, ...]
    params: dict

    def variable_for(self, model_id: str) -> str:
        return self.node_map[model_id]


def _uniform_rows(n_parent_configs: int) -> np.ndarray:
    return np.full((n_parent_configs, 2), 0.5)


def compile_model(model: CauseEffectModel) -> CompiledModel:
    validate_model(model)
    variables: list[Variable] = []
    cpds: list[Cpd] = []
    warnings: list[str] = []
    frozen: list[str] = []

    for cause in model.causes:
        variables.append(Variable(cause.id, cause.label, BINARY_STATES))
        cpds.append(Cpt(cause.id, (), _uniform_rows(1)))

    for cat in model.cause_categories:
        variables.append(Variable(cat.id, cat.label, BINARY_STATES))
        if cat.members:
            cpds.append(NoisyOrCpd(cat.id, cat.members, (1.0,) * len(cat.members), 0.0))
            frozen.append(cat.id)
        else:
            warnings.append(f"cause category {cat.id!r} has no members; compiled as a root")
            cpds.append(Cpt(cat.id, (), _uniform_rows(1)))

    category_ids = tuple(c.id for c in model.cause_categories)
    for problem in model.problems:
        variables.append(Variable(problem.id, problem.label, BINARY_STATES))
        cpds.append(Cpt(problem.id, category_ids, _uniform_rows(2 ** len(category_ids))))

    problem_ids = model.problem_ids()
    for cat in model.effect_categories:
        variables.append(Variable(cat.id, cat.label, BINARY_STATES))
        cpds.append(Cpt(cat.id, problem_ids, _uniform_rows(2 ** len(problem_ids))))
        if not cat.members:
            warnings.append(f"effect category {cat.id!r} has no members")

    for effect in model.effects:
        variables.append(Variable(effect.id, effect.label, BINARY_STATES))
        category = next(c for c in model.effect_categories if effect.id in c.members)
        cpds.append(Cpt(effect.id, (category.id,), _uniform_rows(2)))

    network = Network(tuple(variables), tuple(cpds), name=f"cause-effect-{model.version}")
    report = validate_network(network)
    if not report.ok:
        raise InvalidNetworkError(
            "compiled network failed validation",
            detail=[f.message for f in report.findings],
        )
    node_map = {v.id: v.id for v in variables}
    return CompiledModel(
        model=model,
        network=network,
        node_map=node_map,
        frozen_variables=frozenset(frozen),
        warnings=tuple(warnings),
        params={
            "cause_category_parameterization": "deterministic-or",
            "model_version": model.version,
            "layers": ["causes", "cause_categories", "problems", "effect_categories", "effects"],
        },
    )
