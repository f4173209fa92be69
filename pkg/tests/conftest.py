import numpy as np
import pytest

import dcaw.data as data
from dcaw.bn.network import Cpt, Network, NoisyOrCpd, Variable
from dcaw.learn import LearnConfig, RecordSet, em_learn, initialize_parameters
from dcaw.schema import compile_model, records_to_assignments
from dcaw.session.versions import ModelVersion

# Training configuration for the shipped fixture: smoothing on, category
# OR nodes frozen, tolerance loose enough to converge in a few seconds.
FIXTURE_CONFIG = dict(max_iterations=150, tolerance=1e-4, pseudo_count=1.0)
FIXTURE_SEED = 1


def random_network(rng: np.random.Generator, n_max: int = 10,
                   allow_noisy_or: bool = False) -> Network:
    """Random binary DAG with Dirichlet CPT rows (optionally noisy-OR nodes)."""
    n = int(rng.integers(2, n_max + 1))
    ids = [f"v{i}" for i in range(n)]
    cpds = []
    for i, vid in enumerate(ids):
        k = int(rng.integers(0, min(i, 3) + 1))
        parents = tuple(rng.choice(ids[:i], size=k, replace=False)) if k else ()
        if allow_noisy_or and k > 0 and rng.random() < 0.5:
            cpds.append(NoisyOrCpd(
                vid, parents,
                tuple(rng.uniform(0.05, 0.95, k)),
                float(rng.uniform(0.0, 0.3)),
            ))
        else:
            cpds.append(Cpt(vid, parents, rng.dirichlet(np.ones(2), size=2 ** k)))
    return Network(tuple(Variable(v) for v in ids), tuple(cpds))


def random_evidence(rng: np.random.Generator, net: Network,
                    max_vars: int | None = None) -> dict[str, str]:
    ids = [v.id for v in net.variables]
    limit = len(ids) if max_vars is None else min(max_vars, len(ids))
    n = int(rng.integers(0, limit + 1))
    chosen = rng.choice(ids, size=n, replace=False) if n else []
    return {v: ("true" if rng.random() < 0.5 else "false") for v in chosen}


@pytest.fixture(scope="session")
def sample_model():
    return data.sample_model()


@pytest.fixture(scope="session")
def sample_compiled(sample_model):
    return compile_model(sample_model)


@pytest.fixture(scope="session")
def sample_records(sample_model, sample_compiled) -> RecordSet:
    return records_to_assignments(sample_model, sample_compiled, data.sample_citations())


@pytest.fixture(scope="session")
def trained_network(sample_compiled, sample_records):
    config = LearnConfig(frozen_variables=sample_compiled.frozen_variables,
                         seed=FIXTURE_SEED, **FIXTURE_CONFIG)
    start = initialize_parameters(
        sample_compiled.network, seed=FIXTURE_SEED,
        frozen=sample_compiled.frozen_variables,
    )
    result = em_learn(start, sample_records, config)
    return result.network


@pytest.fixture(scope="session")
def trained_version(sample_model, trained_network, sample_records) -> ModelVersion:
    return ModelVersion(
        id="v-fixture",
        parent_id=None,
        model=sample_model,
        network=trained_network,
        record_set_id="rs-fixture",
        record_fingerprint=sample_records.fingerprint(),
        learn_meta={"trained": True},
        created_at="2016-03-14T00:00:00+00:00",
    )
