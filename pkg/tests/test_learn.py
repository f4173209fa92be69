import numpy as np
import pytest

from conftest import random_network
from dcaw.bn.network import Cpt, Network, NoisyOrCpd, Variable
from dcaw.errors import IncompleteRecordError, InvalidNetworkError, InvalidRecordError
from dcaw.learn import (
    LearnConfig,
    RecordSet,
    em_learn,
    initialize_parameters,
    ml_counting,
    read_records_csv,
    write_records_csv,
)


def coin(p_true: float = 0.5) -> Network:
    return Network(
        (Variable("coin"),),
        (Cpt("coin", (), np.array([[1 - p_true, p_true]])),),
    )


def chain() -> Network:
    return Network(
        (Variable("A"), Variable("B")),
        (
            Cpt("A", (), np.array([[0.5, 0.5]])),
            Cpt("B", ("A",), np.array([[0.5, 0.5], [0.5, 0.5]])),
        ),
    )


def random_records(rng, net: Network, n: int, missing_rate: float) -> RecordSet:
    rows = []
    for _ in range(n):
        row = {}
        for v in net.variables:
            if rng.random() >= missing_rate:
                row[v.id] = v.states[int(rng.integers(0, v.card))]
        rows.append(row)
    return RecordSet(tuple(rows))


class TestRecordSet:
    def test_csv_round_trip_with_provenance(self):
        rs = RecordSet(
            ({"A": "true", "B": "false"}, {"A": "false"}, {}),
            ("cross-company", "within-company", "synthetic"),
        )
        text = write_records_csv(rs, ["A", "B"], include_provenance=True)
        back = read_records_csv(text)
        assert back.records == rs.records
        assert back.provenance == rs.provenance

    def test_missing_cells_are_absent_keys(self):
        back = read_records_csv("A,B\ntrue,\n,false\n")
        assert back.records == ({"A": "true"}, {"B": "false"})

    def test_bad_provenance_rejected(self):
        with pytest.raises(InvalidRecordError):
            RecordSet(({"A": "true"},), ("elsewhere",))

    def test_validate_against_rejects_unknown_state(self):
        rs = RecordSet(({"coin": "heads"},))
        with pytest.raises(InvalidRecordError):
            rs.validate_against(coin())

    def test_fingerprint_changes_with_content(self):
        a = RecordSet(({"A": "true"},))
        b = RecordSet(({"A": "false"},))
        assert a.fingerprint() != b.fingerprint()
        assert a.fingerprint() == RecordSet(({"A": "true"},)).fingerprint()


class TestMlCounting:
    def test_root_counting(self):
        rs = RecordSet(({"coin": "true"},) * 3 + ({"coin": "false"},))
        net = ml_counting(coin(), rs, 0.0)
        assert np.allclose(net.cpd_by_child["coin"].rows, [[0.25, 0.75]])

    def test_pure_smoothing_for_uncovered_row(self):
        rs = RecordSet(({"A": "true", "B": "true"},))
        net = ml_counting(chain(), rs, 1.0)
        # parent configuration A=false never occurs: smoothing alone
        assert np.allclose(net.cpd_by_child["B"].rows[0], [0.5, 0.5])

    def test_conditional_counting(self):
        rs = RecordSet(
            ({"A": "true", "B": "true"},) * 3 + ({"A": "true", "B": "false"},)
            + ({"A": "false", "B": "false"},)
        )
        net = ml_counting(chain(), rs, 0.0)
        assert net.cpd_by_child["B"].rows[1, 1] == pytest.approx(0.75)

    def test_incomplete_record_rejected(self):
        with pytest.raises(IncompleteRecordError):
            ml_counting(chain(), RecordSet(({"A": "true"},)), 0.0)

    def test_noisy_or_structure_rejected(self):
        net = Network(
            (Variable("A"), Variable("B")),
            (
                Cpt("A", (), np.array([[0.5, 0.5]])),
                NoisyOrCpd("B", ("A",), (0.5,), 0.0),
            ),
        )
        with pytest.raises(InvalidNetworkError):
            ml_counting(net, RecordSet(({"A": "true", "B": "true"},)), 0.0)


class TestEmLearn:
    def test_coin_fixed_point(self):
        rs = RecordSet(({"coin": "true"}, {"coin": "true"}, {"coin": "false"}, {}))
        result = em_learn(coin(0.5), rs, LearnConfig(pseudo_count=0.0, tolerance=1e-12))
        assert result.converged
        assert result.network.cpd_by_child["coin"].rows[0, 1] == pytest.approx(2 / 3, abs=1e-6)

    def test_complete_data_equals_ml_counting(self):
        rs = RecordSet(
            ({"A": "true", "B": "true"},) * 3
            + ({"A": "false", "B": "false"}, {"A": "true", "B": "false"})
        )
        for alpha in (0.0, 1.0):
            ml = ml_counting(chain(), rs, alpha)
            em = em_learn(chain(), rs, LearnConfig(pseudo_count=alpha))
            for v in ("A", "B"):
                assert np.max(np.abs(
                    ml.cpd_by_child[v].rows - em.network.cpd_by_child[v].rows
                )) < 1e-9

    def test_all_missing_records_keep_parameters(self):
        net = Network(
            (Variable("A"), Variable("B")),
            (
                Cpt("A", (), np.array([[0.3, 0.7]])),
                Cpt("B", ("A",), np.array([[0.8, 0.2], [0.1, 0.9]])),
            ),
        )
        result = em_learn(net, RecordSet(({}, {}, {})), LearnConfig(pseudo_count=0.0))
        assert result.converged
        assert result.iterations == 1
        assert np.allclose(result.network.cpd_by_child["A"].rows, [[0.3, 0.7]])
        assert np.allclose(result.network.cpd_by_child["B"].rows, [[0.8, 0.2], [0.1, 0.9]])

    def test_deterministic_given_inputs(self):
        rng = np.random.default_rng(3)
        net = random_network(rng, n_max=5)
        rs = random_records(rng, net, 12, missing_rate=0.3)
        config = LearnConfig(max_iterations=20, seed=11)
        a = em_learn(net, rs, config)
        b = em_learn(net, rs, config)
        assert a.loglik_trace == b.loglik_trace
        for ca, cb in zip(a.network.cpds, b.network.cpds):
            assert np.array_equal(ca.rows, cb.rows)

    def test_monotone_objective_fuzz(self):
        rng = np.random.default_rng(20160314)
        cases = 0
        while cases < 50:
            net = random_network(rng, n_max=5, allow_noisy_or=(cases % 3 == 0))
            rs = random_records(rng, net, int(rng.integers(3, 15)),
                                missing_rate=float(rng.uniform(0.1, 0.6)))
            alpha = float(rng.choice([0.0, 0.5, 1.0]))
            start = initialize_parameters(net, seed=int(rng.integers(0, 1000)))
            result = em_learn(start, rs, LearnConfig(
                max_iterations=15, tolerance=1e-9, pseudo_count=alpha))
            trace = result.loglik_trace
            assert all(b >= a - 1e-9 for a, b in zip(trace, trace[1:])), trace
            cases += 1

    def test_smoothed_probabilities_never_hit_bounds(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            net = random_network(rng, n_max=4)
            rs = random_records(rng, net, 6, missing_rate=0.4)
            result = em_learn(net, rs, LearnConfig(max_iterations=10, pseudo_count=1.0))
            for cpd in result.network.cpds:
                assert np.all(cpd.rows > 0.0)
                assert np.all(cpd.rows < 1.0)

    def test_frozen_variables_untouched(self):
        net = Network(
            (Variable("A"), Variable("B")),
            (
                Cpt("A", (), np.array([[0.3, 0.7]])),
                NoisyOrCpd("B", ("A",), (1.0,), 0.0),
            ),
        )
        rs = RecordSet(({"A": "true", "B": "true"}, {"A": "false", "B": "false"}))
        result = em_learn(net, rs, LearnConfig(frozen_variables=frozenset({"B"})))
        frozen = result.network.cpd_by_child["B"]
        assert frozen.link_probs == (1.0,)
        assert frozen.leak == 0.0

    def test_noisy_or_refit_recovers_parameters(self):
        rng = np.random.default_rng(0)
        truth = Network(
            (Variable("x1"), Variable("x2"), Variable("y")),
            (
                Cpt("x1", (), np.array([[0.5, 0.5]])),
                Cpt("x2", (), np.array([[0.4, 0.6]])),
                NoisyOrCpd("y", ("x1", "x2"), (0.8, 0.3), 0.05),
            ),
        )
        rows = []
        for _ in range(500):
            x1 = rng.random() < 0.5
            x2 = rng.random() < 0.6
            p = 1 - 0.95 * (0.2 if x1 else 1.0) * (0.7 if x2 else 1.0)
            rows.append({
                "x1": "true" if x1 else "false",
                "x2": "true" if x2 else "false",
                "y": "true" if rng.random() < p else "false",
            })
        start = initialize_parameters(truth, seed=3)
        result = em_learn(start, RecordSet(tuple(rows)),
                          LearnConfig(pseudo_count=0.0, max_iterations=60))
        learned = result.network.cpd_by_child["y"]
        assert learned.link_probs[0] == pytest.approx(0.8, abs=0.1)
        assert learned.link_probs[1] == pytest.approx(0.3, abs=0.1)


class TestInitialization:
    def test_same_seed_identical(self):
        net = chain()
        a = initialize_parameters(net, 42)
        b = initialize_parameters(net, 42)
        for ca, cb in zip(a.cpds, b.cpds):
            assert np.array_equal(ca.rows, cb.rows)

    def test_different_seeds_differ(self):
        net = chain()
        a = initialize_parameters(net, 1)
        b = initialize_parameters(net, 2)
        assert not np.array_equal(a.cpd_by_child["B"].rows, b.cpd_by_child["B"].rows)

    def test_rows_normalized(self):
        rng = np.random.default_rng(12)
        net = random_network(rng, n_max=6, allow_noisy_or=True)
        init = initialize_parameters(net, 5)
        for cpd in init.cpds:
            if isinstance(cpd, NoisyOrCpd):
                assert all(0.05 <= p <= 0.95 for p in cpd.link_probs)
            else:
                assert np.allclose(cpd.rows.sum(axis=1), 1.0, atol=1e-12)
