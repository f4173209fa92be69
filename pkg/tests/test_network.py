import json

import numpy as np
import pytest

from dcaw.bn.network import (
    Cpt,
    Network,
    NoisyOrCpd,
    Variable,
    expand_noisy_or,
    network_from_json,
    network_to_document,
    network_to_json,
    topological_order,
    validate_network,
)
from dcaw.errors import TooManyParentsError


def chain_ab() -> Network:
    return Network(
        (Variable("A"), Variable("B")),
        (
            Cpt("A", (), np.array([[0.5, 0.5]])),
            Cpt("B", ("A",), np.array([[0.8, 0.2], [0.1, 0.9]])),
        ),
    )


class TestValidation:
    def test_well_formed_chain_has_empty_report(self):
        assert validate_network(chain_ab()).ok

    def test_two_node_cycle(self):
        net = Network(
            (Variable("A"), Variable("B")),
            (
                Cpt("A", ("B",), np.array([[0.5, 0.5], [0.5, 0.5]])),
                Cpt("B", ("A",), np.array([[0.5, 0.5], [0.5, 0.5]])),
            ),
        )
        report = validate_network(net)
        assert "cycle" in report.kinds()

    def test_row_sum_finding_carries_deviation(self):
        net = Network(
            (Variable("A"),),
            (Cpt("A", (), np.array([[0.6, 0.5]])),),
        )
        report = validate_network(net)
        finding = next(f for f in report.findings if f.kind == "row-sum")
        assert finding.variable_id == "A"
        assert finding.deviation == pytest.approx(0.1)

    def test_dangling_parent(self):
        net = Network(
            (Variable("B"),),
            (Cpt("B", ("ghost",), np.array([[0.5, 0.5], [0.5, 0.5]])),),
        )
        assert "dangling-reference" in validate_network(net).kinds()

    def test_wrong_shape(self):
        net = Network(
            (Variable("A"), Variable("B")),
            (
                Cpt("A", (), np.array([[0.5, 0.5]])),
                Cpt("B", ("A",), np.array([[0.5, 0.5]])),
            ),
        )
        assert "shape" in validate_network(net).kinds()

    def test_missing_cpd(self):
        net = Network((Variable("A"),), ())
        assert "missing-cpd" in validate_network(net).kinds()

    def test_duplicate_variable_id(self):
        net = Network(
            (Variable("A"), Variable("A")),
            (Cpt("A", (), np.array([[0.5, 0.5]])),),
        )
        assert "duplicate-id" in validate_network(net).kinds()

    def test_out_of_range_entries(self):
        net = Network(
            (Variable("A"),),
            (Cpt("A", (), np.array([[1.5, -0.5]])),),
        )
        assert "range" in validate_network(net).kinds()

    def test_validation_never_raises_on_garbage(self):
        net = Network(
            (Variable("A"), Variable("A"), Variable("B", states=("x",))),
            (
                Cpt("A", ("B", "B"), np.array([[0.5, 0.5]])),
                Cpt("ghost", (), np.array([[1.0]])),
            ),
        )
        report = validate_network(net)
        assert not report.ok


class TestNoisyOr:
    def test_two_parent_expansion(self):
        cpt = expand_noisy_or(NoisyOrCpd("C", ("A", "B"), (0.8, 0.6), 0.0))
        # rows are row-major over parents: (f,f), (f,t), (t,f), (t,t)
        assert cpt.rows[3, 1] == pytest.approx(1 - 0.2 * 0.4)
        assert cpt.rows[3, 1] == pytest.approx(0.92)

    def test_no_parent_active_no_leak(self):
        cpt = expand_noisy_or(NoisyOrCpd("C", ("A",), (0.7,), 0.0))
        assert cpt.rows[0, 1] == 0.0

    def test_leak_only(self):
        cpt = expand_noisy_or(NoisyOrCpd("C", ("A",), (0.7,), 0.1))
        assert cpt.rows[0, 1] == pytest.approx(0.1)

    def test_too_many_parents(self):
        cpd = NoisyOrCpd("C", tuple(f"p{i}" for i in range(17)), (0.5,) * 17, 0.0)
        with pytest.raises(TooManyParentsError):
            expand_noisy_or(cpd)

    def test_expanded_rows_normalized(self):
        cpt = expand_noisy_or(NoisyOrCpd("C", ("A", "B", "D"), (0.3, 0.5, 0.9), 0.2))
        assert np.allclose(cpt.rows.sum(axis=1), 1.0)


class TestSerialization:
    def test_round_trip_is_identity(self):
        net = Network(
            (Variable("A"), Variable("B"), Variable("C")),
            (
                Cpt("A", (), np.array([[1 / 3, 2 / 3]])),
                Cpt("B", ("A",), np.array([[0.123456789012345, 0.876543210987655],
                                           [0.5, 0.5]])),
                NoisyOrCpd("C", ("A", "B"), (0.25, 1 / 7), 0.05),
            ),
            name="trip",
        )
        text = network_to_json(net)
        parsed = network_from_json(text)
        assert network_to_json(parsed) == text
        assert network_to_document(parsed) == json.loads(text)

    def test_float_precision_12_significant_digits(self):
        net = Network(
            (Variable("A"),),
            (Cpt("A", (), np.array([[1 / 3, 2 / 3]])),),
        )
        doc = network_to_document(net)
        assert doc["cpds"][0]["rows"][0][0] == pytest.approx(1 / 3, abs=1e-12)

    def test_topological_order(self):
        order = topological_order(chain_ab())
        assert order.index("A") < order.index("B")
