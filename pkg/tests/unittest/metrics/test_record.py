import numpy as np
import pytest
from pytest import approx

from clinrisk.metrics.confusion import ConfusionCounts
from clinrisk.metrics.record import MetricsRecord, evaluate
from clinrisk.metrics.risk import RiskScenario


class TestEvaluate:
    def test_values(self):
        scores = np.array([0.9, 0.4, 0.6, 0.2])
        labels = np.array([1, 1, 0, 0])
        record = evaluate(scores, labels)
        assert record.counts == ConfusionCounts(tp=1, fp=1, tn=1, fn=1)
        assert record.bac == 0.5
        assert record.auc == approx(0.75)
        assert record.ppr == 0.5
        assert record.risks == {"risk_I": approx(0.5), "risk_II": approx(21 / 4)}

    def test_threshold_inclusive(self):
        record = evaluate(np.array([0.5, 0.49]), np.array([1, 0]))
        assert record.counts.tp == 1
        assert record.counts.tn == 1

    def test_extra_scenario(self):
        record = evaluate(
            np.array([0.9, 0.1]), np.array([0, 1]), scenarios=[RiskScenario("triage", 5.0, 2.0)]
        )
        assert record.risks == {"triage": approx(3.5)}

    def test_single_class_auc_undefined(self):
        record = evaluate(np.array([0.9, 0.2]), np.array([1, 1]))
        assert record.auc is None
        assert record.specificity is None
        assert record.bac is None


class TestMetricsRecord:
    def test_keys(self):
        record = evaluate(np.array([0.9, 0.4, 0.6, 0.2]), np.array([1, 1, 0, 0]))
        assert list(record.to_dict()) == [
            "sensitivity",
            "specificity",
            "bac",
            "f1",
            "auc",
            "risk_I",
            "risk_II",
            "ppr",
            "tp",
            "fp",
            "tn",
            "fn",
            "n",
        ]

    def test_from_dict(self):
        record = evaluate(np.array([0.9, 0.4, 0.6, 0.2, 0.7]), np.array([1, 1, 0, 0, 1]))
        assert MetricsRecord.from_dict(record.to_dict()) == record

    def test_from_dict_missing(self):
        data = evaluate(np.array([0.9, 0.2]), np.array([1, 0])).to_dict()
        del data["auc"]
        with pytest.raises(KeyError):
            MetricsRecord.from_dict(data)

    def test_from_dict_inconsistent_n(self):
        data = evaluate(np.array([0.9, 0.2]), np.array([1, 0])).to_dict()
        data["n"] = 3
        with pytest.raises(ValueError):
            MetricsRecord.from_dict(data)

    def test_bac_identity_enforced(self):
        with pytest.raises(ValueError):
            MetricsRecord(
                counts=ConfusionCounts(1, 1, 1, 1),
                sensitivity=0.5,
                specificity=0.5,
                bac=0.6,
                f1=0.5,
                auc=0.5,
                ppr=0.5,
            )

    def test_rate_range(self):
        with pytest.raises(ValueError):
            MetricsRecord(
                counts=ConfusionCounts(1, 1, 1, 1),
                sensitivity=1.5,
                specificity=0.5,
                bac=1.0,
                f1=0.5,
                auc=0.5,
                ppr=0.5,
            )
