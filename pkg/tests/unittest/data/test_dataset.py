import numpy as np
import pytest

from clinrisk.data.dataset import BinarizationMap, DatasetError, LabeledDataset


def make_dataset(observed, true=None, split="train"):
    n = len(observed)
    return LabeledDataset(
        features=np.arange(2 * n, dtype=float).reshape(n, 2),
        observed_labels=observed,
        true_labels=true,
        split_tag=split,
    )


class TestLabeledDataset:
    def test_flip_mask_computed(self):
        ds = make_dataset([0, 1, 1, 0], true=[0, 0, 1, 1])
        assert ds.flip_mask.tolist() == [False, True, False, True]
        assert ds.has_ground_truth

    def test_no_ground_truth(self):
        ds = make_dataset([0, 1])
        assert ds.true_labels is None
        assert ds.flip_mask is None
        assert not ds.has_ground_truth

    def test_inconsistent_flip_mask(self):
        with pytest.raises(DatasetError, match="flip_mask"):
            LabeledDataset(
                features=np.zeros((2, 1)),
                observed_labels=[0, 1],
                true_labels=[0, 1],
                flip_mask=[True, False],
            )

    def test_flip_mask_without_truth(self):
        with pytest.raises(DatasetError):
            LabeledDataset(np.zeros((2, 1)), [0, 1], flip_mask=[False, False])

    @pytest.mark.parametrize("split", ["val", "test"])
    def test_eval_splits_clean(self, split):
        with pytest.raises(DatasetError, match="clean"):
            make_dataset([0, 1], true=[1, 1], split=split)

    def test_row_mismatch(self):
        with pytest.raises(DatasetError, match="feature rows"):
            LabeledDataset(np.zeros((3, 2)), [0, 1])

    def test_non_binary(self):
        with pytest.raises(DatasetError, match="binary"):
            make_dataset([0, 2])

    def test_unknown_split(self):
        with pytest.raises(DatasetError):
            make_dataset([0, 1], split="holdout")

    def test_read_only(self):
        ds = make_dataset([0, 1])
        with pytest.raises(ValueError):
            ds.features[0, 0] = 5.0

    def test_counts(self):
        ds = make_dataset([0, 1, 1, 1])
        assert ds.class_counts() == (1, 3)
        assert ds.positive_fraction == 0.75
        assert ds.n_samples == 4
        assert ds.n_features == 2
        assert ds.feature_names == ("x0", "x1")

    @pytest.mark.parametrize("labels", [[0, 0, 0], [1, 1]])
    def test_require_both_classes(self, labels):
        with pytest.raises(DatasetError, match="single class"):
            make_dataset(labels).require_both_classes()

    def test_equality_and_fingerprint(self):
        a = make_dataset([0, 1, 0], true=[0, 1, 1])
        b = make_dataset([0, 1, 0], true=[0, 1, 1])
        c = make_dataset([0, 1, 0])
        assert a == b
        assert a.fingerprint() == b.fingerprint()
        assert a != c
        assert a.fingerprint() != c.fingerprint()

    def test_with_split(self):
        ds = make_dataset([0, 1]).with_split("test")
        assert ds.split_tag == "test"


class TestBinarizationMap:
    def test_apply(self):
        mapping = BinarizationMap({"mel": 1, "bcc": 1, "nv": 0})
        assert mapping.apply(["mel", "nv", "bcc", "nv"]).tolist() == [1, 0, 1, 0]

    def test_unmapped_value(self):
        mapping = BinarizationMap({"mel": 1, "nv": 0})
        with pytest.raises(DatasetError, match="'akiec'.*row 1"):
            mapping.apply(["mel", "akiec"])

    def test_integer_keys_match_text(self):
        mapping = BinarizationMap({3: 1, 4: 0})
        assert mapping.apply(["3", "4", 3]).tolist() == [1, 0, 1]

    @pytest.mark.parametrize("mapping", [{"a": 1, "b": 1}, {"a": 0}, {"a": 2, "b": 0}])
    def test_invalid(self, mapping):
        with pytest.raises(DatasetError):
            BinarizationMap(mapping)

    def test_derma(self):
        mapping = BinarizationMap.derma()
        assert mapping.apply(["mel", "bcc", "akiec", "nv", "bkl"]).tolist() == [1, 1, 1, 0, 0]
