import numpy as np
import pytest

from freqaug.metrics import (
    CORRUPTION_CATEGORIES,
    CORRUPTIONS,
    SEVERITIES,
    CorruptionErrorTable,
    DegenerateReferenceError,
    MissingDataError,
    ScoreSet,
    accuracy,
    auroc,
    corruption_error,
    mce,
)

from oracles import brute_auroc


def full_table(fill=0.5):
    return CorruptionErrorTable(
        entries={(name, s): fill for name in CORRUPTIONS for s in SEVERITIES}
    )


class TestCorruptionNames:
    def test_fifteen_names_in_four_categories(self):
        assert len(CORRUPTIONS) == 15
        assert len(set(CORRUPTIONS)) == 15
        sizes = {cat: len(names) for cat, names in CORRUPTION_CATEGORIES.items()}
        assert sizes == {"noise": 3, "blur": 4, "weather": 4, "digital": 4}

    def test_expected_membership(self):
        assert "gaussian_noise" in CORRUPTION_CATEGORIES["noise"]
        assert "zoom_blur" in CORRUPTION_CATEGORIES["blur"]
        assert "brightness" in CORRUPTION_CATEGORIES["weather"]
        assert "jpeg_compression" in CORRUPTION_CATEGORIES["digital"]


class TestErrorTable:
    def test_rejects_unknown_corruption(self):
        with pytest.raises(ValueError):
            CorruptionErrorTable(entries={("rain", 1): 0.5})

    def test_rejects_bad_severity(self):
        with pytest.raises(ValueError):
            CorruptionErrorTable(entries={("fog", 6): 0.5})

    def test_rejects_out_of_range_error(self):
        with pytest.raises(ValueError):
            CorruptionErrorTable(entries={("fog", 1): 1.5})

    def test_missing_severity_raises(self):
        table = CorruptionErrorTable(entries={("fog", s): 0.1 for s in (1, 2, 3)})
        with pytest.raises(MissingDataError):
            table.severity_errors("fog")

    def test_severity_errors_ordered(self):
        table = CorruptionErrorTable(entries={("fog", s): s / 10 for s in SEVERITIES})
        assert table.severity_errors("fog") == [0.1, 0.2, 0.3, 0.4, 0.5]


class TestCorruptionError:
    def test_hand_computed_ratio(self):
        model = CorruptionErrorTable(
            entries={("snow", s): e for s, e in zip(SEVERITIES, (0.2, 0.3, 0.4, 0.5, 0.6))}
        )
        reference = CorruptionErrorTable(
            entries={("snow", s): e for s, e in zip(SEVERITIES, (0.4, 0.5, 0.6, 0.7, 0.8))}
        )
        assert corruption_error(model, reference, "snow") == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_equal_tables_give_exactly_one(self):
        table = full_table(0.37)
        assert corruption_error(table, table, "fog") == 1.0
        assert mce(table, full_table(0.37)) == 1.0

    def test_scales_linearly_with_model_errors(self):
        reference = full_table(0.4)
        model = full_table(0.2)
        assert corruption_error(model, reference, "snow") == pytest.approx(0.5, rel=1e-12)
        assert mce(model, reference) == pytest.approx(0.5, rel=1e-12)

    def test_degenerate_reference_rejected(self):
        model = full_table(0.2)
        reference = full_table(0.2)
        zeroed = dict(reference.entries)
        for s in SEVERITIES:
            zeroed[("fog", s)] = 0.0
        reference = CorruptionErrorTable(entries=zeroed)
        with pytest.raises(DegenerateReferenceError):
            corruption_error(model, reference, "fog")

    def test_unknown_corruption_rejected(self):
        table = full_table()
        with pytest.raises(ValueError):
            corruption_error(table, table, "rain")

    def test_mce_requires_all_corruptions(self):
        complete = full_table(0.5)
        partial = CorruptionErrorTable(
            entries={
                (name, s): 0.5
                for name in CORRUPTIONS
                if name != "pixelate"
                for s in SEVERITIES
            }
        )
        with pytest.raises(MissingDataError):
            mce(partial, complete)

    def test_mce_independent_of_insertion_order(self):
        rng = np.random.default_rng(0)
        values = {(name, s): rng.uniform(0.1, 0.9) for name in CORRUPTIONS for s in SEVERITIES}
        forward = CorruptionErrorTable(entries=dict(values))
        backward = CorruptionErrorTable(entries=dict(reversed(list(values.items()))))
        reference = full_table(0.5)
        assert mce(forward, reference) == mce(backward, reference)

    def test_mce_is_unweighted_mean(self):
        reference = full_table(0.5)
        entries = {(name, s): 0.5 for name in CORRUPTIONS for s in SEVERITIES}
        for s in SEVERITIES:
            entries[("snow", s)] = 1.0  # ratio 2.0 for snow, 1.0 elsewhere
        model = CorruptionErrorTable(entries=entries)
        assert mce(model, reference) == pytest.approx((14 * 1.0 + 2.0) / 15, rel=1e-12)


class TestAccuracy:
    def test_exact_fraction(self):
        assert accuracy([1, 2, 3, 4], [1, 2, 0, 4]) == 0.75

    def test_all_and_none(self):
        assert accuracy([1, 1], [1, 1]) == 1.0
        assert accuracy([0, 0], [1, 1]) == 0.0

    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(ValueError):
            accuracy([], [])
        with pytest.raises(ValueError):
            accuracy([1, 2], [1])


class TestAuroc:
    def test_perfect_separation(self):
        scores = ScoreSet(in_distribution=[0.9, 0.8, 0.7], out_of_distribution=[0.6, 0.5])
        assert auroc(scores) == 1.0

    def test_inverted_separation(self):
        scores = ScoreSet(in_distribution=[0.1, 0.2], out_of_distribution=[0.8, 0.9])
        assert auroc(scores) == 0.0

    def test_all_tied_gives_half(self):
        scores = ScoreSet(in_distribution=[1.0, 1.0], out_of_distribution=[1.0, 1.0, 1.0])
        assert auroc(scores) == 0.5

    def test_mixed_example(self):
        scores = ScoreSet(in_distribution=[0.9, 0.4], out_of_distribution=[0.6, 0.1])
        assert auroc(scores) == 0.75

    def test_matches_brute_force_with_ties(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            n_id = int(rng.integers(1, 40))
            n_ood = int(rng.integers(1, 40))
            id_scores = np.round(rng.normal(size=n_id), 1)
            ood_scores = np.round(rng.normal(size=n_ood), 1)
            scores = ScoreSet(in_distribution=id_scores, out_of_distribution=ood_scores)
            assert abs(auroc(scores) - brute_auroc(id_scores, ood_scores)) <= 1e-12

    def test_invariant_under_monotone_transforms(self):
        rng = np.random.default_rng(2)
        id_scores = rng.normal(size=30)
        ood_scores = rng.normal(size=25)
        base = auroc(ScoreSet(in_distribution=id_scores, out_of_distribution=ood_scores))
        assert (
            auroc(
                ScoreSet(
                    in_distribution=np.exp(id_scores), out_of_distribution=np.exp(ood_scores)
                )
            )
            == base
        )
        assert (
            auroc(
                ScoreSet(
                    in_distribution=3.0 * id_scores + 2.0,
                    out_of_distribution=3.0 * ood_scores + 2.0,
                )
            )
            == base
        )

    def test_rejects_empty_or_nonfinite(self):
        with pytest.raises(ValueError):
            ScoreSet(in_distribution=[], out_of_distribution=[1.0])
        with pytest.raises(ValueError):
            ScoreSet(in_distribution=[np.nan], out_of_distribution=[1.0])
