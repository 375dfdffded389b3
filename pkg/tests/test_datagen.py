"""Synthetic cohort generator, split protocols and CSV schema tests."""

import numpy as np
import pytest

from cbfl import datagen
from cbfl.datagen import CohortCsvError, GeneratorConfig


@pytest.fixture(scope="module")
def small_cohort():
    cfg = GeneratorConfig(
        n_hospitals=6, patients_per_hospital=50, n_latent_groups=3, n_features=48, seed=11
    )
    return datagen.generate_cohort(cfg)


class TestDefaultScale:
    def test_default_cohort_size_and_rates(self):
        dataset = datagen.generate_cohort(GeneratorConfig(seed=0))
        assert dataset.n_patients == 28_000
        assert dataset.n_features == 1399
        assert 0.04 <= dataset.mortality.mean() <= 0.06
        prolonged = datagen.label_prolonged_stay(dataset.unit_stay_minutes)
        assert 0.05 <= prolonged.mean() <= 0.07


class TestGeneratorConfig:
    def test_groups_capped_by_hospitals(self):
        with pytest.raises(ValueError, match="n_latent_groups"):
            GeneratorConfig(n_hospitals=3, n_latent_groups=4)

    def test_rates_in_open_interval(self):
        with pytest.raises(ValueError, match="rates"):
            GeneratorConfig(mortality_rate=0.0)


class TestGenerateCohort:
    def test_shapes_and_binary_features(self, small_cohort):
        assert small_cohort.n_patients == 300
        assert small_cohort.n_features == 48
        assert set(np.unique(small_cohort.features)) <= {0, 1}
        assert len(small_cohort.diagnoses) == 300
        assert all(
            tag in datagen.DIAGNOSIS_CATEGORIES
            for tags in small_cohort.diagnoses
            for tag in tags
        )
        assert set(small_cohort.regions) <= set(datagen.REGIONS)

    def test_label_rates_near_targets(self, small_cohort):
        assert abs(small_cohort.mortality.mean() - 0.05) <= 0.01
        prolonged = datagen.label_prolonged_stay(small_cohort.unit_stay_minutes)
        assert abs(prolonged.mean() - 0.06) <= 0.01

    def test_deterministic(self):
        cfg = GeneratorConfig(
            n_hospitals=4, patients_per_hospital=30, n_latent_groups=2, n_features=32, seed=3
        )
        assert datagen.cohorts_equal(datagen.generate_cohort(cfg), datagen.generate_cohort(cfg))

    def test_single_group_identical_prevalence_profiles(self):
        cfg = GeneratorConfig(
            n_hospitals=5, patients_per_hospital=10, n_latent_groups=1, n_features=40, seed=7
        )
        profiles = datagen.hospital_prevalence_profiles(cfg)
        for row in profiles[1:]:
            np.testing.assert_array_equal(row, profiles[0])

    def test_within_group_closer_than_cross_group(self):
        cfg = GeneratorConfig(
            n_hospitals=10, patients_per_hospital=10, n_latent_groups=3, n_features=90, seed=5
        )
        groups, _ = datagen.latent_group_profiles(cfg)
        profiles = datagen.hospital_prevalence_profiles(cfg)
        l1 = np.abs(profiles[:, None, :] - profiles[None, :, :]).sum(axis=2)
        same = groups[:, None] == groups[None, :]
        off_diag = ~np.eye(len(groups), dtype=bool)
        max_within = l1[same & off_diag].max()
        min_cross = l1[~same].min()
        assert max_within < min_cross

    def test_region_consistent_per_hospital(self, small_cohort):
        for hospital in small_cohort.hospital_list():
            idx = small_cohort.indices_of_hospital(int(hospital))
            assert len(set(small_cohort.regions[idx])) == 1


class TestSplits:
    def test_within_hospital_sizes_and_disjointness(self, small_cohort):
        train, test = datagen.split_within_hospital(small_cohort, train_per=30, test_per=15, seed=2)
        assert train.n_patients == 6 * 30
        assert test.n_patients == 6 * 15
        assert set(train.patient_ids) & set(test.patient_ids) == set()
        assert set(train.hospital_ids) == set(test.hospital_ids) == set(small_cohort.hospital_ids)

    def test_within_hospital_too_small_names_hospital(self, small_cohort):
        with pytest.raises(ValueError, match="hospital 0"):
            datagen.split_within_hospital(small_cohort, train_per=45, test_per=10, seed=0)

    def test_by_hospital_partition(self, small_cohort):
        train, test = datagen.split_by_hospital(small_cohort, n_train_hospitals=4, seed=9)
        train_h = set(train.hospital_ids)
        test_h = set(test.hospital_ids)
        assert len(train_h) == 4 and len(test_h) == 2
        assert train_h & test_h == set()
        assert train.n_patients + test.n_patients == small_cohort.n_patients
        assert set(train.patient_ids) | set(test.patient_ids) == set(small_cohort.patient_ids)

    def test_by_hospital_bad_count(self, small_cohort):
        with pytest.raises(ValueError, match="n_train_hospitals"):
            datagen.split_by_hospital(small_cohort, n_train_hospitals=6, seed=0)

    def test_split_deterministic(self, small_cohort):
        a_train, a_test = datagen.split_within_hospital(small_cohort, 20, 10, seed=4)
        b_train, b_test = datagen.split_within_hospital(small_cohort, 20, 10, seed=4)
        assert datagen.cohorts_equal(a_train, b_train)
        assert datagen.cohorts_equal(a_test, b_test)


class TestProlongedStay:
    def test_boundary_inclusive(self):
        assert datagen.label_prolonged_stay(11_520) == 1

    def test_just_below_boundary(self):
        assert datagen.label_prolonged_stay(11_519) == 0

    def test_cohort_average_stay_not_prolonged(self):
        assert datagen.label_prolonged_stay(3_858) == 0

    def test_negative_rejected(self):
        with pytest.raises(ValueError, match=">= 0"):
            datagen.label_prolonged_stay(-1)

    def test_array_form(self):
        out = datagen.label_prolonged_stay(np.array([0.0, 11_519.9, 11_520.0, 99_999.0]))
        np.testing.assert_array_equal(out, [0, 0, 1, 1])


class TestTaskLabels:
    def test_mortality_passthrough(self, small_cohort):
        np.testing.assert_array_equal(
            datagen.task_labels(small_cohort, "mortality"), small_cohort.mortality
        )

    def test_stay_time_thresholded(self, small_cohort):
        np.testing.assert_array_equal(
            datagen.task_labels(small_cohort, "stay_time"),
            datagen.label_prolonged_stay(small_cohort.unit_stay_minutes),
        )

    def test_unknown_task(self, small_cohort):
        with pytest.raises(ValueError, match="unknown task"):
            datagen.task_labels(small_cohort, "readmission")


class TestCohortCsv:
    def test_round_trip(self, small_cohort, tmp_path):
        path = tmp_path / "cohort.csv"
        datagen.save_cohort_csv(small_cohort, path)
        loaded = datagen.load_cohort_csv(path)
        assert datagen.cohorts_equal(small_cohort, loaded)

    def test_line_count(self, small_cohort, tmp_path):
        path = tmp_path / "cohort.csv"
        datagen.save_cohort_csv(small_cohort, path)
        lines = path.read_text().splitlines()
        assert len(lines) == small_cohort.n_patients + 1

    def test_same_seed_same_bytes(self, tmp_path):
        cfg = GeneratorConfig(
            n_hospitals=3, patients_per_hospital=12, n_latent_groups=2, n_features=24, seed=8
        )
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        datagen.save_cohort_csv(datagen.generate_cohort(cfg), p1)
        datagen.save_cohort_csv(datagen.generate_cohort(cfg), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_non_binary_feature_reports_row(self, small_cohort, tmp_path):
        path = tmp_path / "cohort.csv"
        datagen.save_cohort_csv(small_cohort, path)
        lines = path.read_text().splitlines()
        lines[3] = lines[3][:-1] + "2"  # corrupt last feature of row 3
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(CohortCsvError, match="row 4.*non-binary"):
            datagen.load_cohort_csv(path)

    def test_missing_hospital_column_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("patient_id,region,mortality,unit_stay_minutes,diagnoses,f0\n")
        with pytest.raises(CohortCsvError, match="header"):
            datagen.load_cohort_csv(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(CohortCsvError, match="empty"):
            datagen.load_cohort_csv(path)

    def test_bad_mortality_reports_row(self, small_cohort, tmp_path):
        path = tmp_path / "cohort.csv"
        datagen.save_cohort_csv(small_cohort, path)
        lines = path.read_text().splitlines()
        fields = lines[1].split(",")
        fields[3] = "2"
        lines[1] = ",".join(fields)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(CohortCsvError, match="row 2"):
            datagen.load_cohort_csv(path)

    def test_ragged_row_rejected(self, small_cohort, tmp_path):
        path = tmp_path / "cohort.csv"
        datagen.save_cohort_csv(small_cohort, path)
        lines = path.read_text().splitlines()
        lines[2] = lines[2] + ",1"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(CohortCsvError, match="row 3"):
            datagen.load_cohort_csv(path)
