"""End-to-end runs, manifests, determinism, and sweep grids."""

import numpy as np
import pytest

from specens.dataset import CorruptionSpec, Dataset, save_csv
from specens.errors import ConfigError, StageError
from specens.harness import (
    RunConfig,
    member_seed,
    run,
    run_baseline,
    run_sweep,
    run_wsce,
    sweep_rows,
    write_sweep_csv,
)


@pytest.fixture(scope="module")
def blob_csv(tmp_path_factory):
    """Two tight, far-apart Gaussian blobs: every method should score 1.0."""
    rng = np.random.default_rng(0)
    points = np.vstack([rng.normal(0.0, 0.3, (12, 2)), rng.normal(9.0, 0.3, (12, 2))])
    labels = np.repeat([0, 1], 12)
    path = tmp_path_factory.mktemp("blobs") / "blobs.csv"
    save_csv(Dataset(points, labels, name="blobs"), path)
    return path


@pytest.fixture(scope="module")
def subspace_csv(tmp_path_factory):
    """100 features, but only the first 5 separate the two clusters."""
    rng = np.random.default_rng(42)
    n_half, m, informative = 30, 100, 5
    centers = np.zeros((2, m))
    centers[0, :informative] = -3.0
    centers[1, :informative] = 3.0
    points = np.vstack([
        centers[0] + rng.normal(0.0, 1.0, (n_half, m)),
        centers[1] + rng.normal(0.0, 1.0, (n_half, m)),
    ])
    labels = np.repeat([0, 1], n_half)
    path = tmp_path_factory.mktemp("subspace") / "subspace.csv"
    save_csv(Dataset(points, labels, name="subspace"), path)
    return path


def blob_config(blob_csv, **overrides):
    base = dict(data_path=str(blob_csv), label_column="label", ensemble_size=6, repeats=2, seed=0)
    base.update(overrides)
    return RunConfig(**base)


class TestRun:
    def test_blobs_solved_perfectly(self, blob_csv):
        manifest = run(blob_config(blob_csv))
        assert manifest.accuracy_mean == 1.0
        assert manifest.accuracy_std == 0.0
        assert (manifest.n, manifest.m, manifest.k) == (24, 2, 2)

    def test_two_point_dataset_forced_singletons(self, tmp_path):
        path = tmp_path / "pair.csv"
        save_csv(Dataset(np.array([[0.0, 0.0], [1.0, 1.0]]), [0, 1], name="pair"), path)
        manifest = run(RunConfig(data_path=str(path), label_column="label", ensemble_size=3, repeats=1))
        assert manifest.accuracy_mean == 1.0
        assert sorted(manifest.final_assignments[0]) == [0, 1]

    def test_manifest_structure(self, blob_csv):
        manifest = run(blob_config(blob_csv))
        assert manifest.method == "wsce"
        assert manifest.dataset_name == "blobs"
        assert len(manifest.members) == 2
        assert len(manifest.final_assignments) == 2
        assert all(len(rep) == 6 for rep in manifest.members)
        assert all(len(assign) == 24 for assign in manifest.final_assignments)
        assert set(manifest.timing) >= {"load", "normalize", "map", "distance", "similarity", "ensemble"}

    def test_member_widths_cycle_and_seeds_derive(self, blob_csv):
        manifest = run(blob_config(blob_csv))
        widths = [entry["l"] for entry in manifest.members[0]]
        assert widths == [2, 3, 4, 2, 3, 4]
        for rep, rep_members in enumerate(manifest.members):
            for idx, entry in enumerate(rep_members):
                assert entry["seed"] == member_seed(0, rep, idx)

    def test_member_weights_recorded_in_range(self, blob_csv):
        manifest = run(blob_config(blob_csv))
        scores = [entry["nm"] for rep in manifest.members for entry in rep]
        assert all(0.0 <= s <= 1.0 for s in scores)

    def test_single_modular_fingerprint(self, blob_csv):
        manifest = run(blob_config(blob_csv))
        assert len(manifest.m_fingerprints) == 2
        assert len(set(manifest.m_fingerprints)) == 1

    def test_aggregates_match_per_repeat_values(self, blob_csv):
        manifest = run(blob_config(blob_csv))
        assert abs(manifest.accuracy_mean - np.mean(manifest.accuracies)) < 1e-12
        assert abs(manifest.accuracy_std - np.std(manifest.accuracies)) < 1e-12

    def test_byte_identical_manifests(self, blob_csv):
        a = run(blob_config(blob_csv))
        b = run(blob_config(blob_csv))
        assert a.to_json(include_timing=False) == b.to_json(include_timing=False)
        assert a.to_json(include_timing=False).startswith("{")

    def test_spectral_method_runs_single_member(self, blob_csv):
        manifest = run(blob_config(blob_csv, method="spectral"))
        assert manifest.accuracy_mean == 1.0
        assert all(len(rep) == 1 for rep in manifest.members)
        assert all("nm" not in entry for rep in manifest.members for entry in rep)
        assert "consensus" not in manifest.timing

    def test_eac_method(self, blob_csv):
        manifest = run(blob_config(blob_csv, method="eac_spectral"))
        assert manifest.accuracy_mean == 1.0

    def test_corruption_recorded_and_applied(self, blob_csv):
        spec = CorruptionSpec("noise", 0.1, seed=5)
        manifest = run(blob_config(blob_csv, corruption=spec))
        assert manifest.config["corruption"] == {"kind": "noise", "rate": 0.1, "seed": 5}
        assert "corrupt" in manifest.timing

    def test_unlabeled_data_needs_k(self, tmp_path):
        rng = np.random.default_rng(1)
        path = tmp_path / "plain.csv"
        save_csv(Dataset(rng.normal(size=(20, 2))), path)
        with pytest.raises(ConfigError, match="k not given"):
            run(RunConfig(data_path=str(path), ensemble_size=4, repeats=1))
        manifest = run(RunConfig(data_path=str(path), k=2, ensemble_size=4, repeats=1))
        assert manifest.accuracies is None
        assert manifest.accuracy_mean is None

    def test_dump_intermediates(self, blob_csv, tmp_path):
        dump = tmp_path / "inner"
        run(blob_config(blob_csv, corruption=CorruptionSpec("missing", 0.2, seed=1)), dump_dir=dump)
        for name in ("similarity.csv", "coassociation.csv", "dendrogram.csv", "mask.csv"):
            assert (dump / name).exists(), name

    def test_wrappers(self, blob_csv):
        assert run_wsce(blob_config(blob_csv, method="spectral")).method == "wsce"
        assert run_baseline(blob_config(blob_csv, method="spectral")).method == "spectral"
        with pytest.raises(ConfigError, match="baseline"):
            run_baseline(blob_config(blob_csv, method="wsce"))


class TestRunValidation:
    def test_method_name(self, blob_csv):
        with pytest.raises(ConfigError, match="method"):
            run(blob_config(blob_csv, method="kmeans"))

    def test_repeats_positive(self, blob_csv):
        with pytest.raises(ConfigError, match="repeats"):
            run(blob_config(blob_csv, repeats=0))

    def test_ensemble_size_needs_headroom(self, blob_csv):
        with pytest.raises(ConfigError, match=r"below k\+1"):
            run(blob_config(blob_csv, ensemble_size=2))

    def test_exactly_one_source(self, blob_csv):
        with pytest.raises(ConfigError, match="exactly one"):
            run(blob_config(blob_csv, synth="half_ring"))
        with pytest.raises(ConfigError, match="exactly one"):
            run(RunConfig())

    def test_unknown_synth_kind(self):
        with pytest.raises(ConfigError, match="unknown synthetic"):
            run(RunConfig(synth="spiral"))

    def test_k_bounds(self, blob_csv):
        with pytest.raises(ConfigError, match="k=1"):
            run(blob_config(blob_csv, k=1))

    def test_d_frac_domain(self, blob_csv):
        with pytest.raises(StageError, match="d_frac"):
            run(blob_config(blob_csv, d_frac=1.5))

    def test_stage_tagging(self, tmp_path):
        cfg = RunConfig(data_path=str(tmp_path / "nope.csv"), k=2)
        with pytest.raises(StageError, match="stage 'load'"):
            run(cfg)


class TestSweep:
    def test_rate_zero_matches_plain_run(self, blob_csv):
        base = blob_config(blob_csv)
        plain = run(base)
        cells = run_sweep(base, "missing", [0.0])
        assert len(cells) == 1
        swept = cells[0].manifest
        assert swept.accuracies == plain.accuracies
        assert swept.final_assignments == plain.final_assignments

    def test_grid_shape_and_order(self, blob_csv):
        cells = run_sweep(blob_config(blob_csv, repeats=1), "missing", [0.0, 0.1, 0.2, 0.3], methods=["wsce", "spectral"])
        assert [(c.value, c.method) for c in cells] == [
            (v, m) for v in (0.0, 0.1, 0.2, 0.3) for m in ("wsce", "spectral")
        ]
        assert all(c.error is None for c in cells)

    def test_csv_output(self, blob_csv, tmp_path):
        cells = run_sweep(blob_config(blob_csv, repeats=1), "noise", [0.0, 0.5], methods=["wsce", "spectral"])
        path = tmp_path / "sweep.csv"
        write_sweep_csv(cells, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "value,method,mean_accuracy,std_accuracy"
        assert len(lines) == 5
        first = lines[1].split(",")
        assert first[:2] == ["0.0", "wsce"]
        assert 0.0 <= float(first[2]) <= 1.0

    def test_failed_cell_recorded(self, blob_csv):
        cells = run_sweep(blob_config(blob_csv, repeats=1), "d_frac", [0.0, 1.0])
        assert cells[0].manifest is None
        assert "d_frac" in cells[0].error
        assert cells[1].error is None
        rows = sweep_rows(cells)
        assert np.isnan(rows[0][2])
        assert rows[1][2] == 1.0

    def test_informative_subspace_beats_or_matches_full_space(self, subspace_csv):
        base = RunConfig(data_path=str(subspace_csv), label_column="label", repeats=2, seed=0)
        cells = run_sweep(base, "d_frac", [0.05, 1.0])
        by_value = {cell.value: cell.manifest.accuracy_mean for cell in cells}
        assert by_value[0.05] >= 0.95
        assert by_value[0.05] >= by_value[1.0] - 0.05

    def test_corruption_seed_shared_across_cells(self, blob_csv):
        base = blob_config(blob_csv, corruption=CorruptionSpec("missing", 0.5, seed=77))
        cells = run_sweep(base, "missing", [0.1, 0.2])
        for cell in cells:
            assert cell.manifest.config["corruption"]["seed"] == 77

    def test_axis_and_value_validation(self, blob_csv):
        base = blob_config(blob_csv)
        with pytest.raises(ConfigError, match="axis"):
            run_sweep(base, "knn", [1.0])
        with pytest.raises(ConfigError, match="ascending"):
            run_sweep(base, "noise", [0.2, 0.1])
        with pytest.raises(ConfigError, match="at least one value"):
            run_sweep(base, "noise", [])


class TestMemberSeed:
    def test_deterministic_and_distinct(self):
        seeds = {member_seed(0, rep, idx) for rep in range(4) for idx in range(6)}
        assert len(seeds) == 24
        assert member_seed(3, 1, 2) == member_seed(3, 1, 2)
        assert member_seed(3, 1, 2) != member_seed(4, 1, 2)
