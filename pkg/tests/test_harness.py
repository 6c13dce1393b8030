"""Sweep runner: cells, intervals, ratios, logistic fits, CSV/JSON."""

import json
import logging
import math

import numpy as np
import pytest

from cliquesim.engine import simulate_counts
from cliquesim.harness import (
    CSV_FIELDS,
    CellStats,
    ImprovementRatio,
    cells_to_csv,
    cells_to_json,
    improvement_ratio,
    logistic_extrapolate,
    read_cells_csv,
    run_cell,
    run_pair,
    wilson_interval,
    write_csv,
    write_json,
)
from cliquesim.lattice import build
from cliquesim.noise import NoiseConfig


def make_cell(distance=9, rate=0.005, decoder="l1", fraction=0.1, cycles=10_000, **kw):
    count = kw.pop("offload_count", round(fraction * cycles))
    lo, hi = wilson_interval(count, cycles)
    base = dict(
        distance=distance,
        rate=rate,
        model="uniform",
        decoder=decoder,
        rounds=1,
        cycles=cycles,
        offload_count=count,
        offload_fraction=fraction,
        ci_low=lo,
        ci_high=hi,
        seed=0,
    )
    base.update(kw)
    return CellStats(**base)


class TestWilson:
    def test_frozen_values(self):
        assert wilson_interval(500, 1000) == (0.4690696003681042, 0.5309303996318958)
        assert wilson_interval(0, 100) == (0.0, 0.03699349820698568)
        assert wilson_interval(100, 100) == (0.9630065017930143, 1.0)

    def test_contains_point_estimate(self):
        for count, n in [(0, 10), (1, 10), (5, 10), (10, 10), (92, 1000), (417, 100000)]:
            lo, hi = wilson_interval(count, n)
            assert 0.0 <= lo <= count / n <= hi <= 1.0

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            wilson_interval(-1, 10)
        with pytest.raises(ValueError):
            wilson_interval(11, 10)


class TestRunCell:
    def test_zero_rate_never_offloads(self):
        lat = build(5)
        cfg = NoiseConfig(model="uniform", rate=0.0, measurement_rounds=1, seed=0)
        for decoder in ("l1", "l2"):
            cell = run_cell(lat, cfg, decoder, 2000)
            assert cell.offload_count == 0
            assert cell.offload_fraction == 0.0
            assert cell.ci_low == 0.0
            assert cell.decoder == decoder

    def test_matches_engine_and_worker_invariant(self):
        lat = build(5)
        cfg = NoiseConfig(model="uniform", rate=0.01, measurement_rounds=1, seed=7)
        direct = simulate_counts(5, cfg, 5000, mode="l1")
        cell = run_cell(lat, cfg, "l1", 5000)
        assert cell.offload_count == direct.l1_offloads
        assert cell == run_cell(lat, cfg, "l1", 5000, workers=3)
        assert cell.cycles == 5000
        assert cell.rounds == 1
        assert cell.seed == 7

    def test_chunk_boundary_equivalence(self):
        # cycles crossing the internal chunk size must agree with one
        # monolithic engine call
        lat = build(3)
        cfg = NoiseConfig(model="uniform", rate=0.02, measurement_rounds=1, seed=3)
        n = (1 << 18) + 777
        cell = run_cell(lat, cfg, "l2", n)
        direct = simulate_counts(3, cfg, n, mode="l2")
        assert cell.offload_count == direct.l2_offloads

    def test_run_pair_shares_samples(self):
        lat = build(7)
        cfg = NoiseConfig(model="dual", rate=0.01, measurement_rounds=2, seed=5)
        c1, c2 = run_pair(lat, cfg, 4000)
        direct = simulate_counts(7, cfg, 4000, mode="both")
        assert (c1.offload_count, c2.offload_count) == (
            direct.l1_offloads,
            direct.l2_offloads,
        )
        assert (c1.decoder, c2.decoder) == ("l1", "l2")
        assert c2.offload_count <= c1.offload_count

    def test_rejects_bad_arguments(self):
        lat = build(3)
        cfg = NoiseConfig(model="uniform", rate=0.01, measurement_rounds=1, seed=0)
        with pytest.raises(ValueError):
            run_cell(lat, cfg, "l3", 100)
        with pytest.raises(ValueError):
            run_cell(lat, cfg, "l1", 0)

    def test_cellstats_invariants(self):
        with pytest.raises(ValueError):
            make_cell(fraction=1.5)
        with pytest.raises(ValueError):
            make_cell(offload_count=20_001, cycles=20_000)


class TestImprovementRatio:
    def test_headline_ratio(self):
        c1 = make_cell(distance=21, decoder="l1", fraction=0.1070)
        c2 = make_cell(distance=21, decoder="l2", fraction=0.0152)
        r = improvement_ratio(c1, c2)
        assert not r.is_lower_bound
        assert round(r.value, 2) == 7.04

    def test_low_rate_ratio(self):
        c1 = make_cell(decoder="l1", fraction=0.0093)
        c2 = make_cell(decoder="l2", fraction=0.0011)
        assert round(improvement_ratio(c1, c2).value, 2) == 8.45

    def test_equal_fractions_give_one(self):
        c1 = make_cell(decoder="l1", fraction=0.03)
        c2 = make_cell(decoder="l2", fraction=0.03)
        assert improvement_ratio(c1, c2).value == 1.0

    def test_zero_l2_reports_lower_bound(self):
        c1 = make_cell(decoder="l1", fraction=0.02, cycles=1000)
        c2 = make_cell(decoder="l2", fraction=0.0, cycles=1000)
        r = improvement_ratio(c1, c2)
        assert r.is_lower_bound
        assert r.value == float(c1.offload_count) == 20.0
        assert str(r) == ">= 20"

    def test_rejects_mismatched_cells(self):
        c1 = make_cell(distance=9, decoder="l1")
        c2 = make_cell(distance=11, decoder="l2")
        with pytest.raises(ValueError):
            improvement_ratio(c1, c2)
        with pytest.raises(ValueError):
            improvement_ratio(make_cell(decoder="l2"), make_cell(decoder="l1"))


def sigmoid(z):
    return 1.0 / (1.0 + math.exp(-z))


class TestLogisticFit:
    def synthetic(self, intercept=-6.0, slope=0.2, distances=(5, 7, 9, 11, 13, 15, 17, 19)):
        cells = []
        for d in distances:
            f = sigmoid(intercept + slope * d)
            cells.append(
                make_cell(distance=d, decoder="l1", fraction=f, cycles=10**7,
                          offload_count=round(f * 10**7))
            )
        return cells

    def test_exact_model_recovery(self):
        fit, preds = logistic_extrapolate(self.synthetic(), predict=(21, 25))
        assert abs(fit.intercept - (-6.0)) < 1e-6
        assert abs(fit.slope - 0.2) < 1e-6
        assert fit.fitted_range == (5, 19)
        assert fit.extrapolated_range == (21, 25)
        assert abs(preds[25] - sigmoid(-1.0)) < 1e-9
        assert max(abs(r) for r in fit.residuals) < 1e-9
        assert fit.excluded == ()

    def test_monotone_fractions_give_positive_slope(self):
        fit, _ = logistic_extrapolate(self.synthetic(slope=0.31))
        assert fit.slope > 0

    def test_degenerate_points_excluded_and_logged(self, caplog):
        cells = self.synthetic(distances=(5, 7, 9, 11))
        cells.append(make_cell(distance=13, decoder="l1", fraction=0.0, cycles=100,
                               offload_count=0))
        cells.append(make_cell(distance=15, decoder="l1", fraction=1.0, cycles=100,
                               offload_count=100))
        with caplog.at_level(logging.WARNING, logger="cliquesim.harness"):
            fit, _ = logistic_extrapolate(cells)
        assert fit.excluded == (13, 15)
        assert fit.fitted_range == (5, 11)
        assert sum("no logit" in rec.message for rec in caplog.records) == 2

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            logistic_extrapolate(self.synthetic(distances=(5, 7)))
        cells = [
            make_cell(distance=5, decoder="l1", fraction=0.0, cycles=10, offload_count=0),
            make_cell(distance=7, decoder="l1", fraction=0.0, cycles=10, offload_count=0),
            make_cell(distance=9, decoder="l1", fraction=0.1),
        ]
        with pytest.raises(ValueError):
            logistic_extrapolate(cells)

    def test_fit_window(self):
        fit, _ = logistic_extrapolate(self.synthetic(), fit_min=9, fit_max=15)
        assert fit.fitted_range == (9, 15)
        assert len(fit.residuals) == 4

    def test_mixed_series_rejected(self):
        cells = self.synthetic(distances=(5, 7, 9))
        cells.append(make_cell(distance=11, decoder="l2", fraction=0.01))
        with pytest.raises(ValueError):
            logistic_extrapolate(cells)
        with pytest.raises(ValueError):
            logistic_extrapolate(self.synthetic(distances=(5, 5, 7)))

    def test_predictions_clamped_to_open_interval(self):
        fit, preds = logistic_extrapolate(self.synthetic(), predict=(10_000,))
        assert 0.0 < preds[10_000] < 1.0


class TestSerialization:
    def cells(self):
        lat = build(3)
        cfg = NoiseConfig(model="uniform", rate=0.02, measurement_rounds=1, seed=11)
        return list(run_pair(lat, cfg, 3000))

    def test_csv_schema_and_round_trip(self, tmp_path):
        cells = self.cells()
        path = tmp_path / "cells.csv"
        write_csv(cells, str(path))
        text = path.read_text()
        assert text.splitlines()[0] == ",".join(CSV_FIELDS)
        assert read_cells_csv(str(path)) == cells

    def test_byte_identical_across_runs_and_backends(self, tmp_path):
        lat = build(3)
        cfg = NoiseConfig(model="gaussian", rate=0.02, measurement_rounds=2, seed=4)
        blobs = []
        for backend in ("numpy", "numpy", "numba"):
            cells = run_pair(lat, cfg, 2500, backend=backend)
            blobs.append(cells_to_csv(cells).encode())
        assert blobs[0] == blobs[1] == blobs[2]

    def test_json_mirror_has_identical_fields(self, tmp_path):
        cells = self.cells()
        path = tmp_path / "cells.json"
        write_json(cells, str(path))
        data = json.loads(path.read_text())
        assert [tuple(row) for row in data["cells"]] == [CSV_FIELDS] * len(cells)
        for row, cell in zip(data["cells"], cells):
            assert row["offload_count"] == cell.offload_count
            assert row["offload_fraction"] == cell.offload_fraction

    def test_header_validation(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            read_cells_csv(str(path))
