# Copyright 2026 The tomolab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import pytest

import tomolab


def test_density_round_trip():
    r = (0.1, -0.2, 0.3)
    rho = tomolab.density_from_bloch(r)
    assert rho[0][0] == pytest.approx(0.65)
    assert rho[0][1] == pytest.approx(0.05 + 0.1j)
    assert tomolab.bloch_from_density(rho) == pytest.approx(list(r))


def test_rotation_and_conjugation():
    assert tomolab.rotate((1, 0, 0), (0, 0, 1), math.pi / 2) == pytest.approx([0, 1, 0], abs=1e-15)
    s = tomolab.conjugate_pure((0, 0, 1), (0.3, 0, 0))
    assert math.hypot(*s) == pytest.approx(1.0)


def test_povms():
    for povm in (tomolab.six_outcome_povm(), tomolab.tetrahedron_povm()):
        assert povm.is_complete()
        p = tomolab.outcome_probabilities(povm, (0.0, 0.0, 0.6))
        assert sum(p) == pytest.approx(1.0)
        assert len(p) == len(povm)
        assert json.loads(povm.to_json())["label"] == povm.label


def test_cap_covariance():
    assert tomolab.equivariance_residual((0, 0, 1), 0.7, (1, 0, 0), 1.1) < 1e-12
    full = tomolab.cap_operator((0, 0, 1), math.pi)
    assert full[0][0] == pytest.approx(1.0)


def test_sample_and_estimate():
    rec = tomolab.sample("tetrahedron", (0.0, 0.0, 0.6), 30, seed=7)
    assert rec.scheme == "tetrahedron"
    assert sum(rec.counts) == 30
    r = tomolab.estimate("tetrahedron", rec, policy="clamp")
    assert math.hypot(*r) <= 1.0 + 1e-12
    again = tomolab.MeasurementRecord.from_json(rec.to_json())
    assert again.counts == rec.counts


def test_ml():
    rec = tomolab.sample("continuous-ml", (0.3, 0.0, 0.2), 40, seed=3)
    assert len(rec.outcomes) == 40
    ml = tomolab.estimate_ml(rec)
    assert ml.converged
    assert math.hypot(*ml.r) <= 1.0 + 1e-9


def test_closed_forms():
    assert tomolab.f_n(5) == pytest.approx(tomolab.f_n_recursion(5))
    assert tomolab.analytic_variance("projective", (0, 0, 0.6), 30) == pytest.approx(0.132)
    assert tomolab.asymptotic_variance("tetrahedron", (0, 0, 0), 30) == pytest.approx(0.15)
    z = tomolab.analytic_mean("six-outcome", (0, 0, 0.6), 30)[2]
    assert 0.6 - 1e-4 < z < 0.6


def test_run_trials_deterministic():
    a = tomolab.run_trials("projective", (0, 0, 0.6), 30, 500, seed=11, threads=1)
    b = tomolab.run_trials("projective", (0, 0, 0.6), 30, 500, seed=11, threads=4)
    assert a.trials == 500
    assert a.mean == b.mean
    assert a.hs_variance == b.hs_variance
    assert a.ml_converged_fraction is None


def test_table():
    rows = json.loads(tomolab.summary_table_json((0, 0, 0.6), 30, 200, seed=1))
    assert len(rows) == 5
    csv = tomolab.summary_table_csv((0, 0, 0.6), 30, 200, seed=1)
    assert csv.splitlines()[0].startswith("protocol,")


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        tomolab.sample("projective", (0, 0, 0.6), 31, seed=1)
    with pytest.raises(ValueError):
        tomolab.bloch_from_density([[1, 0], [0, 1]])


def test_verify_quick():
    results = tomolab.verify()
    assert results
    assert all(passed for _, passed, _ in results)
