# Copyright 2026 The c7ga Authors. All Rights Reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================

import json

import pytest

import c7ga


def small_config(**extra):
    c = c7ga.RunConfig()
    c.powder = ("zcw", 21, 1)
    c.max_step_us = 3.5
    for k, v in extra.items():
        setattr(c, k, v)
    return c


def test_defaults_round_trip():
    c = c7ga.RunConfig()
    assert c.rotor_freq_hz == 10204.0
    assert c7ga.parse_config(c.to_yaml()) == c
    p = c.params
    assert p.n_blocks == 31
    assert p.get("tau1") == pytest.approx(1e6 / (7 * 10204.0))


def test_config_error_reports_line():
    with pytest.raises(c7ga.ConfigError, match=r"t\.yaml:3"):
        c7ga.parse_config("simulation:\n  rotor_freq_hz: 10204\n  bogus: 1\n", "t.yaml")
    with pytest.raises(ValueError):
        c7ga.parse_config("simulation: {rotor_freq_hz: -1}")


def test_efficiency_bounds_and_csa_toggle():
    with_csa = c7ga.dqf_efficiency(small_config())
    no_csa = c7ga.dqf_efficiency(small_config(include_csa=False))
    assert -1.0 <= with_csa <= 1.0
    assert no_csa > with_csa
    p = c7ga.default_params(10204.0, 10)
    assert c7ga.dqf_efficiency(small_config(), p) != with_csa


def test_buildup_matches_single_points():
    c = small_config()
    c.params = c7ga.default_params(10204.0, 31)
    table = c7ga.buildup(c)
    assert len(table["n_blocks"]) == len(table["with_csa"]) == 45
    p = c7ga.default_params(10204.0, 7)
    assert table["with_csa"][6] == pytest.approx(c7ga.dqf_efficiency(c, p), abs=1e-12)


def test_ga_on_python_objective_is_reproducible():
    genes = [c7ga.GeneSpec("x", -2.0, 2.0), c7ga.GeneSpec("y", -1.0, 3.0)]
    cfg = c7ga.GAConfig()
    cfg.seed = 5
    f = lambda v: min(2.0, (v[0] - 0.5) ** 2 + (v[1] - 1.0) ** 2)
    a = c7ga.ga_run(cfg, genes, f)
    b = c7ga.ga_run(cfg, genes, f)
    assert a == b
    assert a.evaluations <= cfg.eval_budget
    assert a.best_fitness < 0.05
    refined = c7ga.nelder_mead(f, a.best_x, [2.0, 2.0], 300)
    assert refined.best_fitness <= a.best_fitness


def test_run_study_writes_artifacts(tmp_path):
    c = small_config()
    c.tasks = ["buildup"]
    c7ga.run_study(c, tmp_path)
    assert (tmp_path / "manifest.yaml").exists()
    summary = json.loads((tmp_path / "buildup_summary.json").read_text())
    assert summary
    assert c7ga.parse_config((tmp_path / "manifest.yaml").read_text()) == c
