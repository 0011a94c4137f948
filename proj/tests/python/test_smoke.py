# Copyright 2026 The fqcp Authors
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

import fqcp


def test_dephased_matches_exact_enumeration():
    exact = fqcp.exact_enumeration(p=0.2, t_max=2)
    mc = fqcp.dephased_ensemble(p=0.2, t_max=2, shots=20000, seed=3)
    assert exact["n_right"][0] == 1.0
    for t in (1, 2):
        assert abs(mc["n_right"][t] - exact["n_right"][t]) <= 4 * mc["se_right"][t]


def test_dm_and_schedule():
    s = fqcp.dm_simulate(p=0.2, t_max=2)
    assert len(s["n_right"]) == 3
    lo, hi = s["sites"]
    assert len(s["density"][2]) == hi - lo + 1
    assert all(0.0 <= v <= 1.0 for v in s["density"][2])
    assert fqcp.circuit_json(t_max=2)["t_max"] == 2


def test_analysis_helpers():
    series = {t: 3.0 * t**0.5 for t in range(1, 40)}
    delta = fqcp.effective_exponent(series, 5)
    assert all(abs(v - 0.5) < 1e-12 for v in delta.values())
    assert fqcp.bootstrap_se([2.0] * 10) == 0.0
    v = [0.1, 0.5, 0.9, 0.3]
    assert fqcp.bootstrap_se(v, seed=4) == fqcp.bootstrap_se(v, [1.0] * 4, seed=4)


def test_code_algebra_and_ft():
    assert fqcp.syndrome("XIII") == (0, 1)
    assert fqcp.classify_pauli("XXII") == "undetectable-logical"
    assert fqcp.count_double_z_logical(False) == 6
    assert fqcp.count_double_z_logical(True) == 1
    theta = 0.4
    assert abs(fqcp.dfs_phase(0, 0, theta) - complex(math.cos(8 * theta), math.sin(8 * theta))) < 1e-12
    assert fqcp.ft_check("stab_meas")["fault_tolerant"]
    assert not fqcp.ft_check("crx_inter", theta=math.pi)["fault_tolerant"]


def test_errors_are_raised():
    with pytest.raises(fqcp.FqcpError):
        fqcp.exact_enumeration(p=1.5, t_max=2)


def test_cli_round_trip(tmp_path):
    out = tmp_path / "run"
    assert fqcp.cli(["adaptive", "--p", "0.2", "--t", "2", "--shots", "200", "--out", str(out)]) == 0
    assert fqcp.cli(["reweight", "--p", "0.2", "--records", str(out / "records.jsonl"), "--out", str(out)]) == 0
    summary = json.loads((out / "reweight_summary.json").read_text())
    assert summary["config"]["subcommand"] == "reweight"
    assert fqcp.cli(["dephased", "--p", "2"]) == 2
