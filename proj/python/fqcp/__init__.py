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


"""Floquet quantum contact process simulators and [[4,2,2]] gadget tools."""

from ._core import (
    DEFAULT_THETA,
    FqcpError,
    bootstrap_se,
    circuit_json,
    classify_pauli,
    cli,
    count_double_z_logical,
    crossing_estimate,
    dephased_ensemble,
    dfs_phase,
    dm_simulate,
    effective_exponent,
    exact_enumeration,
    ft_check,
    syndrome,
)

__all__ = [
    "DEFAULT_THETA",
    "FqcpError",
    "bootstrap_se",
    "circuit_json",
    "classify_pauli",
    "cli",
    "count_double_z_logical",
    "crossing_estimate",
    "dephased_ensemble",
    "dfs_phase",
    "dm_simulate",
    "effective_exponent",
    "exact_enumeration",
    "ft_check",
    "syndrome",
]
