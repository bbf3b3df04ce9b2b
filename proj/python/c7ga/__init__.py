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
"""C7 double-quantum recoupling simulation and pulse-sequence optimization."""

from ._core import (
    ConfigError,
    GAConfig,
    GeneSpec,
    GenerationStats,
    NumericalError,
    RunConfig,
    RunRecord,
    SequenceParams,
    buildup,
    default_params,
    dqf_efficiency,
    excitation_time,
    ga_run,
    load_config,
    nelder_mead,
    offset_profile,
    optimize,
    parse_config,
    random_search,
    run_study,
    scan1d,
    scan2d,
)

__all__ = [name for name in dir() if not name.startswith("_")]
