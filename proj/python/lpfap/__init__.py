# Copyright 2026 the lpfap Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""LP-guided fix-and-propagate primal heuristic for mixed-integer programs."""

import json as _json

from ._lpfap import (
    Instance,
    MpsError,
    NumericalError,
    aggregate_csv,
    branch,
    check_feasibility,
    gap_percent,
    make_instance,
    parse_mps,
    permute,
    read_mps,
    shifted_geomean,
    solve_lp,
    write_mps,
)
from ._lpfap import _run_heuristic_json

__all__ = [
    "Instance",
    "MpsError",
    "NumericalError",
    "aggregate_csv",
    "branch",
    "check_feasibility",
    "gap_percent",
    "make_instance",
    "parse_mps",
    "permute",
    "read_mps",
    "run_heuristic",
    "shifted_geomean",
    "solve_lp",
    "write_mps",
]


def run_heuristic(instance, strategy="Frac", tiebreak="None", init_tol=1e-4,
                  final_tol=1e-8, seed=0, backtrack_limit=1000,
                  time_limit=float("inf"), reference=None, timings=True):
    """Runs the heuristic once and returns the run report as a dict.

    The report carries the same keys as a line of the batch JSONL output,
    plus "solution" (empty when nothing was found).
    """
    return _json.loads(_run_heuristic_json(
        instance, strategy, tiebreak, init_tol, final_tol, seed,
        backtrack_limit, time_limit, reference, timings))
