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

import itertools
import math

import pytest

import lpfap

INF = float("inf")

KNAPSACK = """NAME knap
OBJSENSE
    MAX
ROWS
 N obj
 L cap
COLUMNS
    MARKER MARKER INTORG
    a obj 5 cap 2
    b obj 4 cap 3
    c obj 3 cap 1
    MARKER MARKER INTEND
RHS
    rhs cap 5
BOUNDS
 BV bnd a
 BV bnd b
 BV bnd c
ENDATA
"""


def knapsack():
    return lpfap.parse_mps(KNAPSACK)


def test_parse_and_round_trip():
    inst = knapsack()
    assert inst.num_rows == 1 and inst.num_cols == 3
    assert inst.maximize
    assert inst.objective == [5, 4, 3]
    assert inst.integer_indices == [0, 1, 2]
    assert inst.dense_matrix() == [[2, 3, 1]]
    assert lpfap.parse_mps(lpfap.write_mps(inst)) == inst


def test_parse_error_names_the_line():
    with pytest.raises(lpfap.MpsError, match="line 5"):
        lpfap.parse_mps("NAME x\nROWS\n N obj\nCOLUMNS\n    x nope 1\nENDATA\n")


def test_lp_relaxation_bound():
    sol = lpfap.solve_lp(knapsack(), tolerance=1e-8)
    assert sol["status"] == "Optimal"
    # fractional optimum a = c = 1, b = 2/3
    assert sol["objective"] == pytest.approx(8 + 8 / 3, rel=1e-6)
    assert len(sol["x"]) == 3 and len(sol["y"]) == 1


def test_heuristic_finds_the_optimum():
    inst = knapsack()
    best = max(5 * a + 4 * b + 3 * c
               for a, b, c in itertools.product((0, 1), repeat=3)
               if 2 * a + 3 * b + c <= 5)
    report = lpfap.run_heuristic(inst, reference=best)
    assert report["found"]
    assert report["objective"] <= best
    assert lpfap.check_feasibility(inst, report["solution"])["feasible"]
    assert report["gap"] == pytest.approx(
        lpfap.gap_percent(report["objective"], best))
    for strategy in ("Frac", "RedCost", "Dual", "Type", "Random"):
        again = lpfap.run_heuristic(inst, strategy=strategy, seed=3, timings=False)
        assert again == lpfap.run_heuristic(inst, strategy=strategy, seed=3, timings=False)


def test_infeasible_program_reports_no_solution():
    inst = lpfap.make_instance([[2, 2]], [1, 1], [1], [1], [0, 0], [1, 1],
                               integer=[True, True])
    report = lpfap.run_heuristic(inst)
    assert not report["found"]
    assert report["solution"] == []


def test_feasibility_check():
    inst = lpfap.make_instance([[1, 1]], [1, 1], [-INF], [1], [0, 0], [1, 1],
                               integer=[True, False])
    assert lpfap.check_feasibility(inst, [1, 0])["feasible"]
    out = lpfap.check_feasibility(inst, [0.5, 0.5])
    assert not out["feasible"]
    assert out["max_integrality_violation"] == pytest.approx(0.5)


def test_shifted_geomean():
    assert lpfap.shifted_geomean([7.0] * 4) == pytest.approx(7.0, abs=1e-12)
    assert lpfap.shifted_geomean([1.0, 9.0]) == pytest.approx(math.sqrt(20) - 1, abs=1e-12)
    assert lpfap.shifted_geomean([]) is None
    with pytest.raises(ValueError):
        lpfap.shifted_geomean([-1.0])


def test_branch_and_permute():
    assert lpfap.branch(2, 0, 5, 1.0) == [(3, 5), (0, 1), (2, 2)]
    assert lpfap.branch(0, 0, 1, 1.0) == [(1, 1), (0, 0)]
    inst = knapsack()
    assert lpfap.permute(inst, 0) == inst
    shuffled = lpfap.permute(inst, 4)
    assert sorted(shuffled.col_names) == sorted(inst.col_names)
    assert lpfap.solve_lp(shuffled, tolerance=1e-8)["objective"] == pytest.approx(
        lpfap.solve_lp(inst, tolerance=1e-8)["objective"], rel=1e-6)


def test_aggregate_from_reports():
    import json
    lines = "".join(json.dumps({k: v for k, v in lpfap.run_heuristic(knapsack(), reference=8).items()
                                if k != "solution"}) + "\n" for _ in range(2))
    csv = lpfap.aggregate_csv(lines)
    assert csv.splitlines()[0] == "label,runs,found,sgm_gap_percent,sgm_time_seconds"
    assert csv.splitlines()[-1].startswith("Best,1,1,")
