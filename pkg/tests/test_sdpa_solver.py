"""End-to-end validation of the SDPA export: parse the emitted file back
(independent of the writer's internals) and solve it numerically; the
optimum must land on the exact bound the matching certificate proves.
"""

import numpy as np
import pytest

cp = pytest.importorskip("cvxpy")

from flagforge import flags, graphs, sdp
from flagforge.fixtures import type_catalog


def parse_sdpa(path):
    lines = [ln for ln in open(path) if not ln.startswith("*")]
    m = int(lines[0])
    sizes = [int(x) for x in lines[2].split()]
    c = [float(x) for x in lines[3].split()]
    entries = []
    for ln in lines[4:]:
        p = ln.split()
        if len(p) == 5:
            entries.append((int(p[0]), int(p[1]), int(p[2]), int(p[3]),
                            float(p[4])))
    return m, sizes, c, entries


def solve_sdpa(path):
    m, sizes, c, entries = parse_sdpa(path)
    x = cp.Variable(m)
    cons = []
    for b, sz in enumerate(sizes, start=1):
        dim = abs(sz)
        f0 = np.zeros((dim, dim))
        fk = {}
        for (k, blk, i, j, v) in entries:
            if blk != b:
                continue
            if k == 0:
                f0[i - 1, j - 1] = v
                f0[j - 1, i - 1] = v
            else:
                mat = fk.setdefault(k, np.zeros((dim, dim)))
                mat[i - 1, j - 1] = v
                mat[j - 1, i - 1] = v
        expr = -f0
        for k, mat in fk.items():
            expr = expr + x[k - 1] * mat
        cons.append(expr >> 0 if sz > 0 else cp.diag(expr) >= 0)
    prob = cp.Problem(cp.Minimize(np.array(c) @ x), cons)
    prob.solve(solver=cp.SCS, eps=1e-9, max_iters=400000)
    return prob.value


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_triangle_l3_problem_solves_to_quarter(tmp_path):
    dot3 = flags.dot_type(3)
    prob = sdp.build_problem(graphs.complete_graph(3), 3, 3, [(dot3, 2)])
    path = tmp_path / "p.dat-s"
    sdp.emit_sdpa(prob, path)
    val = solve_sdpa(path)
    assert abs(-val - 0.25) < 1e-6


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_cliques4_l3_problem_solves_to_three_twentyfifths(tmp_path):
    dot3 = flags.dot_type(3)
    tau1 = type_catalog(3)["tau1"]
    tau2 = type_catalog(3)["tau2"]
    prob = sdp.build_problem(graphs.complete_graph(4), 3, 5,
                             [(tau1, 4), (tau2, 4), (dot3, 3)])
    path = tmp_path / "p.dat-s"
    sdp.emit_sdpa(prob, path)
    val = solve_sdpa(path)
    assert abs(-val - 0.12) < 1e-5


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_triangle_l3_at_size_six_still_solves_to_quarter(tmp_path):
    # a larger expansion with three size-2-type blocks cannot beat the true
    # asymptotic value, and must still attain it
    dot3 = flags.dot_type(3)
    edge2 = flags.TypeGraph(graphs.complete_graph(2), 3)
    non2 = flags.TypeGraph(graphs.empty_graph(2), 3)
    prob = sdp.build_problem(graphs.complete_graph(3), 3, 6,
                             [(dot3, 3), (edge2, 4), (non2, 4)])
    assert len(prob.basis) == 38
    assert [b.dim for b in prob.blocks] == [5, 15, 10]
    path = tmp_path / "p.dat-s"
    sdp.emit_sdpa(prob, path)
    val = solve_sdpa(path)
    assert abs(-val - 0.25) < 1e-5


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_triangle_l4_problem_solves_to_ninth(tmp_path):
    dot4 = flags.dot_type(4)
    tau1 = type_catalog(4)["tau1"]
    tau2 = type_catalog(4)["tau2"]
    prob = sdp.build_problem(graphs.complete_graph(3), 4, 5,
                             [(tau1, 4), (tau2, 4), (dot4, 3), (dot4, 2)])
    path = tmp_path / "p.dat-s"
    sdp.emit_sdpa(prob, path)
    val = solve_sdpa(path)
    assert abs(-val - 1 / 9) < 1e-5
