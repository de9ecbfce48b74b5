"""Ground-truth solvers: exhaust cycle offsets, or exhaust timetables.

Both are deliberate brute force.  They exist to anchor the heuristic and
the geometry, so they share nothing with the code they check beyond the
basic instance plumbing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CrosscheckMismatch, EnumerationCapExceeded, Infeasible
from .fixedlp import minimize_over_polytrope
from .graphs import default_basis
from .parallel import pmap
from .polytropes import offset_from_cycle_offset, offset_zero, timetable_to_tension
from .search import Solution, solution_from_timetable
from .zonotopes import DEFAULT_WIDTH_CAP, lattice_points


def solve_exact(inst, basis=None, width_cap=DEFAULT_WIDTH_CAP, tree_cap=None):
    """Global optimum by optimizing every nonempty polytrope; ties break
    toward the smaller cycle offset."""
    if basis is None:
        basis = default_basis(inst.graph)
    points = lattice_points(inst, basis, cap=width_cap)
    if not points:
        raise Infeasible("no feasible cycle offset: the zonotope holds no lattice point")

    def solve_one(z):
        p = offset_zero(inst) if basis.mu == 0 else offset_from_cycle_offset(basis, z)
        return minimize_over_polytrope(inst, p, tree_cap=tree_cap)

    results = pmap(solve_one, points)
    best_z, best = min(zip(points, results), key=lambda zr: (zr[1].objective, zr[0]))
    sol = solution_from_timetable(inst, basis, best.timetable)
    assert sol.cycle_offset == best_z and sol.objective == best.objective
    return sol


def brute_force_timetable(inst, basis=None, max_vertices=5, max_period=30):
    """Global optimum by scanning every timetable with the first vertex
    pinned to 0 and taking per-arc minimal tensions."""
    g = inst.graph
    T = inst.period
    if g.n > max_vertices or T > max_period:
        raise EnumerationCapExceeded(
            f"grid oracle capped at {max_vertices} vertices and period {max_period}"
        )
    if basis is None:
        basis = default_basis(g)
    best = None
    best_key = None
    for tail in itertools.product(range(T), repeat=g.n - 1):
        pi = (0,) + tail
        try:
            x, _ = timetable_to_tension(inst, pi)
        except Infeasible:
            continue
        value = sum(w * v for w, v in zip(inst.weight, x))
        key = (value, pi)
        if best_key is None or key < best_key:
            best_key = key
            best = pi
    if best is None:
        raise Infeasible("no feasible timetable on the grid")
    return solution_from_timetable(inst, basis, best)


def verify_solution(inst, basis, sol):
    """Check the Solution invariants; returns a list of violation texts."""
    problems = []
    g = inst.graph
    T = inst.period
    for a, (i, j) in enumerate(g.arc_index_pairs):
        x = sol.tension[a]
        if not inst.lower[a] <= x <= inst.upper[a]:
            problems.append(f"arc {a}: tension {x} outside bounds")
        recon = sol.timetable[j] - sol.timetable[i] + T * sol.periodic_offset[a]
        if recon != x:
            problems.append(f"arc {a}: tension {x} inconsistent with timetable ({recon})")
    z = tuple(
        sum(row[a] * sol.periodic_offset[a] for a in range(g.m)) for row in basis.gamma
    )
    if z != sol.cycle_offset:
        problems.append(f"cycle offset {sol.cycle_offset} but offsets map to {z}")
    value = sum(w * v for w, v in zip(inst.weight, sol.tension))
    if value != sol.objective:
        problems.append(f"objective {sol.objective} but tension costs {value}")
    return problems


@dataclass
class CrosscheckReport:
    feasible: bool
    objective: int | None
    exact: Solution | None
    grid: Solution | None


def crosscheck(inst, basis=None, width_cap=DEFAULT_WIDTH_CAP, max_vertices=5, max_period=30):
    """Run both oracles and insist they agree; disagreement raises with
    both certificates attached."""
    if basis is None:
        basis = default_basis(inst.graph)
    try:
        exact = solve_exact(inst, basis, width_cap=width_cap)
    except Infeasible:
        exact = None
    try:
        grid = brute_force_timetable(inst, basis, max_vertices=max_vertices, max_period=max_period)
    except Infeasible:
        grid = None
    if (exact is None) != (grid is None):
        raise CrosscheckMismatch(
            "one oracle reports infeasible, the other does not", exact=exact, grid=grid
        )
    if exact is None:
        return CrosscheckReport(feasible=False, objective=None, exact=None, grid=None)
    if exact.objective != grid.objective:
        raise CrosscheckMismatch(
            f"objective mismatch: {exact.objective} vs {grid.objective}",
            exact=exact,
            grid=grid,
        )
    for name, sol in (("exact", exact), ("grid", grid)):
        problems = verify_solution(inst, basis, sol)
        if problems:
            raise CrosscheckMismatch(
                f"{name} certificate invalid: " + "; ".join(problems), exact=exact, grid=grid
            )
    return CrosscheckReport(feasible=True, objective=exact.objective, exact=exact, grid=grid)
