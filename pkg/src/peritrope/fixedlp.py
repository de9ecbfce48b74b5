"""Exact minimization of a linear objective over one polytrope.

The feasible tensions for a fixed periodic offset form a box slice of an
affine lattice; its vertices are exactly the spanning tree structures
(tree arcs pinned to a bound, the rest propagated).  Desk-scale instances
allow enumerating those structures outright, which keeps the solver free
of floating point and yields the vertex certificate for free.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EnumerationCapExceeded, Infeasible
from .graphs import DEFAULT_ENUMERATION_CAP, greedy_spanning_tree, spanning_trees
from .polytropes import normalize_timetable, polytrope_nonempty, timetable_to_tension
from .zonotopes import SpanningTreeStructure


@dataclass(frozen=True)
class FixedOffsetResult:
    timetable: tuple
    tension: tuple
    objective: int
    tight_structure: SpanningTreeStructure | None


def _tree_adjacency(g, tree):
    adj = [[] for _ in range(g.n)]
    for a in tree:
        i, j = g.arc_index_pairs[a]
        adj[i].append((j, a, +1))
        adj[j].append((i, a, -1))
    return adj


def _propagate(g, adj, values, p, period, root_index=0):
    """Potentials from pinned tree tensions: pi_head = pi_tail + x - T p."""
    pi = [None] * g.n
    pi[root_index] = 0
    stack = [root_index]
    while stack:
        v = stack.pop()
        for w, a, s in adj[v]:
            if pi[w] is None:
                pi[w] = pi[v] + s * (values[a] - period * p[a])
                stack.append(w)
    return pi


def minimize_over_polytrope(inst, p, objective=None, tree_cap=None):
    """Optimal vertex of the fixed-offset tension polytope, found by
    enumerating spanning tree structures.  Ties break toward the
    lexicographically smallest normalized timetable."""
    if not polytrope_nonempty(inst, p):
        raise Infeasible("polytrope is empty for this periodic offset")
    g = inst.graph
    T = inst.period
    obj = inst.weight if objective is None else tuple(objective)
    cap = DEFAULT_ENUMERATION_CAP if tree_cap is None else tree_cap
    best = None
    best_key = None
    for tree in spanning_trees(g, cap):
        adj = _tree_adjacency(g, tree)
        for mask in range(1 << len(tree)):
            x = [None] * g.m
            lower_side, upper_side = [], []
            for k, a in enumerate(tree):
                if mask >> k & 1:
                    x[a] = inst.upper[a]
                    upper_side.append(a)
                else:
                    x[a] = inst.lower[a]
                    lower_side.append(a)
            pi = _propagate(g, adj, x, p, T)
            feasible = True
            for a, (i, j) in enumerate(g.arc_index_pairs):
                if x[a] is None:
                    x[a] = pi[j] - pi[i] + T * p[a]
                    if not inst.lower[a] <= x[a] <= inst.upper[a]:
                        feasible = False
                        break
            if not feasible:
                continue
            value = sum(c * v for c, v in zip(obj, x))
            timetable = normalize_timetable(pi, 0, T)
            key = (value, timetable)
            if best_key is None or key < best_key:
                best_key = key
                best = FixedOffsetResult(
                    timetable=timetable,
                    tension=tuple(x),
                    objective=value,
                    tight_structure=SpanningTreeStructure(
                        tuple(tree), frozenset(lower_side), frozenset(upper_side)
                    ),
                )
    # A nonempty bounded polytope has a vertex, so some structure is feasible.
    assert best is not None, "no feasible spanning tree structure on a nonempty polytrope"
    return best


def _offsets_equivalent(g, tree, p_a, p_b):
    """Do two offset vectors differ by an integer potential difference?
    Decides whether they describe the same polytrope on the torus."""
    adj = _tree_adjacency(g, tree)
    q = [None] * g.n
    q[0] = 0
    stack = [0]
    while stack:
        v = stack.pop()
        for w, a, s in adj[v]:
            if q[w] is None:
                q[w] = q[v] - s * (p_a[a] - p_b[a])
                stack.append(w)
    return all(
        q[i] - q[j] == p_a[a] - p_b[a] for a, (i, j) in enumerate(g.arc_index_pairs)
    )


def brute_force_fixed_offset(inst, p, objective=None, max_vertices=5, max_period=30):
    """Grid oracle: scan all timetables with the first vertex pinned to 0,
    keep those whose minimal offsets match p up to potential shifts, and
    minimize.  Slow by design; exists to check minimize_over_polytrope."""
    g = inst.graph
    T = inst.period
    if g.n > max_vertices or T > max_period:
        raise EnumerationCapExceeded(
            f"grid oracle capped at {max_vertices} vertices and period {max_period}"
        )
    obj = inst.weight if objective is None else tuple(objective)
    tree = greedy_spanning_tree(g)
    best = None
    best_key = None
    for tail in itertools.product(range(T), repeat=g.n - 1):
        pi = (0,) + tail
        try:
            x, p_hat = timetable_to_tension(inst, pi)
        except Infeasible:
            continue
        if not _offsets_equivalent(g, tree, p_hat, p):
            continue
        value = sum(c * v for c, v in zip(obj, x))
        key = (value, pi)
        if best_key is None or key < best_key:
            best_key = key
            best = (pi, x, value)
    if best is None:
        raise Infeasible("no timetable on the grid maps to this periodic offset")
    pi, x, value = best
    return FixedOffsetResult(
        timetable=pi,
        tension=x,
        objective=value,
        tight_structure=_extract_tight_structure(inst, x),
    )


def _extract_tight_structure(inst, x):
    """Greedy spanning tree among the arcs sitting at a bound, or None if
    they do not span (the optimum landed off a vertex)."""
    g = inst.graph
    parent = list(range(g.n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    chosen = []
    for a, (i, j) in enumerate(g.arc_index_pairs):
        if x[a] != inst.lower[a] and x[a] != inst.upper[a]:
            continue
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            chosen.append(a)
    if len(chosen) != g.n - 1:
        return None
    lower_side = frozenset(a for a in chosen if x[a] == inst.lower[a])
    return SpanningTreeStructure(
        tuple(chosen), lower_side, frozenset(chosen) - lower_side
    )
