"""Periodic offset classes as shortest-path polyhedra on the doubled graph.

Fixing an integer offset vector p turns the feasibility region for
timetables into the potential polyhedron of the doubled graph weighted by
kappa(p): the forward copy of arc a carries u_a - T p_a, the reverse copy
T p_a - l_a.  The region is nonempty exactly when that weighting has no
negative cycle, and its all-pairs shortest path matrix is the canonical
inequality description.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyPolytrope, Infeasible, NotATension

INF = float("inf")


def kappa(inst, p):
    """Weighted edge list of the doubled graph for offset p.

    Returns (tail_index, head_index, weight) triples: first the forward
    copies of all arcs in arc order, then the reverse copies.
    """
    T = inst.period
    pairs = inst.graph.arc_index_pairs
    forward = [(i, j, inst.upper[a] - T * p[a]) for a, (i, j) in enumerate(pairs)]
    reverse = [(j, i, T * p[a] - inst.lower[a]) for a, (i, j) in enumerate(pairs)]
    return forward + reverse


def _has_negative_cycle(n, edges):
    # Bellman-Ford from a virtual source connected to everything at cost 0.
    dist = [0] * n
    for _ in range(n - 1):
        changed = False
        for i, j, w in edges:
            if dist[i] + w < dist[j]:
                dist[j] = dist[i] + w
                changed = True
        if not changed:
            return False
    return any(dist[i] + w < dist[j] for i, j, w in edges)


def _single_source_distances(n, edges, source):
    dist = [INF] * n
    dist[source] = 0
    for _ in range(n - 1):
        changed = False
        for i, j, w in edges:
            d = dist[i] + w
            if d < dist[j]:
                dist[j] = d
                changed = True
        if not changed:
            break
    return dist


def tension_system_feasible(inst, base):
    """Is there a real x with l <= x <= u and x = base - B^T pi for some pi?

    ``base`` is any integer particular solution; the system reduces to
    difference constraints, so feasibility is the absence of a negative
    cycle under weights u_a - base_a (forward) and base_a - l_a (reverse).
    """
    pairs = inst.graph.arc_index_pairs
    edges = [(i, j, inst.upper[a] - base[a]) for a, (i, j) in enumerate(pairs)]
    edges += [(j, i, base[a] - inst.lower[a]) for a, (i, j) in enumerate(pairs)]
    return not _has_negative_cycle(inst.graph.n, edges)


def polytrope_nonempty(inst, p):
    T = inst.period
    return tension_system_feasible(inst, tuple(T * pa for pa in p))


@dataclass(frozen=True)
class Polytrope:
    """One offset class: representative p, key z, canonical distance matrix.

    ``dist`` is None exactly when the class is empty (dimension -1).
    """

    offset: tuple
    cycle_offset: tuple
    dist: tuple | None
    dimension: int
    period: int
    vertex_ids: tuple

    @property
    def nonempty(self):
        return self.dist is not None

    @property
    def n(self):
        return len(self.vertex_ids)


def polytrope_build(inst, basis, p):
    p = tuple(int(x) for x in p)
    z = tuple(sum(row[a] * p[a] for a in range(inst.graph.m)) for row in basis.gamma)
    # Offsets with the same cycle offset describe the same torus region, so
    # build from the canonical class representative; dist then depends on z
    # only, not on which preimage the caller happened to pass.
    p = offset_from_cycle_offset(basis, z) if basis.mu else offset_zero(inst)
    n = inst.graph.n
    edges = kappa(inst, p)
    if _has_negative_cycle(n, edges):
        return Polytrope(p, z, None, -1, inst.period, inst.graph.vertices)
    dist = []
    for source in range(n):
        row = _single_source_distances(n, edges, source)
        # The doubled graph is strongly connected, so all entries are finite.
        dist.append(tuple(int(d) for d in row))
    dist = tuple(dist)
    return Polytrope(p, z, dist, _dimension_from_dist(dist), inst.period, inst.graph.vertices)


def _dimension_from_dist(dist):
    n = len(dist)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] + dist[j][i] == 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
                    comps -= 1
    return comps - 1


def polytrope_dimension(poly):
    """-1 for the empty class, otherwise one less than the number of
    components of the zero-cycle equality graph."""
    return poly.dimension


def normalize_timetable(pi, root, period):
    """Shift so the root entry is 0 and reduce all entries into [0, period)."""
    base = pi[root]
    return tuple((x - base) % period for x in pi)


def _root_index(poly_or_graph, root):
    ids = poly_or_graph.vertex_ids if isinstance(poly_or_graph, Polytrope) else poly_or_graph.vertices
    if root is None:
        return 0
    if root in ids:
        return ids.index(root)
    raise ValueError(f"unknown vertex {root!r}")


def anchor_timetable(pi, root_index):
    """Shift so the root entry is 0, without folding into [0, period).

    Folding can move a boundary vertex off its supporting inequalities, so
    vertex computations keep the plain shifted representative (an entry of
    exactly the period is legitimate there).
    """
    base = pi[root_index]
    return tuple(x - base for x in pi)


def tropical_vertices(poly, root=None):
    """The n generating timetables: row i of the distance matrix, anchored
    at the root vertex (default: first declared vertex).  Every returned
    timetable satisfies timetable_membership."""
    if not poly.nonempty:
        raise EmptyPolytrope("empty class has no tropical vertices")
    r = _root_index(poly, root)
    return tuple(anchor_timetable(row, r) for row in poly.dist)


def timetable_membership(poly, pi):
    """Does the (integer) timetable satisfy every canonical inequality
    pi_j - pi_i <= dist(i, j) of this offset class?"""
    if not poly.nonempty:
        raise EmptyPolytrope("membership in an empty class")
    n = poly.n
    dist = poly.dist
    return all(
        pi[j] - pi[i] <= dist[i][j] for i in range(n) for j in range(n) if i != j
    )


def timetable_to_tension(inst, pi):
    """Per-arc tension and offset induced by a timetable.

    For arc a = (i, j) the offset p_a is the least integer putting
    pi_j - pi_i + T p_a at or above the lower bound; the arc is violated
    when that value overshoots the upper bound.  Raises Infeasible listing
    all violated arcs.
    """
    T = inst.period
    x, p, bad = [], [], []
    for a, (i, j) in enumerate(inst.graph.arc_index_pairs):
        d = pi[j] - pi[i]
        pa = -((d - inst.lower[a]) // T)
        xa = d + T * pa
        if xa > inst.upper[a]:
            bad.append(a)
        x.append(xa)
        p.append(pa)
    if bad:
        raise Infeasible(f"timetable violates arcs {bad}", bad)
    return tuple(x), tuple(p)


def tension_to_timetable(inst, x, root=None):
    """Recover a timetable from a periodic tension by propagating along a
    spanning tree from the root; raises NotATension if x is out of bounds
    or fails to close up modulo T on some arc."""
    g = inst.graph
    T = inst.period
    for a in range(g.m):
        if not inst.lower[a] <= x[a] <= inst.upper[a]:
            raise NotATension(f"arc {a}: {x[a]} outside [{inst.lower[a]}, {inst.upper[a]}]")
    r = g.vindex[root] if root is not None else 0
    adj = [[] for _ in range(g.n)]
    for a, (i, j) in enumerate(g.arc_index_pairs):
        adj[i].append((j, a, +1))
        adj[j].append((i, a, -1))
    pi = [None] * g.n
    pi[r] = 0
    stack = [r]
    while stack:
        v = stack.pop()
        for w, a, s in adj[v]:
            if pi[w] is None:
                pi[w] = (pi[v] + s * x[a]) % T
                stack.append(w)
    for a, (i, j) in enumerate(g.arc_index_pairs):
        if (pi[j] - pi[i] - x[a]) % T != 0:
            raise NotATension(f"arc {a} does not close up modulo {T}")
    return tuple(pi)


def offset_from_cycle_offset(basis, z):
    """An integer offset p with Gamma p = z.

    For a fundamental basis this is z on the co-tree arcs (which carry the
    identity block) and 0 on tree arcs.  A general basis goes through an
    integer preimage computation.
    """
    m = len(basis.gamma[0]) if basis.mu else None
    if basis.mu == 0:
        raise ValueError("cannot size the offset vector of an empty basis")
    if basis.tree is not None:
        p = [0] * m
        for k, a in enumerate(basis.row_cotree_arcs):
            p[a] = int(z[k])
        return tuple(p)
    return _integer_preimage(basis.gamma, z)


def offset_zero(inst):
    return (0,) * inst.graph.m


def _integer_preimage(gamma, z):
    """Solve Gamma p = z over the integers by column reduction."""
    mu = len(gamma)
    m = len(gamma[0])
    a = [list(row) for row in gamma]
    # transform tracks the column operations: columns of the original matrix
    # expressed in terms of the reduced ones.
    transform = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def col_op(c1, c2, factor):
        for r in range(mu):
            a[r][c2] -= factor * a[r][c1]
        for r in range(m):
            transform[r][c2] -= factor * transform[r][c1]

    def col_swap(c1, c2):
        for r in range(mu):
            a[r][c1], a[r][c2] = a[r][c2], a[r][c1]
        for r in range(m):
            transform[r][c1], transform[r][c2] = transform[r][c2], transform[r][c1]

    row = 0
    for col in range(m):
        if row == mu:
            break
        while True:
            nonzero = [c for c in range(col, m) if a[row][c] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda c: abs(a[row][c]))
            if best != col:
                col_swap(col, best)
            done = True
            for c in range(col + 1, m):
                if a[row][c] != 0:
                    col_op(col, c, a[row][c] // a[row][col])
                    done = False
            if done and all(a[row][c] == 0 for c in range(col + 1, m)):
                break
        if a[row][col] == 0:
            raise ValueError("cycle matrix does not have full row rank")
        row += 1
    # back-substitute on the triangular part
    y = [0] * m
    for r in range(mu):
        acc = sum(a[r][c] * y[c] for c in range(r))
        num = int(z[r]) - acc
        if num % a[r][r] != 0:
            raise ValueError("no integer offset maps to this cycle offset")
        y[r] = num // a[r][r]
    return tuple(sum(transform[r][c] * y[c] for c in range(m)) for r in range(m))


def neighbors(inst, basis, z):
    """Nonempty classes one signed Gamma column away from z."""
    z = tuple(int(v) for v in z)
    columns = set()
    for a in range(inst.graph.m):
        col = basis.column(a)
        if any(col):
            columns.add(col)
    out = set()
    for col in columns:
        for sign in (1, -1):
            z2 = tuple(v + sign * c for v, c in zip(z, col))
            if z2 == z or z2 in out:
                continue
            if polytrope_nonempty(inst, offset_from_cycle_offset(basis, z2)):
                out.add(z2)
    return out


def enumerate_polytropes(inst, basis, cap=None):
    """All nonempty offset classes, keyed by their cycle offset, found by
    scanning the integer points of the bounding box of feasible offsets."""
    from .zonotopes import DEFAULT_WIDTH_CAP, lattice_points

    points = lattice_points(inst, basis, cap=DEFAULT_WIDTH_CAP if cap is None else cap)
    out = []
    for z in points:
        if basis.mu == 0:
            poly = polytrope_build(inst, basis, offset_zero(inst))
        else:
            poly = polytrope_build(inst, basis, offset_from_cycle_offset(basis, z))
        if poly.nonempty:
            out.append(poly)
    return tuple(out)
