"""Periodic scheduling instances: data model, text format, derived instances.

The native text format is line oriented UTF-8:

    # comment
    PERIOD 10
    EVENT v0            (optional; inferred from arcs otherwise)
    ARC v0 v1 3 12 1    (tail head lower upper weight)

All data is integer.  Bounds must satisfy 0 <= lower < T and
0 <= upper - lower < T; weights are nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DisconnectedGraph, InfeasibleFixedCycle, InvalidBounds
from .graphs import Digraph


@dataclass(frozen=True)
class PespInstance:
    graph: Digraph
    period: int
    lower: tuple
    upper: tuple
    weight: tuple
    # Set on derived limit instances, where spans of exactly one period are
    # deliberate and not a modelling error.
    span_relaxed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(int(x) for x in self.lower))
        object.__setattr__(self, "upper", tuple(int(x) for x in self.upper))
        object.__setattr__(self, "weight", tuple(int(x) for x in self.weight))
        m = self.graph.m
        if not (len(self.lower) == len(self.upper) == len(self.weight) == m):
            raise ValueError("bound/weight vectors must match the arc count")

    @property
    def span(self):
        return tuple(u - l for l, u in zip(self.lower, self.upper))


class ParseError(ValueError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_instance(text):
    """Parse the native format.  Accepts str or bytes."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    period = None
    events = []
    seen_events = set()
    arcs = []
    bounds = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0].upper()
        if kind == "PERIOD":
            if period is not None:
                raise ParseError(line_no, "duplicate PERIOD")
            if len(fields) != 2:
                raise ParseError(line_no, "PERIOD takes one integer")
            period = _int_field(fields[1], line_no)
            if period <= 0:
                raise ParseError(line_no, "period must be positive")
        elif kind == "EVENT":
            if len(fields) != 2:
                raise ParseError(line_no, "EVENT takes one id")
            if fields[1] in seen_events:
                raise ParseError(line_no, f"duplicate event {fields[1]}")
            seen_events.add(fields[1])
            events.append(fields[1])
        elif kind == "ARC":
            if len(fields) != 6:
                raise ParseError(line_no, "ARC takes tail head lower upper weight")
            tail, head = fields[1], fields[2]
            lo, hi, w = (_int_field(x, line_no) for x in fields[3:6])
            arcs.append((tail, head))
            bounds.append((lo, hi, w))
            for v in (tail, head):
                if v not in seen_events:
                    seen_events.add(v)
                    events.append(v)
        else:
            raise ParseError(line_no, f"unknown directive {fields[0]}")
    if period is None:
        raise ParseError(0, "missing PERIOD")
    try:
        graph = Digraph(tuple(events), tuple(arcs))
    except ValueError as exc:
        raise ParseError(0, str(exc)) from exc
    if not graph.is_connected():
        raise DisconnectedGraph("instance graph is not connected")
    inst = PespInstance(
        graph,
        period,
        tuple(b[0] for b in bounds),
        tuple(b[1] for b in bounds),
        tuple(b[2] for b in bounds),
    )
    report = validate(inst)
    for arc, message in report.arc_violations:
        raise InvalidBounds(arc, message)
    if report.messages:
        raise ParseError(0, "; ".join(report.messages))
    return inst


def _int_field(s, line_no):
    try:
        return int(s)
    except ValueError:
        raise ParseError(line_no, f"not an integer: {s}") from None


def serialize_instance(inst):
    """Canonical text form; parse(serialize(inst)) reproduces inst exactly."""
    lines = [f"PERIOD {inst.period}"]
    for v in inst.graph.vertices:
        lines.append(f"EVENT {v}")
    for (t, h), lo, hi, w in zip(inst.graph.arcs, inst.lower, inst.upper, inst.weight):
        lines.append(f"ARC {t} {h} {lo} {hi} {w}")
    return "\n".join(lines) + "\n"


@dataclass
class ValidationReport:
    messages: list = field(default_factory=list)
    arc_violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.messages and not self.arc_violations

    def all_messages(self):
        return self.messages + [f"arc {a}: {m}" for a, m in self.arc_violations]


def validate(inst):
    """Collect every violated invariant; an empty report means admissible."""
    report = ValidationReport()
    if inst.period <= 0:
        report.messages.append(f"period {inst.period} is not positive")
    if not inst.graph.is_connected():
        report.messages.append("graph is not connected")
    T = inst.period
    for a in range(inst.graph.m):
        lo, hi, w = inst.lower[a], inst.upper[a], inst.weight[a]
        if not 0 <= lo < T:
            report.arc_violations.append((a, f"lower bound {lo} outside [0, {T})"))
        if hi < lo:
            report.arc_violations.append((a, f"upper bound {hi} below lower {lo}"))
        elif inst.span_relaxed:
            if hi - lo > T:
                report.arc_violations.append((a, f"span {hi - lo} exceeds the period"))
        elif hi - lo >= T:
            report.arc_violations.append((a, f"span {hi - lo} not < {T}"))
        if w < 0:
            report.arc_violations.append((a, f"negative weight {w}"))
    return report


@dataclass(frozen=True)
class ContractionResult:
    instance: PespInstance
    vertex_map: dict
    objective_offset: int


def contract_fixed_arcs(inst):
    """Contract every arc with lower == upper.

    Endpoints of fixed arcs are merged; surviving arcs keep their span with
    bounds shifted back into [0, T) and the constant cost they drop is
    accumulated in ``objective_offset``.  A non-fixed arc whose endpoints end
    up merged has a single admissible tension residue; if that residue misses
    its window (or a fixed cycle is inconsistent) the instance is infeasible.
    """
    g = inst.graph
    T = inst.period
    pairs = g.arc_index_pairs
    fixed = [a for a in range(g.m) if inst.lower[a] == inst.upper[a]]

    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in fixed:
        i, j = pairs[a]
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    # Offset of each vertex inside its fixed component, propagated along
    # fixed arcs from the component representative.
    comp_adj = [[] for _ in range(g.n)]
    for a in fixed:
        i, j = pairs[a]
        comp_adj[i].append((j, inst.lower[a], a))
        comp_adj[j].append((i, -inst.lower[a], a))
    delta = [None] * g.n
    for v in range(g.n):
        root = find(v)
        if delta[root] is None:
            delta[root] = 0
            stack = [root]
            while stack:
                x = stack.pop()
                for y, step, _ in comp_adj[x]:
                    if delta[y] is None:
                        delta[y] = delta[x] + step
                        stack.append(y)
    for a in fixed:
        i, j = pairs[a]
        if (delta[j] - delta[i] - inst.lower[a]) % T != 0:
            raise InfeasibleFixedCycle(
                f"fixed arcs force an inconsistent cycle through arc {a}"
            )

    reps = sorted(set(find(v) for v in range(g.n)))
    rep_name = {r: g.vertices[r] for r in reps}
    vertex_map = {g.vertices[v]: rep_name[find(v)] for v in range(g.n)}

    offset = sum(inst.weight[a] * inst.lower[a] for a in fixed)
    new_arcs = []
    new_bounds = []
    for a in range(g.m):
        if inst.lower[a] == inst.upper[a]:
            continue
        i, j = pairs[a]
        ri, rj = find(i), find(j)
        shift = delta[i] - delta[j]
        lo_raw = inst.lower[a] + shift
        lo = lo_raw % T
        drop = lo_raw - lo  # multiple of T absorbed into the new bounds
        if ri == rj:
            # Arc collapses to a loop: its tension is forced to the unique
            # residue of -shift inside [lower, lower + T).
            x = inst.lower[a] + ((-shift - inst.lower[a]) % T)
            if x > inst.upper[a]:
                raise InfeasibleFixedCycle(
                    f"arc {a} collapses to a loop with no admissible tension"
                )
            offset += inst.weight[a] * x
            continue
        new_arcs.append((rep_name[ri], rep_name[rj]))
        new_bounds.append((lo, lo + inst.span[a], inst.weight[a]))
        # Old tension = new tension + drop - shift on this arc.
        offset += inst.weight[a] * (drop - shift)

    new_vertices = tuple(rep_name[r] for r in reps)
    new_graph = Digraph(new_vertices, tuple(new_arcs))
    new_inst = PespInstance(
        new_graph,
        T,
        tuple(b[0] for b in new_bounds),
        tuple(b[1] for b in new_bounds),
        tuple(b[2] for b in new_bounds),
    )
    return ContractionResult(new_inst, vertex_map, offset)


def limit_instance(inst):
    """Same graph and weights with upper = lower + T (spans deliberately
    relaxed); every periodic offset class is nonempty for this instance."""
    return PespInstance(
        inst.graph,
        inst.period,
        inst.lower,
        tuple(l + inst.period for l in inst.lower),
        inst.weight,
        span_relaxed=True,
    )
