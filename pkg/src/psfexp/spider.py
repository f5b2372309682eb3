"""Combinatorial spider graph of a preperiodic external address.

The graph carries the orbit points e_1 .. e_{l+k} with their itinerary
tails, the gluing of vertices with identical tails, the strip each leg
runs in, and the vertical order of legs.  Together with the partition
edges this is the full combinatorial content of the plane embedding; the
geometry itself is homotopy and not represented.
"""

import json
from dataclasses import dataclass

from .errors import ConsistencyError, FirstEntryNonzeroError, FormatError
from .itinerary import kneading
from .symbolic import ExternalAddress, parse_address

_JSON_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SpiderVertex:
    """Orbit point e_n: its address, itinerary tail and strip label."""

    index: int
    address: ExternalAddress
    tail: ExternalAddress
    strip: int


@dataclass(frozen=True)
class LevyWitness:
    """Two distinct orbit points with identical itinerary tails; a curve
    around them would generate a Levy cycle of the given length."""

    i: int
    j: int
    cycle_length: int


@dataclass(frozen=True)
class SpiderGraph:
    address: ExternalAddress
    kneading: ExternalAddress
    vertices: tuple
    glue_classes: tuple
    vertical_order: tuple
    strip_window: tuple
    partition_edges: tuple

    @property
    def preperiod(self):
        return self.address.preperiod_length

    @property
    def period(self):
        return self.address.period_length

    def glue_class_of(self, index):
        for cls in self.glue_classes:
            if index in cls:
                return cls
        raise KeyError(index)


def build_graph(s):
    """Construct the spider graph of a strictly preperiodic address with
    first entry 0."""
    u = kneading(s)  # validates the preconditions
    if s.entry(1) != 0:
        raise FirstEntryNonzeroError("spider graph requires first entry 0, got %s" % s)
    l, k = s.preperiod_length, s.period_length
    n_total = l + k
    vertices = []
    for n in range(1, n_total + 1):
        vertices.append(SpiderVertex(
            index=n,
            address=s.shifted(n - 1),
            tail=u.shifted(n - 1),
            strip=u.entry(n),
        ))

    # glue by equal tails; tails are exact values, so grouping is exact
    by_tail = {}
    for v in vertices:
        by_tail.setdefault(v.tail, []).append(v.index)
    glue_classes = tuple(sorted(tuple(sorted(g)) for g in by_tail.values()))

    for cls in glue_classes:
        if 1 in cls and len(cls) > 1:
            raise ConsistencyError("singular value vertex e1 glued in graph of %s" % s)
        strips = {vertices[i - 1].strip for i in cls}
        if len(strips) != 1:
            raise ConsistencyError("glued vertices with different strips in graph of %s" % s)

    vertical_order = tuple(sorted(range(1, n_total + 1),
                                  key=lambda n: vertices[n - 1].address))

    strips = sorted({v.strip for v in vertices})
    strip_window = tuple(range(strips[0] - 1, strips[-1] + 2))
    # strip j is bounded below by edge p_j and above by p_{j+1}
    partition_edges = tuple(range(strip_window[0], strip_window[-1] + 2))

    return SpiderGraph(
        address=s,
        kneading=u,
        vertices=tuple(vertices),
        glue_classes=glue_classes,
        vertical_order=vertical_order,
        strip_window=strip_window,
        partition_edges=partition_edges,
    )


def detect_levy(s, use_gluing=True):
    """Levy-cycle witness: two distinct vertices with equal tails.

    With gluing applied such vertices have been merged and None is always
    returned; with gluing suppressed the first witness in index order is
    returned, or None when all tails differ.
    """
    g = build_graph(s)
    for cls in g.glue_classes:
        if len(cls) < 2:
            continue
        if use_gluing:
            continue  # merged away by construction
        i, j = cls[0], cls[1]
        return LevyWitness(i=i, j=j, cycle_length=g.vertices[i - 1].tail.period_length)
    return None


def check_unlinking(g):
    """No two glue classes interleave in the vertical order.

    Returns (ok, violations) where violations lists quadruples of vertex
    indices (a1, b1, a2, b2) with a1 < b1 < a2 < b2 in address order,
    {a1, a2} in one glue class and {b1, b2} in another.
    """
    violations = []
    classes = [cls for cls in g.glue_classes if len(cls) >= 2]
    for ca in classes:
        for cb in classes:
            if ca >= cb:
                continue
            for a1 in ca:
                for a2 in ca:
                    if a1 == a2:
                        continue
                    for b1 in cb:
                        for b2 in cb:
                            if b1 == b2:
                                continue
                            chain = [g.vertices[i - 1].address for i in (a1, b1, a2, b2)]
                            if all(chain[i] < chain[i + 1] for i in range(3)):
                                violations.append((a1, b1, a2, b2))
    return (not violations, violations)


def _merged_nodes(g):
    """One node per glue class, labelled by its members in vertical order."""
    order_pos = {n: i for i, n in enumerate(g.vertical_order)}
    nodes = []
    for cls in g.glue_classes:
        rep = cls[0]
        cyclic = tuple(sorted(cls, key=order_pos.get))
        nodes.append((rep, cls, cyclic))
    nodes.sort()
    return nodes


def export_graph(g, fmt="dot"):
    """Serialize the graph; DOT for rendering, JSON for round-trips."""
    if fmt == "dot":
        return _to_dot(g)
    if fmt == "json":
        return _to_json(g)
    raise FormatError("unsupported graph format %r" % fmt)


def _to_dot(g):
    lines = ["graph spider {"]
    rep_of = {}
    for rep, cls, cyclic in _merged_nodes(g):
        for n in cls:
            rep_of[n] = rep
        label = "~".join("e%d" % n for n in cls)
        attrs = ['label="%s"' % label, 'strip="%d"' % g.vertices[rep - 1].strip]
        if len(cls) > 1:
            attrs.append('cyclic_order="%s"' % " ".join(str(n) for n in cyclic))
        lines.append('  "e%d" [%s];' % (rep, ", ".join(attrs)))
    lines.append('  "einf" [label="e_inf"];')
    for v in g.vertices:
        lines.append('  "e%d" -- "einf" [label="leg%d", strip="%d"];'
                     % (rep_of[v.index], v.index, v.strip))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_json(g):
    doc = {
        "schema": _JSON_SCHEMA_VERSION,
        "address": str(g.address),
        "kneading": str(g.kneading),
        "preperiod": g.preperiod,
        "period": g.period,
        "vertices": [
            {"index": v.index, "address": str(v.address),
             "tail": str(v.tail), "strip": v.strip}
            for v in g.vertices
        ],
        "glue_classes": [list(cls) for cls in g.glue_classes],
        "vertical_order": list(g.vertical_order),
        "strip_window": list(g.strip_window),
        "partition_edges": list(g.partition_edges),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def spider_graph_from_json(text):
    """Rebuild a SpiderGraph from its JSON export and re-validate it
    against a fresh construction."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("not valid JSON: %s" % exc) from None
    if doc.get("schema") != _JSON_SCHEMA_VERSION:
        raise FormatError("unknown spider graph schema %r" % doc.get("schema"))
    rebuilt = build_graph(parse_address(doc["address"]))
    if _to_json(rebuilt) != json.dumps(doc, indent=2, sort_keys=True) + "\n":
        raise ConsistencyError("serialized graph disagrees with reconstruction")
    return rebuilt
