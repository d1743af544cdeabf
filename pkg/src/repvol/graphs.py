"""Bipartite reflection graphs and the face combinatorics behind the bounds.

A reflection graph is a finite connected r-valent bipartite graph carrying
a set of involutions ("reflections") that exchange the two vertex classes,
preserve the edge set, and are each tagged with the edges they transpose.
The group the reflections generate must move every vertex freely and must
split the edges into exactly r orbits.  Placing a copy of an r-faced piece
template at every vertex and gluing neighbours along face k for the k-th
edge orbit yields a gluing complex whose volume bound divides by the group
order; ``g_replicant`` builds that complex.  ``product_p1`` doubles a
validated graph into two layers joined by vertical edges, raising the
valence by one; iterated on an even cycle it produces prism and hyperprism
graphs.

The second half of the module works with rotation systems on multigraphs.
``trace_faces`` recovers the faces of the induced closed surface, and two
checks built on it decide whether a diagram supports the cell structures
the volume estimates need: ``bigon_bound_check`` on spheres and
``torus_boundary_check`` on tori.
"""

from collections import Counter, deque
from fractions import Fraction
from typing import NamedTuple

from . import pieces
from .bounds import AMBIENTS

GROUP_LIMIT = 10 ** 6


class GraphError(ValueError):
    """A graph, reflection, or rotation input is malformed."""


class NotBipartite(GraphError):
    """The graph has an odd cycle or a loop."""


class NotConnected(GraphError):
    """The graph is empty or falls into several components."""


class NotRegular(GraphError):
    """Vertex valences disagree, or the graph has no edges."""


class BadReflection(GraphError):
    """A reflection violates its axioms, or an edge has no reflection."""


class VertexStabilizerNontrivial(GraphError):
    """Some nontrivial generated symmetry fixes a vertex."""


class WrongEdgeClassCount(GraphError):
    """Edge orbits under the reflection group do not number the valence."""


class ValenceMismatch(GraphError):
    """Template face count differs from the graph valence."""


class NotValidated(GraphError):
    """The operation needs a graph that passed validation first."""


class IncompleteRotation(GraphError):
    """A rotation system misses, misplaces, or repeats an edge end."""


class WrongValence(GraphError):
    """A vertex valence differs from what the check requires."""


class NotSphere(GraphError):
    """The traced surface is not a 2-sphere."""


class GroupTooLarge(RuntimeError):
    """Group enumeration refused to exceed GROUP_LIMIT elements."""


def _norm_edge(pos, u, v):
    return (u, v) if pos[u] <= pos[v] else (v, u)


class Reflection:
    """An involution of the vertex set tagged with edges it transposes.

    ``mapping`` takes any dict or pair sequence; ``swaps`` is the sequence
    of distinguished edges.  Axioms are checked by the graph's validator,
    not here.
    """

    __slots__ = ("mapping", "swaps")

    def __init__(self, mapping, swaps):
        self.mapping = dict(mapping)
        self.swaps = tuple((a, b) for a, b in swaps)

    def __repr__(self):
        return "Reflection(%d vertices, %d swaps)" % (
            len(self.mapping), len(self.swaps))


class ReflectionGraph:
    """A finite simple graph with reflections, validated lazily.

    Vertices may be any hashable labels.  Edges are unordered pairs of
    vertices, stored with endpoints ordered by vertex position; duplicate
    edges are rejected here, loops are kept and fail validation later.
    ``reflections`` accepts Reflection objects, (mapping, swaps) pairs, or
    dicts with those keys.  ``ambient`` names the manifold the replicant
    links live in.  Construction checks shape only; call
    ``validate_reflection_graph`` for the real audit, whose report is
    cached on the instance.
    """

    __slots__ = ("vertices", "edges", "reflections", "ambient",
                 "_pos", "_report")

    def __init__(self, vertices, edges, reflections, ambient="S3"):
        self.vertices = tuple(vertices)
        pos = {}
        for v in self.vertices:
            if v in pos:
                raise GraphError("duplicate vertex %r" % (v,))
            pos[v] = len(pos)
        self._pos = pos
        if ambient not in AMBIENTS:
            raise GraphError("unknown ambient %r" % (ambient,))
        self.ambient = ambient

        seen = set()
        normal = []
        for edge in edges:
            u, v = edge
            if u not in pos or v not in pos:
                raise GraphError(
                    "edge %r has an endpoint that is not a vertex" % (edge,))
            e = _norm_edge(pos, u, v)
            if e in seen:
                raise GraphError("duplicate edge %r" % (e,))
            seen.add(e)
            normal.append(e)
        normal.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
        self.edges = tuple(normal)

        coerced = []
        for item in reflections:
            if isinstance(item, Reflection):
                coerced.append(item)
            elif isinstance(item, dict):
                coerced.append(Reflection(item["mapping"],
                                          item.get("swaps", ())))
            else:
                mapping, swaps = item
                coerced.append(Reflection(mapping, swaps))
        self.reflections = tuple(coerced)
        self._report = None

    def __repr__(self):
        return "ReflectionGraph(%d vertices, %d edges, %d reflections, %s)" % (
            len(self.vertices), len(self.edges), len(self.reflections),
            self.ambient)


class ValidationReport(NamedTuple):
    """What validation established: valence, group order, orbits, parts."""
    valence: int
    group_order: int
    edge_classes: tuple
    parts: tuple


def validate_reflection_graph(graph):
    """Audit ``graph`` against the reflection-graph contract.

    Checks run in a fixed order: bipartiteness, connectivity, regularity,
    then per reflection the permutation/involution/class-swap/edge-
    preservation axioms and tag correctness, then tag coverage of every
    edge, then the generated group (enumerated explicitly, refused above
    GROUP_LIMIT): no nontrivial element may fix a vertex and the edge
    orbits must number exactly the valence.  The report is cached on the
    instance and returned on later calls without rechecking.
    """
    if graph._report is not None:
        return graph._report
    if not graph.vertices:
        raise NotConnected("the graph has no vertices")
    pos = graph._pos
    n = len(graph.vertices)

    adj = {v: [] for v in graph.vertices}
    for u, v in graph.edges:
        if u == v:
            raise NotBipartite("loop at %r" % (u,))
        adj[u].append(v)
        adj[v].append(u)

    color = {}
    for root in graph.vertices:
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    raise NotBipartite("odd cycle through %r" % (w,))

    reached = {graph.vertices[0]}
    queue = deque(reached)
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in reached:
                reached.add(w)
                queue.append(w)
    if len(reached) != n:
        raise NotConnected("%d of %d vertices reachable from %r"
                           % (len(reached), n, graph.vertices[0]))

    degrees = {len(adj[v]) for v in graph.vertices}
    if len(degrees) != 1:
        raise NotRegular("valences %s" % sorted(degrees))
    valence = degrees.pop()
    if valence == 0:
        raise NotRegular("the graph has no edges")

    edge_set = set(graph.edges)
    tagged = set()
    perms = []
    for idx, refl in enumerate(graph.reflections):
        mapping = refl.mapping
        if set(mapping) != set(graph.vertices) or \
                set(mapping.values()) != set(graph.vertices):
            raise BadReflection(
                "reflection %d is not a permutation of the vertex set" % idx)
        for v in graph.vertices:
            if mapping[mapping[v]] != v:
                raise BadReflection("reflection %d is not an involution" % idx)
            if color[mapping[v]] == color[v]:
                raise BadReflection(
                    "reflection %d keeps %r on its own side" % (idx, v))
        for u, v in graph.edges:
            if _norm_edge(pos, mapping[u], mapping[v]) not in edge_set:
                raise BadReflection(
                    "reflection %d does not preserve the edge %r"
                    % (idx, (u, v)))
        if not refl.swaps:
            raise BadReflection("reflection %d is tagged with no edge" % idx)
        for a, b in refl.swaps:
            if a not in pos or b not in pos or \
                    _norm_edge(pos, a, b) not in edge_set:
                raise BadReflection(
                    "reflection %d tags %r, which is not an edge"
                    % (idx, (a, b)))
            if mapping[a] != b:
                raise BadReflection(
                    "reflection %d does not transpose its tagged edge %r"
                    % (idx, (a, b)))
            tagged.add(_norm_edge(pos, a, b))
        perms.append(tuple(pos[mapping[v]] for v in graph.vertices))

    for edge in graph.edges:
        if edge not in tagged:
            raise BadReflection(
                "edge %r has no distinguished reflection" % (edge,))

    identity = tuple(range(n))
    generators = sorted(set(perms))
    elements = {identity}
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for gen in generators:
            q = tuple(gen[i] for i in p)
            if q not in elements:
                if len(elements) >= GROUP_LIMIT:
                    raise GroupTooLarge(
                        "the reflection group exceeds %d elements"
                        % GROUP_LIMIT)
                elements.add(q)
                queue.append(q)

    for p in elements:
        if p == identity:
            continue
        for i, image in enumerate(p):
            if image == i:
                raise VertexStabilizerNontrivial(
                    "a nontrivial symmetry fixes the vertex %r"
                    % (graph.vertices[i],))

    edge_index = {e: k for k, e in enumerate(graph.edges)}
    assigned = set()
    classes = []
    for start in range(len(graph.edges)):
        if start in assigned:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            k = queue.popleft()
            u, v = graph.edges[k]
            for refl in graph.reflections:
                image = _norm_edge(pos, refl.mapping[u], refl.mapping[v])
                j = edge_index[image]
                if j not in orbit:
                    orbit.add(j)
                    queue.append(j)
        assigned |= orbit
        classes.append(tuple(graph.edges[k] for k in sorted(orbit)))
    if len(classes) != valence:
        raise WrongEdgeClassCount(
            "%d edge classes for a %d-valent graph" % (len(classes), valence))

    parts = (tuple(v for v in graph.vertices if color[v] == 0),
             tuple(v for v in graph.vertices if color[v] == 1))
    report = ValidationReport(valence, len(elements), tuple(classes), parts)
    graph._report = report
    return report


class GReplicant(NamedTuple):
    """A replicant complex and the group order its volume divides by."""
    complex: object
    group_order: int


def g_replicant(graph, template, seed=None):
    """Place a copy of ``template`` at every vertex, glued along edges.

    The k-th edge class (classes ordered by their smallest edge) glues
    along face k+1 of both neighbouring copies, so the template must have
    exactly as many faces as the graph valence.  Copy labels are vertex
    positions.  ``seed`` picks the vertex anchoring the construction; it
    is validated but the complex does not depend on it, because every
    reflection fixes glued endpoint labels.
    """
    report = graph._report
    if report is None:
        raise NotValidated("validate the graph before building a replicant")
    if seed is None:
        seed = graph.vertices[0]
    if seed not in graph._pos:
        raise GraphError("seed %r is not a vertex" % (seed,))
    if len(template.faces) != report.valence:
        raise ValenceMismatch(
            "template %r has %d faces but the graph is %d-valent"
            % (template.id, len(template.faces), report.valence))
    face_of = {}
    for k, cls in enumerate(report.edge_classes):
        for edge in cls:
            face_of[edge] = k + 1
    pos = graph._pos
    copies = [(template, (i,)) for i in range(len(graph.vertices))]
    gluings = [(((pos[u],), face_of[(u, v)]), ((pos[v],), face_of[(u, v)]))
               for u, v in graph.edges]
    return GReplicant(pieces.GluingComplex(copies, gluings),
                      report.group_order)


def product_p1(graph):
    """Double a validated graph into two layers joined by vertical edges.

    Each reflection lifts to act on both layers at once, with its tags
    duplicated upstairs and downstairs; one new reflection swaps the
    layers and is tagged with every vertical edge.  The result has twice
    the vertices, valence r+1, and is validated before it is returned.
    """
    if graph._report is None:
        raise NotValidated("validate the graph before taking a product")
    layers = (0, 1)
    vertices = [(v, i) for i in layers for v in graph.vertices]
    edges = [((u, i), (v, i)) for i in layers for u, v in graph.edges]
    edges += [((v, 0), (v, 1)) for v in graph.vertices]
    reflections = []
    for refl in graph.reflections:
        mapping = {(v, i): (refl.mapping[v], i)
                   for i in layers for v in graph.vertices}
        swaps = [((a, i), (b, i)) for i in layers for a, b in refl.swaps]
        reflections.append(Reflection(mapping, swaps))
    flip = {(v, i): (v, 1 - i) for i in layers for v in graph.vertices}
    vertical = [((v, 0), (v, 1)) for v in graph.vertices]
    reflections.append(Reflection(flip, vertical))
    out = ReflectionGraph(vertices, edges, reflections, graph.ambient)
    validate_reflection_graph(out)
    return out


def cycle_reflection_graph(size, ambient="S3"):
    """The even cycle on ``size`` >= 4 vertices with its edge reflections.

    Reflection a (one per antipodal edge pair, a = 0..size/2-1) maps v to
    2a+1-v and is tagged with the two edges it transposes.  Together they
    generate a dihedral group of order ``size`` acting freely, and the
    edges fall into two classes, alternating around the cycle.
    """
    size = int(size)
    if size < 4 or size % 2:
        raise GraphError("cycle size must be an even integer of at least 4")
    vertices = range(size)
    edges = [(v, (v + 1) % size) for v in vertices]
    half = size // 2
    reflections = []
    for a in range(half):
        mapping = {v: (2 * a + 1 - v) % size for v in vertices}
        swaps = [(a, a + 1),
                 ((a + half) % size, (a + half + 1) % size)]
        reflections.append(Reflection(mapping, swaps))
    return ReflectionGraph(vertices, edges, reflections, ambient)


def lattice_reflection_graph(rows, cols, ambient="S3"):
    """The torus grid of two even cycles with row and column reflections.

    Vertices are (i, j) with i mod ``rows`` and j mod ``cols``; both
    dimensions must be even and at least 4 (a 2-cycle would double its
    edges).  One reflection per antipodal pair of row circles flips i,
    one per pair of column circles flips j, each tagged with every edge
    it transposes.  Four edge classes result, matching the valence.
    """
    rows = int(rows)
    cols = int(cols)
    if rows < 4 or rows % 2 or cols < 4 or cols % 2:
        raise GraphError(
            "lattice dimensions must be even integers of at least 4")
    vertices = [(i, j) for i in range(rows) for j in range(cols)]
    edges = []
    for i, j in vertices:
        edges.append(((i, j), ((i + 1) % rows, j)))
        edges.append(((i, j), (i, (j + 1) % cols)))
    reflections = []
    for a in range(rows // 2):
        mapping = {(i, j): ((2 * a + 1 - i) % rows, j) for i, j in vertices}
        swaps = []
        for i in (a, (a + rows // 2) % rows):
            swaps += [((i, j), ((i + 1) % rows, j)) for j in range(cols)]
        reflections.append(Reflection(mapping, swaps))
    for b in range(cols // 2):
        mapping = {(i, j): (i, (2 * b + 1 - j) % cols) for i, j in vertices}
        swaps = []
        for j in (b, (b + cols // 2) % cols):
            swaps += [((i, j), (i, (j + 1) % cols)) for i in range(rows)]
        reflections.append(Reflection(mapping, swaps))
    return ReflectionGraph(vertices, edges, reflections, ambient)


def _vertex_out(v):
    if isinstance(v, tuple):
        return [_vertex_out(x) for x in v]
    return v


def _vertex_in(v):
    if isinstance(v, list):
        return tuple(_vertex_in(x) for x in v)
    return v


def graph_to_json_dict(graph):
    """Serialize a ReflectionGraph; tuples become lists, recursively."""
    pos = graph._pos
    order = len(pos)
    return {
        "vertices": [_vertex_out(v) for v in graph.vertices],
        "edges": [[_vertex_out(u), _vertex_out(v)]
                  for u, v in graph.edges],
        "reflections": [
            {"mapping": [[_vertex_out(k), _vertex_out(w)]
                         for k, w in sorted(
                             r.mapping.items(),
                             key=lambda kv: (pos.get(kv[0], order),
                                             repr(kv[0])))],
             "swaps": [[_vertex_out(a), _vertex_out(b)]
                       for a, b in r.swaps]}
            for r in graph.reflections],
        "ambient": graph.ambient,
    }


def graph_from_json_dict(data):
    """Rebuild a ReflectionGraph from its JSON dictionary."""
    try:
        vertices = [_vertex_in(v) for v in data["vertices"]]
        edges = [(_vertex_in(u), _vertex_in(v)) for u, v in data["edges"]]
        reflections = [
            Reflection({_vertex_in(k): _vertex_in(w)
                        for k, w in item["mapping"]},
                       [(_vertex_in(a), _vertex_in(b))
                        for a, b in item["swaps"]])
            for item in data["reflections"]]
        ambient = data.get("ambient", "S3")
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError("malformed graph JSON: %s" % exc) from None
    return ReflectionGraph(vertices, edges, reflections, ambient)


def _plain_graph(g):
    if isinstance(g, ReflectionGraph):
        return g.vertices, g.edges
    vertices, edges = g
    return tuple(vertices), tuple(tuple(e) for e in edges)


def graph_isomorphic(a, b):
    """Search for a vertex bijection of ``a`` onto ``b`` preserving edges.

    Accepts ReflectionGraph instances or (vertices, edges) pairs; only
    the underlying simple graphs are compared, reflections are ignored.
    Backtracking over a breadth-first vertex order with iff-adjacency
    pruning against everything already mapped; meant for the small graphs
    handled here.  Returns a mapping dict, or None.
    """
    va, ea = _plain_graph(a)
    vb, eb = _plain_graph(b)
    if len(va) != len(vb) or len(ea) != len(eb):
        return None
    adj_a = {v: set() for v in va}
    for u, v in ea:
        adj_a[u].add(v)
        adj_a[v].add(u)
    adj_b = {v: set() for v in vb}
    for u, v in eb:
        adj_b[u].add(v)
        adj_b[v].add(u)
    if sorted(len(s) for s in adj_a.values()) != \
            sorted(len(s) for s in adj_b.values()):
        return None
    pos_a = {v: i for i, v in enumerate(va)}
    pos_b = {v: i for i, v in enumerate(vb)}

    order = []
    seen = set()
    for root in va:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(adj_a[u], key=pos_a.get):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    mapping = {}
    used = set()

    def extend(k):
        if k == len(order):
            return True
        u = order[k]
        images = [mapping[w] for w in adj_a[u] if w in mapping]
        if images:
            candidates = set(adj_b[images[0]])
            for img in images[1:]:
                candidates &= adj_b[img]
        else:
            candidates = set(vb)
        degree = len(adj_a[u])
        for c in sorted(candidates - used, key=pos_b.get):
            if len(adj_b[c]) != degree:
                continue
            if any((mapping[w] in adj_b[c]) != (w in adj_a[u])
                   for w in mapping):
                continue
            mapping[u] = c
            used.add(c)
            if extend(k + 1):
                return True
            del mapping[u]
            used.discard(c)
        return False

    return dict(mapping) if extend(0) else None


class FaceReport(NamedTuple):
    """Faces of the closed surface a rotation system induces."""
    faces: tuple
    vector: tuple
    euler: int
    bipartite: bool


def trace_faces(edges, rotation):
    """Trace the faces of the ribbon graph (edges, rotation).

    ``edges`` lists unordered vertex pairs; repeated pairs and loops are
    allowed, and edges are identified by position.  ``rotation`` maps
    every vertex to the cyclic order of its incident edge ends as
    (edge_index, end) with end in {0, 1}; end s of edge e must sit at the
    vertex edges[e][s], and every end must appear exactly once overall.

    A dart (e, s) leaves the vertex holding end s.  Travelling it lands
    on end (e, 1-s), and the face continues with the next entry after
    that end in the host's cyclic list.  Returns the faces as dart
    tuples, the sorted (length, count) vector, the Euler characteristic
    V - E + F, and whether the underlying multigraph is bipartite.
    """
    edges = [tuple(e) for e in edges]
    rotation = {v: tuple((int(e), int(s)) for e, s in ends)
                for v, ends in rotation.items()}
    place = {}
    for v, ends in rotation.items():
        for i, (e, s) in enumerate(ends):
            if not 0 <= e < len(edges) or s not in (0, 1):
                raise IncompleteRotation(
                    "unknown edge end (%r, %r) at %r" % (e, s, v))
            if edges[e][s] != v:
                raise IncompleteRotation(
                    "end (%d, %d) listed at %r but edge %d puts it at %r"
                    % (e, s, v, e, edges[e][s]))
            if (e, s) in place:
                raise IncompleteRotation(
                    "end (%d, %d) appears more than once" % (e, s))
            place[(e, s)] = (v, i)
    for e in range(len(edges)):
        for s in (0, 1):
            if (e, s) not in place:
                raise IncompleteRotation(
                    "end (%d, %d) is missing from the rotation at %r"
                    % (e, s, edges[e][s]))

    faces = []
    traced = set()
    for start in sorted(place):
        if start in traced:
            continue
        walk = []
        dart = start
        while True:
            walk.append(dart)
            traced.add(dart)
            e, s = dart
            v, i = place[(e, 1 - s)]
            ends = rotation[v]
            dart = ends[(i + 1) % len(ends)]
            if dart == start:
                break
        faces.append(tuple(walk))

    lengths = Counter(len(f) for f in faces)
    euler = len(rotation) - len(edges) + len(faces)

    bipartite = all(u != v for u, v in edges)
    if bipartite:
        adj = {v: [] for v in rotation}
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        color = {}
        for root in rotation:
            if root in color:
                continue
            color[root] = 0
            queue = deque([root])
            while queue and bipartite:
                u = queue.popleft()
                for w in adj[u]:
                    if w not in color:
                        color[w] = 1 - color[u]
                        queue.append(w)
                    elif color[w] == color[u]:
                        bipartite = False
                        break
            if not bipartite:
                break
    if bipartite:
        assert all(k % 2 == 0 for k in lengths)

    return FaceReport(tuple(faces), tuple(sorted(lengths.items())),
                      euler, bipartite)


class BigonCheck(NamedTuple):
    """Outcome of the sphere bigon-count estimate."""
    passed: bool
    bigons: int
    required: int
    report: FaceReport


def bigon_bound_check(edges, rotation, n):
    """Check f2 >= 2(n+1) for a 2(n+1)-valent rotation system on a sphere.

    Raises WrongValence unless every vertex carries exactly 2(n+1) edge
    ends, and NotSphere unless the traced surface has Euler
    characteristic 2.  The exact identity

        sum over face lengths k of  f_k (2(n+1) - nk) / (2(n+1))  =  2,

    the Euler count rewritten per face, is recomputed in Fractions as a
    guard before the bigon count is compared against 2(n+1).
    """
    n = int(n)
    if n < 1:
        raise GraphError("n must be at least 1")
    report = trace_faces(edges, rotation)
    want = 2 * (n + 1)
    for v in sorted(rotation, key=repr):
        if len(rotation[v]) != want:
            raise WrongValence(
                "vertex %r has valence %d, expected %d"
                % (v, len(rotation[v]), want))
    if report.euler != 2:
        raise NotSphere("Euler characteristic %d" % report.euler)
    total = sum((Fraction(want - n * k, want) * count
                 for k, count in report.vector), Fraction(0))
    assert total == 2, total
    bigons = dict(report.vector).get(2, 0)
    return BigonCheck(bigons >= want, bigons, want, report)


class TorusVerdict(NamedTuple):
    """Whether a rotation system gives a square decomposition of a torus."""
    compatible: bool
    reason: str
    detail: str
    report: FaceReport


def torus_boundary_check(edges, rotation):
    """Decide whether a rotation system decomposes a torus into squares.

    The checks run in order and the first failure names the verdict:
    NotConnected, ChiMismatch (Euler characteristic must vanish),
    BigonFace, OddCycle (the graph must be bipartite), WrongValence
    (4 everywhere), NonSquareFace.  Success reports CompatibleSquares.
    """
    report = trace_faces(edges, rotation)
    if not rotation:
        return TorusVerdict(False, "NotConnected",
                            "the graph has no vertices", report)

    adj = {v: set() for v in rotation}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    start = next(iter(rotation))
    reached = {start}
    queue = deque(reached)
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in reached:
                reached.add(w)
                queue.append(w)
    if len(reached) != len(adj):
        return TorusVerdict(False, "NotConnected",
                            "%d of %d vertices reachable"
                            % (len(reached), len(adj)), report)

    if report.euler != 0:
        return TorusVerdict(False, "ChiMismatch",
                            "Euler characteristic %d, expected 0"
                            % report.euler, report)
    lengths = dict(report.vector)
    if lengths.get(2):
        return TorusVerdict(False, "BigonFace",
                            "%d bigon faces obstruct a square decomposition"
                            % lengths[2], report)
    if not report.bipartite:
        return TorusVerdict(False, "OddCycle",
                            "the graph carries an odd cycle", report)
    for v in sorted(rotation, key=repr):
        if len(rotation[v]) != 4:
            return TorusVerdict(False, "WrongValence",
                                "vertex %r has valence %d, expected 4"
                                % (v, len(rotation[v])), report)
    if set(lengths) != {4}:
        other = sorted(k for k in lengths if k != 4)
        return TorusVerdict(False, "NonSquareFace",
                            "face lengths %s present" % other, report)
    return TorusVerdict(True, "CompatibleSquares",
                        "every face is a square on a torus", report)
