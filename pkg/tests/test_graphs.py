import random

import pytest

from repvol import pieces
from repvol.graphs import (
    BadReflection, GraphError, GroupTooLarge, IncompleteRotation,
    NotBipartite, NotConnected, NotRegular, NotSphere, NotValidated,
    Reflection, ReflectionGraph, ValenceMismatch, VertexStabilizerNontrivial,
    WrongValence,
    bigon_bound_check, cycle_reflection_graph, g_replicant,
    graph_from_json_dict, graph_isomorphic, graph_to_json_dict,
    lattice_reflection_graph, product_p1, torus_boundary_check, trace_faces,
    validate_reflection_graph,
)
import repvol.graphs as graphs_module


def cube_reflection_graph():
    verts = list(range(8))
    edges = [(v, v ^ (1 << b)) for v in verts for b in range(3)
             if v < v ^ (1 << b)]
    reflections = []
    for b in range(3):
        mapping = {v: v ^ (1 << b) for v in verts}
        swaps = [(v, v ^ (1 << b)) for v in verts if v < v ^ (1 << b)]
        reflections.append(Reflection(mapping, swaps))
    return ReflectionGraph(verts, edges, reflections)


def k33_reflection_graph():
    a = ["a0", "a1", "a2"]
    b = ["b0", "b1", "b2"]
    reflections = []
    for shift in range(3):
        mapping = {}
        for i in range(3):
            mapping[a[i]] = b[(i + shift) % 3]
            mapping[b[(i + shift) % 3]] = a[i]
        reflections.append(Reflection(
            mapping, [(a[i], b[(i + shift) % 3]) for i in range(3)]))
    return ReflectionGraph(a + b, [(x, y) for x in a for y in b], reflections)


def dipole(count, planar=True):
    """``count`` parallel edges between u and v.

    The planar rotation reverses the order at v, giving all bigons on a
    sphere.  Otherwise the last two ends at v are swapped, which merges
    faces and pushes the embedding onto a torus.
    """
    edges = [("u", "v")] * count
    ends_v = [(i, 1) for i in range(count)]
    if planar:
        ends_v.reverse()
    else:
        ends_v[-1], ends_v[-2] = ends_v[-2], ends_v[-1]
    rotation = {"u": [(i, 0) for i in range(count)], "v": ends_v}
    return edges, rotation


def grid_torus():
    hidx, vidx, edges = {}, {}, []
    for i in range(2):
        for j in range(2):
            hidx[(i, j)] = len(edges)
            edges.append(((i, j), (i, (j + 1) % 2)))
    for i in range(2):
        for j in range(2):
            vidx[(i, j)] = len(edges)
            edges.append(((i, j), ((i + 1) % 2, j)))
    rotation = {}
    for i in range(2):
        for j in range(2):
            rotation[(i, j)] = [
                (hidx[(i, j)], 0), (vidx[((i - 1) % 2, j)], 1),
                (hidx[(i, (j - 1) % 2)], 1), (vidx[(i, j)], 0)]
    return edges, rotation


def octahedron():
    edges, eidx = [], {}
    for w in (1, 2, 3, 4):
        eidx[(0, w)] = len(edges)
        edges.append((0, w))
    for w in (1, 2, 3, 4):
        eidx[(w, 5)] = len(edges)
        edges.append((w, 5))
    for u, w in ((1, 2), (2, 3), (3, 4), (1, 4)):
        eidx[(u, w)] = len(edges)
        edges.append((u, w))
    orders = {0: [1, 2, 3, 4], 5: [4, 3, 2, 1],
              1: [0, 4, 5, 2], 2: [0, 1, 5, 3],
              3: [0, 2, 5, 4], 4: [0, 3, 5, 1]}
    rotation = {}
    for v, nbrs in orders.items():
        ends = []
        for w in nbrs:
            e = eidx[(min(v, w), max(v, w))]
            ends.append((e, 0 if v < w else 1))
        rotation[v] = ends
    return edges, rotation


# validation

def test_c6_validates():
    g = cycle_reflection_graph(6)
    report = validate_reflection_graph(g)
    assert report.valence == 2
    assert report.group_order == 6
    assert report.parts == ((0, 2, 4), (1, 3, 5))
    assert report.edge_classes == (((0, 1), (2, 3), (4, 5)),
                                   ((0, 5), (1, 2), (3, 4)))
    assert validate_reflection_graph(g) is report


def test_c6_orbit_oracle():
    # independent oracle: close the three midpoint reflections under
    # explicit composition, then take edge orbits by brute force
    size = 6
    gens = [{v: (2 * a + 1 - v) % size for v in range(size)}
            for a in range(3)]
    ident = {v: v for v in range(size)}
    elements = [ident]
    seen = {tuple(sorted(ident.items()))}
    frontier = [ident]
    while frontier:
        fresh = []
        for p in frontier:
            for g in gens:
                q = {v: g[p[v]] for v in range(size)}
                key = tuple(sorted(q.items()))
                if key not in seen:
                    seen.add(key)
                    elements.append(q)
                    fresh.append(q)
        frontier = fresh
    assert len(elements) == 6
    for p in elements:
        assert p == ident or all(p[v] != v for v in range(size))
    orbits = set()
    for u in range(size):
        v = (u + 1) % size
        orbits.add(frozenset(tuple(sorted((p[u], p[v]))) for p in elements))
    assert orbits == {frozenset({(0, 1), (2, 3), (4, 5)}),
                      frozenset({(0, 5), (1, 2), (3, 4)})}
    report = validate_reflection_graph(cycle_reflection_graph(6))
    assert {frozenset(c) for c in report.edge_classes} == orbits


def test_cycles_orbit_stabilizer():
    for size in (4, 6, 8, 10, 12):
        report = validate_reflection_graph(cycle_reflection_graph(size))
        assert report.valence == 2
        assert report.group_order == size
        assert len(report.edge_classes) == 2
        evens = {e for e in report.edge_classes[0]}
        assert all(min(e) % 2 == 0 for e in evens)


def test_lattice_validates():
    for rows, cols in ((4, 4), (6, 4), (4, 6)):
        g = lattice_reflection_graph(rows, cols)
        report = validate_reflection_graph(g)
        assert report.valence == 4
        assert len(report.edge_classes) == 4
        assert report.group_order == rows * cols == len(g.vertices)


def test_cube_and_k33_validate():
    report = validate_reflection_graph(cube_reflection_graph())
    assert (report.valence, report.group_order) == (3, 8)
    assert len(report.edge_classes) == 3
    report = validate_reflection_graph(k33_reflection_graph())
    assert (report.valence, report.group_order) == (3, 6)
    assert len(report.edge_classes) == 3


def test_c5_not_bipartite():
    g = ReflectionGraph(range(5), [(v, (v + 1) % 5) for v in range(5)], [])
    with pytest.raises(NotBipartite):
        validate_reflection_graph(g)


def test_loop_not_bipartite():
    g = ReflectionGraph([0, 1], [(0, 1), (1, 1)], [])
    with pytest.raises(NotBipartite):
        validate_reflection_graph(g)


def test_disconnected_checked_after_bipartite():
    edges = [(0, 1), (1, 2), (2, 3), (3, 0),
             (4, 5), (5, 6), (6, 7), (7, 4)]
    g = ReflectionGraph(range(8), edges, [])
    with pytest.raises(NotConnected):
        validate_reflection_graph(g)
    with pytest.raises(NotConnected):
        validate_reflection_graph(ReflectionGraph([], [], []))


def test_irregular():
    g = ReflectionGraph(range(3), [(0, 1), (1, 2)], [])
    with pytest.raises(NotRegular):
        validate_reflection_graph(g)
    with pytest.raises(NotRegular):
        validate_reflection_graph(ReflectionGraph([0], [], []))


def c6_with(reflection):
    return ReflectionGraph(range(6), [(v, (v + 1) % 6) for v in range(6)],
                           [reflection])


def test_bad_reflections():
    size = 6
    rho0 = {v: (1 - v) % size for v in range(size)}
    cases = [
        (Reflection({v: 0 for v in range(size)}, [(0, 1)]),
         "not a permutation"),
        (Reflection({v: (v + 1) % size for v in range(size)}, [(0, 1)]),
         "not an involution"),
        (Reflection({0: 2, 2: 0, 1: 1, 3: 3, 4: 4, 5: 5}, [(0, 1)]),
         "on its own side"),
        (Reflection({0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}, [(0, 1)]),
         "does not preserve"),
        (Reflection(rho0, [(0, 2)]), "not an edge"),
        (Reflection(rho0, [(1, 2)]), "transpose"),
        (Reflection(rho0, []), "tagged with no edge"),
    ]
    for reflection, needle in cases:
        with pytest.raises(BadReflection) as err:
            validate_reflection_graph(c6_with(reflection))
        assert needle in str(err.value)
    # rho0 alone is sound but leaves four edges without a reflection
    with pytest.raises(BadReflection) as err:
        validate_reflection_graph(
            c6_with(Reflection(rho0, [(0, 1), (3, 4)])))
    assert "no distinguished reflection" in str(err.value)


def test_vertex_stabilizer_detected():
    cube = cube_reflection_graph()

    def swap12(v):
        return (v & 1) | (((v >> 2) & 1) << 1) | (((v >> 1) & 1) << 2)

    tau = {v: swap12(v) ^ 1 for v in range(8)}
    extra = Reflection(tau, [(0, 1), (6, 7)])
    bad = ReflectionGraph(cube.vertices, cube.edges,
                          cube.reflections + (extra,))
    with pytest.raises(VertexStabilizerNontrivial):
        validate_reflection_graph(bad)


def test_group_cap(monkeypatch):
    monkeypatch.setattr(graphs_module, "GROUP_LIMIT", 4)
    with pytest.raises(GroupTooLarge):
        validate_reflection_graph(cycle_reflection_graph(6))


def test_construction_errors():
    with pytest.raises(GraphError):
        ReflectionGraph([0, 0], [], [])
    with pytest.raises(GraphError):
        ReflectionGraph([0, 1], [(0, 1), (1, 0)], [])
    with pytest.raises(GraphError):
        ReflectionGraph([0, 1], [(0, 2)], [])
    with pytest.raises(GraphError):
        ReflectionGraph([0, 1], [(0, 1)], [], ambient="R3")
    with pytest.raises(GraphError):
        cycle_reflection_graph(5)
    with pytest.raises(GraphError):
        cycle_reflection_graph(2)
    with pytest.raises(GraphError):
        lattice_reflection_graph(2, 4)
    with pytest.raises(GraphError):
        lattice_reflection_graph(4, 5)


# replicants

def test_cycle_replicant_matches_replicate():
    for size in (4, 6, 8):
        for template in (pieces.saucer_template("1/4"),
                         pieces.cylindrical_template("3")):
            g = cycle_reflection_graph(size)
            validate_reflection_graph(g)
            built = g_replicant(g, template)
            assert built.group_order == size
            direct = pieces.replicate(template, (size,))
            result = pieces.isomorphic(built.complex, direct)
            assert result.isomorphic
            assert pieces.verify_isomorphism(built.complex, direct,
                                             result.witness)


def test_prism_replicant_counts():
    g = product_p1(_validated(cycle_reflection_graph(6)))
    y = pieces.PieceTemplate(
        "Y", ((1, 2), (1, 2), (1, 2)),
        (((1, 1), (2, 1)), ((1, 2), (3, 1)), ((2, 2), (3, 2))))
    built = g_replicant(g, y)
    assert len(built.complex.copies) == 12
    assert len(built.complex.gluings) == 18
    assert built.group_order == 12
    assert not built.complex.unglued_slots()


def _validated(g):
    validate_reflection_graph(g)
    return g


def test_lattice_replicant_matches_replicate():
    g = _validated(lattice_reflection_graph(4, 4))
    template = pieces.square_template("B")
    built = g_replicant(g, template)
    assert built.group_order == 16
    direct = pieces.replicate(template, (4, 4))
    result = pieces.isomorphic(built.complex, direct)
    assert result.isomorphic
    assert pieces.verify_isomorphism(built.complex, direct, result.witness)


def test_replicant_guards():
    fresh = cycle_reflection_graph(6)
    saucer = pieces.saucer_template("t")
    with pytest.raises(NotValidated):
        g_replicant(fresh, saucer)
    g = _validated(cycle_reflection_graph(6))
    with pytest.raises(ValenceMismatch):
        g_replicant(g, pieces.square_template("sq"))
    with pytest.raises(GraphError):
        g_replicant(g, saucer, seed=17)
    complexes = [g_replicant(g, saucer, seed=v).complex for v in g.vertices]
    assert all(c == complexes[0] for c in complexes)


# products

def test_product_p1_prism():
    prism = product_p1(_validated(cycle_reflection_graph(6)))
    report = prism._report
    assert report is not None
    assert len(prism.vertices) == 12
    assert report.valence == 3
    assert report.group_order == 12
    assert len(report.edge_classes) == 3
    assert len(report.parts[0]) == len(report.parts[1]) == 6


def test_product_p1_chain_to_lattice():
    for n in (2, 3):
        g = _validated(cycle_reflection_graph(2 * n))
        prism = product_p1(g)
        hyper = product_p1(prism)
        assert len(hyper.vertices) == 8 * n
        assert hyper._report.valence == 4
        assert hyper._report.group_order == 8 * n
        lattice = _validated(lattice_reflection_graph(2 * n, 4))
        mapping = graph_isomorphic(hyper, lattice)
        assert mapping is not None
        edge_set = set(lattice.edges)
        for u, v in hyper.edges:
            image = (mapping[u], mapping[v])
            assert image in edge_set or image[::-1] in edge_set


def test_product_requires_validation():
    with pytest.raises(NotValidated):
        product_p1(cycle_reflection_graph(6))


def test_graph_isomorphic_rejects():
    a = _validated(cycle_reflection_graph(6))
    b = _validated(cycle_reflection_graph(8))
    assert graph_isomorphic(a, b) is None
    path = (range(4), [(0, 1), (1, 2), (2, 3)])
    star = (range(4), [(0, 1), (0, 2), (0, 3)])
    assert graph_isomorphic(path, star) is None
    assert graph_isomorphic(path, (range(4), [(3, 2), (0, 1), (2, 1)]))


# serialization

def test_graph_json_roundtrip():
    import json
    for g in (cycle_reflection_graph(6),
              product_p1(_validated(cycle_reflection_graph(4))),
              k33_reflection_graph()):
        data = graph_to_json_dict(g)
        json.dumps(data)
        back = graph_from_json_dict(data)
        assert back.vertices == g.vertices
        assert back.edges == g.edges
        assert back.ambient == g.ambient
        assert graph_to_json_dict(back) == data
        report = validate_reflection_graph(back)
        assert report == validate_reflection_graph(g)


def test_graph_json_malformed():
    with pytest.raises(GraphError):
        graph_from_json_dict({"vertices": [0, 1]})
    with pytest.raises(GraphError):
        graph_from_json_dict({"vertices": [0, 1], "edges": [[0]],
                              "reflections": []})


# face tracing

def test_trace_faces_fixtures():
    edges, rotation = dipole(4)
    report = trace_faces(edges, rotation)
    assert report.vector == ((2, 4),)
    assert report.euler == 2
    assert report.bipartite

    edges, rotation = dipole(4, planar=False)
    report = trace_faces(edges, rotation)
    assert report.vector == ((2, 1), (6, 1))
    assert report.euler == 0

    edges, rotation = grid_torus()
    report = trace_faces(edges, rotation)
    assert report.vector == ((4, 4),)
    assert report.euler == 0
    assert report.bipartite

    edges, rotation = octahedron()
    report = trace_faces(edges, rotation)
    assert report.vector == ((3, 8),)
    assert report.euler == 2
    assert not report.bipartite

    loops = [("w", "w")] * 3
    rotation = {"w": [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]}
    report = trace_faces(loops, rotation)
    assert report.vector == ((3, 2),)
    assert report.euler == 0
    assert not report.bipartite


def test_trace_faces_cube_squares():
    edges = []
    for v in range(8):
        for b in range(3):
            w = v ^ (1 << b)
            if v < w:
                edges.append((v, w))
    index = {e: k for k, e in enumerate(edges)}
    rotation = {}
    for v in range(8):
        bits = [0, 1, 2] if bin(v).count("1") % 2 == 0 else [2, 1, 0]
        ends = []
        for b in bits:
            w = v ^ (1 << b)
            ends.append((index[(min(v, w), max(v, w))], 0 if v < w else 1))
        rotation[v] = ends
    report = trace_faces(edges, rotation)
    assert report.vector == ((4, 6),)
    assert report.euler == 2
    assert report.bipartite


def test_trace_faces_k4_triangles():
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    index = {e: k for k, e in enumerate(edges)}
    orders = {0: [1, 2, 3], 1: [0, 3, 2], 2: [0, 1, 3], 3: [0, 2, 1]}
    rotation = {}
    for v, nbrs in orders.items():
        rotation[v] = [(index[(min(v, w), max(v, w))], 0 if v < w else 1)
                       for w in nbrs]
    report = trace_faces(edges, rotation)
    assert report.vector == ((3, 4),)
    assert report.euler == 2
    assert not report.bipartite


def test_trace_faces_random_invariants():
    rng = random.Random(1812)
    for _ in range(60):
        order = rng.randrange(2, 6)
        count = rng.randrange(1, 9)
        edges = [tuple(rng.sample(range(order), 2)) if rng.random() < 0.8
                 else (v := rng.randrange(order), v)
                 for _ in range(count)]
        ends = {v: [] for v in range(order)}
        for e, (u, v) in enumerate(edges):
            ends[u].append((e, 0))
            ends[v].append((e, 1))
        rotation = {}
        for v, mine in ends.items():
            if not mine:
                continue
            rng.shuffle(mine)
            rotation[v] = mine
        report = trace_faces(edges, rotation)
        assert sum(length * n for length, n in report.vector) == 2 * count
        assert sum(n for _, n in report.vector) == len(report.faces)
        assert report.euler % 2 == 0
        darts = [d for face in report.faces for d in face]
        assert sorted(darts) == sorted((e, s) for e in range(count)
                                       for s in (0, 1))


def test_incomplete_rotation():
    edges = [("u", "v")]
    with pytest.raises(IncompleteRotation):
        trace_faces(edges, {"u": [(0, 0)]})
    with pytest.raises(IncompleteRotation):
        trace_faces(edges, {"u": [(0, 0), (0, 0)], "v": [(0, 1)]})
    with pytest.raises(IncompleteRotation):
        trace_faces(edges, {"u": [(0, 1)], "v": [(0, 0)]})
    with pytest.raises(IncompleteRotation):
        trace_faces(edges, {"u": [(0, 0), (1, 0)], "v": [(0, 1)]})


# bigon bound

def test_bigon_bound_dipoles():
    for n in (1, 2, 3):
        edges, rotation = dipole(2 * (n + 1))
        check = bigon_bound_check(edges, rotation, n)
        assert check.passed
        assert check.bigons == check.required == 2 * (n + 1)
        assert check.report.euler == 2


def test_bigon_bound_fails_on_octahedron():
    edges, rotation = octahedron()
    check = bigon_bound_check(edges, rotation, 1)
    assert not check.passed
    assert check.bigons == 0
    assert check.required == 4


def test_bigon_bound_guards():
    edges, rotation = dipole(4)
    with pytest.raises(GraphError):
        bigon_bound_check(edges, rotation, 0)
    with pytest.raises(WrongValence):
        bigon_bound_check(edges, rotation, 2)
    edges, rotation = dipole(4, planar=False)
    with pytest.raises(NotSphere):
        bigon_bound_check(edges, rotation, 1)


# torus boundary

def test_torus_boundary_grid_accepts():
    edges, rotation = grid_torus()
    verdict = torus_boundary_check(edges, rotation)
    assert verdict.compatible
    assert verdict.reason == "CompatibleSquares"
    assert verdict.report.vector == ((4, 4),)


def test_torus_boundary_accepts_quadrangulated_dipole():
    # same cyclic order at both vertices: two square faces on the torus
    edges = [("u", "v")] * 4
    rotation = {"u": [(i, 0) for i in range(4)],
                "v": [(i, 1) for i in range(4)]}
    verdict = torus_boundary_check(edges, rotation)
    assert verdict.compatible
    assert verdict.report.vector == ((4, 2),)


def test_torus_boundary_rejections():
    edges, rotation = dipole(4, planar=False)
    verdict = torus_boundary_check(edges, rotation)
    assert (verdict.compatible, verdict.reason) == (False, "BigonFace")

    loops = [("w", "w")] * 3
    rot = {"w": [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]}
    verdict = torus_boundary_check(loops, rot)
    assert (verdict.compatible, verdict.reason) == (False, "OddCycle")

    theta = [("u", "v")] * 3
    rot = {"u": [(0, 0), (1, 0), (2, 0)], "v": [(0, 1), (1, 1), (2, 1)]}
    verdict = torus_boundary_check(theta, rot)
    assert (verdict.compatible, verdict.reason) == (False, "WrongValence")

    edges, rotation = dipole(4)
    verdict = torus_boundary_check(edges, rotation)
    assert (verdict.compatible, verdict.reason) == (False, "ChiMismatch")

    pairs = [("a", "b"), ("a", "b"), ("c", "d"), ("c", "d")]
    rot = {"a": [(0, 0), (1, 0)], "b": [(1, 1), (0, 1)],
           "c": [(2, 0), (3, 0)], "d": [(3, 1), (2, 1)]}
    verdict = torus_boundary_check(pairs, rot)
    assert (verdict.compatible, verdict.reason) == (False, "NotConnected")
