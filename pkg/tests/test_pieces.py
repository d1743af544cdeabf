import random

import pytest

from repvol import pieces
from repvol.pieces import (
    ComponentCount, EndpointMismatch, GluingComplex, OddDimension, OddLength,
    PieceError, PieceTemplate, ReplicantSchedule, ScheduleMismatch,
    SizeExceeded, TooFewStrands, build_bracelet, build_cylinder_stack,
    build_torus_lattice, count_components, cylindrical_template, isomorphic,
    replicate, saucer_template, split_union, square_template, template_union,
    verify_isomorphism,
)


def components_oracle(complex):
    """Independent count via union-find over endpoint nodes."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def join(x, y):
        parent.setdefault(x, x)
        parent.setdefault(y, y)
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    degree = {}
    for template, label in complex.copies:
        for a, b in template.strands:
            join(label + a, label + b)
            degree[label + a] = degree.get(label + a, 0) + 1
            degree[label + b] = degree.get(label + b, 0) + 1
    for g in complex.gluings:
        for x, y in g.pairing:
            na, nb = g.a[0] + (g.a[1], x), g.b[0] + (g.b[1], y)
            join(na, nb)
            degree[na] = degree.get(na, 0) + 1
            degree[nb] = degree.get(nb, 0) + 1

    loose_roots = {find(n) for n, d in degree.items() if d == 1}
    all_roots = {find(n) for n in parent}
    closed = len(all_roots - loose_roots)
    closed += sum(t.closed_components for t, _ in complex.copies)
    return ComponentCount(closed, len(loose_roots))


def random_template(rng, ell):
    counts = [rng.choice([0, 1, 2, 3]) for _ in range(2 * ell)]
    endpoints = [(f + 1, x) for f, n in enumerate(counts)
                 for x in range(1, n + 1)]
    if len(endpoints) % 2:
        counts[rng.randrange(2 * ell)] += 1
        endpoints = [(f + 1, x) for f, n in enumerate(counts)
                     for x in range(1, n + 1)]
    rng.shuffle(endpoints)
    strands = [(endpoints[i], endpoints[i + 1])
               for i in range(0, len(endpoints), 2)]
    return PieceTemplate("rnd", [range(1, n + 1) for n in counts], strands,
                         closed_components=rng.choice([0, 0, 1]))


# templates

def test_template_validation():
    with pytest.raises(PieceError):
        PieceTemplate("labels", ((2, 1), (1, 2)), ())
    with pytest.raises(PieceError):
        PieceTemplate("unmatched", ((1,), (1,)), ())
    with pytest.raises(PieceError):
        PieceTemplate("fixed", ((1, 2), (1, 2)),
                      (((1, 1), (1, 1)), ((1, 2), (2, 1))))
    with pytest.raises(PieceError):
        PieceTemplate("twice", ((1, 2), (1, 2)),
                      (((1, 1), (1, 2)), ((1, 1), (2, 1))))
    with pytest.raises(PieceError):
        PieceTemplate("offface", ((1,), (1,)), (((1, 1), (2, 5)),))


def test_template_equality_and_roundtrip():
    t = saucer_template("1/2")
    assert t == PieceTemplate.from_json_dict(t.to_json_dict())
    assert t != saucer_template("1/3")
    assert t.ell == 1
    assert t.mate((1, 1)) == (1, 2)

    sq = square_template("2")
    assert sq.ell == 2
    assert sq.interfaces == (1, 1)


def test_template_with_unpaired_face():
    y = PieceTemplate("Y", ((1, 2), (1, 2), (1, 2)),
                      (((1, 1), (2, 1)), ((1, 2), (3, 1)), ((2, 2), (3, 2))))
    assert y.ell == 1
    assert y.interfaces == (1,)
    assert y == PieceTemplate.from_json_dict(y.to_json_dict())
    with pytest.raises(ScheduleMismatch):
        replicate(y, (2,))


def test_template_union_shapes():
    u = template_union(saucer_template("a"), cylindrical_template("b"))
    assert u.faces == ((1, 2, 3, 4), (1, 2, 3, 4))
    assert ((1, 3), (2, 3)) in u.strands
    assert ((1, 1), (1, 2)) in u.strands
    with pytest.raises(PieceError):
        template_union(saucer_template("a"), square_template("b"))


# replication

def test_replicate_cycle_pattern():
    c = replicate(saucer_template("1/2"), (6,))
    assert len(c.copies) == 6
    neighbors = {}
    for g in c.gluings:
        neighbors.setdefault(g.a[0], set()).add(g.b[0])
        neighbors.setdefault(g.b[0], set()).add(g.a[0])
    for i in range(6):
        assert neighbors[(i,)] == {((i - 1) % 6,), ((i + 1) % 6,)}
    odd_face = {g for g in c.gluings if g.a[1] == 1}
    assert {(g.a[0], g.b[0]) for g in odd_face} == \
        {((0,), (1,)), ((2,), (3,)), ((4,), (5,))}


def test_replicate_copy_counts():
    sq = square_template("2")
    assert len(replicate(sq, (2, 4)).copies) == 8
    assert len(replicate(sq, (4, 6)).copies) == 24
    assert len(replicate(saucer_template("s"), (8,)).copies) == 8


def test_replicate_grid_pattern():
    c = replicate(square_template("2"), (2, 2))
    assert len(c.copies) == 4
    assert len(c.gluings) == 8
    glued = {}
    for g in c.gluings:
        glued.setdefault(g.a[0], []).append(g.b[0])
        glued.setdefault(g.b[0], []).append(g.a[0])
    for label, others in glued.items():
        assert len(others) == 4
        assert set(others) == {(label[0] ^ 1, label[1]),
                               (label[0], label[1] ^ 1)}


def test_replicate_closes_every_slot():
    rng = random.Random(7)
    for schedule in ((2,), (4,), (2, 2), (2, 4)):
        t = random_template(rng, len(schedule))
        c = replicate(t, schedule)
        assert c.unglued_slots() == []
        assert len(c.gluings) * 2 == sum(
            len(tpl.faces) for tpl, _ in c.copies)


def test_schedule_validation():
    t = square_template("2")
    with pytest.raises(ScheduleMismatch):
        replicate(t, (2,))
    with pytest.raises(ScheduleMismatch):
        replicate(t, (2, 3))
    with pytest.raises(ScheduleMismatch):
        replicate(t, (2, 0))
    with pytest.raises(ScheduleMismatch):
        replicate(t, ReplicantSchedule((2, 2), (1, 1)))
    with pytest.raises(ScheduleMismatch):
        replicate(t, 6)


def test_replicate_order_independence():
    t = square_template("2")
    one = replicate(t, ReplicantSchedule((2, 4), (1, 2)))
    two = replicate(t, ReplicantSchedule((2, 4), (2, 1)))
    assert one != two
    result = isomorphic(one, two)
    assert result.isomorphic
    assert verify_isomorphism(one, two, result.witness)


# isomorphism

def test_isomorphic_identity_and_sizes():
    c = replicate(saucer_template("x"), (4,))
    result = isomorphic(c, c)
    assert result.isomorphic
    assert result.witness == {label: label for _, label in c.copies}

    other = replicate(saucer_template("x"), (6,))
    assert not isomorphic(c, other).isomorphic


def test_isomorphic_respects_pairings():
    t = cylindrical_template("two")
    straight = replicate(t, (2,))
    twisted = GluingComplex(
        list(straight.copies),
        [(((0,), 1), ((1,), 1), ((1, 2), (2, 1))),
         (((1,), 2), ((0,), 2))])
    assert not isomorphic(straight, twisted).isomorphic
    assert isomorphic(twisted, twisted).isomorphic


def test_isomorphic_finds_relabeling():
    t = saucer_template("y")
    c = replicate(t, (6,))
    shifted = GluingComplex(
        [(t, ((label[0] + 2) % 6,)) for _, label in c.copies],
        [((((g.a[0][0] + 2) % 6,), g.a[1]),
          (((g.b[0][0] + 2) % 6,), g.b[1]))
         for g in c.gluings])
    result = isomorphic(c, shifted)
    assert result.isomorphic
    assert verify_isomorphism(c, shifted, result.witness)


def test_isomorphic_size_guard():
    c = replicate(saucer_template("big"), (10002,))
    with pytest.raises(SizeExceeded):
        isomorphic(c, c)


# bracelets

def test_homogeneous_bracelet_is_the_replicant():
    t = saucer_template("1/4")
    bracelet = build_bracelet([t] * 6)
    assert bracelet == replicate(t, (6,))
    result = isomorphic(bracelet, replicate(t, (6,)))
    assert result.isomorphic
    assert result.witness == {(i,): (i,) for i in range(6)}


def test_mixed_bracelet_valid():
    cycle = [saucer_template("1/4")] * 5 + [saucer_template("1/5")]
    bracelet = build_bracelet(cycle)
    assert len(bracelet.copies) == 6
    assert bracelet.unglued_slots() == []
    for g in bracelet.gluings:
        assert len(g.pairing) == 2


def test_bracelet_rejections():
    t = saucer_template("a")
    with pytest.raises(OddLength):
        build_bracelet([t] * 5)
    with pytest.raises(OddLength):
        build_bracelet([])

    wide = cylindrical_template("wide", 3)
    with pytest.raises(EndpointMismatch):
        build_bracelet([t, wide])

    thin = cylindrical_template("thin", 1)
    with pytest.raises(TooFewStrands):
        build_bracelet([thin, thin])


# lattices

def test_lattice_matches_replicant():
    sq = square_template("2")
    grid = [[sq, sq], [sq, sq]]
    lattice = build_torus_lattice(grid)
    assert lattice == replicate(sq, (2, 2))


def test_lattice_rejections():
    sq = square_template("2")
    with pytest.raises(OddDimension):
        build_torus_lattice([[sq] * 3, [sq] * 3])
    with pytest.raises(OddDimension):
        build_torus_lattice([[sq, sq]])
    with pytest.raises(PieceError):
        build_torus_lattice([[sq, sq], [sq]])
    with pytest.raises(PieceError):
        build_torus_lattice([[saucer_template("s")] * 2] * 2)


def test_lattice_copy_count():
    sq = square_template("h")
    lattice = build_torus_lattice([[sq] * 2] * 4)
    assert len(lattice.copies) == 8
    assert lattice.unglued_slots() == []


# cylinder stacks

def test_cylinder_stack_wraps():
    t = cylindrical_template("t")
    stack = build_cylinder_stack([t, t, t])
    assert len(stack.gluings) == 3
    assert stack.unglued_slots() == []
    assert count_components(stack) == ComponentCount(2, 0)

    solo = build_cylinder_stack([t])
    assert count_components(solo) == ComponentCount(2, 0)

    with pytest.raises(EndpointMismatch):
        build_cylinder_stack([t, cylindrical_template("w", 3)])
    with pytest.raises(PieceError):
        build_cylinder_stack([])


# component counting

def test_single_strand_replicant_closes_up():
    strand = cylindrical_template("strand", 1)
    c = replicate(strand, (2,))
    assert count_components(c) == ComponentCount(1, 0)


def test_chain_replicants():
    for n in range(1, 4):
        c = replicate(saucer_template("1/2"), (2 * n,))
        assert count_components(c) == ComponentCount(2 * n, 0)


def test_disjoint_loop_replicant():
    loop = PieceTemplate("loop", ((), ()), (), closed_components=1)
    c = replicate(loop, (2,))
    assert count_components(c) == ComponentCount(2, 0)


def test_open_strands_reported_separately():
    t = square_template("open")
    c = GluingComplex([(t, (0,)), (t, (1,))], [(((0,), 1), ((1,), 1))])
    assert count_components(c) == ComponentCount(0, 3)


def test_component_count_matches_oracle():
    rng = random.Random(2024)
    for _ in range(40):
        ell = rng.choice([1, 2])
        t = random_template(rng, ell)
        schedule = tuple(rng.choice([2, 4]) for _ in range(ell))
        c = replicate(t, schedule)
        assert count_components(c) == components_oracle(c)
    bracelet = build_bracelet([saucer_template("1/4")] * 5 +
                              [saucer_template("1/5")])
    assert count_components(bracelet) == components_oracle(bracelet)


def test_component_count_is_isomorphism_invariant():
    rng = random.Random(5)
    for _ in range(10):
        t = random_template(rng, 2)
        one = replicate(t, ReplicantSchedule((2, 4), (1, 2)))
        two = replicate(t, ReplicantSchedule((2, 4), (2, 1)))
        assert isomorphic(one, two).isomorphic
        assert count_components(one) == count_components(two)


# disjoint unions

def test_union_replicant_splits_componentwise():
    rng = random.Random(11)
    for schedule in ((2,), (4,)):
        p = random_template(rng, 1)
        q = saucer_template("1/2")
        u = template_union(p, q)
        whole = replicate(u, schedule)
        left, right = split_union(whole, p, q)
        assert isomorphic(left, replicate(p, schedule)).isomorphic
        assert isomorphic(right, replicate(q, schedule)).isomorphic
        total = count_components(whole)
        parts_closed = count_components(left).closed + \
            count_components(right).closed
        assert total.closed == parts_closed
        assert total.open == 0


def test_split_union_rejects_other_complexes():
    p = saucer_template("p")
    q = cylindrical_template("q")
    with pytest.raises(PieceError):
        split_union(replicate(p, (2,)), p, q)


# complex plumbing

def test_complex_validation():
    t = saucer_template("v")
    with pytest.raises(PieceError):
        GluingComplex([(t, (0,)), (t, (0,))], [])
    with pytest.raises(PieceError):
        GluingComplex([(t, (0,))], [(((0,), 1), ((0,), 1))])
    with pytest.raises(PieceError):
        GluingComplex([(t, (0,)), (t, (1,))],
                      [(((0,), 1), ((1,), 1)),
                       (((0,), 1), ((1,), 2))])
    with pytest.raises(PieceError):
        GluingComplex([(t, (0,)), (t, (1,))],
                      [(((0,), 1), ((1,), 1), ((1, 1), (2, 1)))])
    with pytest.raises(PieceError):
        GluingComplex([(t, (0,))], [(((0,), 1), ((2,), 1))])


def test_complex_json_roundtrip():
    bracelet = build_bracelet([saucer_template("1/4")] * 5 +
                              [saucer_template("1/5")])
    again = GluingComplex.from_json_dict(bracelet.to_json_dict())
    assert again == bracelet

    c = replicate(square_template("2"), (2, 2))
    assert GluingComplex.from_json_dict(c.to_json_dict()) == c
