"""Combinatorial pieces and the gluing complexes built from them.

A piece is modeled by a PieceTemplate: an even number of face slots, each
carrying ordered endpoint labels, a perfect matching of all endpoints into
strands, free boundary components tagged by genus, and a count of closed
components.  Copies of templates glued face-to-face form a GluingComplex.

Replication reflects a piece repeatedly across its face pairs.  A mirror
copy is modeled by the same template (reflection fixes the glued face
pointwise), so every gluing produced here pairs equal endpoint labels.
Builders for composite links (bracelets, torus lattices, cylinder stacks)
emit the same gluing patterns, which is what makes a homogeneous bracelet
literally the replicant complex of its tangle.

Strands are matchings only; there is no crossing-level diagram here, and
no geometry.  Tracing strand matchings across gluing bijections counts
link components.
"""

import itertools
from typing import NamedTuple

ISO_COPY_LIMIT = 10 ** 4


class PieceError(ValueError):
    """A template, schedule, complex, or builder input is malformed."""


class ScheduleMismatch(PieceError):
    """Replication schedule does not fit the template."""


class OddLength(PieceError):
    """Bracelets need an even number of tangles, at least two."""


class OddDimension(PieceError):
    """Lattice dimensions must be even and at least two."""


class EndpointMismatch(PieceError):
    """Glued faces carry different numbers of endpoints."""


class TooFewStrands(PieceError):
    """A bracelet connection carries fewer than two strands."""


class SizeExceeded(RuntimeError):
    """Isomorphism search refused a complex above the copy limit."""


class PieceTemplate:
    """An abstract piece: face slots, strand matching, boundary data.

    ``faces`` is a sequence of endpoint-label lists; labels are 1-based
    and consecutive within each face.  Faces pair up as (1, 2), (3, 4),
    ...; ``ell`` counts the complete pairs, and a trailing unpaired face
    is allowed (graph replicants place tangles of odd valence, which
    reflection doubling never touches).  ``interfaces`` counts the
    circle/arc components of the 1-manifold shared by each pair.
    ``strands`` is a fixed-point free perfect matching on the endpoints
    (face, label); ``closed components`` counts loops that never touch a
    face.  ``free_boundary`` lists genus tags for the boundary away from
    the faces; it is carried through but never interpreted.
    """

    __slots__ = ("id", "faces", "strands", "free_boundary",
                 "closed_components", "interfaces", "_mate")

    def __init__(self, id, faces, strands, free_boundary=(),
                 closed_components=0, interfaces=None):
        faces = tuple(tuple(int(x) for x in face) for face in faces)
        for face in faces:
            if face != tuple(range(1, len(face) + 1)):
                raise PieceError(
                    "face endpoint labels must read 1..n, got %r" % (face,))
        self.id = str(id)
        self.faces = faces

        mate = {}
        normalized = []
        for pair in strands:
            a, b = pair
            a = (int(a[0]), int(a[1]))
            b = (int(b[0]), int(b[1]))
            for face_no, label in (a, b):
                if not 1 <= face_no <= len(faces):
                    raise PieceError("strand endpoint on missing face %d"
                                     % face_no)
                if label not in faces[face_no - 1]:
                    raise PieceError("strand endpoint %r not on face %d"
                                     % ((face_no, label), face_no))
            if a == b:
                raise PieceError("strand endpoints must be distinct")
            if a in mate or b in mate:
                raise PieceError("endpoint matched twice in %r" % (pair,))
            mate[a] = b
            mate[b] = a
            normalized.append(tuple(sorted((a, b))))
        everything = {(f + 1, label)
                      for f, face in enumerate(faces) for label in face}
        missing = everything - set(mate)
        if missing:
            raise PieceError("unmatched endpoints: %s" % sorted(missing))
        self.strands = tuple(sorted(normalized))
        self._mate = mate

        self.free_boundary = tuple(int(g) for g in free_boundary)
        if any(g < 0 for g in self.free_boundary):
            raise PieceError("genus tags must be nonnegative")
        self.closed_components = int(closed_components)
        if self.closed_components < 0:
            raise PieceError("closed component count must be nonnegative")
        if interfaces is None:
            interfaces = (1,) * self.ell
        self.interfaces = tuple(int(c) for c in interfaces)
        if len(self.interfaces) != self.ell:
            raise PieceError("need one interface count per face pair")
        if any(c < 0 for c in self.interfaces):
            raise PieceError("interface counts must be nonnegative")

    @property
    def ell(self):
        return len(self.faces) // 2

    def mate(self, endpoint):
        """Other end of the strand leaving ``endpoint`` = (face, label)."""
        return self._mate[endpoint]

    def _key(self):
        return (self.id, self.faces, self.strands, self.free_boundary,
                self.closed_components, self.interfaces)

    def __eq__(self, other):
        if not isinstance(other, PieceTemplate):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "PieceTemplate(id=%r, ell=%d)" % (self.id, self.ell)

    def to_json_dict(self):
        return {
            "id": self.id,
            "faces": [list(face) for face in self.faces],
            "strands": [[list(a), list(b)] for a, b in self.strands],
            "free_boundary": list(self.free_boundary),
            "closed_components": self.closed_components,
            "interfaces": list(self.interfaces),
        }

    @classmethod
    def from_json_dict(cls, data):
        return cls(data["id"], data["faces"], data["strands"],
                   data.get("free_boundary", ()),
                   data.get("closed_components", 0),
                   data.get("interfaces"))


def saucer_template(label):
    """Two-face piece whose strands turn back within each face.

    The slot shape of a reciprocal tangle: two endpoints per face, each
    face carrying one arc that enters and leaves on the same side.
    """
    return PieceTemplate("saucer " + str(label), ((1, 2), (1, 2)),
                         (((1, 1), (1, 2)), ((2, 1), (2, 2))))


def cylindrical_template(label, strand_count=2):
    """Two-face piece whose strands pass straight through."""
    if strand_count < 1:
        raise PieceError("a cylindrical piece needs at least one strand")
    labels = tuple(range(1, strand_count + 1))
    return PieceTemplate("cylinder " + str(label), (labels, labels),
                         tuple(((1, k), (2, k)) for k in labels))


def square_template(label):
    """Four one-endpoint faces, opposite faces paired, two strands.

    Face order is top, bottom, left, right, so pair 1 runs vertically
    and pair 2 horizontally.  The matching joins opposite faces; the
    actual over/under pattern of a square tangle is not modeled.
    """
    return PieceTemplate("square " + str(label),
                         ((1,), (1,), (1,), (1,)),
                         (((1, 1), (2, 1)), ((3, 1), (4, 1))))


def template_union(left, right, id=None):
    """Disjoint union of two pieces with the same number of face pairs.

    Face slot j of the union carries left's endpoints followed by
    right's, relabeled consecutively; strands, boundary components,
    closed loops, and interface counts combine accordingly.
    """
    if left.ell != right.ell:
        raise PieceError("union requires equal face pair counts, got %d and %d"
                         % (left.ell, right.ell))
    faces = tuple(tuple(range(1, len(a) + len(b) + 1))
                  for a, b in zip(left.faces, right.faces))

    def shift(endpoint):
        face_no, label = endpoint
        return (face_no, label + len(left.faces[face_no - 1]))

    strands = list(left.strands)
    strands += [(shift(a), shift(b)) for a, b in right.strands]
    if id is None:
        id = "%s + %s" % (left.id, right.id)
    return PieceTemplate(
        id, faces, strands,
        left.free_boundary + right.free_boundary,
        left.closed_components + right.closed_components,
        tuple(a + b for a, b in zip(left.interfaces, right.interfaces)))


class ReplicantSchedule(NamedTuple):
    """Even reflection counts per face pair, and the order to apply them.

    ``order`` permutes 1..ell and names which face pair is replicated
    first; an empty order means natural order.  Different orders label
    the copies differently but give isomorphic complexes.
    """
    indices: tuple
    order: tuple = ()


def _normalize_schedule(schedule, ell):
    if isinstance(schedule, ReplicantSchedule):
        indices, order = schedule.indices, schedule.order
    elif isinstance(schedule, (tuple, list)):
        indices, order = schedule, ()
    else:
        raise ScheduleMismatch("schedule must be a tuple of even counts "
                               "or a ReplicantSchedule")
    indices = tuple(int(n) for n in indices)
    if len(indices) != ell:
        raise ScheduleMismatch("schedule length %d does not match %d face "
                               "pair(s)" % (len(indices), ell))
    if any(n <= 0 or n % 2 for n in indices):
        raise ScheduleMismatch("schedule entries must be positive and even, "
                               "got %r" % (indices,))
    order = tuple(int(k) for k in order) if order else \
        tuple(range(1, ell + 1))
    if sorted(order) != list(range(1, ell + 1)):
        raise ScheduleMismatch("order must permute 1..%d, got %r"
                               % (ell, order))
    return indices, order


class Gluing(NamedTuple):
    """One face-to-face identification inside a complex.

    Sides are (copy label, face number); ``pairing`` maps side a's
    endpoint labels to side b's, stored sorted by the a-label.
    """
    a: tuple
    b: tuple
    pairing: tuple


class GluingComplex:
    """Copies of piece templates with face slots glued in pairs.

    ``copies`` is a sequence of (template, label) with distinct labels,
    each label a tuple of integers.  ``gluings`` pair face slots, at most
    one gluing per slot, with an endpoint bijection per gluing (omit the
    bijection for the label-identity).  Gluing sides are stored in copy
    order so that complexes built the same way compare equal.
    """

    __slots__ = ("copies", "gluings", "_position", "_slot_map")

    def __init__(self, copies, gluings):
        copies = tuple((template, tuple(int(i) for i in label))
                       for template, label in copies)
        position = {}
        for template, label in copies:
            if not isinstance(template, PieceTemplate):
                raise PieceError("copies must reference PieceTemplate objects")
            if label in position:
                raise PieceError("duplicate copy label %r" % (label,))
            position[label] = len(position)
        self.copies = copies
        self._position = position
        templates = {label: template for template, label in copies}

        normalized = []
        used = set()
        for item in gluings:
            if isinstance(item, Gluing):
                side_a, side_b, pairing = item.a, item.b, item.pairing
            elif len(item) == 3:
                side_a, side_b, pairing = item
            else:
                side_a, side_b = item
                pairing = None
            side_a = (tuple(side_a[0]), int(side_a[1]))
            side_b = (tuple(side_b[0]), int(side_b[1]))
            face_a = self._face_labels(templates, side_a)
            face_b = self._face_labels(templates, side_b)
            if side_a == side_b:
                raise PieceError("cannot glue a face slot to itself")
            if pairing is None:
                if len(face_a) != len(face_b):
                    raise EndpointMismatch(
                        "faces %r and %r carry %d and %d endpoints"
                        % (side_a, side_b, len(face_a), len(face_b)))
                pairing = tuple(zip(face_a, face_b))
            else:
                pairing = tuple((int(x), int(y)) for x, y in pairing)
                if sorted(x for x, _ in pairing) != list(face_a) or \
                        sorted(y for _, y in pairing) != list(face_b):
                    raise PieceError(
                        "pairing is not a bijection between %r and %r"
                        % (side_a, side_b))
            key_a = (position[side_a[0]], side_a[1])
            key_b = (position[side_b[0]], side_b[1])
            if key_b < key_a:
                side_a, side_b = side_b, side_a
                pairing = tuple(sorted((y, x) for x, y in pairing))
            for side in (side_a, side_b):
                if side in used:
                    raise PieceError("face slot %r glued twice" % (side,))
                used.add(side)
            normalized.append(Gluing(side_a, side_b, tuple(sorted(pairing))))
        self.gluings = tuple(
            sorted(normalized,
                   key=lambda g: (position[g.a[0]], g.a[1],
                                  position[g.b[0]], g.b[1])))

        slot_map = {}
        for g in self.gluings:
            slot_map[g.a] = (g.b, dict(g.pairing))
            slot_map[g.b] = (g.a, {y: x for x, y in g.pairing})
        self._slot_map = slot_map

    @staticmethod
    def _face_labels(templates, side):
        label, face_no = side
        if label not in templates:
            raise PieceError("gluing references missing copy %r" % (label,))
        faces = templates[label].faces
        if not 1 <= face_no <= len(faces):
            raise PieceError("copy %r has no face %d" % (label, face_no))
        return faces[face_no - 1]

    def template_of(self, label):
        return self.copies[self._position[label]][0]

    def glued_partner(self, side):
        """(other side, label map) for a glued slot, else None."""
        return self._slot_map.get(side)

    def slots(self):
        out = []
        for template, label in self.copies:
            out.extend((label, f + 1) for f in range(len(template.faces)))
        return out

    def unglued_slots(self):
        return [s for s in self.slots() if s not in self._slot_map]

    def __eq__(self, other):
        if not isinstance(other, GluingComplex):
            return NotImplemented
        return self.copies == other.copies and self.gluings == other.gluings

    def __hash__(self):
        return hash((self.copies, self.gluings))

    def __repr__(self):
        return "GluingComplex(%d copies, %d gluings)" % (
            len(self.copies), len(self.gluings))

    def to_json_dict(self):
        table = {}
        for template, _ in self.copies:
            if table.get(template.id, template) != template:
                raise PieceError("distinct templates share id %r"
                                 % template.id)
            table[template.id] = template
        return {
            "templates": {tid: t.to_json_dict()
                          for tid, t in sorted(table.items())},
            "copies": [[t.id, list(label)] for t, label in self.copies],
            "gluings": [{"a": [list(g.a[0]), g.a[1]],
                         "b": [list(g.b[0]), g.b[1]],
                         "pairing": [list(p) for p in g.pairing]}
                        for g in self.gluings],
        }

    @classmethod
    def from_json_dict(cls, data):
        table = {tid: PieceTemplate.from_json_dict(td)
                 for tid, td in data["templates"].items()}
        try:
            copies = [(table[tid], tuple(label))
                      for tid, label in data["copies"]]
        except KeyError as missing:
            raise PieceError("copy references missing template %s" % missing)
        gluings = [((tuple(g["a"][0]), g["a"][1]),
                    (tuple(g["b"][0]), g["b"][1]),
                    [tuple(p) for p in g["pairing"]])
                   for g in data["gluings"]]
        return cls(copies, gluings)


def replicate(template, schedule):
    """Reflect a piece per its schedule, one face pair at a time.

    Copies are labeled by index tuples, one coordinate per face pair in
    schedule order.  Along the coordinate of face pair k (faces 2k-1 and
    2k), copy 2i meets copy 2i+1 across face 2k-1 and copy 2i-1 meets
    copy 2i across face 2k, cyclically.  Every face slot ends up glued
    exactly once; free boundary is untouched.
    """
    if len(template.faces) % 2:
        raise ScheduleMismatch(
            "replication reflects across face pairs; template %r has an "
            "unpaired face" % template.id)
    indices, order = _normalize_schedule(schedule, template.ell)
    sizes = [indices[k - 1] for k in order]
    labels = list(itertools.product(*(range(s) for s in sizes)))
    gluings = []
    for k in range(1, template.ell + 1):
        pos = order.index(k)
        size = indices[k - 1]
        for label in labels:
            i = label[pos]
            if i % 2:
                continue
            after = label[:pos] + ((i + 1) % size,) + label[pos + 1:]
            before = label[:pos] + ((i - 1) % size,) + label[pos + 1:]
            gluings.append(((label, 2 * k - 1), (after, 2 * k - 1)))
            gluings.append(((before, 2 * k), (label, 2 * k)))
    return GluingComplex([(template, label) for label in labels], gluings)


def build_bracelet(tangles):
    """Close an even cycle of saucer tangles into one complex.

    Consecutive tangles meet across a mirror face: copy 2i glues its
    first face to copy 2i+1's first face, copy 2i+1 its second face to
    copy 2i+2's second face, around the cycle.  A homogeneous bracelet
    is therefore equal to the tangle's cyclic replicant.  Every
    connection must carry at least two strands.
    """
    tangles = list(tangles)
    count = len(tangles)
    if count < 2 or count % 2:
        raise OddLength("a bracelet needs an even number of tangles, "
                        "at least two, got %d" % count)
    gluings = []
    for i, tangle in enumerate(tangles):
        j = (i + 1) % count
        face_no = 1 if i % 2 == 0 else 2
        if tangle.ell < 1 or tangles[j].ell < 1:
            raise PieceError("bracelet tangles need a face pair")
        here = tangle.faces[face_no - 1]
        there = tangles[j].faces[face_no - 1]
        if len(here) != len(there):
            raise EndpointMismatch(
                "tangles %d and %d meet with %d and %d endpoints"
                % (i, j, len(here), len(there)))
        if len(here) < 2:
            raise TooFewStrands(
                "connection between tangles %d and %d carries %d strand(s)"
                % (i, j, len(here)))
        gluings.append((((i,), face_no), ((j,), face_no)))
    return GluingComplex(
        [(tangle, (i,)) for i, tangle in enumerate(tangles)], gluings)


def build_torus_lattice(grid):
    """Glue a doubly even grid of four-faced pieces with wraparound.

    Rows run along face pair 1 and columns along face pair 2, with the
    replicant mirror pattern in both directions, so a grid filled with
    one template equals its (rows, columns)-replicant.
    """
    rows = [list(row) for row in grid]
    height = len(rows)
    if height == 0 or any(len(row) != len(rows[0]) for row in rows):
        raise PieceError("lattice grid must be rectangular")
    width = len(rows[0])
    if height < 2 or width < 2 or height % 2 or width % 2:
        raise OddDimension("lattice dimensions must be even and at least "
                           "2 x 2, got %d x %d" % (height, width))
    copies = []
    for r, row in enumerate(rows):
        for c, template in enumerate(row):
            if template.ell < 2:
                raise PieceError("lattice cells need two face pairs")
            copies.append((template, (r, c)))

    def endpoints(r, c, face_no):
        return rows[r][c].faces[face_no - 1]

    gluings = []
    for r in range(height):
        for c in range(width):
            if r % 2 == 0:
                down = (r + 1) % height
                up = (r - 1) % height
                for a, b, face_no in (((r, c), (down, c), 1),
                                      ((up, c), (r, c), 2)):
                    if len(endpoints(*a, face_no)) != \
                            len(endpoints(*b, face_no)):
                        raise EndpointMismatch(
                            "cells %r and %r meet with unequal endpoints"
                            % (a, b))
                    gluings.append(((a, face_no), (b, face_no)))
            if c % 2 == 0:
                right = (c + 1) % width
                left = (c - 1) % width
                for a, b, face_no in (((r, c), (r, right), 3),
                                      ((r, left), (r, c), 4)):
                    if len(endpoints(*a, face_no)) != \
                            len(endpoints(*b, face_no)):
                        raise EndpointMismatch(
                            "cells %r and %r meet with unequal endpoints"
                            % (a, b))
                    gluings.append(((a, face_no), (b, face_no)))
    return GluingComplex(copies, gluings)


def build_cylinder_stack(tangles):
    """Stack cylindrical tangles end to end and close the loop.

    Copy i's second face glues to copy i+1's first face by translation
    (equal labels), cyclically; a single tangle closes onto itself.
    """
    tangles = list(tangles)
    if not tangles:
        raise PieceError("a cylinder stack needs at least one tangle")
    gluings = []
    for i, tangle in enumerate(tangles):
        j = (i + 1) % len(tangles)
        if tangle.ell < 1 or tangles[j].ell < 1:
            raise PieceError("stacked tangles need a face pair")
        if len(tangle.faces[1]) != len(tangles[j].faces[0]):
            raise EndpointMismatch(
                "tangles %d and %d meet with %d and %d endpoints"
                % (i, j, len(tangle.faces[1]), len(tangles[j].faces[0])))
        gluings.append((((i,), 2), ((j,), 1)))
    return GluingComplex(
        [(tangle, (i,)) for i, tangle in enumerate(tangles)], gluings)


class ComponentCount(NamedTuple):
    closed: int
    open: int


def count_components(complex):
    """Closed and open strand components of a complex.

    Endpoint nodes carry one matching edge (their strand inside the
    copy) and at most one gluing edge, so components are cycles or
    paths; paths end at unglued faces.  Closed loops recorded on the
    templates count as closed components of every copy.
    """
    closed = sum(t.closed_components for t, _ in complex.copies)
    neighbors = {}
    for template, label in complex.copies:
        for a, b in template.strands:
            neighbors.setdefault(label + a, []).append(label + b)
            neighbors.setdefault(label + b, []).append(label + a)
    for g in complex.gluings:
        for x, y in g.pairing:
            node_a = g.a[0] + (g.a[1], x)
            node_b = g.b[0] + (g.b[1], y)
            neighbors.setdefault(node_a, []).append(node_b)
            neighbors.setdefault(node_b, []).append(node_a)

    open_count = 0
    seen = set()
    for start in neighbors:
        if start in seen:
            continue
        stack = [start]
        component = set()
        while stack:
            node = stack.pop()
            if node in component:
                continue
            component.add(node)
            stack.extend(neighbors[node])
        seen |= component
        if all(len(neighbors[node]) == 2 for node in component):
            closed += 1
        else:
            open_count += 1
    return ComponentCount(closed, open_count)


class IsoResult(NamedTuple):
    isomorphic: bool
    witness: dict


def _template_index(complexes):
    templates = sorted({t for c in complexes for t, _ in c.copies},
                       key=lambda t: t._key())
    return {t: i for i, t in enumerate(templates)}


def _refine_colors(complex, base):
    colors = {label: base[template] for template, label in complex.copies}
    while True:
        signatures = {}
        for _, label in complex.copies:
            around = []
            template = complex.template_of(label)
            for face_no in range(1, len(template.faces) + 1):
                partner = complex.glued_partner((label, face_no))
                if partner is None:
                    continue
                (other_label, other_face), _ = partner
                around.append((face_no, other_face, colors[other_label]))
            signatures[label] = (colors[label], tuple(sorted(around)))
        palette = {s: i for i, s in enumerate(sorted(set(
            signatures.values())))}
        new = {label: palette[s] for label, s in signatures.items()}
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def isomorphic(a, b):
    """Search for a copy relabeling carrying a's gluings onto b's.

    The bijection must preserve templates, face numbers, and endpoint
    pairings.  Returns the witness map on success.  Complexes above
    ISO_COPY_LIMIT copies are refused.
    """
    if len(a.copies) > ISO_COPY_LIMIT or len(b.copies) > ISO_COPY_LIMIT:
        raise SizeExceeded("refusing isomorphism search above %d copies"
                           % ISO_COPY_LIMIT)
    if len(a.copies) != len(b.copies) or len(a.gluings) != len(b.gluings):
        return IsoResult(False, None)
    base = _template_index((a, b))
    colors_a = _refine_colors(a, base)
    colors_b = _refine_colors(b, base)

    def histogram(colors):
        out = {}
        for color in colors.values():
            out[color] = out.get(color, 0) + 1
        return out

    if histogram(colors_a) != histogram(colors_b):
        return IsoResult(False, None)

    candidates = {}
    for _, label in a.copies:
        candidates[label] = [lb for _, lb in b.copies
                             if colors_b[lb] == colors_a[label]
                             and b.template_of(lb) == a.template_of(label)]
        if not candidates[label]:
            return IsoResult(False, None)
    labels = sorted((len(candidates[label]), i)
                    for i, (_, label) in enumerate(a.copies))
    todo = [a.copies[i][1] for _, i in labels]

    assignment = {}
    used = set()

    def compatible(label, image):
        template = a.template_of(label)
        for face_no in range(1, len(template.faces) + 1):
            partner = a.glued_partner((label, face_no))
            image_partner = b.glued_partner((image, face_no))
            if partner is None:
                if image_partner is not None:
                    return False
                continue
            if image_partner is None:
                return False
            (other, other_face), pairing = partner
            (image_other, image_other_face), image_pairing = image_partner
            if other_face != image_other_face:
                return False
            if other in assignment:
                if assignment[other] != image_other:
                    return False
                if pairing != image_pairing:
                    return False
        return True

    def search(k):
        if k == len(todo):
            return True
        label = todo[k]
        for image in candidates[label]:
            if image in used:
                continue
            assignment[label] = image
            if compatible(label, image):
                used.add(image)
                if search(k + 1):
                    return True
                used.discard(image)
            del assignment[label]
        return False

    if search(0):
        return IsoResult(True, dict(assignment))
    return IsoResult(False, None)


def verify_isomorphism(a, b, witness):
    """Check that a witness map really carries a onto b."""
    if sorted(witness) != sorted(label for _, label in a.copies):
        return False
    if sorted(witness.values()) != sorted(label for _, label in b.copies):
        return False
    for template, label in a.copies:
        if b.template_of(witness[label]) != template:
            return False
    mapped = [((witness[g.a[0]], g.a[1]), (witness[g.b[0]], g.b[1]),
               g.pairing) for g in a.gluings]
    return GluingComplex(
        [(b.template_of(label), label) for _, label in b.copies],
        mapped) == GluingComplex(list(b.copies), list(b.gluings))


def split_union(complex, left, right):
    """Undo a template union copywise.

    Every copy of ``complex`` must be over the disjoint union of
    ``left`` and ``right``; returns the two restricted complexes, which
    share the original copy labels.  Gluings must not pair a left
    endpoint with a right endpoint.
    """
    union = template_union(left, right)
    for template, label in complex.copies:
        if template._key()[1:] != union._key()[1:]:
            raise PieceError("copy %r is not over the union of the given "
                             "templates" % (label,))

    cut = {face_no: len(left.faces[face_no - 1])
           for face_no in range(1, len(union.faces) + 1)}

    def restrict(gluings, keep_left):
        out = []
        for g in gluings:
            boundary = cut[g.a[1]]
            pairs = []
            for x, y in g.pairing:
                if (x <= boundary) != (y <= cut[g.b[1]]):
                    raise PieceError("gluing %r mixes the union's parts"
                                     % (g,))
                if (x <= boundary) == keep_left:
                    if keep_left:
                        pairs.append((x, y))
                    else:
                        pairs.append((x - boundary, y - cut[g.b[1]]))
            out.append((g.a, g.b, pairs))
        return out

    left_copies = [(left, label) for _, label in complex.copies]
    right_copies = [(right, label) for _, label in complex.copies]
    return (GluingComplex(left_copies, restrict(complex.gluings, True)),
            GluingComplex(right_copies, restrict(complex.gluings, False)))
