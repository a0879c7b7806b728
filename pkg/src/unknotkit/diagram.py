"""Link diagrams as 4-valent planar maps, with a Reidemeister move engine.

A diagram is a list of crossings, each a 4-tuple of edge labels read
counterclockwise.  Slots 0 and 2 carry the under strand, slots 1 and 3 the
over strand.  Every label occurs in exactly two slots.  Vertex-free
components are counted separately as isolated loops.

A *dart* ``(c, i)`` is the half edge leaving crossing ``c`` through slot
``i``.  Faces are traced keeping the face on the right of each dart, so
arriving at slot ``j`` continues along slot ``j + 1``.
"""

import re
from collections import deque
from dataclasses import dataclass


class DiagramError(ValueError):
    pass


class DiagramSyntaxError(DiagramError):
    pass


class DiagramValidityError(DiagramError):
    pass


class NonPlanarError(DiagramValidityError):
    pass


class PatternMismatch(DiagramError):
    """The requested move does not fit the diagram at that location."""


class ResourceLimit(RuntimeError):
    pass


class LinkDiagram:
    """Immutable PD-style diagram.

    ``crossings`` is a tuple of 4-tuples of positive integer labels and
    ``loops`` the number of isolated loops.
    """

    __slots__ = ("crossings", "loops", "_slots", "_faces")

    def __init__(self, crossings, loops=0, check=True):
        self.crossings = tuple(tuple(int(x) for x in c) for c in crossings)
        self.loops = int(loops)
        self._slots = None
        self._faces = None
        if check:
            self._validate()

    # -- structure -------------------------------------------------------

    def _validate(self):
        if self.loops < 0:
            raise DiagramValidityError("negative loop count")
        where = {}
        for c, labels in enumerate(self.crossings):
            if len(labels) != 4:
                raise DiagramValidityError("crossing %d does not have 4 ends" % c)
            for i, lab in enumerate(labels):
                where.setdefault(lab, []).append((c, i))
        for lab, ends in where.items():
            if len(ends) != 2:
                raise DiagramValidityError(
                    "edge %d has %d ends, expected 2" % (lab, len(ends)))
        self._slots = where
        faces = self.faces()
        for comp in self.graph_components():
            nf = sum(1 for f in faces if f[0][0] in comp)
            if nf != len(comp) + 2:
                raise NonPlanarError(
                    "rotation system is not planar (V=%d, F=%d)" % (len(comp), nf))

    @property
    def slots(self):
        if self._slots is None:
            where = {}
            for c, labels in enumerate(self.crossings):
                for i, lab in enumerate(labels):
                    where.setdefault(lab, []).append((c, i))
            self._slots = where
        return self._slots

    def __len__(self):
        return len(self.crossings)

    def __eq__(self, other):
        return (isinstance(other, LinkDiagram)
                and self.crossings == other.crossings and self.loops == other.loops)

    def __hash__(self):
        return hash((self.crossings, self.loops))

    def __repr__(self):
        return "LinkDiagram(%s)" % serialize(self)

    def edges(self):
        return sorted(self.slots)

    def other_end(self, c, i):
        a, b = self.slots[self.crossings[c][i]]
        if a == (c, i):
            return b
        return a

    def graph_components(self):
        """Connected components of the crossing graph, as sorted lists."""
        n = len(self.crossings)
        seen = [False] * n
        comps = []
        for s in range(n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                c = stack.pop()
                comp.append(c)
                for i in range(4):
                    c2, _ = self.other_end(c, i)
                    if not seen[c2]:
                        seen[c2] = True
                        stack.append(c2)
            comps.append(sorted(comp))
        return comps

    def faces(self):
        """Faces as tuples of darts, each rotated to start at its least dart."""
        if self._faces is None:
            seen = set()
            out = []
            for c in range(len(self.crossings)):
                for i in range(4):
                    if (c, i) in seen:
                        continue
                    face = []
                    d = (c, i)
                    while d not in seen:
                        seen.add(d)
                        face.append(d)
                        c2, j = self.other_end(*d)
                        d = (c2, (j + 1) % 4)
                    k = face.index(min(face))
                    out.append(tuple(face[k:] + face[:k]))
            out.sort()
            self._faces = tuple(out)
        return self._faces


# -- text format ------------------------------------------------------------

_TOKEN = re.compile(r"\s*([XV])\(([^()]*)\)\s*")


def parse_diagram(text):
    """Parse ``K[ X(a,b,c,d), ... ; loops=k ]`` or the shorthand ``L[]``.

    ``V(a:o,b:u,c:o,d:u)`` gives the four ends with explicit over/under
    labels instead of the slot convention; it must alternate.
    """
    s = text.strip()
    if s == "L[]":
        return LinkDiagram((), 1)
    m = re.fullmatch(r"K\[(.*)\]", s, re.S)
    if not m:
        raise DiagramSyntaxError("expected K[...] or L[]: %r" % text)
    body = m.group(1)
    loops = 0
    if ";" in body:
        body, tail = body.split(";", 1)
        lm = re.fullmatch(r"\s*loops\s*=\s*(\d+)\s*", tail)
        if not lm:
            raise DiagramSyntaxError("bad loop clause: %r" % tail)
        loops = int(lm.group(1))
    crossings = []
    pos = 0
    body = body.strip()
    while pos < len(body):
        tm = _TOKEN.match(body, pos)
        if not tm:
            raise DiagramSyntaxError("malformed token near %r" % body[pos:pos + 20])
        crossings.append(_parse_token(tm.group(1), tm.group(2)))
        pos = tm.end()
        if pos < len(body):
            if body[pos] != ",":
                raise DiagramSyntaxError("expected ',' near %r" % body[pos:pos + 20])
            pos += 1
            if pos >= len(body.rstrip()):
                raise DiagramSyntaxError("trailing comma")
    return LinkDiagram(crossings, loops)


def _parse_token(kind, inner):
    parts = [p.strip() for p in inner.split(",")]
    if len(parts) != 4:
        raise DiagramSyntaxError("crossing needs 4 entries: %r" % inner)
    if kind == "X":
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise DiagramSyntaxError("non-integer label in %r" % inner) from None
    labels, marks = [], []
    for p in parts:
        pm = re.fullmatch(r"(\d+):([ou])", p)
        if not pm:
            raise DiagramSyntaxError("bad labelled end %r" % p)
        labels.append(int(pm.group(1)))
        marks.append(pm.group(2))
    if marks.count("u") != 2 or any(marks[i] == marks[(i + 1) % 4] for i in range(4)):
        raise DiagramValidityError(
            "over and under ends must alternate around a crossing: %s" % "".join(marks))
    k = marks.index("u")
    return tuple(labels[k:] + labels[:k])


def serialize(d):
    body = ", ".join("X(%d,%d,%d,%d)" % c for c in d.crossings)
    if not d.crossings and d.loops == 1:
        return "L[]"
    return "K[%s; loops=%d]" % (body, d.loops)


def relabel(d):
    """Copy of ``d`` with edge labels renumbered 1..2V in order of first use."""
    new = {}
    out = []
    for c in d.crossings:
        row = []
        for lab in c:
            if lab not in new:
                new[lab] = len(new) + 1
            row.append(new[lab])
        out.append(tuple(row))
    return LinkDiagram(out, d.loops, check=False)


# -- statistics -------------------------------------------------------------

def link_components(d):
    """Closed strands of ``d``; each is a list of edge labels in travel order.

    Isolated loops appear as empty lists.
    """
    seen = set()
    comps = []
    for lab in sorted(d.slots):
        if lab in seen:
            continue
        comp = []
        c, i = d.slots[lab][0]
        # walk leaving through (c, i)
        start = (c, i)
        while True:
            lab2 = d.crossings[c][i]
            seen.add(lab2)
            comp.append(lab2)
            c, j = d.other_end(c, i)
            i = (j + 2) % 4
            if (c, i) == start:
                break
        comps.append(comp)
    comps.extend([] for _ in range(d.loops))
    return comps


def crossing_measure(d):
    return len(d.crossings) + len(d.graph_components()) + d.loops - 1


def is_trivial(d):
    return not d.crossings and d.loops == 1


def orientation_walk(d, start=None):
    """Travel the single strand of a knot diagram.

    Returns a list of (crossing, slot entered, slot left).  By default the
    walk leaves crossing 0 through slot 2, having entered through slot 0.
    """
    if start is None:
        start = (0, 2)
    c, i = start
    steps = []
    first = start
    while True:
        c2, j = d.other_end(c, i)
        steps.append((c2, j, (j + 2) % 4))
        c, i = c2, (j + 2) % 4
        if (c, i) == first:
            break
    return steps


def crossing_signs(d, start=None):
    """Sign of each crossing of a knot diagram (right-handed is +1)."""
    if len(link_components(d)) != 1:
        raise DiagramError("writhe needs a one-component diagram")
    if not d.crossings:
        return []
    under_in, over_in = {}, {}
    for c, j, _ in orientation_walk(d, start):
        if j % 2 == 0:
            under_in[c] = j
        else:
            over_in[c] = j
    signs = []
    for c in range(len(d.crossings)):
        rel = (over_in[c] - under_in[c]) % 4
        signs.append(1 if rel == 3 else -1)
    return signs


def writhe(d, orientation=None):
    """Signed crossing count.  ``orientation`` is an optional starting dart."""
    return sum(crossing_signs(d, orientation))


# -- canonical form ---------------------------------------------------------

def _component_code(d, comp):
    best = None
    for s in comp:
        for r in (0, 2):
            order = {s: 0}
            rot = {s: r}
            queue = [s]
            code = []
            k = 0
            while k < len(queue):
                c = queue[k]
                k += 1
                for t in range(4):
                    i = (rot[c] + t) % 4
                    c2, j = d.other_end(c, i)
                    if c2 not in order:
                        order[c2] = len(queue)
                        rot[c2] = j - (j % 2)
                        queue.append(c2)
                    code.append(order[c2])
                    code.append((j - rot[c2]) % 4)
            code = tuple(code)
            if best is None or code < best:
                best = code
    return best


def canonical_form(d):
    """Hashable invariant; equal exactly for diagrams related by an
    orientation-preserving map of the sphere respecting over/under."""
    codes = sorted(_component_code(d, comp) for comp in d.graph_components())
    return (tuple(codes), d.loops)


def is_isomorphic(a, b):
    return canonical_form(a) == canonical_form(b)


def canonical_diagram(d):
    """A representative with crossings and labels in canonical order."""
    comps = []
    for comp in d.graph_components():
        best = None
        for s in comp:
            for r in (0, 2):
                order = {s: 0}
                rot = {s: r}
                queue = [s]
                code = []
                k = 0
                while k < len(queue):
                    c = queue[k]
                    k += 1
                    for t in range(4):
                        i = (rot[c] + t) % 4
                        c2, j = d.other_end(c, i)
                        if c2 not in order:
                            order[c2] = len(queue)
                            rot[c2] = j - (j % 2)
                            queue.append(c2)
                        code.append((order[c2], (j - rot[c2]) % 4))
                code = tuple(code)
                if best is None or code < best[0]:
                    best = (code, queue, rot)
        comps.append(best)
    comps.sort(key=lambda b: b[0])
    rows = []
    for _, queue, rot in comps:
        for c in queue:
            lab = d.crossings[c]
            r = rot[c]
            rows.append(tuple(lab[(r + t) % 4] for t in range(4)))
    return relabel(LinkDiagram(rows, d.loops, check=False))


# -- moves ------------------------------------------------------------------

@dataclass(frozen=True)
class ReidemeisterMove:
    """One Reidemeister move.

    kind is one of ``I``, ``I-``, ``II``, ``II-``, ``III``.  ``face`` indexes
    :meth:`LinkDiagram.faces`; ``arcs`` are positions of darts in that face.
    ``face`` may be ``"loop"`` or ``"loops"`` for moves on isolated loops.
    ``sign`` is the new crossing's sign for type I, and for type II the
    index (0 or 1) of the arc that passes over.
    """
    kind: str
    face: object
    arcs: tuple = ()
    sign: int = 0

    def __str__(self):
        tag = {"I": "R1+", "I-": "R1-", "II": "R2+", "II-": "R2-", "III": "R3"}[self.kind]
        out = "%s @%s" % (tag, self.face if isinstance(self.face, str) else "face:%d" % self.face)
        if self.kind == "I":
            if self.arcs:
                out += " arc:%d" % self.arcs[0]
            out += " sign:%+d" % self.sign
        elif self.kind == "II":
            if self.arcs:
                out += " arcs:%d,%d" % self.arcs
            out += " over:%d" % self.sign
        return out


_MOVE_RE = re.compile(
    r"(R1\+|R1-|R2\+|R2-|R3)\s+@(face:(\d+)|loop|loops)"
    r"(?:\s+arc:(\d+))?(?:\s+arcs:(\d+),(\d+))?(?:\s+sign:([+-]1))?(?:\s+over:([01]))?\s*")


def parse_move(line):
    m = _MOVE_RE.fullmatch(line.strip())
    if not m:
        raise DiagramSyntaxError("bad move line %r" % line)
    kind = {"R1+": "I", "R1-": "I-", "R2+": "II", "R2-": "II-", "R3": "III"}[m.group(1)]
    face = int(m.group(3)) if m.group(3) is not None else m.group(2)
    arcs = ()
    sign = 0
    if m.group(4) is not None:
        arcs = (int(m.group(4)),)
    if m.group(5) is not None:
        arcs = (int(m.group(5)), int(m.group(6)))
    if m.group(7) is not None:
        sign = int(m.group(7))
    if m.group(8) is not None:
        sign = int(m.group(8))
    return ReidemeisterMove(kind, face, arcs, sign)


def _fresh(d, k):
    top = max(d.slots, default=0)
    return list(range(top + 1, top + 1 + k))


def _with_slots(d, changes, extra=()):
    rows = [list(c) for c in d.crossings]
    for (c, i), lab in changes.items():
        rows[c][i] = lab
    rows.extend(list(r) for r in extra)
    return rows


def _remove(d, dead, extra_loops=0):
    """Delete crossings ``dead``, joining the strands that ran through them."""
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    involved = set()
    for c in dead:
        lab = d.crossings[c]
        involved.update(lab)
        for a, b in ((lab[0], lab[2]), (lab[1], lab[3])):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    rows = []
    alive = set()
    for c, lab in enumerate(d.crossings):
        if c in dead:
            continue
        row = tuple(find(x) for x in lab)
        alive.update(row)
        rows.append(row)
    closed = {find(x) for x in involved} - alive
    return LinkDiagram(rows, d.loops + len(closed) + extra_loops)


def _face(d, f):
    faces = d.faces()
    if not isinstance(f, int) or not 0 <= f < len(faces):
        raise PatternMismatch("no face %r" % (f,))
    return faces[f]


def _curl(d, dart, sign):
    c, i = dart
    c2, j = d.other_end(c, i)
    p, q, r = _fresh(d, 3)
    n = len(d.crossings)
    for a in range(4):
        row = [0] * 4
        row[a], row[(a + 1) % 4], row[(a + 2) % 4], row[(a + 3) % 4] = p, r, r, q
        if (c, i) == (c2, j):
            raise PatternMismatch("degenerate dart")
        rows = _with_slots(d, {(c, i): p, (c2, j): q}, [row])
        new = LinkDiagram(rows, d.loops)
        if _local_sign(new, n) == sign:
            return new
    raise AssertionError("unreachable")


def _local_sign(d, c):
    """Sign of crossing ``c`` when both strands belong to one component."""
    lab = d.crossings[c]
    # walk from under slot 0 forward; find which over slot is met first
    cc, i = c, 2
    while True:
        c2, j = d.other_end(cc, i)
        if c2 == c:
            if j % 2 == 1:
                # entered over strand through slot j
                return 1 if (j - 0) % 4 == 3 else -1
            if j == 0:
                raise DiagramError("strands of crossing lie on different components")
        cc, i = c2, (j + 2) % 4
    del lab


def apply_move(d, m):
    """Return the diagram obtained from ``d`` by move ``m``."""
    if m.kind == "I":
        if m.sign not in (1, -1):
            raise PatternMismatch("type I needs sign +1 or -1")
        if m.face == "loop":
            if d.loops < 1:
                raise PatternMismatch("no isolated loop")
            a, b = _fresh(d, 2)
            base = LinkDiagram(d.crossings, d.loops - 1, check=False)
            for row in ((a, a, b, b), (a, b, b, a)):
                new = LinkDiagram(base.crossings + (row,), base.loops)
                if _local_sign(new, len(base.crossings)) == m.sign:
                    return new
            raise AssertionError("unreachable")
        face = _face(d, m.face)
        if len(m.arcs) != 1 or not 0 <= m.arcs[0] < len(face):
            raise PatternMismatch("type I needs one arc of the face")
        return _curl(d, face[m.arcs[0]], m.sign)

    if m.kind == "I-":
        face = _face(d, m.face)
        if len(face) != 1:
            raise PatternMismatch("face %s is not a monogon" % m.face)
        return _remove(d, {face[0][0]})

    if m.kind == "II":
        return _poke(d, m)

    if m.kind == "II-":
        face = _face(d, m.face)
        if len(face) != 2:
            raise PatternMismatch("face %s is not a bigon" % m.face)
        (c1, i1), (c2, i2) = face
        if c1 == c2:
            raise PatternMismatch("bigon with a single crossing")
        _, j1 = d.other_end(c1, i1)
        _, j2 = d.other_end(c2, i2)
        if i1 % 2 != j1 % 2 or i2 % 2 != j2 % 2:
            raise PatternMismatch("bigon is alternating")
        return _remove(d, {c1, c2})

    if m.kind == "III":
        return _slide(d, m)

    raise PatternMismatch("unknown move kind %r" % m.kind)


def _poke(d, m):
    if m.sign not in (0, 1):
        raise PatternMismatch("type II needs over index 0 or 1")
    if m.face in ("loop", "loops"):
        if m.face == "loop" and d.loops < 1 or m.face == "loops" and d.loops < 2:
            raise PatternMismatch("not enough isolated loops")
        a1, m1, a2, m2 = _fresh(d, 4)
        if m.face == "loop":
            # one loop pushed across itself
            A = [m2, a1, a1, m1]
            B = [a2, a2, m2, m1]
            left = d.loops - 1
        else:
            A = [m2, a1, a2, m1]
            B = [a2, a1, m2, m1]
            left = d.loops - 2
        if m.sign == 1:
            A = A[1:] + A[:1]
            B = B[1:] + B[:1]
        return LinkDiagram(d.crossings + (tuple(A), tuple(B)), left)
    face = _face(d, m.face)
    if len(m.arcs) != 2 or m.arcs[0] == m.arcs[1] or not all(
            0 <= k < len(face) for k in m.arcs):
        raise PatternMismatch("type II needs two distinct arcs of the face")
    p1 = face[m.arcs[0]]
    p2 = face[m.arcs[1]]
    q1 = d.other_end(*p1)
    q2 = d.other_end(*p2)
    if {p1, q1} & {p2, q2}:
        raise PatternMismatch("both arcs lie on one edge")
    if m.sign == 1:
        p1, q1, p2, q2 = p2, q2, p1, q1
    a1, m1, b1, a2, m2, b2 = _fresh(d, 6)
    A = (m2, a1, b2, m1)
    B = (a2, b1, m2, m1)
    rows = _with_slots(d, {p1: a1, q1: b1, p2: a2, q2: b2}, [A, B])
    return LinkDiagram(rows, d.loops)


def _slide(d, m):
    face = _face(d, m.face)
    if len(face) != 3:
        raise PatternMismatch("face %s is not a triangle" % m.face)
    cs = {c for c, _ in face}
    if len(cs) != 3:
        raise PatternMismatch("triangle does not have three distinct crossings")
    sides = []
    for c, i in face:
        c2, j = d.other_end(c, i)
        sides.append(((c, i), (c2, j)))
    kinds = sorted((a[1] % 2) + (b[1] % 2) for a, b in sides)
    if kinds != [0, 1, 2]:
        raise PatternMismatch("triangle is alternating")
    changes = {}
    for (x, y) in sides:
        lab = d.crossings[x[0]][x[1]]
        x_out = (x[0], (x[1] + 2) % 4)
        y_out = (y[0], (y[1] + 2) % 4)
        changes[y] = d.crossings[x_out[0]][x_out[1]]
        changes[x] = d.crossings[y_out[0]][y_out[1]]
        changes[x_out] = lab
        changes[y_out] = lab
    return LinkDiagram(_with_slots(d, changes), d.loops)


def find_face(d, labels, size=None):
    """Index of the face whose darts carry exactly ``labels``."""
    want = sorted(labels)
    for k, face in enumerate(d.faces()):
        if size is not None and len(face) != size:
            continue
        if sorted(d.crossings[c][i] for c, i in face) == want:
            return k
    return None


def inverse_move(before, m, after):
    """The move undoing ``m`` on ``after``."""
    if m.kind == "I":
        for k, face in enumerate(after.faces()):
            if len(face) == 1 and face[0][0] == len(after.crossings) - 1:
                return ReidemeisterMove("I-", k)
    elif m.kind == "II":
        n = len(after.crossings)
        for k, face in enumerate(after.faces()):
            if len(face) == 2 and {c for c, _ in face} == {n - 2, n - 1}:
                (c1, i1), (c2, i2) = face
                _, j1 = after.other_end(c1, i1)
                if i1 % 2 == j1 % 2:
                    return ReidemeisterMove("II-", k)
    elif m.kind == "III":
        face = before.faces()[m.face]
        labs = [before.crossings[c][i] for c, i in face]
        k = find_face(after, labs, 3)
        if k is not None:
            return ReidemeisterMove("III", k)
    elif m.kind in ("I-", "II-"):
        return _find_creating_move(before, m, after)
    raise PatternMismatch("cannot locate the inverse of %s" % m)


def _find_creating_move(before, m, after):
    target = canonical_form(before)
    for cand in candidate_moves(after, kinds=("I",) if m.kind == "I-" else ("II",)):
        try:
            if canonical_form(apply_move(after, cand)) == target:
                return cand
        except PatternMismatch:
            continue
    raise PatternMismatch("no creating move found for %s" % m)


def candidate_moves(d, kinds=("I", "I-", "II", "II-", "III")):
    """All move descriptors that might apply to ``d``, in a fixed order."""
    faces = d.faces()
    out = []
    if "I-" in kinds:
        out += [ReidemeisterMove("I-", k) for k, f in enumerate(faces) if len(f) == 1]
    if "II-" in kinds:
        out += [ReidemeisterMove("II-", k) for k, f in enumerate(faces) if len(f) == 2]
    if "III" in kinds:
        out += [ReidemeisterMove("III", k) for k, f in enumerate(faces) if len(f) == 3]
    if "I" in kinds:
        if d.loops:
            out += [ReidemeisterMove("I", "loop", (), s) for s in (1, -1)]
        for k, f in enumerate(faces):
            for a in range(len(f)):
                out += [ReidemeisterMove("I", k, (a,), s) for s in (1, -1)]
    if "II" in kinds:
        if d.loops:
            out += [ReidemeisterMove("II", "loop", (), s) for s in (0, 1)]
        if d.loops >= 2:
            out += [ReidemeisterMove("II", "loops", (), s) for s in (0, 1)]
        for k, f in enumerate(faces):
            for a in range(len(f)):
                for b in range(a + 1, len(f)):
                    out += [ReidemeisterMove("II", k, (a, b), s) for s in (0, 1)]
    return out


def applicable_moves(d, kinds=("I", "I-", "II", "II-", "III")):
    """Pairs (move, result) for every move that applies to ``d``."""
    out = []
    for m in candidate_moves(d, kinds):
        try:
            out.append((m, apply_move(d, m)))
        except PatternMismatch:
            pass
    return out


# -- scripts ----------------------------------------------------------------

class MoveScript:
    """Replayable list of Reidemeister moves with periodic checkpoints."""

    CHECKPOINT_EVERY = 100

    def __init__(self, start, moves=()):
        self.start = start
        self.moves = list(moves)

    def __len__(self):
        return len(self.moves)

    def replay(self, checkpoints=None):
        d = self.start
        for k, m in enumerate(self.moves):
            d = apply_move(d, m)
            if checkpoints and (k + 1) in checkpoints:
                if canonical_form(d) != canonical_form(checkpoints[k + 1]):
                    raise DiagramError("checkpoint mismatch after move %d" % (k + 1))
        return d

    def counts(self):
        out = {}
        for m in self.moves:
            out[m.kind] = out.get(m.kind, 0) + 1
        return out

    def dumps(self):
        lines = ["START " + serialize(self.start)]
        d = self.start
        for k, m in enumerate(self.moves):
            lines.append(str(m))
            d = apply_move(d, m)
            if (k + 1) % self.CHECKPOINT_EVERY == 0:
                lines.append("CHECK %d %s" % (k + 1, serialize(d)))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text, verify=True):
        start = None
        moves = []
        checks = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("START "):
                start = parse_diagram(line[6:])
            elif line.startswith("CHECK "):
                _, k, rest = line.split(" ", 2)
                checks[int(k)] = parse_diagram(rest)
            else:
                moves.append(parse_move(line))
        if start is None:
            raise DiagramSyntaxError("script has no START line")
        script = cls(start, moves)
        if verify:
            script.replay(checks)
        return script


def bfs_untangle(d, max_crossings, max_depth, max_states=200000):
    """Breadth-first search for a move sequence to the trivial diagram.

    Returns a :class:`MoveScript`, or ``None`` when every diagram within the
    bounds has been visited.  Raises :class:`ResourceLimit` when more than
    ``max_states`` diagrams would have to be stored.
    """
    if len(link_components(d)) != 1:
        raise DiagramError("bfs_untangle needs a knot diagram")
    start = canonical_form(d)
    if is_trivial(d):
        return MoveScript(d, [])
    parent = {start: None}
    frontier = [d]
    for _ in range(max_depth):
        nxt = []
        for cur in frontier:
            key = canonical_form(cur)
            for m, new in applicable_moves(cur):
                if len(new.crossings) > max_crossings:
                    continue
                k2 = canonical_form(new)
                if k2 in parent:
                    continue
                parent[k2] = (key, cur, m)
                if is_trivial(new):
                    return MoveScript(d, _unwind(parent, k2))
                if len(parent) > max_states:
                    raise ResourceLimit("more than %d diagrams visited" % max_states)
                nxt.append(new)
        if not nxt:
            return None
        frontier = nxt
    return None


def _unwind(parent, key):
    moves = []
    while parent[key] is not None:
        key, _, m = parent[key]
        moves.append(m)
    return moves[::-1]


# standard examples, handy for tests and scripts
TREFOIL = "K[X(1,5,2,4), X(3,1,4,6), X(5,3,6,2)]"
FIGURE_EIGHT = "K[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]"
HOPF = "K[X(4,1,3,2), X(2,3,1,4)]"
