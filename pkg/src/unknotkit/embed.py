"""Triangulated convex polytopes in Z^3 carrying a given link diagram.

Pipeline: subdivide the diagram graph, triangulate it and add a frame,
draw it on the integer grid with the Schnyder wood of a canonical ordering,
erect a slab of triangular prisms over the drawing (14 tetrahedra each),
stack three slabs and route the link through the middle one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complex import PLCurve, from_simplices
from .diagram import LinkDiagram, crossing_measure, is_isomorphic


class EmbedError(RuntimeError):
    """An internal construction check failed."""


# -- plane graphs as rotation systems ----------------------------------------
#
# rot[v] lists the neighbours of v counterclockwise.  A face is traced with
# the face on the left: after u -> v the walk leaves v towards the neighbour
# just clockwise of u.

def _next(rot, u, v):
    r = rot[v]
    return r[(r.index(u) - 1) % len(r)]


def plane_faces(rot):
    seen = set()
    out = []
    for u in sorted(rot):
        for v in rot[u]:
            if (u, v) in seen:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                walk.append(a)
                a, b = b, _next(rot, a, b)
            out.append(tuple(walk))
    return out


def _face_of(rot, u, v):
    walk = [u]
    a, b = u, v
    while True:
        a, b = b, _next(rot, a, b)
        if (a, b) == (u, v):
            return walk
        walk.append(a)


def _insert(rot, v, after, x):
    r = rot[v]
    r.insert(r.index(after) + 1, x)


def _add_chord(rot, walk, i, j):
    """Join walk positions i and j through the face traced by ``walk``."""
    n = len(walk)
    u, v = walk[i], walk[j]
    _insert(rot, u, walk[(i + 1) % n], v)
    _insert(rot, v, walk[(j + 1) % n], u)


def _euler_ok(rot):
    V = len(rot)
    E = sum(len(r) for r in rot.values()) // 2
    return V - E + len(plane_faces(rot)) == 2


@dataclass
class AugmentedGraph:
    """Subdivided, triangulated and framed diagram graph.

    Vertex ids: crossings first, then special vertices, then the three
    frame vertices.  ``arc_ends[(c, i)]`` is the special vertex next to
    crossing ``c`` on its slot ``i``; ``arcs[label]`` is the special pair on
    the diagram edge ``label`` listed from its first slot to its second.
    """
    base: LinkDiagram
    rot: dict
    m: int
    n: int
    crossings: list
    special_vertices: list
    arcs: dict
    arc_ends: dict
    loop_triangles: list
    added_edges: list
    outer: tuple
    frame: tuple
    faces: list = field(default_factory=list)

    @property
    def vertex_count(self):
        return len(self.rot)

    def bounded_faces(self):
        fr = set(self.frame)
        return [f for f in self.faces if set(f) != fr]

    def diagram_edges(self):
        out = set()
        for (c, i), s in self.arc_ends.items():
            out.add(frozenset((c, s)))
        for s1, s2 in self.arcs.values():
            out.add(frozenset((s1, s2)))
        for tri in self.loop_triangles:
            for k in range(3):
                out.add(frozenset((tri[k], tri[(k + 1) % 3])))
        return out


def augment(d):
    """Subdivide every diagram edge twice (loops become triangles),
    triangulate every face without multiple edges, and frame the result."""
    V = len(d.crossings)
    rot = {c: [None] * 4 for c in range(V)}
    nxt = V
    arcs, arc_ends = {}, {}
    for lab in sorted(d.slots):
        (c1, i1), (c2, i2) = d.slots[lab]
        s1, s2 = nxt, nxt + 1
        nxt += 2
        arcs[lab] = (s1, s2)
        arc_ends[(c1, i1)] = s1
        arc_ends[(c2, i2)] = s2
        rot[c1][i1] = s1
        rot[c2][i2] = s2
        rot[s1] = [c1, s2]
        rot[s2] = [s1, c2]
    loops = []
    for _ in range(d.loops):
        a, b, c = nxt, nxt + 1, nxt + 2
        nxt += 3
        rot[a], rot[b], rot[c] = [b, c], [c, a], [a, b]
        loops.append((a, b, c))
    m = nxt
    specials = list(range(V, m))
    added = []
    # join the components through one common face
    comps = _components(rot)
    if len(comps) > 1:
        base = comps[0]
        u0 = base[0]
        dart = (u0, rot[u0][0])
        for comp in comps[1:]:
            walk = _face_of(rot, *dart)
            v0 = comp[0]
            other = _face_of(rot, v0, rot[v0][0])
            i = walk.index(dart[0]) if walk[0] != dart[0] else 0
            _insert(rot, walk[i], walk[(i + 1) % len(walk)], other[0])
            _insert(rot, other[0], other[1 % len(other)], walk[i])
            added.append((walk[i], other[0]))
    # triangulate
    while True:
        big = [f for f in plane_faces(rot) if len(f) > 3]
        if not big:
            break
        walk = big[0]
        chord = _pick_chord(rot, walk)
        if chord is None:
            raise EmbedError("face %s cannot be split without a double edge" % (walk,))
        i, j = chord
        _add_chord(rot, walk, i, j)
        added.append((walk[i], walk[j]))
    faces = plane_faces(rot)
    if len(rot) >= 3 and not _euler_ok(rot):
        raise EmbedError("triangulated diagram graph is not planar")
    outer = min(faces)
    a, b, c = outer
    A, B, C = m, m + 1, m + 2
    collar = [(a, b, B), (a, B, A), (b, c, C), (b, C, B), (c, a, A), (c, A, C), (A, B, C)]
    faces = [f for f in faces if f != outer] + collar
    rot = _rot_from_faces(faces)
    if not _euler_ok(rot):
        raise EmbedError("framed graph is not a sphere triangulation")
    g = AugmentedGraph(d, rot, m, crossing_measure(d), list(range(V)), specials, arcs,
                       arc_ends, loops, added, outer, (A, B, C), plane_faces(rot))
    _check_simple(g)
    return g


def _components(rot):
    seen = set()
    out = []
    for s in sorted(rot):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in rot[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def _pick_chord(rot, walk):
    """A chord of the face with distinct, non-adjacent ends.  Chords from
    the lowest vertex of the face are tried first, which gives a fan when
    the face boundary is a simple cycle."""
    n = len(walk)
    order = sorted(range(n), key=lambda i: (walk[i], i))
    for i in order:
        u = walk[i]
        for k in range(2, n - 1):
            j = (i + k) % n
            v = walk[j]
            if v != u and v not in rot[u]:
                return i, j
    return None


def _rot_from_faces(faces):
    succ = {}
    for f in faces:
        for k in range(3):
            u, v, w = f[k - 1], f[k], f[(k + 1) % 3]
            # at v: w comes just before u counterclockwise
            succ.setdefault(v, {})[w] = u
    rot = {}
    for v, nx in succ.items():
        s = min(nx)
        cyc = [s]
        while nx[cyc[-1]] != s:
            cyc.append(nx[cyc[-1]])
            if len(cyc) > len(nx):
                raise EmbedError("vertex %d has a pinched link" % v)
        if len(cyc) != len(nx):
            raise EmbedError("vertex %d has a pinched link" % v)
        rot[v] = cyc
    return rot


def _check_simple(g):
    for v, r in g.rot.items():
        if v in r or len(set(r)) != len(r):
            raise EmbedError("augmented graph has a loop or multiple edge at %d" % v)
    if any(len(f) != 3 for f in g.faces):
        raise EmbedError("augmented graph has a non-triangular face")
    if 2 * len(g.rot) - 4 != len(g.faces):
        raise EmbedError("face count does not match a sphere triangulation")


# -- straight-line grid drawing ----------------------------------------------

@dataclass
class GridEmbedding:
    graph: AugmentedGraph
    coords: dict            # vertex -> (x, y)
    side: int

    def segments(self):
        out = []
        for v, r in self.graph.rot.items():
            for w in r:
                if v < w:
                    out.append((v, w))
        return out


def canonical_order(rot, v1, v2, vn):
    """Canonical ordering of a sphere triangulation with outer face
    ``(v1, v2, vn)`` listed counterclockwise in the drawing."""
    N = len(rot)
    contour = [v1, vn, v2]
    removed = set()
    order = []
    for _ in range(N - 2):
        on = set(contour)
        pick = None
        for k in range(1, len(contour) - 1):
            w = contour[k]
            if sum(1 for x in rot[w] if x in on) == 2:
                if pick is None or w < contour[pick]:
                    pick = k
        if pick is None:
            raise EmbedError("no removable contour vertex")
        w = contour[pick]
        left, right = contour[pick - 1], contour[pick + 1]
        r = rot[w]
        i = r.index(left)
        inner = []
        k = (i + 1) % len(r)
        while r[k] != right:
            if r[k] in removed:
                raise EmbedError("contour update meets a removed vertex")
            inner.append(r[k])
            k = (k + 1) % len(r)
        # counterclockwise from the left neighbour sweeps the interior in
        # left-to-right order below w
        contour = contour[:pick] + inner + contour[pick + 1:]
        removed.add(w)
        order.append(w)
    if contour != [v1, v2]:
        raise EmbedError("canonical ordering did not reduce to the base edge")
    return [v1, v2] + order[::-1]


def schnyder_embed(rot, a1, a2, a3):
    """Schnyder-wood drawing from vertex counts of the three regions.

    The canonical ordering colours each edge: a new vertex points to its
    leftmost and rightmost contour neighbours (trees 1 and 2) and the
    vertices it covers point to it (tree 3).  Interior coordinates sum to
    ``N - 1``; the outer vertices go to ``(N-2, 1)``, ``(0, N-2)``, ``(1, 0)``.
    """
    order = canonical_order(rot, a1, a2, a3)
    N = len(order)
    par = {1: {}, 2: {}, 3: {}}
    first = order[2]
    par[1][first], par[2][first] = order[0], order[1]
    contour = [order[0], first, order[1]]
    for v in order[3:]:
        idx = [k for k, w in enumerate(contour) if w in rot[v]]
        p, q = idx[0], idx[-1]
        if idx != list(range(p, q + 1)):
            raise EmbedError("neighbours of %d are not contiguous on the contour" % v)
        par[1][v], par[2][v] = contour[p], contour[q]
        for k in range(p + 1, q):
            par[3][contour[k]] = v
        contour = contour[:p + 1] + [v] + contour[q:]
    roots = {1: a1, 2: a2, 3: a3}

    def path(v, i):
        out = [v]
        while out[-1] != roots[i]:
            out.append(par[i][out[-1]])
        return out

    coords = {a1: (N - 2, 1), a2: (0, N - 2), a3: (1, 0)}
    for v in order:
        if v in coords:
            continue
        r = []
        for i in (1, 2):
            j, k = i % 3 + 1, (i + 1) % 3 + 1
            wall = set(path(v, j)) | set(path(v, k))
            # vertices of the region opposite a_i: everything not reachable
            # from a_i without crossing the two paths
            outside, stack = {roots[i]}, [roots[i]]
            while stack:
                x = stack.pop()
                for y in rot[x]:
                    if y not in wall and y not in outside:
                        outside.add(y)
                        stack.append(y)
            r.append(N - len(outside) - len(path(v, k)))
        coords[v] = tuple(r)
    return coords, N


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def segments_cross(p1, p2, q1, q2):
    """True when closed segments meet anywhere other than a shared endpoint."""
    shared = {p1, p2} & {q1, q2}
    d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    if shared:
        # collinear overlap beyond the shared point
        if len(shared) == 2:
            return True
        if d1 == 0 and d2 == 0:
            s = next(iter(shared))
            a = p2 if p1 == s else p1
            b = q2 if q1 == s else q1
            return (a[0] - s[0]) * (b[0] - s[0]) + (a[1] - s[1]) * (b[1] - s[1]) > 0
        return False
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 and d2 and d3 and d4:
        return True

    def on(a, b, c):
        return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))
    return ((d1 == 0 and on(q1, q2, p1)) or (d2 == 0 and on(q1, q2, p2))
            or (d3 == 0 and on(p1, p2, q1)) or (d4 == 0 and on(p1, p2, q2)))


def _angle_key(d):
    # exact counterclockwise angle order starting at the positive x axis
    x, y = d
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half, Fraction(-x, abs(x) + abs(y)) if half == 0 else Fraction(x, abs(x) + abs(y))


def check_drawing(rot, coords):
    """Exact certificate that ``coords`` draws ``rot`` with straight edges."""
    for v, r in rot.items():
        p = coords[v]
        ang = sorted(r, key=lambda w: _angle_key((coords[w][0] - p[0], coords[w][1] - p[1])))
        k = ang.index(r[0])
        if ang[k:] + ang[:k] != list(r):
            raise EmbedError("rotation at %d does not match the drawing" % v)
    segs = [(v, w) for v in rot for w in rot[v] if v < w]
    for i in range(len(segs)):
        a, b = segs[i]
        for j in range(i + 1, len(segs)):
            c, d = segs[j]
            if segments_cross(coords[a], coords[b], coords[c], coords[d]):
                raise EmbedError("edges %s and %s cross" % (segs[i], segs[j]))
    return True


def grid_embed(g):
    """Straight-line drawing of the framed graph on a square grid of side N - 2."""
    A, B, C = g.frame
    # the frame face (A, B, C) is traced clockwise in the drawing
    coords, N = schnyder_embed(g.rot, A, C, B)
    check_drawing(g.rot, coords)
    side = max(max(p) for p in coords.values())
    if min(min(p) for p in coords.values()) < 0 or side > N - 2:
        raise EmbedError("drawing leaves the (N-2) grid")
    if g.n >= 1 and side > 10 * g.n - 1:
        raise EmbedError("drawing exceeds the 10n - 1 grid")
    return GridEmbedding(g, coords, side)


# -- prisms and slabs -----------------------------------------------------------

SCALE = 3
LEVELS = (-6, -2, 2, 6)     # slab boundaries after scaling


@dataclass
class PrismComplex:
    tets: list              # 4-tuples of labels
    coords: dict            # label -> integer point (already scaled)
    prisms: int


def _wall_point(e, a, b, z):
    lo, hi = (a, b) if a < b else (b, a)
    return ("w", lo, hi, z)


def build_prisms(e, z0=LEVELS[1], z1=LEVELS[2], tag=0):
    """One slab between heights ``z0`` and ``z1`` over every bounded face.

    Each prism gets one point inside each rectangular wall (a third of the
    way along its edge from the lower vertex id, at mid height) and its
    centroid; the bottom, the top and the four triangles of every wall are
    coned to the centroid: 14 tetrahedra.
    """
    g = e.graph
    pts = {}
    zm = (z0 + z1) // 2

    def P(v, z):
        lab = ("v", v, z)
        x, y = e.coords[v]
        pts[lab] = (SCALE * x, SCALE * y, z)
        return lab

    def W(a, b):
        lo, hi = (a, b) if a < b else (b, a)
        lab = ("w", lo, hi, zm)
        (x1, y1), (x2, y2) = e.coords[lo], e.coords[hi]
        pts[lab] = (2 * x1 + x2, 2 * y1 + y2, zm)
        return lab

    tets = []
    faces = g.bounded_faces()
    for k, (a, b, c) in enumerate(faces):
        cen = ("g", tag, k)
        (xa, ya), (xb, yb), (xc, yc) = e.coords[a], e.coords[b], e.coords[c]
        pts[cen] = (xa + xb + xc, ya + yb + yc, zm)
        tets.append((P(a, z0), P(b, z0), P(c, z0), cen))
        tets.append((P(a, z1), P(b, z1), P(c, z1), cen))
        for u, v in ((a, b), (b, c), (c, a)):
            w = W(u, v)
            corners = [P(u, z0), P(v, z0), P(v, z1), P(u, z1)]
            for i in range(4):
                tets.append((corners[i], corners[(i + 1) % 4], w, cen))
    if len(tets) != 14 * len(faces):
        raise EmbedError("prism dissection miscounted")
    return PrismComplex(tets, pts, len(faces))


def _stack(e):
    tets, coords, prisms = [], {}, 0
    for tag, (z0, z1) in enumerate(zip(LEVELS, LEVELS[1:])):
        pc = build_prisms(e, z0, z1, tag)
        tets += pc.tets
        coords.update(pc.coords)
        prisms += pc.prisms
    return PrismComplex(tets, coords, prisms)


# -- routing the link ---------------------------------------------------------

def route_labels(g):
    """Closed label paths of the link components through the middle slab."""
    d = g.base
    lo, hi = LEVELS[1], LEVELS[2]
    zm = (lo + hi) // 2

    def vert(v, z):
        return ("v", v, z)

    def wall(a, b):
        x, y = (a, b) if a < b else (b, a)
        return ("w", x, y, zm)

    out = []
    seen = set()
    for lab0 in sorted(d.slots):
        if lab0 in seen:
            continue
        c, i = d.slots[lab0][0]
        start = (c, i)
        path = []
        while True:
            lab = d.crossings[c][i]
            seen.add(lab)
            level = lo if i % 2 == 0 else hi
            s_near = g.arc_ends[(c, i)]
            c2, j = d.other_end(c, i)
            s_far = g.arc_ends[(c2, j)]
            level2 = lo if j % 2 == 0 else hi
            path.append(vert(c, level))
            if level != lo:
                path.append(wall(c, s_near))
            path.append(vert(s_near, lo))
            path.append(vert(s_far, lo))
            if level2 != lo:
                path.append(wall(s_far, c2))
            c, i = c2, (j + 2) % 4
            if (c, i) == start:
                break
        out.append(path)
    for tri in g.loop_triangles:
        out.append([vert(v, lo) for v in tri])
    return out


@dataclass
class EmbeddedComplement:
    polytope: object                # Triangulation with coordinates
    knot: object                    # PLCurve, or a tuple of PLCurves for links
    components: list
    graph: AugmentedGraph
    embedding: GridEmbedding
    diagram_map: dict               # input crossing -> projected crossing point
    certificate: dict


def route_knot(e, d, T, ids):
    comps = [PLCurve(tuple(ids[x] for x in path), T) for path in route_labels(e.graph)]
    return comps[0] if len(comps) == 1 else tuple(comps)


def build_complement_input(d):
    """The full construction with its certificate of bounds."""
    g = augment(d)
    e = grid_embed(g)
    pc = _stack(e)
    T, ids = from_simplices(pc.tets, pc.coords, boundary_mark="outer")
    labels = route_labels(g)
    comps = [PLCurve(tuple(ids[x] for x in path), T) for path in labels]
    for k, c in enumerate(comps):
        T.curves["knot" if len(comps) == 1 else "knot%d" % k] = c.path
    knot = comps[0] if len(comps) == 1 else tuple(comps)
    diagram_map = {c: (SCALE * e.coords[c][0], SCALE * e.coords[c][1]) for c in g.crossings}
    cert = certify(T, comps, g, e, d)
    return EmbeddedComplement(T, knot, comps, g, e, diagram_map, cert)


def certify(T, comps, g, e, d):
    """Check the size, box and projection bounds and the shape of the polytope exactly."""
    from .project import project
    n = g.n
    m = g.m
    t = T.size
    bounded = len(g.bounded_faces())
    expect = 42 * bounded
    if t != expect:
        raise EmbedError("tetrahedron count %d differs from 42 x %d prisms" % (t, bounded))
    xs = [p[0] for p in T.coords.values()]
    ys = [p[1] for p in T.coords.values()]
    zs = [p[2] for p in T.coords.values()]
    nb = max(n, 1)
    box_ok = (min(xs) >= 0 and max(xs) <= 30 * nb and min(ys) >= 0 and max(ys) < 30 * nb
              and min(zs) >= -6 and max(zs) <= 6)
    if not box_ok:
        raise EmbedError("vertices leave the box")
    T.check_manifold()
    _check_convex(T)
    boundary = T.boundary_vertices()
    for c in comps:
        if set(c.path) & boundary:
            raise EmbedError("link touches the polytope boundary")
        _check_path_edges(T, c.path)
    # crossings sit over the crossing columns, so both strands have a
    # vertex there; transverse vertex crossings are accepted
    rep = project(comps, vertex_crossings=True)
    if not rep.regular:
        raise EmbedError("projection is not regular: %s" % (rep.witness,))
    if not is_isomorphic(rep.diagram, d):
        raise EmbedError("projected diagram is not isomorphic to the input")
    return {
        "n": n, "m": m, "vertices": len(g.rot), "bounded_faces": bounded,
        "prisms": 3 * bounded, "tetrahedra": t, "bound_84(m+1)": 84 * (m + 1),
        "bound_840n": 840 * nb, "grid_side": e.side,
        "box": [[min(xs), max(xs)], [min(ys), max(ys)], [min(zs), max(zs)]],
        "link_vertices": sum(len(c.path) for c in comps),
        "projection_regular": True, "diagram_isomorphic": True,
        "vertex_crossings": len(rep.crossing_list),
        "link_interior": True, "convex": True,
    }


def _check_path_edges(T, path):
    ends = {frozenset(p) for p in T.edge_endpoints()}
    n = len(path)
    if len(set(path)) != n:
        raise EmbedError("routed link repeats a vertex")
    for i in range(n):
        if frozenset((path[i], path[(i + 1) % n])) not in ends:
            raise EmbedError("routed step %d is not an edge" % i)
        a, b = T.coords[path[i]], T.coords[path[(i + 1) % n]]
        if a[0] == b[0] and a[1] == b[1]:
            raise EmbedError("routed link has a vertical edge")


def _check_convex(T):
    """Every boundary face supports the polytope on one side."""
    pts = list(set(T.coords.values()))
    for t, f in T.boundary_faces():
        tri = [T.coords[T.vertex(t, v)] for v in range(4) if v != f]
        a, b, c = tri
        u = tuple(b[i] - a[i] for i in range(3))
        w = tuple(c[i] - a[i] for i in range(3))
        nrm = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
        signs = set()
        for p in pts:
            s = sum(nrm[i] * (p[i] - a[i]) for i in range(3))
            if s:
                signs.add(s > 0)
        if len(signs) > 1:
            raise EmbedError("boundary face of tetrahedron %d is not supporting" % t)
