"""Triangulated 3-manifolds built from face gluings.

Conventions follow the usual census format: face ``i`` of a tetrahedron is
the face opposite vertex ``i``, and a gluing permutation sends vertex ``v``
of one tetrahedron to vertex ``perm[v]`` of its neighbour.
"""

import itertools
import re
from dataclasses import dataclass, field

EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: k for k, e in enumerate(EDGES)}
PERMS = tuple(itertools.permutations(range(4)))
PERM_INDEX = {p: k for k, p in enumerate(PERMS)}

PERIPHERAL = "peripheral_torus"


class TriangulationError(ValueError):
    pass


class InvolutionError(TriangulationError):
    pass


class ManifoldError(TriangulationError):
    pass


class InteriorityError(TriangulationError):
    pass


def inverse_perm(p):
    inv = [0] * 4
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_sign(p):
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


class _UF:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent
        root = x
        while p.get(root, root) != root:
            root = p[root]
        while p.get(x, x) != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra
        return ra


@dataclass
class PLCurve:
    """Closed polygonal curve given by its cyclic list of vertex ids."""
    path: tuple
    host: object = None

    def __post_init__(self):
        self.path = tuple(self.path)

    def __len__(self):
        return len(self.path)

    def edges(self):
        n = len(self.path)
        return [(self.path[i], self.path[(i + 1) % n]) for i in range(n)]

    def reversed(self):
        return PLCurve(self.path[::-1], self.host)


class Triangulation:
    """Tetrahedra with face gluings, marks and optional vertex coordinates.

    ``gluings[t][f]`` is ``None`` for a boundary face or ``(t2, f2, perm)``.
    ``marks`` maps boundary faces ``(t, f)`` to a mark string or ``None``.
    """

    def __init__(self, gluings, marks=None, coords=None, curves=None,
                 cycles=None, provenance=None, check=True):
        self.gluings = tuple(
            tuple(None if g is None else (int(g[0]), int(g[1]), tuple(g[2])) for g in row)
            for row in gluings)
        self.marks = dict(marks or {})
        for t, row in enumerate(self.gluings):
            for f, g in enumerate(row):
                if g is None:
                    self.marks.setdefault((t, f), None)
        self.coords = dict(coords or {})
        self.curves = dict(curves or {})
        self.cycles = dict(cycles or {})
        self.provenance = dict(provenance or {})
        self._cache = {}
        self._check_involution()
        if check:
            self.check_manifold()

    @property
    def size(self):
        return len(self.gluings)

    def __len__(self):
        return len(self.gluings)

    def _check_involution(self):
        n = len(self.gluings)
        for t, row in enumerate(self.gluings):
            if len(row) != 4:
                raise TriangulationError("tetrahedron %d needs 4 face records" % t)
            for f, g in enumerate(row):
                if g is None:
                    continue
                t2, f2, p = g
                if not 0 <= t2 < n or sorted(p) != [0, 1, 2, 3] or p[f] != f2:
                    raise InvolutionError("bad gluing record at %d:%d" % (t, f))
                if (t2, f2) == (t, f):
                    raise InvolutionError("face %d:%d glued to itself" % (t, f))
                back = self.gluings[t2][f2]
                if back is None or back[0] != t or back[1] != f or back[2] != inverse_perm(p):
                    raise InvolutionError(
                        "gluing %d:%d -> %d:%d is not matched by its inverse" % (t, f, t2, f2))

    # -- skeleta ---------------------------------------------------------

    def _classes(self):
        if "classes" in self._cache:
            return self._cache["classes"]
        n = len(self.gluings)
        vuf = _UF()
        # edges: union-find with orientation parity
        eparent = {}
        eflip = {}

        def efind(x):
            path = []
            while eparent.get(x, x) != x:
                path.append(x)
                x = eparent[x]
            root = x
            acc = 1
            for y in reversed(path):
                acc *= eflip[y]
                eflip[y] = acc
                eparent[y] = root
            return root

        def eparity(x):
            r = efind(x)
            return r, (eflip[x] if x != r else 1)

        for t, row in enumerate(self.gluings):
            for f, g in enumerate(row):
                if g is None:
                    continue
                t2, f2, p = g
                for v in range(4):
                    if v != f:
                        vuf.union((t, v), (t2, p[v]))
                for (u, v) in EDGES:
                    if f in (u, v):
                        continue
                    a, b = p[u], p[v]
                    s = 1 if a < b else -1
                    x = (t, EDGE_INDEX[(u, v)])
                    y = (t2, EDGE_INDEX[(min(a, b), max(a, b))])
                    rx, px = eparity(x)
                    ry, py = eparity(y)
                    if rx == ry:
                        if px * py != s:
                            raise ManifoldError("edge identified with itself reversed")
                        continue
                    if ry < rx:
                        rx, ry, px, py = ry, rx, py, px
                    eparent[ry] = rx
                    eflip[ry] = px * py * s
        vid = {}
        vertex_of = {}
        for t in range(n):
            for v in range(4):
                r = vuf.find((t, v))
                if r not in vid:
                    vid[r] = len(vid)
                vertex_of[(t, v)] = vid[r]
        eid = {}
        edge_of = {}
        for t in range(n):
            for k in range(6):
                r, s = eparity((t, k))
                if r not in eid:
                    eid[r] = len(eid)
                edge_of[(t, k)] = (eid[r], s)
        fid = {}
        face_of = {}
        for t in range(n):
            for f in range(4):
                if (t, f) in face_of:
                    continue
                k = len(fid)
                fid[(t, f)] = k
                face_of[(t, f)] = (k, 1)
                g = self.gluings[t][f]
                if g is not None:
                    t2, f2, p = g
                    mine = [v for v in range(4) if v != f]
                    theirs = [p[v] for v in mine]
                    order = sorted(theirs)
                    s = _parity_of_sequence(theirs, order)
                    face_of[(t2, f2)] = (k, s)
        out = {
            "vertex_of": vertex_of, "nv": len(vid),
            "edge_of": edge_of, "ne": len(eid),
            "face_of": face_of, "nf": len(fid),
        }
        self._cache["classes"] = out
        return out

    @property
    def num_vertices(self):
        return self._classes()["nv"]

    @property
    def num_edges(self):
        return self._classes()["ne"]

    @property
    def num_faces(self):
        return self._classes()["nf"]

    def vertex(self, t, v):
        return self._classes()["vertex_of"][(t, v)]

    def edge(self, t, u, v):
        """(edge id, sign) of local edge u-v, sign +1 when u->v agrees."""
        a, b = (u, v) if u < v else (v, u)
        e, s = self._classes()["edge_of"][(t, EDGE_INDEX[(a, b)])]
        return e, (s if u < v else -s)

    def face(self, t, f):
        return self._classes()["face_of"][(t, f)]

    def tet_vertices(self, t):
        return tuple(self.vertex(t, v) for v in range(4))

    def edge_endpoints(self):
        """Tail and head vertex of every edge in its chosen orientation."""
        if "ends" not in self._cache:
            ends = [None] * self.num_edges
            for t in range(self.size):
                for (u, v) in EDGES:
                    e, s = self.edge(t, u, v)
                    if ends[e] is None:
                        a, b = self.vertex(t, u), self.vertex(t, v)
                        ends[e] = (a, b) if s == 1 else (b, a)
            self._cache["ends"] = ends
        return self._cache["ends"]

    def boundary_faces(self):
        return [(t, f) for t, row in enumerate(self.gluings)
                for f, g in enumerate(row) if g is None]

    def is_closed(self):
        return not self.boundary_faces()

    def boundary_vertices(self):
        out = set()
        for t, f in self.boundary_faces():
            out.update(self.vertex(t, v) for v in range(4) if v != f)
        return out

    def is_simplicial(self):
        if "simp" not in self._cache:
            ok = all(len(set(self.tet_vertices(t))) == 4 for t in range(self.size))
            if ok:
                seen = set()
                for t in range(self.size):
                    key = frozenset(self.tet_vertices(t))
                    if key in seen:
                        ok = False
                        break
                    seen.add(key)
                ends = self.edge_endpoints()
                if len({frozenset(e) for e in ends}) != len(ends):
                    ok = False
                faces = set()
                for t in range(self.size):
                    for f in range(4):
                        k, _ = self.face(t, f)
                        faces.add((k, frozenset(self.vertex(t, v) for v in range(4) if v != f)))
                if len({fs for _, fs in faces}) != self.num_faces:
                    ok = False
            self._cache["simp"] = ok
        return self._cache["simp"]

    def simplices(self):
        """Vertex sets of all tetrahedra (meaningful when simplicial)."""
        return [self.tet_vertices(t) for t in range(self.size)]

    # -- manifold checks ------------------------------------------------

    def vertex_links(self):
        """Per vertex: dict with Euler characteristic, boundary edge count,
        number of link components and boundary circles."""
        cl = self._classes()
        corners = {}
        for t in range(self.size):
            for v in range(4):
                corners.setdefault(cl["vertex_of"][(t, v)], []).append((t, v))
        luv = _UF()  # link vertices: (t, v, w)
        cuf = _UF()
        bdry = {}
        for t, row in enumerate(self.gluings):
            for f, g in enumerate(row):
                for v in range(4):
                    if v == f:
                        continue
                    if g is None:
                        bdry.setdefault(cl["vertex_of"][(t, v)], []).append((t, v, f))
                        continue
                    t2, f2, p = g
                    cuf.union((t, v), (t2, p[v]))
                    for w in range(4):
                        if w not in (v, f):
                            luv.union((t, v, w), (t2, p[v], p[w]))
        out = {}
        for vert, cs in corners.items():
            F = len(cs)
            lverts = {luv.find((t, v, w)) for t, v in cs for w in range(4) if w != v}
            nb = len(bdry.get(vert, []))
            E = (3 * F + nb) // 2
            comps = len({cuf.find(c) for c in cs})
            # boundary circles of the link: boundary edges joined at link vertices
            buf = _UF()
            ends_seen = []
            for t, v, f in bdry.get(vert, []):
                a, b = [luv.find((t, v, w)) for w in range(4) if w not in (v, f)]
                buf.union(a, b)
                ends_seen.append(a)
            circles = len({buf.find(a) for a in ends_seen})
            out[vert] = {"euler": len(lverts) - E + F, "boundary_edges": nb,
                         "components": comps, "circles": circles}
        return out

    def check_manifold(self):
        self._classes()
        for vert, info in self.vertex_links().items():
            if info["components"] != 1:
                raise ManifoldError("link of vertex %d is disconnected" % vert)
            if info["boundary_edges"] == 0:
                if info["euler"] != 2:
                    raise ManifoldError("link of interior vertex %d is not a sphere" % vert)
            elif info["euler"] != 1 or info["circles"] != 1:
                raise ManifoldError("link of boundary vertex %d is not a disk" % vert)
        return True

    # -- boundary surface -------------------------------------------------

    def boundary_components(self):
        """List of dicts: faces, euler characteristic, marks present."""
        faces = self.boundary_faces()
        uf = _UF()
        by_edge = {}
        for t, f in faces:
            for (u, v) in EDGES:
                if f in (u, v):
                    continue
                e, _ = self.edge(t, u, v)
                by_edge.setdefault(e, []).append((t, f))
        for e, fs in by_edge.items():
            for x in fs[1:]:
                uf.union(fs[0], x)
        groups = {}
        for tf in faces:
            groups.setdefault(uf.find(tf), []).append(tf)
        out = []
        for fs in sorted(groups.values()):
            verts = {self.vertex(t, v) for t, f in fs for v in range(4) if v != f}
            edges = {self.edge(t, u, v)[0] for t, f in fs for (u, v) in EDGES if f not in (u, v)}
            chi = len(verts) - len(edges) + len(fs)
            out.append({"faces": fs, "euler": chi,
                        "marks": sorted({str(self.marks.get(tf)) for tf in fs})})
        return out

    def census(self):
        comps = self.boundary_components()
        return {"tetrahedra": self.size, "vertices": self.num_vertices,
                "edges": self.num_edges, "faces": self.num_faces,
                "boundary_components": len(comps),
                "boundary_euler": [c["euler"] for c in comps],
                "boundary_genus": [(2 - c["euler"]) // 2 for c in comps]}

    def faces_with_mark(self, mark):
        return [tf for tf in self.boundary_faces() if self.marks.get(tf) == mark]


def _parity_of_sequence(seq, order):
    pos = [order.index(x) for x in seq]
    s = 1
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            if pos[i] > pos[j]:
                s = -s
    return s


# -- text format --------------------------------------------------------------

_REC = re.compile(r"(\d+):([0-3]):([0-3]{4})|bd(?::(\S+))?")


def parse_triangulation(text, check=True):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise TriangulationError("empty triangulation text")
    m = re.fullmatch(r"tets=(\d+)", lines[0].strip())
    if not m:
        raise TriangulationError("first line must be tets=N")
    n = int(m.group(1))
    if len(lines) < n + 1:
        raise TriangulationError("expected %d tetrahedron lines" % n)
    gluings, marks = [], {}
    for t in range(n):
        recs = lines[1 + t].split()
        if len(recs) != 4:
            raise TriangulationError("tetrahedron %d needs 4 records" % t)
        row = []
        for f, rec in enumerate(recs):
            rm = _REC.fullmatch(rec)
            if not rm:
                raise TriangulationError("bad record %r" % rec)
            if rec.startswith("bd"):
                row.append(None)
                marks[(t, f)] = rm.group(4)
            else:
                row.append((int(rm.group(1)), int(rm.group(2)),
                            tuple(int(c) for c in rm.group(3))))
        gluings.append(row)
    coords, curves, cycles, prov = {}, {}, {}, {}
    for ln in lines[1 + n:]:
        parts = ln.split()
        if parts[0] == "coord" and len(parts) == 5:
            coords[int(parts[1])] = tuple(int(x) for x in parts[2:])
        elif parts[0] == "curve" and len(parts) >= 2:
            curves[parts[1]] = tuple(int(x) for x in parts[2:])
        elif parts[0] == "cycle" and len(parts) >= 2:
            cyc = []
            for tok in parts[2:]:
                cm = re.fullmatch(r"(\d+)([+-])", tok)
                if not cm:
                    raise TriangulationError("bad cycle entry %r" % tok)
                cyc.append((int(cm.group(1)), 1 if cm.group(2) == "+" else -1))
            cycles[parts[1]] = tuple(cyc)
        elif parts[0] == "provenance":
            for kv in parts[1:]:
                k, _, v = kv.partition("=")
                prov[k] = int(v)
        else:
            raise TriangulationError("unrecognised line %r" % ln)
    return Triangulation(gluings, marks, coords, curves, cycles, prov, check=check)


def serialize_triangulation(T):
    out = ["tets=%d" % T.size]
    for t, row in enumerate(T.gluings):
        recs = []
        for f, g in enumerate(row):
            if g is None:
                mk = T.marks.get((t, f))
                recs.append("bd" if mk is None else "bd:%s" % mk)
            else:
                recs.append("%d:%d:%s" % (g[0], g[1], "".join(map(str, g[2]))))
        out.append(" ".join(recs))
    if T.provenance:
        out.append("provenance " + " ".join("%s=%d" % kv for kv in sorted(T.provenance.items())))
    for v in sorted(T.coords):
        out.append("coord %d %d %d %d" % ((v,) + tuple(T.coords[v])))
    for name in sorted(T.curves):
        out.append(" ".join(["curve", name] + [str(x) for x in T.curves[name]]))
    for name in sorted(T.cycles):
        out.append(" ".join(["cycle", name] + ["%d%s" % (e, "+" if s > 0 else "-")
                                               for e, s in T.cycles[name]]))
    return "\n".join(out) + "\n"


def build_triangulation(data):
    """Triangulation from text or from a list of gluing rows."""
    if isinstance(data, str):
        return parse_triangulation(data)
    return Triangulation(data)


def from_simplices(tets, coords=None, boundary_mark=None, check=True):
    """Triangulation whose tetrahedra are given as 4-tuples of vertex labels.

    Faces with the same three labels are glued.  Returns ``(T, ids)`` where
    ``ids`` maps each label to its vertex id in ``T``; ``coords`` (label ->
    point) is carried over to ``T.coords``.
    """
    tets = [tuple(t) for t in tets]
    open_faces = {}
    gl = [[None] * 4 for _ in tets]
    for t, vs in enumerate(tets):
        if len(set(vs)) != 4:
            raise TriangulationError("tetrahedron %d repeats a vertex" % t)
        for f in range(4):
            key = frozenset(vs[:f] + vs[f + 1:])
            if key in open_faces:
                t2, f2 = open_faces.pop(key)
                if t2 is None:
                    raise TriangulationError("face %s is on three tetrahedra" % sorted(key))
                where = {x: i for i, x in enumerate(tets[t2])}
                p = tuple(where.get(x, f2) for x in vs)
                here = {x: i for i, x in enumerate(vs)}
                gl[t][f] = (t2, f2, p)
                gl[t2][f2] = (t, f, tuple(here.get(x, f) for x in tets[t2]))
                open_faces[key] = (None, None)
            else:
                open_faces[key] = (t, f)
    marks = {}
    for key, (t, f) in open_faces.items():
        if t is not None:
            marks[(t, f)] = boundary_mark
    T = Triangulation(gl, marks, check=False)
    ids = {}
    for t, vs in enumerate(tets):
        for i, x in enumerate(vs):
            ids.setdefault(x, T.vertex(t, i))
    if len(set(ids.values())) != len(ids):
        raise TriangulationError("distinct labels were identified")
    if coords is not None:
        T.coords = {ids[x]: tuple(coords[x]) for x in ids}
    if check:
        T.check_manifold()
    return T, ids


# -- barycentric subdivision -------------------------------------------------

@dataclass
class Subdivision:
    """Result of one barycentric subdivision with maps from old simplices.

    ``vertex_map``, ``edge_map``, ``face_map`` and ``tet_map`` send old
    vertex, edge, face and tetrahedron ids to the id of their barycentre.
    """
    triangulation: Triangulation
    vertex_map: dict = field(default_factory=dict)
    edge_map: dict = field(default_factory=dict)
    face_map: dict = field(default_factory=dict)
    tet_map: dict = field(default_factory=dict)

    def carry_curve(self, old, path):
        """Image of a closed vertex path of ``old`` in the subdivision."""
        ends = old.edge_endpoints()
        lookup = {}
        for e, (a, b) in enumerate(ends):
            lookup.setdefault(frozenset((a, b)), []).append(e)
        out = []
        n = len(path)
        for i in range(n):
            a, b = path[i], path[(i + 1) % n]
            es = lookup.get(frozenset((a, b)), [])
            if len(es) != 1:
                raise TriangulationError("no unique edge between %d and %d" % (a, b))
            out.append(self.vertex_map[a])
            out.append(self.edge_map[es[0]])
        return tuple(out)


def barycentric_subdivide(T, with_maps=False):
    """One barycentric subdivision: 24 tetrahedra per old tetrahedron.

    Tetrahedron ``24 t + k`` is the flag ``PERMS[k]`` of old tetrahedron
    ``t``; its vertices 0..3 are the barycentres of the flag's vertex, edge,
    face and tetrahedron.
    """
    gl = []
    marks = {}
    for t in range(T.size):
        for k, pi in enumerate(PERMS):
            row = []
            for j in range(3):
                q = list(pi)
                q[j], q[j + 1] = q[j + 1], q[j]
                row.append((24 * t + PERM_INDEX[tuple(q)], j, (0, 1, 2, 3)))
            g = T.gluings[t][pi[3]]
            if g is None:
                row.append(None)
                marks[(24 * t + k, 3)] = T.marks.get((t, pi[3]))
            else:
                t2, _, p = g
                q = tuple(p[x] for x in pi)
                row.append((24 * t2 + PERM_INDEX[q], 3, (0, 1, 2, 3)))
            gl.append(row)
    prov = dict(T.provenance)
    prov["depth"] = prov.get("depth", 0) + 1
    prov.setdefault("base", T.size)
    S = Triangulation(gl, marks, provenance=prov, check=False)
    if not with_maps:
        return S
    sub = Subdivision(S)
    for t in range(T.size):
        for k, pi in enumerate(PERMS):
            nt = 24 * t + k
            sub.vertex_map.setdefault(T.vertex(t, pi[0]), S.vertex(nt, 0))
            e, _ = T.edge(t, pi[0], pi[1])
            sub.edge_map.setdefault(e, S.vertex(nt, 1))
            fc, _ = T.face(t, pi[3])
            sub.face_map.setdefault(fc, S.vertex(nt, 2))
            sub.tet_map.setdefault(t, S.vertex(nt, 3))
    return sub


def second_subdivision(T, curve=None):
    """M'' together with the image of a curve given as vertex ids of ``T``."""
    s1 = barycentric_subdivide(T, with_maps=True)
    s2 = barycentric_subdivide(s1.triangulation, with_maps=True)
    M2 = s2.triangulation
    if curve is None:
        return M2, None
    k1 = s1.carry_curve(T, curve)
    k2 = s2.carry_curve(s1.triangulation, k1)
    return M2, PLCurve(k2, M2)


# -- neighbourhoods and complements ----------------------------------------

@dataclass
class SolidTorusNbhd:
    host: Triangulation
    tetrahedra: tuple
    peripheral_faces: tuple
    core: tuple

    @property
    def s(self):
        return len(self.core)


def _surface_euler(T, faces):
    verts, edges = set(), set()
    for t, f in faces:
        for v in range(4):
            if v != f:
                verts.add(T.vertex(t, v))
        for (u, v) in EDGES:
            if f not in (u, v):
                edges.add(T.edge(t, u, v)[0])
    return len(verts) - len(edges) + len(faces)


def _surface_connected(T, faces):
    uf = _UF()
    by_edge = {}
    for tf in faces:
        t, f = tf
        for (u, v) in EDGES:
            if f not in (u, v):
                by_edge.setdefault(T.edge(t, u, v)[0], []).append(tf)
    for fs in by_edge.values():
        for x in fs[1:]:
            uf.union(fs[0], x)
    return len({uf.find(tf) for tf in faces}) <= 1


def check_curve(T, K):
    path = K.path if isinstance(K, PLCurve) else tuple(K)
    if len(set(path)) != len(path) or len(path) < 3:
        raise TriangulationError("curve is not embedded")
    pairs = {frozenset(e) for e in T.edge_endpoints()}
    for i in range(len(path)):
        if frozenset((path[i], path[(i + 1) % len(path)])) not in pairs:
            raise TriangulationError("curve step %d is not an edge" % i)
    return path


def regular_neighborhood(T, K):
    """Closed star of the curve ``K`` in a second subdivision ``T``."""
    if T.provenance.get("depth", 0) < 2:
        raise TriangulationError("regular_neighborhood needs a second barycentric subdivision")
    path = check_curve(T, K)
    if len(path) % 4:
        raise TriangulationError("core length must be a multiple of 4")
    if set(path) & T.boundary_vertices():
        raise InteriorityError("curve meets the boundary")
    on = set(path)
    tets = tuple(t for t in range(T.size) if on & set(T.tet_vertices(t)))
    inside = set(tets)
    periph = []
    for t in tets:
        for f in range(4):
            g = T.gluings[t][f]
            if g is None:
                raise InteriorityError("star of the curve reaches the boundary")
            if g[0] not in inside:
                periph.append((t, f))
    periph = tuple(periph)
    if _surface_euler(T, periph) != 0 or not _surface_connected(T, periph):
        raise TriangulationError("star of the curve is not a solid torus")
    return SolidTorusNbhd(T, tets, periph, tuple(path))


@dataclass
class Complement:
    triangulation: Triangulation
    old_tet: tuple          # new tet -> old tet
    vertex_map: dict        # old vertex id -> new vertex id (for kept vertices)


def truncated_complement(T, R, with_maps=False):
    drop = set(R.tetrahedra)
    keep = [t for t in range(T.size) if t not in drop]
    new_id = {t: i for i, t in enumerate(keep)}
    gl, marks = [], {}
    for i, t in enumerate(keep):
        row = []
        for f, g in enumerate(T.gluings[t]):
            if g is None:
                row.append(None)
                marks[(i, f)] = T.marks.get((t, f)) or "outer"
            elif g[0] in drop:
                row.append(None)
                marks[(i, f)] = PERIPHERAL
            else:
                row.append((new_id[g[0]], g[1], g[2]))
        gl.append(row)
    prov = dict(T.provenance)
    prov["complement"] = 1
    C = Triangulation(gl, marks, provenance=prov)
    if not with_maps:
        return C
    vmap = {}
    for i, t in enumerate(keep):
        for v in range(4):
            old, new = T.vertex(t, v), C.vertex(i, v)
            if vmap.setdefault(old, new) != new:
                raise TriangulationError("vertex %d splits in the complement" % old)
    return Complement(C, tuple(keep), vmap)


# -- chains ---------------------------------------------------------------------

@dataclass
class BoundaryMatrix:
    """Sparse integer boundary maps.

    ``columns[j]`` maps edge ids to the coefficient of face ``j``'s boundary;
    ``edge_columns[e]`` maps vertex ids to the coefficients of ``d(e)``.
    """
    columns: list
    edge_columns: list
    num_edges: int
    num_faces: int

    def dense(self):
        M = [[0] * self.num_faces for _ in range(self.num_edges)]
        for j, col in enumerate(self.columns):
            for e, c in col.items():
                M[e][j] = c
        return M

    def boundary_of_boundary_is_zero(self):
        for col in self.columns:
            acc = {}
            for e, c in col.items():
                for v, d in self.edge_columns[e].items():
                    acc[v] = acc.get(v, 0) + c * d
            if any(acc.values()):
                return False
        return True


def boundary_matrix(T):
    ends = T.edge_endpoints()
    ecols = []
    for a, b in ends:
        col = {}
        col[b] = col.get(b, 0) + 1
        col[a] = col.get(a, 0) - 1
        ecols.append({k: v for k, v in col.items() if v})
    cols = [None] * T.num_faces
    for t in range(T.size):
        for f in range(4):
            k, s = T.face(t, f)
            if s != 1 or cols[k] is not None:
                continue
            i, j, l = [v for v in range(4) if v != f]
            col = {}
            for (u, v), c in (((j, l), 1), ((i, l), -1), ((i, j), 1)):
                e, es = T.edge(t, u, v)
                col[e] = col.get(e, 0) + c * es
            cols[k] = {e: c for e, c in col.items() if c}
    B = BoundaryMatrix(cols, ecols, T.num_edges, T.num_faces)
    base = T.provenance.get("base")
    if T.provenance.get("depth", 0) >= 2 and base:
        if B.num_edges > 3456 * base or B.num_faces > 2304 * base:
            raise TriangulationError("second-subdivision size bounds violated")
    return B


def cycle_vector(T, c):
    """Edge vector of a closed vertex path or of a list of (edge, sign)."""
    vec = [0] * T.num_edges
    ends = T.edge_endpoints()
    if isinstance(c, PLCurve) or (c and not isinstance(c[0], tuple)):
        path = c.path if isinstance(c, PLCurve) else tuple(c)
        lookup = {}
        for e, (a, b) in enumerate(ends):
            lookup.setdefault((a, b), []).append((e, 1))
            lookup.setdefault((b, a), []).append((e, -1))
        n = len(path)
        if n < 2:
            raise TriangulationError("curve too short")
        for i in range(n):
            hits = lookup.get((path[i], path[(i + 1) % n]), [])
            if len(hits) != 1:
                raise TriangulationError("no unique edge %d -> %d" % (path[i], path[(i + 1) % n]))
            e, s = hits[0]
            vec[e] += s
    else:
        for e, s in c:
            vec[e] += s
        acc = {}
        for e, s in c:
            a, b = ends[e]
            acc[a] = acc.get(a, 0) - s
            acc[b] = acc.get(b, 0) + s
        if any(acc.values()):
            raise TriangulationError("edge chain is not closed")
    return vec
