"""Bridge diagrams and double covers branched over points.

A bridge diagram presents a link in the plane as disjoint embedded
A-arcs crossed by disjoint embedded B-arcs; the double cover of the
sphere branched over the arc endpoints turns it into a curve diagram
with a deck involution.  This module builds that diagram region-first:
the cover's faces are assembled as sheet-labeled lifts of the base
faces, the arcs of the deleted (based) pair are erased from the face
structure, and the result is handed to heegaard.HeegaardDiagramC whose
validation independently reconstructs the rotation system.

Sheet bookkeeping.  The cuts are the A-arcs.  Each A-arc has two lifts,
strip 1 and strip 2, where strip s is the lift with sheet s on its
right (with respect to the arc's stored orientation).  A walk along a
B-arc switches sheets at every crossing; the lift of a crossing met on
sheet s from the right of the A-arc (positive crossing sign) is the
strip-s copy.  Arc endpoints lift to single branch points, which are
honest intersection points of the lifted curves and are fixed by the
deck involution.
"""

from __future__ import annotations

import json

from . import _cmap, heegaard

BRIDGE_SCHEMA = "floerx/bridge/1"


class BridgeDiagram:
    """Arcs as station sequences: [endpoint, crossing..., endpoint]."""

    def __init__(self, a_arcs, b_arcs, signs, based_pair):
        self.a_arcs = [list(a) for a in a_arcs]
        self.b_arcs = [list(b) for b in b_arcs]
        self.signs = dict(signs)
        self.based_pair = tuple(based_pair)
        self._problems = None

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "schema": BRIDGE_SCHEMA,
            "a_arcs": self.a_arcs,
            "b_arcs": self.b_arcs,
            "signs": dict(sorted(self.signs.items())),
            "based_pair": list(self.based_pair),
            "endpoints": self.endpoints(),
        }
        if not self.validate():
            out["faces"] = [[_bridge_token(d) for d in f]
                            for f in self._faces]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BridgeDiagram":
        if data.get("schema", BRIDGE_SCHEMA) != BRIDGE_SCHEMA:
            raise ValueError(f"unknown schema {data.get('schema')!r}")
        return cls(data["a_arcs"], data["b_arcs"], data["signs"],
                   data["based_pair"])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True,
                          separators=(",", ":"))

    @classmethod
    def loads(cls, s: str) -> "BridgeDiagram":
        return cls.from_json(json.loads(s))

    # -- structure ------------------------------------------------------------

    def endpoints(self) -> list[str]:
        return sorted({a[0] for a in self.a_arcs}
                      | {a[-1] for a in self.a_arcs})

    def crossings_on(self, kind: str, i: int) -> list[str]:
        arcs = self.a_arcs if kind == "A" else self.b_arcs
        return arcs[i][1:-1]

    def validate(self) -> list[str]:
        if self._problems is not None:
            return self._problems
        problems = self._analyze()
        self._problems = problems
        return problems

    def _require_valid(self):
        problems = self.validate()
        if problems:
            raise ValueError("invalid bridge diagram: " + "; ".join(problems))

    def _analyze(self) -> list[str]:
        if len(self.a_arcs) != len(self.b_arcs):
            return ["need equal numbers of A-arcs and B-arcs"]
        n = len(self.a_arcs)
        if n < 2:
            return ["need at least two bridges"]
        ai, bi = self.based_pair
        if not (0 <= ai < n and 0 <= bi < n):
            return ["based pair out of range"]

        ends: dict[str, dict] = {}
        on_arc = {"A": {}, "B": {}}
        for kind, arcs in (("A", self.a_arcs), ("B", self.b_arcs)):
            for i, arc in enumerate(arcs):
                if len(arc) < 2:
                    return [f"{kind}-arc {i} is too short"]
                for p in (arc[0], arc[-1]):
                    slot = ends.setdefault(p, {})
                    if kind in slot:
                        return [f"endpoint {p!r} meets two {kind}-arcs"]
                    slot[kind] = i
                for t, c in enumerate(arc[1:-1], start=1):
                    if c in on_arc[kind]:
                        return [f"crossing {c!r} repeated on {kind}-arcs"]
                    if c not in self.signs:
                        return [f"crossing {c!r} has no sign"]
                    on_arc[kind][c] = (i, t)
        for p, slot in ends.items():
            if set(slot) != {"A", "B"}:
                return [f"endpoint {p!r} does not meet one arc of each kind"]
        if len(ends) != 2 * n:
            return [f"expected {2 * n} endpoints, found {len(ends)}"]
        for c in self.signs:
            if c not in on_arc["A"] or c not in on_arc["B"]:
                return [f"signed point {c!r} is not a crossing of both kinds"]
            if c in ends:
                return [f"{c!r} is both an endpoint and a crossing"]
        shared = {self.a_arcs[ai][0], self.a_arcs[ai][-1]} & \
                 {self.b_arcs[bi][0], self.b_arcs[bi][-1]}
        if not shared:
            return ["based arcs share no endpoint"]
        self.ends = ends
        self.on_arc = on_arc
        self.based_point = sorted(shared)[0]

        # planarity: trace the faces of the arrangement on the sphere
        rotations = {}
        arcs = {"A": self.a_arcs, "B": self.b_arcs}
        for kind in ("A", "B"):
            for i, arc in enumerate(arcs[kind]):
                rotations.setdefault(arc[0], []).append((kind, i, 0, 1))
                rotations.setdefault(arc[-1], []).append(
                    (kind, i, len(arc) - 2, -1))
        for c, s in self.signs.items():
            i, t = self.on_arc["A"][c]
            j, u = self.on_arc["B"][c]
            a_fwd, a_bwd = ("A", i, t, 1), ("A", i, t - 1, -1)
            b_fwd, b_bwd = ("B", j, u, 1), ("B", j, u - 1, -1)
            rotations[c] = [a_fwd, b_fwd, a_bwd, b_bwd] if s > 0 else \
                [a_fwd, b_bwd, a_bwd, b_fwd]

        def opposite(d):
            kind, i, t, direction = d
            return (kind, i, t, -direction)

        nxt = _cmap.build_next(rotations, opposite)
        self._faces = _cmap.face_orbits(nxt)
        n_v = len(ends) + len(self.signs)
        n_e = sum(len(a) - 1 for a in self.a_arcs) + \
            sum(len(b) - 1 for b in self.b_arcs)
        chi = n_v - n_e + len(self._faces)
        if chi != 2:
            return [f"arrangement is not planar (Euler characteristic {chi})"]
        return []

    def components(self) -> int:
        """Number of link components, from the arc graph on endpoints."""
        self._require_valid()
        nbrs = {}
        for arcs in (self.a_arcs, self.b_arcs):
            for arc in arcs:
                nbrs.setdefault(arc[0], []).append(arc[-1])
                nbrs.setdefault(arc[-1], []).append(arc[0])
        seen = set()
        count = 0
        for p in nbrs:
            if p in seen:
                continue
            count += 1
            stack = [p]
            while stack:
                q = stack.pop()
                if q in seen:
                    continue
                seen.add(q)
                stack.extend(nbrs[q])
        return count


def _bridge_token(dart) -> str:
    kind, i, t, direction = dart
    s = f"{kind}{i}.{t}"
    return s if direction > 0 else "-" + s


# ---------------------------------------------------------------------------
# diagram surgeries on bridge diagrams


def wind(b: BridgeDiagram, turns: dict, sign: int = 1) -> BridgeDiagram:
    """Twist the two arcs at given endpoints around each other.

    turns maps endpoint -> N; each unit inserts one crossing between the
    incident A-arc and B-arc next to that endpoint, all with the given
    sign (a curl move repeated N times).
    """
    b._require_valid()
    a_arcs = [list(a) for a in b.a_arcs]
    b_arcs = [list(x) for x in b.b_arcs]
    signs = dict(b.signs)
    for p, n in sorted(turns.items()):
        if n == 0:
            continue
        if n < 0:
            raise ValueError("turn counts must be nonnegative")
        ai = b.ends[p]["A"]
        bi = b.ends[p]["B"]
        names = [f"{p}w{k}" for k in range(n)]
        for c in names:
            signs[c] = sign
        # names[0] is the crossing closest to p on both arcs
        if a_arcs[ai][0] == p:
            a_arcs[ai][1:1] = names
        else:
            a_arcs[ai][-1:-1] = list(reversed(names))
        if b_arcs[bi][0] == p:
            b_arcs[bi][1:1] = names
        else:
            b_arcs[bi][-1:-1] = list(reversed(names))
    return BridgeDiagram(a_arcs, b_arcs, signs, b.based_pair)


def mirror(b: BridgeDiagram) -> BridgeDiagram:
    """Exchange the roles of the two arc families (and all crossing signs)."""
    b._require_valid()
    ai, bi = b.based_pair
    return BridgeDiagram(b.b_arcs, b.a_arcs,
                         {c: -s for c, s in b.signs.items()}, (bi, ai))


def connected_sum(b1: BridgeDiagram, b2: BridgeDiagram) -> BridgeDiagram:
    """Join two bridge diagrams along their based endpoints.

    One non-based endpoint of each diagram is chosen, the two A-arcs
    there are merged into one arc, likewise the two B-arcs, and the
    junction endpoints disappear.  The based pair of b1 survives as the
    based pair of the sum.  All names from b2 get a prime suffix to
    stay distinct.
    """
    b1._require_valid()
    b2._require_valid()

    def free_endpoint(b):
        ai, bi = b.based_pair
        on_based = set(b.a_arcs[ai]) | set(b.b_arcs[bi])
        for p in b.endpoints():
            if p not in on_based:
                return p
        raise ValueError("every endpoint touches a based arc")

    def renamed(x):
        return x + "'"

    q1 = free_endpoint(b1)
    q2 = renamed(free_endpoint(b2))
    a2 = [[renamed(s) for s in arc] for arc in b2.a_arcs]
    bb2 = [[renamed(s) for s in arc] for arc in b2.b_arcs]
    s2 = {renamed(c): s for c, s in b2.signs.items()}
    ai1, bi1 = b1.based_pair
    aj1 = b1.ends[q1]["A"]
    bj1 = b1.ends[q1]["B"]
    aj2 = b2.ends[free_endpoint(b2)]["A"]
    bj2 = b2.ends[free_endpoint(b2)]["B"]

    flipped = []

    def splice(arc1, arc2, p, q):
        # reversing an arc flips the crossing convention along it
        if arc1[-1] == p:
            first = list(arc1)
        else:
            first = list(reversed(arc1))
            flipped.extend(arc1[1:-1])
        if arc2[0] == q:
            second = list(arc2)
        else:
            second = list(reversed(arc2))
            flipped.extend(arc2[1:-1])
        return first[:-1] + second[1:]

    a_arcs, new_ai = [], None
    for i, a in enumerate(b1.a_arcs):
        if i == aj1:
            continue
        if i == ai1:
            new_ai = len(a_arcs)
        a_arcs.append(a)
    a_arcs += [a for i, a in enumerate(a2) if i != aj2]
    a_arcs.append(splice(b1.a_arcs[aj1], a2[aj2], q1, q2))
    b_arcs, new_bi = [], None
    for i, x in enumerate(b1.b_arcs):
        if i == bj1:
            continue
        if i == bi1:
            new_bi = len(b_arcs)
        b_arcs.append(x)
    b_arcs += [x for i, x in enumerate(bb2) if i != bj2]
    b_arcs.append(splice(b1.b_arcs[bj1], bb2[bj2], q1, q2))
    signs = dict(b1.signs)
    signs.update(s2)
    for c in flipped:
        if c in signs:
            signs[c] = -signs[c]
    return BridgeDiagram(a_arcs, b_arcs, signs, (new_ai, new_bi))


# ---------------------------------------------------------------------------
# the branched double cover


def _lift_point(c: str, sheet: int) -> str:
    return f"{c}^{sheet}"


def branched_double_cover(b: BridgeDiagram) -> heegaard.HeegaardDiagramC:
    """The double cover branched over the arc endpoints, region-first.

    Curves are the lifts of the non-based arcs; the lifts of the based
    pair are erased from the traced face structure and the basepoint
    region is the one absorbing the branch point over the based
    endpoint.  The deck involution swaps the two lifts of every
    crossing and fixes every branch point.
    """
    b._require_valid()
    n = len(b.a_arcs)
    del_a, del_b = b.based_pair
    arcs = {"A": b.a_arcs, "B": b.b_arcs}

    # sheet labels of the crossings along each B-arc's first pass
    label = {}
    seg_sheet = {}  # ("B", j, seg) -> sheet of the first-pass lift
    for j, arc in enumerate(b.b_arcs):
        s = 1
        for t, c in enumerate(arc[1:-1], start=1):
            seg_sheet[("B", j, t - 1)] = s
            label[c] = s if b.signs[c] > 0 else 3 - s
            s = 3 - s
        seg_sheet[("B", j, len(arc) - 2)] = s

    # cover circles: [start branch point, first pass, end branch point,
    # reversed second pass]; crossing lift c^s is the strip-s copy
    def build_circle(kind, i):
        arc = arcs[kind][i]
        k = len(arc) - 2
        if kind == "A":
            first = [_lift_point(c, 1) for c in arc[1:-1]]
            second = [_lift_point(c, 2) for c in reversed(arc[1:-1])]
        else:
            first = [_lift_point(c, label[c]) for c in arc[1:-1]]
            second = [_lift_point(c, 3 - label[c])
                      for c in reversed(arc[1:-1])]
        pts = [arc[0]] + first + [arc[-1]] + second
        # base (segment, copy-or-strip) -> (cover arc, direction factor)
        segmap = {}
        for t in range(k + 1):
            if kind == "A":
                one, two = 1, 2
            else:
                one, two = seg_sheet[("B", i, t)], 3 - seg_sheet[("B", i, t)]
            segmap[(t, one)] = (t, 1)
            segmap[(t, two)] = (2 * k + 1 - t, -1)
        return pts, segmap

    circles = {"A": [], "B": []}
    segmaps = {"A": [], "B": []}
    for kind in ("A", "B"):
        for i in range(n):
            pts, segmap = build_circle(kind, i)
            circles[kind].append(pts)
            segmaps[kind].append(segmap)

    # the sheet adjacent to a base dart's left side, for a face on sheet c:
    # B-segments lie on a single sheet; A-segments are cuts whose strip-s
    # lift has sheet s on the A-arc's right
    def lift_dart(dart, c):
        kind, i, t, direction = dart
        if kind == "B":
            new_t, flip = segmaps["B"][i][(t, c)]
        else:
            strip = (3 - c) if direction > 0 else c
            new_t, flip = segmaps["A"][i][(t, strip)]
        return (kind.lower(), i, new_t, direction * flip)

    face_of = {}
    lifted = []
    for fi, face in enumerate(b._faces):
        for c in (1, 2):
            word = [lift_dart(d, c) for d in face]
            lifted.append(word)
            for d in word:
                if d in face_of:
                    raise ValueError("cover face assembly is inconsistent")
                face_of[d] = len(lifted) - 1
    if len(face_of) != 2 * sum(
            2 * (len(a) - 1) for a in b.a_arcs + b.b_arcs):
        raise ValueError("cover face assembly missed some darts")

    # erase the lifts of the based pair from the face structure
    deleted = {("a", del_a), ("b", del_b)}

    def is_deleted(dart):
        return (dart[0], dart[1]) in deleted

    nxt = {}
    for word in lifted:
        for k, d in enumerate(word):
            nxt[d] = word[(k + 1) % len(word)]

    def opp(d):
        return (d[0], d[1], d[2], -d[3])

    parent = list(range(len(lifted)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in nxt:
        if is_deleted(d):
            a, bb = find(face_of[d]), find(face_of[opp(d)])
            if a != bb:
                parent[a] = bb

    def dart_start(d):
        kind, i, t, direction = d
        pts = circles[d[0].upper()][i]
        return pts[t] if direction > 0 else pts[(t + 1) % len(pts)]

    # surviving circles, with points on deleted circles smoothed away
    def point_survives(p):
        if p in b.ends:
            return b.ends[p]["A"] != del_a and b.ends[p]["B"] != del_b
        c = p.split("^")[0]
        return b.on_arc["A"][c][0] != del_a and b.on_arc["B"][c][0] != del_b

    new_alpha, new_beta, alpha_idx, beta_idx = [], [], {}, {}
    for kind, out, idx in (("A", new_alpha, alpha_idx),
                           ("B", new_beta, beta_idx)):
        for i in range(n):
            if (kind.lower(), i) in deleted:
                continue
            pts = [p for p in circles[kind][i] if point_survives(p)]
            if not pts:
                raise ValueError(
                    f"lift of {kind}-arc {i} has no surviving points; "
                    "wind the diagram first")
            idx[i] = len(out)
            out.append(pts)

    pos = {}
    for out, kind in ((new_alpha, "a"), (new_beta, "b")):
        for i, pts in enumerate(out):
            for t, p in enumerate(pts):
                pos[(kind, p)] = (i, t)

    def new_token(d):
        kind, i, t, direction = d
        ni = (alpha_idx if kind == "a" else beta_idx)[i]
        start = dart_start(d)
        ci, ct = pos[(kind, start)]
        nt = ct if direction > 0 else (ct - 1) % len(
            (new_alpha if kind == "a" else new_beta)[ci])
        return (dart_start(d), _cmap.arc_token(kind, ni, nt, direction))

    # walk the merged boundary: skip over erased darts, and emit a token
    # only when the dart starts at a surviving point (runs through
    # smoothed points collapse into a single longer arc)
    def succ(d):
        e = nxt[d]
        while is_deleted(e):
            e = nxt[opp(e)]
        return e

    groups = {}
    seen = set()
    for d0 in nxt:
        if d0 in seen or is_deleted(d0):
            continue
        circuit = []
        d = d0
        while d not in seen:
            seen.add(d)
            circuit.append(d)
            d = succ(d)
        starts = [k for k, dd in enumerate(circuit)
                  if point_survives(dart_start(dd))]
        if not starts:
            raise ValueError("boundary circuit lost all of its corners")
        word = [new_token(circuit[k]) for k in starts]
        groups.setdefault(find(face_of[d0]), []).append(word)

    # the basepoint region absorbed the branch point over the based
    # endpoint; find it through any base face at that endpoint
    p0 = b.based_point
    zdart = None
    for fi, face in enumerate(b._faces):
        for d in face:
            kind, i, t, direction = d
            arc = arcs[kind][i]
            station = arc[t] if direction > 0 else arc[t + 1]
            if station == p0:
                zdart = lift_dart(d, 1)
                break
        if zdart is not None:
            break
    z_group = find(face_of[zdart])

    regions = []
    for g in sorted(groups):
        mark = (g == z_group)
        regions.append(heegaard.Region(boundaries=groups[g],
                                       z=mark, w=mark))

    points = sorted(p for pts in new_alpha for p in pts)
    d = heegaard.HeegaardDiagramC(points=points, alpha=new_alpha,
                                  beta=new_beta, regions=regions)
    problems = d.validate()
    if problems:
        raise ValueError("cover construction failed: " + "; ".join(problems))
    if d.genus != n - 1:
        raise ValueError(f"cover has genus {d.genus}, expected {n - 1}")

    pmap = {}
    for p in points:
        if p in b.ends:
            pmap[p] = p
        else:
            c, s = p.split("^")
            pmap[p] = _lift_point(c, 3 - int(s))
    return heegaard.attach_involution(d, pmap)


def _pattern_faces(alpha, beta, signs, a_base, b_base):
    """Trace a pattern arrangement and re-index its circles."""
    faces = _cmap.trace_faces(alpha, beta, signs)
    words = []
    for f in faces:
        word = []
        for corner, (kind, i, t, direction) in f:
            j = (a_base if kind == "a" else b_base) + i
            word.append((corner, _cmap.arc_token(kind, j, t, direction)))
        words.append(word)
    return words


def stabilize_basepoints(d: heegaard.HeegaardDiagramC,
                         z_region=None) -> heegaard.HeegaardDiagramC:
    """Trade a z basepoint for a z-w-z triple behind a new curve pair.

    Splices a two-point alpha/beta pattern on a sphere into the chosen
    z region: the pattern's outer face joins that region (which loses
    its z flag) and the three inner bigons carry z, w, z.  When the
    diagram has an involution the doubled pattern is used instead (two
    new curves of each family on a small torus, four new points forming
    two swapped pairs) so the involution extends.
    """
    d._require_valid()
    if z_region is None:
        zs = d.z_regions
        if len(zs) != 1:
            raise ValueError("several z regions; pass z_region explicitly")
        z_region = zs[0]
    if not d.regions[z_region].z:
        raise ValueError(f"region {z_region} carries no z basepoint")
    na, nb = len(d.alpha), len(d.beta)
    tag = 0
    taken = set(d.points)
    while taken & {f"x{tag}.0", f"x{tag}.00"}:
        tag += 1

    if d.involution is None:
        x0, y0 = f"x{tag}.0", f"y{tag}.0"
        alpha0, beta0 = [[x0, y0]], [[x0, y0]]
        signs = {x0: 1, y0: -1}
        words = _pattern_faces(alpha0, beta0, signs, na, nb)
        if len(words) != 4 or any(len(w) != 2 for w in words):
            raise RuntimeError("unexpected pattern arrangement")
        arcs = [frozenset(_cmap.parse_arc_token(t)[:3] for _, t in w)
                for w in words]
        lens = 0
        outer = next(i for i in range(1, 4) if not (arcs[i] & arcs[lens]))
        lunes = [i for i in range(4) if i not in (lens, outer)]
        new_alpha = d.alpha + alpha0
        new_beta = d.beta + beta0
        new_points = sorted(d.points + [x0, y0])
        regions = []
        for ri, reg in enumerate(d.regions):
            bounds = [list(wd) for wd in reg.boundaries]
            zf = reg.z
            if ri == z_region:
                bounds.append(words[outer])
                zf = False
            regions.append(heegaard.Region(boundaries=bounds, z=zf, w=reg.w))
        regions.append(heegaard.Region(boundaries=[words[lens]], w=True))
        for i in lunes:
            regions.append(heegaard.Region(boundaries=[words[i]], z=True))
        out = heegaard.HeegaardDiagramC(points=new_points, alpha=new_alpha,
                                        beta=new_beta, regions=regions)
        out._require_valid()
        return out

    # doubled pattern, compatible with the involution
    pmap_old = d.involution["points"]
    if d.involution["regions"][z_region] != z_region:
        raise ValueError("stabilization region must be involution-invariant")
    pt = {(i, j): f"x{tag}.{i}{j}" for i in (0, 1) for j in (0, 1)}
    alpha0 = [[pt[(0, 0)], pt[(0, 1)]], [pt[(1, 0)], pt[(1, 1)]]]
    beta0 = [[pt[(0, 0)], pt[(1, 0)]], [pt[(0, 1)], pt[(1, 1)]]]
    signs = {p: 1 for p in pt.values()}
    words = _pattern_faces(alpha0, beta0, signs, na, nb)
    if len(words) != 4 or any(len(w) != 4 for w in words):
        raise RuntimeError("unexpected doubled pattern arrangement")

    def face_with(tok):
        for w in words:
            if any(t == tok for _, t in w):
                return w
        raise RuntimeError("pattern face lookup failed")

    # the face northeast of pt(i,j) starts with the forward alpha arc j
    # on alpha circle i of the pattern
    p_face = face_with(_cmap.arc_token("a", na, 0, 1))
    z_faces = [face_with(_cmap.arc_token("a", na, 1, 1)),
               face_with(_cmap.arc_token("a", na + 1, 0, 1))]
    w_face = face_with(_cmap.arc_token("a", na + 1, 1, 1))
    new_alpha = d.alpha + alpha0
    new_beta = d.beta + beta0
    new_points = sorted(d.points + list(pt.values()))
    regions = []
    for ri, reg in enumerate(d.regions):
        bounds = [list(wd) for wd in reg.boundaries]
        zf = reg.z
        if ri == z_region:
            bounds.append(p_face)
            zf = False
        regions.append(heegaard.Region(boundaries=bounds, z=zf, w=reg.w))
    regions.append(heegaard.Region(boundaries=[w_face], w=True))
    for w in z_faces:
        regions.append(heegaard.Region(boundaries=[w], z=True))
    out = heegaard.HeegaardDiagramC(points=new_points, alpha=new_alpha,
                                    beta=new_beta, regions=regions)
    out._require_valid()
    pmap = dict(pmap_old)
    pmap[pt[(0, 0)]] = pt[(1, 1)]
    pmap[pt[(1, 1)]] = pt[(0, 0)]
    pmap[pt[(0, 1)]] = pt[(1, 0)]
    pmap[pt[(1, 0)]] = pt[(0, 1)]
    return heegaard.attach_involution(out, pmap)


def axis_double_cover(d: heegaard.HeegaardDiagramC,
                      cut: list[str]) -> heegaard.HeegaardDiagramC:
    """Double cover branched over one z point and one w point.

    cut lists the arcs a path from the z region to the w region crosses,
    in order, each at most once; curves swap sheets across it.  Every
    curve must cross the cut an even number of times, so that it lifts
    to two circles.  Basepoint regions away from the branch pair lift
    to two flagged copies; the branch regions lift to one each.
    """
    d._require_valid()
    cut_darts = [_cmap.parse_arc_token(t) for t in cut]
    if any(dt[3] < 0 for dt in cut_darts):
        raise ValueError("cut arcs must be unsigned tokens")
    cut_arcs = [dt[:3] for dt in cut_darts]
    if len(set(cut_arcs)) != len(cut_arcs):
        raise ValueError("cut crosses some arc twice")

    # walk the region path and check it runs z to w
    sides = {}
    for ri, reg in enumerate(d.regions):
        for word in reg.boundaries:
            for _, tok in word:
                kind, i, t, _ = _cmap.parse_arc_token(tok)
                sides.setdefault((kind, i, t), []).append(ri)
    here = None
    for ri in d.z_regions:
        if ri in sides[cut_arcs[0]]:
            here = ri
            break
    if here is None:
        raise ValueError("cut does not start at a z region")
    for a in cut_arcs:
        pair = sides[a]
        if here not in pair:
            raise ValueError("cut arcs are not a connected path")
        here = pair[0] if pair[1] == here else pair[1]
    if not d.regions[here].w:
        raise ValueError("cut does not end at a w region")

    circles = {"a": d.alpha, "b": d.beta}
    crossed = {}
    for kind, i, t in cut_arcs:
        crossed.setdefault((kind, i), set()).add(t)

    def flips_before(kind, i, t):
        return sum(1 for u in crossed.get((kind, i), ()) if u < t)

    for key, ts in crossed.items():
        if len(ts) % 2:
            raise ValueError(
                f"circle {key[0]}{key[1]} crosses the cut oddly and "
                "does not lift to two closed curves")

    # each point has two lifts and each circle two; label the lift of
    # circle copy 0 by the parity of cut crossings walked past, copy 1
    # complementary (the choice of which lift is "copy 0" is immaterial)
    def sheet(kind, i, t):
        return 1 + (flips_before(kind, i, t) % 2)

    new_circles = {"a": [], "b": []}
    for kind in ("a", "b"):
        for i, circle in enumerate(circles[kind]):
            for flip in (0, 1):
                pts = [f"{p}^{1 + ((sheet(kind, i, t) - 1) ^ flip)}"
                       for t, p in enumerate(circle)]
                new_circles[kind].append(pts)
    new_signs = {}
    for p in d.points:
        for s in (1, 2):
            new_signs[f"{p}^{s}"] = d.signs[p]
    faces = _cmap.trace_faces(new_circles["a"], new_circles["b"], new_signs)
    words = [[(c, _cmap.arc_token(*dt)) for c, dt in f] for f in faces]
    face_of_tok = {}
    for fi, w in enumerate(words):
        for _, tok in w:
            face_of_tok[tok] = fi

    # a lifted dart of a base dart: arcs keep their index on both lifts
    def lift_token(kind, i, t, direction, s):
        # the two lifts of circle i sit at positions 2i and 2i+1
        j = 2 * i if sheet(kind, i, t) == s else 2 * i + 1
        return _cmap.arc_token(kind, j, t, direction)

    flags = {}
    for ri, reg in enumerate(d.regions):
        if not (reg.z or reg.w):
            continue
        corner, tok = reg.boundaries[0][0]
        kind, i, t, direction = _cmap.parse_arc_token(tok)
        lifted = {face_of_tok[lift_token(kind, i, t, direction, s)]
                  for s in (1, 2)}
        for fi in lifted:
            z0, w0 = flags.get(fi, (False, False))
            flags[fi] = (z0 or reg.z, w0 or reg.w)
    regions = []
    for fi, w in enumerate(words):
        z0, w0 = flags.get(fi, (False, False))
        regions.append(heegaard.Region(boundaries=[w], z=z0, w=w0))
    points = sorted(new_signs)
    out = heegaard.HeegaardDiagramC(points=points, alpha=new_circles["a"],
                                    beta=new_circles["b"], regions=regions)
    problems = out.validate()
    if problems:
        raise ValueError("cover construction failed: " + "; ".join(problems))
    pmap = {}
    for p in d.points:
        pmap[f"{p}^1"] = f"{p}^2"
        pmap[f"{p}^2"] = f"{p}^1"
    return heegaard.attach_involution(out, pmap)


def fixed_generators(d: heegaard.HeegaardDiagramC) -> list[tuple]:
    """Generators fixed pointwise by the involution."""
    d._require_valid()
    if d.involution is None:
        raise ValueError("diagram has no involution")
    pmap = d.involution["points"]
    out = []
    for grp in d.enumerate_generators():
        for x in grp:
            if all(pmap[p] == p for p in x):
                out.append(x)
    return out
