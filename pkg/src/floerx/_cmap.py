"""Rotation systems, face tracing, and exact linear algebra helpers.

Private module backing the diagram machinery: curves on closed oriented
surfaces are stored as cyclic point sequences plus a local crossing sign
at each intersection, faces are traced from the induced rotation system,
and domain equations are solved exactly over Q and Z.

Conventions.  At an intersection point the four outgoing darts are the
forward/backward directions along the two curves through it.  A crossing
sign of +1 means the counterclockwise order of outgoing darts is
(alpha-forward, beta-forward, alpha-backward, beta-backward); -1 swaps
the two beta darts.  Faces are traced counterclockwise (face on the
left), so the emitted boundary words are consistently oriented and can
be fed directly into boundary-of-boundary computations.
"""

from fractions import Fraction


# ---------------------------------------------------------------------------
# generic face tracing


def face_orbits(next_dart: dict) -> list[list]:
    """Split darts into orbits of the next-dart-around-face permutation."""
    seen = set()
    faces = []
    for d0 in next_dart:
        if d0 in seen:
            continue
        face = []
        d = d0
        while d not in seen:
            seen.add(d)
            face.append(d)
            d = next_dart[d]
        faces.append(face)
    return faces


def build_next(rotations: dict, opposite) -> dict:
    """next(d) = predecessor of opposite(d) in the CCW rotation at its vertex.

    rotations: vertex -> CCW list of outgoing darts.  Tracing with this
    map walks each face counterclockwise with the face on the left.
    """
    prev = {}
    for order in rotations.values():
        k = len(order)
        for i, d in enumerate(order):
            prev[d] = order[(i - 1) % k]
    return {d: prev[opposite(d)] for d in prev}


# darts for two-family curve diagrams: (kind, circle, arc, dir) where the
# arc t of circle i runs from its point t to point t+1 (cyclically)


def arc_token(kind: str, i: int, t: int, direction: int) -> str:
    s = f"{kind}{i}.{t}"
    return s if direction > 0 else "-" + s


def parse_arc_token(tok: str) -> tuple[str, int, int, int]:
    direction = 1
    if tok.startswith("-"):
        direction = -1
        tok = tok[1:]
    kind = tok[0]
    i, t = tok[1:].split(".")
    return kind, int(i), int(t), direction


def trace_faces(alpha: list[list], beta: list[list], signs: dict) -> list[list]:
    """Trace the faces of a two-family curve diagram.

    alpha, beta: cyclic point sequences per circle.  signs: point -> +-1
    crossing sign.  Returns faces as lists of (corner point, dart) with
    dart = (kind, circle, arc, dir), walked counterclockwise.
    """
    position = {}
    for kind, circles in (("a", alpha), ("b", beta)):
        for i, pts in enumerate(circles):
            for t, p in enumerate(pts):
                key = (kind, p)
                if key in position:
                    raise ValueError(f"point {p!r} appears twice on {kind}-circles")
                position[key] = (i, t)
    rotations = {}
    for p in signs:
        ai, at = position[("a", p)]
        bi, bt = position[("b", p)]
        la = len(alpha[ai])
        lb = len(beta[bi])
        a_fwd = ("a", ai, at, 1)
        a_bwd = ("a", ai, (at - 1) % la, -1)
        b_fwd = ("b", bi, bt, 1)
        b_bwd = ("b", bi, (bt - 1) % lb, -1)
        if signs[p] > 0:
            rotations[p] = [a_fwd, b_fwd, a_bwd, b_bwd]
        else:
            rotations[p] = [a_fwd, b_bwd, a_bwd, b_fwd]

    def opposite(d):
        kind, i, t, direction = d
        return (kind, i, t, -direction)

    nxt = build_next(rotations, opposite)
    circles = {"a": alpha, "b": beta}
    faces = []
    for orbit in face_orbits(nxt):
        word = []
        for d in orbit:
            kind, i, t, direction = d
            pts = circles[kind][i]
            corner = pts[t] if direction > 0 else pts[(t + 1) % len(pts)]
            word.append((corner, d))
        faces.append(word)
    return faces


def genus_from_counts(n_points: int, n_arcs: int, faces_chi: int) -> int:
    chi = n_points - n_arcs + faces_chi
    if chi % 2 != 0 or chi > 2:
        raise ValueError(f"inconsistent Euler characteristic {chi}")
    return (2 - chi) // 2


# ---------------------------------------------------------------------------
# exact rational linear algebra (dense, Fraction entries)


class QSolver:
    """RREF-preprocessed solver for repeated A x = b with sparse b."""

    def __init__(self, rows: list[list[Fraction]], ncols: int):
        self.ncols = ncols
        m = len(rows)
        work = [list(map(Fraction, r)) for r in rows]
        # track E with E*A = R by applying the same ops to an identity
        ident = [[Fraction(i == j) for j in range(m)] for i in range(m)]
        pivots = []
        r = 0
        for c in range(ncols):
            pr = next((i for i in range(r, m) if work[i][c] != 0), None)
            if pr is None:
                continue
            work[r], work[pr] = work[pr], work[r]
            ident[r], ident[pr] = ident[pr], ident[r]
            inv = 1 / work[r][c]
            work[r] = [x * inv for x in work[r]]
            ident[r] = [x * inv for x in ident[r]]
            for i in range(m):
                if i != r and work[i][c] != 0:
                    f = work[i][c]
                    work[i] = [x - f * y for x, y in zip(work[i], work[r])]
                    ident[i] = [x - f * y for x, y in zip(ident[i], ident[r])]
            pivots.append(c)
            r += 1
        self.rank = r
        self.rref = work
        self.e_cols = [[ident[i][j] for i in range(m)] for j in range(m)]
        self.pivots = pivots

    def solve_sparse(self, b: dict[int, Fraction]) -> list[Fraction] | None:
        m = len(self.rref)
        eb = [Fraction(0)] * m
        for j, v in b.items():
            if v == 0:
                continue
            col = self.e_cols[j]
            for i in range(m):
                if col[i]:
                    eb[i] += v * col[i]
        for i in range(self.rank, m):
            if eb[i] != 0:
                return None
        x = [Fraction(0)] * self.ncols
        for i, c in enumerate(self.pivots):
            x[c] = eb[i]
        return x

    def nullspace(self) -> list[list[Fraction]]:
        pivset = set(self.pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivset:
                continue
            v = [Fraction(0)] * self.ncols
            v[free] = Fraction(1)
            for i, c in enumerate(self.pivots):
                v[c] = -self.rref[i][free]
            basis.append(v)
        return basis


# ---------------------------------------------------------------------------
# integer lattice solving (column Hermite form, transform tracked)


def _column_hermite(a: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Return (H, U) with H = A*U, U unimodular, H in column echelon form."""
    m = len(a)
    n = len(a[0]) if m else 0
    h = [row[:] for row in a]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_axpy(dst, src, q):
        for i in range(m):
            h[i][dst] += q * h[i][src]
        for i in range(n):
            u[i][dst] += q * u[i][src]

    def col_swap(c1, c2):
        for row in h:
            row[c1], row[c2] = row[c2], row[c1]
        for row in u:
            row[c1], row[c2] = row[c2], row[c1]

    c = 0
    for r in range(m):
        if c >= n:
            break
        while True:
            nz = [j for j in range(c, n) if h[r][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(h[r][j]))
            col_swap(c, j0)
            done = True
            for j in range(c + 1, n):
                if h[r][j] != 0:
                    col_axpy(j, c, -(h[r][j] // h[r][c]))
                    if h[r][j] != 0:
                        done = False
            if done:
                break
        if c < n and h[r][c] != 0:
            if h[r][c] < 0:
                col_axpy(c, c, -2)
            c += 1
    return h, u


class ZSolver:
    """Integer solvability and kernel lattice for a fixed matrix."""

    def __init__(self, a: list[list[int]]):
        self.m = len(a)
        self.n = len(a[0]) if a else 0
        self.h, self.u = _column_hermite(a)
        # pivot row of each leading column
        self.lead = []
        for j in range(self.n):
            rows = [i for i in range(self.m) if self.h[i][j] != 0]
            self.lead.append(min(rows) if rows else None)
        self.ncols_used = sum(1 for x in self.lead if x is not None)

    def solve(self, b: list[int]) -> list[int] | None:
        resid = list(b)
        y = [0] * self.n
        for j in range(self.n):
            r = self.lead[j]
            if r is None:
                break
            if resid[r] % self.h[r][j] != 0:
                return None
            q = resid[r] // self.h[r][j]
            y[j] = q
            if q:
                for i in range(self.m):
                    resid[i] -= q * self.h[i][j]
        if any(resid):
            return None
        return [sum(self.u[i][j] * y[j] for j in range(self.n)) for i in range(self.n)]

    def kernel(self) -> list[list[int]]:
        return [
            [self.u[i][j] for i in range(self.n)]
            for j in range(self.n)
            if self.lead[j] is None
        ]


def cone_positive_element(vectors: list[list[int]]) -> bool:
    """Whether some nonzero integer combination of the vectors is >= 0.

    Used for admissibility: a diagram fails if its periodic-domain
    lattice contains a nonzero nonnegative element.  Exact for lattices
    of rank <= 2; larger ranks are not needed by the shipped fixtures.
    """
    vecs = [v for v in vectors if any(v)]
    if not vecs:
        return False
    if len(vecs) == 1:
        v = vecs[0]
        return all(x >= 0 for x in v) or all(x <= 0 for x in v)
    if len(vecs) == 2:
        # feasibility of s*v + t*w >= 0, (s,t) != 0: intersect the
        # half-planes {(s,t): s*v_i + t*w_i >= 0} exactly via angular sweep
        v, w = vecs
        n = len(v)
        # each constraint is a half-plane through the origin; collect normals
        normals = [(v[i], w[i]) for i in range(n) if (v[i], w[i]) != (0, 0)]
        if not normals:
            return False
        # a common point exists iff some direction satisfies all constraints;
        # candidate extreme directions are the constraint boundaries
        cands = []
        for (a, b) in normals:
            cands.append((b, -a))
            cands.append((-b, a))
            cands.append((a, b))
        for (s, t) in cands:
            if (s, t) == (0, 0):
                continue
            if all(s * v[i] + t * w[i] >= 0 for i in range(n)) and any(
                s * v[i] + t * w[i] != 0 for i in range(n)
            ):
                return True
        return False
    raise NotImplementedError(
        f"positivity check for periodic-domain lattices of rank {len(vecs)}"
    )
