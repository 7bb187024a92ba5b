"""Graded and filtered chain complexes over GF(2) and GF(2)[U].

A complex stores its generators as (name, class-label, relative degree)
triples and its differential as a square matrix whose columns are
sources.  Degrees are relative: within a class-label they are only
meaningful up to a common shift.  The differential drops degree by one
and never crosses class-labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .gf2core import (
    MatGF2,
    MatPolyGF2,
    kernel_basis,
    pdivmod,
    pmul,
    smith_normal_form_poly,
    solve,
    span_reduce,
    vector_in_span,
)


@dataclass(frozen=True)
class Generator:
    name: str
    cls: str
    degree: int


class GradedComplexGF2:
    """Finite chain complex over GF(2), relatively Z-graded per class."""

    def __init__(self, generators: list[Generator], boundary: MatGF2):
        n = len(generators)
        if boundary.nrows != n or boundary.ncols != n:
            raise ValueError("boundary must be square on the generators")
        self.generators = list(generators)
        self.boundary = boundary

    @property
    def n(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def classes(self) -> list[str]:
        out = []
        for g in self.generators:
            if g.cls not in out:
                out.append(g.cls)
        return out

    def degree_indices(self, cls: str, degree: int) -> list[int]:
        return [i for i, g in enumerate(self.generators)
                if g.cls == cls and g.degree == degree]

    def differential(self, v: int) -> int:
        return self.boundary.mul_vec(v)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": "floerx/1",
            "generators": [
                {"name": g.name, "class": g.cls, "degree": g.degree}
                for g in self.generators
            ],
            "boundary": [[self.generators[j].name, self.generators[i].name]
                         for i, j in self.boundary.entries()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedComplexGF2":
        if data.get("schema") != "floerx/1":
            raise ValueError("unrecognized schema")
        gens = [Generator(d["name"], d["class"], d["degree"])
                for d in data["generators"]]
        idx = {g.name: i for i, g in enumerate(gens)}
        if len(idx) != len(gens):
            raise ValueError("duplicate generator names")
        entries = [(idx[dst], idx[src]) for src, dst in data["boundary"]]
        return cls(gens, MatGF2.from_entries(len(gens), len(gens), entries))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def loads(cls, s: str) -> "GradedComplexGF2":
        return cls.from_json(json.loads(s))


def verify(c: GradedComplexGF2, homogeneous: bool = True) -> list[str]:
    """Check the complex invariants; returns a list of violations.

    With homogeneous=False the degree-drop check is skipped; this admits
    page-style complexes whose differential preserves the stored degree
    (the X complex of degree-preserving stabilization factors).
    """
    problems = []
    for i, j in c.boundary.entries():
        src, dst = c.generators[j], c.generators[i]
        if src.cls != dst.cls:
            problems.append(
                f"boundary crosses classes: {src.name} ({src.cls}) -> "
                f"{dst.name} ({dst.cls})")
        elif homogeneous and dst.degree != src.degree - 1:
            problems.append(
                f"boundary degree step is not -1: {src.name} (deg "
                f"{src.degree}) -> {dst.name} (deg {dst.degree})")
    sq = c.boundary * c.boundary
    for i, j in sq.entries():
        problems.append(
            f"d^2 != 0: {c.generators[j].name} -> {c.generators[i].name}")
    return problems


@dataclass
class HomologySummary:
    """Homology dimensions and chosen cycle representatives."""

    dims: dict  # (class, degree) -> int
    representatives: dict  # (class, degree) -> list of cycle vectors (int)
    boundary_bases: dict  # (class, degree) -> echelon basis of boundaries

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def class_dims(self, cls: str) -> dict:
        return {d: v for (c, d), v in self.dims.items() if c == cls}


def _restricted_matrix(c: GradedComplexGF2, cols: list[int]) -> MatGF2:
    rows = []
    for j in cols:
        col = 0
        for i in range(c.n):
            if c.boundary.get(i, j):
                col |= 1 << i
        rows.append(col)
    # rows of the transpose = images of the selected generators
    return MatGF2(len(cols), c.n, rows).transpose()


def homology(c: GradedComplexGF2) -> HomologySummary:
    dims = {}
    reps = {}
    bdy = {}
    for cls in c.classes():
        cls_idx = [i for i, g in enumerate(c.generators) if g.cls == cls]
        img_cols = [c.differential(1 << i) for i in cls_idx]
        img_cols = [v for v in img_cols if v]
        degrees = sorted({g.degree for g in c.generators if g.cls == cls})
        for d in degrees:
            idx = c.degree_indices(cls, d)
            m = _restricted_matrix(c, idx)  # c.n x len(idx)
            ker = kernel_basis(m)  # vectors over local index positions
            cycles = []
            for v in ker:
                w = 0
                for k, i in enumerate(idx):
                    if (v >> k) & 1:
                        w |= 1 << i
                cycles.append(w)
            # boundaries supported in this bucket: intersect the image of
            # d with the coordinate subspace of the bucket (this also
            # covers degree-preserving differentials on flat gradings)
            mask = 0
            for i in idx:
                mask |= 1 << i
            comp_rows = []
            for i in range(c.n):
                if not (mask >> i) & 1:
                    row = 0
                    for k, col in enumerate(img_cols):
                        if (col >> i) & 1:
                            row |= 1 << k
                    comp_rows.append(row)
            coeffs = kernel_basis(MatGF2(len(comp_rows), len(img_cols),
                                         comp_rows))
            boundaries = []
            for x in coeffs:
                v = 0
                for k, col in enumerate(img_cols):
                    if (x >> k) & 1:
                        v ^= col
                if v:
                    boundaries.append(v)
            boundaries = span_reduce(boundaries)
            chosen = []
            # incremental reduction against rows keyed by lowest set bit
            pivots = {(row & -row).bit_length() - 1: row
                      for row in boundaries}
            for v in cycles:
                w = v
                while w:
                    p = (w & -w).bit_length() - 1
                    if p not in pivots:
                        break
                    w ^= pivots[p]
                if w:
                    chosen.append(v)
                    pivots[(w & -w).bit_length() - 1] = w
            dims[(cls, d)] = len(chosen)
            reps[(cls, d)] = chosen
            bdy[(cls, d)] = boundaries
    return HomologySummary(dims, reps, bdy)


# ---------------------------------------------------------------------------
# Chain maps


@dataclass
class ChainMap:
    source: GradedComplexGF2
    target: GradedComplexGF2
    matrix: MatGF2  # columns indexed by source generators

    def __post_init__(self):
        if (self.matrix.nrows, self.matrix.ncols) != (self.target.n, self.source.n):
            raise ValueError("chain map shape mismatch")

    def apply(self, v: int) -> int:
        return self.matrix.mul_vec(v)

    def is_chain_map(self) -> bool:
        return (self.target.boundary * self.matrix
                == self.matrix * self.source.boundary)

    @classmethod
    def identity(cls, c: GradedComplexGF2) -> "ChainMap":
        return cls(c, c, MatGF2.identity(c.n))

    @classmethod
    def zero(cls, src: GradedComplexGF2, tgt: GradedComplexGF2) -> "ChainMap":
        return cls(src, tgt, MatGF2.zero(tgt.n, src.n))

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, self.matrix + other.matrix)

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self after first."""
        return ChainMap(first.source, self.target, self.matrix * first.matrix)


def cone(f: ChainMap) -> GradedComplexGF2:
    """Mapping cone; the source copy is shifted up by one degree."""
    if not f.is_chain_map():
        raise ValueError("cone requires a chain map")
    A, B = f.source, f.target
    gens = [Generator(g.name + "'", g.cls, g.degree + 1) for g in A.generators]
    gens += list(B.generators)
    n = A.n + B.n
    rows = [0] * n
    for i, j in A.boundary.entries():
        rows[i] |= 1 << j
    for i, j in f.matrix.entries():
        rows[A.n + i] |= 1 << j
    for i, j in B.boundary.entries():
        rows[A.n + i] |= 1 << (A.n + j)
    return GradedComplexGF2(gens, MatGF2(n, n, rows))


def tensor(c1: GradedComplexGF2, c2: GradedComplexGF2) -> GradedComplexGF2:
    """Tensor product complex with the Leibniz differential (char 2)."""
    gens = []
    for g in c1.generators:
        for h in c2.generators:
            gens.append(Generator(f"{g.name}*{h.name}", f"{g.cls}|{h.cls}",
                                  g.degree + h.degree))
    n1, n2 = c1.n, c2.n
    n = n1 * n2
    rows = [0] * n
    for i, j in c1.boundary.entries():
        for k in range(n2):
            rows[i * n2 + k] |= 1 << (j * n2 + k)
    for i, j in c2.boundary.entries():
        for k in range(n1):
            rows[k * n2 + i] |= 1 << (k * n2 + j)
    return GradedComplexGF2(gens, MatGF2(n, n, rows))


def dual(c: GradedComplexGF2) -> GradedComplexGF2:
    """Linear dual, regraded so the dual differential again drops by one."""
    gens = [Generator(g.name + "^", g.cls, -g.degree) for g in c.generators]
    return GradedComplexGF2(gens, c.boundary.transpose())


def induced_map_on_homology(f: ChainMap):
    """Matrix of H(f) in the representative bases of homology().

    Returns (matrix, source_summary, target_summary); rows and columns run
    over representatives in (class, degree) order of each summary.
    """
    if not f.is_chain_map():
        raise ValueError("requires a chain map")
    hs = homology(f.source)
    ht = homology(f.target)
    tgt_keys = sorted(ht.dims.keys())
    tgt_reps = []
    for key in tgt_keys:
        tgt_reps.extend(ht.representatives[key])
    src_reps = []
    for key in sorted(hs.dims.keys()):
        src_reps.extend(hs.representatives[key])
    # columns of the solve matrix: boundaries of target, then reps
    bdy_cols = span_reduce([f.target.differential(1 << i)
                            for i in range(f.target.n)])
    cols = list(bdy_cols) + tgt_reps
    m = MatGF2(len(cols), f.target.n, cols).transpose()
    out = MatGF2.zero(len(tgt_reps), len(src_reps))
    for j, v in enumerate(src_reps):
        x = solve(m, f.apply(v))
        if x is None:
            raise ValueError("image of a cycle is not a cycle mod boundaries")
        for k in range(len(tgt_reps)):
            if (x >> (len(bdy_cols) + k)) & 1:
                out.rows[k] |= 1 << j
    return out, hs, ht


# ---------------------------------------------------------------------------
# Complexes over GF(2)[U]


class UComplex:
    """Relatively graded complex of free GF(2)[U]-modules; U has degree -2."""

    def __init__(self, generators: list[Generator], boundary: MatPolyGF2):
        n = len(generators)
        if boundary.nrows != n or boundary.ncols != n:
            raise ValueError("boundary must be square on the generators")
        self.generators = list(generators)
        self.boundary = boundary

    @property
    def n(self) -> int:
        return len(self.generators)

    def verify(self) -> list[str]:
        problems = []
        for (i, j), p in self.boundary.entries.items():
            src, dst = self.generators[j], self.generators[i]
            if src.cls != dst.cls:
                problems.append(
                    f"boundary crosses classes: {src.name} -> {dst.name}")
                continue
            q = p
            k = 0
            while q:
                if q & 1 and dst.degree - 2 * k != src.degree - 1:
                    problems.append(
                        f"degree mismatch: {src.name} -> U^{k} {dst.name}")
                q >>= 1
                k += 1
        sq = self.boundary * self.boundary
        for (i, j), p in sq.entries.items():
            problems.append(
                f"d^2 != 0: {self.generators[j].name} -> "
                f"{self.generators[i].name}")
        return problems


def _poly_solve(m: MatPolyGF2, b: list[int]) -> list[int] | None:
    """Solve m x = b over GF(2)[U] via Smith normal form, or None."""
    sf = smith_normal_form_poly(m)
    # m = U_inv D V_inv, so D (V_inv x) = U b
    ub = [0] * m.nrows
    for (i, j), p in sf.U.entries.items():
        ub[i] ^= pmul(p, b[j])
    y = [0] * m.ncols
    for i in range(m.nrows):
        f = sf.factors[i] if i < len(sf.factors) else 0
        if f == 0:
            if ub[i]:
                return None
            continue
        q, r = pdivmod(ub[i], f)
        if r:
            return None
        y[i] = q
    x = [0] * m.ncols
    for (i, j), p in sf.V.entries.items():
        x[i] ^= pmul(p, y[j])
    return x


def homology_U(c: UComplex) -> dict:
    """Per class: (free rank over GF(2)[U], list of torsion factors).

    Computed as ker d / im d over the PID GF(2)[U]; the internal grading
    plays no role in the module structure.
    """
    bad = c.verify()
    if bad:
        raise ValueError("; ".join(bad))
    out = {}
    for cls in {g.cls for g in c.generators}:
        idx = [i for i, g in enumerate(c.generators) if g.cls == cls]
        pos = {g: k for k, g in enumerate(idx)}
        k = len(idx)
        m = MatPolyGF2(k, k, {(pos[i], pos[j]): p
                              for (i, j), p in c.boundary.entries.items()
                              if i in pos and j in pos})
        sf = smith_normal_form_poly(m)
        ker_cols = [j for j in range(k)
                    if j >= len(sf.factors) or sf.factors[j] == 0]
        K = MatPolyGF2(k, len(ker_cols),
                       {(i, jj): sf.V.get(i, j)
                        for jj, j in enumerate(ker_cols)
                        for i in range(k) if sf.V.get(i, j)})
        # express each boundary column in kernel coordinates
        coord_cols = []
        for j in range(k):
            b = [m.get(i, j) for i in range(k)]
            if not any(b):
                continue
            x = _poly_solve(K, b)
            if x is None:
                raise ValueError("boundary is not a cycle")
            coord_cols.append(x)
        M = MatPolyGF2(len(ker_cols), len(coord_cols),
                       {(i, j): coord_cols[j][i]
                        for j in range(len(coord_cols))
                        for i in range(len(ker_cols)) if coord_cols[j][i]})
        sf2 = smith_normal_form_poly(M)
        nontriv = [f for f in sf2.factors if f != 1]
        free_rank = len(ker_cols) - len(sf2.factors)
        out[cls] = (free_rank, sorted(nontriv))
    return out


# ---------------------------------------------------------------------------
# Filtered complexes


class FilteredComplex:
    """A graded complex with a filtration level per generator.

    Cohomological convention: the differential does not decrease the
    filtration.  Levels may be ints or tuples linearized by a key function.
    """

    def __init__(self, complex: GradedComplexGF2, levels: list,
                 key=None):
        if len(levels) != complex.n:
            raise ValueError("one filtration level per generator")
        self.complex = complex
        self.levels = list(levels)
        self.key = key if key is not None else (lambda x: x)

    def level_of(self, i: int):
        return self.key(self.levels[i])

    def verify(self) -> list[str]:
        problems = []
        for i, j in self.complex.boundary.entries():
            if self.level_of(i) < self.level_of(j):
                problems.append(
                    f"differential decreases filtration: "
                    f"{self.complex.generators[j].name} -> "
                    f"{self.complex.generators[i].name}")
        return problems
