"""Spectral sequences of filtered complexes over GF(2).

Pages are computed exactly by the subquotient formula
E_r^s = Z_r^s / (Z_{r-1}^{s+1} + d Z_{r-1}^{s-r+1}) with explicit bases,
so the page differentials d_r are available as matrices.  Chain
operators (the filtration shift theta, or U) can be tracked through the
pages to read off tower and module data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .complexes import FilteredComplex, Generator, GradedComplexGF2, UComplex
from .gf2core import MatGF2, kernel_basis, span_reduce


def _reduce_mod(pivots: dict, v: int) -> int:
    while v:
        p = (v & -v).bit_length() - 1
        if p not in pivots:
            return v
        v ^= pivots[p]
    return 0


def _pivot_dict(vectors) -> dict:
    out = {}
    for v in vectors:
        w = _reduce_mod(out, v)
        if w:
            out[(w & -w).bit_length() - 1] = w
    return out


@dataclass
class Page:
    r: int
    dims: dict                    # (class, filtration, degree) -> dim
    reps: dict                    # same keys -> representative vectors
    dens: dict                    # same keys -> denominator basis
    diff: dict                    # key -> {target key: MatGF2}
    ops: dict = field(default_factory=dict)   # op name -> key -> {tgt: mat}

    def differential_is_zero(self) -> bool:
        return all(m.is_zero() for tgts in self.diff.values()
                   for m in tgts.values())

    def total_dim(self) -> int:
        return sum(self.dims.values())


@dataclass
class SpectralSequenceReport:
    pages: list
    collapse_page: int | None
    filtration_range: tuple
    metadata: dict = field(default_factory=dict)

    def page(self, r: int) -> Page:
        return self.pages[r]

    def to_json(self) -> dict:
        return {
            "schema": "floerx/spectral/1",
            "collapse_page": self.collapse_page,
            "filtration_range": list(self.filtration_range),
            "metadata": self.metadata,
            "pages": [{
                "r": p.r,
                "dims": [[list(k), v] for k, v in sorted(p.dims.items())
                         if v],
                "differentials": [
                    [list(k), list(t), m.entries()]
                    for k, tgts in sorted(p.diff.items())
                    for t, m in sorted(tgts.items()) if not m.is_zero()],
            } for p in self.pages],
        }

    def markdown(self) -> str:
        lines = []
        for p in self.pages:
            lines.append(f"## Page E_{p.r}")
            lines.append("| class | filtration | degree | dim |")
            lines.append("|---|---|---|---|")
            for (cls, s, d), v in sorted(p.dims.items()):
                if v:
                    lines.append(f"| {cls} | {s} | {d} | {v} |")
        if self.collapse_page is not None:
            lines.append(f"Collapses at page {self.collapse_page}.")
        return "\n".join(lines)


def _express(pivots: dict, cols: list, v: int):
    """Coordinates of v in the spanning list cols, reducing by pivots.

    pivots maps lowest set bit -> (row, coordinate vector over cols).
    """
    coeff = 0
    while v:
        p = (v & -v).bit_length() - 1
        if p not in pivots:
            return None
        row, cvec = pivots[p]
        v ^= row
        coeff ^= cvec
    return coeff


class _PageBuilder:
    def __init__(self, fc: FilteredComplex):
        c = fc.complex
        self.c = c
        self.levels = [fc.level_of(i) for i in range(c.n)]
        self.smin = min(self.levels, default=0)
        self.smax = max(self.levels, default=0)
        self.keys = sorted({(g.cls, self.levels[i], g.degree)
                            for i, g in enumerate(c.generators)})
        self._zcache = {}

    def bucket_indices(self, cls, s, d):
        return [i for i, g in enumerate(self.c.generators)
                if g.cls == cls and g.degree == d and self.levels[i] >= s]

    def cycles(self, r, cls, s, d):
        """Basis of Z_r^s in the (class, degree) bucket."""
        if (r, cls, s, d) in self._zcache:
            return self._zcache[(r, cls, s, d)]
        cols = self.bucket_indices(cls, s, d)
        low = [i for i, g in enumerate(self.c.generators)
               if g.cls == cls and self.levels[i] < s + r]
        rows = []
        for i in low:
            row = 0
            for k, j in enumerate(cols):
                if self.c.boundary.get(i, j):
                    row |= 1 << k
            rows.append(row)
        out = []
        for v in kernel_basis(MatGF2(len(rows), len(cols), rows)):
            w = 0
            for k, j in enumerate(cols):
                if (v >> k) & 1:
                    w |= 1 << j
            out.append(w)
        self._zcache[(r, cls, s, d)] = out
        return out

    def denominator(self, r, cls, s, d):
        vecs = list(self.cycles(r - 1, cls, s + 1, d))
        degrees = sorted({g.degree for g in self.c.generators
                          if g.cls == cls})
        for d2 in degrees:
            for v in self.cycles(r - 1, cls, s - r + 1, d2):
                w = self.c.differential(v)
                if w and self._bucket_of(w) == (cls, s, d):
                    vecs.append(w)
        return [v for v in span_reduce(vecs) if v]

    def _bucket_of(self, v: int):
        """(class, min filtration, degree) of a homogeneous vector."""
        idxs = []
        i = v
        while i:
            low = i & -i
            idxs.append(low.bit_length() - 1)
            i ^= low
        cls = self.c.generators[idxs[0]].cls
        deg = self.c.generators[idxs[0]].degree
        for j in idxs[1:]:
            if self.c.generators[j].cls != cls or \
                    self.c.generators[j].degree != deg:
                raise ValueError("inhomogeneous vector")
        return (cls, min(self.levels[j] for j in idxs), deg)

    def build_page(self, r: int) -> Page:
        dims, reps, dens = {}, {}, {}
        for cls, s, d in self.keys:
            z = self.cycles(r, cls, s, d)
            den = self.denominator(r, cls, s, d)
            pivots = _pivot_dict(den)
            chosen = []
            for v in z:
                w = _reduce_mod(pivots, v)
                if w:
                    chosen.append(v)
                    pivots[(w & -w).bit_length() - 1] = w
            key = (cls, s, d)
            dims[key] = len(chosen)
            reps[key] = chosen
            dens[key] = den
        page = Page(r, dims, reps, dens, {})
        for key in list(reps):
            page.diff[key] = self._bucket_map(
                page, key, self.c.differential, r)
        return page

    def _bucket_map(self, page: Page, key, op_vec, filt_shift: int) -> dict:
        """Express op images of the reps of a bucket in page coordinates."""
        cls, s, d = key
        out = {}
        for j, x in enumerate(page.reps[key]):
            v = op_vec(x)
            if not v:
                continue
            tkey = self._bucket_of(v)
            tkey = (tkey[0], s + filt_shift, tkey[2])
            if tkey not in page.reps:
                # no generators sit at this exact level and degree, so
                # the class is zero there
                continue
            m = out.get(tkey)
            if m is None:
                m = MatGF2.zero(len(page.reps[tkey]), len(page.reps[key]))
                out[tkey] = m
            coords = self._coords_in_bucket(page, tkey, v)
            for i in range(m.nrows):
                if (coords >> i) & 1:
                    m.rows[i] |= 1 << j
        return out

    def _coords_in_bucket(self, page: Page, key, v: int) -> int:
        den = page.dens[key]
        rl = page.reps[key]
        cols = den + rl
        pivots = {}
        for k, w in enumerate(cols):
            red, cvec = w, 1 << k
            while red:
                p = (red & -red).bit_length() - 1
                if p not in pivots:
                    pivots[p] = (red, cvec)
                    break
                row, c2 = pivots[p]
                red ^= row
                cvec ^= c2
        coeff = _express(pivots, cols, v)
        if coeff is None:
            raise ValueError("image is not in the expected subquotient")
        return coeff >> len(den)


def pages(fc: FilteredComplex, max_page: int,
          operators: dict | None = None) -> SpectralSequenceReport:
    """Exact pages E_0..E_max_page of the filtration spectral sequence.

    operators: name -> (matrix, filtration shift) for chain operators to
    track through the pages (e.g. theta or U).
    """
    bad = fc.verify()
    if bad:
        raise ValueError("; ".join(bad))
    b = _PageBuilder(fc)
    operators = operators or {}
    for name, (m, shift) in operators.items():
        if m * fc.complex.boundary != fc.complex.boundary * m:
            raise ValueError(f"operator {name} is not a chain map")
    out = []
    for r in range(max_page + 1):
        page = b.build_page(r)
        for name, (m, shift) in operators.items():
            page.ops[name] = {}
            for key in page.reps:
                page.ops[name][key] = b._bucket_map(page, key, m.mul_vec,
                                                    shift)
        out.append(page)
    width = b.smax - b.smin
    collapse = None
    if max_page >= width:
        collapse = max_page + 1
        for r in range(max_page, -1, -1):
            if out[r].differential_is_zero():
                collapse = r
            else:
                break
        if collapse > max_page:
            collapse = None
    return SpectralSequenceReport(out, collapse, (b.smin, b.smax))


def _op_power_mats(page: Page, op: str, key, steps: int) -> dict:
    """Blocks of the steps-fold composition of the operator on one bucket."""
    mats = {key: MatGF2.identity(len(page.reps[key]))}
    for _ in range(steps):
        nxt = {}
        for k, m in mats.items():
            for tkey, a in page.ops[op].get(k, {}).items():
                prod = a * m
                if prod.is_zero():
                    continue
                if tkey in nxt:
                    nxt[tkey] = nxt[tkey] + prod
                else:
                    nxt[tkey] = prod
        mats = {k: m for k, m in nxt.items() if not m.is_zero()}
        if not mats:
            break
    return mats


def _op_power_nonzero(page: Page, op: str, key, steps: int) -> bool:
    """Whether some class in the bucket survives `steps` applications."""
    return bool(_op_power_mats(page, op, key, steps))


def op_power_rank(page: Page, op: str, steps: int) -> int:
    """Rank of the steps-fold composition of the operator on the page."""
    offsets, tot = {}, 0
    for k in sorted(page.reps):
        offsets[k] = tot
        tot += len(page.reps[k])
    cols = []
    for k in sorted(page.reps):
        n = len(page.reps[k])
        if n == 0:
            continue
        mats = _op_power_mats(page, op, k, steps)
        for j in range(n):
            v = 0
            for tkey, m in mats.items():
                off = offsets[tkey]
                for i in range(m.nrows):
                    if m.get(i, j):
                        v |= 1 << (off + i)
            if v:
                cols.append(v)
    return len([w for w in span_reduce(cols) if w])


def tower_bottom(report: SpectralSequenceReport, page_index: int,
                 op: str = "theta", cls: str | None = None,
                 horizon: int | None = None):
    """Minimal degree of a class surviving all powers of the operator.

    For a filtration-raising operator the horizon defaults to the number
    of levels above the class; torsion dies before that, a tower does not.
    """
    page = report.pages[page_index]
    smin, smax = report.filtration_range
    best = None
    for (c, s, d), dim in sorted(page.dims.items(), key=lambda kv: kv[0][2]):
        if dim == 0 or (cls is not None and c != cls):
            continue
        steps = horizon if horizon is not None else smax - s
        if steps <= 0:
            continue
        if _op_power_nonzero(page, op, (c, s, d), steps):
            best = d if best is None else min(best, d)
            break
    return best


def theta_tower(report: SpectralSequenceReport, reference,
                cls: str | None = None) -> dict:
    """Tower record relative to a reference grading.

    reference: the grading (int) of the designated reference generator.
    Returns per-page tower bottoms and the doubled offset of the final
    page's bottom relative to the reference.
    """
    per_page = {}
    for r in range(len(report.pages)):
        per_page[r] = tower_bottom(report, r, "theta", cls)
    last = report.collapse_page
    if last is None or last >= len(report.pages):
        last = len(report.pages) - 1
    bottom = per_page[last]
    if bottom is None:
        raise ValueError("no surviving tower")
    return {
        "per_page": per_page,
        "page_used": last,
        "bottom": bottom,
        "relative": bottom - reference,
        "q_offset": 2 * (bottom - reference),
    }


# ---------------------------------------------------------------------------
# U-filtered pages: complexes over GF(2)[U] with a filtration


def expand_U(uc: UComplex, truncation: int,
             u_degree: int = -2) -> tuple[GradedComplexGF2, MatGF2]:
    """The quotient by U^truncation as a GF(2) complex, with the U map."""
    gens = []
    for j in range(truncation):
        for g in uc.generators:
            gens.append(Generator(f"{g.name}*U^{j}", g.cls,
                                  g.degree + u_degree * j))
    nb = uc.n
    N = nb * truncation
    rows = [0] * N
    for (i, jcol), poly in uc.boundary.entries.items():
        p = poly
        k = 0
        while p:
            if p & 1:
                for w in range(truncation - k):
                    rows[(w + k) * nb + i] |= 1 << (w * nb + jcol)
            p >>= 1
            k += 1
    umat = MatGF2.zero(N, N)
    for w in range(truncation - 1):
        for i in range(nb):
            umat.rows[(w + 1) * nb + i] |= 1 << (w * nb + i)
    return GradedComplexGF2(gens, MatGF2(N, N, rows)), umat


def U_pages(uc: UComplex, levels: list, max_page: int,
            truncation: int | None = None, horizon: int | None = None,
            u_degree: int = -2, key=None) -> SpectralSequenceReport:
    """Pages of a filtered complex of free GF(2)[U]-modules.

    levels: filtration level per generator of uc.  Pages are computed on
    the U-truncated expansion; per page the report records the free rank
    and the minimal degree of a non-U-torsion class, plus that degree
    with the +2 normalization applied (metadata "d_tau_shift").
    """
    if truncation is None:
        truncation = uc.n + max_page + 4
    if horizon is None:
        horizon = truncation // 2
    cx, umat = expand_U(uc, truncation, u_degree)
    keyf = key if key is not None else (lambda x: x)
    lv = [keyf(levels[i % uc.n]) for i in range(cx.n)]
    fc = FilteredComplex(cx, lv)
    report = pages(fc, max_page, operators={"U": (umat, 0)})
    report.metadata["d_tau_shift"] = 2
    report.metadata["u_truncation"] = truncation
    u_summary = []
    for r, page in enumerate(report.pages):
        per_filt = {}
        bottom = None
        for (c, s, d), dim in page.dims.items():
            if dim == 0:
                continue
            if _op_power_nonzero(page, "U", (c, s, d), horizon):
                per_filt.setdefault(f"{c}:{s}", []).append(d)
                bottom = d if bottom is None else min(bottom, d)
        u_summary.append({
            "page": r,
            "free_bottom": bottom,
            "d_tau": None if bottom is None else bottom + 2,
            "free_buckets": {k: sorted(v) for k, v in per_filt.items()},
            "free_rank": op_power_rank(page, "U", horizon)
            - op_power_rank(page, "U", horizon + 1),
        })
    report.metadata["u_pages"] = u_summary
    return report


def report_to_json_str(report: SpectralSequenceReport) -> str:
    return json.dumps(report.to_json(), indent=2, default=str)
