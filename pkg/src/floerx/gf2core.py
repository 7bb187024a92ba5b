"""Exact linear algebra over GF(2) and over the polynomial ring GF(2)[t].

Matrices over GF(2) store each row as a Python int used as a bitset, so
row operations are single xors.  Vectors are ints as well: bit j is
coordinate j.  Polynomials over GF(2) are ints used as coefficient
bitmasks indexed by the exponent of t (so t^2 + 1 is 0b101 = 5).
"""

from __future__ import annotations

from dataclasses import dataclass


# ---------------------------------------------------------------------------
# GF(2) matrices


class MatGF2:
    """A matrix over GF(2) with bitset-backed rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: list[int] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative dimension")
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [0] * nrows
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        mask = (1 << ncols) - 1
        for r in rows:
            if r & ~mask:
                raise ValueError("entry out of column range")
        self.rows = list(rows)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "MatGF2":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "MatGF2":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries) -> "MatGF2":
        """Build from an iterable of (row, col) positions holding 1."""
        rows = [0] * nrows
        seen = set()
        for i, j in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise ValueError(f"entry ({i},{j}) out of bounds")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry ({i},{j})")
            seen.add((i, j))
            rows[i] |= 1 << j
        return cls(nrows, ncols, rows)

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def entries(self) -> list[tuple[int, int]]:
        out = []
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                out.append((i, low.bit_length() - 1))
                r ^= low
        return out

    def copy(self) -> "MatGF2":
        return MatGF2(self.nrows, self.ncols, self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatGF2)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(self.rows)))

    def __repr__(self):
        return f"MatGF2({self.nrows}x{self.ncols}, {len(self.entries())} ones)"

    def __add__(self, other: "MatGF2") -> "MatGF2":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return MatGF2(self.nrows, self.ncols,
                      [a ^ b for a, b in zip(self.rows, other.rows)])

    def __mul__(self, other: "MatGF2") -> "MatGF2":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = [0] * self.nrows
        for i, r in enumerate(self.rows):
            acc = 0
            while r:
                low = r & -r
                acc ^= other.rows[low.bit_length() - 1]
                r ^= low
            out[i] = acc
        return MatGF2(self.nrows, other.ncols, out)

    def mul_vec(self, v: int) -> int:
        """Matrix times column vector (vector as int bitmask)."""
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & v).count("1") & 1:
                out |= 1 << i
        return out

    def transpose(self) -> "MatGF2":
        out = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return MatGF2(self.ncols, self.nrows, out)

    def is_zero(self) -> bool:
        return not any(self.rows)


def _echelon(rows: list[int]) -> tuple[list[int], list[int]]:
    """Row-reduce in place; returns (reduced rows, pivot column list)."""
    pivots: list[int] = []
    reduced: list[int] = []
    for row in rows:
        for piv, pr in zip(pivots, reduced):
            if (row >> piv) & 1:
                row ^= pr
        if row:
            p = (row & -row).bit_length() - 1
            # back-substitute into existing rows
            for k in range(len(reduced)):
                if (reduced[k] >> p) & 1:
                    reduced[k] ^= row
            pivots.append(p)
            reduced.append(row)
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [reduced[k] for k in order], [pivots[k] for k in order]


def rank(m: MatGF2) -> int:
    """GF(2) rank via elimination."""
    _, pivots = _echelon(list(m.rows))
    return len(pivots)


def kernel_basis(m: MatGF2) -> list[int]:
    """Basis of the null space {v : m v = 0}, vectors as int bitmasks."""
    reduced, pivots = _echelon(list(m.rows))
    pivset = set(pivots)
    basis = []
    for j in range(m.ncols):
        if j in pivset:
            continue
        v = 1 << j
        for piv, row in zip(pivots, reduced):
            if (row >> j) & 1:
                v |= 1 << piv
        basis.append(v)
    return basis


def solve(m: MatGF2, b: int) -> int | None:
    """Some x with m x = b, or None if b is not in the column space."""
    if b & ~((1 << m.nrows) - 1):
        raise ValueError("vector out of row range")
    # row-reduce [m | b] with b as the last column
    aug_rows = []
    for i, r in enumerate(m.rows):
        aug_rows.append(r | (((b >> i) & 1) << m.ncols))
    reduced, pivots = _echelon(aug_rows)
    x = 0
    for piv, row in zip(pivots, reduced):
        if piv == m.ncols:
            return None  # pivot in the augmented column: inconsistent
        if (row >> m.ncols) & 1:
            x |= 1 << piv
    return x


def image_basis(m: MatGF2) -> list[int]:
    """Basis of the column space, vectors as int bitmasks over rows."""
    reduced, _ = _echelon(list(m.transpose().rows))
    return reduced


def vector_in_span(basis: list[int], v: int) -> bool:
    for row in basis:
        if not row:
            continue
        p = (row & -row).bit_length() - 1
        if (v >> p) & 1:
            v ^= row
    return v == 0


def span_reduce(vectors: list[int]) -> list[int]:
    """Echelon basis of the span of the given vectors."""
    reduced, _ = _echelon(list(vectors))
    return reduced


# ---------------------------------------------------------------------------
# GF(2)[t] polynomials as int bitmasks


def pdeg(p: int) -> int:
    """Degree; -1 for the zero polynomial."""
    return p.bit_length() - 1


def pmul(a: int, b: int) -> int:
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def pdivmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = pdeg(b)
    while pdeg(a) >= db:
        shift = pdeg(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, pdivmod(a, b)[1]
    return a


def peval_trunc(p: int, k: int) -> int:
    """p modulo t^k (truncation)."""
    return p & ((1 << k) - 1)


# ---------------------------------------------------------------------------
# Matrices over GF(2)[t]


class MatPolyGF2:
    """A matrix over GF(2)[t]; entries stored sparsely, zero entries absent."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries: dict[tuple[int, int], int] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[tuple[int, int], int] = {}
        if entries:
            for (i, j), p in entries.items():
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise ValueError(f"entry ({i},{j}) out of bounds")
                if p:
                    self.entries[(i, j)] = p

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "MatPolyGF2":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "MatPolyGF2":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def copy(self) -> "MatPolyGF2":
        return MatPolyGF2(self.nrows, self.ncols, dict(self.entries))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatPolyGF2)
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.entries == other.entries
        )

    def __mul__(self, other: "MatPolyGF2") -> "MatPolyGF2":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        acc: dict[tuple[int, int], int] = {}
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), p in other.entries.items():
            by_row.setdefault(k, []).append((j, p))
        for (i, k), p in self.entries.items():
            for j, q in by_row.get(k, ()):
                key = (i, j)
                acc[key] = acc.get(key, 0) ^ pmul(p, q)
        return MatPolyGF2(self.nrows, other.ncols,
                          {k: v for k, v in acc.items() if v})

    def __add__(self, other: "MatPolyGF2") -> "MatPolyGF2":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, 0) ^ v
        return MatPolyGF2(self.nrows, self.ncols, {k: v for k, v in acc.items() if v})

    def evaluate_mod_tk(self, k: int) -> "MatPolyGF2":
        return MatPolyGF2(self.nrows, self.ncols,
                          {key: peval_trunc(p, k) for key, p in self.entries.items()})


@dataclass
class SmithForm:
    """Invariant factor decomposition U*A*V = diag(factors)."""

    factors: list[int]          # nonzero invariant factors, each dividing the next
    U: MatPolyGF2               # invertible row transform
    V: MatPolyGF2               # invertible column transform
    U_inv: MatPolyGF2
    V_inv: MatPolyGF2


def smith_normal_form_poly(m: MatPolyGF2) -> SmithForm:
    """Smith normal form over the Euclidean domain GF(2)[t].

    Returns invariant factors f_1 | f_2 | ... and invertible transforms
    with U*m*V equal to the diagonal of the factors (padded by zeros).
    """
    nr, nc = m.nrows, m.ncols
    a = [[m.get(i, j) for j in range(nc)] for i in range(nr)]
    U = MatPolyGF2.identity(nr)
    Ui = MatPolyGF2.identity(nr)
    V = MatPolyGF2.identity(nc)
    Vi = MatPolyGF2.identity(nc)

    def row_op(dst, src, q):  # row dst += q * row src ; tracks U, U_inv
        nonlocal U, Ui
        for j in range(nc):
            a[dst][j] ^= pmul(q, a[src][j])
        E = MatPolyGF2.identity(nr)
        E.entries[(dst, src)] = q
        U = E * U
        Ei = MatPolyGF2.identity(nr)
        Ei.entries[(dst, src)] = q  # self-inverse over GF(2)
        Ui = Ui * Ei

    def col_op(dst, src, q):  # col dst += q * col src ; tracks V, V_inv
        nonlocal V, Vi
        for i in range(nr):
            a[i][dst] ^= pmul(q, a[i][src])
        E = MatPolyGF2.identity(nc)
        E.entries[(src, dst)] = q
        V = V * E
        Ei = MatPolyGF2.identity(nc)
        Ei.entries[(src, dst)] = q
        Vi = Ei * Vi

    def row_swap(i1, i2):
        nonlocal U, Ui
        if i1 == i2:
            return
        a[i1], a[i2] = a[i2], a[i1]
        P = MatPolyGF2.identity(nr)
        P.entries.pop((i1, i1)), P.entries.pop((i2, i2))
        P.entries[(i1, i2)] = 1
        P.entries[(i2, i1)] = 1
        U = P * U
        Ui = Ui * P

    def col_swap(j1, j2):
        nonlocal V, Vi
        if j1 == j2:
            return
        for i in range(nr):
            a[i][j1], a[i][j2] = a[i][j2], a[i][j1]
        P = MatPolyGF2.identity(nc)
        P.entries.pop((j1, j1)), P.entries.pop((j2, j2))
        P.entries[(j1, j2)] = 1
        P.entries[(j2, j1)] = 1
        V = V * P
        Vi = P * Vi

    t = 0
    while True:
        # find a nonzero entry in the remaining block of minimal degree
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or pdeg(a[i][j]) < pdeg(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q, r = pdivmod(a[i][t], a[t][t])
                    row_op(i, t, q)
                    if r:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q, r = pdivmod(a[t][j], a[t][t])
                    col_op(j, t, q)
                    if r:
                        col_swap(t, j)
                        dirty = True
        t += 1

    # enforce divisibility f_i | f_{i+1}
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            if pdivmod(a[i + 1][i + 1], a[i][i])[1]:
                # fold entry i+1 into column i, then Euclid on the 2x2 block
                col_op(i, i + 1, 1)
                while a[i + 1][i]:
                    qq, rr = pdivmod(a[i + 1][i], a[i][i])
                    row_op(i + 1, i, qq)
                    if rr:
                        row_swap(i, i + 1)
                if a[i][i + 1]:
                    qq, _ = pdivmod(a[i][i + 1], a[i][i])
                    col_op(i + 1, i, qq)
                changed = True

    factors = [a[i][i] for i in range(t)]
    return SmithForm(factors, U, V, Ui, Vi)
