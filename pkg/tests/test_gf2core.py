import random

from floerx.gf2core import (
    MatGF2,
    MatPolyGF2,
    image_basis,
    kernel_basis,
    pdeg,
    pdivmod,
    pmul,
    rank,
    smith_normal_form_poly,
    solve,
    span_reduce,
    vector_in_span,
)


def random_mat(rng, nrows, ncols, density=0.4):
    rows = []
    for _ in range(nrows):
        r = 0
        for j in range(ncols):
            if rng.random() < density:
                r |= 1 << j
        rows.append(r)
    return MatGF2(nrows, ncols, rows)


def test_rank_empty():
    assert rank(MatGF2.zero(0, 0)) == 0
    assert rank(MatGF2.zero(3, 0)) == 0
    assert rank(MatGF2.zero(0, 3)) == 0


def test_rank_identity():
    assert rank(MatGF2.identity(5)) == 5


def test_rank_x_boundary():
    # d(xy) = d(yx) = xy + yx on basis xx, xy, yx, yy: rank 1, kernel dim 3
    d = MatGF2.from_entries(4, 4, [(1, 1), (2, 1), (1, 2), (2, 2)])
    assert rank(d) == 1
    ker = kernel_basis(d)
    assert len(ker) == 3
    for v in ker:
        assert d.mul_vec(v) == 0


def test_solve_planted():
    rng = random.Random(11)
    for _ in range(50):
        m = random_mat(rng, rng.randrange(1, 9), rng.randrange(1, 9))
        x0 = rng.getrandbits(m.ncols)
        b = m.mul_vec(x0)
        x = solve(m, b)
        assert x is not None
        assert m.mul_vec(x) == b


def test_solve_inconsistent():
    m = MatGF2.from_entries(2, 1, [(0, 0), (1, 0)])  # column (1,1)
    assert solve(m, 0b01) is None
    assert solve(m, 0b11) == 1


def test_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(50):
        m = random_mat(rng, rng.randrange(0, 10), rng.randrange(0, 10))
        assert rank(m) + len(kernel_basis(m)) == m.ncols
        assert rank(m) == rank(m.transpose())


def test_solve_matches_augmented_rank():
    rng = random.Random(13)
    for _ in range(50):
        m = random_mat(rng, rng.randrange(1, 9), rng.randrange(1, 9))
        b = rng.getrandbits(m.nrows)
        aug = MatGF2(m.nrows, m.ncols + 1,
                     [r | (((b >> i) & 1) << m.ncols) for i, r in enumerate(m.rows)])
        solvable = rank(aug) == rank(m)
        x = solve(m, b)
        assert (x is not None) == solvable
        if x is not None:
            assert m.mul_vec(x) == b


def test_span_helpers():
    basis = span_reduce([0b011, 0b110, 0b101])
    assert len(basis) == 2
    assert vector_in_span(basis, 0b101)
    assert not vector_in_span(basis, 0b001)
    m = MatGF2(3, 2, [0b11, 0b11, 0b00])
    img = image_basis(m)
    assert len(img) == 1 and img[0] == 0b011


def test_poly_arith():
    t = 0b10
    assert pmul(t, t) == 0b100
    assert pmul(t ^ 1, t ^ 1) == 0b101  # (t+1)^2 = t^2+1
    q, r = pdivmod(0b101, 0b11)
    assert q == 0b11 and r == 0
    assert pdeg(0) == -1 and pdeg(1) == 0 and pdeg(t) == 1


def test_smith_diag():
    m = MatPolyGF2(2, 2, {(0, 0): 1, (1, 1): 0b10})
    sf = smith_normal_form_poly(m)
    assert sf.factors == [1, 0b10]


def test_smith_column_t():
    m = MatPolyGF2(2, 1, {(0, 0): 0b10})
    sf = smith_normal_form_poly(m)
    assert sf.factors == [0b10]


def check_smith(m):
    sf = smith_normal_form_poly(m)
    # divisibility chain
    for a, b in zip(sf.factors, sf.factors[1:]):
        assert pdivmod(b, a)[1] == 0
    # transforms invertible
    assert sf.U * sf.U_inv == MatPolyGF2.identity(m.nrows)
    assert sf.V_inv * sf.V == MatPolyGF2.identity(m.ncols)
    # U m V is the diagonal of factors
    d = sf.U * m * sf.V
    expect = MatPolyGF2(m.nrows, m.ncols,
                        {(i, i): f for i, f in enumerate(sf.factors)})
    assert d == expect
    return sf


def test_smith_random():
    rng = random.Random(2024)
    for _ in range(50):
        nr, nc = rng.randrange(1, 6), rng.randrange(1, 6)
        entries = {}
        for i in range(nr):
            for j in range(nc):
                if rng.random() < 0.5:
                    entries[(i, j)] = rng.getrandbits(3)
        m = MatPolyGF2(nr, nc, entries)
        sf = check_smith(m)
        # truncation oracle: rank over GF(2) of m mod t^k matches the count
        # of factors that stay nonzero mod t^k, plus factor-degree bookkeeping
        for k in (1, 2, 4):
            mk = m.evaluate_mod_tk(k)
            # reconstruct m from the decomposition and compare truncations
            recon = sf.U_inv * MatPolyGF2(
                m.nrows, m.ncols, {(i, i): f for i, f in enumerate(sf.factors)}
            ) * sf.V_inv
            assert recon == m
            assert recon.evaluate_mod_tk(k) == mk
