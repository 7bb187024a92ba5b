"""Shared builders for randomized equivariant test instances."""

import random

from floerx.gf2core import MatGF2
from floerx.complexes import Generator, GradedComplexGF2, verify
from floerx.groupalg import GroupActionData, TwoGroup


def random_graded_complex(rng, nmax=6, ndeg=4, cls="s"):
    n = rng.randrange(1, nmax + 1)
    gens = [Generator(f"g{i}", cls, rng.randrange(ndeg)) for i in range(n)]
    rows = [0] * n
    for j in range(n):
        for i in range(n):
            if gens[i].degree == gens[j].degree - 1 and rng.random() < 0.5:
                rows[i] |= 1 << j
    m = MatGF2(n, n, rows)
    while True:
        sq = m * m
        if sq.is_zero():
            break
        _, j = sq.entries()[0]
        for i in range(n):
            m.rows[i] &= ~(1 << j)
    c = GradedComplexGF2(gens, m)
    assert verify(c) == []
    return c


def random_cyclic_action(rng, m=1, max_orbits=3, ndeg=4):
    """A complex with a semi-free permutation action of Z/2^m.

    Fixed generators only hit fixed generators or full orbit sums, so the
    differential is automatically equivariant.
    """
    G = TwoGroup("cyclic", m)
    k = G.order_sigma
    orbits = []  # (indices, degree, fixed?)
    gens = []
    for o in range(rng.randrange(1, max_orbits + 1)):
        deg = rng.randrange(ndeg)
        if rng.random() < 0.5:
            orbits.append(([len(gens)], deg, True))
            gens.append(Generator(f"f{o}", "s", deg))
        else:
            idx = list(range(len(gens), len(gens) + k))
            orbits.append((idx, deg, False))
            for t in range(k):
                gens.append(Generator(f"o{o}_{t}", "s", deg))
    n = len(gens)
    perm = list(range(n))
    for idx, _, fixed in orbits:
        if not fixed:
            for t in range(k):
                perm[idx[t]] = idx[(t + 1) % k]
    sigma = MatGF2(n, n, [0] * n)
    for j, i in enumerate(perm):
        sigma.rows[i] |= 1 << j

    rows = [0] * n
    for idx, deg, fixed in orbits:
        targets = []  # column vectors allowed in the boundary of this orbit
        for idx2, deg2, fixed2 in orbits:
            if deg2 != deg - 1:
                continue
            if fixed2:
                targets.append(1 << idx2[0])
            elif not fixed:
                targets.append(None)  # handled orbit-to-orbit below
            else:
                v = 0
                for i in idx2:
                    v |= 1 << i
                targets.append(v)  # full orbit sum is invariant
        if fixed:
            v = 0
            for t in targets:
                if t is not None and rng.random() < 0.6:
                    v ^= t
            rows_add(rows, v, idx[0])
        else:
            # choose a boundary for the orbit representative, then rotate
            rep = 0
            for idx2, deg2, fixed2 in orbits:
                if deg2 != deg - 1:
                    continue
                for i in idx2:
                    if rng.random() < 0.4:
                        rep ^= 1 << i
            vec = rep
            src = idx[0]
            for _ in range(k):
                rows_add(rows, vec, src)
                vec = sigma.mul_vec(vec)
                src = perm[src]

    m_b = MatGF2(n, n, rows)
    # repair d^2 = 0 orbit by orbit
    while True:
        sq = m_b * m_b
        if sq.is_zero():
            break
        _, j = sq.entries()[0]
        for idx, _, _ in orbits:
            if j in idx:
                for jj in idx:
                    for i in range(n):
                        m_b.rows[i] &= ~(1 << jj)
                break
    c = GradedComplexGF2(gens, m_b)
    assert verify(c) == []
    act = GroupActionData(G, c, {"sigma": sigma})
    assert act.verify() == []
    return act


def rows_add(rows, vec, src):
    for i in range(len(rows)):
        if (vec >> i) & 1:
            rows[i] |= 1 << src


def random_involutive_complex(rng, max_orbits=4, ndeg=4):
    act = random_cyclic_action(rng, m=1, max_orbits=max_orbits, ndeg=ndeg)
    return act.complex, act.mats["sigma"]
