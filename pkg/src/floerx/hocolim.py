"""Homotopy coherent diagrams of complexes and homotopy colimits.

A diagram assigns a complex to each object of a finite category and a
map G_{f_n,...,f_1} of degree n-1 to each composable string of
non-identity morphisms (absent strings are zero; single identities act
as the identity).  The homotopy colimit is spanned by pairs
(string; x) and carries the string-length filtration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import ChainMap, Generator, GradedComplexGF2
from .gf2core import MatGF2


class FiniteCategory:
    def __init__(self, objects: list[str], morphisms: dict,
                 compositions: dict, identities: dict):
        """morphisms: name -> (src, tgt); compositions: (g, f) -> g o f;
        identities: object -> identity morphism name."""
        self.objects = list(objects)
        self.morphisms = dict(morphisms)
        self.compositions = dict(compositions)
        self.identities = dict(identities)

    def src(self, f: str) -> str:
        return self.morphisms[f][0]

    def tgt(self, f: str) -> str:
        return self.morphisms[f][1]

    def is_id(self, f: str) -> bool:
        return f in self.identities.values()

    def compose(self, g: str, f: str) -> str:
        if self.tgt(f) != self.src(g):
            raise ValueError(f"{g} o {f} is not composable")
        if self.is_id(f):
            return g
        if self.is_id(g):
            return f
        return self.compositions[(g, f)]

    def validate(self) -> list[str]:
        problems = []
        for o in self.objects:
            i = self.identities.get(o)
            if i is None or self.morphisms.get(i) != (o, o):
                problems.append(f"bad identity for {o}")
        for f, (a, b) in self.morphisms.items():
            for g, (c, d) in self.morphisms.items():
                if b != c:
                    continue
                try:
                    h = self.compose(g, f)
                except KeyError:
                    problems.append(f"missing composite {g} o {f}")
                    continue
                if self.morphisms.get(h) != (a, d):
                    problems.append(f"composite {g} o {f} has wrong ends")
        for f in self.morphisms:
            for g in self.morphisms:
                for h in self.morphisms:
                    if (self.tgt(f) == self.src(g)
                            and self.tgt(g) == self.src(h)):
                        try:
                            lhs = self.compose(h, self.compose(g, f))
                            rhs = self.compose(self.compose(h, g), f)
                        except KeyError:
                            continue
                        if lhs != rhs:
                            problems.append(
                                f"associativity fails on ({h},{g},{f})")
        return problems

    def nonid_strings(self, max_len: int) -> list[tuple]:
        """Composable strings (f_n, ..., f_1) of non-identity morphisms."""
        nonid = [f for f in self.morphisms if not self.is_id(f)]
        out = [(f,) for f in nonid]
        layer = list(out)
        for _ in range(max_len - 1):
            nxt = []
            for s in layer:
                for g in nonid:
                    if self.src(g) == self.tgt(s[0]):
                        nxt.append((g,) + s)
            out.extend(nxt)
            layer = nxt
        return out


class CoherentDiagram:
    def __init__(self, category: FiniteCategory, complexes: dict,
                 maps: dict):
        """complexes: object -> GradedComplexGF2; maps: string tuple ->
        MatGF2 from G(src f_1) to G(tgt f_n)."""
        self.category = category
        self.complexes = dict(complexes)
        self.maps = {tuple(k): v for k, v in maps.items()}

    def to_json(self) -> dict:
        cat = self.category
        return {
            "schema": "floerx/diagram/1",
            "objects": cat.objects,
            "morphisms": {f: list(st) for f, st in cat.morphisms.items()},
            "compositions": [[g, f, h]
                             for (g, f), h in cat.compositions.items()],
            "identities": cat.identities,
            "complexes": {o: c.to_json() for o, c in self.complexes.items()},
            "maps": [{"string": list(s),
                      "nrows": m.nrows, "ncols": m.ncols,
                      "entries": m.entries()}
                     for s, m in self.maps.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoherentDiagram":
        if data.get("schema") != "floerx/diagram/1":
            raise ValueError("unrecognized diagram schema")
        cat = FiniteCategory(
            data["objects"],
            {f: tuple(st) for f, st in data["morphisms"].items()},
            {(g, f): h for g, f, h in data["compositions"]},
            data["identities"],
        )
        complexes = {o: GradedComplexGF2.from_json(c)
                     for o, c in data["complexes"].items()}
        maps = {tuple(m["string"]): MatGF2.from_entries(
                    m["nrows"], m["ncols"],
                    [tuple(e) for e in m["entries"]])
                for m in data["maps"]}
        return cls(cat, complexes, maps)

    def G(self, string: tuple) -> MatGF2:
        cat = self.category
        src = self.complexes[cat.src(string[-1])]
        tgt = self.complexes[cat.tgt(string[0])]
        if len(string) == 1 and cat.is_id(string[0]):
            return MatGF2.identity(src.n)
        if len(string) > 1 and any(cat.is_id(f) for f in string):
            return MatGF2.zero(tgt.n, src.n)
        return self.maps.get(tuple(string), MatGF2.zero(tgt.n, src.n))


def validate_coherent(d: CoherentDiagram, max_len: int | None = None
                      ) -> list[str]:
    """Check the coherence equations on all strings up to max_len."""
    cat = d.category
    if max_len is None:
        max_len = max((len(s) for s in d.maps), default=1) + 1
    problems = []
    for s in cat.nonid_strings(max_len):
        n = len(s)
        src = d.complexes[cat.src(s[-1])]
        tgt = d.complexes[cat.tgt(s[0])]
        g = d.G(s)
        lhs = tgt.boundary * g
        rhs = g * src.boundary
        for i in range(1, n):
            # contract f_{i+1} o f_i: s has f_n first, so positions from
            # the right; f_i = s[n - i], f_{i+1} = s[n - i - 1]
            comp = cat.compose(s[n - i - 1], s[n - i])
            contracted = s[:n - i - 1] + (comp,) + s[n - i + 1:]
            rhs = rhs + d.G(contracted)
            rhs = rhs + d.G(s[:n - i]) * d.G(s[n - i:])
        if lhs != rhs:
            problems.append(f"coherence fails on {s}")
    return problems


@dataclass
class HocolimComplex:
    complex: GradedComplexGF2
    gens: list            # (string tuple, object, base generator index)
    index: dict           # (string, object, base index) -> position
    diagram: CoherentDiagram
    max_len: int

    def levels(self) -> list[int]:
        return [len(s) for s, _, _ in self.gens]

    def vector(self, string: tuple, obj: str, base_vec: int) -> int:
        out = 0
        i = base_vec
        while i:
            low = i & -i
            out |= 1 << self.index[(string, obj, low.bit_length() - 1)]
            i ^= low
        return out


def hocolim(d: CoherentDiagram, max_len: int) -> HocolimComplex:
    cat = d.category
    strings = [((), o) for o in cat.objects]
    for s in cat.nonid_strings(max_len):
        strings.append((s, cat.src(s[-1])))
    gens = []
    index = {}
    for s, o in strings:
        base = d.complexes[o]
        for k, g in enumerate(base.generators):
            index[(s, o, k)] = len(gens)
            gens.append((s, o, k))
    N = len(gens)
    out_gens = []
    for s, o, k in gens:
        g = d.complexes[o].generators[k]
        label = ",".join(s) if s else "."
        out_gens.append(Generator(f"({label};{g.name})", g.cls,
                                  g.degree + len(s)))
    rows = [0] * N

    def add(col: int, string: tuple, obj: str, vec: int):
        i = vec
        while i:
            low = i & -i
            rows[index[(string, obj, low.bit_length() - 1)]] |= 1 << col
            i ^= low

    for col, (s, o, k) in enumerate(gens):
        base = d.complexes[o]
        add(col, s, o, base.differential(1 << k))
        n = len(s)
        if n == 0:
            continue
        # drop the outermost morphism
        add(col, s[1:], o, 1 << k)
        # compose adjacent morphisms (vanishes on identity composites)
        for i in range(1, n):
            comp = cat.compose(s[n - i - 1], s[n - i])
            if not cat.is_id(comp):
                contracted = s[:n - i - 1] + (comp,) + s[n - i + 1:]
                if len(contracted) <= max_len:
                    add(col, contracted, o, 1 << k)
        # apply an inner partial string
        for i in range(1, n + 1):
            inner = s[n - i:]
            outer = s[:n - i]
            m = d.G(inner)
            if m.is_zero():
                continue
            obj2 = cat.tgt(inner[0])
            add(col, outer, obj2, m.mul_vec(1 << k))
    cx = GradedComplexGF2(out_gens, MatGF2(N, N, rows))
    return HocolimComplex(cx, gens, index, d, max_len)


# ---------------------------------------------------------------------------
# Freed complexes over the two-object contractible groupoid


def ez2_category() -> FiniteCategory:
    return FiniteCategory(
        ["a", "b"],
        {"ia": ("a", "a"), "ib": ("b", "b"),
         "ab": ("a", "b"), "ba": ("b", "a")},
        {("ba", "ab"): "ia", ("ab", "ba"): "ib"},
        {"a": "ia", "b": "ib"},
    )


def _swap_string(s: tuple) -> tuple:
    return tuple("ab" if f == "ba" else "ba" for f in s)


@dataclass
class FreedComplex:
    hocolim: HocolimComplex
    tau: MatGF2        # involution on the base complex
    action: MatGF2     # the free involution on the freed complex

    @property
    def complex(self) -> GradedComplexGF2:
        return self.hocolim.complex


def freed_EZ2(c: GradedComplexGF2, tau: MatGF2, higher: dict | None = None,
              max_len: int | None = None) -> FreedComplex:
    """The freed complex of (c, tau) over the two-object groupoid.

    The diagram sends both objects to c with identity one-step maps and
    the supplied higher maps; the free involution exchanges the two
    alternating strings of each length while acting by tau on c.
    """
    if tau * tau != MatGF2.identity(c.n):
        raise ValueError("tau must be an involution")
    higher = {tuple(k): v for k, v in (higher or {}).items()}
    degs = [g.degree for g in c.generators]
    width = (max(degs) - min(degs)) if degs else 0
    if max_len is None:
        max_len = width + 4
    maps = {("ab",): MatGF2.identity(c.n), ("ba",): MatGF2.identity(c.n)}
    maps.update(higher)
    # equivariance: G of the swapped string is tau-conjugate
    for s, m in list(maps.items()):
        other = maps.get(_swap_string(s))
        if other is None:
            maps[_swap_string(s)] = tau * m * tau
        elif other != tau * m * tau:
            raise ValueError(f"equivariance fails on {s}")
    d = CoherentDiagram(ez2_category(), {"a": c, "b": c}, maps)
    bad = validate_coherent(d, max_len=min(max_len, 4))
    if bad:
        raise ValueError("; ".join(bad))
    h = hocolim(d, max_len)
    N = h.complex.n
    arows = [0] * N
    for col, (s, o, k) in enumerate(h.gens):
        o2 = "b" if o == "a" else "a"
        s2 = _swap_string(s)
        tv = tau.mul_vec(1 << k)
        i = tv
        while i:
            low = i & -i
            arows[h.index[(s2, o2, low.bit_length() - 1)]] |= 1 << col
            i ^= low
    action = MatGF2(N, N, arows)
    if action * h.complex.boundary != h.complex.boundary * action:
        raise ValueError("the freed action is not a chain map")
    return FreedComplex(h, tau, action)


# ---------------------------------------------------------------------------
# Freed complexes over the contractible groupoid of a finite group


@dataclass
class FreedK:
    hocolim: HocolimComplex
    group_action: dict     # group element index -> MatGF2 on the freed complex
    collapse: ChainMap     # quasi-isomorphism onto the base complex

    @property
    def complex(self) -> GradedComplexGF2:
        return self.hocolim.complex


def freed_EK(action, max_len: int | None = None) -> FreedK:
    """The freed complex of a strict group action (GroupActionData).

    Objects are group elements with unique morphisms; the one-step map
    over g -> h is the action of h g^{-1}.  The group acts freely by
    relabeling objects; the collapse sends (; x at g) to g^{-1} x and
    kills longer strings.
    """
    G = action.group
    c = action.complex
    degs = [g.degree for g in c.generators]
    width = (max(degs) - min(degs)) if degs else 0
    if max_len is None:
        max_len = width + 3
    names = [f"e{g}" for g in range(G.size)]
    morphs = {}
    comps = {}
    idents = {}
    for g in range(G.size):
        for h in range(G.size):
            morphs[f"m{g}_{h}"] = (names[g], names[h])
            if g == h:
                idents[names[g]] = f"m{g}_{g}"
    for g in range(G.size):
        for h in range(G.size):
            for k in range(G.size):
                if g != h and h != k:
                    comps[(f"m{h}_{k}", f"m{g}_{h}")] = f"m{g}_{k}"
    cat = FiniteCategory(names, morphs, comps, idents)
    complexes = {names[g]: c for g in range(G.size)}
    maps = {}
    for g in range(G.size):
        for h in range(G.size):
            if g != h:
                maps[(f"m{g}_{h}",)] = G.element_action(
                    G.mul(h, G.inv(g)), action.mats)
    d = CoherentDiagram(cat, complexes, maps)
    h = hocolim(d, max_len)
    N = h.complex.n

    def relabel(obj: str, k: int) -> str:
        g = int(obj[1:])
        return names[G.mul(g, G.inv(k))]

    group_action = {}
    for k in range(G.size):
        arows = [0] * N
        for col, (s, o, gi) in enumerate(h.gens):
            s2 = tuple(f"m{G.mul(int(f.split('_')[0][1:]), G.inv(k))}_"
                       f"{G.mul(int(f.split('_')[1]), G.inv(k))}"
                       for f in s)
            o2 = relabel(o, k)
            arows[h.index[(s2, o2, gi)]] |= 1 << col
        group_action[k] = MatGF2(N, N, arows)
    crows = [0] * c.n
    for col, (s, o, gi) in enumerate(h.gens):
        if s:
            continue
        g = int(o[1:])
        v = G.element_action(G.inv(g), action.mats).mul_vec(1 << gi)
        for i in range(c.n):
            if (v >> i) & 1:
                crows[i] |= 1 << col
    collapse = ChainMap(h.complex, c, MatGF2(c.n, N, crows))
    if not collapse.is_chain_map():
        raise ValueError("collapse is not a chain map")
    return FreedK(h, group_action, collapse)


# ---------------------------------------------------------------------------
# The square-with-terminal category of the worked mapping-cone example


def square_plus_category() -> FiniteCategory:
    objects = ["c11", "c01", "c10", "c00", "pt"]
    morphs = {
        "f1": ("c11", "c01"), "f2": ("c01", "c00"),
        "f3": ("c11", "c10"), "f4": ("c10", "c00"),
        "f0": ("c11", "c00"),
        "f5": ("c11", "pt"), "f6": ("c01", "pt"), "f7": ("c10", "pt"),
    }
    idents = {o: f"id_{o}" for o in objects}
    for o in objects:
        morphs[f"id_{o}"] = (o, o)
    comps = {
        ("f2", "f1"): "f0", ("f4", "f3"): "f0",
        ("f6", "f1"): "f5", ("f7", "f3"): "f5",
    }
    return FiniteCategory(objects, morphs, comps, idents)
