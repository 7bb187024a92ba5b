"""Built-in example diagrams.

Small bridge presentations, a multi-pointed sphere diagram with a
marked axis pair, and two larger Heegaard diagrams used by the test
suite and the command line `fixtures` command.
"""

from . import _cmap, covers, heegaard

__all__ = [
    "bridge_unknot", "bridge_trefoil", "bridge_hopf", "bridge_unlink2",
    "wound_unknot", "wound_trefoil", "petal_diagram", "petal_cut",
    "torus37_diagram", "torus37_cut", "pretzel_diagram",
]


def bridge_unknot() -> covers.BridgeDiagram:
    """Two-bridge unknot; its cover is a one-generator torus diagram."""
    return covers.BridgeDiagram(
        a_arcs=[["p1", "p2"], ["p3", "p4"]],
        b_arcs=[["p2", "p3"], ["p4", "p1"]],
        signs={},
        based_pair=(1, 0),
    )


def bridge_trefoil() -> covers.BridgeDiagram:
    """Two-bridge trefoil; the cover presents the lens space L(3,1)."""
    return covers.BridgeDiagram(
        a_arcs=[["b1", "u", "v", "b2"], ["b3", "s", "r", "b4"]],
        b_arcs=[["b2", "r", "u", "b3"], ["b1", "s", "v", "b4"]],
        signs={"u": -1, "v": 1, "r": -1, "s": 1},
        based_pair=(1, 1),
    )


def bridge_hopf() -> covers.BridgeDiagram:
    """Hopf link; two components, so the cover keeps two fixed points."""
    return covers.BridgeDiagram(
        a_arcs=[["b1", "c2", "b2"], ["b3", "c1", "b4"]],
        b_arcs=[["b2", "c1", "b1"], ["b3", "c2", "b4"]],
        signs={"c1": -1, "c2": 1},
        based_pair=(1, 1),
    )


def bridge_unlink2() -> covers.BridgeDiagram:
    """Two-component unlink, drawn with one finger-move crossing pair."""
    return covers.BridgeDiagram(
        a_arcs=[["q1", "q2"], ["q3", "c1", "c2", "q4"]],
        b_arcs=[["q2", "c2", "c1", "q1"], ["q3", "q4"]],
        signs={"c1": 1, "c2": -1},
        based_pair=(1, 1),
    )


def wound_unknot(n: int = 2) -> covers.BridgeDiagram:
    """Unknot with n curls at the surviving shared endpoint."""
    return covers.wind(bridge_unknot(), {"p1": n})


def wound_trefoil(n: int = 3) -> covers.BridgeDiagram:
    """Trefoil with n curls; the -1 curl direction keeps the cover nice."""
    return covers.wind(bridge_trefoil(), {"b2": n}, sign=-1)


def _trace_regions(alpha, beta, signs, flags):
    """Trace an arrangement and flag basepoint faces by a boundary token."""
    faces = _cmap.trace_faces(alpha, beta, signs)
    words = [[(c, _cmap.arc_token(*d)) for c, d in f] for f in faces]
    regions = []
    for w in words:
        toks = {t for _, t in w}
        z = any(t in toks for t, kind in flags.items() if kind == "z")
        wf = any(t in toks for t, kind in flags.items() if kind == "w")
        regions.append(heegaard.Region(boundaries=[w], z=z, w=wf))
    hit = sum(1 for t in flags
              for w in regions if any(tok == t for _, tok in w.boundaries[0]))
    if hit != len(flags):
        raise ValueError("a basepoint token missed every face")
    points = sorted(signs)
    return heegaard.HeegaardDiagramC(points=points, alpha=alpha, beta=beta,
                                     regions=regions)


def petal_diagram() -> heegaard.HeegaardDiagramC:
    """One alpha and one beta circle crossing four times on a sphere.

    Four bigon petals around a central square: the north/south petals
    carry the axis z/w pair and the east/west petals a second z/w pair,
    so the diagram presents an unknot-with-axis quotient.
    """
    alpha = [["p1", "p2", "p3", "p4"]]
    beta = [["p1", "p2", "p3", "p4"]]
    signs = {"p1": 1, "p2": -1, "p3": 1, "p4": -1}
    flags = {"a0.0": "z",   # north petal, axis z
             "a0.2": "w",   # south petal, axis w (token -a0.2 side)
             "b0.1": "z",   # east petal
             "b0.3": "w"}   # west petal
    # the south petal is the bigon containing a0.2 forward; check below
    d = _trace_regions(alpha, beta, signs, flags)
    d._require_valid()
    return d


def petal_cut() -> list[str]:
    """Arc path from the axis z petal through the center to the w petal."""
    return ["a0.0", "a0.2"]


# --- (3,7) torus knot on a one-holed torus -----------------------------------

# beta runs through the 33 crossings bottom to top; alpha visits them in
# this order.  Crossings where alpha runs the same way as at the start
# get sign +1, the direction flipping inside each nested turn.
_T37_WALK = [1, 13, 25, 28, 16, 4, 11, 23, 30, 18, 6, 9, 21, 32, 2, 14, 26,
             27, 15, 3, 12, 24, 29, 17, 5, 10, 22, 31, 19, 7, 8, 20, 33]
_T37_EAST = {1, 13, 25, 11, 23, 9, 21, 2, 14, 26, 12, 24, 10, 22, 8, 20}


def torus37_diagram() -> heegaard.HeegaardDiagramC:
    """Genus-1 doubly pointed diagram of the (3,7) torus knot.

    The z region is the innermost bigon of the nested turns, the w
    region the unique large face; every other face is a bigon or a
    rectangle, so the diagram is doubly nice.
    """
    alpha = [[f"v{k}" for k in _T37_WALK]]
    beta = [[f"v{k}" for k in range(1, 34)]]
    signs = {f"v{k}": (1 if k in _T37_EAST else -1) for k in range(1, 34)}
    faces = _cmap.trace_faces(alpha, beta, signs)
    words = [[(c, _cmap.arc_token(*dt)) for c, dt in f] for f in faces]
    big = max(range(len(words)), key=lambda i: len(words[i]))
    zi = next(i for i, w in enumerate(words)
              if len(w) == 2 and {t.lstrip("-") for _, t in w}
              == {"a0.16", "b0.25"})
    regions = [heegaard.Region(boundaries=[w], z=(i == zi), w=(i == big))
               for i, w in enumerate(words)]
    d = heegaard.HeegaardDiagramC(points=sorted(signs), alpha=alpha,
                                  beta=beta, regions=regions)
    d._require_valid()
    return d


def torus37_cut() -> list[str]:
    """Arc path from the z bigon out through the nest, then across all
    the long strands to the w region."""
    nests = ["a0.16", "a0.2", "a0.21", "a0.7", "a0.26", "a0.12", "a0.31"]
    strands = []
    for k in range(13, 32):
        t = next(t for t in range(33)
                 if {_T37_WALK[t], _T37_WALK[(t + 1) % 33]} == {k - 12, k})
        strands.append(f"a0.{t}")
    return nests + strands


# --- genus-4 pretzel surgery diagram ------------------------------------------

# 17 intersection points named a..q.  The curve data and the symmetry
# below determine the crossing signs up to ten free choices; exactly one
# choice embeds on a genus-4 surface with the right face census and
# polygon counts, and it is hardcoded here (see tests for the search).
_PRETZEL_ALPHA = [list("hifg"), list("jmlk"), list("onqp"), list("eabcd")]
_PRETZEL_BETA = [list("johe"), list("fna"), list("lpd"), list("mgqkibc")]
_PRETZEL_SIGNS = {"a": -1, "b": -1, "c": -1, "d": 1, "e": -1, "f": 1,
                  "g": 1, "h": 1, "i": -1, "j": -1, "k": -1, "l": 1,
                  "m": 1, "n": 1, "o": 1, "p": -1, "q": 1}
PRETZEL_SYMMETRY = {"a": "d", "d": "a", "b": "c", "c": "b", "e": "e",
                    "o": "o", "q": "q", "f": "l", "l": "f", "g": "k",
                    "k": "g", "h": "j", "j": "h", "i": "m", "m": "i",
                    "n": "p", "p": "n"}


def pretzel_diagram() -> heegaard.HeegaardDiagramC:
    """Genus-4 singly pointed diagram with a symmetry, 25 generators.

    The basepoint sits in the unique twelve-cornered face, which the
    symmetry preserves; every generator grading is one of four adjacent
    levels with census 4/7/8/6.
    """
    faces = _cmap.trace_faces(_PRETZEL_ALPHA, _PRETZEL_BETA, _PRETZEL_SIGNS)
    words = [[(c, _cmap.arc_token(*dt)) for c, dt in f] for f in faces]
    big = max(range(len(words)), key=lambda i: len(words[i]))
    regions = [heegaard.Region(boundaries=[w], z=(i == big), w=(i == big))
               for i, w in enumerate(words)]
    d = heegaard.HeegaardDiagramC(points=sorted(_PRETZEL_SIGNS),
                                  alpha=_PRETZEL_ALPHA, beta=_PRETZEL_BETA,
                                  regions=regions)
    return heegaard.attach_involution(d, PRETZEL_SYMMETRY)
