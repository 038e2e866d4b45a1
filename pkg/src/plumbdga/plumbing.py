"""Plumbing graphs and their primary-generator and preprojective presentations.

Generator names (edge indices are 1-based positions in the tree-first edge
order, vertices are 1-based):

    t{v}, tau{v}                  per vertex
    alpha{v},{i}, beta{v},{i}     per vertex, i <= genus
    c{a}, c{a}*                   per edge a, c{a} goes from s(a) to t(a)
    z{a}, zeta{a}                 per non-tree edge a

The unreduced genus model replaces ``alpha``/``beta`` by ``z{v},{i}``
(``i <= 2g``) together with ``xi{v},{j}``, ``x{v},{j}`` (``j <= 4g``).
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .algebra import QQ, Alphabet, Element, Generator
from .dga import GeneratorMap, Presentation, check_d_squared, check_grading, check_homomorphism, check_round_trip
from .report import Report


class GraphError(ValueError):
    pass


class EdgeOrderWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PlumbingGraph:
    """Vertices ``1..vertices``; ``tree`` holds 0-based positions in ``edges``."""

    vertices: int
    edges: Tuple[Tuple[int, int], ...] = ()
    tree: FrozenSet[int] = frozenset()
    genus: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "tree", frozenset(self.tree))
        genus = tuple(self.genus) if self.genus else (0,) * self.vertices
        object.__setattr__(self, "genus", genus)

    @property
    def vertex_ids(self) -> range:
        return range(1, self.vertices + 1)

    def is_tree_edge(self, index: int) -> bool:
        return index in self.tree

    def nontree(self) -> List[int]:
        return [a for a in range(len(self.edges)) if a not in self.tree]

    def edge_number(self, index: int) -> int:
        return index + 1

    def tree_first(self) -> bool:
        return all(a < len(self.tree) for a in self.tree)

    def reordered(self) -> "PlumbingGraph":
        """Stable reorder putting tree edges ahead of the others."""
        order = sorted(range(len(self.edges)), key=lambda a: a not in self.tree)
        edges = tuple(self.edges[a] for a in order)
        return PlumbingGraph(self.vertices, edges, frozenset(range(len(self.tree))), self.genus)


def validate_graph(g: PlumbingGraph, reorder: bool = True) -> Tuple[PlumbingGraph, Report, List[str]]:
    """Connectivity and spanning-tree checks; optionally reorder edges tree-first.

    Returns ``(graph, report, warnings)``.  Raises :class:`GraphError` for
    graphs that cannot be used at all.
    """
    report = Report("graph validation")
    warns: List[str] = []
    if g.vertices < 1:
        raise GraphError("a plumbing graph needs at least one vertex")
    if len(g.genus) != g.vertices:
        raise GraphError(f"genus vector has length {len(g.genus)}, expected {g.vertices}")
    if any(x < 0 for x in g.genus):
        raise GraphError("genus values must be non-negative")
    for a, (s, t) in enumerate(g.edges):
        if not (1 <= s <= g.vertices and 1 <= t <= g.vertices):
            raise GraphError(f"edge {a + 1} = ({s}, {t}) uses an unknown vertex")
    for a in g.tree:
        if not 0 <= a < len(g.edges):
            raise GraphError(f"tree refers to missing edge position {a}")

    full = nx.MultiGraph()
    full.add_nodes_from(g.vertex_ids)
    full.add_edges_from(g.edges)
    connected = nx.is_connected(full)
    report.add("connected", connected)
    if not connected:
        raise GraphError("graph is not connected")

    tree = nx.Graph()
    tree.add_nodes_from(g.vertex_ids)
    tree.add_edges_from(g.edges[a] for a in g.tree)
    spanning = (len(g.tree) == g.vertices - 1 and tree.number_of_edges() == len(g.tree)
                and nx.is_tree(tree))
    report.add("spanning tree", spanning)
    if not spanning:
        raise GraphError("the tree edges do not form a spanning tree")

    if not g.tree_first():
        if not reorder:
            report.add("tree edges first", False)
            return g, report, warns
        warns.append("edges reordered so that tree edges come first")
        g = g.reordered()
    report.add("tree edges first", True)
    return g, report, warns


def _checked(g: PlumbingGraph) -> PlumbingGraph:
    g2, _, warns = validate_graph(g)
    for w in warns:
        _warnings.warn(w, EdgeOrderWarning, stacklevel=3)
    return g2


# ---------------------------------------------------------------------------
# names
# ---------------------------------------------------------------------------

def t_name(v): return f"t{v}"
def tau_name(v): return f"tau{v}"
def c_name(a): return f"c{a}"
def cstar_name(a): return f"c{a}*"
def z_name(a): return f"z{a}"
def zeta_name(a): return f"zeta{a}"
def alpha_name(v, i): return f"alpha{v},{i}"
def beta_name(v, i): return f"beta{v},{i}"
def gz_name(v, i): return f"z{v},{i}"
def xi_name(v, j): return f"xi{v},{j}"
def x_name(v, j): return f"x{v},{j}"


def _generators(g: PlumbingGraph, raw_genus: bool) -> List[Generator]:
    gens: List[Generator] = []
    for v in g.vertex_ids:
        gens.append(Generator(t_name(v), v, v, 0, True))
        gens.append(Generator(tau_name(v), v, v, -1))
        gv = g.genus[v - 1]
        if raw_genus:
            gens += [Generator(gz_name(v, i), v, v, 0, True) for i in range(1, 2 * gv + 1)]
            for j in range(1, 4 * gv + 1):
                gens.append(Generator(xi_name(v, j), v, v, -1))
                gens.append(Generator(x_name(v, j), v, v, 0))
        else:
            for i in range(1, gv + 1):
                gens.append(Generator(alpha_name(v, i), v, v, 0, True))
                gens.append(Generator(beta_name(v, i), v, v, 0, True))
    for idx, (s, t) in enumerate(g.edges):
        a = g.edge_number(idx)
        gens.append(Generator(c_name(a), s, t, 0))
        gens.append(Generator(cstar_name(a), t, s, 0))
    for idx in g.nontree():
        a = g.edge_number(idx)
        s = g.edges[idx][0]
        gens.append(Generator(z_name(a), s, s, 0, True))
        gens.append(Generator(zeta_name(a), s, s, -1))
    return gens


def _prod(alph: Alphabet, v, factors: Sequence[Element]) -> Element:
    out = Element.idempotent(alph, v)
    for f in factors:
        out = out * f
    return out


def _in_factor(alph, v, a) -> Element:
    # e_v + c_a c_a^*, for t(a) = v
    return Element.idempotent(alph, v) + Element.word(alph, c_name(a), cstar_name(a))


def _out_factor(alph, v, a) -> Element:
    # e_v + c_a^* c_a, for s(a) = v
    return Element.idempotent(alph, v) + Element.word(alph, cstar_name(a), c_name(a))


def incoming_product(g: PlumbingGraph, alph: Alphabet, v) -> Element:
    return _prod(alph, v, [_in_factor(alph, v, g.edge_number(i))
                           for i, (_, t) in enumerate(g.edges) if t == v])


def outgoing_tree_product(g: PlumbingGraph, alph: Alphabet, v) -> Element:
    return _prod(alph, v, [_out_factor(alph, v, g.edge_number(i))
                           for i, (s, _) in enumerate(g.edges) if s == v and g.is_tree_edge(i)])


def outgoing_nontree(g: PlumbingGraph, v) -> List[int]:
    """Edge numbers of non-tree edges leaving ``v``, in edge order."""
    return [g.edge_number(i) for i, (s, _) in enumerate(g.edges) if s == v and not g.is_tree_edge(i)]


def commutator_product(alph: Alphabet, v, genus: int) -> Element:
    out = Element.idempotent(alph, v)
    for i in range(1, genus + 1):
        a, b = alpha_name(v, i), beta_name(v, i)
        out = out * Element.word(alph, a, b, alph.inverse_of(a), alph.inverse_of(b))
    return out


def ce_tail(g: PlumbingGraph, alph: Alphabet, v) -> Element:
    """``prod z_a (a not in T) . prod (e + c_a^* c_a) (a in T)`` over arrows leaving ``v``."""
    zs = _prod(alph, v, [Element.word(alph, z_name(a)) for a in outgoing_nontree(g, v)])
    return zs * outgoing_tree_product(g, alph, v)


def _zeta_diff(g: PlumbingGraph, alph: Alphabet) -> Dict[str, Element]:
    out = {}
    for idx in g.nontree():
        a = g.edge_number(idx)
        s = g.edges[idx][0]
        out[zeta_name(a)] = _out_factor(alph, s, a) - Element.word(alph, z_name(a))
    return out


def _closed_edges(g: PlumbingGraph, alph: Alphabet) -> Dict[str, Element]:
    out = {}
    for idx in range(len(g.edges)):
        a = g.edge_number(idx)
        out[c_name(a)] = Element.zero(alph)
        out[cstar_name(a)] = Element.zero(alph)
    return out


def build_ce(g: PlumbingGraph, field=QQ, raw_genus: bool = False) -> Presentation:
    """The primary-generator model of the plumbing.

    With ``raw_genus`` each positive-genus vertex carries the unreduced
    ``xi``/``x``/``z`` generators instead of ``alpha``/``beta``.
    """
    g = _checked(g)
    alph = Alphabet(list(g.vertex_ids), _generators(g, raw_genus), field)
    diff: Dict[str, Element] = {}
    diff.update(_closed_edges(g, alph))
    diff.update(_zeta_diff(g, alph))
    for v in g.vertex_ids:
        gv = g.genus[v - 1]
        tail = ce_tail(g, alph, v)
        if raw_genus and gv:
            # from genus.py; local import avoids a cycle
            from .genus import raw_genus_diff
            local, middle = raw_genus_diff(alph, v, gv)
            diff.update(local)
        else:
            middle = commutator_product(alph, v, gv)
        diff[tau_name(v)] = (incoming_product(g, alph, v)
                             - Element.word(alph, t_name(v)) * middle * tail)
    name = "CE raw" if raw_genus else "CE"
    return Presentation(alph, diff, name)


def build_mpp(g: PlumbingGraph, field=QQ, source_order: str = "nontree-first") -> Presentation:
    """The derived multiplicative preprojective algebra.

    ``source_order`` fixes the order of the ``(e + c^* c)`` factors over
    arrows leaving a vertex: ``"nontree-first"`` (non-tree arrows, then tree
    arrows, each in edge order; the order for which the map from the
    primary model is an isomorphism) or ``"global"`` (plain edge order).
    """
    if source_order not in ("nontree-first", "global"):
        raise ValueError(f"unknown source order {source_order!r}")
    g = _checked(g)
    alph = Alphabet(list(g.vertex_ids), _generators(g, False), field)
    diff: Dict[str, Element] = {}
    diff.update(_closed_edges(g, alph))
    diff.update(_zeta_diff(g, alph))
    for v in g.vertex_ids:
        out_edges = [i for i, (s, _) in enumerate(g.edges) if s == v]
        if source_order == "nontree-first":
            out_edges.sort(key=lambda i: g.is_tree_edge(i))
        tail = _prod(alph, v, [_out_factor(alph, v, g.edge_number(i)) for i in out_edges])
        diff[tau_name(v)] = (incoming_product(g, alph, v)
                             - Element.word(alph, t_name(v))
                             * commutator_product(alph, v, g.genus[v - 1]) * tail)
    return Presentation(alph, diff, "MPP")


# ---------------------------------------------------------------------------
# the isomorphism between the two models
# ---------------------------------------------------------------------------

def phi_correction(g: PlumbingGraph, alph: Alphabet, v) -> Element:
    """``t . C . (sum_i z_{a_1}..z_{a_{i-1}} zeta_{a_i} E_{a_{i+1}}..E_{a_n}) . prod_T E``.

    ``E_a = e + c_a^* c_a`` and ``a_1..a_n`` are the non-tree arrows leaving ``v``.
    """
    arrows = outgoing_nontree(g, v)
    total = Element.zero(alph)
    for i, a in enumerate(arrows):
        term = _prod(alph, v, [Element.word(alph, z_name(b)) for b in arrows[:i]])
        term = term * Element.word(alph, zeta_name(a))
        term = term * _prod(alph, v, [_out_factor(alph, v, b) for b in arrows[i + 1:]])
        total = total + term
    if total.is_zero():
        return total
    return (Element.word(alph, t_name(v)) * commutator_product(alph, v, g.genus[v - 1])
            * total * outgoing_tree_product(g, alph, v))


def build_phi(g: PlumbingGraph, field=QQ, inverse: bool = False,
              correction_sign: int = 1) -> GeneratorMap:
    """DG-isomorphism from the primary model to the preprojective model.

    Identity except on ``tau_v``, which picks up the correction above.
    ``inverse=True`` gives the map in the other direction (correction
    subtracted); ``correction_sign`` exists to build deliberately wrong maps.
    """
    g = _checked(g)
    P, L = build_ce(g, field), build_mpp(g, field)
    src, tgt = (L, P) if inverse else (P, L)
    sign = -correction_sign if inverse else correction_sign
    images = {}
    for v in g.vertex_ids:
        corr = phi_correction(g, tgt.alphabet, v)
        images[tau_name(v)] = Element.word(tgt.alphabet, tau_name(v)) + corr.scale(sign)
    return GeneratorMap(src, tgt, images, name="phi^-1" if inverse else "phi")


def verify_phi(g: PlumbingGraph, field=QQ) -> Report:
    phi = build_phi(g, field)
    psi = build_phi(g, field, inverse=True)
    report = Report("phi")
    report.extend(check_homomorphism(phi), "phi: ")
    report.extend(check_homomorphism(psi), "phi^-1: ")
    report.extend(check_round_trip(phi, psi), "phi^-1 . phi: ")
    report.extend(check_round_trip(psi, phi), "phi . phi^-1: ")
    return report


# ---------------------------------------------------------------------------
# augmentation, specialization, truncation
# ---------------------------------------------------------------------------

def _base_ring(p: Presentation) -> Presentation:
    return Presentation(Alphabet(p.labels, (), p.field), {}, "k")


def augmentation_map(p: Presentation) -> GeneratorMap:
    """``t, z, alpha, beta -> e``; every free generator -> 0."""
    base = _base_ring(p)
    images = {}
    for gen in p.generators:
        if gen.invertible:
            images[gen.name] = Element.idempotent(base.alphabet, gen.source)
        else:
            images[gen.name] = Element.zero(base.alphabet)
    return GeneratorMap(p, base, images, name="augmentation")


def check_augmentation(p: Presentation) -> Report:
    eps = augmentation_map(p)
    report = Report(f"augmentation on {p.name}")
    for n in p.free_generators():
        val = eps(p.differential(n))
        report.add(n, val.is_zero(), None if val.is_zero() else str(val))
    return report


def augmentation(g: PlumbingGraph, field=QQ) -> Report:
    """The canonical augmentation kills the differential of both models."""
    g = _checked(g)
    report = Report("augmentation")
    report.extend(check_augmentation(build_ce(g, field)), "CE: ")
    report.extend(check_augmentation(build_mpp(g, field)), "MPP: ")
    return report


def specialize_t(p: Presentation, values) -> Presentation:
    """Replace each ``t_v`` by ``values[v] * e_v`` (a mapping, or one value for all vertices)."""
    tnames = {gen.name: gen.source for gen in p.generators
              if gen.invertible and gen.name.startswith("t") and gen.name[1:].isdigit()}
    if not tnames:
        return p
    field = p.field

    def value(v):
        raw = values.get(v, 1) if isinstance(values, Mapping) else values
        c = field(raw)
        if not c:
            raise ValueError(f"t{v} cannot be specialized to zero")
        return c

    gens = [gen for gen in p.generators if gen.name not in tnames]
    alph = Alphabet(p.labels, gens, field)
    shell = Presentation(alph, {}, p.name)
    images = {n: Element.idempotent(alph, v, value(v)) for n, v in tnames.items()}
    sub = GeneratorMap(p, shell, images)
    table = {n: sub(p.differential(n)) for n in p.free_generators()}
    return Presentation(alph, table, f"{p.name}|t")


def ginzburg_truncation(g: PlumbingGraph, field=QQ) -> Presentation:
    """Keep only the length-two part of each ``d tau_v`` (tree, genus zero, ``t = e``)."""
    g = _checked(g)
    if g.nontree():
        raise GraphError("the truncation is defined for trees only")
    if any(g.genus):
        raise GraphError("the truncation needs all genera zero")
    p = specialize_t(build_ce(g, field), 1)
    table = dict(p.diff)
    for v in g.vertex_ids:
        table[tau_name(v)] = p.differential(tau_name(v)).filter_length(2)
    return Presentation(p.alphabet, table, "Ginzburg")


def verify_graph(g: PlumbingGraph, field=QQ) -> Report:
    """d^2, grading, phi and augmentation suites for one graph."""
    g = _checked(g)
    report = Report("verify")
    P, L = build_ce(g, field), build_mpp(g, field)
    report.extend(check_d_squared(P), "CE d^2: ")
    report.extend(check_grading(P), "CE grading: ")
    report.extend(check_d_squared(L), "MPP d^2: ")
    report.extend(check_grading(L), "MPP grading: ")
    report.extend(verify_phi(g, field))
    report.extend(augmentation(g, field))
    return report
