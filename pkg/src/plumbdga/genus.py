"""The unreduced genus model of a vertex and its reduction to commutators.

At a vertex ``v`` of genus ``g`` the unreduced model has invertible
``z_1..z_{2g}`` and pairs ``(xi_j, x_j)``, ``j = 1..4g``.  The pairs are
cancelled in groups of four, top group first; what survives in ``d tau_v``
is a product of commutators of the ``z``'s, which is then renamed to the
surface-group generators ``alpha``, ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .algebra import QQ, Alphabet, Element
from .dga import GeneratorMap, Presentation, invert_monomial
from .pipeline import Pipeline, PipelineError
from .plumbing import (PlumbingGraph, _checked, alpha_name, beta_name, build_ce, ce_tail, gz_name,
                       t_name, tau_name, x_name, xi_name)
from .report import Report


def raw_genus_diff(alph: Alphabet, v, g: int) -> Tuple[Dict[str, Element], Element]:
    """Differentials of ``xi``/``x`` at ``v`` and the factor replacing the commutators in ``d tau``.

    For ``g = 1`` that factor is ``x_1 x_4``; otherwise it is ``x_1``.
    """
    if g < 1:
        raise ValueError("genus must be positive")
    e = Element.idempotent(alph, v)

    def w(*names):
        return Element.word(alph, *names)

    z = lambda i: gz_name(v, i)
    x = lambda j: x_name(v, j)
    xi = lambda j: xi_name(v, j)
    diff: Dict[str, Element] = {x(j): Element.zero(alph) for j in range(1, 4 * g + 1)}
    for k in range(1, g):
        diff[xi(4 * k - 3)] = -w(z(2 * k), x(4 * k - 3)) + w(x(4 * k - 2), x(4 * k - 1), x(4 * k))
    for k in range(1, g + 1):
        diff[xi(4 * k - 2)] = w(x(4 * k - 2)) - w(z(2 * k - 1))
        diff[xi(4 * k - 1)] = w(x(4 * k - 1)) - w(z(2 * k))
    for k in range(1, g - 1):
        diff[xi(4 * k)] = e - w(x(4 * k + 1), z(2 * k - 1), x(4 * k))
    diff[xi(4 * g - 3)] = -w(z(2 * g), x(4 * g - 3)) + w(x(4 * g - 2), x(4 * g - 1))
    if g >= 2:
        diff[xi(4 * g - 4)] = e - w(x(4 * g - 3), x(4 * g), z(2 * g - 3), x(4 * g - 4))
    diff[xi(4 * g)] = e - w(z(2 * g - 1), x(4 * g))
    middle = w(x(1), x(4)) if g == 1 else w(x(1))
    return diff, middle


def build_ce_raw_genus(g: int, field=QQ) -> Presentation:
    """Single vertex of genus ``g`` with no edges, unreduced."""
    return build_ce(PlumbingGraph(1, (), frozenset(), (g,)), field, raw_genus=True)


def expected_commutator_product(alph: Alphabet, v, g: int) -> Element:
    """``D_1 D_3 D_5 ... D_4^-1 D_2^-1`` with ``D_k = [z_{2k}^-1, z_{2k-1}]``, ``[a, b] = a b a^-1 b^-1``."""
    z = lambda i: gz_name(v, i)
    inv = alph.inverse_of

    def comm(a, b):
        return Element.word(alph, a, b, inv(a), inv(b))

    out = Element.idempotent(alph, v)
    for k in range(1, g + 1, 2):
        out = out * comm(inv(z(2 * k)), z(2 * k - 1))
    for k in range(g - g % 2, 0, -2):
        out = out * comm(z(2 * k - 1), inv(z(2 * k)))
    return out


def relabel_images(alph: Alphabet, v, g: int) -> Dict[str, Element]:
    """Images of ``z{v},{i}`` in the alpha/beta alphabet."""
    w = lambda n: Element.word(alph, n)
    inv = lambda n: Element.word(alph, alph.inverse_of(n))
    images = {}
    half = (g + 1) // 2
    for i in range(1, half + 1):
        images[gz_name(v, 4 * i - 2)] = inv(alpha_name(v, i))
        images[gz_name(v, 4 * i - 3)] = w(beta_name(v, i))
    for j in range(half + 1, g + 1):
        images[gz_name(v, 4 * g - 4 * j + 3)] = w(alpha_name(v, j))
        images[gz_name(v, 4 * g - 4 * j + 4)] = inv(beta_name(v, j))
    return images


# ---------------------------------------------------------------------------
# the automorphism script
# ---------------------------------------------------------------------------

def _cancelled_table(v, k) -> Dict[str, str]:
    x = lambda j: x_name(v, j)
    xi = lambda j: xi_name(v, j)
    return {
        xi(4 * k): f"- {x(4 * k)}",
        xi(4 * k - 1): x(4 * k - 1),
        xi(4 * k - 2): x(4 * k - 2),
        xi(4 * k - 3): f"- {x(4 * k - 3)}",
    }


def _next(pipe: Pipeline, g_graph: PlumbingGraph, v, k: int):
    """The generator whose differential absorbs group ``k``: its name, left factor and tail."""
    P = pipe.current
    alph = P.alphabet
    if k >= 2:
        return xi_name(v, 4 * k - 4), Element.idempotent(alph, v), \
            Element.word(alph, gz_name(v, 2 * k - 3), x_name(v, 4 * k - 4))
    return tau_name(v), Element.word(alph, t_name(v)), ce_tail(g_graph, alph, v)


def _read_unit(P: Presentation, v, k: int) -> Element:
    """``A`` in ``d xi_{4k} = e - A x_{4k}``."""
    d = P.differential(xi_name(v, 4 * k))
    alph = P.alphabet
    xn = x_name(v, 4 * k)
    body = d - Element.idempotent(alph, v)
    if len(body.terms) != 1:
        raise PipelineError(0, f"unexpected d {xi_name(v, 4 * k)} = {d}")
    (key, c), = body.terms.items()
    names = key[2]
    if c != -1 or not names or names[-1] != xn:
        raise PipelineError(0, f"unexpected d {xi_name(v, 4 * k)} = {d}")
    return Element.word(alph, *names[:-1]) if names[:-1] else Element.idempotent(alph, v)


def _reduce_vertex(pipe: Pipeline, graph: PlumbingGraph, v, g: int) -> None:
    z = lambda i: gz_name(v, i)
    zi = lambda i: gz_name(v, i) + "^-1"
    x = lambda j: x_name(v, j)
    xi = lambda j: xi_name(v, j)

    def W(*names):
        return pipe.current.word(*names)

    def E():
        return pipe.current.e(v)

    # top group
    k = g
    pipe.substitute(x(4 * k), W(zi(2 * k - 1), x(4 * k)) + W(zi(2 * k - 1)))
    pipe.substitute(x(4 * k - 1), W(x(4 * k - 1)) + W(z(2 * k)))
    pipe.substitute(x(4 * k - 2), W(x(4 * k - 2)) + W(z(2 * k - 1)))
    pipe.substitute(xi(4 * k - 3), W(xi(4 * k - 3))
                    + W(xi(4 * k - 2)) * (W(x(4 * k - 1)) + W(z(2 * k)))
                    + W(z(2 * k - 1), xi(4 * k - 1)))
    nxt, left, tail = _next(pipe, graph, v, k)
    pipe.substitute(nxt, W(nxt) + left * W(x(4 * k - 3), zi(2 * k - 1), xi(4 * k)) * tail)
    pipe.substitute(x(4 * k - 3), W(zi(2 * k), x(4 * k - 3)) + W(zi(2 * k), z(2 * k - 1), z(2 * k)))
    nxt, left, tail = _next(pipe, graph, v, k)
    pipe.substitute(nxt, W(nxt) + left * W(zi(2 * k), xi(4 * k - 3), zi(2 * k - 1)) * tail)
    pipe.expect(_cancelled_table(v, k), f"vertex {v} group {k}")
    for j in range(4 * k, 4 * k - 4, -1):
        pipe.destabilize(xi(j), x(j))

    for k in range(g - 1, 0, -1):
        A = _read_unit(pipe.current, v, k)
        Ainv = invert_monomial(A)
        pipe.substitute(x(4 * k), Ainv * W(x(4 * k)) + Ainv)
        pipe.substitute(x(4 * k - 1), W(x(4 * k - 1)) + W(z(2 * k)))
        pipe.substitute(x(4 * k - 2), W(x(4 * k - 2)) + W(z(2 * k - 1)))
        bracket = W(xi(4 * k - 2)) * (W(x(4 * k - 1)) + W(z(2 * k))) + W(z(2 * k - 1), xi(4 * k - 1))
        pipe.substitute(xi(4 * k - 3), W(xi(4 * k - 3))
                        + bracket * Ainv * (W(x(4 * k)) + E())
                        - W(z(2 * k - 1), z(2 * k)) * Ainv * W(xi(4 * k)))
        pipe.substitute(x(4 * k - 3), W(zi(2 * k), x(4 * k - 3))
                        + W(zi(2 * k), z(2 * k - 1), z(2 * k)) * Ainv)
        nxt, left, tail = _next(pipe, graph, v, k)
        pipe.substitute(nxt, W(nxt) + left * W(zi(2 * k), xi(4 * k - 3)) * tail)
        pipe.expect(_cancelled_table(v, k), f"vertex {v} group {k}")
        for j in range(4 * k, 4 * k - 4, -1):
            pipe.destabilize(xi(j), x(j))


@dataclass
class GenusResult:
    graph: PlumbingGraph
    pipeline: Pipeline
    relabeled: Presentation
    report: Report

    @property
    def reduced(self) -> Presentation:
        return self.pipeline.current

    @property
    def log(self):
        return self.pipeline.log

    @property
    def ok(self) -> bool:
        return self.report.ok


def reduce_graph_genus(graph: PlumbingGraph, field=QQ, check_each_step: bool = True) -> GenusResult:
    """Cancel every ``(xi, x)`` pair of the unreduced model and rename to alpha/beta.

    The report compares the surviving factor of each ``d tau_v`` with
    :func:`expected_commutator_product` and the renamed presentation with
    :func:`~plumbdga.plumbing.build_ce`.
    """
    graph = _checked(graph)
    raw = build_ce(graph, field, raw_genus=True)
    pipe = Pipeline(raw, check_each_step)
    for v in graph.vertex_ids:
        gv = graph.genus[v - 1]
        if gv:
            _reduce_vertex(pipe, graph, v, gv)
    P = pipe.current
    alph = P.alphabet
    report = Report(f"genus reduction {graph.genus}")
    target = build_ce(graph, field)
    images = {}
    for v in graph.vertex_ids:
        gv = graph.genus[v - 1]
        tn = tau_name(v)
        if gv:
            pc = expected_commutator_product(alph, v, gv)
            want = (P.differential(tn) - _with_middle(graph, P, v, pc))
            report.add(f"vertex {v}: d {tn} carries the commutator product", want.is_zero(),
                       None if want.is_zero() else str(want))
            images.update(relabel_images(target.alphabet, v, gv))
    relabel = GeneratorMap(P, target, images, name="relabel")
    table = {n: relabel(P.differential(n)) for n in P.free_generators()}
    relabeled = Presentation(target.alphabet, table, "CE reduced")
    report.add("relabeled presentation equals the reduced model", relabeled == target)
    report.add("every step keeps d^2 = 0", all(s.d_squared for s in pipe.log))
    return GenusResult(graph, pipe, relabeled, report)


def _with_middle(graph: PlumbingGraph, P: Presentation, v, middle: Element) -> Element:
    from .plumbing import incoming_product
    alph = P.alphabet
    return incoming_product(graph, alph, v) - Element.word(alph, t_name(v)) * middle * ce_tail(graph, alph, v)


def genus_reduction(g: int, field=QQ, check_each_step: bool = True) -> GenusResult:
    """Reduction for a single vertex of genus ``g`` with no edges."""
    return reduce_graph_genus(PlumbingGraph(1, (), frozenset(), (g,)), field, check_each_step)
