"""Matrix representations of the multiplicative preprojective relations.

A representation assigns a ``d_{t(a)} x d_{s(a)}`` matrix to ``c{a}``, a
``d_{s(a)} x d_{t(a)}`` matrix to ``c{a}*``, invertible square matrices to
``z{a}`` (non-tree ``a``) and to ``alpha{v},{i}``, ``beta{v},{i}``, and a
nonzero scalar to each ``t_v``.  The relations are

    z_a = 1 + c_a^* c_a                                  (a not in T)
    prod_{t(a)=v} (1 + c_a c_a^*) = t_v prod [alpha, beta] prod_{s(a)=v} (1 + c_a^* c_a)

with products in edge order, outgoing non-tree arrows before tree arrows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import GF, QQ as SYMPY_QQ
from sympy.polys.matrices import DomainMatrix

from .plumbing import (PlumbingGraph, _checked, alpha_name, beta_name, c_name, cstar_name,
                       outgoing_nontree, z_name)
from .report import Report


class RepresentationError(ValueError):
    pass


def _domain(prime: Optional[int]):
    return SYMPY_QQ if prime is None else GF(prime)


def _t_value(t, v):
    if isinstance(t, Mapping):
        return t.get(v, 1)
    if isinstance(t, (list, tuple)):
        return t[v - 1]
    return t


@dataclass
class MatrixAssignment:
    """Nested-list matrices keyed by generator name; ``prime=None`` means rationals.

    ``z{a}`` may be omitted, in which case it is taken to be ``1 + c^* c``.
    """

    dims: Dict[int, int]
    matrices: Dict[str, Sequence[Sequence]] = field(default_factory=dict)
    t: object = 1
    prime: Optional[int] = None

    def domain(self):
        return _domain(self.prime)

    def matrix(self, name: str, shape: Tuple[int, int]) -> Optional[DomainMatrix]:
        rows = self.matrices.get(name)
        if rows is None:
            return None
        K = self.domain()
        try:
            data = [[K.convert(Fraction(x) if self.prime is None else int(x)) for x in row]
                    for row in rows]
        except (TypeError, ValueError) as exc:
            raise RepresentationError(f"bad entry in {name}: {exc}") from exc
        got = (len(data), len(data[0]) if data else shape[1])
        if got != shape or any(len(r) != shape[1] for r in data):
            raise RepresentationError(f"{name} has shape {got}, expected {shape}")
        return DomainMatrix(data, shape, K)


def _eye(n, K):
    return DomainMatrix.eye(n, K)


def _inverse(m: DomainMatrix, name: str) -> DomainMatrix:
    if m.shape[0] and m.det() == m.domain.zero:
        raise RepresentationError(f"{name} is not invertible")
    return m.inv() if m.shape[0] else m


def _render(m: DomainMatrix) -> str:
    show = (lambda x: str(int(x) % m.domain.mod)) if m.domain.is_FiniteField else str
    return str([[show(x) for x in row] for row in m.to_list()])


def check_representation(g: PlumbingGraph, assign: MatrixAssignment) -> Report:
    """Evaluate every relation exactly; failing checks carry the residual matrix."""
    g = _checked(g)
    K = assign.domain()
    d = {v: assign.dims.get(v, 0) for v in g.vertex_ids}
    report = Report("representation")
    mats: Dict[str, DomainMatrix] = {}
    for idx, (s, t) in enumerate(g.edges):
        a = g.edge_number(idx)
        for name, shape in ((c_name(a), (d[t], d[s])), (cstar_name(a), (d[s], d[t]))):
            m = assign.matrix(name, shape)
            if m is None:
                raise RepresentationError(f"no matrix for {name}")
            mats[name] = m

    def out_factor(v, a):
        return _eye(d[v], K) + mats[cstar_name(a)] * mats[c_name(a)]

    def in_factor(v, a):
        return _eye(d[v], K) + mats[c_name(a)] * mats[cstar_name(a)]

    for idx in g.nontree():
        a = g.edge_number(idx)
        v = g.edges[idx][0]
        zm = assign.matrix(z_name(a), (d[v], d[v]))
        rhs = out_factor(v, a)
        if zm is None:
            zm = rhs
        else:
            res = zm - rhs
            report.add(f"{z_name(a)} = 1 + {cstar_name(a)} {c_name(a)}", res.is_zero_matrix,
                       None if res.is_zero_matrix else _render(res))
        _inverse(zm, z_name(a))
        mats[z_name(a)] = zm

    for v in g.vertex_ids:
        n = d[v]
        tv = K.convert(Fraction(_t_value(assign.t, v)) if assign.prime is None
                       else int(_t_value(assign.t, v)))
        if tv == K.zero:
            raise RepresentationError(f"t{v} must be nonzero")
        lhs = _eye(n, K)
        for idx, (s, t) in enumerate(g.edges):
            if t == v:
                lhs = lhs * in_factor(v, g.edge_number(idx))
        rhs = _eye(n, K) * tv
        for i in range(1, g.genus[v - 1] + 1):
            A = assign.matrix(alpha_name(v, i), (n, n))
            B = assign.matrix(beta_name(v, i), (n, n))
            if A is None or B is None:
                raise RepresentationError(f"missing {alpha_name(v, i)} or {beta_name(v, i)}")
            rhs = rhs * A * B * _inverse(A, alpha_name(v, i)) * _inverse(B, beta_name(v, i))
        for idx in [i for i, (s, _) in enumerate(g.edges) if s == v and not g.is_tree_edge(i)] + \
                   [i for i, (s, _) in enumerate(g.edges) if s == v and g.is_tree_edge(i)]:
            rhs = rhs * out_factor(v, g.edge_number(idx))
        res = lhs - rhs
        report.add(f"vertex {v} relation", res.is_zero_matrix,
                   None if res.is_zero_matrix else _render(res))
    return report


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def _scalar_variables(g: PlumbingGraph) -> List[Tuple[str, bool]]:
    """Names of the free scalar unknowns and whether each must be a unit."""
    out = []
    for idx in range(len(g.edges)):
        a = g.edge_number(idx)
        out += [(c_name(a), False), (cstar_name(a), False)]
    for v in g.vertex_ids:
        for i in range(1, g.genus[v - 1] + 1):
            out += [(alpha_name(v, i), True), (beta_name(v, i), True)]
    return out


def onedim_solutions(g: PlumbingGraph, p: int, t=1) -> Iterator[Dict[str, int]]:
    """Every one-dimensional representation over ``F_p``.

    ``z_a`` is determined by ``c_a``, ``c_a^*``; assignments where it
    vanishes are excluded.  Commutators of scalars are trivial, so the
    ``alpha``/``beta`` values only contribute their count.
    """
    g = _checked(g)
    names = _scalar_variables(g)
    ranges = [range(1, p) if unit else range(p) for _, unit in names]
    tvals = {v: _t_value(t, v) % p for v in g.vertex_ids}
    if any(x == 0 for x in tvals.values()):
        raise ValueError("t must be nonzero")
    edges = [(g.edge_number(i), s, tt) for i, (s, tt) in enumerate(g.edges)]
    nontree = {g.edge_number(i) for i in g.nontree()}
    for values in itertools.product(*ranges):
        env = dict(zip((n for n, _ in names), values))
        zs = {}
        ok = True
        for a in nontree:
            z = (1 + env[cstar_name(a)] * env[c_name(a)]) % p
            if z == 0:
                ok = False
                break
            zs[a] = z
        if not ok:
            continue
        for v in g.vertex_ids:
            lhs, rhs = 1, tvals[v]
            for a, s, tt in edges:
                prod = env[c_name(a)] * env[cstar_name(a)]
                if tt == v:
                    lhs = lhs * (1 + prod) % p
                if s == v:
                    rhs = rhs * (1 + prod) % p
            if lhs != rhs:
                ok = False
                break
        if ok:
            env.update({z_name(a): z for a, z in zs.items()})
            yield env


def count_onedim_reps(g: PlumbingGraph, p: int, t=1) -> int:
    return sum(1 for _ in onedim_solutions(g, p, t))


def count_reps(g: PlumbingGraph, p: int, t=1, dims: Optional[Mapping[int, int]] = None,
               max_assignments: int = 200_000) -> int:
    """Brute-force count for a general dimension vector, refusing large searches."""
    g = _checked(g)
    dims = dict(dims or {})
    d = {v: dims.get(v, 1) for v in g.vertex_ids}
    if all(x == 1 for x in d.values()):
        return count_onedim_reps(g, p, t)
    slots: List[Tuple[str, Tuple[int, int], bool]] = []
    for idx, (s, tt) in enumerate(g.edges):
        a = g.edge_number(idx)
        slots += [(c_name(a), (d[tt], d[s]), False), (cstar_name(a), (d[s], d[tt]), False)]
    for v in g.vertex_ids:
        for i in range(1, g.genus[v - 1] + 1):
            n = d[v]
            slots += [(alpha_name(v, i), (n, n), True), (beta_name(v, i), (n, n), True)]
    entries = sum(r * c for _, (r, c), _ in slots)
    if p ** entries > max_assignments:
        raise ValueError(f"search space p^{entries} exceeds the limit {max_assignments}")
    count = 0
    for flat in itertools.product(range(p), repeat=entries):
        mats, pos = {}, 0
        for name, (r, c), _ in slots:
            mats[name] = [list(flat[pos + i * c: pos + (i + 1) * c]) for i in range(r)]
            pos += r * c
        assign = MatrixAssignment(d, mats, t, p)
        try:
            rep = check_representation(g, assign)
        except RepresentationError:
            continue
        if rep.ok:
            count += 1
    return count
