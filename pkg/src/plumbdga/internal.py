"""The 1-handle internal DG-algebra, its finite model, and the Kontsevich category.

Generators ``c{p}_{i}_{j}`` are morphisms from strand ``i`` to strand ``j``
(source ``i``, target ``j``) of degree ``1 - 2p + m_j - m_i``; for ``p = 0``
only ``i < j`` occurs.  The infinitely generated algebra is truncated at
``p <= max_p``, which is closed under the differential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import QQ, Alphabet, Element, Generator
from .dga import GeneratorMap, Presentation, TwistedMap, check_homomorphism
from .report import Report


@dataclass(frozen=True)
class InternalSpec:
    n: int
    m: Tuple[int, ...] = ()
    max_p: int = 3

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one strand")
        if self.max_p < 0:
            raise ValueError("truncation bound must be non-negative")
        m = tuple(self.m) if self.m else (0,) * self.n
        if len(m) != self.n:
            raise ValueError(f"expected {self.n} potentials, got {len(m)}")
        object.__setattr__(self, "m", m)

    def pot(self, i: int) -> int:
        return self.m[i - 1]

    def degree(self, p: int, i: int, j: int) -> int:
        return 1 - 2 * p + self.pot(j) - self.pot(i)

    def exists(self, p: int, i: int, j: int) -> bool:
        return 1 <= i <= self.n and 1 <= j <= self.n and p >= 0 and (p > 0 or i < j)

    def indices(self, max_p: Optional[int] = None):
        top = self.max_p if max_p is None else max_p
        for p in range(top + 1):
            for i in range(1, self.n + 1):
                for j in range(1, self.n + 1):
                    if self.exists(p, i, j):
                        yield p, i, j


def cname(p: int, i: int, j: int) -> str:
    return f"c{p}_{i}_{j}"


def catalan(p: int) -> int:
    if p < 0:
        raise ValueError("Catalan numbers are indexed by p >= 0")
    return comb(2 * p, p) // (p + 1)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _generators(spec: InternalSpec, max_p: int) -> List[Generator]:
    return [Generator(cname(p, i, j), i, j, spec.degree(p, i, j))
            for p, i, j in spec.indices(max_p)]


def _internal_diff(spec: InternalSpec, alph: Alphabet, p: int, i: int, j: int) -> Element:
    out = Element.zero(alph)
    if p == 1 and i == j:
        out = out + Element.idempotent(alph, i)
    # d c^p_ij = sum_{q, r} (-1)^{m_r + m_j} c^{p-q}_rj c^q_ir, absent terms dropped
    for q in range(p + 1):
        for r in range(1, spec.n + 1):
            if spec.exists(p - q, r, j) and spec.exists(q, i, r):
                out = out + Element.word(alph, cname(p - q, r, j), cname(q, i, r),
                                         coeff=_sign(spec.pot(r) + spec.pot(j)))
    return out


def build_internal(spec: InternalSpec, field=QQ) -> Presentation:
    """The internal algebra truncated at ``p <= spec.max_p``."""
    return _build(spec, spec.max_p, field, f"I_{spec.n}^(<={spec.max_p})")


def build_subalgebra_A(spec: InternalSpec, field=QQ) -> Presentation:
    """The finitely generated subalgebra on the ``c0`` and ``c1`` generators."""
    return _build(spec, 1, field, f"A_{spec.n}")


def _build(spec, max_p, field, name):
    alph = Alphabet(range(1, spec.n + 1), _generators(spec, max_p), field)
    diff = {cname(p, i, j): _internal_diff(spec, alph, p, i, j) for p, i, j in spec.indices(max_p)}
    return Presentation(alph, diff, name)


def check_truncation_closed(p: Presentation) -> Report:
    """``d c^p`` only involves generators with exponent at most ``p``."""
    report = Report("truncation closure")
    for n in p.free_generators():
        top = int(n[1:].split("_")[0])
        used = p.differential(n).generators_used()
        bad = [u for u in used if int(u[1:].split("_")[0]) > top]
        report.add(n, not bad, ", ".join(sorted(bad)) or None)
    return report


# ---------------------------------------------------------------------------
# retraction and homotopy
# ---------------------------------------------------------------------------

def _chain(spec: InternalSpec, alph: Alphabet, i: int, j: int, length: int,
           head: Optional[int] = None, coeff: int = 1, extra_sign: int = 0) -> Element:
    """Sum over ``k_1..k_{length-1}`` of signed words of ``length`` factors.

    The rightmost factor is ``c1_{i,k_1}``; the leftmost is ``c{head}_{k_last,j}``
    (``head`` defaults to 1).  The sign is ``(-1)^(m_k1 + ... + extra_sign)``.
    """
    terms: Dict = {}
    n = spec.n
    top = 1 if head is None else head
    for ks in itertools.product(range(1, n + 1), repeat=length - 1):
        path = (i,) + ks + (j,)
        names = []
        for a in range(length - 1, -1, -1):
            pw = top if a == length - 1 else 1
            names.append(cname(pw, path[a], path[a + 1]))
        sign = _sign(sum(spec.pot(k) for k in ks) + extra_sign)
        key = (i, j, tuple(names))
        terms[key] = terms.get(key, 0) + sign * coeff
    return Element(alph, terms)


def retraction_image(spec: InternalSpec, alph: Alphabet, p: int, i: int, j: int) -> Element:
    if p <= 1:
        return Element.word(alph, cname(p, i, j))
    return _chain(spec, alph, i, j, 2 * p - 1, coeff=catalan(p - 1))


def retraction(spec: InternalSpec, into_internal: bool = False, field=QQ) -> GeneratorMap:
    """The Catalan-weighted retraction onto the ``c0``/``c1`` subalgebra.

    With ``into_internal`` the map lands in the truncated algebra itself,
    i.e. it is the inclusion composed with the retraction.
    """
    source = build_internal(spec, field)
    target = source if into_internal else build_subalgebra_A(spec, field)
    images = {cname(p, i, j): retraction_image(spec, target.alphabet, p, i, j)
              for p, i, j in spec.indices() if p > 1}
    return GeneratorMap(source, target, images, name="i.r" if into_internal else "r")


def homotopy_image(spec: InternalSpec, alph: Alphabet, p: int, i: int, j: int) -> Element:
    out = Element.zero(alph)
    for q in range(2, p + 1):
        out = out + _chain(spec, alph, i, j, 2 * p - 2 * q + 2, head=q,
                           coeff=catalan(p - q + 1), extra_sign=spec.pot(j))
    return out


def homotopy(spec: InternalSpec, field=QQ, product_sign: int = 1) -> TwistedMap:
    """Degree -1 homotopy between ``i.r`` and the identity.

    ``product_sign=-1`` selects the rule with the second term negated, under
    which ``d h + h d`` is not an ``(r, id)``-derivation; it is kept for
    comparison only.
    """
    ir = retraction(spec, into_internal=True, field=field)
    p = ir.source
    images = {cname(pp, i, j): homotopy_image(spec, p.alphabet, pp, i, j)
              for pp, i, j in spec.indices() if pp > 1}
    return TwistedMap(p, ir, images, name="h", product_sign=product_sign)


def check_retraction(spec: InternalSpec, field=QQ) -> Report:
    """``r`` is a chain map and restricts to the identity on the subalgebra."""
    r = retraction(spec, field=field)
    report = check_homomorphism(r)
    report.title = f"retraction chain map n={spec.n} m={spec.m} P={spec.max_p}"
    for p, i, j in spec.indices(1):
        n = cname(p, i, j)
        ok = r.image(n) == r.target.gen(n)
        report.add(f"identity on {n}", ok)
    return report


@dataclass
class HomotopyResult:
    sign: Optional[int]
    report: Report
    residues: Dict[str, str] = field(default_factory=dict)
    product_sign: int = 1

    @property
    def ok(self) -> bool:
        return self.sign is not None and self.report.ok


def verify_homotopy_identity(spec: InternalSpec, field=QQ, product_sign: int = 1) -> HomotopyResult:
    """Find the sign ``eps`` with ``d h + h d = eps (i r - id)`` on all generators."""
    h = homotopy(spec, field, product_sign)
    p = h.source
    ir = h.r
    candidates = {1, -1}
    pairs = []
    for n in p.free_generators():
        lhs = p.d(h.image(n)) + h(p.differential(n))
        rhs = ir.image(n) - p.gen(n)
        pairs.append((n, lhs, rhs))
        candidates = {e for e in candidates if lhs == rhs.scale(e)}
    report = Report(f"homotopy identity n={spec.n} m={spec.m} P={spec.max_p}")
    determined = len(candidates) == 1
    # both signs survive only when every generator has both sides zero
    sign = candidates.pop() if determined else (1 if candidates else None)
    residues = {}
    for n, lhs, rhs in pairs:
        if sign is None:
            ok = lhs == rhs or lhs == -rhs
            res = None if ok else f"dh+hd = {lhs}; ir-id = {rhs}"
        else:
            diff = lhs - rhs.scale(sign)
            ok = diff.is_zero()
            res = None if ok else str(diff)
        if res:
            residues[n] = res
        report.add(n, ok, res)
    report.add("one sign for all generators", sign is not None,
               None if sign is not None else "no common sign")
    report.info["sign"] = sign
    report.info["sign_determined"] = determined
    report.info["product_sign"] = product_sign
    return HomotopyResult(sign, report, residues, product_sign)


# ---------------------------------------------------------------------------
# Kontsevich A-infinity category
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KontsevichCategory:
    """Objects ``Z_1..Z_n``; morphisms ``e_i`` and ``x_i : Z_i -> Z_{i+1}`` (indices mod n).

    Basis elements are ``("e", i)`` and ``("x", i)`` with ``i`` in ``1..n``.
    """

    n: int
    m: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("the Kontsevich category needs n >= 2")
        if len(self.m) != self.n:
            raise ValueError("one potential per object")

    def idx(self, i: int) -> int:
        return (i - 1) % self.n + 1

    def degree(self, b) -> int:
        kind, i = b
        if kind == "e":
            return 0
        if i < self.n:
            return 1 + self.m[i] - self.m[i - 1]
        return -1 + self.m[0] - self.m[self.n - 1]

    def source(self, b) -> int:
        return b[1]

    def target(self, b) -> int:
        return b[1] if b[0] == "e" else self.idx(b[1] + 1)

    def basis(self):
        for i in range(1, self.n + 1):
            yield ("e", i)
            yield ("x", i)

    def mu(self, args: Sequence) -> Dict:
        """Higher product; ``args`` listed leftmost first as in ``m_k(a_k, ..., a_1)``."""
        k = len(args)
        if k == 2:
            a2, a1 = args
            if a1[0] == "e" and a2[0] == "e":
                return {a1: 1} if a1 == a2 else {}
            # strict units: m2(a, e) = a, m2(e, a) = (-1)^|a| a
            if a1[0] == "e":
                return {a2: 1} if self.source(a2) == a1[1] else {}
            if a2[0] == "e":
                return {a1: _sign(self.degree(a1))} if self.target(a1) == a2[1] else {}
        if k < 2 or any(a[0] == "e" for a in args):
            return {}
        if k != self.n:
            return {}
        # m_n(x_{i-1}, ..., x_{i+1}, x_i) = e_i
        start = args[-1][1]
        expected = [("x", self.idx(start + t)) for t in range(self.n)]
        if list(reversed(args)) == expected:
            return {("e", start): 1}
        return {}


def build_kontsevich(n: int, m: Sequence[int] = ()) -> KontsevichCategory:
    return KontsevichCategory(n, tuple(m) if m else (0,) * n)


def _composable_sequences(K: KontsevichCategory, length: int):
    """Composable tuples ``(a_1, ..., a_length)``, rightmost (first applied) first."""
    basis = list(K.basis())

    def extend(seq):
        if len(seq) == length:
            yield tuple(seq)
            return
        for b in basis:
            if not seq or K.source(b) == K.target(seq[-1]):
                yield from extend(seq + [b])

    yield from extend([])


def verify_a_infinity(K: KontsevichCategory, max_length: Optional[int] = None) -> Report:
    """All A-infinity relations on composable basis sequences up to ``max_length``.

    Sign convention: the term with the inner operation applied to
    ``a_{t+1..t+s}`` carries ``(-1)^(sum_{j<=t} (|a_j| - 1))``.
    """
    top = max_length or K.n + 2
    report = Report(f"A-infinity relations K_{K.n} m={K.m}")
    failures = 0
    total = 0
    for d in range(1, top + 1):
        for seq in _composable_sequences(K, d):
            total += 1
            acc: Dict = {}
            for t in range(d):
                for s in range(1, d - t + 1):
                    inner = K.mu(tuple(reversed(seq[t:t + s])))
                    if not inner:
                        continue
                    sign = _sign(sum(K.degree(a) - 1 for a in seq[:t]))
                    for b, cb in inner.items():
                        outer_args = seq[:t] + (b,) + seq[t + s:]
                        for out, co in K.mu(tuple(reversed(outer_args))).items():
                            acc[out] = acc.get(out, 0) + sign * cb * co
            bad = {k: v for k, v in acc.items() if v}
            if bad:
                failures += 1
                if failures <= 20:
                    report.add(f"relation on {seq}", False, str(bad))
    report.add(f"{total} composable sequences of length <= {top}", failures == 0,
               None if not failures else f"{failures} failing")
    report.info["sequences"] = total
    return report


def verify_functor_equation(spec: InternalSpec, field=QQ) -> Report:
    """Check the functor identity for ``f(x_{i+k-1}, ..., x_i) = (-1)^|c| c^p_ij``.

    The quadratic part is obtained by enumerating every splitting of the
    cyclic sequence of ``x``'s into two consecutive blocks; it is then
    compared with the differential of the truncated internal algebra.
    """
    P = build_internal(spec, field)
    alph = P.alphabet
    n = spec.n

    def f_value(start: int, length: int):
        # i + k = j + n p with 1 <= j <= n
        total = start + length
        p, j = divmod(total - 1, n)
        j += 1
        return p, j, _sign(spec.degree(p, start, j)) * Element.word(alph, cname(p, start, j))

    report = Report(f"A-infinity functor equation n={n} m={spec.m} P={spec.max_p}")
    for p, i, j in spec.indices():
        k = j + n * p - i
        quad = Element.zero(alph)
        for first in range(1, k):
            q, r, f1 = f_value(i, first)
            p2, j2, f2 = f_value(r, k - first)
            assert j2 == j and p2 == p - q
            quad = quad + (f2 * f1).scale(_sign(spec.degree(q, i, r)))
        lhs = quad + P.differential(cname(p, i, j))
        rhs = Element.idempotent(alph, i) if (i == j and p == 1) else Element.zero(alph)
        diff = lhs - rhs
        report.add(cname(p, i, j), diff.is_zero(), None if diff.is_zero() else str(diff))
    return report


# ---------------------------------------------------------------------------
# base change
# ---------------------------------------------------------------------------

def base_change(p: Presentation, assign, name: Optional[str] = None) -> Presentation:
    """Push a presentation along ``e_i -> e_{assign(i)}``."""
    amap = assign if callable(assign) else (lambda lab: assign[lab])
    labels = []
    for lab in p.labels:
        new = amap(lab)
        if new not in labels:
            labels.append(new)
    gens = [Generator(g.name, amap(g.source), amap(g.target), g.degree, g.invertible)
            for g in p.generators]
    alph = Alphabet(labels, gens, p.field)
    table = {}
    for n, dn in p.diff.items():
        terms: Dict = {}
        for (s, t, names), c in dn.terms.items():
            key = (amap(s), amap(t), names)
            terms[key] = terms.get(key, 0) + c
        table[n] = Element(alph, terms)
    return Presentation(alph, table, name or f"{p.name}^k")
