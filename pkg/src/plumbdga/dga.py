"""Semi-free DG-algebra presentations and maps between them.

A :class:`Presentation` is an :class:`~plumbdga.algebra.Alphabet` together
with the differential of every free (non-invertible) generator.  Invertible
generators are closed.  The differential is extended to arbitrary elements
by the graded Leibniz rule ``d(a2 a1) = d(a2) a1 + (-1)^|a2| a2 d(a1)``.

Generator substitutions follow the convention under which the tables of
elementary automorphisms in the destabilization scripts are reproduced: if
``sigma`` is the substitution ``x -> sigma(x)``, the transported
differential is ``d' = sigma . d . sigma^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .algebra import (
    QQ,
    ZERO,
    Alphabet,
    Element,
    Generator,
    Idempotent,
    Label,
    parse_element,
)
from .report import Report


class MissingDifferential(KeyError):
    pass


class AutomorphismError(ValueError):
    pass


class DestabilizationError(ValueError):
    def __init__(self, message: str, witness: Optional[str] = None):
        super().__init__(message)
        self.witness = witness


class NotElementary(ValueError):
    pass


ElementLike = Union[Element, str]


class Presentation:
    """Generators with degrees and endpoints plus a differential table."""

    def __init__(self, alphabet: Alphabet, diff: Mapping[str, ElementLike], name: str = ""):
        self.alphabet = alphabet
        self.name = name
        table: Dict[str, Element] = {}
        for gname, value in diff.items():
            if gname not in alphabet:
                raise KeyError(f"differential given for unknown generator {gname}")
            if alphabet[gname].invertible:
                raise ValueError(f"invertible generator {gname} is closed by convention")
            table[gname] = self._element(value)
        self.diff = table

    @classmethod
    def build(cls, labels: Iterable[Label], generators: Iterable[Generator],
              diff: Mapping[str, ElementLike], field=QQ, name: str = "") -> "Presentation":
        return cls(Alphabet(labels, generators, field), diff, name)

    def _element(self, value: ElementLike) -> Element:
        if isinstance(value, str):
            return parse_element(self.alphabet, value)
        if value.alphabet is not self.alphabet:
            return value.relabel(self.alphabet)
        return value

    # -- convenience constructors ---------------------------------------------

    @property
    def labels(self):
        return self.alphabet.labels

    @property
    def field(self):
        return self.alphabet.field

    @property
    def generators(self) -> Tuple[Generator, ...]:
        return tuple(self.alphabet[n] for n in self.alphabet.primary)

    def free_generators(self) -> Tuple[str, ...]:
        return tuple(n for n in self.alphabet.primary if not self.alphabet[n].invertible)

    def gen(self, name: str, coeff=1) -> Element:
        return Element.word(self.alphabet, name, coeff=coeff)

    def e(self, label: Label, coeff=1) -> Element:
        return Element.idempotent(self.alphabet, label, coeff)

    def word(self, *factors, coeff=1) -> Element:
        fs = [f if (isinstance(f, str) and f in self.alphabet) else
              (f if isinstance(f, (str, Idempotent)) else Idempotent(f)) for f in factors]
        return Element.word(self.alphabet, *fs, coeff=coeff)

    def el(self, text: str) -> Element:
        return parse_element(self.alphabet, text)

    def zero(self) -> Element:
        return Element.zero(self.alphabet)

    # -- differential ------------------------------------------------------------

    def d(self, a: ElementLike) -> Element:
        return extend_diff(self, a)

    def differential(self, name: str) -> Element:
        if self.alphabet[name].invertible:
            return self.zero()
        try:
            return self.diff[name]
        except KeyError:
            raise MissingDifferential(name) from None

    # -- derived presentations -----------------------------------------------------

    def with_diff(self, updates: Mapping[str, ElementLike], name: Optional[str] = None) -> "Presentation":
        table = dict(self.diff)
        for k, v in updates.items():
            table[k] = self._element(v)
        return Presentation(self.alphabet, table, self.name if name is None else name)

    def without(self, names: Sequence[str], name: Optional[str] = None) -> "Presentation":
        drop = set(names)
        gens = [g for g in self.generators if g.name not in drop]
        alphabet = Alphabet(self.labels, gens, self.field)
        table = {k: v.relabel(alphabet) for k, v in self.diff.items() if k not in drop}
        return Presentation(alphabet, table, self.name if name is None else name)

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return (set(self.labels) == set(other.labels)
                and set(self.generators) == set(other.generators)
                and all(self.differential(n) == other.differential(n)
                        for n in self.free_generators()))

    __hash__ = None

    def render(self) -> str:
        lines = []
        for g in self.generators:
            kind = " invertible" if g.invertible else ""
            lines.append(f"gen {g.name} : e{g.source} -> e{g.target}, deg {g.degree}{kind}")
        for n in self.free_generators():
            lines.append(f"d {n} = {self.differential(n)}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "labels": [str(x) for x in self.labels],
            "generators": [
                {"name": g.name, "source": str(g.source), "target": str(g.target),
                 "degree": g.degree, "invertible": g.invertible}
                for g in self.generators
            ],
            "differential": {n: str(self.differential(n)) for n in self.free_generators()},
        }

    def __repr__(self):
        return f"<Presentation {self.name or ''} with {len(self.alphabet.primary)} generators>"


def extend_diff(p: Presentation, a: ElementLike) -> Element:
    """Apply the differential of ``p`` to ``a`` via the graded Leibniz rule."""
    if isinstance(a, str):
        a = p.el(a)
    alph = p.alphabet
    field = alph.field
    join = alph.join
    out: Dict = {}
    for (s, t, names), c in a.terms.items():
        sign = 1
        for i, n in enumerate(names):
            g = alph[n]
            if not g.invertible:
                dn = p.differential(n)
                pre, post = names[:i], names[i + 1:]
                for (_, _, dnames), dc in dn.terms.items():
                    key = (s, t, join(pre, dnames, post))
                    v = field(out.get(key, 0) + sign * c * dc)
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
            if g.degree % 2:
                sign = -sign
    return Element(alph, out)


def check_d_squared(p: Presentation) -> Report:
    report = Report(f"d^2 = 0 ({p.name})" if p.name else "d^2 = 0")
    for n in p.free_generators():
        r = p.d(p.differential(n))
        report.add(n, r.is_zero(), None if r.is_zero() else str(r))
    return report


def check_grading(p: Presentation) -> Report:
    """Every ``d(g)`` is homogeneous of degree ``|g|+1`` with ``g``'s endpoints."""
    report = Report(f"grading ({p.name})" if p.name else "grading")
    for n in p.free_generators():
        g = p.alphabet[n]
        dg = p.differential(n)
        deg = dg.degree()
        ends = dg.endpoints()
        ok = (deg == ZERO or deg == g.degree + 1) and ends <= {(g.source, g.target)}
        report.add(n, ok, None if ok else f"degree {deg}, expected {g.degree + 1}; endpoints {sorted(map(str, ends))}")
    return report


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------

def invert_monomial(element: Element) -> Element:
    """Inverse of ``lambda * w`` for an invertible word ``w``."""
    if len(element.terms) != 1:
        raise ValueError(f"{element} is not a monomial")
    (key, c), = element.terms.items()
    s, t, names = key
    alph = element.alphabet
    inv = []
    for n in reversed(names):
        i = alph.inverse_of(n)
        if i is None:
            raise ValueError(f"{element} is not invertible ({n} is free)")
        inv.append(i)
    return Element(alph, {(t, s, tuple(inv)): alph.field.inverse(c)})


class GeneratorMap:
    """Algebra homomorphism determined by generator images.

    Generators without an explicit image go to the same-named generator of
    the target.  Images of inverses are derived from monomial images.
    """

    kind = "multiplicative"

    def __init__(self, source: Presentation, target: Presentation,
                 images: Optional[Mapping[str, ElementLike]] = None,
                 label_map: Optional[Mapping[Label, Label]] = None, name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        self.label_map = dict(label_map) if label_map else None
        self.images: Dict[str, Element] = {}
        for k, v in (images or {}).items():
            if k not in source.alphabet:
                raise KeyError(f"image given for unknown generator {k}")
            self.images[k] = target._element(v)
        self._cache: Dict[str, Element] = {}

    def _label(self, label):
        return self.label_map.get(label, label) if self.label_map else label

    def image(self, name: str) -> Element:
        hit = self._cache.get(name)
        if hit is not None:
            return hit
        if name in self.images:
            img = self.images[name]
        else:
            inv = self.source.alphabet.inverse_of(name)
            if inv is not None and inv in self.images:
                img = invert_monomial(self.images[inv])
            elif name in self.target.alphabet:
                img = Element.word(self.target.alphabet, name)
            else:
                raise KeyError(f"no image for generator {name}")
        self._cache[name] = img
        return img

    def __call__(self, a: ElementLike) -> Element:
        if isinstance(a, str):
            a = self.source.el(a)
        talph = self.target.alphabet
        result = Element.zero(talph)
        for (s, t, names), c in a.terms.items():
            if not names:
                term = Element.idempotent(talph, self._label(s), c)
            else:
                term = self.image(names[0])
                for n in names[1:]:
                    term = term * self.image(n)
                    if term.is_zero():
                        break
                term = term.scale(c)
            result = result + term
        return result

    def with_images(self, updates: Mapping[str, ElementLike]) -> "GeneratorMap":
        images = dict(self.images)
        images.update(updates)
        return GeneratorMap(self.source, self.target, images, self.label_map, self.name)


class TwistedMap:
    """Degree -1 map obeying ``h(a2 a1) = h(a2) r(a1) + sign * (-1)^|a2| a2 h(a1)``.

    ``sign`` is ``product_sign``.  With ``+1`` (Koszul rule) ``d h + h d`` is an
    ``(r, id)``-derivation; ``-1`` gives the alternative rule with the second
    term negated.  ``r`` is a multiplicative endomorphism of the same
    presentation; ``h`` vanishes on idempotents, on invertible generators and
    on free generators absent from ``images``.
    """

    kind = "twisted"

    def __init__(self, presentation: Presentation, r: GeneratorMap,
                 images: Mapping[str, ElementLike], name: str = "", product_sign: int = 1):
        self.source = self.target = presentation
        self.r = r
        self.name = name
        self.product_sign = product_sign
        self.images = {k: presentation._element(v) for k, v in images.items()}

    def image(self, name: str) -> Element:
        return self.images.get(name) or Element.zero(self.source.alphabet)

    def __call__(self, a: ElementLike) -> Element:
        if isinstance(a, str):
            a = self.source.el(a)
        p = self.source
        alph = p.alphabet
        result = Element.zero(alph)
        for (s, t, names), c in a.terms.items():
            if not names:
                continue
            k = len(names)
            # r of every suffix names[i+1:]
            suffix = [None] * (k + 1)
            suffix[k] = Element.idempotent(alph, s)
            for i in range(k - 1, -1, -1):
                suffix[i] = self.r(Element.word(alph, names[i])) * suffix[i + 1]
            sign = 1
            for i, n in enumerate(names):
                hn = self.image(n)
                if hn:
                    prefix = Element.word(alph, *names[:i]) if i else Element.idempotent(alph, alph[n].target)
                    result = result + (prefix * hn * suffix[i + 1]).scale(sign * c)
                sign *= self.product_sign * (-1 if alph[n].degree % 2 else 1)
        return result


def check_homomorphism(phi: GeneratorMap) -> Report:
    """``phi . d = d . phi`` on generators, plus degree and endpoint preservation."""
    src, tgt = phi.source, phi.target
    report = Report(f"DG-map {phi.name}" if phi.name else "DG-map")
    for g in src.generators:
        img = phi.image(g.name)
        deg = img.degree()
        ends = img.endpoints()
        want = (phi._label(g.source), phi._label(g.target))
        if not (deg == ZERO or deg == g.degree) or not ends <= {want}:
            report.add(f"{g.name}: degree/endpoints", False,
                       f"image {img} has degree {deg}, endpoints {sorted(map(str, ends))}")
            continue
        lhs = phi(src.differential(g.name))
        rhs = tgt.d(img)
        diff = lhs - rhs
        report.add(g.name, diff.is_zero(), None if diff.is_zero() else str(diff))
    return report


def compose_maps(psi: GeneratorMap, phi: GeneratorMap, name: str = "") -> GeneratorMap:
    """``psi . phi``."""
    images = {g.name: psi(phi.image(g.name)) for g in phi.source.generators}
    label_map = None
    if phi.label_map or psi.label_map:
        label_map = {lab: psi._label(phi._label(lab)) for lab in phi.source.labels}
    return GeneratorMap(phi.source, psi.target, images, label_map, name)


def check_round_trip(phi: GeneratorMap, psi: GeneratorMap) -> Report:
    """``psi . phi`` fixes every generator of ``phi.source``."""
    report = Report(f"round trip {psi.name} . {phi.name}")
    for g in phi.source.generators:
        back = psi(phi.image(g.name))
        want = Element.word(phi.source.alphabet, g.name)
        diff = back - want.relabel(back.alphabet)
        report.add(g.name, diff.is_zero(), None if diff.is_zero() else str(diff))
    return report


# ---------------------------------------------------------------------------
# elementary automorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ElementaryAutomorphism:
    """``pivot -> scale * left . pivot . right + shift``.

    ``left`` and ``right`` are words in invertible generators, ``shift`` is
    an element not involving ``pivot``.
    """

    pivot: str
    scale: object = 1
    left: Tuple[str, ...] = ()
    right: Tuple[str, ...] = ()
    shift: Optional[ElementLike] = None

    @classmethod
    def from_image(cls, p: Presentation, pivot: str, image: ElementLike) -> "ElementaryAutomorphism":
        """Recognise an image expression such as ``"z1^-1 x4 + z1^-1"``."""
        img = p._element(image)
        alph = p.alphabet
        main = [(k, c) for k, c in img.terms.items() if pivot in k[2]]
        if len(main) != 1:
            raise NotElementary(f"image of {pivot} must contain it in exactly one term: {img}")
        (s, t, names), c = main[0]
        i = names.index(pivot)
        left, right = names[:i], names[i + 1:]
        for n in left + right:
            if not alph[n].invertible:
                raise NotElementary(f"{n} in {img} is not invertible")
        rest = Element(alph, {k: v for k, v in img.terms.items() if k != (s, t, names)})
        if rest.mentions(pivot):
            raise NotElementary(f"shift term mentions {pivot}")
        return cls(pivot, c, tuple(left), tuple(right), rest if rest else None)

    def shift_in(self, p: Presentation) -> Element:
        if self.shift is None:
            return p.zero()
        return p._element(self.shift)

    def image(self, p: Presentation) -> Element:
        main = p.word(*self.left, self.pivot, *self.right, coeff=self.scale)
        return main + self.shift_in(p)

    def as_map(self, p: Presentation) -> GeneratorMap:
        return GeneratorMap(p, p, {self.pivot: self.image(p)}, name=str(self.describe(p)))

    def inverse(self, p: Presentation) -> "ElementaryAutomorphism":
        alph = p.alphabet
        lam = alph.field.inverse(alph.field(self.scale))
        inv_left = tuple(alph.inverse_of(n) for n in reversed(self.left))
        inv_right = tuple(alph.inverse_of(n) for n in reversed(self.right))
        shift = None
        if self.shift is not None:
            s = self.shift_in(p)
            lw = p.word(*inv_left) if inv_left else None
            rw = p.word(*inv_right) if inv_right else None
            if lw is not None:
                s = lw * s
            if rw is not None:
                s = s * rw
            shift = s.scale(-lam)
        return ElementaryAutomorphism(self.pivot, lam, inv_left, inv_right, shift)

    def validate(self, p: Presentation) -> None:
        alph = p.alphabet
        if self.pivot not in alph:
            raise AutomorphismError(f"unknown pivot {self.pivot}")
        g = alph[self.pivot]
        if g.invertible:
            raise AutomorphismError(f"pivot {self.pivot} is not a free generator")
        if not alph.field(self.scale):
            raise AutomorphismError("scale must be a unit")
        for n in self.left + self.right:
            if n not in alph or not alph[n].invertible:
                raise AutomorphismError(f"{n} is not an invertible generator")
        main = p.word(*self.left, self.pivot, *self.right)
        if main.is_zero() or main.endpoints() != {(g.source, g.target)}:
            raise AutomorphismError("left/right words do not preserve the pivot's endpoints")
        if main.degree() != g.degree:
            raise AutomorphismError("left/right words change the pivot's degree")
        shift = self.shift_in(p)
        if shift.mentions(self.pivot):
            raise AutomorphismError(f"shift mentions the pivot {self.pivot}")
        deg = shift.degree()
        if deg != ZERO and deg != g.degree:
            raise AutomorphismError(f"shift has degree {deg}, pivot has {g.degree}")
        if not shift.endpoints() <= {(g.source, g.target)}:
            raise AutomorphismError("shift endpoints differ from the pivot's")

    def describe(self, p: Optional[Presentation] = None) -> str:
        if p is None:
            return f"{self.pivot} -> ..."
        return f"{self.pivot} -> {self.image(p)}"


def invert_automorphism(sigma, p: Optional[Presentation] = None):
    """Inverse of an elementary automorphism (or of a map recognised as one)."""
    if isinstance(sigma, ElementaryAutomorphism):
        if p is None:
            raise ValueError("a presentation is needed to invert an automorphism")
        return sigma.inverse(p)
    if isinstance(sigma, GeneratorMap):
        if sigma.source is not sigma.target:
            raise NotElementary("not an endomorphism")
        p = sigma.source
        moved = [n for n, img in sigma.images.items() if img != p.gen(n)]
        if len(moved) != 1:
            raise NotElementary(f"expected exactly one moved generator, got {moved}")
        elem = ElementaryAutomorphism.from_image(p, moved[0], sigma.images[moved[0]])
        return elem.inverse(p).as_map(p)
    raise NotElementary(f"cannot invert {type(sigma).__name__}")


def apply_automorphism(p: Presentation, sigma: ElementaryAutomorphism,
                       name: Optional[str] = None) -> Presentation:
    """Transport the differential along ``sigma``: ``d' = sigma . d . sigma^-1``."""
    sigma.validate(p)
    fwd = sigma.as_map(p)
    back = sigma.inverse(p).as_map(p)
    table = {}
    for n in p.free_generators():
        if n == sigma.pivot:
            table[n] = fwd(p.d(back.image(n)))
        else:
            table[n] = fwd(p.differential(n))
    return Presentation(p.alphabet, table, p.name if name is None else name)


def destabilize(p: Presentation, x: str, y: str, name: Optional[str] = None) -> Presentation:
    """Remove a cancelling pair with ``d x = lambda * u . y . w`` (``u``, ``w`` invertible)."""
    alph = p.alphabet
    for n in (x, y):
        if n not in alph or alph[n].invertible:
            raise DestabilizationError(f"{n} is not a free generator", n)
    dx = p.differential(x)
    ok = False
    if len(dx.terms) == 1:
        (_, _, names), _ = next(iter(dx.terms.items()))
        if names.count(y) == 1 and all(alph[n].invertible for n in names if n != y):
            ok = True
    if not ok:
        raise DestabilizationError(f"d {x} = {dx} is not a unit multiple of {y}", x)
    if not p.differential(y).is_zero():
        raise DestabilizationError(f"d {y} = {p.differential(y)} is not zero", y)
    for n in p.free_generators():
        if n in (x, y):
            continue
        dn = p.differential(n)
        if dn.mentions(x) or dn.mentions(y):
            raise DestabilizationError(f"d {n} mentions {x} or {y}: {dn}", n)
    return p.without([x, y], name)
