"""Exact noncommutative arithmetic over an idempotent base ring.

Words are written in the usual left-to-right order, read as composition
from right to left: the rightmost factor is applied first.  A word is
stored as ``(source, target, names)`` where ``names[0]`` is the leftmost
factor.  Adjacent factors ``(left, right)`` must satisfy
``right.target == left.source``; an empty ``names`` tuple is the idempotent
at ``source == target``.

Invertible generators come in pairs ``g`` / ``g^-1``; words are kept freely
reduced, which is the only rewriting ever performed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from sympy import isprime

INVERSE_SUFFIX = "^-1"

ZERO = "zero"
INHOMOGENEOUS = "inhomogeneous"

Label = Hashable
WordKey = Tuple[Label, Label, Tuple[str, ...]]


# ---------------------------------------------------------------------------
# coefficient fields
# ---------------------------------------------------------------------------

class Rationals:
    """Exact rationals; integral values are kept as plain ``int``."""

    characteristic = 0

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value.numerator if value.denominator == 1 else value
        if isinstance(value, int):
            return value
        if isinstance(value, str):
            return self(Fraction(value))
        raise TypeError(f"cannot coerce {value!r} to a rational")

    def inverse(self, value):
        if value == 0:
            raise ZeroDivisionError("zero is not invertible")
        return self(Fraction(1) / value)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field with ``p`` elements; values are residues in ``[0, p)``."""

    def __init__(self, p: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, str):
            return self(Fraction(value))
        return int(value) % self.p

    def inverse(self, value):
        value = self(value)
        if value == 0:
            raise ZeroDivisionError("zero is not invertible")
        return pow(value, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


# ---------------------------------------------------------------------------
# generators and alphabets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    name: str
    source: Label
    target: Label
    degree: int = 0
    invertible: bool = False
    inverse: Optional[str] = None


def inverse_name(name: str) -> str:
    if name.endswith(INVERSE_SUFFIX):
        return name[: -len(INVERSE_SUFFIX)]
    return name + INVERSE_SUFFIX


@dataclass(frozen=True)
class Idempotent:
    """Marker for ``e_label`` inside a factor sequence."""

    label: Label


class Alphabet:
    """Generators over an idempotent ring, closed under taking inverses."""

    def __init__(self, labels: Iterable[Label], generators: Iterable[Generator] = (),
                 field=QQ):
        self.labels: Tuple[Label, ...] = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate idempotent labels")
        self.field = field
        self._gens: Dict[str, Generator] = {}
        self._label_names = {f"e{lab}": lab for lab in self.labels}
        primary = []
        for g in generators:
            self._add(g)
            primary.append(g.name)
        #: generator names in the order given, inverses excluded
        self.primary: Tuple[str, ...] = tuple(primary)

    def _add(self, g: Generator) -> None:
        if g.name in self._gens:
            raise ValueError(f"duplicate generator {g.name}")
        if g.source not in self.labels or g.target not in self.labels:
            raise ValueError(f"generator {g.name} has unknown endpoint")
        if g.name in self._label_names:
            raise ValueError(f"generator name {g.name} clashes with an idempotent")
        if g.invertible:
            inv = Generator(inverse_name(g.name), g.target, g.source, -g.degree, True, g.name)
            if inv.name in self._gens:
                raise ValueError(f"duplicate generator {inv.name}")
            g = Generator(g.name, g.source, g.target, g.degree, True, inv.name)
            self._gens[inv.name] = inv
        self._gens[g.name] = g

    def __contains__(self, name: str) -> bool:
        return name in self._gens

    def __getitem__(self, name: str) -> Generator:
        return self._gens[name]

    def names(self) -> Iterator[str]:
        return iter(self._gens)

    def inverse_of(self, name: str) -> Optional[str]:
        return self._gens[name].inverse

    def label_of_token(self, token: str) -> Optional[Label]:
        return self._label_names.get(token)

    # -- words -------------------------------------------------------------

    def word_degree(self, names: Sequence[str]) -> int:
        gens = self._gens
        return sum(gens[n].degree for n in names)

    def join(self, *parts: Sequence[str]) -> Tuple[str, ...]:
        """Freely reduce a concatenation of composable, reduced pieces."""
        gens = self._gens
        out: list = []
        for part in parts:
            for name in part:
                if out and gens[out[-1]].inverse == name:
                    out.pop()
                else:
                    out.append(name)
        return tuple(out)

    def normalize(self, factors: Sequence) -> Optional[WordKey]:
        """Reduce a sequence of generator names / :class:`Idempotent` markers.

        Returns the word key, or ``None`` when adjacent factors are not
        composable (the product is zero in the semisimple ring).
        """
        ends = []  # (source, target) of each factor, left to right
        names = []
        for f in factors:
            if isinstance(f, Idempotent):
                if f.label not in self.labels:
                    raise KeyError(f"unknown idempotent e{f.label}")
                ends.append((f.label, f.label))
            else:
                g = self._gens[f]
                ends.append((g.source, g.target))
                names.append(f)
        if not ends:
            raise ValueError("empty factor sequence has no endpoint")
        for (lsrc, _), (_, rtgt) in zip(ends, ends[1:]):
            if lsrc != rtgt:
                return None
        return (ends[-1][0], ends[0][1], self.join(names))


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class Element:
    """A finite linear combination of reduced words with nonzero coefficients."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Optional[Mapping[WordKey, object]] = None):
        self.alphabet = alphabet
        field = alphabet.field
        clean = {}
        if terms:
            for w, c in terms.items():
                c = field(c)
                if c:
                    clean[w] = c
        self.terms: Dict[WordKey, object] = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "Element":
        return cls(alphabet)

    @classmethod
    def idempotent(cls, alphabet: Alphabet, label: Label, coeff=1) -> "Element":
        if label not in alphabet.labels:
            raise KeyError(f"unknown idempotent e{label}")
        return cls(alphabet, {(label, label, ()): coeff})

    @classmethod
    def word(cls, alphabet: Alphabet, *factors, coeff=1) -> "Element":
        key = alphabet.normalize(factors)
        if key is None:
            return cls(alphabet)
        return cls(alphabet, {key: coeff})

    def _new(self, terms) -> "Element":
        e = Element.__new__(Element)
        e.alphabet = self.alphabet
        e.terms = terms
        return e

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            return other
        raise TypeError(f"cannot combine Element with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        field = self.alphabet.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = field(out.get(w, 0) + c)
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return self._new(out)

    def __neg__(self):
        field = self.alphabet.field
        return self._new({w: field(-c) for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def scale(self, scalar) -> "Element":
        field = self.alphabet.field
        scalar = field(scalar)
        if not scalar:
            return self._new({})
        return self._new({w: field(c * scalar) for w, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        field = self.alphabet.field
        join = self.alphabet.join
        out: Dict[WordKey, object] = {}
        for (s1, t1, n1), c1 in self.terms.items():
            for (s2, t2, n2), c2 in other.terms.items():
                if s1 != t2:
                    continue
                key = (s2, t1, join(n1, n2))
                v = field(out.get(key, 0) + c1 * c2)
                if v:
                    out[key] = v
                else:
                    del out[key]
        return self._new(out)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    # -- inspection --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Common degree, or ``ZERO`` / ``INHOMOGENEOUS``."""
        if not self.terms:
            return ZERO
        degs = {self.alphabet.word_degree(w[2]) for w in self.terms}
        return degs.pop() if len(degs) == 1 else INHOMOGENEOUS

    def endpoints(self):
        """Set of ``(source, target)`` pairs occurring among the words."""
        return {(s, t) for s, t, _ in self.terms}

    def generators_used(self) -> set:
        used = set()
        for _, _, names in self.terms:
            used.update(names)
        return used

    def mentions(self, name: str) -> bool:
        inv = self.alphabet.inverse_of(name) if name in self.alphabet else None
        for _, _, names in self.terms:
            if name in names or (inv is not None and inv in names):
                return True
        return False

    def coefficient(self, key: WordKey):
        return self.terms.get(key, 0)

    def sort_key(self, key: WordKey):
        s, t, names = key
        return (self.alphabet.word_degree(names), len(names), names, str(s), str(t))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self.sort_key(kv[0]))

    def filter_length(self, length: int) -> "Element":
        return self._new({w: c for w, c in self.terms.items() if len(w[2]) == length})

    def relabel(self, alphabet: Alphabet) -> "Element":
        """Reinterpret the same terms in another alphabet (no checking)."""
        e = Element.__new__(Element)
        e.alphabet = alphabet
        e.terms = dict(self.terms)
        return e

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Element({render(self)!r})"


def render_word(key: WordKey) -> str:
    s, _, names = key
    return " ".join(names) if names else f"e{s}"


def render(element: Element) -> str:
    """Canonical text: leftmost factor printed first, ``^-1`` for inverses."""
    if not element.terms:
        return "0"
    pieces = []
    for i, (w, c) in enumerate(element.sorted_terms()):
        negative = _is_negative(c, element.alphabet.field)
        mag = -c if negative else c
        body = render_word(w)
        if mag != 1:
            body = f"{mag} {body}"
        if i == 0:
            pieces.append(f"- {body}" if negative else body)
        else:
            pieces.append(("- " if negative else "+ ") + body)
    return " ".join(pieces)


def _is_negative(c, field) -> bool:
    if isinstance(field, PrimeField):
        return False
    return c < 0


_COEFF = re.compile(r"^-?\d+(/\d+)?$")


def parse_element(alphabet: Alphabet, text: str) -> Element:
    """Parse the canonical text form back into an :class:`Element`."""
    tokens = text.split()
    if tokens == ["0"]:
        return Element.zero(alphabet)
    result = Element.zero(alphabet)
    sign = 1
    coeff = None
    factors: list = []

    def flush():
        nonlocal result, coeff, factors
        if not factors:
            raise ValueError(f"term without factors in {text!r}")
        c = alphabet.field(Fraction(coeff) if coeff is not None else 1)
        result = result + Element.word(alphabet, *factors, coeff=sign * c)
        coeff = None
        factors = []

    for tok in tokens:
        if tok in "+-":
            if factors:
                flush()
            sign = 1 if tok == "+" else -1
        elif _COEFF.match(tok) and not factors and coeff is None:
            coeff = tok
        elif tok in alphabet:
            factors.append(tok)
        else:
            label = alphabet.label_of_token(tok)
            if label is None:
                raise ValueError(f"unknown token {tok!r}")
            factors.append(Idempotent(label))
    flush()
    return result
