"""Local models for a crossing of two non-tree bands and their cancellation.

Two non-tree arrows ``a: 1 -> 2`` and ``a': 3 -> 4`` cross; the crossing
produces four generators ``p, q, r, s`` from vertex 3 to vertex 1.  Which
band ends carry a ``(e + c* c)`` factor instead of ``z`` depends on the case:

* case 1: both arcs end on the left (``z`` on both sides),
* case 2: both arcs end on the right (``e + c* c`` on both sides),
* case 3: mixed (``z`` on the left, ``e + c'* c'`` on the right).

Each case is reduced by a fixed automorphism script to the pure cancelling
form ``d p = q, d r = -s`` and the two pairs are removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .algebra import Generator
from .dga import Presentation
from .pipeline import Pipeline

# |p| = -2 keeps |q| = |r| odd, the parity used throughout the scripts
DEGREES = {"p": -2, "q": -1, "r": -1, "s": 0}

CANCELLING_FORM = {"p": "q", "q": "0", "r": "- s", "s": "0"}
CASE1_FORM = {"p": "z q + r z'", "q": "s z'", "r": "- z s", "s": "0"}

# (pivot, image) pairs, applied in order
CASE1_SCRIPT: List[Tuple[str, str]] = [
    ("s", "z^-1 s"),
    ("q", "q - z^-1 r z'"),
    ("q", "z^-1 q"),
]

REDUCTION_SCRIPTS: Dict[int, List[Tuple[str, str]]] = {
    1: [],
    2: [
        ("p", "p + zeta q - r zeta' - zeta s zeta'"),
        ("q", "q + s zeta'"),
        ("r", "r - zeta s"),
    ],
    3: [
        ("p", "p - r zeta'"),
        ("q", "q + s zeta'"),
    ],
}


def _ambient(case: int) -> Tuple[list, list, dict]:
    labels = [1, 3]
    gens = [Generator("z", 1, 1, 0, True), Generator("z'", 3, 3, 0, True)]
    diff = {}
    if case in (2, 3):
        labels += [4]
        gens += [Generator("c'", 3, 4, 0), Generator("c'*", 4, 3, 0), Generator("zeta'", 3, 3, -1)]
        diff.update({"c'": "0", "c'*": "0", "zeta'": "e3 + c'* c' - z'"})
    if case == 2:
        labels += [2]
        gens += [Generator("c", 1, 2, 0), Generator("c*", 2, 1, 0), Generator("zeta", 1, 1, -1)]
        diff.update({"c": "0", "c*": "0", "zeta": "e1 + c* c - z"})
    return sorted(labels), gens, diff


def build_secondary_quad(case: int) -> Presentation:
    """The crossing generators of the given case inside a minimal ambient algebra."""
    if case not in (1, 2, 3):
        raise ValueError(f"case must be 1, 2 or 3, got {case}")
    labels, gens, diff = _ambient(case)
    gens += [Generator(n, 3, 1, d) for n, d in DEGREES.items()]
    if case == 1:
        diff.update(CASE1_FORM)
    elif case == 2:
        diff.update({
            "p": "q + c* c q + r + r c'* c'",
            "q": "s + s c'* c'",
            "r": "- s - c* c s",
            "s": "0",
        })
    else:
        diff.update({
            "p": "z q + r + r c'* c'",
            "q": "s + s c'* c'",
            "r": "- z s",
            "s": "0",
        })
    return Presentation.build(labels, gens, diff, name=f"crossing case {case}")


@dataclass
class DestabResult:
    case: int
    pipeline: Pipeline

    @property
    def final(self) -> Presentation:
        return self.pipeline.current

    @property
    def log(self):
        return self.pipeline.log


def run_destab_script(case: int, check_each_step: bool = True) -> DestabResult:
    """Reduce to the first case, then to the cancelling form, then cancel both pairs.

    Raises ``PipelineError`` with the failing step if an intermediate table
    differs from the expected one.
    """
    pipe = Pipeline(build_secondary_quad(case), check_each_step)
    for pivot, image in REDUCTION_SCRIPTS[case]:
        pipe.substitute(pivot, image)
    pipe.expect(CASE1_FORM, f"case {case} reduction")
    for pivot, image in CASE1_SCRIPT:
        pipe.substitute(pivot, image)
    pipe.expect(CANCELLING_FORM, "cancelling form")
    pipe.destabilize("p", "q")
    pipe.destabilize("r", "s")
    return DestabResult(case, pipe)
