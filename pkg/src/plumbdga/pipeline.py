"""Sequential automorphism/destabilization runs with a step log."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .dga import (ElementaryAutomorphism, Presentation, apply_automorphism,
                  check_d_squared, check_round_trip, destabilize)
from .report import Report


class PipelineError(RuntimeError):
    def __init__(self, step: int, message: str, residue: Optional[str] = None):
        super().__init__(f"step {step}: {message}" + (f" (residue: {residue})" if residue else ""))
        self.step = step
        self.residue = residue


@dataclass
class Step:
    index: int
    kind: str  # "automorphism" or "destabilize"
    description: str
    d_squared: bool
    round_trip: Optional[bool] = None

    def to_dict(self) -> dict:
        d = {"index": self.index, "kind": self.kind, "description": self.description,
             "d_squared": self.d_squared}
        if self.round_trip is not None:
            d["round_trip"] = self.round_trip
        return d

    def line(self) -> str:
        return f"{self.index:3d} {self.kind:12s} {self.description}"


@dataclass
class Pipeline:
    current: Presentation
    check_each_step: bool = True
    log: List[Step] = field(default_factory=list)

    def _check(self, kind: str, description: str, round_trip: Optional[bool] = None) -> None:
        ok = True
        if self.check_each_step:
            rep = check_d_squared(self.current)
            ok = rep.ok
            if not ok:
                bad = rep.failures()[0]
                self.log.append(Step(len(self.log) + 1, kind, description, False, round_trip))
                raise PipelineError(len(self.log), f"d^2 fails after {description} at {bad.name}",
                                    bad.residue)
        self.log.append(Step(len(self.log) + 1, kind, description, ok, round_trip))

    def substitute(self, pivot: str, image) -> "Pipeline":
        """Apply the elementary automorphism ``pivot -> image``."""
        p = self.current
        try:
            sigma = ElementaryAutomorphism.from_image(p, pivot, image)
            sigma.validate(p)
        except ValueError as exc:
            raise PipelineError(len(self.log) + 1, str(exc)) from exc
        desc = sigma.describe(p)
        rt = None
        if self.check_each_step:
            rt = check_round_trip(sigma.as_map(p), sigma.inverse(p).as_map(p)).ok
        self.current = apply_automorphism(p, sigma)
        self._check("automorphism", desc, rt)
        if rt is False:
            raise PipelineError(len(self.log), f"inverse of {desc} does not round-trip")
        return self

    def destabilize(self, x: str, y: str) -> "Pipeline":
        try:
            self.current = destabilize(self.current, x, y)
        except ValueError as exc:
            raise PipelineError(len(self.log) + 1, str(exc)) from exc
        self._check("destabilize", f"({x}, {y})")
        return self

    def expect(self, table, label: str) -> None:
        """Raise unless every listed differential equals the given text."""
        p = self.current
        for name, text in table.items():
            got = p.differential(name)
            want = p.el(text) if isinstance(text, str) else text
            if got != want:
                raise PipelineError(len(self.log), f"{label}: d {name} = {got}, expected {want}",
                                    str(got - want))

    def report(self, title: str) -> Report:
        rep = Report(title)
        for s in self.log:
            rep.add(f"step {s.index} {s.kind} {s.description}",
                    s.d_squared and s.round_trip is not False)
        return rep

    @property
    def automorphism_count(self) -> int:
        return sum(1 for s in self.log if s.kind == "automorphism")

    @property
    def destabilization_count(self) -> int:
        return sum(1 for s in self.log if s.kind == "destabilize")
