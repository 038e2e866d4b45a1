"""Check records shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class Check:
    name: str
    ok: bool
    residue: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": "pass" if self.ok else "fail"}
        if self.residue is not None:
            d["residue"] = self.residue
        return d

    def line(self) -> str:
        tail = f"  residue: {self.residue}" if (self.residue and not self.ok) else ""
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}{tail}"


@dataclass
class Report:
    title: str
    checks: List[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, residue: Optional[str] = None) -> Check:
        c = Check(name, bool(ok), residue)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.residue))

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.ok]

    def lines(self) -> List[str]:
        return [c.line() for c in self.checks]

    def __str__(self):
        status = "pass" if self.ok else "FAIL"
        return "\n".join([f"{self.title}: {status}"] + ["  " + s for s in self.lines()])
