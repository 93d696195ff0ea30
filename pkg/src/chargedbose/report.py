"""Itemized energy-bound reports with exact rational exponents."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = ["Tag", "BoundTerm", "BoundReport"]


class Tag(str, enum.Enum):
    """Where a reported term comes from in the trial-state calculation."""

    ENERGY_EXPECTATION = "energy_expectation"
    PAIRING_ENERGY = "pairing_energy"
    PACKET_SCHEDULE = "packet_schedule"
    TRACE = "trace"
    KINETIC = "kinetic"
    PACKET_KERNEL = "packet_kernel"
    NUMBER_VARIANCE = "number_variance"
    NUMBER_TAIL = "number_tail"
    CONDENSATE_KINETIC = "condensate_kinetic"
    MISMATCH = "mismatch"
    EXCHANGE = "exchange"
    COULOMB_PACKET = "coulomb_packet"
    NEUTRALITY = "neutrality"
    FOLDY_LIMIT = "foldy_limit"


@dataclass(frozen=True)
class BoundTerm:
    name: str
    value: float
    tag: Tag
    exponent: Fraction | None = None
    constant: str | None = None  # name of the configurable constant multiplying it

    def as_row(self) -> dict:
        return {
            "term": self.name,
            "value": self.value,
            "paper_eq": self.tag.value,
            "exponent": "" if self.exponent is None else str(self.exponent),
        }


@dataclass(frozen=True)
class BoundReport:
    """Ordered terms; the first one named ``main`` is the leading contribution."""

    title: str
    variable: str  # the large parameter the exponents refer to ("n", "N", "rho")
    terms: tuple
    extras: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return math.fsum(t.value for t in self.terms)

    def term(self, name: str) -> BoundTerm:
        for t in self.terms:
            if t.name == name:
                return t
        raise KeyError(name)

    @property
    def main(self) -> BoundTerm:
        return self.term("main")

    @property
    def residual_ratio(self) -> float:
        m = self.main.value
        return (self.total - m) / abs(m) if m else math.inf

    def rows(self) -> list[dict]:
        return [t.as_row() for t in self.terms]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "variable": self.variable,
            "terms": self.rows(),
            "total": self.total,
            "residual_ratio": self.residual_ratio,
            "extras": self.extras,
        }
