"""Direct-enumeration counts: sums of multiplicities over marking classes.

The refined count N_q^{μ1,μ2}(d, g') adds the q-refined multiplicity of
every equivalence class of marked floor diagrams of degree d·L and genus
g'; the complex count does the same with the numeric multiplicity.
Because the multiplicity only depends on the diagram and the type, each
diagram contributes (#marking classes) × multiplicity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .classes import CurveClass, SpecInvalid
from .diagrams import FloorDiagram, canonical_form, generate
from .markings import (
    MarkingSpec,
    signature_census,
    type_mult_complex,
    type_mult_refined,
)
from .qalgebra import HalfLaurent, eval_q1


@dataclass
class CountItem:
    diagram: FloorDiagram
    canonical: tuple
    marking_classes: int
    mult_refined: HalfLaurent
    mult_complex: Fraction

    @property
    def refined(self) -> HalfLaurent:
        return self.mult_refined.scale(self.marking_classes)

    @property
    def complex(self) -> Fraction:
        return self.marking_classes * self.mult_complex


@dataclass
class CountReport:
    spec: MarkingSpec
    items: list[CountItem] = field(default_factory=list)

    @property
    def total_refined(self) -> HalfLaurent:
        out = HalfLaurent.zero()
        for item in self.items:
            out = out + item.refined
        return out

    @property
    def total_complex(self) -> Fraction:
        return sum((item.complex for item in self.items), Fraction(0))

    def to_json_obj(self) -> dict:
        return {
            "class": self.spec.d.to_json_obj(),
            "genus": self.spec.genus,
            "mu1": list(self.spec.mu1),
            "mu2": list(self.spec.mu2),
            "items": [
                {
                    "diagram": item.diagram.to_json_obj(),
                    "marking_classes": item.marking_classes,
                    "mult_refined": item.mult_refined.to_text(),
                    "contribution": item.refined.to_text(),
                }
                for item in self.items
            ],
            "total_refined": self.total_refined.to_text(),
            "total_complex": str(self.total_complex),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def to_table(self) -> str:
        lines = [f"{'#':>3}  {'classes':>7}  {'multiplicity':<24} contribution"]
        for n, item in enumerate(self.items, start=1):
            lines.append(
                f"{n:>3}  {item.marking_classes:>7}  {item.mult_refined.to_text():<24} "
                f"{item.refined.to_text()}"
            )
        lines.append(f"total: {self.total_refined.to_text()}")
        return "\n".join(lines)


@lru_cache(maxsize=None)
def _diagrams(degree: int, genus: int) -> tuple[FloorDiagram, ...]:
    return tuple(generate(degree, genus))


def report(spec: MarkingSpec) -> CountReport:
    """Itemized contributions for one counting problem.

    One item per marked-diagram shape — the diagram together with the
    placement of its visible ends — with the number of marking classes
    sharing that shape; this is how such counts are usually drawn.
    """
    spec.validate()
    rep = CountReport(spec)
    for diagram in _diagrams(spec.d.dot_L(), spec.genus):
        census = signature_census(diagram, spec)
        mult_r = type_mult_refined(diagram, spec.mu1, spec.mu2)
        mult_c = type_mult_complex(diagram, spec.mu2)
        for sig in sorted(census):
            rep.items.append(
                CountItem(diagram, canonical_form(diagram), census[sig], mult_r, mult_c)
            )
    return rep


def count_refined(spec: MarkingSpec) -> HalfLaurent:
    return report(spec).total_refined


def count_complex(spec: MarkingSpec) -> Fraction:
    return report(spec).total_complex
