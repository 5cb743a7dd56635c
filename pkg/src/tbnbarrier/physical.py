"""Free energy of a configuration in kcal/mol.

Each bond is a domain of ``length`` base pairs at ``dG_bp`` per pair, and
every association that joins two complexes pays ``dG_assoc`` plus the
concentration term ``RT ln(1/C)``.  The all-separate, unbonded configuration
is the zero point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Configuration, TBNError

GAS_CONSTANT = 0.0019872  # kcal / (mol K)


@dataclass(frozen=True)
class PhysicalParams:
    length: int
    conc: float = 1.0
    temp: float = 298.15
    dG_bp: float = -1.5
    dG_assoc: float = 1.96

    def __post_init__(self):
        if self.length < 1:
            raise TBNError("domain length must be at least 1")
        if not 0 < self.conc <= 1:
            raise TBNError("concentration must be in (0, 1] mol/L")
        if self.temp <= 0:
            raise TBNError("temperature must be positive")

    @property
    def bond_term(self) -> float:
        return self.dG_bp * self.length

    @property
    def association_term(self) -> float:
        return self.dG_assoc + GAS_CONSTANT * self.temp * math.log(1 / self.conc)


def gibbs_energy(c: Configuration, p: PhysicalParams) -> float:
    return p.bond_term * c.bonds + p.association_term * (c.monomer_count - c.polymer_count)
