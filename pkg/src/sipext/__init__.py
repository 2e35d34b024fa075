"""Exact rational extensions of shape-invariant potentials with finite spectra.

Morse, hyperbolic Darboux-Poschl-Teller, Eckart and hyperbolic Rosen-Morse
potentials are extended by Darboux-Backlund transformations seeded with
nodeless prolonged eigenstates.  The exact layer lives in :mod:`sipext.exact`,
:mod:`sipext.potentials` and :mod:`sipext.dbt`; :mod:`sipext.oracle` checks
the results with an independent finite-difference eigensolver.
"""

__version__ = "0.1.0"

from .charts import Family
from .dbt import (
    ExtensionSpec,
    certify_regularity,
    extend_potential,
    extended_eigenstate,
    extended_polynomial,
    verify_enlarged_shape_invariance,
)
from .potentials import ParameterSet, dispersion, eckart, hdpt, hrm, morse

__all__ = [
    "ExtensionSpec",
    "Family",
    "ParameterSet",
    "certify_regularity",
    "dispersion",
    "eckart",
    "extend_potential",
    "extended_eigenstate",
    "extended_polynomial",
    "hdpt",
    "hrm",
    "morse",
    "verify_enlarged_shape_invariance",
]
