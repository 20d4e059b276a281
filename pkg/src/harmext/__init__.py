"""Numerical laboratory for circle-map energy functionals.

The package computes, for monotone circle maps and their harmonic
(Poisson) extensions, a family of mutually comparable energies:

* ``poisson``: weighted Dirichlet-type integrals of the extension;
* ``discrete``: dyadic-arc length and gauge-distortion sums;
* ``boundary``: double integrals over the circle (Orlicz pair energy and
  the inverse-map kernel integral);
* ``orlicz`` / ``weights``: the gauge functions and Muckenhoupt-type
  weights entering the integrals;
* ``cantor``: staircase maps from iterated interval removal, the source
  of the divergence counterexamples;
* ``cli``: the ``harmext-lab`` command-line front end.
"""

from .report import EnergyParams, EnergyReport, SCHEMA_VERSION  # noqa: F401

__all__ = ["EnergyParams", "EnergyReport", "SCHEMA_VERSION"]
__version__ = "0.1.0"
