"""Exact volume of the trace-nonnegative polytope and realizability tooling
for trace-zero spectra of the real nonnegative inverse eigenvalue problem."""

from .distributions import (
    IrwinHallParams,
    UniformSumParams,
    ih_cdf,
    ih_pdf,
    us_cdf,
    us_cdf_float,
    us_pdf,
    us_pdf_float,
)
from .polytope import (
    ComplexRegionParams,
    MCEstimate,
    TracePolytope,
    ambient_volume,
    contains,
    exact_volume,
    mc_volume,
    mc_volume_complex,
)
from .spectra import (
    NotRealizable,
    PartitionCertificate,
    Spectrum,
    companion_realize,
    decide_restricted_realizable,
    realize_union,
    verify_realization,
)

__version__ = "0.1.0"
