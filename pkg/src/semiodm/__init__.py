"""Second-order semiclassical one-body density matrix of a zero-temperature
Fermi gas in d dimensions, with verification tooling."""

from .errors import (ContourNotConverged, DegenerateSeparation, DimensionMismatch, DomainError,
                     ForbiddenRegion, ModelUnsupported, NonpositiveSeparation, OrderOutOfRange,
                     QuadratureNotConverged, SemiodmError)
from .fermi import FermiContext, FermiFieldSample, allowed, sample, z_of
from .special import bessel_j, scaled_bessel, scaled_bessel_at_zero
from .potentials import (AnisotropicHarmonic, Analytic, CentralDifference, Custom, GaussianWell,
                         IsotropicHarmonic, Potential, Quartic, Zero, from_config)
from .odm import (OdmBreakdown, PairPoint, SymmetricPoint, gvodm, gvodm_diagonal,
                  gvodm_diagonal_terms, gvodm_sum, gvodm_terms, kodm, kodm_diagonal,
                  kodm_diagonal_terms, kodm_terms, thomas_fermi_density, thomas_fermi_kernel,
                  to_pair, to_symmetric)
from .bloch import (BlochSample, BlochTerm, bloch_closed, bloch_quadrature, bloch_terms,
                    inverse_laplace_kernel, laplace_route_odm, numeric_bromwich_check,
                    symmetric_bloch_terms, symmetric_wk_odm, symmetric_wk_split)
from .identities import IdentityReport, check_gradient_identities, taylor_V
from .oracle import (HarmonicOscillator1D, SpectrumSpec, exact_odm, idempotency_defect,
                     particle_number, turning_point)

__version__ = "0.1.0"

__all__ = [
    "ContourNotConverged", "DegenerateSeparation", "DimensionMismatch", "DomainError",
    "ForbiddenRegion", "ModelUnsupported", "NonpositiveSeparation", "OrderOutOfRange",
    "QuadratureNotConverged", "SemiodmError", "FermiContext", "FermiFieldSample", "allowed",
    "sample", "z_of", "bessel_j", "scaled_bessel", "scaled_bessel_at_zero",
    "AnisotropicHarmonic", "Analytic", "CentralDifference", "Custom", "GaussianWell",
    "IsotropicHarmonic", "Potential", "Quartic", "Zero", "from_config", "OdmBreakdown",
    "PairPoint", "SymmetricPoint", "gvodm", "gvodm_diagonal", "gvodm_diagonal_terms",
    "gvodm_sum", "gvodm_terms", "kodm", "kodm_diagonal", "kodm_diagonal_terms", "kodm_terms",
    "thomas_fermi_density", "thomas_fermi_kernel", "to_pair", "to_symmetric", "BlochSample",
    "BlochTerm", "bloch_closed", "bloch_quadrature", "bloch_terms", "inverse_laplace_kernel",
    "laplace_route_odm", "numeric_bromwich_check", "symmetric_bloch_terms", "symmetric_wk_odm",
    "symmetric_wk_split", "IdentityReport", "check_gradient_identities", "taylor_V",
    "HarmonicOscillator1D", "SpectrumSpec", "exact_odm", "idempotency_defect",
    "particle_number", "turning_point",
]
