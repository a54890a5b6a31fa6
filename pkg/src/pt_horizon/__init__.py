"""Reality-domain mapping for four-site lattice Hamiltonians with balanced
gain/loss couplings: closed-form positivity tests, an independent eigenvalue
oracle, and connected-component analysis of the coupling-space domain."""

from .errors import (DomainError, InvalidInputError, NumericalFailureError,
                     PreconditionError)
from .model import (CouplingPoint, DiscriminantTriple, SecularQuadratic,
                    SRoots, StripCoordinates, build_circular, build_straight,
                    c0_bound, energies, eval_discriminants, eval_p, eval_q,
                    eval_w, eval_w_expanded, limit_energies, parity_matrix,
                    s_roots, secular_coeffs, strip_coords,
                    w_positive_via_strip)
from .oracle import QuarticPoly, char_poly, eigenpairs, eigenvalues, in_domain_oracle
from .spectrum import SpectralClass, Spectrum, classify_values
from .topology import (BoundaryCurve, BoxSpec, ComponentReport, Mode,
                       SliceGrid, SliceSpec, components2d, components3d,
                       membership, sample_slice, segment_connected,
                       trace_boundary)

__version__ = "0.1.0"

__all__ = [
    "BoundaryCurve", "BoxSpec", "ComponentReport", "CouplingPoint",
    "DiscriminantTriple", "DomainError", "InvalidInputError", "Mode",
    "NumericalFailureError", "PreconditionError", "QuarticPoly",
    "SecularQuadratic", "SliceGrid", "SliceSpec", "SpectralClass", "Spectrum",
    "SRoots", "StripCoordinates", "build_circular", "build_straight",
    "c0_bound", "char_poly", "classify_values", "components2d",
    "components3d", "eigenpairs", "eigenvalues", "energies",
    "eval_discriminants", "eval_p", "eval_q", "eval_w", "eval_w_expanded",
    "in_domain_oracle", "limit_energies", "membership", "parity_matrix",
    "s_roots", "sample_slice", "secular_coeffs", "segment_connected",
    "strip_coords", "trace_boundary", "w_positive_via_strip",
]
