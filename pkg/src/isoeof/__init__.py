"""Entanglement of formation for isotropic states on C^d (x) C^d.

All entropies are in bits.
"""

from .core import (
    SchmidtVector,
    binary_entropy,
    bits_to_nats,
    fraction_of_schmidt,
    pure_state_entanglement,
    shannon_entropy,
)
from .eof import EofResult, eof_curve, eof_isotropic, eof_isotropic_numeric
from .hull import (
    ConvexEnvelope,
    numeric_envelope,
    second_derivative_probe,
    tangent_knee,
    verify_conjecture,
)
from .rcurve import (
    branch_value,
    gamma_plus,
    oracle_min_entropy,
    r_curve_csv_rows,
    r_pointwise_min,
)
from .states import (
    IsotropicState,
    fidelity,
    isotropic_density,
    max_entangled_projector,
    pure_state_from_schmidt,
)
from .twirl import (
    TwirlReport,
    haar_random_unitary,
    twirl_closed_form,
    twirl_monte_carlo,
    twirl_once,
)

__version__ = "0.1.0"
