"""Matrix Möbius pseudo-distances ``d_Delta``, 2x2 functional calculus and
Schur-Agler checks for domains ``B_Delta = {||Delta(z)|| < 1}``."""

__version__ = "0.1.0"

from ._backend import NAME as backend  # noqa: E402
from .config import DEFAULT, Tolerances  # noqa: E402
from .distances import (  # noqa: E402
    annulus_da_symmetric,
    annulus_dA_symmetric,
    annulus_gap,
    caratheodory_from_mobius,
    d_cartan,
    d_delta,
    d_disk,
)
from .domains import (  # noqa: E402
    Annulus,
    BallRow,
    CartanIdentity,
    DirectSum,
    MultiPoly,
    PolydiscDiag,
    PolyMatrix,
    contains,
    direct_sum,
    parse_domain_spec,
    sample_interior,
)
from .matkernel import herm_eig, herm_sqrt, inverse, kron, op_norm  # noqa: E402
from .schuragler import (  # noqa: E402
    extremal_function,
    harris_certificate,
    random_realization,
    schwarz_pick_residual,
    transfer_eval,
)
from .tuples import (  # noqa: E402
    DiagTuple,
    apply_delta,
    apply_scalar,
    drury_perturb,
    make_tuple,
    sample_contractive_tuple,
    sin_theta,
)

__all__ = [
    "DEFAULT", "Annulus", "BallRow", "CartanIdentity", "DiagTuple", "DirectSum", "MultiPoly",
    "PolyMatrix", "PolydiscDiag", "Tolerances", "__version__", "annulus_dA_symmetric",
    "annulus_da_symmetric", "annulus_gap", "apply_delta", "apply_scalar", "backend",
    "caratheodory_from_mobius", "contains", "d_cartan", "d_delta", "d_disk", "direct_sum",
    "drury_perturb", "extremal_function", "harris_certificate", "herm_eig", "herm_sqrt",
    "inverse", "kron", "make_tuple", "op_norm", "parse_domain_spec", "random_realization",
    "sample_contractive_tuple", "sample_interior", "schwarz_pick_residual", "sin_theta",
    "transfer_eval",
]
