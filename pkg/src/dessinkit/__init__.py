"""Square-root invariants of Belyi maps, orbit-splitting censuses and odd-degree collapse."""

__version__ = "0.1.0"

from .perm import (  # noqa: E402
    Permutation,
    canonical_tuple,
    cycle_type,
    genus_of_passport,
    power_cycle_type,
    ram,
    simultaneously_conjugate,
    square_roots,
)
from .monodromy import (  # noqa: E402
    Constellation,
    FourConstellation,
    PreConstellation,
    compose_covers,
    constellation_from_pair,
    passport,
    sigma_pullback,
    xi_product,
)
from .groups import classify_group, nielsen_certificate, nielsen_equal  # noqa: E402
from .sqrt import sqct, sqrt_class, sqrt_oracle, theorem_checks, xi_sweep  # noqa: E402
from .orbits import (  # noqa: E402
    alpha_of,
    belyi_oracle,
    beta_of,
    eks_exists,
    m0_prime,
    m_prime,
    orbit_lower_bound,
    verify_lemmata,
)
from .ratpoly import RatMap, RatPoly, branch_data, is_belyi  # noqa: E402
from .collapse import CompositionChain, collapse_full, collapse_rational, collapse_toward_Q, verify_chain  # noqa: E402

__all__ = [
    "__version__",
    "CompositionChain",
    "Constellation",
    "FourConstellation",
    "Permutation",
    "PreConstellation",
    "RatMap",
    "RatPoly",
    "alpha_of",
    "belyi_oracle",
    "beta_of",
    "branch_data",
    "canonical_tuple",
    "classify_group",
    "collapse_full",
    "collapse_rational",
    "collapse_toward_Q",
    "compose_covers",
    "constellation_from_pair",
    "cycle_type",
    "eks_exists",
    "genus_of_passport",
    "is_belyi",
    "m0_prime",
    "m_prime",
    "nielsen_certificate",
    "nielsen_equal",
    "orbit_lower_bound",
    "passport",
    "power_cycle_type",
    "ram",
    "sigma_pullback",
    "simultaneously_conjugate",
    "sqct",
    "sqrt_class",
    "sqrt_oracle",
    "square_roots",
    "theorem_checks",
    "verify_chain",
    "verify_lemmata",
    "xi_product",
    "xi_sweep",
]
