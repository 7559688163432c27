"""Covering invariants of planar sets and empirical Remez-type certificates."""

__version__ = "0.1.0"

from .covering import (  # noqa: E402
    Covering,
    Disk,
    InvariantReport,
    PointSet,
    c_d,
    cd_lower_bound,
    covering_number,
    critical_radii,
    invariant_report,
    min_enclosing_disk,
    omega_cd,
    omega_d,
    rho_d,
)
from .polytools import ComplexPolynomial, find_roots, max_modulus_on_disk  # noqa: E402
from .remez import (  # noqa: E402
    complex_remez_bound,
    leading_coeff_bound,
    real_remez_bound,
    sp_remez_bound,
    verify_cartan,
    verify_leading_coeff,
    verify_polynomial_remez,
)
from .valence import count_solutions, power_sum_example, probe_valence, verify_distortion  # noqa: E402
from .curves import BivariatePolynomial, fiber, monodromy, singular_points  # noqa: E402
from .chains import chain_constant, search_chain, verify_global_remez, verify_local_remez  # noqa: E402
from .asymptotics import zr_study  # noqa: E402
