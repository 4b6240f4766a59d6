"""Python access to the kssim numerical lab."""

from ._core import (
    __version__,
    criterion_count,
    criterion_title,
    dirichlet_beta,
    mode_spectrum,
    profile,
    run_criterion,
    square_lattice_zeta,
)

__all__ = [
    "__version__",
    "criterion_count",
    "criterion_title",
    "dirichlet_beta",
    "mode_spectrum",
    "profile",
    "run_criterion",
    "square_lattice_zeta",
]
