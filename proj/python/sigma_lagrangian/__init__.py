"""Lagrangian submanifolds foliated by round spheres: closed forms, orbits of
the equivariant Hamiltonian-stationary system, and their phase integrals."""

from ._core import (
    FoliatedSpec,
    SigmaError,
    catalog,
    classify,
    cli,
    closure,
    critical_energy,
    energy,
    fixed_point,
    immersion,
    integrate,
    lagrangian_angle,
    make_preset,
    mean_curvature,
    mesh,
    phase,
    phi_type1_lambda,
    phi_type2,
    phi_type3,
    preset_names,
    profile,
    random_spec,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
