"""Relaxed IMEX schemes with ENO/WENO reconstruction for degenerate reaction-diffusion."""
from .grid import BoundaryCondition, Field, Grid, build_grid, fill_ghosts
from .imex import TABLEAU_IDS, TableauPair, check_order_conditions, tableau
from .kernels import BACKEND
from .models import (
    PROBLEMS,
    ProblemSpec,
    fisher_problem,
    heat_problem,
    make_problem,
    pme_absorption_problem,
    porous_fisher_problem,
)
from .reconstruction import GradientOperator, ReconstructionScheme, reconstruct_faces, scheme_from_name
from .solver import NumericalFailure, RelaxedState, SchemeConfig, integrate, step

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundaryCondition",
    "Field",
    "GradientOperator",
    "Grid",
    "NumericalFailure",
    "PROBLEMS",
    "ProblemSpec",
    "ReconstructionScheme",
    "RelaxedState",
    "SchemeConfig",
    "TABLEAU_IDS",
    "TableauPair",
    "build_grid",
    "check_order_conditions",
    "fill_ghosts",
    "fisher_problem",
    "heat_problem",
    "integrate",
    "make_problem",
    "pme_absorption_problem",
    "porous_fisher_problem",
    "reconstruct_faces",
    "scheme_from_name",
    "step",
    "tableau",
]
