"""Optimization core: regularizers, Cayley chart, composite model and solvers."""

from varsmooth.optim.prox import (
    RegularizerKind,
    WeaklyConvexFunction,
    prox_l1,
    prox_mcp,
    moreau_value,
    moreau_grad,
)
from varsmooth.optim.cayley import (
    SkewParam,
    CayleyChart,
    cayley_inverse,
    cayley_forward,
    cayley_differential,
    cayley_adjoint_differential,
    chart_from_anchor,
    singularity_margin,
)
from varsmooth.optim.composite import (
    SmoothFunction,
    SmoothMapping,
    CompositeProblem,
    LipschitzModel,
    identity_mapping,
    gram_mapping,
    surrogate_value,
    surrogate_grad,
    true_value,
    ambient_smoothed_grad,
)
from varsmooth.optim.trace import SolverTrace, TerminationReason
from varsmooth.optim.vsmooth import StepMode, mu_at, backtrack, lipschitz_step, vsmooth_run
from varsmooth.optim.baselines import TangentVector, tangent_project, polar_retract, rsub_run, rsmooth_run

__all__ = [
    "RegularizerKind",
    "WeaklyConvexFunction",
    "prox_l1",
    "prox_mcp",
    "moreau_value",
    "moreau_grad",
    "SkewParam",
    "CayleyChart",
    "cayley_inverse",
    "cayley_forward",
    "cayley_differential",
    "cayley_adjoint_differential",
    "chart_from_anchor",
    "singularity_margin",
    "SmoothFunction",
    "SmoothMapping",
    "CompositeProblem",
    "LipschitzModel",
    "identity_mapping",
    "gram_mapping",
    "surrogate_value",
    "surrogate_grad",
    "true_value",
    "ambient_smoothed_grad",
    "SolverTrace",
    "TerminationReason",
    "StepMode",
    "mu_at",
    "backtrack",
    "lipschitz_step",
    "vsmooth_run",
    "TangentVector",
    "tangent_project",
    "polar_retract",
    "rsub_run",
    "rsmooth_run",
]
