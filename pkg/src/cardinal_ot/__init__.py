"""Optimal transport for separable costs on the plane via cardinal flows and pivot measures."""

from .cardinal import (
    CardinalFlow,
    PivotMeasure,
    TransportPlan,
    flow_cost,
    flow_from_pivot,
    flow_to_plan,
    pivot_functional,
    pivot_of,
    plan_cost,
    plan_to_flow,
    validate_flow,
)
from .closedform import LineSpec, degenerate_pivot, line_flow, line_flow_general
from .costs import ConvexRadialCost, SeparableCost, eval_total, is_metric
from .measures import (
    TOL_MASS,
    DiscreteMeasure1D,
    DiscreteMeasure2D,
    disintegrate,
    make_measure_1d,
    make_measure_2d,
    marginal,
    product_measure,
    pushforward_affine,
)
from .mcf import build_network, optimal_cardinal_flow, solve
from .onedim import cdf, comonotone_plan, quantile, w1_cdf, w_1d
from .oracle import brute_force_wc, random_intermedium

__version__ = "0.1.0"
