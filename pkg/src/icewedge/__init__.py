"""Nonparametric incremental cost-effectiveness (ICE) inference.

Bootstrap confidence wedges on the cost-effectiveness plane, nonlinear ICE
preference maps, shadow-price selection and cost-effectiveness frontiers.
"""

from .bootstrap import BootstrapScatter, icer, resample
from .data_model import Arm, ArmSample, PatientRecord, SummaryStats, generate_demo_data, ingest_csv, summarize, write_csv
from .frontier import FrontierResult, TreatmentOption, compute_frontier, extended_dominance, mixture_compare, strict_dominance
from .preference import (
    OMEGA,
    AxiomReport,
    Grid,
    PreferenceMap,
    ReturnsToScale,
    check_axioms,
    evaluate,
    omega_bounds,
    returns_to_scale,
    signed_power,
)
from .scale import IceOutcome, Perspective, PriceSource, ShadowPrice, ice_scale, nearest_power_of_10, standardize
from .wedge import ConfidenceWedge, compute_wedge, ice_angle, quadrant_counts

__version__ = "0.1.0"
