"""Truncated rank-2 cluster scattering diagrams and their dilogarithm identities."""

from __future__ import annotations

from .dilog import li2, ltilde, ltilde_symbolic, rogers_l
from .group import DilogFactor, GroupAction, ProductExpr, compose, dilog_action, evaluate_product, inverse
from .identity import DIReport, DITerm, assemble_di, replay_trace_on_di, verify_di_numeric, verify_di_symbolic, y_variable
from .lattice import A1_1, A2, A2_2, B2, FixedData, normalization_factor, skew_form
from .scatter import Rank2CSD, build_csd, consistency_check, order_product, pentagon_sort_trace
from .series import LogSeries, TruncatedSeries

__all__ = [
    "A1_1", "A2", "A2_2", "B2", "DIReport", "DITerm", "DilogFactor", "FixedData", "GroupAction",
    "LogSeries", "ProductExpr", "Rank2CSD", "TruncatedSeries", "assemble_di", "build_csd", "compose",
    "consistency_check", "dilog_action", "evaluate_product", "inverse", "li2", "ltilde", "ltilde_symbolic",
    "normalization_factor", "order_product", "pentagon_sort_trace", "replay_trace_on_di", "rogers_l",
    "skew_form", "verify_di_numeric", "verify_di_symbolic", "y_variable",
]
