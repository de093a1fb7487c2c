"""Outage analysis of an interference-assisted energy-harvesting cognitive relay."""
from .analytic import AnalyticConsistencyError, AnalyticTerms, analytic_terms, secondary_outage_analytic
from .montecarlo import EHMode, MonteCarloEstimate, compare_modes, estimate_outage
from .optimizer import AlphaOptimum, optimize_alpha
from .power import PowerBudget, capped_powers
from .scenario import MeanGains, Scenario, ScenarioError, build_scenario, default_scenario, load_scenario

__all__ = [
    "AlphaOptimum",
    "AnalyticConsistencyError",
    "AnalyticTerms",
    "EHMode",
    "MeanGains",
    "MonteCarloEstimate",
    "PowerBudget",
    "Scenario",
    "ScenarioError",
    "analytic_terms",
    "build_scenario",
    "capped_powers",
    "compare_modes",
    "default_scenario",
    "estimate_outage",
    "load_scenario",
    "optimize_alpha",
    "secondary_outage_analytic",
]
