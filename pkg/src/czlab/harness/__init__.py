"""Verification harness: claims, generators, reports, experiments, CLI."""

from .claims import (
    Claim,
    REGISTRY,
    lambda_grid,
    list_claims,
    run_all,
    verify_claim,
    weak_type_ratio,
)
from .experiment import load_config, run_experiment
from .generators import (
    AtomFamily,
    generate_adversarial,
    planted_cz,
    rough_symbol,
)
from .polar import PolarRing, ring_grad_l1, ring_l1_error
from .reports import ClaimReport, config_hash, write_summary_csv

__all__ = [
    "AtomFamily",
    "Claim",
    "ClaimReport",
    "PolarRing",
    "REGISTRY",
    "config_hash",
    "generate_adversarial",
    "lambda_grid",
    "list_claims",
    "load_config",
    "planted_cz",
    "ring_grad_l1",
    "ring_l1_error",
    "rough_symbol",
    "run_all",
    "run_experiment",
    "verify_claim",
    "weak_type_ratio",
    "write_summary_csv",
]
