from .certificates import annulus_scan, bounded_estimate, non_spectral_witness
from .report import SweepConfig, SweepReport
from .sweeps import (
    recheck,
    sweep_metric_axioms,
    sweep_polyball_dilation,
    sweep_schwarz_pick,
    sweep_von_neumann,
)

__all__ = [
    "SweepConfig", "SweepReport", "annulus_scan", "bounded_estimate", "non_spectral_witness",
    "recheck", "sweep_metric_axioms", "sweep_polyball_dilation", "sweep_schwarz_pick",
    "sweep_von_neumann",
]
