"""Uplink SNR analysis for RIS- and repeater-assisted links.

The package answers three questions in closed form and validates every
answer by brute force:

* what SNR does a passive RIS, an active RIS, or an NCR deliver, with or
  without a direct BS-UE path, narrowband or averaged over a wideband
  direct channel;
* what amplification gain is optimal under an amplitude cap; and
* how much NCR amplification is required to match or beat each RIS
  variant.
"""

from .params import (
    ChannelGains,
    Deployment3D,
    DirectCoupling,
    SystemParams,
    db_to_linear_amplitude,
    db_to_linear_power,
    dbm_to_watts,
    distances,
    linear_to_db_amplitude,
    linear_to_db_power,
    watts_to_dbm,
)
from .channel import (
    CorrelationMatrix,
    Scatterer,
    UlaGeometry,
    free_space_gain,
    scatterer_correlation,
    ula_response,
    umi_street_canyon_gain,
)
from .snr import (
    SnrResult,
    avg_snr_active_ris,
    avg_snr_ncr,
    avg_snr_passive_ris,
    ncr_snr_ceiling,
    snr_active_ris,
    snr_active_ris_direct,
    snr_ncr,
    snr_ncr_direct,
    snr_passive_ris,
    snr_passive_ris_direct,
)
from .optimize import (
    GainCase,
    GainSolution,
    optimal_alpha_active,
    optimal_alpha_active_wideband,
    optimal_alpha_ncr,
    optimal_alpha_ncr_wideband,
)
from .crossover import (
    CrossoverVerdict,
    VerdictKind,
    required_alpha_vs_active,
    required_alpha_vs_active_direct,
    required_alpha_vs_passive,
    required_alpha_vs_passive_direct,
    required_alpha_wideband,
)
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .sweep import SweepTable, emit_csv, evaluate_curves, run_sweep

__version__ = "0.1.0"
