"""Planning and simulation toolkit for RF wireless energy transfer networks.

Four experiment families are covered: deployment economics over a planning
horizon, placement of ambient-powered beacons under a max-min received-power
objective, Monte Carlo ambient-harvesting outage, and transmit-power /
RF-chain-count trade-offs for multicast energy beamforming. Everything is
seeded and reproducible; the `wetplan` CLI drives batch runs and emits CSV
plus a run manifest.
"""

__version__ = "0.1.0"

from .ambient import AmbientMap, GaussianComponent, Rect, ambient_power, transmit_power
from .beampower import (
    ChannelModel,
    ConsumptionPoint,
    MulticastProblem,
    PrecoderError,
    PrecoderSolution,
    RfChainSweep,
    consumption,
    min_power_precoder,
    sweep_rf_chains,
)
from .channel import (
    ArrayConfig,
    PathLossParams,
    Position2D,
    RicianParams,
    TransmitterField,
    path_gain,
    sample_channel,
    sample_channels,
    sample_hppp,
    steering_vector,
)
from .costs import (
    SCENARIOS,
    CostBreakdown,
    CostParams,
    battery_replacements,
    crossover_device_count,
    scenario_cost,
    sweep_devices,
    sweep_hardware_lifetime,
)
from .deployment import (
    DeploymentProblem,
    DeploymentSolution,
    SolverConfig,
    grid_oracle,
    objective,
    optimize,
    received_power,
)
from .harvesting import (
    ARCHITECTURES,
    Codebook,
    HarvesterCurve,
    dft_codebook,
    harvest,
    harvest_architecture,
    rf_combine,
)
from .outage import OutageConfig, OutageResult, field_harvest, run_outage, run_trial, sweep_density

__all__ = [
    "__version__",
    "AmbientMap",
    "GaussianComponent",
    "Rect",
    "ambient_power",
    "transmit_power",
    "ChannelModel",
    "ConsumptionPoint",
    "MulticastProblem",
    "PrecoderError",
    "PrecoderSolution",
    "RfChainSweep",
    "consumption",
    "min_power_precoder",
    "sweep_rf_chains",
    "ArrayConfig",
    "PathLossParams",
    "Position2D",
    "RicianParams",
    "TransmitterField",
    "path_gain",
    "sample_channel",
    "sample_channels",
    "sample_hppp",
    "steering_vector",
    "SCENARIOS",
    "CostBreakdown",
    "CostParams",
    "battery_replacements",
    "crossover_device_count",
    "scenario_cost",
    "sweep_devices",
    "sweep_hardware_lifetime",
    "DeploymentProblem",
    "DeploymentSolution",
    "SolverConfig",
    "grid_oracle",
    "objective",
    "optimize",
    "received_power",
    "ARCHITECTURES",
    "Codebook",
    "HarvesterCurve",
    "dft_codebook",
    "harvest",
    "harvest_architecture",
    "rf_combine",
    "OutageConfig",
    "OutageResult",
    "field_harvest",
    "run_outage",
    "run_trial",
    "sweep_density",
]
