"""Two-photon interference on lossy, temperature-tunable beam splitters."""

__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    BiphotonState,
    HOMScan,
    HOMScanPoint,
    g2_zero,
    hom_scan,
    p11,
    p_absorbed,
    p_bunch,
    thz_to_rad_per_ps,
    visibility,
)
from .core import (  # noqa: E402
    BeamSplitter,
    PhysicalityReport,
    check_physical,
    phase_bound,
    random_physical_bs,
    scattering_matrix,
    unitary_dilation,
)
from .errors import (  # noqa: E402
    BaselineTooShort,
    DegenerateData,
    GridTooCoarse,
    LossyHOMError,
    NoConvergence,
    NonMonotonic,
    NotPhysical,
    ParseError,
    RowNotNormalized,
    UnknownPair,
    ZeroBaseline,
)
from .experiment import (  # noqa: E402
    SETTINGS,
    CountRecord,
    DetectorConfig,
    SourceSetting,
    classify,
    expected_rates,
    g2_sweep,
    reproduce_figure,
    simulate_counts,
)
from .fitting import FitResult, fit_scan  # noqa: E402
from .material import Branch, CalibrationTable, HysteresisModel, ThermalHistory, load_calibration  # noqa: E402
from .oracle import FrequencyGrid, OutcomeDistribution, fock_outcomes, quad_outcomes, sweep_check  # noqa: E402
from .thinfilm import LayerStack, effective_index, splitter_from_stack, tmm_stack  # noqa: E402

__all__ = [
    "__version__",
    # core
    "BeamSplitter", "PhysicalityReport", "check_physical", "phase_bound",
    "random_physical_bs", "scattering_matrix", "unitary_dilation",
    # analytic
    "BiphotonState", "HOMScan", "HOMScanPoint", "g2_zero", "hom_scan", "p11",
    "p_absorbed", "p_bunch", "thz_to_rad_per_ps", "visibility",
    # oracle
    "FrequencyGrid", "OutcomeDistribution", "fock_outcomes", "quad_outcomes", "sweep_check",
    # material
    "Branch", "CalibrationTable", "HysteresisModel", "ThermalHistory", "load_calibration",
    "LayerStack", "effective_index", "splitter_from_stack", "tmm_stack",
    # experiment
    "SETTINGS", "CountRecord", "DetectorConfig", "SourceSetting", "classify",
    "expected_rates", "g2_sweep", "reproduce_figure", "simulate_counts",
    "FitResult", "fit_scan",
    # errors
    "LossyHOMError", "NotPhysical", "ZeroBaseline", "BaselineTooShort", "GridTooCoarse",
    "ParseError", "NonMonotonic", "RowNotNormalized", "UnknownPair", "DegenerateData",
    "NoConvergence",
]
