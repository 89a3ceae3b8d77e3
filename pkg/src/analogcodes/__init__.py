"""Linear analog error-correction codes: construction, metrics, channels, sweeps."""

from .channel import (
    NoiseModel,
    Reception,
    analytic_mse,
    awgn,
    encode,
    erase,
    erasure_decode,
    ml_decode,
)
from .codes import (
    CustomCode,
    DCTCode,
    DFTCode,
    DSTCode,
    LinearAnalogCode,
    RandomCode,
    RepetitionCode,
    descriptor_id,
    from_descriptor,
    load_generator,
    normalize,
    save_generator,
    to_descriptor,
)
from .matio import load_matrix, save_matrix
from .metrics import (
    MDS,
    NOT_MDS,
    SAMPLED_LIKELY_MDS,
    MdsVerdict,
    MetricsReport,
    average_distance_ratio,
    distance_ratio,
    encoding_power_gain,
    eigenvalue_spread,
    is_mdre,
    is_mds,
    metrics_report,
    min_distance_ratio,
    small_weight_witness,
)
from .simulate import (
    ComparisonTable,
    SimConfig,
    SimPoint,
    SimResult,
    compare_codes,
    emit_csv,
    emit_json,
    monte_carlo_mse,
    read_csv,
    run_sweep,
    sigma2_for_snr,
)
from .validation import MatrixFormatError, NotHermitianError, RankDeficientError

__version__ = "0.1.0"

__all__ = [
    "CustomCode",
    "DCTCode",
    "DFTCode",
    "DSTCode",
    "LinearAnalogCode",
    "RandomCode",
    "RepetitionCode",
    "normalize",
    "to_descriptor",
    "from_descriptor",
    "descriptor_id",
    "save_generator",
    "load_generator",
    "save_matrix",
    "load_matrix",
    "MetricsReport",
    "MdsVerdict",
    "MDS",
    "NOT_MDS",
    "SAMPLED_LIKELY_MDS",
    "encoding_power_gain",
    "distance_ratio",
    "min_distance_ratio",
    "average_distance_ratio",
    "eigenvalue_spread",
    "is_mdre",
    "is_mds",
    "small_weight_witness",
    "metrics_report",
    "NoiseModel",
    "Reception",
    "encode",
    "awgn",
    "ml_decode",
    "erase",
    "erasure_decode",
    "analytic_mse",
    "SimConfig",
    "SimPoint",
    "SimResult",
    "ComparisonTable",
    "sigma2_for_snr",
    "monte_carlo_mse",
    "run_sweep",
    "compare_codes",
    "emit_csv",
    "emit_json",
    "read_csv",
    "MatrixFormatError",
    "RankDeficientError",
    "NotHermitianError",
    "__version__",
]
