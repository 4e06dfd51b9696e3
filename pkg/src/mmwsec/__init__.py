"""Keyless physical-layer security for mmWave multi-antenna links.

Two transmitter-side techniques over a uniform linear array:

* randomized-subset analog beamforming — per symbol, a random antenna subset
  beamforms coherently to the receiver while the rest cancel there pairwise,
  randomizing the sidelobes seen by eavesdroppers;
* hybrid analog/digital precoding with opportunistic noise injection — a
  matched-filter data beam plus an orthogonal artificial-noise beam confined
  to threat sectors, realizable with few RF chains through a switch-augmented
  beamforming codebook.

Closed-form secrecy analytics and seeded Monte Carlo verification for both.
"""

__version__ = "0.1.0"

from .arrays import (
    ArrayConfig,
    InvalidAngleError,
    InvalidGeometryError,
    Scenario,
    TwoRayGain,
    dirichlet_ratio,
    free_space_path_loss,
    pattern_gain_sq,
    steering_matrix,
    steering_vector,
    thermal_noise_power,
    two_ray_gain,
    vehicular_scenario,
)
from .subset_jam import (
    BetaStats,
    InvalidSubsetSizeError,
    SubsetPartition,
    analog_weights,
    bernoulli_moments,
    beta,
    beta_stats_closed_form,
    draw_partition,
    partition_beta_variance,
    pattern_value,
)
from .an_precoding import (
    CombinedPrecoder,
    DegenerateSectorsError,
    MultisectorDesign,
    MultisectorSector,
    NoiseBeamDesign,
    NonOrthogonalInputsError,
    SectorSet,
    SingularGramError,
    combined_precoder,
    design_noise_beam,
    householder_complement,
    matched_filter,
    measured_c0,
    multisector_precoder,
    noise_beam,
)
from .hybrid import (
    DictionaryOverflowError,
    HybridPrecoder,
    RfDictionary,
    build_dictionary,
    factorize_components,
    hybrid_symbol,
    omp_factorize,
    split_rf_budget,
)
from .secrecy import (
    HybridEvSnr,
    ReceiverAngleError,
    SecrecyPoint,
    analog_secrecy_bound,
    analog_snr_ev,
    analog_snr_rx,
    analog_subset_bound,
    calibrated_c0,
    clamped_rate,
    hybrid_epsilon_bound,
    hybrid_secrecy_bound,
    hybrid_snr_ev,
    hybrid_snr_rx,
)
from .montecarlo import (
    BetaCdfResult,
    HybridSweepResult,
    McConfig,
    McResult,
    mc_beta_cdf,
    mc_beta_moments,
    mc_secrecy_analog,
    mc_secrecy_hybrid,
)
