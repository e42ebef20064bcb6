"""Band-resolved photon correlations from strongly driven dilute atomic ensembles."""

__version__ = "0.1.0"

from .physics import (ALL_PAIRS, K_LASER, Band, BandPair, DriveParams, Geometry,
                      dressed_params, detector_wavevectors, momentum_transfers,
                      pair_g2, pair_phases, strong_field_intensities,
                      weak_field_intensity)
from .averaging import (AtomCloud, Sampled, Shell, Volume, averaged_pair_correlation,
                        orientation_average, sample_cloud, sampled_average,
                        shell_average, volume_average)
from .observables import (CorrelationCurve, ScanSpec, cauchy_schwarz_chi,
                          g2_scaling_report, intensity_curve, scan, tau_curve)
