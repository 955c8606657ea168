#pragma once

#include <cstdint>

#include "idg/grid.hpp"
#include "idg/morphology.hpp"

namespace idg {

/// Which mask the distance-prior skeleton is computed from.
enum class SkeletonSource {
  DilatedRegion, // medial axis of the dilated bronchus region (default)
  Bronchus,      // medial axis of the raw bronchus mask
};

/// Hyper-parameters of the weight-map pipeline.
struct IdgConfig {
  int kernel_size = 19;        // cubic dilation kernel (odd)
  double theta = 1.5;          // std-deviation coefficient of the difficulty ramp
  double w_dila = 1.0;         // weight budget of the intensity prior
  double window_lo = -1000.0;  // HU normalization window
  double window_hi = 600.0;
  double sigma_floor = 1e-4;
  SkeletonSource skeleton_source = SkeletonSource::DilatedRegion;

  void validate() const;
};

/// Per-case Gaussian parameters of the airway intensities and of the
/// background difficulty values, fit on normalized [0,1] intensities.
struct AirwayIntensityModel {
  double mu_in = 0.0;
  double sigma_in = 0.0;
  double mu_out = 0.0;
  double sigma_out = 0.0;
  std::int64_t n_in = 0;
  std::int64_t n_out = 0;

  /// Background difficulty: intensities close to the airway mean score high.
  double outer_difficulty(double x) const { return 1.0 - (x - mu_in); }
};

/// Intensity-prior loss weight map: values in [1, 1+w_dila], exactly 1
/// outside the dilated region.
struct IntensityWeightMap {
  Volume3 map;
};

/// Mean and population std of the airway intensities, and of the difficulty
/// values of the full airway complement. Both sigmas are floored at
/// cfg.sigma_floor.
AirwayIntensityModel fit_airway_model(const Volume3& image_norm,
                                      const BinaryMask3& airway,
                                      const IdgConfig& cfg);

/// Clamped affine ramp: 0 at/below mu - theta*sigma, 1 at/above
/// mu + theta*sigma, linear in between. Continuous and non-decreasing.
double difficulty_F(double mu, double sigma, double theta, double x);

/// w = 1 + w_dila * F over the dilated region (inner voxels scored on raw
/// normalized intensity, outer voxels on the flipped difficulty value), 1
/// elsewhere.
IntensityWeightMap build_intensity_weight_map(const Volume3& image_norm,
                                              const DilatedRegion& region,
                                              const AirwayIntensityModel& model,
                                              const IdgConfig& cfg);

} // namespace idg
