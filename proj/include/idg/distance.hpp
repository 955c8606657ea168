#pragma once

#include <Eigen/Core>

#include "idg/grid.hpp"
#include "idg/morphology.hpp"

namespace idg {

/// Exact squared Euclidean distances (mm^2) to the nearest seed voxel.
struct DistanceField {
  GridShape shape;
  Eigen::ArrayXd d2;
  double d_max = 0.0; // max distance over the designated region (mm)

  double distance_at(std::int64_t i) const { return std::sqrt(d2[i]); }
};

/// Distance-prior loss weight map: values in [1,2], exactly 1 outside the
/// dilated region, exactly 2 on the skeleton.
struct DistWeightMap {
  Volume3 map;
};

/// Separable lower-envelope transform, one parabolic pass per axis, with the
/// parabola abscissae scaled by the axis spacing. Exact up to round-off.
DistanceField edt_squared(const BinaryMask3& seeds, double sx, double sy, double sz);

inline DistanceField edt_squared(const BinaryMask3& seeds) {
  return edt_squared(seeds, seeds.shape.sx, seeds.shape.sy, seeds.shape.sz);
}

/// w(p) = 1 + (1 - d(p)/d_max) inside the dilated region, 1 outside, where
/// d is the distance to the skeleton and d_max its maximum over the dilated
/// region. d_max = 0 degenerates to w = 2 on the region.
DistWeightMap build_distance_weight_map(const DilatedRegion& region,
                                        const BinaryMask3& skeleton,
                                        double sx, double sy, double sz);

} // namespace idg
