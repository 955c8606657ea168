#pragma once

#include <Eigen/Core>

#include "idg/distance.hpp"
#include "idg/grid.hpp"
#include "idg/intensity.hpp"

namespace idg {

/// Voxel-wise binary cross-entropy values. Kept in double so loss algebra
/// holds to 1e-9.
struct LossMap {
  GridShape shape;
  Eigen::ArrayXd values;
};

/// Per-voxel -[y ln p + (1-y) ln(1-p)] with p clamped to [eps, 1-eps].
LossMap bce_map(const Volume3& pred, const BinaryMask3& target, double eps = 1e-7);

/// Element-wise product of the two prior maps.
Volume3 fuse_weights(const IntensityWeightMap& w_in, const DistWeightMap& w_dis);

/// Mean over all voxels of bce * fused.
double idg_loss(const LossMap& bce, const Volume3& fused);

/// Full pipeline from a raw CT volume and airway mask to the fused weight
/// map: normalize, dilate, skeletonize, distance prior, intensity prior,
/// element-wise product.
Volume3 compute_idg_weightmap(const Volume3& image, const BinaryMask3& airway_gt,
                              const IdgConfig& cfg);

/// Pipeline variant exposing the intermediate products.
struct IdgWeightmapResult {
  DilatedRegion region;
  BinaryMask3 skeleton;
  AirwayIntensityModel model;
  DistWeightMap w_dis;
  IntensityWeightMap w_in;
  Volume3 fused;
};

IdgWeightmapResult compute_idg_weightmap_full(const Volume3& image,
                                              const BinaryMask3& airway_gt,
                                              const IdgConfig& cfg);

} // namespace idg
