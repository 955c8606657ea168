#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "idg/grid.hpp"

namespace idg {

/// Centerline decomposition of a thinned skeleton. Voxels are linear
/// indices. Nodes are voxels whose skeleton degree (26-adjacency) is not 2;
/// a branch is a trail between two nodes whose interior voxels all have
/// degree 2. Every adjacency edge belongs to exactly one branch, so branch
/// lengths sum to the skeleton's physical length under half-edge weighting.
struct SkeletonGraph {
  GridShape shape;
  std::vector<std::int64_t> voxels;
  std::vector<std::vector<std::int64_t>> branches; // ordered voxel paths
  std::vector<std::int64_t> junctions;             // degree >= 3
  std::vector<std::int64_t> endpoints;             // degree == 1

  bool empty() const { return voxels.empty(); }
  /// Sum over branches of consecutive-step physical lengths (mm).
  double total_length_mm() const;
};

struct MetricsReport {
  double dsc = 0.0;
  double td = 0.0;
  double bd = 0.0;
  std::int64_t n_branches_gt = 0;
  std::int64_t n_branches_detected = 0;
  double skeleton_length_mm = 0.0;
};

/// 2|P and G| / (|P| + |G|); 1.0 when both masks are empty.
double dsc(const BinaryMask3& pred, const BinaryMask3& gt);

SkeletonGraph decompose_branches(const BinaryMask3& skeleton);

/// Fraction of the GT skeleton's physical length covered by the prediction
/// (largest 26-connected component when reduce_to_largest). Each skeleton
/// voxel contributes half of its incident adjacency-edge lengths.
double tree_length_detected(const BinaryMask3& pred, const BinaryMask3& gt_skeleton,
                            double sx, double sy, double sz,
                            bool reduce_to_largest = true);

/// Fraction of GT branches whose voxel coverage by the prediction (largest
/// component when reduce_to_largest) reaches `threshold`.
double branches_detected(const BinaryMask3& pred, const SkeletonGraph& graph,
                         double threshold = 0.8, bool reduce_to_largest = true);

struct ErrorHistogram {
  std::vector<double> bin_lo, bin_hi;
  std::vector<std::int64_t> fp_counts; // pred & !gt
  std::vector<std::int64_t> fn_counts; // !pred & gt
};

/// Intensity histograms of the misclassified voxels, uniform bins on [0,1].
ErrorHistogram error_intensity_histogram(const Volume3& image, const BinaryMask3& pred,
                                         const BinaryMask3& gt, int bins);

/// Scores one case. The GT skeleton is thinned from `gt` unless an external
/// centerline is supplied.
MetricsReport score_case(const BinaryMask3& pred, const BinaryMask3& gt,
                         double bd_threshold = 0.8, bool reduce_to_largest = true,
                         const BinaryMask3* gt_skeleton = nullptr);

} // namespace idg
