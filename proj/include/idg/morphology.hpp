#pragma once

#include <cstdint>
#include <vector>

#include "idg/grid.hpp"

namespace idg {

/// Airway mask expanded by a cubic structuring element, split into the
/// original foreground (inner) and the added shell (outer).
struct DilatedRegion {
  BinaryMask3 dilated;
  BinaryMask3 inner;
  BinaryMask3 outer;
  int kernel_size = 1;
};

/// Minkowski dilation with a centered s*s*s cube, clipped at the volume
/// faces. Separable: one 1D max pass per axis.
BinaryMask3 dilate_cube(const BinaryMask3& m, int s);

/// dilated = dilate_cube(bronchus, s); inner = bronchus; outer = dilated \ inner.
DilatedRegion build_dilated_region(const BinaryMask3& bronchus, int s);

/// Topology-preserving curve thinning: 26-connectivity for foreground,
/// 6-connectivity for background, six directional subiterations per cycle,
/// sequential simple-point deletion with curve endpoints kept. Iterates to
/// a fixed point, so the result is idempotent and preserves the number of
/// 26-connected components.
BinaryMask3 skeletonize(const BinaryMask3& m);

struct ComponentLabels {
  LabelVolume labels;              // 0 = background, 1..K decreasing size
  std::vector<std::int64_t> sizes; // sizes[k-1] = voxel count of label k
};

/// Labels are ordered by decreasing size; ties broken by the smallest linear
/// index of the component's first voxel.
ComponentLabels connected_components(const BinaryMask3& m, int connectivity = 26);

/// Voxels of label 1 under 26-connectivity; empty input gives empty output.
BinaryMask3 largest_component(const BinaryMask3& m);

/// True when deleting (x,y,z) keeps (26,6) topology. Exposed for tests.
bool is_simple_point(const BinaryMask3& m, int x, int y, int z);

} // namespace idg
