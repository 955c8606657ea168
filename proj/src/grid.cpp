#include "idg/grid.hpp"

#include <algorithm>
#include <cmath>

namespace idg {

void validate_shape(const GridShape& s) {
  if (s.nx <= 0 || s.ny <= 0 || s.nz <= 0)
    throw ValidationError("grid extents must be positive");
  if (!(s.sx > 0.0) || !(s.sy > 0.0) || !(s.sz > 0.0))
    throw ValidationError("voxel spacing must be strictly positive");
}

void check_finite(const Volume3& v, const char* what) {
  if (!v.data.isFinite().all())
    throw ValidationError(std::string(what) + " contains non-finite values");
}

Volume3 normalize_window(const Volume3& v, double lo, double hi) {
  if (!(lo < hi)) throw ValidationError("invalid intensity window: lo must be < hi");
  const float flo = static_cast<float>(lo);
  const float scale = static_cast<float>(1.0 / (hi - lo));
  Volume3 out(v.shape);
  out.data = ((v.data - flo) * scale).cwiseMax(0.0f).cwiseMin(1.0f);
  return out;
}

std::vector<int> plan_tiling(int extent, int window, int overlap) {
  if (window > extent) throw ValidationError("tiling window exceeds extent");
  if (overlap < 0 || overlap >= window)
    throw ValidationError("tiling overlap must satisfy 0 <= overlap < window");
  const int step = window - overlap;
  std::vector<int> starts;
  for (int s = 0; s + window < extent; s += step) starts.push_back(s);
  const int last = extent - window;
  if (starts.empty() || starts.back() != last) starts.push_back(last);
  return starts;
}

TilingPlan make_tiling_plan(const GridShape& shape, Coord3 window, Coord3 overlap) {
  TilingPlan plan;
  plan.window = window;
  plan.overlap = overlap;
  plan.starts_x = plan_tiling(shape.nx, window.x, overlap.x);
  plan.starts_y = plan_tiling(shape.ny, window.y, overlap.y);
  plan.starts_z = plan_tiling(shape.nz, window.z, overlap.z);
  return plan;
}

} // namespace idg
