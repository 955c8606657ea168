#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "idg/errors.hpp"

namespace idg {

/// Dimensions and voxel spacing of a dense 3D grid. Voxels are addressed
/// x-fastest: linear = x + nx*(y + ny*z). All modules share this layout.
struct GridShape {
  int nx = 0, ny = 0, nz = 0;
  double sx = 1.0, sy = 1.0, sz = 1.0; // voxel spacing in mm

  std::int64_t voxel_count() const {
    return static_cast<std::int64_t>(nx) * ny * nz;
  }
  std::int64_t index(int x, int y, int z) const {
    return x + static_cast<std::int64_t>(nx) * (y + static_cast<std::int64_t>(ny) * z);
  }
  void coords(std::int64_t i, int& x, int& y, int& z) const {
    x = static_cast<int>(i % nx);
    y = static_cast<int>((i / nx) % ny);
    z = static_cast<int>(i / (static_cast<std::int64_t>(nx) * ny));
  }
  bool contains(int x, int y, int z) const {
    return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
  }
  bool same_dims(const GridShape& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz;
  }
  bool operator==(const GridShape& o) const {
    return same_dims(o) && sx == o.sx && sy == o.sy && sz == o.sz;
  }
};

void validate_shape(const GridShape& s);

/// Dense 3D grid over a flat Eigen array, x-fastest storage.
template <typename Scalar>
struct Grid3 {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  GridShape shape;
  Array data;

  Grid3() = default;
  explicit Grid3(const GridShape& s, Scalar fill = Scalar(0)) : shape(s) {
    validate_shape(s);
    data = Array::Constant(s.voxel_count(), fill);
  }
  Grid3(const GridShape& s, Array values) : shape(s), data(std::move(values)) {
    validate_shape(s);
    if (data.size() != shape.voxel_count())
      throw ValidationError("grid data length does not match shape voxel count");
  }

  Scalar operator()(int x, int y, int z) const { return data[shape.index(x, y, z)]; }
  Scalar& operator()(int x, int y, int z) { return data[shape.index(x, y, z)]; }
  std::int64_t size() const { return data.size(); }
};

using Volume3 = Grid3<float>;
using BinaryMask3 = Grid3<std::uint8_t>; // values are strictly 0 or 1
using LabelVolume = Grid3<std::int32_t>;

inline std::int64_t count_foreground(const BinaryMask3& m) {
  return (m.data != 0).count();
}
inline BinaryMask3 complement(const BinaryMask3& m) {
  BinaryMask3 out(m.shape);
  out.data = (m.data == 0).cast<std::uint8_t>();
  return out;
}

/// Throws ValidationError if the volume holds NaN or Inf. Used at I/O
/// boundaries; internal operations keep values finite by construction.
void check_finite(const Volume3& v, const char* what = "volume");

/// Clamped linear rescale of intensities from [lo, hi] to [0, 1].
Volume3 normalize_window(const Volume3& v, double lo, double hi);

struct Coord3 {
  int x = 0, y = 0, z = 0;
};

template <typename Scalar>
Grid3<Scalar> crop(const Grid3<Scalar>& v, Coord3 origin, Coord3 size) {
  if (origin.x < 0 || origin.y < 0 || origin.z < 0 ||
      size.x <= 0 || size.y <= 0 || size.z <= 0 ||
      origin.x + size.x > v.shape.nx ||
      origin.y + size.y > v.shape.ny ||
      origin.z + size.z > v.shape.nz)
    throw ValidationError("crop out of bounds");
  GridShape s{size.x, size.y, size.z, v.shape.sx, v.shape.sy, v.shape.sz};
  Grid3<Scalar> out(s);
  for (int z = 0; z < size.z; ++z)
    for (int y = 0; y < size.y; ++y) {
      const std::int64_t src = v.shape.index(origin.x, origin.y + y, origin.z + z);
      const std::int64_t dst = s.index(0, y, z);
      for (int x = 0; x < size.x; ++x) out.data[dst + x] = v.data[src + x];
    }
  return out;
}

/// Writes `tile` into `dst` at `origin` (last writer wins on overlaps).
template <typename Scalar>
void embed(Grid3<Scalar>& dst, const Grid3<Scalar>& tile, Coord3 origin) {
  if (origin.x < 0 || origin.y < 0 || origin.z < 0 ||
      origin.x + tile.shape.nx > dst.shape.nx ||
      origin.y + tile.shape.ny > dst.shape.ny ||
      origin.z + tile.shape.nz > dst.shape.nz)
    throw ValidationError("embed out of bounds");
  for (int z = 0; z < tile.shape.nz; ++z)
    for (int y = 0; y < tile.shape.ny; ++y) {
      const std::int64_t dst0 = dst.shape.index(origin.x, origin.y + y, origin.z + z);
      const std::int64_t src0 = tile.shape.index(0, y, z);
      for (int x = 0; x < tile.shape.nx; ++x) dst.data[dst0 + x] = tile.data[src0 + x];
    }
}

/// 1D tile starts: 0, step = window-overlap, final start clamped to
/// extent-window, duplicates removed. Applied once per axis.
std::vector<int> plan_tiling(int extent, int window, int overlap);

/// Per-axis tiling of a full grid into window^3 crops.
struct TilingPlan {
  Coord3 window;
  Coord3 overlap;
  std::vector<int> starts_x, starts_y, starts_z;
};

TilingPlan make_tiling_plan(const GridShape& shape, Coord3 window, Coord3 overlap);

} // namespace idg
