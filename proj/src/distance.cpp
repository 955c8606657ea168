#include "idg/distance.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "idg/parallel.hpp"

namespace idg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D lower envelope of parabolas f[q] + (w*(i-q))^2. Infinite samples carry
// "no seed in this line yet" and are skipped when building the envelope.
void parabolic_1d(double* f, int n, std::int64_t stride, double w,
                  std::vector<double>& scratch, std::vector<int>& vert,
                  std::vector<double>& bound) {
  scratch.resize(static_cast<std::size_t>(n));
  vert.resize(static_cast<std::size_t>(n));
  bound.resize(static_cast<std::size_t>(n) + 1);

  const double w2 = w * w;
  int k = -1;
  for (int i = 0; i < n; ++i) {
    const double fi = f[i * stride];
    scratch[i] = fi;
    if (fi == kInf) continue;
    double s;
    for (;;) {
      if (k < 0) {
        s = -kInf;
        break;
      }
      const int v = vert[k];
      s = (fi - scratch[v] + w2 * (static_cast<double>(i) * i -
                                   static_cast<double>(v) * v)) /
          (2.0 * w2 * (i - v));
      if (s > bound[k]) break;
      --k;
    }
    ++k;
    vert[k] = i;
    bound[k] = s;
    bound[k + 1] = kInf;
  }
  if (k < 0) return; // line has no finite sample

  int j = 0;
  for (int i = 0; i < n; ++i) {
    while (bound[j + 1] < i) ++j;
    const double dv = w * (i - vert[j]);
    f[i * stride] = dv * dv + scratch[vert[j]];
  }
}

void pass_axis(double* f, std::int64_t nlines, int len, std::int64_t stride,
               const std::function<std::int64_t(std::int64_t)>& line_base, double w) {
  parallel_for(nlines, 64, [&](std::int64_t lb, std::int64_t le) {
    std::vector<double> scratch, bound;
    std::vector<int> vert;
    for (std::int64_t l = lb; l < le; ++l)
      parabolic_1d(f + line_base(l), len, stride, w, scratch, vert, bound);
  });
}

} // namespace

DistanceField edt_squared(const BinaryMask3& seeds, double sx, double sy, double sz) {
  if (count_foreground(seeds) == 0)
    throw PreconditionError("distance transform requires at least one seed voxel");
  if (!(sx > 0.0 && sy > 0.0 && sz > 0.0))
    throw ValidationError("voxel spacing must be strictly positive");

  const GridShape& sh = seeds.shape;
  DistanceField out;
  out.shape = sh;
  out.shape.sx = sx;
  out.shape.sy = sy;
  out.shape.sz = sz;
  out.d2 = Eigen::ArrayXd::Constant(sh.voxel_count(), kInf);
  for (std::int64_t i = 0; i < sh.voxel_count(); ++i)
    if (seeds.data[i]) out.d2[i] = 0.0;

  double* f = out.d2.data();
  const std::int64_t nxy = static_cast<std::int64_t>(sh.nx) * sh.ny;
  pass_axis(f, nxy, sh.nx, 1, [&](std::int64_t l) { return l * sh.nx; }, sx);
  pass_axis(f, static_cast<std::int64_t>(sh.nx) * sh.nz, sh.ny, sh.nx,
            [&](std::int64_t l) { return l % sh.nx + nxy * (l / sh.nx); }, sy);
  pass_axis(f, nxy, sh.nz, nxy, [&](std::int64_t l) { return l; }, sz);

  out.d_max = std::sqrt(out.d2.maxCoeff());
  return out;
}

DistWeightMap build_distance_weight_map(const DilatedRegion& region,
                                        const BinaryMask3& skeleton,
                                        double sx, double sy, double sz) {
  if (!skeleton.shape.same_dims(region.dilated.shape))
    throw ValidationError("skeleton and region shapes differ");
  if (count_foreground(skeleton) == 0)
    throw PreconditionError("skeleton is empty");
  if ((skeleton.data != 0 && region.dilated.data == 0).any())
    throw PreconditionError("skeleton is not contained in the dilated region");

  const DistanceField field = edt_squared(skeleton, sx, sy, sz);
  const std::int64_t n = field.d2.size();

  double d_max = 0.0;
  for (std::int64_t i = 0; i < n; ++i)
    if (region.dilated.data[i]) d_max = std::max(d_max, std::sqrt(field.d2[i]));

  GridShape out_shape = region.dilated.shape;
  out_shape.sx = sx;
  out_shape.sy = sy;
  out_shape.sz = sz;
  DistWeightMap out;
  out.map = Volume3(out_shape);
  float* w = out.map.data.data();
  parallel_for(n, kVoxelGrain, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      if (!region.dilated.data[i]) {
        w[i] = 1.0f;
      } else if (d_max == 0.0) {
        w[i] = 2.0f;
      } else {
        w[i] = static_cast<float>(1.0 + (1.0 - std::sqrt(field.d2[i]) / d_max));
      }
    }
  });
  return out;
}

} // namespace idg
