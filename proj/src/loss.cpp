#include "idg/loss.hpp"

#include <cmath>

#include "idg/parallel.hpp"

namespace idg {

LossMap bce_map(const Volume3& pred, const BinaryMask3& target, double eps) {
  if (!pred.shape.same_dims(target.shape))
    throw ValidationError("prediction and target shapes differ");
  if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("bce eps must be in (0, 0.5)");
  if ((pred.data < 0.0f).any() || (pred.data > 1.0f).any())
    throw ValidationError("prediction values must be probabilities in [0,1]");

  LossMap out;
  out.shape = pred.shape;
  out.values.resize(pred.size());
  const float* p = pred.data.data();
  const std::uint8_t* y = target.data.data();
  double* v = out.values.data();
  parallel_for(pred.size(), kVoxelGrain, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      const double pc = std::min(std::max(static_cast<double>(p[i]), eps), 1.0 - eps);
      v[i] = y[i] ? -std::log(pc) : -std::log(1.0 - pc);
    }
  });
  return out;
}

Volume3 fuse_weights(const IntensityWeightMap& w_in, const DistWeightMap& w_dis) {
  if (!w_in.map.shape.same_dims(w_dis.map.shape))
    throw ValidationError("weight map shapes differ");
  Volume3 out(w_in.map.shape);
  out.data = w_in.map.data * w_dis.map.data;
  return out;
}

double idg_loss(const LossMap& bce, const Volume3& fused) {
  if (!bce.shape.same_dims(fused.shape))
    throw ValidationError("loss map and weight map shapes differ");
  const double* v = bce.values.data();
  const float* w = fused.data.data();
  const std::int64_t n = bce.values.size();
  const double total = parallel_sum(n, kVoxelGrain, [&](std::int64_t b, std::int64_t e) {
    double s = 0.0;
    for (std::int64_t i = b; i < e; ++i) s += v[i] * static_cast<double>(w[i]);
    return s;
  });
  return total / static_cast<double>(n);
}

IdgWeightmapResult compute_idg_weightmap_full(const Volume3& image,
                                              const BinaryMask3& airway_gt,
                                              const IdgConfig& cfg) {
  cfg.validate();
  if (!image.shape.same_dims(airway_gt.shape))
    throw ValidationError("image and mask shapes differ");

  IdgWeightmapResult r;
  const Volume3 norm = normalize_window(image, cfg.window_lo, cfg.window_hi);
  r.region = build_dilated_region(airway_gt, cfg.kernel_size);
  r.skeleton = skeletonize(cfg.skeleton_source == SkeletonSource::DilatedRegion
                               ? r.region.dilated
                               : airway_gt);
  r.w_dis = build_distance_weight_map(r.region, r.skeleton, image.shape.sx,
                                      image.shape.sy, image.shape.sz);
  r.model = fit_airway_model(norm, airway_gt, cfg);
  r.w_in = build_intensity_weight_map(norm, r.region, r.model, cfg);
  r.fused = fuse_weights(r.w_in, r.w_dis);
  return r;
}

Volume3 compute_idg_weightmap(const Volume3& image, const BinaryMask3& airway_gt,
                              const IdgConfig& cfg) {
  return compute_idg_weightmap_full(image, airway_gt, cfg).fused;
}

} // namespace idg
