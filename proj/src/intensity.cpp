#include "idg/intensity.hpp"

#include <cmath>

#include "idg/parallel.hpp"

namespace idg {

void IdgConfig::validate() const {
  if (kernel_size < 1 || kernel_size % 2 == 0)
    throw ValidationError("kernel_size must be odd and >= 1");
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");
  if (w_dila < 0.0) throw ValidationError("w_dila must be non-negative");
  if (!(window_lo < window_hi))
    throw ValidationError("intensity window: lo must be < hi");
  if (!(sigma_floor > 0.0)) throw ValidationError("sigma_floor must be positive");
}

namespace {

struct MaskedStats {
  double mean = 0.0;
  double sigma = 0.0; // population std (divide by N)
  std::int64_t n = 0;
};

// value_of(i) over voxels where selected(i); chunked deterministic reduction.
template <typename Select, typename Value>
MaskedStats masked_stats(std::int64_t n, const Select& selected, const Value& value_of) {
  MaskedStats st;
  double count = parallel_sum(n, kVoxelGrain, [&](std::int64_t b, std::int64_t e) {
    double c = 0.0;
    for (std::int64_t i = b; i < e; ++i) c += selected(i) ? 1.0 : 0.0;
    return c;
  });
  st.n = static_cast<std::int64_t>(count);
  if (st.n == 0) return st;

  const double sum = parallel_sum(n, kVoxelGrain, [&](std::int64_t b, std::int64_t e) {
    double s = 0.0;
    for (std::int64_t i = b; i < e; ++i)
      if (selected(i)) s += value_of(i);
    return s;
  });
  st.mean = sum / static_cast<double>(st.n);

  const double ss = parallel_sum(n, kVoxelGrain, [&](std::int64_t b, std::int64_t e) {
    double s = 0.0;
    for (std::int64_t i = b; i < e; ++i)
      if (selected(i)) {
        const double d = value_of(i) - st.mean;
        s += d * d;
      }
    return s;
  });
  st.sigma = std::sqrt(ss / static_cast<double>(st.n));
  return st;
}

} // namespace

AirwayIntensityModel fit_airway_model(const Volume3& image_norm,
                                      const BinaryMask3& airway,
                                      const IdgConfig& cfg) {
  cfg.validate();
  if (!image_norm.shape.same_dims(airway.shape))
    throw ValidationError("image and airway mask shapes differ");
  if (count_foreground(airway) == 0)
    throw PreconditionError("airway mask is empty");
  if ((image_norm.data < 0.0f).any() || (image_norm.data > 1.0f).any())
    throw ValidationError("intensity statistics require a normalized [0,1] image");

  const std::int64_t n = image_norm.size();
  const float* img = image_norm.data.data();
  const std::uint8_t* in = airway.data.data();

  AirwayIntensityModel model;
  const MaskedStats inner = masked_stats(
      n, [&](std::int64_t i) { return in[i] != 0; },
      [&](std::int64_t i) { return static_cast<double>(img[i]); });
  model.mu_in = inner.mean;
  model.sigma_in = std::max(inner.sigma, cfg.sigma_floor);
  model.n_in = inner.n;

  const MaskedStats outer = masked_stats(
      n, [&](std::int64_t i) { return in[i] == 0; },
      [&](std::int64_t i) { return model.outer_difficulty(img[i]); });
  if (outer.n == 0)
    throw PreconditionError("airway complement is empty; cannot fit the background model");
  model.mu_out = outer.mean;
  model.sigma_out = std::max(outer.sigma, cfg.sigma_floor);
  model.n_out = outer.n;
  return model;
}

double difficulty_F(double mu, double sigma, double theta, double x) {
  if (!(sigma > 0.0)) throw ValidationError("difficulty_F: sigma must be positive");
  if (!(theta > 0.0)) throw ValidationError("difficulty_F: theta must be positive");
  const double lo = mu - theta * sigma;
  const double hi = mu + theta * sigma;
  if (x >= hi) return 1.0;
  if (x <= lo) return 0.0;
  return (x - lo) / (2.0 * theta * sigma);
}

IntensityWeightMap build_intensity_weight_map(const Volume3& image_norm,
                                              const DilatedRegion& region,
                                              const AirwayIntensityModel& model,
                                              const IdgConfig& cfg) {
  cfg.validate();
  if (!image_norm.shape.same_dims(region.dilated.shape))
    throw ValidationError("image and region shapes differ");
  if (!(model.sigma_in > 0.0 && model.sigma_out > 0.0))
    throw ValidationError("intensity model sigmas must be positive");

  const std::int64_t n = image_norm.size();
  const float* img = image_norm.data.data();
  const std::uint8_t* inner = region.inner.data.data();
  const std::uint8_t* outer = region.outer.data.data();

  IntensityWeightMap out;
  out.map = Volume3(image_norm.shape);
  float* w = out.map.data.data();
  parallel_for(n, kVoxelGrain, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      if (outer[i]) {
        const double d = model.outer_difficulty(img[i]);
        w[i] = static_cast<float>(
            1.0 + cfg.w_dila * difficulty_F(model.mu_out, model.sigma_out, cfg.theta, d));
      } else if (inner[i]) {
        w[i] = static_cast<float>(
            1.0 + cfg.w_dila * difficulty_F(model.mu_in, model.sigma_in, cfg.theta, img[i]));
      } else {
        w[i] = 1.0f;
      }
    }
  });
  return out;
}

} // namespace idg
