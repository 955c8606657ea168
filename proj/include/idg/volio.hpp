#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "idg/grid.hpp"

namespace idg {

enum class NiftiDataType : std::int16_t {
  Uint8 = 2,
  Int16 = 4,
  Float32 = 16,
};

/// Decoded NIfTI-1 header fields the library interprets, plus the raw
/// 348 header bytes so orientation/affine fields survive passthrough
/// untouched (they are never interpreted; geometry comes from pixdim).
struct VolumeHeader {
  int dims[3] = {0, 0, 0};
  double spacing[3] = {1.0, 1.0, 1.0};
  NiftiDataType datatype = NiftiDataType::Float32;
  float scl_slope = 1.0f;
  float scl_inter = 0.0f;
  std::array<unsigned char, 348> raw{};

  GridShape grid_shape() const {
    return GridShape{dims[0], dims[1], dims[2], spacing[0], spacing[1], spacing[2]};
  }
};

/// Reads a scalar volume (.nii or .nii.gz). Values are raw*scl_slope +
/// scl_inter. Little-endian single-file NIfTI-1 with datatype uint8/int16/
/// float32 only; anything else throws FormatError.
Volume3 read_volume(const std::string& path, VolumeHeader* header = nullptr);

/// Reads a binary mask. Stored values must round to 0 or 1 (scl fields are
/// ignored for masks); violations throw FormatError.
BinaryMask3 read_mask(const std::string& path, VolumeHeader* header = nullptr);

/// Writes a float32 NIfTI-1 volume (slope 1, intercept 0). Compression is
/// chosen by extension (.gz). When `like` is given its raw header bytes are
/// carried over verbatim before dims/pixdim/datatype are stamped.
void write_volume(const std::string& path, const Volume3& v,
                  const VolumeHeader* like = nullptr);

/// Writes a mask as uint8.
void write_mask(const std::string& path, const BinaryMask3& m,
                const VolumeHeader* like = nullptr);

// Raw debug format: little-endian float32 voxels in <path>, plus a JSON
// sidecar {dims, spacing, dtype} at <path minus extension>.json.
void write_raw(const std::string& path, const Volume3& v);
Volume3 read_raw(const std::string& path);

} // namespace idg
