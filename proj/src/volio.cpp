#include "idg/volio.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little,
              "NIfTI I/O assumes a little-endian host");

namespace idg {

namespace {

#pragma pack(push, 1)
struct Nifti1Header {
  std::int32_t sizeof_hdr;    // must be 348
  char data_type[10];
  char db_name[18];
  std::int32_t extents;
  std::int16_t session_error;
  char regular;
  char dim_info;
  std::int16_t dim[8];
  float intent_p1, intent_p2, intent_p3;
  std::int16_t intent_code;
  std::int16_t datatype;
  std::int16_t bitpix;
  std::int16_t slice_start;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  std::int16_t slice_end;
  char slice_code;
  char xyzt_units;
  float cal_max, cal_min;
  float slice_duration, toffset;
  std::int32_t glmax, glmin;
  char descrip[80];
  char aux_file[24];
  std::int16_t qform_code, sform_code;
  float quatern_b, quatern_c, quatern_d;
  float qoffset_x, qoffset_y, qoffset_z;
  float srow_x[4], srow_y[4], srow_z[4];
  char intent_name[16];
  char magic[4];
};
#pragma pack(pop)
static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must be 348 bytes");

int bitpix_of(NiftiDataType t) {
  switch (t) {
    case NiftiDataType::Uint8: return 8;
    case NiftiDataType::Int16: return 16;
    case NiftiDataType::Float32: return 32;
  }
  return 0;
}

// gzread handles both gzip and plain streams transparently.
class GzReader {
public:
  explicit GzReader(const std::string& path) {
    if (!std::filesystem::exists(path)) throw IoError("file not found: " + path);
    f_ = gzopen(path.c_str(), "rb");
    if (!f_) throw IoError("cannot open for reading: " + path);
  }
  ~GzReader() {
    if (f_) gzclose(f_);
  }
  GzReader(const GzReader&) = delete;
  GzReader& operator=(const GzReader&) = delete;

  void read(void* dst, std::size_t n, const std::string& path) {
    std::size_t done = 0;
    auto* p = static_cast<unsigned char*>(dst);
    while (done < n) {
      const unsigned chunk = static_cast<unsigned>(
          std::min<std::size_t>(n - done, 1u << 30));
      const int got = gzread(f_, p + done, chunk);
      if (got <= 0) throw FormatError("truncated or corrupt file: " + path);
      done += static_cast<std::size_t>(got);
    }
  }
  void skip(std::size_t n, const std::string& path) {
    std::vector<unsigned char> junk(std::min<std::size_t>(n, 1 << 16));
    std::size_t left = n;
    while (left > 0) {
      const std::size_t chunk = std::min(left, junk.size());
      read(junk.data(), chunk, path);
      left -= chunk;
    }
  }

private:
  gzFile f_ = nullptr;
};

bool wants_gzip(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

VolumeHeader parse_header(const Nifti1Header& h, const std::string& path) {
  if (h.sizeof_hdr != 348)
    throw FormatError("not a little-endian NIfTI-1 file (sizeof_hdr != 348): " + path);
  if (std::memcmp(h.magic, "n+1\0", 4) != 0) {
    if (std::memcmp(h.magic, "ni1\0", 4) == 0)
      throw FormatError("two-file NIfTI (.hdr/.img) is not supported: " + path);
    throw FormatError("bad NIfTI magic: " + path);
  }
  if (h.dim[0] < 3 || h.dim[0] > 7)
    throw FormatError("expected a 3D volume, got dim[0]=" + std::to_string(h.dim[0]));
  for (int d = 4; d <= h.dim[0]; ++d)
    if (h.dim[d] > 1)
      throw FormatError("expected a 3D volume, non-singleton dim " + std::to_string(d));
  if (h.datatype != static_cast<std::int16_t>(NiftiDataType::Uint8) &&
      h.datatype != static_cast<std::int16_t>(NiftiDataType::Int16) &&
      h.datatype != static_cast<std::int16_t>(NiftiDataType::Float32))
    throw FormatError("unsupported NIfTI datatype " + std::to_string(h.datatype) +
                      " (uint8, int16, float32 only): " + path);

  VolumeHeader out;
  for (int d = 0; d < 3; ++d) {
    out.dims[d] = h.dim[d + 1];
    out.spacing[d] = h.pixdim[d + 1];
    if (out.dims[d] <= 0) throw FormatError("non-positive dimension in header: " + path);
    if (!(out.spacing[d] > 0.0f))
      throw FormatError("non-positive pixdim in header: " + path);
  }
  out.datatype = static_cast<NiftiDataType>(h.datatype);
  out.scl_slope = h.scl_slope;
  out.scl_inter = h.scl_inter;
  std::memcpy(out.raw.data(), &h, 348);
  return out;
}

// Raw voxel payload as doubles prior to scaling.
std::vector<double> read_payload(const std::string& path, VolumeHeader& hdr) {
  GzReader in(path);
  Nifti1Header h{};
  in.read(&h, sizeof(h), path);
  hdr = parse_header(h, path);

  const float vox_offset = h.vox_offset;
  if (vox_offset < 348.0f) throw FormatError("invalid vox_offset: " + path);
  in.skip(static_cast<std::size_t>(vox_offset) - 348, path);

  const std::int64_t n = hdr.grid_shape().voxel_count();
  std::vector<double> out(static_cast<std::size_t>(n));
  switch (hdr.datatype) {
    case NiftiDataType::Uint8: {
      std::vector<std::uint8_t> buf(out.size());
      in.read(buf.data(), buf.size(), path);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i];
      break;
    }
    case NiftiDataType::Int16: {
      std::vector<std::int16_t> buf(out.size());
      in.read(buf.data(), buf.size() * 2, path);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i];
      break;
    }
    case NiftiDataType::Float32: {
      std::vector<float> buf(out.size());
      in.read(buf.data(), buf.size() * 4, path);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i];
      break;
    }
  }
  return out;
}

Nifti1Header stamp_header(const GridShape& s, NiftiDataType dtype,
                          const VolumeHeader* like) {
  Nifti1Header h{};
  if (like) std::memcpy(&h, like->raw.data(), 348);
  h.sizeof_hdr = 348;
  h.regular = 'r';
  std::memset(h.dim, 0, sizeof(h.dim));
  h.dim[0] = 3;
  h.dim[1] = static_cast<std::int16_t>(s.nx);
  h.dim[2] = static_cast<std::int16_t>(s.ny);
  h.dim[3] = static_cast<std::int16_t>(s.nz);
  for (int d = 4; d < 8; ++d) h.dim[d] = 1;
  h.datatype = static_cast<std::int16_t>(dtype);
  h.bitpix = static_cast<std::int16_t>(bitpix_of(dtype));
  if (h.pixdim[0] == 0.0f) h.pixdim[0] = 1.0f;
  h.pixdim[1] = static_cast<float>(s.sx);
  h.pixdim[2] = static_cast<float>(s.sy);
  h.pixdim[3] = static_cast<float>(s.sz);
  for (int d = 4; d < 8; ++d) h.pixdim[d] = 0.0f;
  h.vox_offset = 352.0f;
  h.scl_slope = 1.0f;
  h.scl_inter = 0.0f;
  if (!like) h.xyzt_units = 2; // NIFTI_UNITS_MM
  std::memcpy(h.magic, "n+1\0", 4);
  return h;
}

void write_blob(const std::string& path, const Nifti1Header& h,
                const void* payload, std::size_t payload_bytes) {
  const char pad[4] = {0, 0, 0, 0}; // empty extension marker, vox_offset = 352
  if (wants_gzip(path)) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path);
    bool ok = gzwrite(f, &h, 348) == 348 && gzwrite(f, pad, 4) == 4;
    const auto* p = static_cast<const unsigned char*>(payload);
    std::size_t done = 0;
    while (ok && done < payload_bytes) {
      const unsigned chunk = static_cast<unsigned>(
          std::min<std::size_t>(payload_bytes - done, 1u << 30));
      ok = gzwrite(f, p + done, chunk) == static_cast<int>(chunk);
      done += chunk;
    }
    const bool closed = gzclose(f) == Z_OK;
    if (!ok || !closed) throw IoError("write failed: " + path);
  } else {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(&h), 348);
    f.write(pad, 4);
    f.write(static_cast<const char*>(payload), static_cast<std::streamsize>(payload_bytes));
    f.flush();
    if (!f) throw IoError("write failed: " + path);
  }
}

std::string sidecar_path(const std::string& raw_path) {
  std::filesystem::path p(raw_path);
  p.replace_extension(".json");
  return p.string();
}

} // namespace

Volume3 read_volume(const std::string& path, VolumeHeader* header) {
  VolumeHeader hdr;
  const std::vector<double> raw = read_payload(path, hdr);
  const double slope = hdr.scl_slope == 0.0f ? 1.0 : hdr.scl_slope;
  const double inter = hdr.scl_inter;
  Volume3 v(hdr.grid_shape());
  for (std::size_t i = 0; i < raw.size(); ++i)
    v.data[static_cast<std::int64_t>(i)] = static_cast<float>(raw[i] * slope + inter);
  check_finite(v, path.c_str());
  if (header) *header = hdr;
  return v;
}

BinaryMask3 read_mask(const std::string& path, VolumeHeader* header) {
  VolumeHeader hdr;
  const std::vector<double> raw = read_payload(path, hdr);
  BinaryMask3 m(hdr.grid_shape());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double r = std::round(raw[i]);
    if (!(r == 0.0 || r == 1.0))
      throw FormatError("mask contains non-binary value " + std::to_string(raw[i]) +
                        ": " + path);
    m.data[static_cast<std::int64_t>(i)] = r == 1.0 ? 1 : 0;
  }
  if (header) *header = hdr;
  return m;
}

void write_volume(const std::string& path, const Volume3& v, const VolumeHeader* like) {
  const Nifti1Header h = stamp_header(v.shape, NiftiDataType::Float32, like);
  write_blob(path, h, v.data.data(), static_cast<std::size_t>(v.size()) * 4);
}

void write_mask(const std::string& path, const BinaryMask3& m, const VolumeHeader* like) {
  const Nifti1Header h = stamp_header(m.shape, NiftiDataType::Uint8, like);
  write_blob(path, h, m.data.data(), static_cast<std::size_t>(m.size()));
}

void write_raw(const std::string& path, const Volume3& v) {
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(v.data.data()),
            static_cast<std::streamsize>(v.size()) * 4);
    if (!f) throw IoError("write failed: " + path);
  }
  nlohmann::json meta = {
      {"dims", {v.shape.nx, v.shape.ny, v.shape.nz}},
      {"spacing", {v.shape.sx, v.shape.sy, v.shape.sz}},
      {"dtype", "float32"},
  };
  std::ofstream j(sidecar_path(path), std::ios::trunc);
  if (!j) throw IoError("cannot open for writing: " + sidecar_path(path));
  j << meta.dump(2) << "\n";
  if (!j) throw IoError("write failed: " + sidecar_path(path));
}

Volume3 read_raw(const std::string& path) {
  std::ifstream j(sidecar_path(path));
  if (!j) throw IoError("missing raw sidecar: " + sidecar_path(path));
  nlohmann::json meta;
  try {
    j >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad raw sidecar: " + std::string(e.what()));
  }
  if (meta.value("dtype", "") != "float32")
    throw FormatError("raw sidecar dtype must be float32");
  GridShape s;
  try {
    s.nx = meta.at("dims").at(0).get<int>();
    s.ny = meta.at("dims").at(1).get<int>();
    s.nz = meta.at("dims").at(2).get<int>();
    s.sx = meta.at("spacing").at(0).get<double>();
    s.sy = meta.at("spacing").at(1).get<double>();
    s.sz = meta.at("spacing").at(2).get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad raw sidecar: " + std::string(e.what()));
  }
  Volume3 v(s);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  f.read(reinterpret_cast<char*>(v.data.data()),
         static_cast<std::streamsize>(v.size()) * 4);
  if (f.gcount() != static_cast<std::streamsize>(v.size()) * 4)
    throw FormatError("raw payload shorter than sidecar dims: " + path);
  check_finite(v, path.c_str());
  return v;
}

} // namespace idg
