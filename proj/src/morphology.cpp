#include "idg/morphology.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

#include "idg/parallel.hpp"

namespace idg {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 2;

// In-place 1D binary dilation of radius r along one axis: a voxel becomes
// foreground when any line position within r steps is foreground.
void dilate_lines(std::uint8_t* data, std::int64_t nlines, int len,
                  std::int64_t stride,
                  const std::function<std::int64_t(std::int64_t)>& line_base,
                  int r) {
  parallel_for(nlines, 64, [&](std::int64_t lb, std::int64_t le) {
    std::vector<int> fwd(static_cast<std::size_t>(len));
    for (std::int64_t l = lb; l < le; ++l) {
      std::uint8_t* p = data + line_base(l);
      int d = kInf;
      for (int i = 0; i < len; ++i) {
        d = p[i * stride] ? 0 : d + 1;
        fwd[i] = d;
      }
      d = kInf;
      for (int i = len - 1; i >= 0; --i) {
        d = p[i * stride] ? 0 : d + 1;
        p[i * stride] = std::min(fwd[i], d) <= r ? 1 : 0;
      }
    }
  });
}

} // namespace

BinaryMask3 dilate_cube(const BinaryMask3& m, int s) {
  if (s < 1 || s % 2 == 0)
    throw ValidationError("dilation kernel size must be odd and >= 1");
  const int max_extent = std::max({m.shape.nx, m.shape.ny, m.shape.nz});
  if (s > 2 * max_extent)
    throw ValidationError("dilation kernel size exceeds twice the largest extent");

  BinaryMask3 out = m;
  if (s == 1) return out;
  const int r = (s - 1) / 2;
  const GridShape& sh = m.shape;
  const std::int64_t nxy = static_cast<std::int64_t>(sh.nx) * sh.ny;

  dilate_lines(out.data.data(), nxy, sh.nx, 1,
               [&](std::int64_t l) { return l * sh.nx; }, r);
  dilate_lines(out.data.data(), static_cast<std::int64_t>(sh.nx) * sh.nz, sh.ny, sh.nx,
               [&](std::int64_t l) {
                 const std::int64_t x = l % sh.nx, z = l / sh.nx;
                 return x + nxy * z;
               },
               r);
  dilate_lines(out.data.data(), nxy, sh.nz, nxy,
               [&](std::int64_t l) { return l; }, r);
  return out;
}

DilatedRegion build_dilated_region(const BinaryMask3& bronchus, int s) {
  if (count_foreground(bronchus) == 0)
    throw PreconditionError("empty bronchus mask: the per-case intensity model is undefined");
  DilatedRegion region;
  region.kernel_size = s;
  region.inner = bronchus;
  region.dilated = dilate_cube(bronchus, s);
  region.outer = BinaryMask3(bronchus.shape);
  region.outer.data =
      (region.dilated.data != 0 && bronchus.data == 0).cast<std::uint8_t>();
  return region;
}

namespace {

// Cell k of the 3x3x3 neighbourhood <-> offset (dx,dy,dz) in {-1,0,1}^3,
// k = (dx+1) + 3*(dy+1) + 9*(dz+1); the center is k=13.
inline int cell_dx(int k) { return k % 3 - 1; }
inline int cell_dy(int k) { return (k / 3) % 3 - 1; }
inline int cell_dz(int k) { return k / 9 - 1; }

void gather_neighbourhood(const std::uint8_t* data, const GridShape& sh,
                          int x, int y, int z, bool nb[27]) {
  for (int k = 0; k < 27; ++k) {
    const int px = x + cell_dx(k), py = y + cell_dy(k), pz = z + cell_dz(k);
    nb[k] = sh.contains(px, py, pz) && data[sh.index(px, py, pz)] != 0;
  }
}

int count_fg_neighbours(const bool nb[27]) {
  int n = 0;
  for (int k = 0; k < 27; ++k) n += (k != 13 && nb[k]) ? 1 : 0;
  return n;
}

// Number of 26-connected components of the foreground cells in N26.
int fg_components(const bool nb[27]) {
  bool seen[27] = {};
  int comps = 0;
  for (int start = 0; start < 27; ++start) {
    if (start == 13 || !nb[start] || seen[start]) continue;
    ++comps;
    int stack[26], top = 0;
    stack[top++] = start;
    seen[start] = true;
    while (top > 0) {
      const int a = stack[--top];
      for (int b = 0; b < 27; ++b) {
        if (b == 13 || seen[b] || !nb[b]) continue;
        if (std::abs(cell_dx(a) - cell_dx(b)) <= 1 &&
            std::abs(cell_dy(a) - cell_dy(b)) <= 1 &&
            std::abs(cell_dz(a) - cell_dz(b)) <= 1) {
          seen[b] = true;
          stack[top++] = b;
        }
      }
    }
  }
  return comps;
}

// Number of 6-connected background components within the 18-neighbourhood
// that touch a face neighbour of the center (the center is not traversable).
int bg_components(const bool nb[27]) {
  auto in_n18 = [](int k) {
    return k != 13 &&
           std::abs(cell_dx(k)) + std::abs(cell_dy(k)) + std::abs(cell_dz(k)) <= 2;
  };
  auto is_face = [](int k) {
    return std::abs(cell_dx(k)) + std::abs(cell_dy(k)) + std::abs(cell_dz(k)) == 1;
  };
  bool seen[27] = {};
  int comps = 0;
  for (int start = 0; start < 27; ++start) {
    if (!is_face(start) || nb[start] || seen[start]) continue;
    ++comps;
    int stack[18], top = 0;
    stack[top++] = start;
    seen[start] = true;
    while (top > 0) {
      const int a = stack[--top];
      for (int b = 0; b < 27; ++b) {
        if (seen[b] || nb[b] || !in_n18(b)) continue;
        if (std::abs(cell_dx(a) - cell_dx(b)) + std::abs(cell_dy(a) - cell_dy(b)) +
                std::abs(cell_dz(a) - cell_dz(b)) ==
            1) {
          seen[b] = true;
          stack[top++] = b;
        }
      }
    }
  }
  return comps;
}

bool simple_from_neighbourhood(const bool nb[27]) {
  return fg_components(nb) == 1 && bg_components(nb) == 1;
}

} // namespace

bool is_simple_point(const BinaryMask3& m, int x, int y, int z) {
  bool nb[27];
  gather_neighbourhood(m.data.data(), m.shape, x, y, z, nb);
  return simple_from_neighbourhood(nb);
}

BinaryMask3 skeletonize(const BinaryMask3& m) {
  if (count_foreground(m) == 0)
    throw PreconditionError("cannot skeletonize an empty mask");

  BinaryMask3 out = m;
  std::uint8_t* data = out.data.data();
  const GridShape& sh = out.shape;
  const std::int64_t n = sh.voxel_count();

  static constexpr int kDirs[6][3] = {
      {0, 0, -1}, {0, 0, 1}, {0, -1, 0}, {0, 1, 0}, {-1, 0, 0}, {1, 0, 0}};

  const std::int64_t grain = kVoxelGrain;
  const std::int64_t nchunks = (n + grain - 1) / grain;

  for (;;) {
    std::int64_t deleted_in_cycle = 0;
    for (const auto& d : kDirs) {
      // Candidates: border voxels in direction d that are deletable now.
      // Collected per fixed chunk and concatenated in chunk order, giving a
      // global raster order independent of the thread count.
      std::vector<std::vector<std::int64_t>> found(static_cast<std::size_t>(nchunks));
      parallel_for(n, grain, [&](std::int64_t b, std::int64_t e) {
        auto& local = found[static_cast<std::size_t>(b / grain)];
        bool nb[27];
        for (std::int64_t i = b; i < e; ++i) {
          if (!data[i]) continue;
          int x, y, z;
          sh.coords(i, x, y, z);
          const int bx = x + d[0], by = y + d[1], bz = z + d[2];
          if (sh.contains(bx, by, bz) && data[sh.index(bx, by, bz)]) continue;
          gather_neighbourhood(data, sh, x, y, z, nb);
          if (count_fg_neighbours(nb) <= 1) continue; // keep curve endpoints
          if (simple_from_neighbourhood(nb)) local.push_back(i);
        }
      });

      // Sequential deletion with re-check keeps every removal a simple-point
      // removal on the current image, which preserves (26,6) topology.
      bool nb[27];
      for (const auto& chunk : found) {
        for (const std::int64_t i : chunk) {
          int x, y, z;
          sh.coords(i, x, y, z);
          gather_neighbourhood(data, sh, x, y, z, nb);
          if (count_fg_neighbours(nb) <= 1) continue;
          if (!simple_from_neighbourhood(nb)) continue;
          data[i] = 0;
          ++deleted_in_cycle;
        }
      }
    }
    if (deleted_in_cycle == 0) break;
  }
  return out;
}

namespace {

struct DisjointSet {
  std::vector<std::int32_t> parent;

  std::int32_t make() {
    parent.push_back(static_cast<std::int32_t>(parent.size()));
    return parent.back();
  }
  std::int32_t find(std::int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
};

} // namespace

ComponentLabels connected_components(const BinaryMask3& m, int connectivity) {
  if (connectivity != 6 && connectivity != 18 && connectivity != 26)
    throw ValidationError("connectivity must be 6, 18 or 26");

  // Raster-prior neighbour offsets for the requested connectivity.
  std::vector<std::array<int, 3>> prior;
  for (int dz = -1; dz <= 0; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dz == 0 && (dy > 0 || (dy == 0 && dx >= 0))) continue;
        const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (connectivity == 6 && manhattan != 1) continue;
        if (connectivity == 18 && manhattan > 2) continue;
        prior.push_back({dx, dy, dz});
      }

  const GridShape& sh = m.shape;
  ComponentLabels out;
  out.labels = LabelVolume(sh);
  std::vector<std::int32_t> provisional(static_cast<std::size_t>(sh.voxel_count()), 0);

  DisjointSet dsu;
  dsu.make(); // label 0 = background

  std::int64_t i = 0;
  for (int z = 0; z < sh.nz; ++z)
    for (int y = 0; y < sh.ny; ++y)
      for (int x = 0; x < sh.nx; ++x, ++i) {
        if (!m.data[i]) continue;
        std::int32_t assigned = 0;
        for (const auto& o : prior) {
          const int px = x + o[0], py = y + o[1], pz = z + o[2];
          if (!sh.contains(px, py, pz)) continue;
          const std::int32_t nl = provisional[sh.index(px, py, pz)];
          if (nl == 0) continue;
          if (assigned == 0)
            assigned = dsu.find(nl);
          else
            dsu.unite(assigned, nl);
        }
        provisional[i] = assigned != 0 ? assigned : dsu.make();
      }

  // Dense ids in order of first appearance; that raster order is exactly the
  // smallest-first-voxel tie-break.
  std::vector<std::int32_t> dense(dsu.parent.size(), 0);
  std::vector<std::int64_t> sizes;
  std::vector<std::int32_t> first_order;
  for (std::int64_t j = 0; j < sh.voxel_count(); ++j) {
    if (!provisional[j]) continue;
    const std::int32_t root = dsu.find(provisional[j]);
    if (dense[root] == 0) {
      dense[root] = static_cast<std::int32_t>(sizes.size()) + 1;
      sizes.push_back(0);
    }
    provisional[j] = dense[root];
    ++sizes[provisional[j] - 1];
  }

  std::vector<std::int32_t> order(sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    return sizes[a] > sizes[b]; // stable: equal sizes keep appearance order
  });
  std::vector<std::int32_t> remap(sizes.size() + 1, 0);
  out.sizes.resize(sizes.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    remap[order[k] + 1] = static_cast<std::int32_t>(k) + 1;
    out.sizes[k] = sizes[order[k]];
  }
  for (std::int64_t j = 0; j < sh.voxel_count(); ++j)
    out.labels.data[j] = remap[provisional[j]];
  return out;
}

BinaryMask3 largest_component(const BinaryMask3& m) {
  BinaryMask3 out(m.shape);
  if (count_foreground(m) == 0) return out;
  const ComponentLabels cc = connected_components(m, 26);
  out.data = (cc.labels.data == 1).cast<std::uint8_t>();
  return out;
}

} // namespace idg
