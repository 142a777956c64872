#pragma once

// Rays of N^k and regions of N^k x [n].
//
// An r-dimensional ray is determined by a base point x in N^k (N = {1,2,...})
// and a set T of r free coordinates:
//
//   { y in N^k : y_j >= x_j for j in T,  y_j = x_j for j not in T }.
//
// A region is a finite disjoint union of rays placed in the copies of N^k.
// Every region is a union of cells of the threshold-t grid for t large
// enough; the grid cells at the smallest such t give a canonical form.
//
// Coordinate indices are 0-based in this API. Copies are numbered 1..n.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hforge/error.hpp"
#include "hforge/integer.hpp"

namespace hforge {

inline constexpr int kMaxDimension = 32;

// Upper bound on the number of grid cells any single enumeration will visit.
inline constexpr std::size_t kGridCellLimit = std::size_t{1} << 24;

////////////////////////////////////////////////////////////////////////////
// DirSet
////////////////////////////////////////////////////////////////////////////

// A subset of {0, ..., k-1}. Ordered lexicographically by its sorted member
// list, so {0} < {0,1} < {1}.
class DirSet {
 public:
  constexpr DirSet() = default;

  static DirSet full(int k) {
    check_index(k == 0 ? 0 : k - 1);
    return DirSet(k == kMaxDimension ? ~std::uint32_t{0}
                                     : ((std::uint32_t{1} << k) - 1));
  }

  static constexpr DirSet from_mask(std::uint32_t mask) {
    return DirSet(mask);
  }

  static DirSet from_members(std::initializer_list<int> members) {
    DirSet d;
    for (int j : members) {
      d = d.with(j);
    }
    return d;
  }

  bool contains(int j) const {
    return j >= 0 && j < kMaxDimension && ((mask_ >> j) & 1U) != 0;
  }

  DirSet with(int j) const {
    check_index(j);
    return DirSet(mask_ | (std::uint32_t{1} << j));
  }

  DirSet without(int j) const {
    check_index(j);
    return DirSet(mask_ & ~(std::uint32_t{1} << j));
  }

  DirSet intersect(DirSet other) const {
    return DirSet(mask_ & other.mask_);
  }

  int size() const {
    return std::popcount(mask_);
  }

  bool empty() const {
    return mask_ == 0;
  }

  std::uint32_t mask() const {
    return mask_;
  }

  // Largest member + 1, or 0 for the empty set.
  int span() const {
    return mask_ == 0 ? 0 : 32 - std::countl_zero(mask_);
  }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint32_t x = mask_; x != 0; x &= x - 1) {
      out.push_back(std::countr_zero(x));
    }
    return out;
  }

  friend bool operator==(DirSet, DirSet) = default;

  friend std::strong_ordering operator<=>(DirSet a, DirSet b) {
    std::uint32_t x = a.mask_;
    std::uint32_t y = b.mask_;
    while (true) {
      if (x == 0 || y == 0) {
        return (x != 0) <=> (y != 0);
      }
      int i = std::countr_zero(x);
      int j = std::countr_zero(y);
      if (i != j) {
        return i <=> j;
      }
      x &= x - 1;
      y &= y - 1;
    }
  }

 private:
  constexpr explicit DirSet(std::uint32_t mask) : mask_(mask) {}

  static void check_index(int j) {
    if (j < 0 || j >= kMaxDimension) {
      throw DimensionMismatch("coordinate index " + std::to_string(j)
                              + " out of range");
    }
  }

  std::uint32_t mask_ = 0;
};

////////////////////////////////////////////////////////////////////////////
// Point
////////////////////////////////////////////////////////////////////////////

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<Integer> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<long> coords) {
    for (long c : coords) {
      coords_.emplace_back(c);
    }
  }

  static Point ones(int k) {
    return Point(std::vector<Integer>(static_cast<std::size_t>(k), Integer(1)));
  }

  int dim() const {
    return static_cast<int>(coords_.size());
  }

  const Integer& operator[](int j) const {
    return coords_[static_cast<std::size_t>(j)];
  }

  Integer& operator[](int j) {
    return coords_[static_cast<std::size_t>(j)];
  }

  const std::vector<Integer>& coords() const {
    return coords_;
  }

  bool is_positive() const {
    return std::all_of(coords_.begin(), coords_.end(),
                       [](const Integer& c) { return c >= 1; });
  }

  Point translated(const std::vector<Integer>& offset) const {
    Point out = *this;
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      out.coords_[j] += offset[j];
    }
    return out;
  }

  friend bool operator==(const Point& a, const Point& b) {
    return compare(a.coords_, b.coords_) == 0;
  }

  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    return compare(a.coords_, b.coords_);
  }

 private:
  std::vector<Integer> coords_;
};

inline std::string to_string(const Point& p) {
  std::string out = "(";
  for (int j = 0; j < p.dim(); ++j) {
    out += (j == 0 ? "" : ",") + p[j].get_str();
  }
  return out + ")";
}

// A point of N^k x [n].
struct MarkedPoint {
  Point x;
  int   copy = 1;

  friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
  friend std::strong_ordering operator<=>(const MarkedPoint& a,
                                          const MarkedPoint& b) {
    if (auto c = a.copy <=> b.copy; c != 0) {
      return c;
    }
    return a.x <=> b.x;
  }
};

inline std::string to_string(const MarkedPoint& p) {
  return to_string(p.x) + "@" + std::to_string(p.copy);
}

////////////////////////////////////////////////////////////////////////////
// Ray
////////////////////////////////////////////////////////////////////////////

struct Ray {
  Point  base;
  DirSet dirs;

  int dim() const {
    return base.dim();
  }

  // Number of free coordinates.
  int rank() const {
    return dirs.size();
  }

  static Ray full(int k) {
    return Ray{Point::ones(k), DirSet::full(k)};
  }

  static Ray point(Point p) {
    return Ray{std::move(p), DirSet()};
  }

  friend bool operator==(const Ray&, const Ray&) = default;

  friend std::strong_ordering operator<=>(const Ray& a, const Ray& b) {
    if (auto c = a.dirs <=> b.dirs; c != 0) {
      return c;
    }
    return a.base <=> b.base;
  }
};

inline std::string to_string(const Ray& r) {
  std::string out = "[base " + to_string(r.base) + " dirs {";
  bool first = true;
  for (int j : r.dirs.members()) {
    out += (first ? "" : ",") + std::to_string(j + 1);
    first = false;
  }
  return out + "}]";
}

namespace detail {

inline void require_same_dim(int a, int b) {
  if (a != b) {
    throw DimensionMismatch("ambient dimension mismatch: "
                            + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace detail

// Throws unless r is a well-formed ray of N^k.
inline void check_ray(const Ray& r, int k) {
  if (k < 1 || k > kMaxDimension) {
    throw DimensionMismatch("ambient dimension must lie in [1, 32]");
  }
  detail::require_same_dim(r.dim(), k);
  if (r.dirs.span() > k) {
    throw ValidationError("ray " + to_string(r)
                          + " has a direction outside the ambient space");
  }
  if (!r.base.is_positive()) {
    throw ValidationError("ray " + to_string(r)
                          + " has a non-positive base coordinate");
  }
}

inline bool ray_contains(const Ray& r, const Point& p) {
  detail::require_same_dim(r.dim(), p.dim());
  for (int j = 0; j < r.dim(); ++j) {
    if (r.dirs.contains(j) ? p[j] < r.base[j] : p[j] != r.base[j]) {
      return false;
    }
  }
  return true;
}

// Intersection of two rays; nullopt when it is empty (the empty set is not
// a ray).
inline std::optional<Ray> ray_intersect(const Ray& a, const Ray& b) {
  detail::require_same_dim(a.dim(), b.dim());
  Ray out{a.base, a.dirs.intersect(b.dirs)};
  for (int j = 0; j < a.dim(); ++j) {
    bool fa = a.dirs.contains(j);
    bool fb = b.dirs.contains(j);
    if (fa && fb) {
      if (b.base[j] > a.base[j]) {
        out.base[j] = b.base[j];
      }
    } else if (fa) {
      if (b.base[j] < a.base[j]) {
        return std::nullopt;
      }
      out.base[j] = b.base[j];
    } else if (fb) {
      if (a.base[j] < b.base[j]) {
        return std::nullopt;
      }
    } else if (a.base[j] != b.base[j]) {
      return std::nullopt;
    }
  }
  return out;
}

inline bool rays_disjoint(const Ray& a, const Ray& b) {
  return !ray_intersect(a, b).has_value();
}

// a is a subset of b.
inline bool ray_subset(const Ray& a, const Ray& b) {
  detail::require_same_dim(a.dim(), b.dim());
  for (int j = 0; j < a.dim(); ++j) {
    if (a.dirs.contains(j)) {
      if (!b.dirs.contains(j) || a.base[j] < b.base[j]) {
        return false;
      }
    } else if (b.dirs.contains(j) ? a.base[j] < b.base[j]
                                  : a.base[j] != b.base[j]) {
      return false;
    }
  }
  return true;
}

// Splits off the face y_j = base_j: returns (child, rest) where child fixes
// coordinate j at the base value and rest starts one step further along j.
inline std::pair<Ray, Ray> ray_split(const Ray& r, int j) {
  if (!r.dirs.contains(j) || j >= r.dim()) {
    throw ValidationError("cannot split " + to_string(r) + " along coordinate "
                          + std::to_string(j + 1) + ": not a free direction");
  }
  Ray child{r.base, r.dirs.without(j)};
  Ray rest = r;
  rest.base[j] += 1;
  return {std::move(child), std::move(rest)};
}

inline Ray ray_translate(const Ray& r, const std::vector<Integer>& offset) {
  return Ray{r.base.translated(offset), r.dirs};
}

// Smallest t such that every cell of the threshold-t grid is either inside r
// or disjoint from it: fixed coordinates need base_j <= t, free ones
// base_j <= t + 1.
inline Integer adequate_threshold(const Ray& r) {
  Integer t = 0;
  for (int j = 0; j < r.dim(); ++j) {
    Integer need = r.dirs.contains(j) ? Integer(r.base[j] - 1) : r.base[j];
    if (need > t) {
      t = need;
    }
  }
  return t;
}

// Number of threshold-t grid cells inside r. Requires t to be adequate
// for r.
inline Integer grid_cell_count(const Ray& r, const Integer& t) {
  Integer count = 1;
  for (int j : r.dirs.members()) {
    count *= t - r.base[j] + 2;
  }
  return count;
}

////////////////////////////////////////////////////////////////////////////
// Grid cells
////////////////////////////////////////////////////////////////////////////

namespace detail {

// Per-coordinate choices of a grid cell: 0 means the free tail [t+1, inf),
// v >= 1 means the fixed value v.
struct CellOption {
  bool          free;
  unsigned long value;
};

inline Ray make_cell(const std::vector<CellOption>& choice, const Integer& t) {
  Ray cell;
  std::vector<Integer> base;
  base.reserve(choice.size());
  for (std::size_t j = 0; j < choice.size(); ++j) {
    if (choice[j].free) {
      base.emplace_back(t + 1);
      cell.dirs = cell.dirs.with(static_cast<int>(j));
    } else {
      base.emplace_back(choice[j].value);
    }
  }
  cell.base = Point(std::move(base));
  return cell;
}

// Calls fn(cell) for every element of the cartesian product of options
// until fn returns false.
inline void for_each_choice(const std::vector<std::vector<CellOption>>& options,
                            const Integer&                              t,
                            const std::function<bool(const Ray&)>&      fn) {
  std::size_t total = 1;
  for (auto const& o : options) {
    if (o.empty()) {
      return;
    }
    total *= o.size();
    if (total > kGridCellLimit) {
      throw SizeLimitExceeded("grid enumeration exceeds "
                              + std::to_string(kGridCellLimit) + " cells");
    }
  }
  std::vector<std::size_t> idx(options.size(), 0);
  std::vector<CellOption>  choice(options.size());
  while (true) {
    for (std::size_t j = 0; j < options.size(); ++j) {
      choice[j] = options[j][idx[j]];
    }
    if (!fn(make_cell(choice, t))) {
      return;
    }
    std::size_t j = options.size();
    while (true) {
      if (j == 0) {
        return;
      }
      --j;
      if (++idx[j] < options[j].size()) {
        break;
      }
      idx[j] = 0;
    }
  }
}

// Options for the threshold-t grid cells that meet r; sets `partial` when
// some such cell is not contained in r.
inline std::vector<std::vector<CellOption>>
meeting_cell_options(const Ray& r, const Integer& t, bool& partial) {
  std::vector<std::vector<CellOption>> options(
      static_cast<std::size_t>(r.dim()));
  partial = false;
  unsigned long tt = static_cast<unsigned long>(to_size(t, kGridCellLimit));
  for (int j = 0; j < r.dim(); ++j) {
    auto&          opt = options[static_cast<std::size_t>(j)];
    const Integer& b   = r.base[j];
    if (r.dirs.contains(j)) {
      if (b > t + 1) {
        partial = true;
        opt.push_back({true, 0});
      } else {
        for (unsigned long v = b.get_ui(); v <= tt; ++v) {
          opt.push_back({false, v});
        }
        opt.push_back({true, 0});
      }
    } else if (b > t) {
      partial = true;
      opt.push_back({true, 0});
    } else {
      opt.push_back({false, b.get_ui()});
    }
  }
  return options;
}

}  // namespace detail

// All cells of the threshold-t grid of N^k, in canonical order.
inline std::vector<Ray> grid_cells(int k, const Integer& t) {
  check_ray(Ray::full(k), k);
  std::size_t tt = to_size(t, kGridCellLimit);
  std::vector<std::vector<detail::CellOption>> options(
      static_cast<std::size_t>(k));
  for (auto& o : options) {
    for (unsigned long v = 1; v <= tt; ++v) {
      o.push_back({false, v});
    }
    o.push_back({true, 0});
  }
  std::vector<Ray> cells;
  detail::for_each_choice(options, t, [&](const Ray& c) {
    cells.push_back(c);
    return true;
  });
  std::sort(cells.begin(), cells.end());
  return cells;
}

// Cells of the threshold-t grid meeting r.
inline std::vector<Ray> cells_meeting(const Ray& r, const Integer& t) {
  bool partial = false;
  auto options = detail::meeting_cell_options(r, t, partial);
  std::vector<Ray> cells;
  detail::for_each_choice(options, t, [&](const Ray& c) {
    cells.push_back(c);
    return true;
  });
  return cells;
}

////////////////////////////////////////////////////////////////////////////
// Marked rays, regions, partitions
////////////////////////////////////////////////////////////////////////////

struct MarkedRay {
  Ray ray;
  int copy = 1;

  bool contains(const MarkedPoint& p) const {
    return p.copy == copy && ray_contains(ray, p.x);
  }

  friend bool operator==(const MarkedRay&, const MarkedRay&) = default;

  // Canonical order: (copy, dirs, base).
  friend std::strong_ordering operator<=>(const MarkedRay& a,
                                          const MarkedRay& b) {
    if (auto c = a.copy <=> b.copy; c != 0) {
      return c;
    }
    return a.ray <=> b.ray;
  }
};

inline std::string to_string(const MarkedRay& r) {
  return to_string(r.ray) + "@" + std::to_string(r.copy);
}

inline std::optional<MarkedRay> ray_intersect(const MarkedRay& a,
                                              const MarkedRay& b) {
  if (a.copy != b.copy) {
    return std::nullopt;
  }
  auto r = ray_intersect(a.ray, b.ray);
  if (!r) {
    return std::nullopt;
  }
  return MarkedRay{std::move(*r), a.copy};
}

// A finite disjoint union of rays in N^k x [n].
struct Region {
  int                    k = 1;
  int                    n = 1;
  std::vector<MarkedRay> rays;

  static Region whole(int k, int n) {
    Region r{k, n, {}};
    for (int c = 1; c <= n; ++c) {
      r.rays.push_back({Ray::full(k), c});
    }
    return r;
  }

  static Region empty(int k, int n) {
    return Region{k, n, {}};
  }

  bool is_empty() const {
    return rays.empty();
  }

  bool contains(const MarkedPoint& p) const {
    return std::any_of(rays.begin(), rays.end(),
                       [&](const MarkedRay& r) { return r.contains(p); });
  }

  friend bool operator==(const Region&, const Region&) = default;
};

struct RayPartition {
  Region                 region;
  std::vector<MarkedRay> cells;
};

// Outcome of a structural check; `diagnostic` names the first violation.
struct Validation {
  bool        ok = true;
  std::string diagnostic;

  explicit operator bool() const {
    return ok;
  }

  static Validation failure(std::string why) {
    return Validation{false, std::move(why)};
  }
};

namespace detail {

inline Validation check_marked_rays(const std::vector<MarkedRay>& rays, int k,
                                    int n, const char* what) {
  for (auto const& r : rays) {
    if (r.copy < 1 || r.copy > n) {
      return Validation::failure(std::string(what) + " " + to_string(r)
                                 + " lies in copy outside [1, "
                                 + std::to_string(n) + "]");
    }
    try {
      check_ray(r.ray, k);
    } catch (Error const& e) {
      return Validation::failure(std::string(what) + ": " + e.what());
    }
  }
  for (std::size_t a = 0; a < rays.size(); ++a) {
    for (std::size_t b = a + 1; b < rays.size(); ++b) {
      if (auto x = ray_intersect(rays[a], rays[b])) {
        return Validation::failure(std::string(what) + "s " + to_string(rays[a])
                                   + " and " + to_string(rays[b])
                                   + " overlap at " + to_string(x->ray.base));
      }
    }
  }
  return {};
}

inline Integer max_adequate_threshold(const std::vector<MarkedRay>& rays) {
  Integer t = 0;
  for (auto const& r : rays) {
    Integer a = adequate_threshold(r.ray);
    if (a > t) {
      t = a;
    }
  }
  return t;
}

// Number of threshold-T cells of `cell` covered by the disjoint rays.
inline Integer covered_count(const MarkedRay&              cell,
                             const std::vector<MarkedRay>& rays,
                             const Integer&                T) {
  Integer total = 0;
  for (auto const& r : rays) {
    if (auto x = ray_intersect(cell, r)) {
      total += grid_cell_count(x->ray, T);
    }
  }
  return total;
}

// cell is contained in the union of the disjoint rays; T must be adequate
// for the cell and all rays.
inline bool covered_by(const MarkedRay& cell, const std::vector<MarkedRay>& rays,
                       const Integer& T) {
  return covered_count(cell, rays, T) == grid_cell_count(cell.ray, T);
}

// The disjoint rays form a union of threshold-t cells.
inline bool is_union_of_cells(const std::vector<MarkedRay>& rays,
                              const Integer& t, const Integer& T0) {
  Integer T = t > T0 ? t : T0;
  for (auto const& r : rays) {
    bool partial = false;
    auto options = meeting_cell_options(r.ray, t, partial);
    if (!partial) {
      continue;
    }
    bool ok = true;
    for_each_choice(options, t, [&](const Ray& c) {
      ok = covered_by(MarkedRay{c, r.copy}, rays, T);
      return ok;
    });
    if (!ok) {
      return false;
    }
  }
  return true;
}

inline void require_valid_region(const Region& reg) {
  if (reg.k < 1 || reg.k > kMaxDimension || reg.n < 0) {
    throw DimensionMismatch("invalid region ambient (k="
                            + std::to_string(reg.k)
                            + ", n=" + std::to_string(reg.n) + ")");
  }
  if (auto v = check_marked_rays(reg.rays, reg.k, reg.n, "region ray"); !v) {
    throw ValidationError(v.diagnostic);
  }
}

// Threshold-t cells making up the disjoint rays; requires the rays to be a
// union of threshold-t cells.
inline std::vector<MarkedRay> cells_of(const std::vector<MarkedRay>& rays,
                                       const Integer&                t) {
  std::set<MarkedRay> cells;
  for (auto const& r : rays) {
    for (auto& c : cells_meeting(r.ray, t)) {
      cells.insert(MarkedRay{std::move(c), r.copy});
    }
  }
  return {cells.begin(), cells.end()};
}

// Smallest t at which the disjoint rays form a union of t-grid cells. The
// predicate is monotone in t, so the search bisects [0, T0].
inline Integer minimal_threshold(const std::vector<MarkedRay>& rays) {
  Integer T0 = max_adequate_threshold(rays);
  Integer lo = 0;
  Integer hi = T0;
  while (lo < hi) {
    Integer mid = (lo + hi) / 2;
    if (is_union_of_cells(rays, mid, T0)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return hi;
}

}  // namespace detail

// Threshold of the canonical form: the least t such that the region is a
// union of threshold-t grid cells.
inline Integer canonical_threshold(const Region& reg) {
  detail::require_valid_region(reg);
  return detail::minimal_threshold(reg.rays);
}

// Canonical form: the grid cells at the canonical threshold, sorted by
// (copy, dirs, base). Two regions denote the same set iff their canonical
// forms are equal.
inline Region canonicalize_region(const Region& reg) {
  Integer t = canonical_threshold(reg);
  return Region{reg.k, reg.n, detail::cells_of(reg.rays, t)};
}

inline bool same_region(const Region& a, const Region& b) {
  if (a.k != b.k || a.n != b.n) {
    throw DimensionMismatch("regions live in different ambient spaces");
  }
  return canonicalize_region(a) == canonicalize_region(b);
}

// N^k x [n] minus the region, as canonical grid cells (the complement of a
// union of t-cells is a union of t-cells, so it shares the threshold).
inline Region region_complement(const Region& reg) {
  Integer t     = canonical_threshold(reg);
  auto    mine  = detail::cells_of(reg.rays, t);
  std::set<MarkedRay> taken(mine.begin(), mine.end());
  auto    cells = grid_cells(reg.k, t);
  Region  out{reg.k, reg.n, {}};
  for (int c = 1; c <= reg.n; ++c) {
    for (auto const& cell : cells) {
      MarkedRay mc{cell, c};
      if (!taken.contains(mc)) {
        out.rays.push_back(std::move(mc));
      }
    }
  }
  return out;
}

// Partition of N^k x [n] into n (t+1)^k grid cells.
inline RayPartition grid_partition(int k, const Integer& t, int n) {
  if (sgn(t) < 0) {
    throw ValidationError("grid threshold must be nonnegative");
  }
  RayPartition p{Region::whole(k, n), {}};
  auto cells = grid_cells(k, t);
  for (int c = 1; c <= n; ++c) {
    for (auto const& cell : cells) {
      p.cells.push_back({cell, c});
    }
  }
  return p;
}

// Checks that the cells are pairwise disjoint rays exactly covering the
// region. Coverage is decided by counting grid cells at a threshold adequate
// for every ray involved.
inline Validation partition_validate(const RayPartition& p) {
  const Region& reg = p.region;
  if (reg.k < 1 || reg.k > kMaxDimension || reg.n < 0) {
    return Validation::failure("invalid ambient space");
  }
  if (auto v = detail::check_marked_rays(reg.rays, reg.k, reg.n, "region ray");
      !v) {
    return v;
  }
  if (auto v = detail::check_marked_rays(p.cells, reg.k, reg.n, "cell"); !v) {
    return v;
  }
  Integer T = detail::max_adequate_threshold(reg.rays);
  Integer Tc = detail::max_adequate_threshold(p.cells);
  if (Tc > T) {
    T = Tc;
  }
  for (auto const& c : p.cells) {
    if (!detail::covered_by(c, reg.rays, T)) {
      return Validation::failure("cell " + to_string(c)
                                 + " is not contained in the region");
    }
  }
  for (auto const& r : reg.rays) {
    if (detail::covered_by(r, p.cells, T)) {
      continue;
    }
    for (auto const& c : cells_meeting(r.ray, T)) {
      MarkedRay mc{c, r.copy};
      if (!detail::covered_by(mc, p.cells, T)) {
        return Validation::failure("point " + to_string(c.base) + " of copy "
                                   + std::to_string(r.copy)
                                   + " is not covered");
      }
    }
  }
  return {};
}

// All nonempty pairwise intersections of cells; refines both inputs.
inline RayPartition common_refinement(const RayPartition& a,
                                      const RayPartition& b) {
  if (a.region.k != b.region.k || a.region.n != b.region.n
      || !same_region(a.region, b.region)) {
    throw DimensionMismatch("partitions cover different regions");
  }
  RayPartition out{a.region, {}};
  for (auto const& x : a.cells) {
    for (auto const& y : b.cells) {
      if (auto z = ray_intersect(x, y)) {
        out.cells.push_back(std::move(*z));
      }
    }
  }
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

}  // namespace hforge
