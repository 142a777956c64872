#pragma once

// Ray injections N^k x [m] -> N^k x [n] that restrict to a translation on
// every ray of a finite ray partition of the domain. For m = n the
// bijective ones form the twisted Houghton group; its copy-permutation
// kernel is the (multidimensional) Houghton group.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hforge/error.hpp"
#include "hforge/integer.hpp"
#include "hforge/rays.hpp"

namespace hforge {

////////////////////////////////////////////////////////////////////////////
// Permutations of [n]
////////////////////////////////////////////////////////////////////////////

// images[i - 1] = sigma(i).
struct Permutation {
  std::vector<int> images;

  static Permutation identity(int n) {
    Permutation p;
    for (int i = 1; i <= n; ++i) {
      p.images.push_back(i);
    }
    return p;
  }

  int size() const {
    return static_cast<int>(images.size());
  }

  int operator()(int i) const {
    return images[static_cast<std::size_t>(i - 1)];
  }

  bool is_valid() const {
    std::vector<bool> seen(images.size() + 1, false);
    for (int x : images) {
      if (x < 1 || x > size() || seen[static_cast<std::size_t>(x)]) {
        return false;
      }
      seen[static_cast<std::size_t>(x)] = true;
    }
    return true;
  }

  bool is_identity() const {
    for (int i = 1; i <= size(); ++i) {
      if ((*this)(i) != i) {
        return false;
      }
    }
    return true;
  }

  Permutation inverse() const {
    Permutation p;
    p.images.resize(images.size());
    for (int i = 1; i <= size(); ++i) {
      p.images[static_cast<std::size_t>((*this)(i) - 1)] = i;
    }
    return p;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

// (a * b)(i) = a(b(i)).
inline Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("permutations of different degree");
  }
  Permutation p;
  for (int i = 1; i <= b.size(); ++i) {
    p.images.push_back(a(b(i)));
  }
  return p;
}

// All permutations of [n] in lexicographic order of image lists.
inline std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  Permutation p = Permutation::identity(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.images.begin(), p.images.end()));
  return out;
}

////////////////////////////////////////////////////////////////////////////
// HoughtonMap
////////////////////////////////////////////////////////////////////////////

// x |-> x + offset, landing in copy target_copy.
struct Translation {
  std::vector<Integer> offset;
  int                  target_copy = 1;

  friend bool operator==(const Translation& a, const Translation& b) {
    return a.target_copy == b.target_copy
           && compare(a.offset, b.offset) == 0;
  }

  friend std::strong_ordering operator<=>(const Translation& a,
                                          const Translation& b) {
    if (auto c = a.target_copy <=> b.target_copy; c != 0) {
      return c;
    }
    return compare(a.offset, b.offset);
  }
};

struct Piece {
  MarkedRay   domain;
  Translation shift;

  MarkedRay image() const {
    return MarkedRay{ray_translate(domain.ray, shift.offset),
                     shift.target_copy};
  }

  friend bool operator==(const Piece&, const Piece&) = default;
};

struct HoughtonMap {
  int                k = 1;
  int                m = 0;  // domain copies
  int                n = 0;  // codomain copies
  std::vector<Piece> pieces;

  bool is_square() const {
    return m == n;
  }
};

inline HoughtonMap identity_map(int k, int n) {
  HoughtonMap id{k, n, n, {}};
  for (int c = 1; c <= n; ++c) {
    id.pieces.push_back(
        {{Ray::full(k), c}, {std::vector<Integer>(k, Integer(0)), c}});
  }
  return id;
}

inline Region domain_region(const HoughtonMap& f) {
  Region r{f.k, f.m, {}};
  for (auto const& p : f.pieces) {
    r.rays.push_back(p.domain);
  }
  return r;
}

inline Region image_region(const HoughtonMap& f) {
  Region r{f.k, f.n, {}};
  for (auto const& p : f.pieces) {
    r.rays.push_back(p.image());
  }
  return r;
}

// Structural verdict for a map; `bijective` is only meaningful when valid.
struct MapValidation {
  bool        valid     = true;
  bool        bijective = false;
  std::string diagnostic;

  explicit operator bool() const {
    return valid;
  }
};

inline MapValidation validate(const HoughtonMap& f) {
  MapValidation out;
  auto fail = [&](std::string why) {
    out.valid      = false;
    out.bijective  = false;
    out.diagnostic = std::move(why);
    return out;
  };
  if (f.k < 1 || f.k > kMaxDimension || f.m < 0 || f.n < 0) {
    return fail("invalid shape (k=" + std::to_string(f.k)
                + ", m=" + std::to_string(f.m) + ", n=" + std::to_string(f.n)
                + ")");
  }
  for (auto const& p : f.pieces) {
    if (p.shift.offset.size() != static_cast<std::size_t>(f.k)) {
      return fail("piece " + to_string(p.domain)
                  + " has an offset of the wrong length");
    }
    if (p.shift.target_copy < 1 || p.shift.target_copy > f.n) {
      return fail("piece " + to_string(p.domain) + " targets copy "
                  + std::to_string(p.shift.target_copy)
                  + " outside the codomain");
    }
  }
  RayPartition dom{Region::whole(f.k, f.m), {}};
  for (auto const& p : f.pieces) {
    dom.cells.push_back(p.domain);
  }
  if (auto v = partition_validate(dom); !v) {
    return fail("domain is not a ray partition: " + v.diagnostic);
  }
  std::vector<MarkedRay> images;
  for (auto const& p : f.pieces) {
    MarkedRay im = p.image();
    if (!im.ray.base.is_positive()) {
      return fail("piece " + to_string(p.domain)
                  + " is translated outside N^k (base "
                  + to_string(im.ray.base) + ")");
    }
    images.push_back(std::move(im));
  }
  for (std::size_t a = 0; a < images.size(); ++a) {
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      if (auto x = ray_intersect(images[a], images[b])) {
        return fail("images of pieces " + to_string(f.pieces[a].domain)
                    + " and " + to_string(f.pieces[b].domain)
                    + " overlap at " + to_string(x->ray.base) + "@"
                    + std::to_string(x->copy));
      }
    }
  }
  Integer T = detail::max_adequate_threshold(images);
  Integer covered = 0;
  for (auto const& im : images) {
    covered += grid_cell_count(im.ray, T);
  }
  Integer total = grid_cell_count(Ray::full(f.k), T) * f.n;
  out.bijective = covered == total;
  if (!out.bijective && f.m == f.n) {
    RayPartition cod{Region::whole(f.k, f.n), images};
    out.diagnostic = "not surjective: " + partition_validate(cod).diagnostic;
  }
  return out;
}

inline void require_valid(const HoughtonMap& f) {
  if (auto v = validate(f); !v) {
    throw ValidationError(v.diagnostic);
  }
}

inline void require_bijective(const HoughtonMap& f) {
  auto v = validate(f);
  if (!v) {
    throw ValidationError(v.diagnostic);
  }
  if (f.m != f.n || !v.bijective) {
    throw ValidationError("map is not a bijection: " + v.diagnostic);
  }
}

inline MarkedPoint apply(const HoughtonMap& f, const MarkedPoint& p) {
  if (p.copy < 1 || p.copy > f.m || p.x.dim() != f.k || !p.x.is_positive()) {
    throw DimensionMismatch("point " + to_string(p)
                            + " is outside the domain");
  }
  for (auto const& piece : f.pieces) {
    if (piece.domain.contains(p)) {
      return MarkedPoint{p.x.translated(piece.shift.offset),
                         piece.shift.target_copy};
    }
  }
  throw ValidationError("no piece contains " + to_string(p));
}

////////////////////////////////////////////////////////////////////////////
// Canonical form and equality
////////////////////////////////////////////////////////////////////////////

// The map restricted to the cells of its canonical threshold: the least t
// at which the map is a single translation on every threshold-t grid cell.
struct CanonicalMap {
  Integer            threshold;
  std::vector<Piece> cells;  // sorted by (copy, dirs, base)

  friend bool operator==(const CanonicalMap& a, const CanonicalMap& b) {
    return a.threshold == b.threshold && a.cells == b.cells;
  }
};

namespace detail {

inline std::map<Translation, std::vector<MarkedRay>>
group_by_translation(const HoughtonMap& f) {
  std::map<Translation, std::vector<MarkedRay>> groups;
  for (auto const& p : f.pieces) {
    groups[p.shift].push_back(p.domain);
  }
  return groups;
}

}  // namespace detail

// The map is a translation on a t-cell iff every region on which it applies
// one fixed translation is a union of t-cells, so the canonical threshold is
// the maximum of those regions' canonical thresholds.
inline CanonicalMap canonical_form(const HoughtonMap& f) {
  auto    groups = detail::group_by_translation(f);
  Integer t      = 0;
  for (auto const& [shift, rays] : groups) {
    Integer ti = detail::minimal_threshold(rays);
    if (ti > t) {
      t = ti;
    }
  }
  CanonicalMap out{t, {}};
  for (auto const& [shift, rays] : groups) {
    for (auto& c : detail::cells_of(rays, t)) {
      out.cells.push_back(Piece{std::move(c), shift});
    }
  }
  std::sort(out.cells.begin(), out.cells.end(),
            [](const Piece& a, const Piece& b) { return a.domain < b.domain; });
  return out;
}

inline HoughtonMap canonicalize(const HoughtonMap& f) {
  return HoughtonMap{f.k, f.m, f.n, canonical_form(f).cells};
}

inline bool equals(const HoughtonMap& f, const HoughtonMap& g) {
  if (f.k != g.k || f.m != g.m || f.n != g.n) {
    throw DimensionMismatch("maps of different shape");
  }
  return canonical_form(f) == canonical_form(g);
}

////////////////////////////////////////////////////////////////////////////
// Composition and inverse
////////////////////////////////////////////////////////////////////////////

namespace detail {

// g o f: each image ray of f is cut by the domain pieces of g and the cuts
// are pulled back along f's translation.
inline HoughtonMap compose_unchecked(const HoughtonMap& g, const HoughtonMap& f) {
  HoughtonMap h{f.k, f.m, g.n, {}};
  for (auto const& pf : f.pieces) {
    MarkedRay im = pf.image();
    for (auto const& pg : g.pieces) {
      auto cut = ray_intersect(im, pg.domain);
      if (!cut) {
        continue;
      }
      std::vector<Integer> back(pf.shift.offset.size());
      std::vector<Integer> total(pf.shift.offset.size());
      for (std::size_t j = 0; j < back.size(); ++j) {
        back[j]  = -pf.shift.offset[j];
        total[j] = pf.shift.offset[j] + pg.shift.offset[j];
      }
      h.pieces.push_back(
          Piece{MarkedRay{ray_translate(cut->ray, back), pf.domain.copy},
                Translation{std::move(total), pg.shift.target_copy}});
    }
  }
  return canonicalize(h);
}

}  // namespace detail

// g o f, in canonical form.
inline HoughtonMap compose(const HoughtonMap& g, const HoughtonMap& f) {
  if (f.k != g.k || f.n != g.m) {
    throw DimensionMismatch("cannot compose map " + std::to_string(g.m) + "->"
                            + std::to_string(g.n) + " after map "
                            + std::to_string(f.m) + "->" + std::to_string(f.n)
                            + " (k " + std::to_string(g.k) + " vs "
                            + std::to_string(f.k) + ")");
  }
  require_valid(f);
  require_valid(g);
  return detail::compose_unchecked(g, f);
}

inline HoughtonMap inverse(const HoughtonMap& g) {
  require_bijective(g);
  HoughtonMap inv{g.k, g.n, g.m, {}};
  for (auto const& p : g.pieces) {
    std::vector<Integer> neg(p.shift.offset.size());
    for (std::size_t j = 0; j < neg.size(); ++j) {
      neg[j] = -p.shift.offset[j];
    }
    inv.pieces.push_back(Piece{p.image(), {std::move(neg), p.domain.copy}});
  }
  return canonicalize(inv);
}

////////////////////////////////////////////////////////////////////////////
// Copy permutations
////////////////////////////////////////////////////////////////////////////

namespace detail {

// The unique k-dimensional piece on each domain copy, indexed by copy - 1.
inline std::vector<const Piece*> top_pieces(const HoughtonMap& f) {
  std::vector<const Piece*> out(static_cast<std::size_t>(f.m), nullptr);
  for (auto const& p : f.pieces) {
    if (p.domain.ray.rank() == f.k) {
      auto& slot = out[static_cast<std::size_t>(p.domain.copy - 1)];
      if (slot != nullptr) {
        throw ValidationError("copy " + std::to_string(p.domain.copy)
                              + " has two k-dimensional pieces");
      }
      slot = &p;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == nullptr) {
      throw ValidationError("copy " + std::to_string(i + 1)
                            + " has no k-dimensional piece");
    }
  }
  return out;
}

}  // namespace detail

// Copy to which the k-dimensional ray of each copy is sent.
inline Permutation sigma_projection(const HoughtonMap& g) {
  require_bijective(g);
  Permutation s;
  for (auto const* p : detail::top_pieces(g)) {
    s.images.push_back(p->shift.target_copy);
  }
  return s;
}

inline bool in_kernel(const HoughtonMap& g) {
  return sigma_projection(g).is_identity();
}

// (x, i) |-> (x, sigma(i)).
inline HoughtonMap embed_symmetric(const Permutation& sigma, int k) {
  if (!sigma.is_valid()) {
    throw ValidationError("not a permutation");
  }
  HoughtonMap g = identity_map(k, sigma.size());
  for (auto& p : g.pieces) {
    p.shift.target_copy = sigma(p.domain.copy);
  }
  return g;
}

struct Decomposition {
  HoughtonMap kernel_part;
  Permutation sigma;
};

// g = kernel_part o embed_symmetric(sigma).
inline Decomposition decompose(const HoughtonMap& g) {
  Permutation s = sigma_projection(g);
  HoughtonMap h =
      detail::compose_unchecked(g, embed_symmetric(s.inverse(), g.k));
  return {std::move(h), std::move(s)};
}

struct TopOffset {
  int                  copy;
  std::vector<Integer> offset;
  int                  target_copy;

  friend bool operator==(const TopOffset& a, const TopOffset& b) {
    return a.copy == b.copy && a.target_copy == b.target_copy
           && compare(a.offset, b.offset) == 0;
  }
};

// Translation of the k-dimensional piece of every copy.
inline std::vector<TopOffset> k_ray_offsets(const HoughtonMap& g) {
  require_bijective(g);
  std::vector<TopOffset> out;
  for (auto const* p : detail::top_pieces(g)) {
    out.push_back({p->domain.copy, p->shift.offset, p->shift.target_copy});
  }
  return out;
}

// (d_1, ..., d_n) with g(x, i) = (x + d_i, i) for large x; k = 1 kernel
// elements only.
inline std::vector<Integer> translation_vector(const HoughtonMap& g) {
  if (g.k != 1) {
    throw DimensionMismatch("translation vectors are defined for k = 1 only");
  }
  if (!in_kernel(g)) {
    throw ValidationError("element permutes the copies; not in the kernel");
  }
  std::vector<Integer> d;
  for (auto const& t : k_ray_offsets(g)) {
    d.push_back(t.offset[0]);
  }
  return d;
}

struct EventualTranslation {
  bool                 holds = false;
  std::vector<Integer> thresholds;  // per copy: g is the tail translation
                                    // for every x > threshold
  Integer              threshold;   // maximum over copies
  std::vector<Integer> offsets;
  Permutation          sigma;
};

// For k = 1: g(x, i) = (x + d_i, sigma(i)) for every x beyond a finite
// threshold. Thresholds are minimal; the check walks the pieces of each copy
// symbolically.
inline EventualTranslation eventual_translation_check(const HoughtonMap& g) {
  if (g.k != 1) {
    throw DimensionMismatch("eventual translation check needs k = 1");
  }
  require_bijective(g);
  EventualTranslation out;
  out.sigma     = sigma_projection(g);
  out.threshold = 0;
  out.holds     = true;
  auto tops     = detail::top_pieces(g);
  for (int i = 1; i <= g.m; ++i) {
    const Piece& top = *tops[static_cast<std::size_t>(i - 1)];
    Integer      d   = top.shift.offset[0];
    Integer      t   = top.domain.ray.base[0] - 1;
    // Extend the tail downwards while g still agrees with the translation.
    while (t >= 1) {
      MarkedPoint q = apply(g, MarkedPoint{Point(std::vector<Integer>{t}), i});
      if (q.copy != out.sigma(i) || q.x[0] != t + d) {
        break;
      }
      t -= 1;
    }
    // Every piece on copy i reaching beyond t must carry (d, sigma(i)).
    for (auto const& p : g.pieces) {
      if (p.domain.copy != i) {
        continue;
      }
      bool reaches = p.domain.ray.rank() == 1 || p.domain.ray.base[0] > t;
      if (reaches
          && (p.shift.target_copy != out.sigma(i) || p.shift.offset[0] != d)) {
        out.holds = false;
      }
    }
    out.offsets.push_back(d);
    out.thresholds.push_back(t);
    if (t > out.threshold) {
      out.threshold = t;
    }
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////
// FI-functoriality, restriction, monoidal sum
////////////////////////////////////////////////////////////////////////////

// Images of an injection [m] -> [n], images[i - 1] = f(i).
using Injection = std::vector<int>;

inline void check_injection(const Injection& f, int n) {
  std::vector<bool> seen(static_cast<std::size_t>(std::max(n, 0)) + 1, false);
  for (int x : f) {
    if (x < 1 || x > n) {
      throw ValidationError("injection value " + std::to_string(x)
                            + " outside [1, " + std::to_string(n) + "]");
    }
    if (seen[static_cast<std::size_t>(x)]) {
      throw ValidationError("map [" + std::to_string(f.size()) + "] -> ["
                            + std::to_string(n) + "] is not injective");
    }
    seen[static_cast<std::size_t>(x)] = true;
  }
}

// f_*: relabels the copies of a kernel element through f and fixes every
// copy outside the image of f.
inline HoughtonMap fi_map(const Injection& f, int n, const HoughtonMap& g) {
  check_injection(f, n);
  if (static_cast<int>(f.size()) != g.m) {
    throw DimensionMismatch("injection domain does not match element degree");
  }
  if (!in_kernel(g)) {
    throw ValidationError("fi_map is defined on kernel elements only");
  }
  HoughtonMap out{g.k, n, n, {}};
  std::vector<bool> hit(static_cast<std::size_t>(n) + 1, false);
  for (auto const& p : g.pieces) {
    Piece q = p;
    q.domain.copy       = f[static_cast<std::size_t>(p.domain.copy - 1)];
    q.shift.target_copy = f[static_cast<std::size_t>(p.shift.target_copy - 1)];
    out.pieces.push_back(std::move(q));
  }
  for (int x : f) {
    hit[static_cast<std::size_t>(x)] = true;
  }
  for (int c = 1; c <= n; ++c) {
    if (!hit[static_cast<std::size_t>(c)]) {
      out.pieces.push_back(
          {{Ray::full(g.k), c}, {std::vector<Integer>(g.k, Integer(0)), c}});
    }
  }
  return canonicalize(out);
}

// Restriction of g to the first m copies.
inline HoughtonMap restrict_to(const HoughtonMap& g, int m) {
  if (m < 0 || m > g.m) {
    throw DimensionMismatch("cannot restrict to " + std::to_string(m)
                            + " copies");
  }
  HoughtonMap out{g.k, m, g.n, {}};
  for (auto const& p : g.pieces) {
    if (p.domain.copy <= m) {
      out.pieces.push_back(p);
    }
  }
  return out;
}

// g acting on copies 1..a, h on copies a+1..a+b.
inline HoughtonMap block_sum(const HoughtonMap& g, const HoughtonMap& h) {
  if (g.k != h.k || !g.is_square() || !h.is_square()) {
    throw DimensionMismatch("block sum needs automorphisms of equal k");
  }
  HoughtonMap out{g.k, g.m + h.m, g.n + h.n, g.pieces};
  for (auto p : h.pieces) {
    p.domain.copy += g.m;
    p.shift.target_copy += g.n;
    out.pieces.push_back(std::move(p));
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////
// Subobjects and complements
////////////////////////////////////////////////////////////////////////////

inline RayPartition complement_subobject(const HoughtonMap& f) {
  require_valid(f);
  Region comp = region_complement(image_region(f));
  return RayPartition{comp, comp.rays};
}

// Two injections into the same codomain represent the same subobject iff
// their images agree.
inline bool same_subobject(const HoughtonMap& f, const HoughtonMap& g) {
  if (f.k != g.k || f.n != g.n) {
    throw DimensionMismatch("maps have different codomains");
  }
  require_valid(f);
  require_valid(g);
  return f.m == g.m
         && canonicalize_region(image_region(f))
                == canonicalize_region(image_region(g));
}

namespace detail {

// Splits `r` along the coordinates of `drop` in increasing order, each time
// continuing with the child. Returns the final child; the remainders go to
// `debris`.
inline MarkedRay split_chain(const MarkedRay& r, const std::vector<int>& drop,
                             std::vector<MarkedRay>& debris) {
  MarkedRay cur = r;
  for (int j : drop) {
    auto [child, rest] = ray_split(cur.ray, j);
    debris.push_back({std::move(rest), cur.copy});
    cur.ray = std::move(child);
  }
  return cur;
}

inline std::size_t first_top(const std::vector<MarkedRay>& rays, int k) {
  std::size_t best = rays.size();
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (rays[i].ray.rank() == k && (best == rays.size() || rays[i] < rays[best])) {
      best = i;
    }
  }
  if (best == rays.size()) {
    throw ValidationError("no k-dimensional ray available for extension");
  }
  return best;
}

}  // namespace detail

// Extends an injection N^k x [m] -> N^k x [n] (m < n) to a bijection of
// N^k x [n]. The complement of the image is matched with copies m+1..n:
// for every lower-dimensional complement ray with free set T, a source
// k-ray is split down a chain until a T-ray appears, and a complement
// k-ray is split along the same chain stopped one step early, so that the
// direction-set multisets of both sides agree. Like rays are then paired in
// canonical order.
inline HoughtonMap extend_to_automorphism(const HoughtonMap& f) {
  require_valid(f);
  if (f.m >= f.n) {
    throw ValidationError("extension needs m < n");
  }
  const int              k = f.k;
  std::vector<MarkedRay> target = region_complement(image_region(f)).rays;
  std::vector<MarkedRay> source;
  for (int c = f.m + 1; c <= f.n; ++c) {
    source.push_back({Ray::full(k), c});
  }
  const std::vector<MarkedRay> low = [&] {
    std::vector<MarkedRay> out;
    for (auto const& r : target) {
      if (r.ray.rank() < k) {
        out.push_back(r);
      }
    }
    return out;
  }();
  for (auto const& r : low) {
    std::vector<int> drop;
    for (int j = 0; j < k; ++j) {
      if (!r.ray.dirs.contains(j)) {
        drop.push_back(j);
      }
    }
    std::size_t s   = detail::first_top(source, k);
    MarkedRay   src = source[s];
    source.erase(source.begin() + static_cast<std::ptrdiff_t>(s));
    source.push_back(detail::split_chain(src, drop, source));
    if (drop.size() >= 2) {
      std::size_t t   = detail::first_top(target, k);
      MarkedRay   tgt = target[t];
      target.erase(target.begin() + static_cast<std::ptrdiff_t>(t));
      std::vector<int> shorter(drop.begin(), drop.end() - 1);
      target.push_back(detail::split_chain(tgt, shorter, target));
    }
  }
  std::map<DirSet, std::vector<MarkedRay>> by_dirs_src;
  std::map<DirSet, std::vector<MarkedRay>> by_dirs_tgt;
  for (auto& r : source) {
    by_dirs_src[r.ray.dirs].push_back(r);
  }
  for (auto& r : target) {
    by_dirs_tgt[r.ray.dirs].push_back(r);
  }
  HoughtonMap g{k, f.n, f.n, f.pieces};
  for (auto& [dirs, src] : by_dirs_src) {
    auto& tgt = by_dirs_tgt[dirs];
    if (tgt.size() != src.size()) {
      throw Error("extension bookkeeping failed: direction multisets differ");
    }
    std::sort(src.begin(), src.end());
    std::sort(tgt.begin(), tgt.end());
    for (std::size_t i = 0; i < src.size(); ++i) {
      std::vector<Integer> off(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        off[static_cast<std::size_t>(j)] = tgt[i].ray.base[j] - src[i].ray.base[j];
      }
      g.pieces.push_back(Piece{src[i], {std::move(off), tgt[i].copy}});
    }
  }
  g = canonicalize(g);
  require_bijective(g);
  return g;
}

////////////////////////////////////////////////////////////////////////////
// Random elements
////////////////////////////////////////////////////////////////////////////

namespace detail {

// Cells of a grid whose threshold may differ per copy and per coordinate.
inline std::vector<MarkedRay>
mixed_grid(int k, const std::vector<std::vector<unsigned>>& thresholds) {
  std::vector<MarkedRay> cells;
  for (std::size_t c = 0; c < thresholds.size(); ++c) {
    std::vector<std::vector<CellOption>> options(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      for (unsigned long v = 1; v <= thresholds[c][static_cast<std::size_t>(j)];
           ++v) {
        options[static_cast<std::size_t>(j)].push_back({false, v});
      }
      options[static_cast<std::size_t>(j)].push_back({true, 0});
    }
    for_each_choice(options, Integer(0), [&](const Ray& cell) {
      Ray r = cell;
      for (int j : r.dirs.members()) {
        r.base[j] = thresholds[c][static_cast<std::size_t>(j)] + 1;
      }
      cells.push_back({std::move(r), static_cast<int>(c) + 1});
      return true;
    });
  }
  return cells;
}

// Number of cells of each direction set.
inline std::map<std::uint32_t, unsigned long>
cell_census(int k, const std::vector<std::vector<unsigned>>& thresholds) {
  std::map<std::uint32_t, unsigned long> census;
  for (auto const& t : thresholds) {
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << k); ++s) {
      unsigned long count = 1;
      for (int j = 0; j < k; ++j) {
        if (((s >> j) & 1U) == 0) {
          count *= t[static_cast<std::size_t>(j)];
        }
      }
      census[s] += count;
    }
  }
  return census;
}

}  // namespace detail

// Random element of the twisted group whose canonical threshold and offsets
// are bounded by `bound`. Domain and codomain are cut into grids with random
// per-copy thresholds of equal direction census; like cells are matched by a
// random bijection.
template <class Rng>
HoughtonMap random_element(int k, int n, unsigned bound, Rng& rng) {
  if (k < 1 || k > 8 || n < 1) {
    throw DimensionMismatch("random_element needs 1 <= k <= 8 and n >= 1");
  }
  std::uniform_int_distribution<unsigned> pick(0, bound);
  auto random_thresholds = [&] {
    std::vector<std::vector<unsigned>> t(static_cast<std::size_t>(n),
                                         std::vector<unsigned>(k));
    for (auto& row : t) {
      for (auto& x : row) {
        x = pick(rng);
      }
    }
    return t;
  };
  auto dom = random_thresholds();
  auto census = detail::cell_census(k, dom);
  std::vector<std::vector<unsigned>> cod;
  for (int attempt = 0; attempt < 32 && cod.empty(); ++attempt) {
    auto t = random_thresholds();
    if (detail::cell_census(k, t) == census) {
      cod = std::move(t);
    }
  }
  if (cod.empty()) {
    cod = dom;
    std::shuffle(cod.begin(), cod.end(), rng);
  }
  auto src = detail::mixed_grid(k, dom);
  auto tgt = detail::mixed_grid(k, cod);
  std::map<DirSet, std::vector<MarkedRay>> pool;
  for (auto& r : tgt) {
    pool[r.ray.dirs].push_back(r);
  }
  for (auto& [dirs, rays] : pool) {
    std::shuffle(rays.begin(), rays.end(), rng);
  }
  HoughtonMap g{k, n, n, {}};
  for (auto const& s : src) {
    auto& bucket = pool[s.ray.dirs];
    MarkedRay t = std::move(bucket.back());
    bucket.pop_back();
    std::vector<Integer> off(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      off[static_cast<std::size_t>(j)] = t.ray.base[j] - s.ray.base[j];
    }
    g.pieces.push_back(Piece{s, {std::move(off), t.copy}});
  }
  return canonicalize(g);
}

inline HoughtonMap random_element(int k, int n, unsigned bound,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_element(k, n, bound, rng);
}

// Random injection N^k x [m] -> N^k x [n]: the restriction of a random
// automorphism.
template <class Rng>
HoughtonMap random_injection(int k, int m, int n, unsigned bound, Rng& rng) {
  return restrict_to(random_element(k, n, bound, rng), m);
}

}  // namespace hforge
