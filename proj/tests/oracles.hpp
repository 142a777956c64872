#pragma once

// Brute-force references used by the tests. Nothing here calls into the
// library's geometry or linear algebra; maps are read only through their
// piece tables.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hforge/houghton.hpp"

namespace oracle {

using Pt = std::vector<long>;

// (point, copy)
using MPt = std::pair<Pt, int>;

inline long as_long(const hforge::Integer& x) {
  return x.get_si();
}

inline bool in_ray(const hforge::Ray& r, const Pt& p) {
  for (int j = 0; j < static_cast<int>(p.size()); ++j) {
    long b = as_long(r.base[j]);
    bool free = (r.dirs.mask() >> j) & 1U;
    if (free ? p[static_cast<std::size_t>(j)] < b : p[static_cast<std::size_t>(j)] != b) {
      return false;
    }
  }
  return true;
}

// Calls fn on every point of [1..L]^k.
inline void for_box(int k, long L, const std::function<void(const Pt&)>& fn) {
  Pt p(static_cast<std::size_t>(k), 1);
  while (true) {
    fn(p);
    int j = k - 1;
    while (j >= 0 && p[static_cast<std::size_t>(j)] == L) {
      p[static_cast<std::size_t>(j)] = 1;
      --j;
    }
    if (j < 0) return;
    ++p[static_cast<std::size_t>(j)];
  }
}

// Image of a point by scanning the piece table; nullopt when no piece
// contains it, throws when two do.
inline std::optional<MPt> eval(const hforge::HoughtonMap& f, const MPt& x) {
  std::optional<MPt> out;
  for (auto const& piece : f.pieces) {
    if (piece.domain.copy != x.second || !in_ray(piece.domain.ray, x.first)) continue;
    if (out) throw std::logic_error("point covered twice");
    Pt y = x.first;
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += as_long(piece.shift.offset[j]);
    out = MPt{y, piece.shift.target_copy};
  }
  return out;
}

// f and g agree on [1..L]^k x [m].
inline bool agree_on_box(const hforge::HoughtonMap& f, const hforge::HoughtonMap& g,
                         long L) {
  bool ok = true;
  for (int c = 1; c <= f.m && ok; ++c) {
    for_box(f.k, L, [&](const Pt& p) {
      if (ok && eval(f, {p, c}) != eval(g, {p, c})) ok = false;
    });
  }
  return ok;
}

// h = g o f pointwise on the box.
inline bool is_composite_on_box(const hforge::HoughtonMap& h, const hforge::HoughtonMap& g,
                                const hforge::HoughtonMap& f, long L) {
  bool ok = true;
  for (int c = 1; c <= f.m && ok; ++c) {
    for_box(f.k, L, [&](const Pt& p) {
      if (!ok) return;
      auto y = eval(f, {p, c});
      auto z = y ? eval(g, *y) : std::nullopt;
      if (!z || eval(h, {p, c}) != z) ok = false;
    });
  }
  return ok;
}

// The map is injective on the box, and every point of [1..L']^k x [n] with
// L' = L - slack has a preimage in the box.
inline bool bijective_on_box(const hforge::HoughtonMap& f, long L, long slack) {
  std::set<MPt> seen;
  bool          ok = true;
  for (int c = 1; c <= f.m && ok; ++c) {
    for_box(f.k, L, [&](const Pt& p) {
      auto y = eval(f, {p, c});
      if (!y || !seen.insert(*y).second) ok = false;
      else for (long v : y->first) if (v < 1) ok = false;
    });
  }
  for (int c = 1; c <= f.n && ok; ++c) {
    for_box(f.k, L - slack, [&](const Pt& p) {
      if (!seen.contains({p, c})) ok = false;
    });
  }
  return ok;
}

// Points of the box covered by the rays of a region, with multiplicity.
inline std::map<MPt, int> cover_counts(const std::vector<hforge::MarkedRay>& rays,
                                       int k, int n, long L) {
  std::map<MPt, int> cnt;
  for (int c = 1; c <= n; ++c) {
    for_box(k, L, [&](const Pt& p) {
      int m = 0;
      for (auto const& r : rays) {
        if (r.copy == c && in_ray(r.ray, p)) ++m;
      }
      cnt[{p, c}] = m;
    });
  }
  return cnt;
}

// Number of injections N -> N x [n] that translate each of 1..B and the tail
// [B+1, oo) with offsets in [-B, B]; counted point by point.
inline long vertex_count_k1(int n, long B) {
  long total = 0;
  for (int tc = 1; tc <= n; ++tc) {
    for (long d = -B; d <= B; ++d) {
      long start = B + 1 + d;
      std::set<std::pair<long, int>> used;
      std::function<void(long)> place = [&](long x) {
        if (x > B) {
          ++total;
          return;
        }
        for (int c = 1; c <= n; ++c) {
          for (long v = std::max(1L, x - B); v <= x + B; ++v) {
            if (c == tc && v >= start) continue;
            if (used.contains({v, c})) continue;
            used.insert({v, c});
            place(x + 1);
            used.erase({v, c});
          }
        }
      };
      place(1);
    }
  }
  return total;
}

////////////////////////////////////////////////////////////////////////////
// Integer linear algebra in machine integers
////////////////////////////////////////////////////////////////////////////

using Mat = std::vector<std::vector<long long>>;

// Bareiss determinant; exact while intermediate values fit in 128 bits.
inline long long det(Mat a) {
  std::size_t n = a.size();
  if (n == 0) return 1;
  long long sign = 1;
  __int128  prev = 1;
  std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * static_cast<long long>(m[n - 1][n - 1]);
}

// Bareiss determinant over arbitrary-precision integers.
inline mpz_class det_big(std::vector<std::vector<mpz_class>> m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  int       sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Calls fn on every size-r subset of [0, n) until it returns false.
inline void for_subsets(std::size_t n, std::size_t r,
                        const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!fn(idx)) return;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// gcd of all i x i minors, stopping early once it reaches 1.
inline long long minor_gcd(const Mat& a, std::size_t i) {
  std::size_t rows = a.size();
  std::size_t cols = rows == 0 ? 0 : a[0].size();
  long long   g    = 0;
  for_subsets(rows, i, [&](const std::vector<std::size_t>& rs) {
    for_subsets(cols, i, [&](const std::vector<std::size_t>& cs) {
      Mat sub(i, std::vector<long long>(i));
      for (std::size_t x = 0; x < i; ++x)
        for (std::size_t y = 0; y < i; ++y) sub[x][y] = a[rs[x]][cs[y]];
      g = std::gcd(g, std::llabs(det(sub)));
      return g != 1;
    });
    return g != 1;
  });
  return g;
}

// Invariant factors d_i = D_i / D_{i-1}, for the nonzero D_i.
inline std::vector<long long> invariant_factors(const Mat& a) {
  std::vector<long long> d;
  std::size_t rows = a.size();
  std::size_t cols = rows == 0 ? 0 : a[0].size();
  long long   prev = 1;
  for (std::size_t i = 1; i <= std::min(rows, cols); ++i) {
    long long g = minor_gcd(a, i);
    if (g == 0) break;
    d.push_back(g / prev);
    prev = g;
  }
  return d;
}

// Signed boundary matrix from (d-1)-faces to d-faces of the given simplices,
// with faces indexed in the order given.
inline Mat boundary(const std::vector<std::vector<int>>& lower,
                    const std::vector<std::vector<int>>& upper) {
  Mat m(lower.size(), std::vector<long long>(upper.size(), 0));
  for (std::size_t j = 0; j < upper.size(); ++j) {
    for (std::size_t i = 0; i < upper[j].size(); ++i) {
      std::vector<int> face = upper[j];
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      auto it = std::find(lower.begin(), lower.end(), face);
      m[static_cast<std::size_t>(it - lower.begin())][j] = (i % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

}  // namespace oracle
