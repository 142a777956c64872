#pragma once

// Bounded truncations of the complex S_n whose vertices are ray injections
// N^k -> N^k x [n] and whose simplices are tuples with pairwise disjoint
// images; the projection pi to the simplex on [n]; S-sections.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hforge/complex.hpp"
#include "hforge/error.hpp"
#include "hforge/houghton.hpp"
#include "hforge/rays.hpp"

namespace hforge {

inline constexpr std::size_t kDefaultSimplexLimit = 2'000'000;

// Textual key of the canonical form; equal keys iff equal maps.
inline std::string map_key(const HoughtonMap& f) {
  CanonicalMap c = canonical_form(f);
  std::string  key = std::to_string(f.k) + ":" + std::to_string(f.m) + ":"
                    + std::to_string(f.n);
  for (auto const& p : c.cells) {
    key += ";" + to_string(p.domain) + ">";
    for (auto const& x : p.shift.offset) key += x.get_str() + ",";
    key += std::to_string(p.shift.target_copy);
  }
  return key;
}

inline bool images_disjoint(const HoughtonMap& a, const HoughtonMap& b) {
  for (auto const& p : a.pieces) {
    MarkedRay ia = p.image();
    for (auto const& q : b.pieces) {
      if (ray_intersect(ia, q.image())) return false;
    }
  }
  return true;
}

// The maps as the components of one map N^k x [vs.size()] -> N^k x [n].
inline HoughtonMap joint_map(const std::vector<const HoughtonMap*>& vs, int k,
                             int n) {
  HoughtonMap j{k, static_cast<int>(vs.size()), n, {}};
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (auto p : vs[i]->pieces) {
      p.domain.copy = static_cast<int>(i) + 1;
      j.pieces.push_back(std::move(p));
    }
  }
  return j;
}

inline bool jointly_surjective(const std::vector<const HoughtonMap*>& vs, int k,
                               int n) {
  if (static_cast<int>(vs.size()) != n) return false;
  auto v = validate(joint_map(vs, k, n));
  return v.valid && v.bijective;
}

inline void require_vertex(const HoughtonMap& v, int k, int n) {
  if (v.k != k || v.m != 1 || v.n != n) {
    throw DimensionMismatch("vertex must be a map N^" + std::to_string(k)
                            + " -> N^" + std::to_string(k) + " x ["
                            + std::to_string(n) + "]");
  }
  require_valid(v);
}

// Copy receiving the k-dimensional ray of a vertex.
inline int pi_projection(const HoughtonMap& v) {
  require_valid(v);
  if (v.m != 1) {
    throw DimensionMismatch("pi is defined on maps out of one copy");
  }
  int found = 0;
  for (auto const& p : v.pieces) {
    if (p.domain.ray.rank() == v.k) {
      if (found != 0) throw ValidationError("two k-dimensional pieces");
      found = p.shift.target_copy;
    }
  }
  if (found == 0) throw ValidationError("no k-dimensional piece");
  return found;
}

// Simplex condition: pairwise disjoint images, plus joint surjectivity when
// all n copies are used. Without include_top, n-tuples are never simplices.
inline bool simplex_test(const std::vector<HoughtonMap>& vs, int n,
                         bool include_top = true) {
  if (static_cast<int>(vs.size()) > n) {
    throw DimensionMismatch("a simplex of S_" + std::to_string(n)
                            + " has at most " + std::to_string(n)
                            + " vertices");
  }
  if (vs.empty()) return true;
  int k = vs.front().k;
  for (auto const& v : vs) require_vertex(v, k, n);
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      if (!images_disjoint(vs[a], vs[b])) return false;
    }
  }
  if (static_cast<int>(vs.size()) == n) {
    if (!include_top) return false;
    std::vector<const HoughtonMap*> ptrs;
    for (auto const& v : vs) ptrs.push_back(&v);
    return jointly_surjective(ptrs, k, n);
  }
  return true;
}

////////////////////////////////////////////////////////////////////////////
// Truncated S_n
////////////////////////////////////////////////////////////////////////////

// All vertices with canonical threshold <= B and offsets in [-B, B]^k. Such
// a map is a single translation on every cell of the threshold-B grid, so
// vertices correspond to injective cellwise assignments.
inline std::vector<HoughtonMap> enumerate_vertices(int k, int n, unsigned B,
                                                   std::size_t limit) {
  if (k < 1 || n < 1) {
    throw DimensionMismatch("need k >= 1 and n >= 1");
  }
  std::vector<Ray> cells = grid_cells(k, Integer(B));
  // Candidate translations per cell.
  std::vector<std::vector<Translation>> options(cells.size());
  std::vector<Integer> off(static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int copy = 1; copy <= n; ++copy) {
      std::vector<long> digits(static_cast<std::size_t>(k), -static_cast<long>(B));
      while (true) {
        bool positive = true;
        for (int j = 0; j < k; ++j) {
          off[static_cast<std::size_t>(j)] = digits[static_cast<std::size_t>(j)];
          if (cells[c].base[j] + off[static_cast<std::size_t>(j)] < 1) positive = false;
        }
        if (positive) options[c].push_back({off, copy});
        int j = k - 1;
        while (j >= 0 && digits[static_cast<std::size_t>(j)] == static_cast<long>(B)) {
          digits[static_cast<std::size_t>(j)] = -static_cast<long>(B);
          --j;
        }
        if (j < 0) break;
        ++digits[static_cast<std::size_t>(j)];
      }
    }
  }
  std::vector<HoughtonMap> out;
  std::vector<Piece>       chosen;
  std::vector<MarkedRay>   images;
  std::function<void(std::size_t)> rec = [&](std::size_t c) {
    if (c == cells.size()) {
      if (out.size() >= limit) {
        throw SizeLimitExceeded("vertex enumeration exceeds "
                                + std::to_string(limit));
      }
      out.push_back(canonicalize(HoughtonMap{k, 1, n, chosen}));
      return;
    }
    for (auto const& t : options[c]) {
      MarkedRay im{ray_translate(cells[c], t.offset), t.target_copy};
      bool      ok = true;
      for (auto const& other : images) {
        if (ray_intersect(im, other)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(Piece{{cells[c], 1}, t});
      images.push_back(std::move(im));
      rec(c + 1);
      chosen.pop_back();
      images.pop_back();
    }
  };
  rec(0);
  return out;
}

struct SnComplex {
  int                      k = 1;
  int                      n = 1;
  unsigned                 bound = 0;
  bool                     include_top = false;
  std::vector<HoughtonMap> vertices;
  SimplicialComplex        complex;
};

struct SnOptions {
  bool        include_top = false;
  int         max_dim = -1;  // cap on simplex dimension, -1 for none
  std::size_t simplex_limit = kDefaultSimplexLimit;
};

// Truncation of S_n at bound B. Simplices of size <= n-1 are the cliques of
// the disjointness graph; with include_top, jointly surjective n-cliques are
// added as top simplices.
inline SnComplex build_sn_truncated(int k, int n, unsigned B,
                                    const SnOptions& opt = {}) {
  SnComplex sn{k, n, B, opt.include_top, {}, {}};
  auto all = enumerate_vertices(k, n, B, opt.simplex_limit);
  if (n == 1 && opt.include_top) {
    for (auto& v : all) {
      if (validate(v).bijective) sn.vertices.push_back(std::move(v));
    }
  } else {
    sn.vertices = std::move(all);
  }
  int nv      = static_cast<int>(sn.vertices.size());
  sn.complex  = SimplicialComplex(nv);
  std::vector<std::vector<int>> later(static_cast<std::size_t>(nv));
  for (int a = 0; a < nv; ++a) {
    for (int b = a + 1; b < nv; ++b) {
      if (images_disjoint(sn.vertices[static_cast<std::size_t>(a)],
                          sn.vertices[static_cast<std::size_t>(b)])) {
        later[static_cast<std::size_t>(a)].push_back(b);
      }
    }
  }
  int max_size = opt.include_top ? n : std::max(n - 1, 1);
  if (opt.max_dim >= 0) max_size = std::min(max_size, opt.max_dim + 1);
  std::size_t count = 0;
  Simplex     cur;
  std::function<void(const std::vector<int>&)> grow =
      [&](const std::vector<int>& cand) {
        bool top = static_cast<int>(cur.size()) == n;
        if (top) {
          std::vector<const HoughtonMap*> ptrs;
          for (int v : cur) ptrs.push_back(&sn.vertices[static_cast<std::size_t>(v)]);
          if (!jointly_surjective(ptrs, k, n)) return;
        }
        if (++count > opt.simplex_limit) {
          throw SizeLimitExceeded("truncated complex exceeds "
                                  + std::to_string(opt.simplex_limit)
                                  + " simplices");
        }
        sn.complex.add_simplex_unchecked(cur);
        if (static_cast<int>(cur.size()) >= max_size) return;
        for (std::size_t i = 0; i < cand.size(); ++i) {
          int              v = cand[i];
          std::vector<int> next;
          auto const&      nb = later[static_cast<std::size_t>(v)];
          std::set_intersection(cand.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                cand.end(), nb.begin(), nb.end(),
                                std::back_inserter(next));
          cur.push_back(v);
          grow(next);
          cur.pop_back();
        }
      };
  for (int v = 0; v < nv; ++v) {
    cur = {v};
    grow(later[static_cast<std::size_t>(v)]);
  }
  return sn;
}

// pi on vertex indices, 0-based (copy - 1), as a map to the simplex on [n].
inline std::vector<int> pi_vertex_map(const SnComplex& sn) {
  std::vector<int> m;
  for (auto const& v : sn.vertices) m.push_back(pi_projection(v) - 1);
  return m;
}

// (Delta^{n-1})^{(d)} on vertices 0..n-1.
inline SimplicialComplex simplex_skeleton(int n, int d) {
  return skeleton(full_simplex(n - 1), d);
}

////////////////////////////////////////////////////////////////////////////
// S-sections
////////////////////////////////////////////////////////////////////////////

// x |-> (x + D(1,...,1), copy).
inline HoughtonMap diagonal_translation(int k, int n, int copy,
                                        const Integer& D) {
  return HoughtonMap{
      k, 1, n,
      {Piece{{Ray::full(k), 1},
             {std::vector<Integer>(static_cast<std::size_t>(k), D), copy}}}};
}

// f_p sends N^k far out into copy p, past every image ray that a member of
// S with pi != p places in copy p. Those rays are lower-dimensional, so a
// ray is avoided as soon as D reaches its smallest fixed coordinate.
inline std::vector<HoughtonMap> build_s_section(int k, int n,
                                                const std::vector<HoughtonMap>& S) {
  for (auto const& s : S) require_vertex(s, k, n);
  std::vector<HoughtonMap> rho;
  for (int p = 1; p <= n; ++p) {
    Integer D = 0;
    for (auto const& s : S) {
      if (pi_projection(s) == p) continue;
      for (auto const& piece : s.pieces) {
        MarkedRay im = piece.image();
        if (im.copy != p) continue;
        std::optional<Integer> low;
        for (int j = 0; j < k; ++j) {
          if (!im.ray.dirs.contains(j) && (!low || im.ray.base[j] < *low)) {
            low = im.ray.base[j];
          }
        }
        if (low && *low > D) D = *low;
      }
    }
    rho.push_back(diagonal_translation(k, n, p, D));
  }
  return rho;
}

struct SectionReport {
  bool             ok = true;
  std::vector<int> sigma;  // indices into S
  Simplex          tau;    // 0-based vertices of the simplex on [n]
  bool             tau_in_base_link = false;
  bool             lift_in_link     = false;
  std::string      diagnostic;
};

// Exhaustive check of  tau in Lk(pi sigma)  <=>  rho(tau) in Lk(sigma)  for
// every simplex sigma spanned by S and every simplex tau of the
// (n-2)-skeleton of the simplex on [n].
inline SectionReport verify_s_section(int k, int n,
                                      const std::vector<HoughtonMap>& S,
                                      const std::vector<HoughtonMap>& rho) {
  if (static_cast<int>(rho.size()) != n) {
    throw ValidationError("a section assigns one vertex to each of the "
                          + std::to_string(n) + " copies");
  }
  for (int i = 0; i < n; ++i) {
    require_vertex(rho[static_cast<std::size_t>(i)], k, n);
    if (pi_projection(rho[static_cast<std::size_t>(i)]) != i + 1) {
      throw ValidationError("not a section: pi(rho(" + std::to_string(i + 1)
                            + ")) = "
                            + std::to_string(pi_projection(rho[static_cast<std::size_t>(i)])));
    }
  }
  for (auto const& s : S) require_vertex(s, k, n);
  SectionReport r;
  const int     cap = n - 1;  // simplices of the (n-2)-skeleton
  if (cap >= 2) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (!images_disjoint(rho[static_cast<std::size_t>(a)],
                             rho[static_cast<std::size_t>(b)])) {
          r.ok         = false;
          r.tau        = {a, b};
          r.diagnostic = "rho is not simplicial: images of "
                         + std::to_string(a + 1) + " and "
                         + std::to_string(b + 1) + " overlap";
          return r;
        }
      }
    }
  }
  // Distinct members of S.
  std::vector<std::string> keys;
  std::vector<int>         uniq;
  for (std::size_t i = 0; i < S.size(); ++i) {
    std::string key = map_key(S[i]);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      keys.push_back(key);
      uniq.push_back(static_cast<int>(i));
    }
  }
  std::vector<std::string> rho_keys;
  for (auto const& f : rho) rho_keys.push_back(map_key(f));
  std::vector<int> pis;
  for (auto const& s : S) pis.push_back(pi_projection(s));

  const std::size_t m = uniq.size();
  for (std::uint64_t smask = 1; smask < (std::uint64_t{1} << m); ++smask) {
    std::vector<int> sigma;
    for (std::size_t i = 0; i < m; ++i) {
      if ((smask >> i) & 1U) sigma.push_back(uniq[i]);
    }
    if (static_cast<int>(sigma.size()) > cap) continue;
    bool is_simplex = true;
    for (std::size_t a = 0; a < sigma.size() && is_simplex; ++a) {
      for (std::size_t b = a + 1; b < sigma.size(); ++b) {
        if (!images_disjoint(S[static_cast<std::size_t>(sigma[a])],
                             S[static_cast<std::size_t>(sigma[b])])) {
          is_simplex = false;
          break;
        }
      }
    }
    if (!is_simplex) continue;
    std::vector<int> pi_sigma;
    for (int i : sigma) pi_sigma.push_back(pis[static_cast<std::size_t>(i)] - 1);
    std::sort(pi_sigma.begin(), pi_sigma.end());
    for (std::uint32_t tmask = 1; tmask < (std::uint32_t{1} << n); ++tmask) {
      Simplex tau;
      for (int i = 0; i < n; ++i) {
        if ((tmask >> i) & 1U) tau.push_back(i);
      }
      if (static_cast<int>(tau.size()) > cap) continue;
      // Base side: tau and pi(sigma) disjoint, union still a simplex.
      bool meets = false;
      for (int i : tau) {
        if (std::binary_search(pi_sigma.begin(), pi_sigma.end(), i)) meets = true;
      }
      bool lhs = !meets && static_cast<int>(tau.size() + pi_sigma.size()) <= cap;
      // Lifted side: rho(tau) and sigma share no vertex, union is a simplex.
      bool rhs = static_cast<int>(tau.size() + sigma.size()) <= cap;
      for (int i : tau) {
        if (!rhs) break;
        for (int s : sigma) {
          if (rho_keys[static_cast<std::size_t>(i)] == map_key(S[static_cast<std::size_t>(s)])
              || !images_disjoint(rho[static_cast<std::size_t>(i)],
                                  S[static_cast<std::size_t>(s)])) {
            rhs = false;
            break;
          }
        }
      }
      if (lhs != rhs) {
        r.ok               = false;
        r.sigma            = sigma;
        r.tau              = tau;
        r.tau_in_base_link = lhs;
        r.lift_in_link     = rhs;
        std::string sig;
        for (int s : sigma) sig += (sig.empty() ? "" : ",") + std::to_string(s);
        r.diagnostic = "sigma = S{" + sig + "}, tau = " + to_string(tau)
                       + ": tau " + (lhs ? "is" : "is not")
                       + " in the base link but rho(tau) "
                       + (rhs ? "is" : "is not") + " in the link of sigma";
        return r;
      }
    }
  }
  return r;
}

////////////////////////////////////////////////////////////////////////////
// Connectivity probe
////////////////////////////////////////////////////////////////////////////

struct ProbeReport {
  int         k = 1;
  int         n = 1;
  unsigned    bound = 0;
  unsigned    slack = 0;
  std::size_t trials = 0;
  std::size_t connected = 0;
  std::size_t vertex_count = 0;  // B-bounded vertices
  std::size_t pool_size = 0;     // far-out translations added
  int         max_distance = 0;
  double      success_rate = 0.0;
  bool        nonempty = false;
  std::optional<bool> h0_vanishes;
  std::string note;
};

// Samples pairs of B-bounded vertices and searches for edge paths through
// the pure translations x |-> (x + D(1,..,1), c), D <= B + slack, all of
// which lie in the (B + slack)-bounded truncation. Also reports whether the
// reduced H_0 of the graph on all these vertices vanishes.
inline ProbeReport connectivity_probe(int k, int n, unsigned B, unsigned C,
                                      std::size_t trials, std::uint64_t seed,
                                      std::size_t limit = kDefaultSimplexLimit) {
  ProbeReport r{k, n, B, C, trials, 0, 0, 0, 0, 0.0, false, std::nullopt, ""};
  auto        verts = enumerate_vertices(k, n, B, limit);
  r.vertex_count    = verts.size();
  r.nonempty        = !verts.empty();
  if (n < 3) {
    r.trials = 0;
    r.note   = "n = " + std::to_string(n)
             + ": the connectivity bound (n-3)/2 is negative; only "
               "(-1)-connectivity (nonemptiness) is claimed";
    return r;
  }
  std::vector<HoughtonMap> nodes = verts;
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    seen[map_key(nodes[i])] = static_cast<int>(i);
  }
  for (int c = 1; c <= n; ++c) {
    for (unsigned D = 0; D <= B + C; ++D) {
      HoughtonMap t = diagonal_translation(k, n, c, Integer(D));
      std::string key = map_key(t);
      if (!seen.contains(key)) {
        seen[key] = static_cast<int>(nodes.size());
        nodes.push_back(std::move(t));
        ++r.pool_size;
      }
    }
  }
  std::size_t N = nodes.size();
  std::vector<std::vector<int>> adj(N);
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = a + 1; b < N; ++b) {
      if (images_disjoint(nodes[a], nodes[b])) {
        adj[a].push_back(static_cast<int>(b));
        adj[b].push_back(static_cast<int>(a));
      }
    }
  }
  std::mt19937_64 rng(seed);
  if (!verts.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
    for (std::size_t t = 0; t < trials; ++t) {
      std::size_t      u = pick(rng);
      std::size_t      v = pick(rng);
      std::vector<int> dist(N, -1);
      std::deque<std::size_t> queue{u};
      dist[u] = 0;
      while (!queue.empty() && dist[v] < 0) {
        std::size_t x = queue.front();
        queue.pop_front();
        for (int y : adj[x]) {
          if (dist[static_cast<std::size_t>(y)] < 0) {
            dist[static_cast<std::size_t>(y)] = dist[x] + 1;
            queue.push_back(static_cast<std::size_t>(y));
          }
        }
      }
      if (dist[v] >= 0) {
        ++r.connected;
        r.max_distance = std::max(r.max_distance, dist[v]);
      }
    }
  }
  r.success_rate = trials == 0 ? 1.0
                               : static_cast<double>(r.connected)
                                     / static_cast<double>(trials);
  SimplicialComplex graph(static_cast<int>(N));
  for (std::size_t a = 0; a < N; ++a) {
    graph.add_simplex_unchecked({static_cast<int>(a)});
    for (int b : adj[a]) {
      if (static_cast<std::size_t>(b) > a) {
        graph.add_simplex_unchecked({static_cast<int>(a), b});
      }
    }
  }
  r.h0_vanishes = reduced_homology(graph, 0)[0].is_zero();
  r.note = "evidence only: paths searched through far-out translations";
  return r;
}

}  // namespace hforge
