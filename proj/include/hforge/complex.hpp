#pragma once

// Finite simplicial complexes, reduced integral homology and the weakly
// Cohen-Macaulay test.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hforge/error.hpp"
#include "hforge/integer.hpp"
#include "hforge/matrix.hpp"
#include "hforge/smith.hpp"

namespace hforge {

// Sorted, duplicate-free vertex indices.
using Simplex = std::vector<int>;

inline std::string to_string(const Simplex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += (i == 0 ? "" : ",") + std::to_string(s[i]);
  }
  return out + "}";
}

class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  explicit SimplicialComplex(int num_vertices) : num_vertices_(num_vertices) {}

  // Closure of the given simplices under taking faces.
  static SimplicialComplex from_facets(int num_vertices,
                                       const std::vector<Simplex>& facets) {
    SimplicialComplex k(num_vertices);
    for (auto const& f : facets) {
      k.add_simplex(f);
    }
    return k;
  }

  int num_vertices() const { return num_vertices_; }

  // Adds s with all of its faces.
  void add_simplex(Simplex s) {
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw ValidationError("simplex " + to_string(s) + " repeats a vertex");
    }
    if (s.empty()) return;
    if (s.front() < 0 || s.back() >= num_vertices_) {
      throw ValidationError("simplex " + to_string(s)
                            + " uses a vertex outside [0, "
                            + std::to_string(num_vertices_) + ")");
    }
    if (contains(s)) return;
    std::size_t d = s.size() - 1;
    if (by_dim_.size() <= d) by_dim_.resize(d + 1);
    by_dim_[d].insert(s);
    if (s.size() > 1) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex face = s;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
        add_simplex(std::move(face));
      }
    }
  }

  // Adds s assuming its faces are already present.
  void add_simplex_unchecked(Simplex s) {
    std::size_t d = s.size() - 1;
    if (by_dim_.size() <= d) by_dim_.resize(d + 1);
    by_dim_[d].insert(std::move(s));
  }

  bool contains(const Simplex& s) const {
    if (s.empty()) return true;
    std::size_t d = s.size() - 1;
    return d < by_dim_.size() && by_dim_[d].contains(s);
  }

  // -1 for the empty complex.
  int dimension() const {
    for (std::size_t d = by_dim_.size(); d > 0; --d) {
      if (!by_dim_[d - 1].empty()) return static_cast<int>(d) - 1;
    }
    return -1;
  }

  bool is_empty() const { return dimension() < 0; }

  const std::set<Simplex>& simplices(int d) const {
    static const std::set<Simplex> none;
    if (d < 0 || static_cast<std::size_t>(d) >= by_dim_.size()) return none;
    return by_dim_[static_cast<std::size_t>(d)];
  }

  std::size_t count(int d) const { return simplices(d).size(); }

  std::size_t total_count() const {
    std::size_t c = 0;
    for (auto const& s : by_dim_) c += s.size();
    return c;
  }

  std::vector<Simplex> maximal_simplices() const {
    std::vector<Simplex> out;
    int                  dim = dimension();
    for (int d = dim; d >= 0; --d) {
      for (auto const& s : simplices(d)) {
        bool maximal = true;
        for (auto const& t : simplices(d + 1)) {
          if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
            maximal = false;
            break;
          }
        }
        if (maximal) out.push_back(s);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const SimplicialComplex& a,
                         const SimplicialComplex& b) {
    int d = std::max(a.dimension(), b.dimension());
    for (int i = 0; i <= d; ++i) {
      if (a.simplices(i) != b.simplices(i)) return false;
    }
    return true;
  }

 private:
  int                            num_vertices_ = 0;
  std::vector<std::set<Simplex>> by_dim_;
};

////////////////////////////////////////////////////////////////////////////
// Standard complexes and subcomplexes
////////////////////////////////////////////////////////////////////////////

// The full simplex on n + 1 vertices.
inline SimplicialComplex full_simplex(int n) {
  Simplex s;
  for (int i = 0; i <= n; ++i) s.push_back(i);
  return SimplicialComplex::from_facets(n + 1, {s});
}

// All faces of dimension <= d.
inline SimplicialComplex skeleton(const SimplicialComplex& k, int d) {
  SimplicialComplex out(k.num_vertices());
  for (int i = 0; i <= std::min(d, k.dimension()); ++i) {
    for (auto const& s : k.simplices(i)) out.add_simplex_unchecked(s);
  }
  return out;
}

// Proper faces of the n-simplex: a triangulated (n-1)-sphere.
inline SimplicialComplex boundary_of_simplex(int n) {
  return skeleton(full_simplex(n), n - 1);
}

inline void require_simplex(const SimplicialComplex& k, const Simplex& s) {
  if (!k.contains(s) || s.empty()) {
    throw ValidationError("simplex " + to_string(s) + " is not in the complex");
  }
}

// { tau : tau and sigma disjoint, tau u sigma in K }.
inline SimplicialComplex link(const SimplicialComplex& k, Simplex sigma) {
  std::sort(sigma.begin(), sigma.end());
  require_simplex(k, sigma);
  SimplicialComplex out(k.num_vertices());
  for (int d = 0; d <= k.dimension(); ++d) {
    for (auto const& s : k.simplices(d)) {
      if (!std::includes(s.begin(), s.end(), sigma.begin(), sigma.end())
          || s.size() == sigma.size()) {
        continue;
      }
      Simplex tau;
      std::set_difference(s.begin(), s.end(), sigma.begin(), sigma.end(),
                          std::back_inserter(tau));
      out.add_simplex_unchecked(std::move(tau));
    }
  }
  return out;
}

// Closed star: all simplices containing sigma, with their faces.
inline SimplicialComplex star(const SimplicialComplex& k, Simplex sigma) {
  std::sort(sigma.begin(), sigma.end());
  require_simplex(k, sigma);
  SimplicialComplex out(k.num_vertices());
  for (int d = 0; d <= k.dimension(); ++d) {
    for (auto const& s : k.simplices(d)) {
      if (std::includes(s.begin(), s.end(), sigma.begin(), sigma.end())) {
        out.add_simplex(s);
      }
    }
  }
  return out;
}

// Cone with apex num_vertices().
inline SimplicialComplex cone(const SimplicialComplex& k) {
  int               apex = k.num_vertices();
  SimplicialComplex out(apex + 1);
  out.add_simplex({apex});
  for (int d = 0; d <= k.dimension(); ++d) {
    for (auto const& s : k.simplices(d)) {
      out.add_simplex_unchecked(s);
      Simplex t = s;
      t.push_back(apex);
      out.add_simplex_unchecked(std::move(t));
    }
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////
// Chains and homology
////////////////////////////////////////////////////////////////////////////

// Augmented simplicial chain complex. boundary[d] maps C_d to C_{d-1};
// boundary[0] is the augmentation C_0 -> Z.
struct ChainComplexZ {
  std::vector<std::vector<Simplex>>   bases;
  std::vector<SparseIntegerMatrix>    boundary;

  std::size_t rank_of(int d) const {
    if (d < 0) return 1;
    if (static_cast<std::size_t>(d) >= bases.size()) return 0;
    return bases[static_cast<std::size_t>(d)].size();
  }
};

namespace detail {

inline bool composite_is_zero(const SparseIntegerMatrix& outer,
                              const SparseIntegerMatrix& inner) {
  // (outer * inner)_{ij} = sum_l outer_{il} inner_{lj}
  std::vector<std::map<std::size_t, Integer>> cols(inner.cols);
  for (std::size_t l = 0; l < inner.rows; ++l) {
    for (auto const& [j, v] : inner.row_entries[l]) cols[j][l] = v;
  }
  for (std::size_t i = 0; i < outer.rows; ++i) {
    for (std::size_t j = 0; j < inner.cols; ++j) {
      Integer sum = 0;
      for (auto const& [l, v] : outer.row_entries[i]) {
        auto it = cols[j].find(l);
        if (it != cols[j].end()) sum += v * it->second;
      }
      if (sgn(sum) != 0) return false;
    }
  }
  return true;
}

}  // namespace detail

// Chains up to degree max_degree + 1 (all degrees when negative).
inline ChainComplexZ chain_complex(const SimplicialComplex& k,
                                   int max_degree = -1) {
  ChainComplexZ cc;
  int top = k.dimension();
  if (max_degree >= 0) top = std::min(top, max_degree + 1);
  for (int d = 0; d <= top; ++d) {
    auto const& s = k.simplices(d);
    cc.bases.emplace_back(s.begin(), s.end());
  }
  for (int d = 0; d <= top; ++d) {
    auto const&         basis = cc.bases[static_cast<std::size_t>(d)];
    SparseIntegerMatrix m(d == 0 ? 1 : cc.bases[static_cast<std::size_t>(d - 1)].size(),
                          basis.size());
    if (d == 0) {
      for (std::size_t j = 0; j < basis.size(); ++j) m.set(0, j, 1);
    } else {
      std::map<Simplex, std::size_t> index;
      auto const& lower = cc.bases[static_cast<std::size_t>(d - 1)];
      for (std::size_t i = 0; i < lower.size(); ++i) index[lower[i]] = i;
      for (std::size_t j = 0; j < basis.size(); ++j) {
        for (std::size_t i = 0; i < basis[j].size(); ++i) {
          Simplex face = basis[j];
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
          m.set(index.at(face), j, (i % 2 == 0) ? 1 : -1);
        }
      }
    }
    cc.boundary.push_back(std::move(m));
  }
  for (std::size_t d = 1; d < cc.boundary.size(); ++d) {
    if (!detail::composite_is_zero(cc.boundary[d - 1], cc.boundary[d])) {
      throw Error("boundary of boundary is nonzero in degree "
                  + std::to_string(d));
    }
  }
  return cc;
}

struct HomologyGroup {
  int                  degree = 0;
  std::size_t          betti  = 0;
  std::vector<Integer> torsion;  // invariant factors > 1

  bool is_zero() const { return betti == 0 && torsion.empty(); }

  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

struct HomologyResult {
  bool                       empty_complex = false;  // H~_{-1} = Z
  std::vector<HomologyGroup> groups;                 // degrees 0..max

  const HomologyGroup& operator[](int d) const {
    return groups.at(static_cast<std::size_t>(d));
  }
};

// Reduced integral homology in degrees 0..max_degree (default: dim K).
inline HomologyResult reduced_homology(const SimplicialComplex& k,
                                       int max_degree = -1) {
  HomologyResult out;
  if (k.is_empty()) {
    out.empty_complex = true;
    return out;
  }
  if (max_degree < 0) max_degree = k.dimension();
  ChainComplexZ cc = chain_complex(k, max_degree);
  // Invariant factors of boundary[d] for d = 0 .. max_degree + 1.
  std::vector<std::vector<Integer>> diag;
  for (int d = 0; d <= max_degree + 1; ++d) {
    if (static_cast<std::size_t>(d) < cc.boundary.size()) {
      diag.push_back(smith_diagonal(cc.boundary[static_cast<std::size_t>(d)]));
    } else {
      diag.emplace_back();
    }
  }
  for (int d = 0; d <= max_degree; ++d) {
    HomologyGroup g;
    g.degree           = d;
    std::size_t chains = cc.rank_of(d);
    std::size_t r_in   = diag[static_cast<std::size_t>(d)].size();
    std::size_t r_out  = diag[static_cast<std::size_t>(d + 1)].size();
    g.betti            = chains - r_in - r_out;
    for (auto const& x : diag[static_cast<std::size_t>(d + 1)]) {
      if (x > 1) g.torsion.push_back(x);
    }
    out.groups.push_back(std::move(g));
  }
  return out;
}

// -2 for the empty complex; otherwise the largest q <= dim K with
// H~_i = 0 for all i <= q (-1 when H~_0 != 0).
inline int homological_connectivity(const SimplicialComplex& k) {
  if (k.is_empty()) return -2;
  HomologyResult h = reduced_homology(k);
  int            q = -1;
  for (auto const& g : h.groups) {
    if (!g.is_zero()) break;
    q = g.degree;
  }
  return q;
}

struct WcmReport {
  bool                   ok = true;
  int                    connectivity = -2;
  std::optional<Simplex> failing_simplex;  // unset when K itself fails
  int                    required = 0;
  int                    found = 0;
  std::string            diagnostic;
};

// Homological reading of weak Cohen-Macaulayness of dimension n:
// K is (n-1)-acyclic and the link of every p-simplex is (n-p-2)-acyclic.
// Requirements at or below -2 hold vacuously.
inline WcmReport wcm_check(const SimplicialComplex& k, int n) {
  WcmReport r;
  r.connectivity = homological_connectivity(k);
  if (n - 1 > -2 && r.connectivity < n - 1) {
    r.ok         = false;
    r.required   = n - 1;
    r.found      = r.connectivity;
    r.diagnostic = "complex is only " + std::to_string(r.connectivity)
                   + "-acyclic, need " + std::to_string(n - 1);
    return r;
  }
  for (int p = 0; p <= k.dimension(); ++p) {
    int need = n - p - 2;
    if (need <= -2) continue;
    for (auto const& s : k.simplices(p)) {
      int c = homological_connectivity(link(k, s));
      if (c < need) {
        r.ok              = false;
        r.failing_simplex = s;
        r.required        = need;
        r.found           = c;
        r.diagnostic      = "link of " + to_string(s) + " is only "
                       + std::to_string(c) + "-acyclic, need "
                       + std::to_string(need);
        return r;
      }
    }
  }
  return r;
}

struct InjectivityReport {
  bool                   ok = true;
  std::optional<Simplex> failing_simplex;
  std::string            diagnostic;
};

// For a vertex map K -> L: throws unless it is simplicial; reports whether
// every simplex keeps its dimension.
inline InjectivityReport
simplexwise_injective_check(const SimplicialComplex& k,
                            const SimplicialComplex& l,
                            const std::vector<int>&  vertex_map) {
  if (vertex_map.size() < static_cast<std::size_t>(k.num_vertices())) {
    throw DimensionMismatch("vertex map is shorter than the vertex set");
  }
  InjectivityReport r;
  for (int d = 0; d <= k.dimension(); ++d) {
    for (auto const& s : k.simplices(d)) {
      Simplex img;
      for (int v : s) img.push_back(vertex_map[static_cast<std::size_t>(v)]);
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      if (!l.contains(img)) {
        throw ValidationError("map is not simplicial: image of "
                              + to_string(s) + " is not a simplex");
      }
      if (r.ok && img.size() != s.size()) {
        r.ok              = false;
        r.failing_simplex = s;
        r.diagnostic      = "simplex " + to_string(s) + " collapses to "
                       + to_string(img);
      }
    }
  }
  return r;
}

}  // namespace hforge
