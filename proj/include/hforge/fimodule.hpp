#pragma once

// FI-modules truncated at level N, over Z or Q.
//
// Level n carries a free module of rank r_n (over Z optionally presented as
// Z^{r_n} / im P_n), matrices for the adjacent transpositions s_1..s_{n-1}
// and the map iota_n : V_{n-1} -> V_n induced by [n-1] -> [n]. Matrices act
// on column vectors.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hforge/error.hpp"
#include "hforge/houghton.hpp"
#include "hforge/integer.hpp"
#include "hforge/matrix.hpp"
#include "hforge/smith.hpp"

namespace hforge {

template <class Scalar>
struct FILevel {
  std::size_t                   rank = 0;
  Matrix<Scalar>                iota;           // rank x previous rank
  std::vector<Matrix<Scalar>>   transpositions; // s_1 .. s_{n-1}
  std::optional<Matrix<Scalar>> presentation;   // rank x relations
};

template <class Scalar>
struct TruncatedFIModule {
  int                          N = 0;
  std::vector<FILevel<Scalar>> levels;  // 0..N

  const FILevel<Scalar>& level(int n) const {
    return levels.at(static_cast<std::size_t>(n));
  }
  std::size_t rank(int n) const { return level(n).rank; }
};

using IntegerFIModule  = TruncatedFIModule<Integer>;
using RationalFIModule = TruncatedFIModule<Rational>;

template <class Scalar>
inline constexpr bool kIsInteger = std::is_same_v<Scalar, Integer>;

namespace detail {

// a == b as maps into V_n, i.e. modulo the relation lattice when present.
template <class Scalar>
bool equal_at_level(const FILevel<Scalar>& lv, const Matrix<Scalar>& a,
                    const Matrix<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a == b) return true;
  if constexpr (kIsInteger<Scalar>) {
    if (!lv.presentation) return false;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      std::vector<Integer> diff(a.rows());
      for (std::size_t i = 0; i < a.rows(); ++i) diff[i] = a(i, j) - b(i, j);
      if (!in_column_lattice(*lv.presentation, diff)) return false;
    }
    return true;
  } else {
    return false;
  }
}

template <class Scalar>
Matrix<Scalar> power_check(const Matrix<Scalar>& a, int e) {
  Matrix<Scalar> r = Matrix<Scalar>::identity(a.rows());
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

}  // namespace detail

struct FIValidation {
  bool        ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

// Shapes, Coxeter relations, equivariance of iota, and the FI condition
// that s_{n-1} fixes the image of V_{n-2}.
template <class Scalar>
FIValidation validate_fimodule(const TruncatedFIModule<Scalar>& V) {
  auto fail = [](std::string s) { return FIValidation{false, std::move(s)}; };
  if (V.N < 0 || V.levels.size() != static_cast<std::size_t>(V.N) + 1) {
    return fail("expected " + std::to_string(V.N + 1) + " levels");
  }
  for (int n = 0; n <= V.N; ++n) {
    auto const& lv  = V.level(n);
    std::string at  = "level " + std::to_string(n) + ": ";
    std::size_t r   = lv.rank;
    std::size_t rp  = n == 0 ? 0 : V.rank(n - 1);
    if (lv.iota.rows() != r || lv.iota.cols() != rp) {
      return fail(at + "iota has shape " + lv.iota.shape() + ", expected "
                  + std::to_string(r) + "x" + std::to_string(rp));
    }
    std::size_t want = n == 0 ? 0 : static_cast<std::size_t>(n - 1);
    if (lv.transpositions.size() != want) {
      return fail(at + "expected " + std::to_string(want) + " transpositions");
    }
    for (std::size_t i = 0; i < want; ++i) {
      if (lv.transpositions[i].rows() != r || lv.transpositions[i].cols() != r) {
        return fail(at + "s_" + std::to_string(i + 1) + " is not " + std::to_string(r)
                    + "x" + std::to_string(r));
      }
    }
    if (lv.presentation) {
      if constexpr (!kIsInteger<Scalar>) {
        return fail(at + "presentations are only supported over Z");
      }
      if (lv.presentation->rows() != r) {
        return fail(at + "presentation has " + std::to_string(lv.presentation->rows())
                    + " rows, expected " + std::to_string(r));
      }
      // Structure maps must preserve the relation lattice.
      for (std::size_t i = 0; i < want; ++i) {
        if (!detail::equal_at_level(lv, lv.transpositions[i] * *lv.presentation,
                                    Matrix<Scalar>(r, lv.presentation->cols()))) {
          return fail(at + "s_" + std::to_string(i + 1)
                      + " does not preserve the relations");
        }
      }
      if (n > 0 && V.level(n - 1).presentation
          && !detail::equal_at_level(
              lv, lv.iota * *V.level(n - 1).presentation,
              Matrix<Scalar>(r, V.level(n - 1).presentation->cols()))) {
        return fail(at + "iota does not preserve the relations");
      }
    }
    auto const&    s  = lv.transpositions;
    Matrix<Scalar> id = Matrix<Scalar>::identity(r);
    for (std::size_t i = 0; i < want; ++i) {
      std::string si = "s_" + std::to_string(i + 1);
      if (!detail::equal_at_level(lv, s[i] * s[i], id)) {
        return fail(at + "relation " + si + "^2 = 1 fails");
      }
      for (std::size_t j = i + 1; j < want; ++j) {
        std::string sj   = "s_" + std::to_string(j + 1);
        int         expo = j == i + 1 ? 3 : 2;
        if (!detail::equal_at_level(lv, detail::power_check(s[i] * s[j], expo), id)) {
          return fail(at + "relation (" + si + " " + sj + ")^"
                      + std::to_string(expo) + " = 1 fails");
        }
      }
    }
    if (n >= 2) {
      auto const& below = V.level(n - 1).transpositions;
      for (std::size_t i = 0; i + 2 <= static_cast<std::size_t>(n - 1); ++i) {
        if (!detail::equal_at_level(lv, s[i] * lv.iota, lv.iota * below[i])) {
          return fail(at + "equivariance s_" + std::to_string(i + 1)
                      + " iota = iota s_" + std::to_string(i + 1) + " fails");
        }
      }
      Matrix<Scalar> twice = lv.iota * V.level(n - 1).iota;
      if (!detail::equal_at_level(lv, s[static_cast<std::size_t>(n - 2)] * twice, twice)) {
        return fail(at + "s_" + std::to_string(n - 1)
                    + " does not fix the image of level " + std::to_string(n - 2));
      }
    }
  }
  return {};
}

template <class Scalar>
void require_valid_fimodule(const TruncatedFIModule<Scalar>& V) {
  if (auto v = validate_fimodule(V); !v) throw ValidationError(v.diagnostic);
}

// Matrix of a permutation sigma of [n] (images list) as a product of the
// adjacent transpositions of level n.
template <class Scalar>
Matrix<Scalar> permutation_action(const TruncatedFIModule<Scalar>& V,
                                  const Permutation&               sigma) {
  int n = sigma.size();
  if (n > V.N) throw DimensionMismatch("permutation degree exceeds N");
  auto const&      lv = V.level(n);
  std::vector<int> w  = sigma.images;
  // Bubble sort by adjacent position swaps: sigma s_{i1} ... s_{il} = id,
  // hence sigma = s_{il} ... s_{i1}.
  Matrix<Scalar> result = Matrix<Scalar>::identity(lv.rank);
  bool           swapped = true;
  while (swapped) {
    swapped = false;
    for (int i = 0; i + 1 < n; ++i) {
      if (w[static_cast<std::size_t>(i)] > w[static_cast<std::size_t>(i + 1)]) {
        std::swap(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(i + 1)]);
        result = lv.transpositions[static_cast<std::size_t>(i)] * result;
        swapped = true;
      }
    }
  }
  return result;
}

// Standard inclusion [m] -> [n]: iota_n ... iota_{m+1}.
template <class Scalar>
Matrix<Scalar> standard_inclusion(const TruncatedFIModule<Scalar>& V, int m,
                                  int n) {
  Matrix<Scalar> r = Matrix<Scalar>::identity(V.rank(m));
  for (int l = m + 1; l <= n; ++l) r = V.level(l).iota * r;
  return r;
}

// f_* for an injection f : [m] -> [n], via f = sigma o (standard inclusion)
// with sigma sending m+1..n to the unused values in increasing order.
template <class Scalar>
Matrix<Scalar> evaluate_injection(const TruncatedFIModule<Scalar>& V,
                                  const Injection& f, int n) {
  int m = static_cast<int>(f.size());
  if (m > n || n > V.N) {
    throw DimensionMismatch("injection [" + std::to_string(m) + "] -> ["
                            + std::to_string(n) + "] outside levels 0.."
                            + std::to_string(V.N));
  }
  check_injection(f, n);
  Permutation sigma;
  sigma.images = f;
  for (int v = 1; v <= n; ++v) {
    if (std::find(f.begin(), f.end(), v) == f.end()) sigma.images.push_back(v);
  }
  return permutation_action(V, sigma) * standard_inclusion(V, m, n);
}

struct InducedModule {
  int                    n = 0;  // level
  int                    p = 1;  // shift
  std::size_t            rank = 0;
  std::vector<Injection> coset_labels;  // tau_i restricted to [n-1]
};

template <class Scalar>
struct Sigma1Result {
  InducedModule  module;
  Matrix<Scalar> d1;  // r_n x (n r_{n-1})
};

// Coset representative tau_i: n -> i, j -> j + 1 for i <= j <= n - 1.
inline Permutation coset_representative(int n, int i) {
  Permutation t = Permutation::identity(n);
  for (int j = i; j <= n - 1; ++j) t.images[static_cast<std::size_t>(j - 1)] = j + 1;
  t.images[static_cast<std::size_t>(n - 1)] = i;
  return t;
}

// (Sigma_1 V)_n = V_{n-1}^{n} and d1 whose i-th block is tau_i iota_n.
template <class Scalar>
Sigma1Result<Scalar> sigma1(const TruncatedFIModule<Scalar>& V, int n) {
  if (n < 1 || n > V.N) {
    throw DimensionMismatch("sigma1 needs 1 <= n <= N");
  }
  Sigma1Result<Scalar> out;
  std::size_t          r  = V.rank(n);
  std::size_t          rp = V.rank(n - 1);
  out.module.n    = n;
  out.module.rank = static_cast<std::size_t>(n) * rp;
  out.d1          = Matrix<Scalar>(r, out.module.rank);
  for (int i = 1; i <= n; ++i) {
    Permutation tau = coset_representative(n, i);
    out.module.coset_labels.emplace_back(tau.images.begin(), tau.images.end() - 1);
    Matrix<Scalar> block = permutation_action(V, tau) * V.level(n).iota;
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < rp; ++b) {
        out.d1(a, static_cast<std::size_t>(i - 1) * rp + b) = block(a, b);
      }
    }
  }
  return out;
}

// d1 at level n is onto V_n.
template <class Scalar>
bool d1_surjective(const TruncatedFIModule<Scalar>& V, int n) {
  auto        s = sigma1(V, n);
  std::size_t r = V.rank(n);
  if (r == 0) return true;
  if constexpr (kIsInteger<Scalar>) {
    IntegerMatrix m = s.d1;
    if (auto const& P = V.level(n).presentation) m = m.hconcat(*P);
    auto diag = smith_diagonal(m);
    return static_cast<std::size_t>(
               std::count(diag.begin(), diag.end(), Integer(1)))
           >= r;
  } else {
    return rank_over_field(s.d1) == r;
  }
}

struct GenerationReport {
  int               degree = 0;         // last level with new generators
  bool              within_N = true;    // degree < N
  std::vector<bool> surjective;         // index n = 1..N (index 0 unused)
};

// Least g with d1 onto V_n for all g < n <= N.
template <class Scalar>
GenerationReport generation_degree(const TruncatedFIModule<Scalar>& V) {
  require_valid_fimodule(V);
  GenerationReport r;
  r.surjective.assign(static_cast<std::size_t>(V.N) + 1, true);
  for (int n = 1; n <= V.N; ++n) {
    bool s = d1_surjective(V, n);
    r.surjective[static_cast<std::size_t>(n)] = s;
    if (!s) r.degree = n;
  }
  r.within_N = r.degree < V.N || V.N == 0;
  return r;
}

// Zeroes the levels below c.
template <class Scalar>
TruncatedFIModule<Scalar> truncate(const TruncatedFIModule<Scalar>& V, int c) {
  if (c < 0 || c > V.N) {
    throw DimensionMismatch("truncation level " + std::to_string(c)
                            + " outside [0, " + std::to_string(V.N) + "]");
  }
  TruncatedFIModule<Scalar> out = V;
  for (int n = 0; n < c; ++n) {
    auto& lv = out.levels[static_cast<std::size_t>(n)];
    lv.rank  = 0;
    lv.iota  = Matrix<Scalar>(0, n == 0 ? 0 : 0);
    lv.transpositions.assign(lv.transpositions.size(), Matrix<Scalar>(0, 0));
    lv.presentation.reset();
  }
  if (c > 0) {
    auto& lv = out.levels[static_cast<std::size_t>(c)];
    lv.iota  = Matrix<Scalar>(lv.rank, 0);
  }
  return out;
}

struct EssentialReport {
  int               c = 0;  // last level with a new generator above a nonzero level
  int               truncated_generation_degree = 0;
  bool              within_N = true;
  std::vector<bool> surjective;
  std::string       caveat;
};

template <class Scalar>
EssentialReport essentially_fg_report(const TruncatedFIModule<Scalar>& V) {
  GenerationReport g = generation_degree(V);
  EssentialReport  r;
  r.c = 0;
  for (int n = 1; n <= V.N; ++n) {
    if (!g.surjective[static_cast<std::size_t>(n)] && V.rank(n - 1) > 0) r.c = n;
  }
  r.truncated_generation_degree = generation_degree(truncate(V, r.c)).degree;
  r.within_N                    = g.within_N;
  r.surjective                  = g.surjective;
  r.caveat = "evidence up to level " + std::to_string(V.N)
             + " only; nothing is claimed beyond the truncation";
  return r;
}

////////////////////////////////////////////////////////////////////////////
// Standard modules
////////////////////////////////////////////////////////////////////////////

template <class Scalar>
TruncatedFIModule<Scalar> constant_fimodule(int N) {
  TruncatedFIModule<Scalar> V{N, {}};
  for (int n = 0; n <= N; ++n) {
    FILevel<Scalar> lv;
    lv.rank = 1;
    lv.iota = n == 0 ? Matrix<Scalar>(1, 0) : Matrix<Scalar>::identity(1);
    for (int i = 1; i < n; ++i) lv.transpositions.push_back(Matrix<Scalar>::identity(1));
    V.levels.push_back(std::move(lv));
  }
  return V;
}

// V_n = R^n with coordinate permutations and zero padding.
template <class Scalar>
TruncatedFIModule<Scalar> permutation_fimodule(int N) {
  TruncatedFIModule<Scalar> V{N, {}};
  for (int n = 0; n <= N; ++n) {
    FILevel<Scalar> lv;
    lv.rank = static_cast<std::size_t>(n);
    lv.iota = Matrix<Scalar>(lv.rank, n == 0 ? 0 : lv.rank - 1);
    for (int i = 0; i + 1 < n; ++i) lv.iota(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1;
    for (int i = 1; i < n; ++i) {
      Matrix<Scalar> s = Matrix<Scalar>::identity(lv.rank);
      s.swap_rows(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i));
      lv.transpositions.push_back(std::move(s));
    }
    V.levels.push_back(std::move(lv));
  }
  return V;
}

// Coordinates of a sum-zero vector v in the basis e_i - e_{i+1}: partial sums.
inline std::vector<Integer> sum_zero_coordinates(const std::vector<Integer>& v) {
  Integer total = 0;
  for (auto const& x : v) total += x;
  if (sgn(total) != 0) throw ValidationError("vector does not sum to zero");
  std::vector<Integer> c;
  Integer              acc = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    acc += v[i];
    c.push_back(acc);
  }
  return c;
}

inline std::vector<Integer> from_sum_zero_coordinates(const std::vector<Integer>& c) {
  std::vector<Integer> v(c.size() + 1, Integer(0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    v[i] += c[i];
    v[i + 1] -= c[i];
  }
  return v;
}

// The character H_n -> Z^n of translation vectors lands in the sum-zero
// lattice; V_n is that lattice with the permutation action.
inline IntegerFIModule houghton_h1_fimodule(int N) {
  if (N < 0) throw DimensionMismatch("N must be nonnegative");
  IntegerFIModule V{N, {}};
  auto rank_of = [](int n) { return n <= 1 ? std::size_t{0} : static_cast<std::size_t>(n - 1); };
  for (int n = 0; n <= N; ++n) {
    FILevel<Integer> lv;
    lv.rank = rank_of(n);
    lv.iota = IntegerMatrix(lv.rank, n == 0 ? 0 : rank_of(n - 1));
    for (std::size_t i = 0; i < lv.iota.cols(); ++i) lv.iota(i, i) = 1;
    for (int j = 1; j < n; ++j) {
      IntegerMatrix s(lv.rank, lv.rank);
      for (std::size_t b = 0; b < lv.rank; ++b) {
        std::vector<Integer> e(static_cast<std::size_t>(n), Integer(0));
        e[b]     = 1;
        e[b + 1] = -1;
        std::swap(e[static_cast<std::size_t>(j - 1)], e[static_cast<std::size_t>(j)]);
        auto c = sum_zero_coordinates(e);
        for (std::size_t a = 0; a < lv.rank; ++a) s(a, b) = c[a];
      }
      lv.transpositions.push_back(std::move(s));
    }
    V.levels.push_back(std::move(lv));
  }
  return V;
}

}  // namespace hforge
