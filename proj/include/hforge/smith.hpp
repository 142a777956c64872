#pragma once

// Smith normal form over the integers.
//
// The dense routine keeps unimodular U, V with U A V = D. The sparse routine
// only tracks the diagonal: it first eliminates unit pivots (boundary
// matrices are mostly +-1) and hands the remaining core to the dense one.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "hforge/integer.hpp"
#include "hforge/matrix.hpp"

namespace hforge {

struct SnfResult {
  IntegerMatrix        U;         // rows x rows, unimodular
  IntegerMatrix        V;         // cols x cols, unimodular
  IntegerMatrix        D;         // U A V
  std::vector<Integer> diagonal;  // nonzero invariant factors d1 | d2 | ...
  bool                 has_transforms = false;

  std::size_t rank() const { return diagonal.size(); }

  // Invariant factors greater than one.
  std::vector<Integer> torsion() const {
    std::vector<Integer> t;
    for (auto const& d : diagonal) {
      if (d > 1) t.push_back(d);
    }
    return t;
  }
};

namespace detail {

// Entry of least absolute value in the lower-right block starting at t.
inline std::optional<std::pair<std::size_t, std::size_t>>
min_abs_entry(const IntegerMatrix& m, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t i = t; i < m.rows(); ++i) {
    for (std::size_t j = t; j < m.cols(); ++j) {
      if (sgn(m(i, j)) == 0) continue;
      if (!best || mpz_cmpabs(m(i, j).get_mpz_t(), m(best->first, best->second).get_mpz_t()) < 0) {
        best = {i, j};
        if (abs(m(i, j)) == 1) return best;
      }
    }
  }
  return best;
}

struct SnfWork {
  IntegerMatrix D;
  IntegerMatrix U;
  IntegerMatrix V;
  bool          track;

  void swap_rows(std::size_t a, std::size_t b) {
    D.swap_rows(a, b);
    if (track) U.swap_rows(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    D.swap_cols(a, b);
    if (track) V.swap_cols(a, b);
  }
  void add_row(std::size_t a, std::size_t b, const Integer& c) {
    D.add_row(a, b, c);
    if (track) U.add_row(a, b, c);
  }
  void add_col(std::size_t a, std::size_t b, const Integer& c) {
    D.add_col(a, b, c);
    if (track) V.add_col(a, b, c);
  }
  void negate_row(std::size_t a) {
    D.negate_row(a);
    if (track) U.negate_row(a);
  }
};

inline std::vector<Integer> dense_snf_inplace(SnfWork& w) {
  IntegerMatrix&       D = w.D;
  std::vector<Integer> diag;
  std::size_t          limit = std::min(D.rows(), D.cols());
  for (std::size_t t = 0; t < limit; ++t) {
    auto piv = min_abs_entry(D, t);
    if (!piv) break;
    w.swap_rows(t, piv->first);
    w.swap_cols(t, piv->second);
    while (true) {
      bool dirty = false;
      // Clear column t below the pivot.
      for (std::size_t i = t + 1; i < D.rows(); ++i) {
        if (sgn(D(i, t)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        w.add_row(i, t, Integer(-q));
        if (sgn(D(i, t)) != 0) {
          w.swap_rows(i, t);
          dirty = true;
        }
      }
      // Clear row t right of the pivot.
      for (std::size_t j = t + 1; j < D.cols(); ++j) {
        if (sgn(D(t, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        w.add_col(j, t, Integer(-q));
        if (sgn(D(t, j)) != 0) {
          w.swap_cols(j, t);
          dirty = true;
        }
      }
      if (dirty) continue;
      // Divisibility: pull an offending row into row t and start over.
      bool fixed = false;
      for (std::size_t i = t + 1; i < D.rows() && !fixed; ++i) {
        for (std::size_t j = t + 1; j < D.cols(); ++j) {
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            w.add_row(t, i, Integer(1));
            fixed = true;
            break;
          }
        }
      }
      if (!fixed) break;
    }
    if (sgn(D(t, t)) < 0) w.negate_row(t);
    diag.push_back(D(t, t));
  }
  return diag;
}

}  // namespace detail

// Full Smith normal form with transforms.
inline SnfResult smith_normal_form(const IntegerMatrix& a) {
  detail::SnfWork w{a, IntegerMatrix::identity(a.rows()),
                    IntegerMatrix::identity(a.cols()), true};
  SnfResult r;
  r.diagonal       = detail::dense_snf_inplace(w);
  r.D              = std::move(w.D);
  r.U              = std::move(w.U);
  r.V              = std::move(w.V);
  r.has_transforms = true;
  return r;
}

// A matrix given by its nonzero entries, for diagonal-only reduction.
struct SparseIntegerMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::map<std::size_t, Integer>> row_entries;

  SparseIntegerMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), row_entries(r) {}

  void set(std::size_t i, std::size_t j, const Integer& v) {
    if (sgn(v) == 0) {
      row_entries[i].erase(j);
    } else {
      row_entries[i][j] = v;
    }
  }

  static SparseIntegerMatrix from_dense(const IntegerMatrix& m) {
    SparseIntegerMatrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (sgn(m(i, j)) != 0) s.row_entries[i][j] = m(i, j);
    return s;
  }
};

// Invariant factors only. Unit pivots are eliminated sparsely first; each
// contributes a factor 1.
inline std::vector<Integer> smith_diagonal(SparseIntegerMatrix m) {
  std::vector<std::set<std::size_t>> col_rows(m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (auto const& [j, v] : m.row_entries[i]) col_rows[j].insert(i);
  }
  std::vector<bool> row_alive(m.rows, true);
  std::size_t       units = 0;
  bool              progress = true;
  while (progress) {
    progress = false;
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (!row_alive[r]) continue;
      // Unit entry in row r whose column is shortest.
      std::optional<std::size_t> pc;
      for (auto const& [j, v] : m.row_entries[r]) {
        if (abs(v) == 1 && (!pc || col_rows[j].size() < col_rows[*pc].size())) {
          pc = j;
        }
      }
      if (!pc) continue;
      std::size_t c     = *pc;
      Integer     pivot = m.row_entries[r][c];
      auto        prow  = m.row_entries[r];
      std::vector<std::size_t> others(col_rows[c].begin(), col_rows[c].end());
      for (std::size_t i : others) {
        if (i == r) continue;
        auto&   row    = m.row_entries[i];
        Integer factor = row[c] * pivot;  // pivot is its own inverse
        for (auto const& [j, v] : prow) {
          Integer nv = row.contains(j) ? Integer(row[j] - factor * v)
                                       : Integer(-factor * v);
          if (sgn(nv) == 0) {
            row.erase(j);
            col_rows[j].erase(i);
          } else {
            if (!row.contains(j)) col_rows[j].insert(i);
            row[j] = nv;
          }
        }
      }
      for (auto const& [j, v] : prow) col_rows[j].erase(r);
      m.row_entries[r].clear();
      row_alive[r] = false;
      ++units;
      progress = true;
    }
  }
  // Dense core of what is left.
  std::vector<std::size_t> live_rows;
  std::vector<std::size_t> live_cols;
  for (std::size_t r = 0; r < m.rows; ++r)
    if (row_alive[r] && !m.row_entries[r].empty()) live_rows.push_back(r);
  for (std::size_t c = 0; c < m.cols; ++c)
    if (!col_rows[c].empty()) live_cols.push_back(c);
  std::vector<Integer> diag(units, Integer(1));
  if (!live_rows.empty()) {
    std::map<std::size_t, std::size_t> cidx;
    for (std::size_t j = 0; j < live_cols.size(); ++j) cidx[live_cols[j]] = j;
    IntegerMatrix core(live_rows.size(), live_cols.size());
    for (std::size_t i = 0; i < live_rows.size(); ++i)
      for (auto const& [j, v] : m.row_entries[live_rows[i]]) core(i, cidx[j]) = v;
    detail::SnfWork w{std::move(core), {}, {}, false};
    for (auto& d : detail::dense_snf_inplace(w)) diag.push_back(std::move(d));
  }
  return diag;
}

inline std::vector<Integer> smith_diagonal(const IntegerMatrix& a) {
  return smith_diagonal(SparseIntegerMatrix::from_dense(a));
}

// Solves A x = b over the integers; nullopt when b is not in the column
// lattice of A.
inline std::optional<std::vector<Integer>>
solve_in_lattice(const IntegerMatrix& a, const std::vector<Integer>& b) {
  if (b.size() != a.rows()) {
    throw DimensionMismatch("lattice membership: vector length "
                            + std::to_string(b.size()) + " vs "
                            + std::to_string(a.rows()) + " rows");
  }
  SnfResult            s  = smith_normal_form(a);
  std::vector<Integer> ub = s.U * b;
  std::vector<Integer> y(a.cols(), Integer(0));
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < s.rank()) {
      if (!mpz_divisible_p(ub[i].get_mpz_t(), s.diagonal[i].get_mpz_t())) {
        return std::nullopt;
      }
      y[i] = ub[i] / s.diagonal[i];
    } else if (sgn(ub[i]) != 0) {
      return std::nullopt;
    }
  }
  return s.V * y;
}

inline bool in_column_lattice(const IntegerMatrix& a,
                              const std::vector<Integer>& b) {
  return solve_in_lattice(a, b).has_value();
}

}  // namespace hforge
