#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "hforge/error.hpp"

namespace hforge {

using Integer  = mpz_class;
using Rational = mpq_class;

inline std::strong_ordering compare(const Integer& a, const Integer& b) {
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater
                        : std::strong_ordering::equal);
}

inline std::strong_ordering compare(const std::vector<Integer>& a,
                                    const std::vector<Integer>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(a[i], b[i]); c != 0) {
      return c;
    }
  }
  return a.size() <=> b.size();
}

inline std::string to_string(const Integer& x) {
  return x.get_str();
}

inline std::string to_string(const Rational& x) {
  return x.get_str();
}

// Converts a nonnegative Integer into a std::size_t, throwing if it is too
// large to be used as an enumeration bound.
inline std::size_t to_size(const Integer& x, std::size_t limit) {
  if (sgn(x) < 0 || cmp(x, static_cast<unsigned long>(limit)) > 0) {
    throw SizeLimitExceeded("value " + x.get_str()
                            + " exceeds enumeration limit "
                            + std::to_string(limit));
  }
  return static_cast<std::size_t>(x.get_ui());
}

}  // namespace hforge
