#pragma once

// JSON encodings. Coordinates and copies are 1-based in JSON; integers that
// do not fit in 64 bits are written as decimal strings and either form is
// accepted on input.

#include <json.hpp>

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hforge/complex.hpp"
#include "hforge/error.hpp"
#include "hforge/fimodule.hpp"
#include "hforge/houghton.hpp"
#include "hforge/integer.hpp"
#include "hforge/matrix.hpp"
#include "hforge/rays.hpp"

namespace hforge::io {

using json = nlohmann::ordered_json;

[[noreturn]] inline void parse_error(const std::string& what) {
  throw ValidationError("parse error: " + what);
}

inline json to_json(const Integer& x) {
  if (x.fits_slong_p()) return json(x.get_si());
  return json(x.get_str());
}

inline json to_json(const Rational& x) {
  if (x.get_den() == 1) return to_json(Integer(x.get_num()));
  return json(x.get_str());
}

template <class Scalar>
Scalar scalar_from_json(const json& j);

template <>
inline Integer scalar_from_json<Integer>(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(j.get<unsigned long>());
    return Integer(j.get<long>());
  }
  if (j.is_string()) {
    Integer x;
    if (x.set_str(j.get<std::string>(), 10) != 0) {
      parse_error("not an integer: \"" + j.get<std::string>() + "\"");
    }
    return x;
  }
  parse_error("expected an integer, got " + j.dump());
}

template <>
inline Rational scalar_from_json<Rational>(const json& j) {
  if (j.is_number_integer()) return Rational(scalar_from_json<Integer>(j));
  if (j.is_string()) {
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0 || q.get_den() == 0) {
      parse_error("not a rational: \"" + j.get<std::string>() + "\"");
    }
    q.canonicalize();
    return q;
  }
  parse_error("expected a rational, got " + j.dump());
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    parse_error(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

inline int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) {
    parse_error(std::string("field \"") + key + "\" must be an integer");
  }
  long x = v.get<long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    parse_error(std::string("field \"") + key + "\" out of range");
  }
  return static_cast<int>(x);
}

inline std::vector<Integer> integers_from_json(const json& j) {
  if (!j.is_array()) parse_error("expected an array of integers");
  std::vector<Integer> out;
  for (auto const& x : j) out.push_back(scalar_from_json<Integer>(x));
  return out;
}

inline json to_json(const std::vector<Integer>& v) {
  json a = json::array();
  for (auto const& x : v) a.push_back(to_json(x));
  return a;
}

////////////////////////////////////////////////////////////////////////////
// Rays and regions
////////////////////////////////////////////////////////////////////////////

inline json dirs_to_json(DirSet d) {
  json a = json::array();
  for (int j : d.members()) a.push_back(j + 1);
  return a;
}

inline DirSet dirs_from_json(const json& j, int k) {
  if (!j.is_array()) parse_error("dirs must be an array");
  DirSet d;
  for (auto const& x : j) {
    if (!x.is_number_integer()) parse_error("dirs entries must be integers");
    long v = x.get<long>();
    if (v < 1 || v > k) {
      parse_error("direction " + std::to_string(v) + " outside [1, "
                  + std::to_string(k) + "]");
    }
    if (d.contains(static_cast<int>(v - 1))) {
      parse_error("direction " + std::to_string(v) + " repeated");
    }
    d = d.with(static_cast<int>(v - 1));
  }
  return d;
}

inline json to_json(const Ray& r) {
  return json{{"base", to_json(r.base.coords())}, {"dirs", dirs_to_json(r.dirs)}};
}

inline Ray ray_from_json(const json& j, int k) {
  auto base = integers_from_json(field(j, "base"));
  if (static_cast<int>(base.size()) != k) {
    parse_error("base has length " + std::to_string(base.size()) + ", expected "
                + std::to_string(k));
  }
  for (auto const& x : base) {
    if (x < 1) parse_error("base coordinate " + x.get_str() + " is not positive");
  }
  return Ray{Point(std::move(base)), dirs_from_json(field(j, "dirs"), k)};
}

inline json to_json(const MarkedRay& r) {
  json j = to_json(r.ray);
  j["copy"] = r.copy;
  return j;
}

inline MarkedRay marked_ray_from_json(const json& j, int k) {
  return MarkedRay{ray_from_json(j, k), int_field(j, "copy")};
}

inline json to_json(const Region& reg) {
  std::vector<MarkedRay> rays = reg.rays;
  std::sort(rays.begin(), rays.end());
  json a = json::array();
  for (auto const& r : rays) a.push_back(to_json(r));
  return json{{"k", reg.k}, {"n", reg.n}, {"rays", a}};
}

inline Region region_from_json(const json& j) {
  Region reg{int_field(j, "k"), int_field(j, "n"), {}};
  if (reg.k < 1 || reg.k > kMaxDimension) parse_error("k out of range");
  const json& rays = field(j, "rays");
  if (!rays.is_array()) parse_error("rays must be an array");
  for (auto const& r : rays) reg.rays.push_back(marked_ray_from_json(r, reg.k));
  return reg;
}

////////////////////////////////////////////////////////////////////////////
// Maps and permutations
////////////////////////////////////////////////////////////////////////////

inline json to_json(const HoughtonMap& f) {
  std::vector<Piece> pieces = f.pieces;
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.domain < b.domain; });
  json a = json::array();
  for (auto const& p : pieces) {
    a.push_back(json{{"copy", p.domain.copy},
                     {"base", to_json(p.domain.ray.base.coords())},
                     {"dirs", dirs_to_json(p.domain.ray.dirs)},
                     {"offset", to_json(p.shift.offset)},
                     {"target_copy", p.shift.target_copy}});
  }
  return json{{"k", f.k}, {"m", f.m}, {"n", f.n}, {"pieces", a}};
}

inline HoughtonMap map_from_json(const json& j) {
  HoughtonMap f;
  f.k = int_field(j, "k");
  if (f.k < 1 || f.k > kMaxDimension) parse_error("k out of range");
  f.n = int_field(j, "n");
  f.m = j.contains("m") ? int_field(j, "m") : f.n;
  if (f.m < 0 || f.n < 0) parse_error("copy counts must be nonnegative");
  const json& pieces = field(j, "pieces");
  if (!pieces.is_array()) parse_error("pieces must be an array");
  for (auto const& p : pieces) {
    Piece piece;
    piece.domain       = marked_ray_from_json(p, f.k);
    piece.shift.offset = integers_from_json(field(p, "offset"));
    if (static_cast<int>(piece.shift.offset.size()) != f.k) {
      parse_error("offset has length " + std::to_string(piece.shift.offset.size())
                  + ", expected " + std::to_string(f.k));
    }
    piece.shift.target_copy = int_field(p, "target_copy");
    f.pieces.push_back(std::move(piece));
  }
  return f;
}

inline json to_json(const Permutation& p) {
  return json(p.images);
}

inline Permutation permutation_from_json(const json& j) {
  if (!j.is_array()) parse_error("permutation must be an image array");
  Permutation p;
  for (auto const& x : j) {
    if (!x.is_number_integer()) parse_error("permutation entries must be integers");
    p.images.push_back(x.get<int>());
  }
  if (!p.is_valid()) parse_error("not a permutation: " + j.dump());
  return p;
}

////////////////////////////////////////////////////////////////////////////
// Complexes and homology
////////////////////////////////////////////////////////////////////////////

inline json complex_to_json(const SimplicialComplex& k, const json& labels) {
  json facets = json::array();
  for (auto const& s : k.maximal_simplices()) facets.push_back(json(s));
  return json{{"vertices", labels}, {"maximal_simplices", facets}};
}

inline json complex_to_json(const SimplicialComplex& k) {
  json labels = json::array();
  for (int v = 0; v < k.num_vertices(); ++v) labels.push_back(v);
  return complex_to_json(k, labels);
}

inline SimplicialComplex complex_from_json(const json& j) {
  const json& verts = field(j, "vertices");
  if (!verts.is_array()) parse_error("vertices must be an array");
  const json& facets = field(j, "maximal_simplices");
  if (!facets.is_array()) parse_error("maximal_simplices must be an array");
  SimplicialComplex k(static_cast<int>(verts.size()));
  for (auto const& f : facets) {
    if (!f.is_array()) parse_error("a simplex must be an index array");
    Simplex s;
    for (auto const& x : f) {
      if (!x.is_number_integer()) parse_error("vertex indices must be integers");
      s.push_back(x.get<int>());
    }
    k.add_simplex(std::move(s));
  }
  return k;
}

inline json to_json(const HomologyResult& h) {
  json a = json::array();
  if (h.empty_complex) {
    a.push_back(json{{"degree", -1}, {"betti", 1}, {"torsion", json::array()}});
  }
  for (auto const& g : h.groups) {
    a.push_back(json{{"degree", g.degree}, {"betti", g.betti},
                     {"torsion", to_json(g.torsion)}});
  }
  return a;
}

////////////////////////////////////////////////////////////////////////////
// FI-modules
////////////////////////////////////////////////////////////////////////////

template <class Scalar>
json matrix_to_json(const Matrix<Scalar>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Scalar>
Matrix<Scalar> matrix_from_json(const json& j, std::size_t rows,
                                std::optional<std::size_t> cols,
                                const std::string& what) {
  if (!j.is_array()) parse_error(what + " must be an array of rows");
  if (j.size() != rows) {
    parse_error(what + " has " + std::to_string(j.size()) + " rows, expected "
                + std::to_string(rows));
  }
  std::size_t c = cols ? *cols : (rows == 0 ? 0 : j.at(0).size());
  Matrix<Scalar> m(rows, c);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != c) {
      parse_error(what + " row " + std::to_string(i + 1) + " must have "
                  + std::to_string(c) + " entries");
    }
    for (std::size_t l = 0; l < c; ++l) m(i, l) = scalar_from_json<Scalar>(j[i][l]);
  }
  return m;
}

template <class Scalar>
json fimodule_to_json(const TruncatedFIModule<Scalar>& V) {
  json levels = json::array();
  for (auto const& lv : V.levels) {
    json t = json::array();
    for (auto const& s : lv.transpositions) t.push_back(matrix_to_json(s));
    json l{{"rank", lv.rank}, {"iota", matrix_to_json(lv.iota)},
           {"transpositions", t}};
    if (lv.presentation) l["presentation"] = matrix_to_json(*lv.presentation);
    levels.push_back(std::move(l));
  }
  return json{{"N", V.N}, {"ring", kIsInteger<Scalar> ? "Z" : "Q"},
              {"levels", levels}};
}

inline std::string fimodule_ring(const json& j) {
  std::string ring = j.contains("ring") ? field(j, "ring").get<std::string>() : "Z";
  if (ring != "Z" && ring != "Q") parse_error("ring must be \"Z\" or \"Q\"");
  return ring;
}

template <class Scalar>
TruncatedFIModule<Scalar> fimodule_from_json(const json& j) {
  TruncatedFIModule<Scalar> V;
  V.N = int_field(j, "N");
  if (V.N < 0) parse_error("N must be nonnegative");
  const json& levels = field(j, "levels");
  if (!levels.is_array() || levels.size() != static_cast<std::size_t>(V.N) + 1) {
    parse_error("expected " + std::to_string(V.N + 1) + " levels");
  }
  std::size_t prev = 0;
  for (int n = 0; n <= V.N; ++n) {
    const json&     l = levels[static_cast<std::size_t>(n)];
    FILevel<Scalar> lv;
    int             r = int_field(l, "rank");
    if (r < 0) parse_error("rank must be nonnegative");
    lv.rank = static_cast<std::size_t>(r);
    std::string at = "level " + std::to_string(n) + " ";
    lv.iota = matrix_from_json<Scalar>(field(l, "iota"), lv.rank, prev, at + "iota");
    const json& ts = field(l, "transpositions");
    if (!ts.is_array()) parse_error(at + "transpositions must be an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      lv.transpositions.push_back(matrix_from_json<Scalar>(
          ts[i], lv.rank, lv.rank, at + "s_" + std::to_string(i + 1)));
    }
    if (l.contains("presentation")) {
      lv.presentation = matrix_from_json<Scalar>(l.at("presentation"), lv.rank,
                                                 std::nullopt, at + "presentation");
    }
    prev = lv.rank;
    V.levels.push_back(std::move(lv));
  }
  return V;
}

////////////////////////////////////////////////////////////////////////////
// Files
////////////////////////////////////////////////////////////////////////////

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (json::exception const& e) {
    parse_error(path + ": " + e.what());
  }
}

}  // namespace hforge::io
