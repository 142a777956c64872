// hforge: batch front end for element arithmetic, stability complexes and
// FI-module reports.
//
// Exit codes: 0 success, 1 usage, 2 invalid input, 3 size limit exceeded.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hforge/hforge.hpp"
#include "hforge/io.hpp"

namespace {

using hforge::io::json;

struct Output {
  std::string format = "json";
  std::string path;

  void emit(const json& j) const {
    std::string text = format == "text" ? render_text(j, 0) : render_json(j);
    if (path.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream out(path);
      if (!out) throw hforge::ValidationError("cannot write " + path);
      out << text << "\n";
    }
  }

  // Arrays of scalars stay on one line.
  static bool flat(const json& j) {
    if (!j.is_array()) return !j.is_object();
    for (auto const& x : j) {
      if (x.is_array() || x.is_object()) return false;
    }
    return true;
  }

  static std::string inline_array(const json& j) {
    std::string s = "[";
    bool first = true;
    for (auto const& x : j) {
      s += (first ? "" : ", ") + x.dump();
      first = false;
    }
    return s + "]";
  }

  static std::string render_json(const json& j, int indent = 0) {
    if (flat(j)) return j.is_array() ? inline_array(j) : j.dump();
    std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    std::string s = j.is_object() ? "{" : "[";
    bool        first = true;
    for (auto const& [key, value] : j.items()) {
      s += (first ? "\n" : ",\n") + pad;
      if (j.is_object()) s += json(key).dump() + ": ";
      s += render_json(value, indent + 2);
      first = false;
    }
    if (!first) s += "\n" + std::string(static_cast<std::size_t>(indent), ' ');
    return s + (j.is_object() ? "}" : "]");
  }

  static std::string render_text(const json& j, int indent) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
      std::string s;
      for (auto const& [key, value] : j.items()) {
        if (!s.empty()) s += "\n";
        if (flat(value)) {
          s += pad + key + ": "
               + (value.is_array() ? inline_array(value)
                  : value.is_string() ? value.get<std::string>()
                                      : value.dump());
        } else {
          s += pad + key + ":\n" + render_text(value, indent + 2);
        }
      }
      return s;
    }
    if (j.is_array() && !flat(j)) {
      std::string s;
      for (auto const& x : j) {
        if (!s.empty()) s += "\n";
        if (x.is_object()) {
          s += pad + "-\n" + render_text(x, indent + 2);
        } else {
          s += pad + (flat(x) ? inline_array(x) : x.dump());
        }
      }
      return s;
    }
    if (j.is_array()) return pad + inline_array(j);
    return pad + (j.is_string() ? j.get<std::string>() : j.dump());
  }
};

std::size_t size_limit() {
  if (const char* env = std::getenv("HFORGE_SIZE_LIMIT")) {
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size() && v > 0) return static_cast<std::size_t>(v);
    } catch (std::exception const&) {
    }
    throw hforge::ValidationError(std::string("HFORGE_SIZE_LIMIT is not a positive integer: ") + env);
  }
  return hforge::kDefaultSimplexLimit;
}

hforge::HoughtonMap load_map(const std::string& path) {
  return hforge::io::map_from_json(hforge::io::read_json_file(path));
}

hforge::HoughtonMap load_valid_map(const std::string& path) {
  auto f = load_map(path);
  if (auto v = hforge::validate(f); !v) {
    throw hforge::ValidationError(path + ": " + v.diagnostic);
  }
  return f;
}

json permutation_json(const hforge::Permutation& p) {
  return hforge::io::to_json(p);
}

// ---------------------------------------------------------------- element

struct ElementArgs {
  std::vector<std::string> files;
  int                      k = 1;
  int                      n = 2;
  unsigned                 bound = 2;
  std::uint64_t            seed = 1;
};

json run_element(const std::string& verb, const ElementArgs& a) {
  using namespace hforge;
  auto need = [&](std::size_t count) {
    if (a.files.size() != count) {
      throw CLI::ValidationError(verb, "expects " + std::to_string(count) + " file(s)");
    }
  };
  if (verb == "verify") {
    need(1);
    auto f = load_map(a.files[0]);
    auto v = validate(f);
    if (!v) throw ValidationError(a.files[0] + ": " + v.diagnostic);
    json r{{"valid", true}, {"bijective", v.bijective}, {"k", f.k}, {"m", f.m}, {"n", f.n}};
    if (!v.diagnostic.empty()) r["note"] = v.diagnostic;
    r["canonical_threshold"] = io::to_json(canonical_form(f).threshold);
    r["canonical"]           = io::to_json(canonicalize(f));
    return r;
  }
  if (verb == "compose") {
    need(2);
    // compose G F = G o F
    return io::to_json(compose(load_valid_map(a.files[0]), load_valid_map(a.files[1])));
  }
  if (verb == "invert") {
    need(1);
    return io::to_json(inverse(load_valid_map(a.files[0])));
  }
  if (verb == "project") {
    need(1);
    auto g = load_valid_map(a.files[0]);
    auto s = sigma_projection(g);
    json offsets = json::array();
    for (auto const& t : k_ray_offsets(g)) {
      offsets.push_back(json{{"copy", t.copy}, {"offset", io::to_json(t.offset)},
                             {"target_copy", t.target_copy}});
    }
    return json{{"sigma", permutation_json(s)}, {"in_kernel", s.is_identity()},
                {"k_ray_offsets", offsets}};
  }
  if (verb == "decompose") {
    need(1);
    auto d = decompose(load_valid_map(a.files[0]));
    return json{{"kernel_part", io::to_json(d.kernel_part)},
                {"sigma", permutation_json(d.sigma)}};
  }
  if (verb == "tvector") {
    need(1);
    return io::to_json(translation_vector(load_valid_map(a.files[0])));
  }
  if (verb == "extend") {
    need(1);
    return io::to_json(extend_to_automorphism(load_valid_map(a.files[0])));
  }
  if (verb == "random") {
    need(0);
    return io::to_json(random_element(a.k, a.n, a.bound, a.seed));
  }
  throw CLI::ValidationError("element", "unknown verb " + verb);
}

// ---------------------------------------------------------------- complex

struct ComplexArgs {
  std::vector<std::string> files;
  int                      k = 1;
  int                      n = 2;
  unsigned                 bound = 2;
  unsigned                 slack = 2;
  std::size_t              trials = 100;
  std::size_t              set_size = 4;
  std::uint64_t            seed = 1;
  bool                     include_top = false;
  bool                     summary = false;
  int                      max_dim = -1;
  int                      max_degree = -1;
  int                      target = 0;
};

hforge::SimplicialComplex load_complex(const std::string& path) {
  return hforge::io::complex_from_json(hforge::io::read_json_file(path));
}

json homology_json(const hforge::SimplicialComplex& k, int max_degree) {
  auto h = hforge::reduced_homology(k, max_degree);
  return hforge::io::to_json(h);
}

json run_complex(const std::string& verb, const ComplexArgs& a) {
  using namespace hforge;
  auto need = [&](std::size_t count) {
    if (a.files.size() != count) {
      throw CLI::ValidationError(verb, "expects " + std::to_string(count) + " file(s)");
    }
  };
  if (verb == "build-sn") {
    need(0);
    SnOptions opt{a.include_top, a.max_dim, size_limit()};
    auto      sn = build_sn_truncated(a.k, a.n, a.bound, opt);
    json      counts = json::array();
    for (int d = 0; d <= sn.complex.dimension(); ++d) counts.push_back(sn.complex.count(d));
    auto pi = pi_vertex_map(sn);
    auto skel = skeleton(sn.complex, a.n - 2);
    auto inj  = simplexwise_injective_check(skel, simplex_skeleton(a.n, a.n - 2), pi);
    json r{{"k", a.k}, {"n", a.n}, {"bound", a.bound}, {"include_top", a.include_top},
           {"vertex_count", sn.vertices.size()}, {"simplex_counts", counts},
           {"pi_simplexwise_injective", inj.ok}};
    if (!a.summary) {
      json labels = json::array();
      for (auto const& v : sn.vertices) labels.push_back(io::to_json(v));
      r["complex"] = io::complex_to_json(sn.complex, labels);
    }
    return r;
  }
  if (verb == "homology") {
    need(1);
    return homology_json(load_complex(a.files[0]), a.max_degree);
  }
  if (verb == "wcm") {
    need(1);
    auto k = load_complex(a.files[0]);
    auto r = wcm_check(k, a.target);
    json j{{"target", a.target}, {"wcm", r.ok}, {"connectivity", r.connectivity}};
    if (!r.ok) {
      j["diagnostic"] = r.diagnostic;
      if (r.failing_simplex) j["failing_simplex"] = *r.failing_simplex;
    }
    return j;
  }
  if (verb == "section-check") {
    if (a.files.size() > 1) throw CLI::ValidationError(verb, "expects at most one file");
    std::vector<HoughtonMap> S;
    if (a.files.size() == 1) {
      json arr = io::read_json_file(a.files[0]);
      if (!arr.is_array()) throw ValidationError("vertex set file must hold an array");
      for (auto const& v : arr) S.push_back(io::map_from_json(v));
    } else {
      std::mt19937_64 rng(a.seed);
      for (std::size_t i = 0; i < a.set_size; ++i) {
        S.push_back(canonicalize(random_injection(a.k, 1, a.n, a.bound, rng)));
      }
    }
    auto rho = build_s_section(a.k, a.n, S);
    auto rep = verify_s_section(a.k, a.n, S, rho);
    json sec = json::array();
    for (auto const& f : rho) sec.push_back(io::to_json(f));
    json j{{"k", a.k}, {"n", a.n}, {"set_size", S.size()}, {"ok", rep.ok}, {"section", sec}};
    if (!rep.ok) j["counterexample"] = rep.diagnostic;
    return j;
  }
  if (verb == "probe") {
    need(0);
    auto r = connectivity_probe(a.k, a.n, a.bound, a.slack, a.trials, a.seed, size_limit());
    json j{{"k", r.k}, {"n", r.n}, {"bound", r.bound}, {"slack", r.slack},
           {"trials", r.trials}, {"connected", r.connected},
           {"success_rate", r.success_rate}, {"max_distance", r.max_distance},
           {"vertex_count", r.vertex_count}, {"pool_size", r.pool_size},
           {"nonempty", r.nonempty}};
    if (r.h0_vanishes) j["h0_vanishes"] = *r.h0_vanishes;
    j["note"] = r.note;
    return j;
  }
  throw CLI::ValidationError("complex", "unknown verb " + verb);
}

// ---------------------------------------------------------------- fimod

struct FimodArgs {
  std::vector<std::string> files;
  int                      N = 6;
  std::string              ring;
};

template <class Scalar>
json fimod_report(const std::string& verb, const hforge::TruncatedFIModule<Scalar>& V) {
  using namespace hforge;
  if (verb == "validate") {
    auto v = validate_fimodule(V);
    if (!v) throw ValidationError(v.diagnostic);
    json ranks = json::array();
    for (auto const& lv : V.levels) ranks.push_back(lv.rank);
    return json{{"valid", true}, {"N", V.N}, {"ranks", ranks}};
  }
  auto g = generation_degree(V);
  json levels = json::array();
  for (int n = 1; n <= V.N; ++n) {
    levels.push_back(json{{"n", n}, {"rank", V.rank(n)},
                          {"sigma1_rank", static_cast<std::size_t>(n) * V.rank(n - 1)},
                          {"d1_surjective", static_cast<bool>(g.surjective[static_cast<std::size_t>(n)])}});
  }
  json j{{"N", V.N}, {"generation_degree", g.degree}, {"generated_within_N", g.within_N}};
  if (verb == "gendeg") {
    j["levels"] = levels;
    return j;
  }
  auto e = essentially_fg_report(V);
  j["levels"] = levels;
  j["essential"] = json{{"c", e.c},
                        {"truncated_generation_degree", e.truncated_generation_degree},
                        {"caveat", e.caveat}};
  return j;
}

template <class Scalar>
hforge::TruncatedFIModule<Scalar> to_ring(const hforge::IntegerFIModule& V) {
  if constexpr (std::is_same_v<Scalar, hforge::Integer>) {
    return V;
  } else {
    hforge::TruncatedFIModule<Scalar> out{V.N, {}};
    auto conv = [](const hforge::IntegerMatrix& m) {
      hforge::Matrix<Scalar> r(m.rows(), m.cols());
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Scalar(m(i, j));
      return r;
    };
    for (auto const& lv : V.levels) {
      hforge::FILevel<Scalar> l;
      l.rank = lv.rank;
      l.iota = conv(lv.iota);
      for (auto const& s : lv.transpositions) l.transpositions.push_back(conv(s));
      out.levels.push_back(std::move(l));
    }
    return out;
  }
}

json run_fimod(const std::string& verb, const FimodArgs& a) {
  using namespace hforge;
  if (verb == "houghton-h1") {
    if (!a.files.empty()) throw CLI::ValidationError(verb, "takes no files");
    if (a.N < 0) throw CLI::ValidationError("--N", "must be nonnegative");
    auto V = houghton_h1_fimodule(a.N);
    json j = a.ring == "Q" ? fimod_report("report", to_ring<Rational>(V))
                           : fimod_report("report", V);
    j["module"] = a.ring == "Q" ? io::fimodule_to_json(to_ring<Rational>(V))
                                : io::fimodule_to_json(V);
    return j;
  }
  if (verb != "validate" && verb != "gendeg" && verb != "report") {
    throw CLI::ValidationError("fimod", "unknown verb " + verb);
  }
  if (a.files.size() != 1) throw CLI::ValidationError(verb, "expects one file");
  json        doc  = io::read_json_file(a.files[0]);
  std::string ring = a.ring.empty() ? io::fimodule_ring(doc) : a.ring;
  if (ring == "Q") {
    return fimod_report(verb, io::fimodule_from_json<Rational>(doc));
  }
  return fimod_report(verb, io::fimodule_from_json<Integer>(doc));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hforge: twisted Houghton groups, stability complexes, FI-modules"};
  app.require_subcommand(1);
  Output out;
  app.add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("-o,--output", out.path, "Write the report to a file");

  std::string verb;

  ElementArgs ea;
  auto* element = app.add_subcommand("element", "Element and morphism arithmetic");
  element->add_option("verb", verb, "verify|compose|invert|project|decompose|tvector|extend|random")
      ->required()
      ->check(CLI::IsMember({"verify", "compose", "invert", "project", "decompose",
                             "tvector", "extend", "random"}));
  element->add_option("files", ea.files, "Element JSON files");
  element->add_option("--k", ea.k)->check(CLI::Range(1, 8));
  element->add_option("--n", ea.n)->check(CLI::Range(1, 64));
  element->add_option("--bound", ea.bound);
  element->add_option("--seed", ea.seed);

  ComplexArgs ca;
  auto* complex = app.add_subcommand("complex", "Stability complexes and homology");
  complex->add_option("verb", verb, "build-sn|homology|wcm|section-check|probe")
      ->required()
      ->check(CLI::IsMember({"build-sn", "homology", "wcm", "section-check", "probe"}));
  complex->add_option("files", ca.files, "Complex or vertex-set JSON file");
  complex->add_option("--k", ca.k)->check(CLI::Range(1, 8));
  complex->add_option("--n", ca.n)->check(CLI::Range(1, 16));
  complex->add_option("--bound", ca.bound);
  complex->add_option("--slack", ca.slack);
  complex->add_option("--trials", ca.trials);
  complex->add_option("--set-size", ca.set_size, "Random vertex set size for section-check");
  complex->add_option("--seed", ca.seed);
  complex->add_option("--target", ca.target, "Target dimension for wcm");
  complex->add_option("--max-dim", ca.max_dim, "Cap on simplex dimension for build-sn");
  complex->add_option("--max-degree", ca.max_degree, "Highest homology degree");
  complex->add_flag("--include-top", ca.include_top, "Add jointly surjective n-simplices");
  complex->add_flag("--summary", ca.summary, "Omit the simplex list from build-sn");

  FimodArgs fa;
  auto* fimod = app.add_subcommand("fimod", "Truncated FI-modules");
  for (auto* sub : {element, complex, fimod}) sub->fallthrough();
  fimod->add_option("verb", verb, "validate|gendeg|report|houghton-h1")
      ->required()
      ->check(CLI::IsMember({"validate", "gendeg", "report", "houghton-h1"}));
  fimod->add_option("files", fa.files, "FI-module JSON file");
  fimod->add_option("--N", fa.N, "Truncation level");
  fimod->add_option("--ring", fa.ring)->check(CLI::IsMember({"Z", "Q"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    json result;
    if (element->parsed()) {
      result = run_element(verb, ea);
    } else if (complex->parsed()) {
      result = run_complex(verb, ca);
    } else {
      result = run_fimod(verb, fa);
    }
    out.emit(result);
    return 0;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const hforge::SizeLimitExceeded& e) {
    std::cerr << "size limit exceeded: " << e.what() << "\n";
    return 3;
  } catch (const hforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
