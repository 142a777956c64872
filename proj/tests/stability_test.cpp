#include <gtest/gtest.h>

#include <random>

#include "hforge/stability.hpp"
#include "oracles.hpp"

using namespace hforge;

namespace {

Piece P(int copy, std::initializer_list<long> base, std::initializer_list<int> dirs,
        std::initializer_list<long> offset, int target) {
  DirSet d;
  for (int j : dirs) d = d.with(j - 1);
  std::vector<Integer> off;
  for (long x : offset) off.emplace_back(x);
  return Piece{MarkedRay{Ray{Point(base), d}, copy}, Translation{off, target}};
}

HoughtonMap inclusion(int k, int n, int copy, long shift = 0) {
  return diagonal_translation(k, n, copy, Integer(shift));
}

std::vector<HoughtonMap> random_vertex_set(int k, int n, std::mt19937_64& rng) {
  std::vector<HoughtonMap> S;
  std::size_t size = rng() % 7;
  for (std::size_t i = 0; i < size; ++i) S.push_back(random_injection(k, 1, n, 2, rng));
  return S;
}

}  // namespace

TEST(Stability, VertexCensusMatchesEnumerationOracle) {
  for (int n = 1; n <= 3; ++n)
    for (unsigned B = 0; B <= 2; ++B) {
      if (n == 3 && B == 2) continue;
      auto vs = enumerate_vertices(1, n, B, kDefaultSimplexLimit);
      EXPECT_EQ(static_cast<long>(vs.size()), oracle::vertex_count_k1(n, B)) << n << " " << B;
      std::set<std::string> keys;
      for (auto const& v : vs) {
        EXPECT_TRUE(validate(v).valid);
        keys.insert(map_key(v));
      }
      EXPECT_EQ(keys.size(), vs.size());
    }
  EXPECT_EQ(oracle::vertex_count_k1(2, 1), 18);
  EXPECT_EQ(oracle::vertex_count_k1(1, 1), 3);
}

TEST(Stability, VerticesAreBoundedInjections) {
  auto vs = enumerate_vertices(1, 2, 1, kDefaultSimplexLimit);
  for (auto const& v : vs) {
    EXPECT_LE(canonical_form(v).threshold, 1);
    for (auto const& p : canonical_form(v).cells)
      for (auto const& o : p.shift.offset) EXPECT_LE(abs(o), 1);
    std::set<oracle::MPt> seen;
    for (long x = 1; x <= 20; ++x) EXPECT_TRUE(seen.insert(*oracle::eval(v, {{x}, 1})).second);
  }
  EXPECT_EQ(enumerate_vertices(2, 2, 0, kDefaultSimplexLimit).size(), 2u);
}

TEST(Stability, CoordinateInclusionsFormATopSimplex) {
  for (int k = 1; k <= 2; ++k)
    for (int n = 1; n <= 4; ++n) {
      std::vector<HoughtonMap> vs;
      for (int c = 1; c <= n; ++c) vs.push_back(inclusion(k, n, c));
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) EXPECT_TRUE(images_disjoint(vs[a], vs[b]));
      EXPECT_TRUE(simplex_test(vs, n, true));
      EXPECT_FALSE(simplex_test(vs, n, false));
    }
}

TEST(Stability, SimplexTestExamples) {
  HoughtonMap a = inclusion(1, 2, 1);
  HoughtonMap b{1, 1, 2, {P(1, {1}, {}, {0}, 1), P(1, {2}, {1}, {0}, 2)}};
  EXPECT_FALSE(simplex_test({a, b}, 2));
  std::vector<HoughtonMap> vs = {inclusion(1, 3, 1, 1), inclusion(1, 3, 2), inclusion(1, 3, 3)};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) EXPECT_TRUE(simplex_test({vs[i], vs[j]}, 3));
  EXPECT_FALSE(simplex_test(vs, 3, true));
  EXPECT_THROW(simplex_test({a, a, a}, 2), DimensionMismatch);
}

TEST(Stability, PiProjection) {
  EXPECT_EQ(pi_projection(inclusion(1, 2, 2)), 2);
  HoughtonMap v{1, 1, 2, {P(1, {1}, {}, {0}, 2), P(1, {2}, {1}, {-1}, 1)}};
  EXPECT_EQ(pi_projection(v), 1);
  HoughtonMap bad{1, 1, 2, {P(1, {1}, {1}, {0}, 1), P(1, {1}, {}, {0}, 2)}};
  EXPECT_THROW(pi_projection(bad), ValidationError);
}

TEST(Stability, BuildSnSmallCases) {
  auto s1 = build_sn_truncated(1, 1, 1);
  EXPECT_EQ(s1.vertices.size(), 3u);
  EXPECT_EQ(s1.complex.dimension(), 0);
  auto s1t = build_sn_truncated(1, 1, 1, SnOptions{true, -1, kDefaultSimplexLimit});
  EXPECT_EQ(s1t.vertices.size(), 1u);
  auto s2 = build_sn_truncated(1, 2, 1);
  EXPECT_EQ(s2.vertices.size(), 18u);
  EXPECT_EQ(s2.complex.dimension(), 0);
  auto s2t = build_sn_truncated(1, 2, 1, SnOptions{true, -1, kDefaultSimplexLimit});
  for (auto const& e : s2t.complex.simplices(1)) {
    auto const& x = s2t.vertices[static_cast<std::size_t>(e[0])];
    auto const& y = s2t.vertices[static_cast<std::size_t>(e[1])];
    EXPECT_TRUE(images_disjoint(x, y));
    EXPECT_TRUE(simplex_test({x, y}, 2, true));
  }
  EXPECT_GT(s2t.complex.simplices(1).size(), 0u);
}

TEST(Stability, SimplicesAreExactlyDisjointCliques) {
  auto sn = build_sn_truncated(1, 3, 1);
  std::size_t nv = sn.vertices.size();
  std::size_t edges = 0;
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = a + 1; b < nv; ++b) {
      bool disjoint = true;
      for (long x = 1; x <= 6 && disjoint; ++x)
        for (long y = 1; y <= 6 && disjoint; ++y)
          if (*oracle::eval(sn.vertices[a], {{x}, 1}) == *oracle::eval(sn.vertices[b], {{y}, 1}))
            disjoint = false;
      if (disjoint) ++edges;
      EXPECT_EQ(sn.complex.contains({static_cast<int>(a), static_cast<int>(b)}), disjoint);
    }
  EXPECT_EQ(sn.complex.simplices(1).size(), edges);
  EXPECT_EQ(sn.vertices.size(), 45u);
  EXPECT_EQ(sn.complex.dimension(), 1);
}

TEST(Stability, PiIsSimplexwiseInjectiveOnSkeleton) {
  for (int n = 2; n <= 4; ++n) {
    auto sn = build_sn_truncated(1, n, n == 4 ? 0 : 1, SnOptions{false, n - 2, kDefaultSimplexLimit});
    auto r  = simplexwise_injective_check(sn.complex, simplex_skeleton(n, n - 2), pi_vertex_map(sn));
    EXPECT_TRUE(r.ok) << r.diagnostic;
  }
}

TEST(Stability, SizeLimit) {
  EXPECT_THROW(build_sn_truncated(1, 3, 1, SnOptions{false, -1, 10}), SizeLimitExceeded);
}

TEST(Stability, SectionExamples) {
  auto rho = build_s_section(1, 2, {});
  ASSERT_EQ(rho.size(), 2u);
  EXPECT_TRUE(equals(rho[0], inclusion(1, 2, 1)));
  EXPECT_TRUE(equals(rho[1], inclusion(1, 2, 2)));
  EXPECT_TRUE(verify_s_section(1, 2, {}, rho).ok);
  std::vector<HoughtonMap> S = {inclusion(1, 2, 1)};
  auto r2 = build_s_section(1, 2, S);
  EXPECT_TRUE(verify_s_section(1, 2, S, r2).ok);
  // A vertex reaching into copy 1 with a point pushes f_1 out by one.
  HoughtonMap s{1, 1, 3, {P(1, {1}, {}, {0}, 1), P(1, {2}, {1}, {0}, 2)}};
  auto r3 = build_s_section(1, 3, {s});
  EXPECT_TRUE(equals(r3[0], inclusion(1, 3, 1, 1)));
  EXPECT_TRUE(verify_s_section(1, 3, {s}, r3).ok);
}

TEST(Stability, SectionViolationIsReported) {
  HoughtonMap s{1, 1, 3, {P(1, {1}, {}, {0}, 1), P(1, {2}, {1}, {0}, 2)}};
  std::vector<HoughtonMap> rho = {inclusion(1, 3, 1), inclusion(1, 3, 2), inclusion(1, 3, 3)};
  auto r = verify_s_section(1, 3, {s}, rho);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.sigma, (std::vector<int>{0}));
  EXPECT_EQ(r.tau, (Simplex{0}));
  EXPECT_TRUE(r.tau_in_base_link);
  EXPECT_FALSE(r.lift_in_link);
  std::vector<HoughtonMap> swapped = {inclusion(1, 3, 2), inclusion(1, 3, 1), inclusion(1, 3, 3)};
  EXPECT_THROW(verify_s_section(1, 3, {}, swapped), ValidationError);
}

TEST(Stability, SectionsOfRandomSets) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    int k = 1 + t % 2;
    int n = 2 + t % 3;
    auto S   = random_vertex_set(k, n, rng);
    auto rho = build_s_section(k, n, S);
    auto r   = verify_s_section(k, n, S, rho);
    EXPECT_TRUE(r.ok) << r.diagnostic;
    for (int skip = 0; skip < n; ++skip) {
      std::vector<HoughtonMap> face;
      for (int i = 0; i < n; ++i)
        if (i != skip) face.push_back(rho[static_cast<std::size_t>(i)]);
      EXPECT_TRUE(simplex_test(face, n));
    }
  }
}

TEST(Stability, ConnectivityProbe) {
  auto r = connectivity_probe(1, 3, 1, 3, 100, 7);
  EXPECT_EQ(r.trials, 100u);
  EXPECT_EQ(r.connected, 100u);
  ASSERT_TRUE(r.h0_vanishes.has_value());
  EXPECT_TRUE(*r.h0_vanishes);
  auto q = connectivity_probe(1, 2, 1, 3, 10, 7);
  EXPECT_TRUE(q.nonempty);
  EXPECT_EQ(q.trials, 0u);
  EXPECT_FALSE(q.note.empty());
}
