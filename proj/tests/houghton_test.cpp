#include <gtest/gtest.h>

#include <random>

#include "hforge/houghton.hpp"
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

// The generator of H_2: (1,1) -> (1,2), (x,1) -> (x-1,1), (x,2) -> (x+1,2).
HoughtonMap gen() {
  return HoughtonMap{1, 2, 2,
                     {P(1, {1}, {}, {0}, 2), P(1, {2}, {1}, {-1}, 1), P(2, {1}, {1}, {1}, 2)}};
}

MarkedPoint at(long x, int copy) {
  return MarkedPoint{Point{x}, copy};
}

// Re-represents f by splitting random pieces.
HoughtonMap resplit(HoughtonMap f, std::mt19937_64& rng, int steps) {
  for (int s = 0; s < steps; ++s) {
    std::uniform_int_distribution<std::size_t> pick(0, f.pieces.size() - 1);
    std::size_t i    = pick(rng);
    auto        dirs = f.pieces[i].domain.ray.dirs.members();
    if (dirs.empty()) continue;
    auto [child, parent] = ray_split(f.pieces[i].domain.ray, dirs[rng() % dirs.size()]);
    Piece c              = f.pieces[i];
    c.domain.ray         = child;
    f.pieces[i].domain.ray = parent;
    f.pieces.push_back(c);
  }
  std::shuffle(f.pieces.begin(), f.pieces.end(), rng);
  return f;
}

}  // namespace

TEST(Houghton, ValidateExamples) {
  auto id = validate(identity_map(1, 2));
  EXPECT_TRUE(id.valid);
  EXPECT_TRUE(id.bijective);
  auto g = validate(gen());
  EXPECT_TRUE(g.valid);
  EXPECT_TRUE(g.bijective);
  EXPECT_TRUE(oracle::bijective_on_box(gen(), 20, 1));
  HoughtonMap h = gen();
  h.pieces[2].shift.offset[0] = 2;
  auto v = validate(h);
  EXPECT_TRUE(v.valid);
  EXPECT_FALSE(v.bijective);
  EXPECT_NE(v.diagnostic.find("point (2) of copy 2"), std::string::npos) << v.diagnostic;
}

TEST(Houghton, ValidateNamesOverlaps) {
  HoughtonMap f{1, 1, 1, {P(1, {1}, {1}, {0}, 1), P(1, {3}, {1}, {0}, 1)}};
  auto v = validate(f);
  EXPECT_FALSE(v.valid);
  EXPECT_NE(v.diagnostic.find("overlap"), std::string::npos);
  HoughtonMap g{1, 1, 1, {P(1, {1}, {}, {1}, 1), P(1, {2}, {1}, {-1}, 1)}};
  EXPECT_FALSE(validate(g).valid);
}

TEST(Houghton, ApplyExamples) {
  auto g = gen();
  EXPECT_EQ(apply(g, at(1, 1)), at(1, 2));
  EXPECT_EQ(apply(g, at(5, 1)), at(4, 1));
  EXPECT_EQ(apply(identity_map(1, 2), at(7, 2)), at(7, 2));
  EXPECT_THROW(apply(g, at(1, 3)), DimensionMismatch);
}

TEST(Houghton, ComposeExamples) {
  auto g  = gen();
  EXPECT_TRUE(equals(compose(identity_map(1, 2), g), g));
  auto gg = compose(g, g);
  EXPECT_EQ(apply(gg, at(1, 1)), at(2, 2));
  EXPECT_EQ(apply(gg, at(2, 1)), at(1, 2));
  for (long x = 3; x <= 30; ++x) EXPECT_EQ(apply(gg, at(x, 1)), at(x - 2, 1));
  for (long x = 1; x <= 30; ++x) EXPECT_EQ(apply(gg, at(x, 2)), at(x + 2, 2));
  EXPECT_TRUE(oracle::is_composite_on_box(gg, g, g, 30));
  EXPECT_TRUE(equals(compose(inverse(g), g), identity_map(1, 2)));
}

TEST(Houghton, InverseExamples) {
  EXPECT_TRUE(equals(inverse(identity_map(2, 3)), identity_map(2, 3)));
  auto gi = inverse(gen());
  EXPECT_EQ(apply(gi, at(1, 2)), at(1, 1));
  for (long x = 1; x <= 20; ++x) EXPECT_EQ(apply(gi, at(x, 1)), at(x + 1, 1));
  for (long x = 2; x <= 20; ++x) EXPECT_EQ(apply(gi, at(x, 2)), at(x - 1, 2));
  for (int s = 0; s < 500; ++s) {
    auto h = random_element(1 + s % 2, 1 + s % 3, 2, static_cast<std::uint64_t>(s));
    EXPECT_TRUE(equals(inverse(inverse(h)), h));
  }
}

TEST(Houghton, ComposeRejectsShapeMismatch) {
  EXPECT_THROW(compose(identity_map(1, 3), identity_map(1, 2)), DimensionMismatch);
  EXPECT_THROW(compose(identity_map(2, 2), identity_map(1, 2)), DimensionMismatch);
}

TEST(Houghton, EqualsUnderResplitting) {
  std::mt19937_64 rng(3);
  for (int s = 0; s < 500; ++s) {
    auto h = random_element(1 + s % 2, 1 + s % 3, 2, rng);
    auto r = resplit(h, rng, 4);
    ASSERT_TRUE(validate(r).bijective);
    EXPECT_TRUE(equals(h, r));
    EXPECT_TRUE(oracle::agree_on_box(h, r, 12));
  }
  EXPECT_FALSE(equals(identity_map(1, 2), gen()));
}

TEST(Houghton, EqualsIsAnEquivalence) {
  std::vector<HoughtonMap> xs;
  for (int s = 0; s < 100; ++s) xs.push_back(random_element(1, 2, 1, static_cast<std::uint64_t>(s)));
  for (auto const& a : xs) {
    EXPECT_TRUE(equals(a, a));
    for (auto const& b : xs) {
      bool ab = equals(a, b);
      EXPECT_EQ(ab, equals(b, a));
      EXPECT_EQ(ab, oracle::agree_on_box(a, b, 8));
    }
  }
}

TEST(Houghton, SigmaProjectionAndKernel) {
  EXPECT_TRUE(sigma_projection(identity_map(1, 3)).is_identity());
  Permutation swap{{2, 1}};
  EXPECT_EQ(sigma_projection(embed_symmetric(swap, 1)).images, swap.images);
  EXPECT_TRUE(sigma_projection(gen()).is_identity());
  EXPECT_TRUE(in_kernel(gen()));
  EXPECT_FALSE(in_kernel(embed_symmetric(swap, 1)));
  EXPECT_TRUE(in_kernel(identity_map(2, 2)));
}

TEST(Houghton, EmbedSymmetric) {
  EXPECT_TRUE(equals(embed_symmetric(Permutation::identity(3), 2), identity_map(2, 3)));
  auto s = embed_symmetric(Permutation{{2, 1}}, 1);
  for (long x = 1; x <= 10; ++x) {
    EXPECT_EQ(apply(s, at(x, 1)), at(x, 2));
    EXPECT_EQ(apply(s, at(x, 2)), at(x, 1));
  }
  auto perms = all_permutations(3);
  ASSERT_EQ(perms.size(), 6u);
  for (auto const& a : perms)
    for (auto const& b : perms)
      EXPECT_TRUE(equals(embed_symmetric(a * b, 1),
                         compose(embed_symmetric(a, 1), embed_symmetric(b, 1))));
}

TEST(Houghton, Decompose) {
  auto d = decompose(gen());
  EXPECT_TRUE(d.sigma.is_identity());
  EXPECT_TRUE(equals(d.kernel_part, gen()));
  Permutation s{{3, 1, 2}};
  auto e = decompose(embed_symmetric(s, 2));
  EXPECT_TRUE(equals(e.kernel_part, identity_map(2, 3)));
  EXPECT_EQ(e.sigma.images, s.images);
  for (int i = 0; i < 500; ++i) {
    auto g = random_element(1 + i % 2, 1 + i % 4, 3, static_cast<std::uint64_t>(1000 + i));
    auto r = decompose(g);
    EXPECT_TRUE(in_kernel(r.kernel_part));
    EXPECT_TRUE(equals(compose(r.kernel_part, embed_symmetric(r.sigma, g.k)), g));
  }
}

TEST(Houghton, TranslationVectors) {
  auto z = translation_vector(identity_map(1, 3));
  for (auto const& x : z) EXPECT_EQ(x, 0);
  EXPECT_EQ(translation_vector(gen()), (std::vector<Integer>{-1, 1}));
  EXPECT_EQ(translation_vector(compose(gen(), gen())), (std::vector<Integer>{-2, 2}));
  EXPECT_THROW(translation_vector(embed_symmetric(Permutation{{2, 1}}, 1)), ValidationError);
  EXPECT_THROW(translation_vector(identity_map(2, 2)), DimensionMismatch);
}

TEST(Houghton, KRayOffsets) {
  for (auto const& t : k_ray_offsets(identity_map(2, 2))) {
    EXPECT_EQ(t.offset, (std::vector<Integer>{0, 0}));
    EXPECT_EQ(t.copy, t.target_copy);
  }
  Permutation s{{2, 3, 1}};
  auto e = k_ray_offsets(embed_symmetric(s, 1));
  for (auto const& t : e) {
    EXPECT_EQ(t.offset, (std::vector<Integer>{0}));
    EXPECT_EQ(t.target_copy, s(t.copy));
  }
  auto g = k_ray_offsets(gen());
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], (TopOffset{1, {-1}, 1}));
  EXPECT_EQ(g[1], (TopOffset{2, {1}, 2}));
}

TEST(Houghton, EventualTranslation) {
  auto g = eventual_translation_check(gen());
  EXPECT_TRUE(g.holds);
  EXPECT_EQ(g.thresholds[0], 1);
  EXPECT_EQ(g.thresholds[1], 0);
  auto id = eventual_translation_check(identity_map(1, 2));
  EXPECT_TRUE(id.holds);
  EXPECT_EQ(id.threshold, 0);
  for (int s = 0; s < 500; ++s) {
    auto h = random_element(1, 1 + s % 4, 3, static_cast<std::uint64_t>(s));
    auto r = eventual_translation_check(h);
    EXPECT_TRUE(r.holds);
    // Past the threshold the map is the tail translation, checked pointwise.
    for (int i = 1; i <= h.m; ++i) {
      long t = r.thresholds[static_cast<std::size_t>(i - 1)].get_si();
      for (long x = t + 1; x <= t + 15; ++x) {
        auto y = oracle::eval(h, {{x}, i});
        ASSERT_TRUE(y);
        EXPECT_EQ(y->first[0], x + r.offsets[static_cast<std::size_t>(i - 1)].get_si());
        EXPECT_EQ(y->second, r.sigma(i));
      }
    }
  }
}

TEST(Houghton, FiMapExamples) {
  auto g = gen();
  EXPECT_TRUE(equals(fi_map({1, 2}, 2, g), g));
  HoughtonMap t{1, 1, 1, {P(1, {1}, {}, {1}, 1), P(1, {2}, {}, {-1}, 1), P(1, {3}, {1}, {0}, 1)}};
  auto f = fi_map({2}, 2, t);
  EXPECT_EQ(apply(f, at(1, 2)), at(2, 2));
  EXPECT_EQ(apply(f, at(2, 2)), at(1, 2));
  for (long x = 1; x <= 10; ++x) EXPECT_EQ(apply(f, at(x, 1)), at(x, 1));
  for (long x = 3; x <= 10; ++x) EXPECT_EQ(apply(f, at(x, 2)), at(x, 2));
}

TEST(Houghton, FiMapIsFunctorial) {
  std::vector<Injection> one_two = {{1}, {2}};
  std::vector<Injection> two_three;
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      if (a != b) two_three.push_back({a, b});
  for (int s = 0; s < 20; ++s) {
    auto g = decompose(random_element(1 + s % 2, 1, 2, static_cast<std::uint64_t>(s))).kernel_part;
    for (auto const& f1 : one_two)
      for (auto const& f2 : two_three) {
        Injection c{f2[static_cast<std::size_t>(f1[0] - 1)]};
        EXPECT_TRUE(equals(fi_map(f2, 3, fi_map(f1, 2, g)), fi_map(c, 3, g)));
      }
    // G(f) is a homomorphism.
    auto h  = decompose(random_element(1 + s % 2, 2, 2, static_cast<std::uint64_t>(100 + s))).kernel_part;
    auto g2 = decompose(random_element(1 + s % 2, 2, 2, static_cast<std::uint64_t>(200 + s))).kernel_part;
    for (auto const& f : two_three)
      EXPECT_TRUE(equals(fi_map(f, 3, compose(h, g2)), compose(fi_map(f, 3, h), fi_map(f, 3, g2))));
  }
}

TEST(Houghton, ExtendToAutomorphismExamples) {
  HoughtonMap inc{1, 1, 2, {P(1, {1}, {1}, {0}, 1)}};
  EXPECT_TRUE(equals(extend_to_automorphism(inc), identity_map(1, 2)));
  HoughtonMap shift{1, 1, 2, {P(1, {1}, {1}, {1}, 1)}};
  auto e = extend_to_automorphism(shift);
  EXPECT_TRUE(validate(e).bijective);
  EXPECT_EQ(apply(e, at(1, 2)), at(1, 1));
  for (long x = 2; x <= 20; ++x) EXPECT_EQ(apply(e, at(x, 2)), at(x - 1, 2));
  EXPECT_TRUE(equals(restrict_to(e, 1), shift));
  EXPECT_TRUE(oracle::bijective_on_box(e, 30, 1));
}

TEST(Houghton, ExtendToAutomorphismRandom) {
  std::mt19937_64 rng(17);
  for (int s = 0; s < 200; ++s) {
    int k = 1 + s % 2;
    int n = 2 + s % 2;
    int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    auto f = random_injection(k, m, n, 2, rng);
    auto e = extend_to_automorphism(f);
    ASSERT_TRUE(validate(e).bijective);
    EXPECT_TRUE(equals(restrict_to(e, m), f));
  }
}

TEST(Houghton, SameSubobject) {
  HoughtonMap a{1, 1, 2, {P(1, {1}, {1}, {0}, 1)}};
  HoughtonMap b{1, 1, 2, {P(1, {1}, {1}, {0}, 2)}};
  EXPECT_FALSE(same_subobject(a, b));
  HoughtonMap c{1, 1, 2, {P(1, {1}, {}, {1}, 1), P(1, {2}, {}, {-1}, 1), P(1, {3}, {1}, {0}, 1)}};
  EXPECT_TRUE(same_subobject(a, c));
  std::mt19937_64 rng(23);
  for (int s = 0; s < 50; ++s) {
    auto f = random_injection(1 + s % 2, 2, 3, 2, rng);
    auto h = random_element(1 + s % 2, 2, 2, static_cast<std::uint64_t>(s + 7));
    EXPECT_TRUE(same_subobject(f, compose(f, h)));
  }
}

TEST(Houghton, ComplementSubobject) {
  EXPECT_TRUE(complement_subobject(identity_map(2, 3)).cells.empty());
  HoughtonMap shift{1, 1, 2, {P(1, {1}, {1}, {1}, 1)}};
  auto c = complement_subobject(shift);
  EXPECT_TRUE(partition_validate(c));
  auto got = oracle::cover_counts(c.cells, 1, 2, 20);
  for (auto const& [p, n] : got) {
    bool in_image = p.second == 1 && p.first[0] >= 2;
    EXPECT_EQ(n, in_image ? 0 : 1);
  }
}

TEST(Houghton, RandomElementContract) {
  auto a = random_element(2, 3, 2, std::uint64_t{42});
  auto b = random_element(2, 3, 2, std::uint64_t{42});
  EXPECT_EQ(a.pieces, b.pieces);
  for (int s = 0; s < 1000; ++s) {
    auto g = random_element(1 + s % 2, 1 + s % 4, static_cast<unsigned>(s % 4),
                            static_cast<std::uint64_t>(s));
    ASSERT_TRUE(validate(g).bijective) << s;
  }
  for (int s = 0; s < 50; ++s) {
    auto g = random_element(2, 3, 0, static_cast<std::uint64_t>(s));
    EXPECT_TRUE(equals(g, embed_symmetric(sigma_projection(g), 2)));
  }
}

TEST(Houghton, RestrictAndBlockSum) {
  auto g = gen();
  auto h = identity_map(1, 1);
  auto s = block_sum(g, h);
  EXPECT_EQ(s.m, 3);
  EXPECT_TRUE(validate(s).bijective);
  EXPECT_TRUE(equals(restrict_to(s, 2), restrict_to(fi_map({1, 2}, 3, g), 2)));
}
