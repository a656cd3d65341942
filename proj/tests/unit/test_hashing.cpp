#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "qpa/errors.hpp"
#include "qpa/hashing.hpp"

using qpa::AffineHash;
using qpa::GFContext;

TEST(Hashing, FieldExamples) {
  const GFContext f4(2, 0b111);
  EXPECT_EQ(qpa::gf_mul(f4, 2, 2), 3u);
  for (qpa::FieldElement x = 0; x < 4; ++x) {
    EXPECT_EQ(qpa::gf_mul(f4, x, 1), x);
    EXPECT_EQ(qpa::gf_add(x, x), 0u);
  }
  EXPECT_THROW(f4.mul(4, 1), qpa::ValidationError);
  EXPECT_THROW(GFContext(2, 0b101), qpa::ValidationError);
}

TEST(Hashing, DefaultModuliAreIrreducibleAndMinimalWeight) {
  for (unsigned u = 1; u <= qpa::kMaxFieldBits; ++u) {
    const std::uint32_t m = qpa::default_modulus(u);
    const std::uint32_t poly = m;
    EXPECT_EQ(poly >> u, 1u);
    EXPECT_TRUE(qpa::is_irreducible(poly)) << "u=" << u;
    // Irreducible polynomials of degree >= 2 need a constant term and an odd number of terms.
    if (u >= 2) {
      EXPECT_EQ(poly & 1u, 1u);
      EXPECT_EQ(__builtin_popcount(poly) % 2, 1);
    }
  }
  EXPECT_FALSE(qpa::is_irreducible(0b101));  // x^2 + 1 = (x + 1)^2
  EXPECT_TRUE(qpa::is_irreducible(0b111));
}

TEST(Hashing, MultiplicationMatchesLongDivisionOracle) {
  for (unsigned u : {2u, 3u, 4u, 5u, 8u}) {
    const GFContext ctx(u);
    const std::uint32_t q = ctx.size();
    const std::uint32_t step = u <= 5 ? 1 : 7;
    for (std::uint32_t x = 0; x < q; x += step) {
      for (std::uint32_t y = 0; y < q; y += step) {
        ASSERT_EQ(ctx.mul(x, y), oracle::gf_mul(x, y, u, ctx.modulus())) << u << " " << x << " " << y;
      }
    }
  }
}

TEST(Hashing, FieldAxioms) {
  for (unsigned u : {2u, 3u, 4u, 8u}) {
    const GFContext ctx(u);
    std::uint64_t state = 99 + u;
    for (int t = 0; t < 10000; ++t) {
      const auto x = static_cast<qpa::FieldElement>(qpa::counter_random(state, 3 * t) % ctx.size());
      const auto y = static_cast<qpa::FieldElement>(qpa::counter_random(state, 3 * t + 1) % ctx.size());
      const auto z = static_cast<qpa::FieldElement>(qpa::counter_random(state, 3 * t + 2) % ctx.size());
      ASSERT_EQ(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
      ASSERT_EQ(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
      ASSERT_EQ(ctx.mul(x, y), ctx.mul(y, x));
    }
  }
}

TEST(Hashing, InversesExistAndMultiplicationIsBijective) {
  for (unsigned u = 1; u <= 8; ++u) {
    const GFContext ctx(u);
    for (qpa::FieldElement a = 1; a < ctx.size(); ++a) {
      ASSERT_EQ(ctx.mul(a, ctx.inverse(a)), 1u) << "u=" << u << " a=" << a;
      std::vector<bool> hit(ctx.size(), false);
      for (qpa::FieldElement x = 0; x < ctx.size(); ++x) hit[ctx.add(ctx.mul(a, x), 5 % ctx.size())] = true;
      for (bool h : hit) ASSERT_TRUE(h);
    }
  }
}

TEST(Hashing, EvalExamples) {
  const GFContext f4(2, 0b111);
  const AffineHash top(f4, 1, 1, 0);
  EXPECT_EQ(qpa::eval_hash(top, 0), 0u);
  EXPECT_EQ(qpa::eval_hash(top, 1), 0u);
  EXPECT_EQ(qpa::eval_hash(top, 2), 1u);
  EXPECT_EQ(qpa::eval_hash(top, 3), 1u);
  EXPECT_THROW(qpa::eval_hash(top, 4), qpa::ValidationError);

  const AffineHash constant(f4, 1, 0, 3);
  for (qpa::FieldElement x = 0; x < 4; ++x) EXPECT_EQ(constant(x), 1u);
  const AffineHash ident(f4, 2, 1, 0);
  for (qpa::FieldElement x = 0; x < 4; ++x) EXPECT_EQ(ident(x), x);

  const GFContext f16(4);
  for (qpa::FieldElement a = 0; a < 16; ++a) {
    for (qpa::FieldElement x = 0; x < 16; ++x) {
      EXPECT_EQ(AffineHash(f16, 3, a, 9)(x), oracle::affine_hash(a, 9, x, 4, 3, f16.modulus()));
    }
  }
}

TEST(Hashing, FamilyEnumeration) {
  EXPECT_EQ(qpa::enumerate_family(GFContext(1), 1).size(), 4u);
  EXPECT_EQ(qpa::enumerate_family(GFContext(2), 1).size(), 16u);
  EXPECT_EQ(qpa::enumerate_family(GFContext(3), 2).size(), 64u);
  EXPECT_THROW(qpa::enumerate_family(GFContext(13), 1), qpa::CapacityError);

  const auto fam = qpa::enumerate_family(GFContext(2), 1);
  std::uint64_t i = 0;
  std::set<std::pair<unsigned, unsigned>> seen;
  for (const AffineHash& h : fam) {
    EXPECT_EQ(h.a(), i / 4);
    EXPECT_EQ(h.b(), i % 4);
    seen.insert({h.a(), h.b()});
    ++i;
  }
  EXPECT_EQ(seen.size(), 16u);
}

TEST(Hashing, BalancednessByPreimageCount) {
  for (unsigned u = 1; u <= 4; ++u) {
    for (unsigned v = 1; v <= u; ++v) {
      const auto fam = qpa::enumerate_family(GFContext(u), v);
      std::uint64_t balanced = 0;
      for (const AffineHash& h : fam) {
        std::vector<unsigned> count(h.output_size(), 0);
        for (qpa::FieldElement x = 0; x < h.input_size(); ++x) ++count[h(x)];
        bool even = true;
        for (unsigned c : count) even = even && c == (1u << (u - v));
        EXPECT_EQ(qpa::is_balanced(h), even);
        EXPECT_EQ(even, h.a() != 0);
        balanced += even ? 1 : 0;
      }
      EXPECT_EQ(balanced * (1u << u), fam.size() * ((1u << u) - 1));
    }
  }
}

TEST(Hashing, UniversalityExamples) {
  const auto t21 = qpa::universality_check(GFContext(2), 1);
  EXPECT_TRUE(t21.uniform());
  EXPECT_EQ(t21.expected(), 4u);
  EXPECT_EQ(t21.count(0, 1, 0, 1), 4u);
  const auto t11 = qpa::universality_check(GFContext(1), 1);
  EXPECT_EQ(t11.expected(), 1u);
  EXPECT_EQ(t11.count(1, 0, 1, 1), 1u);
  EXPECT_EQ(t11.cells(), 2u * 4u);
  EXPECT_THROW(t11.count(1, 1, 0, 0), qpa::ValidationError);
  EXPECT_THROW(qpa::universality_check(GFContext(7), 1), qpa::CapacityError);
}

TEST(Hashing, StrongUniversalityUpToSixBits) {
  for (unsigned u = 1; u <= 6; ++u) {
    for (unsigned v = 1; v <= u; ++v) {
      EXPECT_TRUE(qpa::universality_check(GFContext(u), v).uniform()) << u << "," << v;
    }
  }
}

TEST(Hashing, SampleHashIsDeterministicAndUniform) {
  const GFContext ctx(2);
  const AffineHash h1 = qpa::sample_hash(ctx, 1, 42);
  const AffineHash h2 = qpa::sample_hash(ctx, 1, 42);
  EXPECT_EQ(h1.a(), h2.a());
  EXPECT_EQ(h1.b(), h2.b());

  const int n = 100000;
  int balanced = 0;
  int collide = 0;
  for (int t = 0; t < n; ++t) {
    const AffineHash h = qpa::sample_hash(ctx, 1, qpa::counter_random(7, t));
    balanced += qpa::is_balanced(h) ? 1 : 0;
    collide += (h(1) == 0 && h(2) == 1) ? 1 : 0;
  }
  const auto within_3sigma = [n](int hits, double p) {
    const double sd = std::sqrt(n * p * (1 - p));
    return std::abs(hits - n * p) <= 3 * sd;
  };
  EXPECT_TRUE(within_3sigma(balanced, 0.75)) << balanced;
  EXPECT_TRUE(within_3sigma(collide, 0.25)) << collide;
}
