#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "oracles.hpp"
#include "qpa/cq_state.hpp"
#include "qpa/errors.hpp"
#include "qpa/random.hpp"
#include "qpa/renyi.hpp"
#include "states.hpp"

using qpa::CQState;
using qpa::DensityOperator;
using qpa::Matrix;

namespace {

Matrix dense_cq(const CQState& s) {
  const auto k = static_cast<qpa::Index>(s.alphabet_size());
  Matrix out = Matrix::Zero(k * s.dim_e(), k * s.dim_e());
  for (qpa::Index x = 0; x < k; ++x) {
    Matrix proj = Matrix::Zero(k, k);
    proj(x, x) = 1.0;
    out += s.p()[x] * oracle::kron(proj, s.rhos()[x].matrix());
  }
  return out;
}

}  // namespace

TEST(CQState, Validation) {
  EXPECT_THROW(CQState({0.5, 0.6}, {DensityOperator::diagonal({1.0}), DensityOperator::diagonal({1.0})}),
               qpa::ValidationError);
  EXPECT_THROW(CQState({0.5, 0.5}, {DensityOperator::diagonal({1.0})}), qpa::ValidationError);
  EXPECT_THROW(CQState({0.5, 0.5}, {DensityOperator::diagonal({1.0}), DensityOperator::diagonal({0.5, 0.5})}),
               qpa::ValidationError);
  EXPECT_THROW(CQState({-0.5, 1.5}, {DensityOperator::diagonal({1.0}), DensityOperator::diagonal({1.0})}),
               qpa::ValidationError);
  const CQState three({0.2, 0.3, 0.5}, std::vector<DensityOperator>(3, DensityOperator::diagonal({1.0})));
  EXPECT_THROW((void)three.bits(), qpa::ValidationError);
  const CQState padded = CQState::padded({0.2, 0.3, 0.5},
                                         std::vector<DensityOperator>(3, DensityOperator::diagonal({1.0})));
  EXPECT_EQ(padded.alphabet_size(), 4u);
  EXPECT_EQ(padded.bits(), 2u);
  EXPECT_EQ(padded.p()[3], 0.0);
}

TEST(CQState, MarginalExamples) {
  qpa::RandomStream rng(3);
  const auto sigma = qpa::random_density(2, rng);
  const auto m1 = qpa::marginal_E(CQState({0.5, 0.5}, {sigma, sigma}));
  EXPECT_LE((m1.matrix() - sigma.matrix()).norm(), 1e-15);
  const auto rho0 = qpa::random_density(2, rng);
  const auto m2 = qpa::marginal_E(CQState({1.0, 0.0}, {rho0, sigma}));
  EXPECT_LE((m2.matrix() - rho0.matrix()).norm(), 1e-15);
  const auto m3 = qpa::marginal_E(testing_states::correlated_bit());
  EXPECT_LE((m3.matrix() - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(CQState, IidExtend) {
  const CQState s = testing_states::classical_quarter();
  const CQState s1 = qpa::iid_extend(s, 1);
  EXPECT_EQ(s1.p(), s.p());
  const CQState s2 = qpa::iid_extend(s, 2);
  ASSERT_EQ(s2.alphabet_size(), 4u);
  EXPECT_NEAR(s2.p()[0], 1.0 / 16, 1e-15);
  EXPECT_NEAR(s2.p()[1], 3.0 / 16, 1e-15);
  EXPECT_NEAR(s2.p()[2], 3.0 / 16, 1e-15);
  EXPECT_NEAR(s2.p()[3], 9.0 / 16, 1e-15);

  const CQState r = testing_states::random_state(2, 2, 5);
  const CQState r2 = qpa::iid_extend(r, 2);
  const Matrix m = qpa::marginal_E(r).matrix();
  EXPECT_LE((qpa::marginal_E(r2).matrix() - oracle::kron(m, m)).norm(), 1e-10);
  EXPECT_LE((r2.rhos()[2].matrix() - oracle::kron(r.rhos()[1].matrix(), r.rhos()[0].matrix())).norm(),
            1e-15);
  EXPECT_NEAR(qpa::conditional_entropy(qpa::EntropyKind::down, r2, 0.7),
              2.0 * qpa::conditional_entropy(qpa::EntropyKind::down, r, 0.7), 1e-9);

  EXPECT_THROW(qpa::iid_extend(testing_states::random_state(4, 2, 6), 5), qpa::CapacityError);
  EXPECT_THROW(qpa::iid_extend(r, 0), qpa::ValidationError);
}

TEST(CQState, ApplyHashExamples) {
  const CQState r = testing_states::random_state(4, 2, 8);
  const qpa::GFContext ctx(2);
  const Matrix rho_e = qpa::marginal_E(r).matrix();

  const CQState constant = qpa::apply_hash(r, qpa::AffineHash(ctx, 1, 0, 2));
  EXPECT_NEAR(constant.p()[1], 1.0, 1e-15);
  EXPECT_NEAR(constant.p()[0], 0.0, 0.0);
  EXPECT_LE((constant.rhos()[1].matrix() - rho_e).norm(), 1e-14);

  const qpa::AffineHash bij(ctx, 2, 3, 1);
  const CQState relabel = qpa::apply_hash(r, bij);
  for (qpa::FieldElement x = 0; x < 4; ++x) {
    EXPECT_NEAR(relabel.p()[bij(x)], r.p()[x], 1e-15);
    EXPECT_LE((relabel.rhos()[bij(x)].matrix() - r.rhos()[x].matrix()).norm(), 1e-14);
  }

  const CQState uniform = testing_states::product_uniform(2, qpa::DensityOperator::diagonal({0.6, 0.4}));
  for (const auto& h : qpa::enumerate_family(ctx, 1)) {
    const CQState z = qpa::apply_hash(uniform, h);
    double total = 0.0;
    for (double q : z.p()) total += q;
    EXPECT_NEAR(total, 1.0, 1e-12);
    if (h.a() != 0) {
      EXPECT_NEAR(z.p()[0], 0.5, 1e-15);
      EXPECT_NEAR(qpa::trace_distance(qpa::hashed_blocks(uniform, h), qpa::randomized_target(uniform, 2)),
                  0.0, 1e-10);
    }
  }

  EXPECT_THROW(qpa::apply_hash(r, qpa::AffineHash(qpa::GFContext(3), 1, 1, 0)), qpa::ValidationError);
}

TEST(CQState, RandomizedTarget) {
  const CQState r = testing_states::random_state(2, 2, 9);
  const auto t1 = qpa::randomized_target(r, 1);
  ASSERT_EQ(t1.blocks.size(), 1u);
  EXPECT_LE((t1.blocks[0] - qpa::marginal_E(r).matrix()).norm(), 1e-15);
  const auto t2 = qpa::randomized_target(testing_states::uniform_bit(), 2);
  EXPECT_LE((t2.to_dense() - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_NEAR(qpa::randomized_target(r, 8).trace(), 1.0, 1e-14);
  EXPECT_THROW(qpa::randomized_target(r, 0), qpa::ValidationError);
}

TEST(CQState, DenseFormMatchesKroneckerOracle) {
  const CQState r = testing_states::random_state(4, 3, 10);
  EXPECT_LE((r.to_dense() - dense_cq(r)).norm(), 1e-15);
  EXPECT_NEAR(r.as_block_operator().trace(), 1.0, 1e-14);
}

TEST(CQState, InducedCq) {
  qpa::RandomStream rng(21);
  const auto tau = qpa::random_density(2, rng);
  const auto b0 = qpa::random_density(3, rng);
  const auto b1 = qpa::random_density(3, rng);
  const qpa::WiretapChannel product(3, 2, {DensityOperator(qpa::tensor(b0.matrix(), tau.matrix())),
                                           DensityOperator(qpa::tensor(b1.matrix(), tau.matrix()))});
  const CQState xe = qpa::induced_cq(product, {0.3, 0.7}, qpa::Subsystem::E);
  const CQState xb = qpa::induced_cq(product, {0.3, 0.7}, qpa::Subsystem::B);
  for (const auto& r : xe.rhos()) EXPECT_LE((r.matrix() - tau.matrix()).norm(), 1e-14);
  EXPECT_LE((xb.rhos()[0].matrix() - b0.matrix()).norm(), 1e-14);
  EXPECT_LE((xb.rhos()[1].matrix() - b1.matrix()).norm(), 1e-14);

  const qpa::WiretapChannel random(2, 3, {qpa::random_density(6, rng), qpa::random_density(6, rng)});
  for (auto keep : {qpa::Subsystem::B, qpa::Subsystem::E}) {
    const CQState induced = qpa::induced_cq(random, {0.5, 0.5}, keep);
    for (const auto& r : induced.rhos()) {
      EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-12);
    }
  }
  EXPECT_THROW(qpa::induced_cq(random, {1.0}, qpa::Subsystem::E), qpa::ValidationError);
}

TEST(CQState, StinespringExamples) {
  const qpa::KrausChannel identity({Matrix::Identity(2, 2)});
  const auto v1 = qpa::stinespring(identity);
  EXPECT_EQ(v1.dim_e(), 1);
  qpa::RandomStream rng(22);
  const auto rho = qpa::random_density(2, rng);
  EXPECT_LE((v1.output(rho).matrix() - rho.matrix()).norm(), 1e-15);

  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(1, 1) = 1.0;
  const auto deph = qpa::stinespring(qpa::KrausChannel({k0, k1}));
  qpa::ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 0.5;
  EXPECT_LE((deph.output(qpa::DensityOperator::pure(plus)).matrix() - expected).norm(), 1e-15);

  Matrix a0(2, 2), a1(2, 2);
  const double g = 0.3;
  a0 << 1.0, 0.0, 0.0, std::sqrt(1 - g);
  a1 << 0.0, std::sqrt(g), 0.0, 0.0;
  const qpa::KrausChannel damping({a0, a1});
  const auto v = qpa::stinespring(damping);
  EXPECT_LE((v.isometry().adjoint() * v.isometry() - Matrix::Identity(2, 2)).norm(), 1e-9);
  const std::array<qpa::Index, 2> dims{2, 2};
  const std::array<qpa::Index, 1> keep_b{0};
  for (int t = 0; t < 10; ++t) {
    const auto in = qpa::random_density(2, rng);
    const Matrix out_b = qpa::partial_trace(v.output(in).matrix(), dims, keep_b);
    EXPECT_LE((out_b - damping.apply(in.matrix())).norm(), 1e-9);
  }

  EXPECT_THROW(qpa::KrausChannel({0.5 * Matrix::Identity(2, 2)}), qpa::ValidationError);
}

TEST(CQState, WiretapJointBlocksExamples) {
  const std::vector<DensityOperator> eve{DensityOperator::diagonal({1.0, 0.0}),
                                         DensityOperator::diagonal({0.0, 1.0})};
  const qpa::GFContext ctx(2, 0b111);
  const qpa::AffineHash top(ctx, 1, 1, 0);

  const auto blocks = qpa::wiretap_joint_blocks(qpa::Codebook({0, 0, 1, 1}, 2), top, eve);
  ASSERT_EQ(blocks.per_message.size(), 2u);
  EXPECT_LE((blocks.per_message[0] - Matrix(eve[0].matrix())).norm(), 1e-15);
  EXPECT_LE((blocks.per_message[1] - Matrix(eve[1].matrix())).norm(), 1e-15);
  // 4x4 block oracle: sigma_ME against (1/2) 1_M (x) sigma_E.
  Matrix joint = Matrix::Zero(4, 4), target = Matrix::Zero(4, 4);
  for (int m = 0; m < 2; ++m) {
    Matrix pm = Matrix::Zero(2, 2);
    pm(m, m) = 0.5;
    joint += oracle::kron(pm, blocks.per_message[m]);
    target += oracle::kron(pm, blocks.average);
  }
  EXPECT_NEAR(blocks.d1(), 0.5 * oracle::trace_norm(joint - target), 1e-15);
  EXPECT_NEAR(blocks.d1(), 0.5, 1e-15);

  EXPECT_NEAR(qpa::wiretap_joint_blocks(qpa::Codebook({1, 1, 1, 1}, 2), top, eve).d1(), 0.0, 1e-15);
  const std::vector<DensityOperator> flat(2, DensityOperator::diagonal({0.5, 0.5}));
  EXPECT_NEAR(qpa::wiretap_joint_blocks(qpa::Codebook({0, 1, 1, 0}, 2), top, flat).d1(), 0.0, 1e-15);

  EXPECT_THROW(qpa::wiretap_joint_blocks(qpa::Codebook({0, 0, 1, 1}, 2), qpa::AffineHash(ctx, 1, 0, 0), eve),
               qpa::DomainError);
  EXPECT_THROW(qpa::Codebook({0, 2}, 2), qpa::ValidationError);
}
