#include "qpa/random.hpp"

#include <cmath>
#include <numbers>

#include "qpa/hashing.hpp"

namespace qpa {

std::uint64_t RandomStream::next_u64() { return counter_random(seed_, counter_++); }

double RandomStream::uniform() {
  // 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  return r * std::cos(2.0 * std::numbers::pi * uniform());
}

Matrix ginibre(Index d, RandomStream& rng) {
  Matrix g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

DensityOperator random_density(Index d, RandomStream& rng) {
  const Matrix g = ginibre(d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(HermitianOperator::symmetrized(rho));
}

HermitianOperator random_psd(Index d, RandomStream& rng) {
  const Matrix g = ginibre(d, rng);
  return HermitianOperator::symmetrized(g * g.adjoint() / static_cast<double>(d));
}

std::vector<double> random_probability(std::size_t k, RandomStream& rng) {
  std::vector<double> p(k);
  double sum = 0.0;
  for (double& q : p) {
    q = -std::log(rng.uniform());
    sum += q;
  }
  for (double& q : p) q /= sum;
  return p;
}

CQState random_cq_state(std::size_t alphabet, Index dim_e, RandomStream& rng) {
  std::vector<double> p = random_probability(alphabet, rng);
  std::vector<DensityOperator> rhos;
  rhos.reserve(alphabet);
  for (std::size_t x = 0; x < alphabet; ++x) rhos.push_back(random_density(dim_e, rng));
  return CQState(std::move(p), std::move(rhos));
}

}  // namespace qpa
