#pragma once

// Seeded sampling of states and priors. Every draw is a pure function of
// (seed, counter), so results do not depend on call order across threads.

#include <cstdint>
#include <vector>

#include "qpa/cq_state.hpp"
#include "qpa/operators.hpp"

namespace qpa {

/// Sequential reader over counter_random(seed, 0), counter_random(seed, 1), ...
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on (0, 1).
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// d x d matrix of i.i.d. standard complex Gaussians.
Matrix ginibre(Index d, RandomStream& rng);

/// G G^dagger / Tr[G G^dagger] for a Ginibre G (full rank almost surely).
DensityOperator random_density(Index d, RandomStream& rng);

/// Unnormalized Ginibre PSD operator G G^dagger / d.
HermitianOperator random_psd(Index d, RandomStream& rng);

/// Flat-Dirichlet probability vector with k entries.
std::vector<double> random_probability(std::size_t k, RandomStream& rng);

/// Random prior plus one random density operator per symbol.
CQState random_cq_state(std::size_t alphabet, Index dim_e, RandomStream& rng);

}  // namespace qpa
