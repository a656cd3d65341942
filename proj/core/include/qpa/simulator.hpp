#pragma once

// Exact and sampled evaluation of eps_PA and of Eve's distinguishability d_1,
// and the harness comparing them with the exponent bounds.
//
// Loops over hashes and codebooks may run on several threads. Per-item
// results land in index order and are reduced by pairwise summation, so the
// output does not depend on the thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "qpa/cq_state.hpp"
#include "qpa/exponents.hpp"
#include "qpa/hashing.hpp"

namespace qpa {

struct SimOptions {
  unsigned threads = 1;  // 0 picks std::thread::hardware_concurrency()
  bool keep_breakdown = false;
};

/// Pairwise (tree) summation.
double pairwise_sum(std::span<const double> values);

struct HashDistance {
  FieldElement a = 0;
  FieldElement b = 0;
  double distance = 0.0;
};

struct PAResult {
  bool exact = true;
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials); 0 when exact
  std::uint64_t family_size = 0;
  std::uint64_t trials = 0;
  std::vector<HashDistance> per_hash;  // filled when keep_breakdown is set
};

/// (1/2) sum_z || sum_{x in h^-1(z)} p(x) rho_E^x - rho_E / |Z| ||_1.
double pa_distance(const CQState& s, const AffineHash& h);

/// Average of pa_distance over the whole affine family. CapacityError when
/// the family is not enumerable.
PAResult exact_pa_distance(const CQState& s, const GFContext& ctx, unsigned v,
                           const SimOptions& options = {});

/// Mean over `trials` hashes drawn with sample_hash(ctx, v, counter_random(seed, t)).
PAResult sampled_pa_distance(const CQState& s, const GFContext& ctx, unsigned v,
                             std::uint64_t trials, std::uint64_t seed,
                             const SimOptions& options = {});

struct SandwichReport {
  unsigned n = 1;
  unsigned u = 1;   // single-copy input bits
  unsigned v = 1;   // single-copy output bits
  double rate = 0.0;  // v log 2 per copy
  double exact = 0.0;
  double upper = 1.0;  // min(1, e^{-n E_ach})
  double lower = 0.0;  // max(0, 1 - 4 e^{-n E_conv})
  double exponent_ach = 0.0;
  double exponent_conv = 0.0;
  bool upper_ok = true;
  bool lower_ok = true;
  bool pass() const { return upper_ok && lower_ok; }
};

inline constexpr double kSandwichSlack = 1e-9;

/// Exact eps_PA of s^{(x)n} under the GF(2^{nu}) -> nv-bit family, against
/// both bounds at R = v log 2. The engine, when given, must hold s.
SandwichReport sandwich_check(const CQState& s, unsigned v, unsigned n,
                              ExponentEngine* engine = nullptr,
                              const SimOptions& options = {});

enum class WiretapMode { exact, monte_carlo };

struct WiretapD1Result {
  bool exact = true;
  double value = 0.0;        // unbalanced hashes scored 1 - 1/M (message announced)
  double pessimistic = 0.0;  // unbalanced hashes scored 1
  double std_error = 0.0;
  std::uint64_t samples = 0;  // (codebook, hash) pairs visited
  double unbalanced_weight = 0.0;
};

/// E_{C,h}[d_1] for M = 2^log2_m messages and L = 2^log2_l randomness values.
/// Exact mode enumerates all |X|^{ML} codebooks and all 2^{2u} hashes
/// (u = log2_m + log2_l); CapacityError beyond 2^22 pairs.
WiretapD1Result wiretap_d1(const WiretapChannel& channel, const std::vector<double>& p,
                           unsigned log2_m, unsigned log2_l, WiretapMode mode,
                           std::uint64_t trials = 0, std::uint64_t seed = 0,
                           const SimOptions& options = {});

/// Same, from Eve's marginal states directly.
WiretapD1Result wiretap_d1(const std::vector<DensityOperator>& eve_states,
                           const std::vector<double>& p, unsigned log2_m, unsigned log2_l,
                           WiretapMode mode, std::uint64_t trials = 0, std::uint64_t seed = 0,
                           const SimOptions& options = {});

}  // namespace qpa
