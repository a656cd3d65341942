#pragma once

// Numeric oracles for the lemmas and proof-step inequalities, runnable as a
// property battery. Every check is deterministic in (trials, dims, seed).
//
// Violations are scale-free: (LHS - RHS) / max(1, |RHS|).

#include <cstdint>
#include <string>
#include <vector>

#include "qpa/cq_state.hpp"

namespace qpa {

struct CheckReport {
  std::string name;
  std::uint64_t trials = 0;
  double worst_violation = 0.0;
  double slack = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  std::uint64_t excluded = 0;  // trials dropped on minimizer failure
  std::string detail;
};

/// Tr[K (K+L)^{-1/2} L (K+L)^{-1/2}] <= Tr[(K+L-|K-L|)/2] <= Tr[K^{1-s} L^s]
/// on random PSD pairs. Also requires the reverse of the composite
/// inequality to fail in at least 1% of trials.
CheckReport check_trace_inequality(std::uint64_t trials, const std::vector<Index>& dims,
                                   std::uint64_t seed);

/// Concavity of the prior -> exp(((alpha-1)/alpha) I*_alpha) on random
/// 2-4 symbol qubit ensembles, alpha in {1.3, 1.7, 2}, lambda in {1/4, 1/2, 3/4}.
CheckReport check_concavity(std::uint64_t trials, std::uint64_t seed);

enum class VarianceConvention { centered, uncentered };

/// Richardson-extrapolated central differences at alpha = 1 of H*_alpha,
/// I*_alpha, H_{2-1/alpha}^down and I_{2-1/alpha}^down against -+V/2.
CheckReport check_derivatives(const CQState& s,
                              VarianceConvention convention = VarianceConvention::centered);

/// Monotonicity of D_alpha, D*_alpha of rho_XE against 1 (x) rho_E and
/// rho_X (x) rho_E on an alpha grid (slack 1e-9), and the alpha = 1 +- 1e-4
/// limits of every entropy kind (tolerance 1e-3). The violation is reported
/// in units of the relevant tolerance, so the check passes at <= 1.
CheckReport check_monotone_and_limits(const CQState& s);

/// H^down and I^down double under two-fold extension (slack 1e-9).
CheckReport check_additivity(const CQState& s, const std::vector<double>& alphas);

/// Tr[Pi_0 (rho_0 - rho_1)] = (1/2)||rho_0 - rho_1||_1 for Pi_0 = {rho_0 >= rho_1}.
CheckReport check_helstrom_attainment(std::uint64_t trials, std::uint64_t seed);

struct BatteryOptions {
  std::uint64_t trace_trials = 10000;
  std::uint64_t concavity_trials = 1000;
  std::uint64_t helstrom_trials = 1000;
  std::uint64_t seed = 1;
};

/// The full battery; the per-state checks run on every state in `states`.
std::vector<CheckReport> run_battery(const std::vector<CQState>& states,
                                     const BatteryOptions& options = {});

}  // namespace qpa
