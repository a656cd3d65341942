#pragma once

// Minimization of smooth functions over full-rank density operators.
//
// The search runs in the exponential chart tau = e^H / Tr e^H over Hermitian
// H with BFGS. Stationarity is measured by the Frobenius norm of the gradient
// in H, divided by max(1, |F|).

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qpa/operators.hpp"
#include "qpa/tolerances.hpp"

namespace qpa {

/// F(tau) and its gradient G (Hermitian, dF = Tr[G dtau]).
struct ObjectiveEval {
  double value = 0.0;
  Matrix gradient;
  double noise = 0.0;  // absolute rounding scale of value, if larger than a few ulps
};

/// Receives the spectral decomposition of tau.
using DensityObjective = std::function<ObjectiveEval(const SpectralDecomposition& tau)>;

struct MinimizeOptions {
  double tol = kTolerances.minimizer_tolerance;
  int max_iters = kTolerances.minimizer_max_iters;
  int starts = kTolerances.minimizer_starts;
  std::uint64_t seed = 0;
  /// First deterministic start (mixed with I/d to keep it interior).
  std::optional<Matrix> anchor;
  /// Tried alone first; the multi-start runs only if it fails.
  std::optional<Matrix> warm_start;
  /// Bloch-ball grid search before giving up when dim == 2.
  bool grid_fallback = true;
  bool throw_on_failure = true;
};

struct MinimizeResult {
  Matrix minimizer;
  double value = 0.0;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Final value reached from each start that was run.
  std::vector<double> start_values;
};

/// ConvergenceError (with the best value and residual) when no start meets
/// `tol` and throw_on_failure is set. ValidationError when dim exceeds
/// minimizer_max_dim.
MinimizeResult minimize_sigma(Index dim, const DensityObjective& objective,
                              const MinimizeOptions& options = {});

/// One BFGS descent from `start`, which must be a full-rank density matrix.
MinimizeResult minimize_from(const Matrix& start, const DensityObjective& objective,
                             double tol, int max_iters);

}  // namespace qpa
