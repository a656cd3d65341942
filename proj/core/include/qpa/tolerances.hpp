#pragma once

#include <cstddef>

namespace qpa {

/// Every numeric tolerance and explicit-size limit used by the library.
struct Tolerances {
  // Operator validation.
  double hermitian = 1e-10;     // relative to the largest absolute entry
  double psd = 1e-10;           // smallest admissible eigenvalue is -psd
  double unit_trace = 1e-10;
  double probability_sum = 1e-10;
  double kraus_completeness = 1e-9;

  // An eigenvalue lambda is treated as 0 when lambda < support_cutoff * max(|lambda_max|, 1).
  double support_cutoff = 1e-12;
  // supp(A) within supp(B) is accepted when ||P_B P_A - P_A|| <= support_inclusion.
  double support_inclusion = 1e-8;

  // Renyi quantities.
  double alpha_one_band = 1e-6;  // |alpha - 1| below this dispatches to the von Neumann limit

  // sigma minimization.
  double minimizer_tolerance = 1e-7;
  std::size_t minimizer_max_iters = 2000;
  std::size_t minimizer_starts = 5;
  std::size_t minimizer_max_dim = 8;

  // Suprema over alpha.
  std::size_t alpha_grid_points = 512;
  double alpha_refine_width = 1e-9;

  // Explicit-size limits.
  std::size_t iid_size_limit = 4096;  // |X|^n * d_E^n
  unsigned max_enumerable_u = 12;     // hash family size 2^(2u)
  unsigned max_universality_u = 6;
};

/// The library-wide defaults.
inline constexpr Tolerances kTolerances{};

}  // namespace qpa
