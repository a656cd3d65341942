#pragma once

// Petz and sandwiched Renyi divergences, relative entropy and its variance,
// and the conditional entropies / mutual informations of c-q states.
//
// All logarithms are natural. Orders within alpha_one_band of 1 dispatch to
// the von Neumann quantities.

#include "qpa/cq_state.hpp"
#include "qpa/minimize.hpp"
#include "qpa/operators.hpp"

namespace qpa {

enum class DivergenceKind { petz, sandwiched };
enum class EntropyKind { down, star, down_star };

const char* to_string(DivergenceKind kind);
const char* to_string(EntropyKind kind);

/// D_alpha or D*_alpha. ValidationError for alpha <= 0; DomainError unless
/// supp(rho) is within supp(sigma).
double divergence(DivergenceKind kind, const DensityOperator& rho, const HermitianOperator& sigma,
                  double alpha);

double relative_entropy(const DensityOperator& rho, const HermitianOperator& sigma);

/// Tr[rho (log rho - log sigma)^2] - D(rho||sigma)^2.
double relative_entropy_variance(const DensityOperator& rho, const HermitianOperator& sigma);

/// Tr[rho (log rho - log sigma)^2] without centering. Diagnostic only.
double relative_entropy_second_moment(const DensityOperator& rho, const HermitianOperator& sigma);

/// Closed-form Petz quantities of one c-q state, evaluated from the spectra of
/// rho_E^x and rho_E computed once. Orders beta >= 0 are accepted; beta = 0
/// uses support projectors (rho^0 = Pi_rho).
class DownCurve {
 public:
  explicit DownCurve(const CQState& s);

  /// H_beta^down(X|E).
  double entropy(double beta) const;
  /// I_beta^down(X:E).
  double information(double beta) const;

  /// H(X|E), I(X:E).
  double entropy_vn() const;
  double information_vn() const;

  /// Centered variances V(X|E), V(X:E).
  double entropy_variance() const;
  double information_variance() const;
  /// Uncentered second moments (diagnostic).
  double entropy_second_moment() const;
  double information_second_moment() const;

 private:
  struct Block {
    double p;
    RealVector lambda;       // spectrum of rho_E^x
    Eigen::MatrixXd overlap;  // |<u_i|v_j>|^2 against the eigenbasis of rho_E
  };

  double petz_sum(double beta, bool conditional) const;
  double first_moment(bool conditional) const;
  double second_moment(bool conditional) const;

  std::vector<Block> blocks_;
  RealVector mu_;  // spectrum of rho_E
  double mu_cut_;
};

/// Result of a star-kind minimization.
struct StarResult {
  double value = 0.0;
  Matrix sigma;  // optimal sigma_E on the full E space
  double residual = 0.0;
  bool converged = true;
};

/// down: valid for alpha in (0, inf); star, down_star: alpha in (1/2, inf).
/// Star kinds throw ConvergenceError when the minimizer fails.
double conditional_entropy(EntropyKind kind, const CQState& s, double alpha,
                           const MinimizeOptions& options = {});
double mutual_information(EntropyKind kind, const CQState& s, double alpha,
                          const MinimizeOptions& options = {});

/// H*_alpha and I*_alpha with the optimizer. The minimization runs on supp(rho_E).
StarResult conditional_entropy_star(const CQState& s, double alpha,
                                    const MinimizeOptions& options = {});
StarResult mutual_information_star(const CQState& s, double alpha,
                                   const MinimizeOptions& options = {});

/// (1/(alpha-1)) log sum_x p(x) exp((alpha-1) D*_alpha(rho_E^x || tau)),
/// which equals D*_alpha(rho_XE || rho_X (x) tau).
double cq_sandwiched_reduction(const CQState& s, const DensityOperator& tau, double alpha);

double cond_var(const CQState& s);
double mi_var(const CQState& s);

}  // namespace qpa
