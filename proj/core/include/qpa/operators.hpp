#pragma once

// Dense Hermitian linear algebra: validated operator types, spectral calculus,
// tensor products and partial traces, Schatten-1 norms, the noncommutative
// quotient B^{-1/2} A B^{-1/2}.
//
// Support convention: an eigenvalue lambda counts as zero when
// lambda < support_cutoff * max(|lambda_max|, 1). Every support-restricted
// function (negative powers, logarithms, projectors) uses this cutoff.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qpa/tolerances.hpp"

namespace qpa {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

class HermitianOperator {
 public:
  /// Validates squareness and Hermiticity (relative to the largest entry).
  explicit HermitianOperator(Matrix entries);

  /// Hermitian part (M + M^dagger)/2 of a square matrix; for internally
  /// generated matrices whose asymmetry is rounding noise.
  static HermitianOperator symmetrized(const Matrix& entries);

  static HermitianOperator identity(Index dim);
  static HermitianOperator zero(Index dim);
  static HermitianOperator diagonal(const std::vector<double>& diag);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double trace() const { return entries_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator operator*(double scale) const;

 private:
  struct Trusted {};
  HermitianOperator(Matrix entries, Trusted) : entries_(std::move(entries)) {}

  Matrix entries_;
};

class DensityOperator {
 public:
  /// Validates PSD (eigenvalues >= -psd) and unit trace.
  explicit DensityOperator(HermitianOperator base);
  explicit DensityOperator(const Matrix& entries);

  static DensityOperator maximally_mixed(Index dim);
  static DensityOperator pure(const ComplexVector& psi);
  static DensityOperator diagonal(const std::vector<double>& probabilities);

  Index dim() const { return base_.dim(); }
  const HermitianOperator& base() const { return base_; }
  const Matrix& matrix() const { return base_.matrix(); }
  operator const HermitianOperator&() const { return base_; }

 private:
  HermitianOperator base_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns, orthonormal

  Matrix reconstruct() const;
  /// U diag(f(lambda_i)) U^dagger.
  Matrix apply(const std::function<double(double)>& f) const;
};

SpectralDecomposition spectral(const HermitianOperator& a);

/// Eigenvalues (descending) of a matrix assumed Hermitian; no validation.
RealVector hermitian_eigenvalues(const Matrix& a);

/// Threshold below which eigenvalues of a spectrum are treated as zero.
double support_threshold(const RealVector& eigenvalues,
                         const Tolerances& tol = kTolerances);

/// A^p for PSD A. Zero eigenvalues map to zero for every p (so p = 0 gives
/// the support projector). Throws ValidationError on eigenvalues < -psd.
HermitianOperator mat_power(const HermitianOperator& a, double p);

/// log A on the support of a PSD A; zero on the kernel.
HermitianOperator mat_log_support(const HermitianOperator& a);

/// Orthogonal projector onto the support of a PSD operator.
HermitianOperator support_projector(const HermitianOperator& a);

/// true iff supp(a) is contained in supp(b) within support_inclusion.
bool support_contained(const HermitianOperator& a, const HermitianOperator& b);

Matrix tensor(const Matrix& a, const Matrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

/// Traces out every factor not listed in `keep`. Factors are ordered as in
/// `dims` (first factor most significant in the Kronecker index).
Matrix partial_trace(const Matrix& a, std::span<const Index> dims,
                     std::span<const Index> keep);
HermitianOperator partial_trace(const HermitianOperator& a,
                                std::span<const Index> dims,
                                std::span<const Index> keep);

double trace_norm(const HermitianOperator& a);
/// (1/2) ||a - b||_1.
double trace_distance(const HermitianOperator& a, const HermitianOperator& b);

/// B^{-1/2} A B^{-1/2}, inverse root taken on supp(B). DomainError unless
/// supp(A) is within supp(B).
HermitianOperator nc_quotient(const HermitianOperator& a, const HermitianOperator& b);

HermitianOperator positive_part(const HermitianOperator& a);
HermitianOperator abs_op(const HermitianOperator& a);

/// Frechet derivative of the spectral function f at A (given by its
/// decomposition) in direction C, via first divided differences of f.
Matrix frechet_derivative(const SpectralDecomposition& a,
                          const std::function<double(double)>& f,
                          const std::function<double(double)>& df,
                          const Matrix& c);

}  // namespace qpa
