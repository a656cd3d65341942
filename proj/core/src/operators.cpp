#include "qpa/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qpa/errors.hpp"

namespace qpa {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw ValidationError(os.str());
  }
}

double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

// HermitianOperator ----------------------------------------------------------

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "HermitianOperator");
  const double scale = std::max(max_abs_entry(entries_), 1e-300);
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kTolerances.hermitian * scale) {
    std::ostringstream os;
    os << "HermitianOperator: matrix is not Hermitian (max |A - A^dagger| = " << asym
       << ")";
    throw ValidationError(os.str());
  }
  entries_ = (entries_ + entries_.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::symmetrized(const Matrix& entries) {
  require_square(entries, "HermitianOperator::symmetrized");
  return HermitianOperator((entries + entries.adjoint()) * 0.5, Trusted{});
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(Matrix::Zero(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& diag) {
  Matrix m = Matrix::Zero(static_cast<Index>(diag.size()), static_cast<Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw ValidationError("HermitianOperator +: dimension mismatch");
  return HermitianOperator(entries_ + other.entries_, Trusted{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw ValidationError("HermitianOperator -: dimension mismatch");
  return HermitianOperator(entries_ - other.entries_, Trusted{});
}

HermitianOperator HermitianOperator::operator*(double scale) const {
  return HermitianOperator(entries_ * scale, Trusted{});
}

// DensityOperator ------------------------------------------------------------

DensityOperator::DensityOperator(HermitianOperator base) : base_(std::move(base)) {
  const RealVector ev = hermitian_eigenvalues(base_.matrix());
  if (ev.minCoeff() < -kTolerances.psd) {
    std::ostringstream os;
    os << "DensityOperator: negative eigenvalue " << ev.minCoeff();
    throw ValidationError(os.str());
  }
  if (std::abs(base_.trace() - 1.0) > kTolerances.unit_trace) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityOperator: trace " << base_.trace() << " is not 1";
    throw ValidationError(os.str());
  }
}

DensityOperator::DensityOperator(const Matrix& entries)
    : DensityOperator(HermitianOperator(entries)) {}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  return DensityOperator(HermitianOperator::identity(dim) * (1.0 / static_cast<double>(dim)));
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw ValidationError("DensityOperator::pure: zero vector");
  const ComplexVector unit = psi / norm;
  return DensityOperator(HermitianOperator::symmetrized(unit * unit.adjoint()));
}

DensityOperator DensityOperator::diagonal(const std::vector<double>& probabilities) {
  return DensityOperator(HermitianOperator::diagonal(probabilities));
}

// Spectral calculus ----------------------------------------------------------

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix SpectralDecomposition::apply(const std::function<double(double)>& f) const {
  RealVector mapped(eigenvalues.size());
  for (Index i = 0; i < eigenvalues.size(); ++i) mapped(i) = f(eigenvalues(i));
  return eigenvectors * mapped.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw ValidationError("spectral: eigen-decomposition failed");
  }
  const Index n = a.dim();
  SpectralDecomposition out{RealVector(n), Matrix(n, n)};
  // Eigen returns ascending order.
  for (Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

RealVector hermitian_eigenvalues(const Matrix& a) {
  const Index n = a.rows();
  if (n == 1) return RealVector::Constant(1, a(0, 0).real());
  if (n == 2) {
    const double p = a(0, 0).real();
    const double q = a(1, 1).real();
    const double mean = 0.5 * (p + q);
    const double half = 0.5 * (p - q);
    const double r = std::sqrt(half * half + std::norm(a(0, 1)));
    RealVector ev(2);
    ev << mean + r, mean - r;
    return ev;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

double support_threshold(const RealVector& eigenvalues, const Tolerances& tol) {
  const double top = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  return tol.support_cutoff * std::max(top, 1.0);
}

namespace {

SpectralDecomposition checked_psd_spectrum(const HermitianOperator& a, const char* what) {
  SpectralDecomposition sd = spectral(a);
  const double smallest = sd.eigenvalues(sd.eigenvalues.size() - 1);
  const double scale = std::max(1.0, std::abs(sd.eigenvalues(0)));
  if (smallest < -kTolerances.psd * scale) {
    std::ostringstream os;
    os << what << ": operator is not positive semi-definite (eigenvalue " << smallest << ")";
    throw ValidationError(os.str());
  }
  return sd;
}

}  // namespace

HermitianOperator mat_power(const HermitianOperator& a, double p) {
  const SpectralDecomposition sd = checked_psd_spectrum(a, "mat_power");
  const double cut = support_threshold(sd.eigenvalues);
  return HermitianOperator::symmetrized(
      sd.apply([&](double l) { return l < cut ? 0.0 : std::pow(l, p); }));
}

HermitianOperator mat_log_support(const HermitianOperator& a) {
  const SpectralDecomposition sd = checked_psd_spectrum(a, "mat_log_support");
  const double cut = support_threshold(sd.eigenvalues);
  return HermitianOperator::symmetrized(
      sd.apply([&](double l) { return l < cut ? 0.0 : std::log(l); }));
}

HermitianOperator support_projector(const HermitianOperator& a) {
  const SpectralDecomposition sd = spectral(a);
  const double cut = support_threshold(sd.eigenvalues);
  return HermitianOperator::symmetrized(
      sd.apply([&](double l) { return l < cut ? 0.0 : 1.0; }));
}

bool support_contained(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw ValidationError("support_contained: dimension mismatch");
  const Matrix pa = support_projector(a).matrix();
  const Matrix pb = support_projector(b).matrix();
  const double gap = (pb * pa - pa).norm();
  return gap <= kTolerances.support_inclusion;
}

// Tensor structure ------------------------------------------------------------

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::symmetrized(tensor(a.matrix(), b.matrix()));
}

Matrix partial_trace(const Matrix& a, std::span<const Index> dims,
                     std::span<const Index> keep) {
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{1},
                                      [](Index x, Index y) { return x * y; });
  if (a.rows() != a.cols() || a.rows() != total) {
    std::ostringstream os;
    os << "partial_trace: operator of dimension " << a.rows() << "x" << a.cols()
       << " does not match subsystem product " << total;
    throw ValidationError(os.str());
  }
  const std::size_t k = dims.size();
  std::vector<bool> kept(k, false);
  for (Index idx : keep) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= k) {
      throw ValidationError("partial_trace: kept subsystem index out of range");
    }
    kept[static_cast<std::size_t>(idx)] = true;
  }
  Index kept_dim = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (kept[i]) kept_dim *= dims[i];
  }

  // Decompose a flat index into per-factor digits and rebuild the kept and
  // traced parts of it.
  std::vector<Index> digits(k);
  auto split = [&](Index flat, Index& kept_index, Index& traced_index) {
    for (std::size_t i = k; i-- > 0;) {
      digits[i] = flat % dims[i];
      flat /= dims[i];
    }
    kept_index = 0;
    traced_index = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (kept[i]) {
        kept_index = kept_index * dims[i] + digits[i];
      } else {
        traced_index = traced_index * dims[i] + digits[i];
      }
    }
  };

  std::vector<Index> kept_of(total), traced_of(total);
  for (Index flat = 0; flat < total; ++flat) split(flat, kept_of[flat], traced_of[flat]);

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (Index r = 0; r < total; ++r) {
    for (Index c = 0; c < total; ++c) {
      if (traced_of[r] == traced_of[c]) out(kept_of[r], kept_of[c]) += a(r, c);
    }
  }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& a, std::span<const Index> dims,
                                std::span<const Index> keep) {
  return HermitianOperator::symmetrized(partial_trace(a.matrix(), dims, keep));
}

// Norms ----------------------------------------------------------------------

double trace_norm(const HermitianOperator& a) {
  return hermitian_eigenvalues(a.matrix()).cwiseAbs().sum();
}

double trace_distance(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw ValidationError("trace_distance: dimension mismatch");
  return 0.5 * hermitian_eigenvalues(a.matrix() - b.matrix()).cwiseAbs().sum();
}

HermitianOperator nc_quotient(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw ValidationError("nc_quotient: dimension mismatch");
  if (!support_contained(a, b)) {
    throw DomainError("nc_quotient: support of the numerator is not within the support of "
                      "the denominator");
  }
  const Matrix inv_root = mat_power(b, -0.5).matrix();
  return HermitianOperator::symmetrized(inv_root * a.matrix() * inv_root);
}

HermitianOperator positive_part(const HermitianOperator& a) {
  return HermitianOperator::symmetrized(
      spectral(a).apply([](double l) { return l > 0.0 ? l : 0.0; }));
}

HermitianOperator abs_op(const HermitianOperator& a) {
  return HermitianOperator::symmetrized(
      spectral(a).apply([](double l) { return std::abs(l); }));
}

Matrix frechet_derivative(const SpectralDecomposition& a,
                          const std::function<double(double)>& f,
                          const std::function<double(double)>& df, const Matrix& c) {
  const Index n = a.eigenvalues.size();
  const Matrix& u = a.eigenvectors;
  Matrix rotated = u.adjoint() * c * u;
  RealVector fv(n);
  for (Index i = 0; i < n; ++i) fv(i) = f(a.eigenvalues(i));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double li = a.eigenvalues(i);
      const double lj = a.eigenvalues(j);
      const double gap = li - lj;
      const double scale = std::max(std::abs(li), std::abs(lj));
      const double dd = std::abs(gap) > 1e-6 * scale ? (fv(i) - fv(j)) / gap
                                                     : df(0.5 * (li + lj));
      rotated(i, j) *= dd;
    }
  }
  return u * rotated * u.adjoint();
}

}  // namespace qpa
