#include "qpa/renyi.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qpa/errors.hpp"

namespace qpa {

const char* to_string(DivergenceKind kind) {
  return kind == DivergenceKind::petz ? "petz" : "sandwiched";
}

const char* to_string(EntropyKind kind) {
  switch (kind) {
    case EntropyKind::down:
      return "down";
    case EntropyKind::star:
      return "star";
    case EntropyKind::down_star:
      return "down_star";
  }
  return "?";
}

namespace {

bool near_one(double alpha) { return std::abs(alpha - 1.0) < kTolerances.alpha_one_band; }

void require_order(double alpha, double lower, const char* what) {
  if (!std::isfinite(alpha) || !(alpha > lower)) {
    std::ostringstream os;
    os << what << ": order alpha=" << alpha << " must exceed " << lower;
    throw ValidationError(os.str());
  }
}

void require_pair(const DensityOperator& rho, const HermitianOperator& sigma, const char* what) {
  if (rho.dim() != sigma.dim()) {
    std::ostringstream os;
    os << what << ": dimensions " << rho.dim() << " and " << sigma.dim() << " differ";
    throw ValidationError(os.str());
  }
  if (!support_contained(rho.base(), sigma)) {
    std::ostringstream os;
    os << what << ": supp(rho) is not contained in supp(sigma)";
    throw DomainError(os.str());
  }
}

// Spectral function on the support: zero below the cutoff.
Matrix support_apply(const SpectralDecomposition& sd, const std::function<double(double)>& f) {
  const double cut = support_threshold(sd.eigenvalues);
  return sd.apply([&](double l) { return l < cut ? 0.0 : f(l); });
}

// Tr[X^alpha] for PSD X with tiny negative rounding clipped.
double trace_power(const Matrix& x, double alpha) {
  const RealVector ev = hermitian_eigenvalues(x);
  const double cut = support_threshold(ev);
  double t = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) >= cut) t += std::pow(ev(i), alpha);
  }
  return t;
}

// Tr[(S rho S)^alpha] with S = sigma^gamma already formed.
double sandwiched_q(const Matrix& rho, const Matrix& s, double alpha) {
  return trace_power(s * rho * s, alpha);
}

double log_ratio_moment(const DensityOperator& rho, const HermitianOperator& sigma, int order) {
  const SpectralDecomposition r = spectral(rho.base());
  const Matrix log_rho = support_apply(r, [](double l) { return std::log(l); });
  const Matrix log_sigma = mat_log_support(sigma).matrix();
  const Matrix m = log_rho - log_sigma;
  if (order == 1) return (rho.matrix() * m).trace().real();
  return (rho.matrix() * m * m).trace().real();
}

}  // namespace

// Divergences -------------------------------------------------------------------

double relative_entropy(const DensityOperator& rho, const HermitianOperator& sigma) {
  require_pair(rho, sigma, "relative_entropy");
  return log_ratio_moment(rho, sigma, 1);
}

double relative_entropy_second_moment(const DensityOperator& rho, const HermitianOperator& sigma) {
  require_pair(rho, sigma, "relative_entropy_second_moment");
  return log_ratio_moment(rho, sigma, 2);
}

double relative_entropy_variance(const DensityOperator& rho, const HermitianOperator& sigma) {
  require_pair(rho, sigma, "relative_entropy_variance");
  const double d = log_ratio_moment(rho, sigma, 1);
  return log_ratio_moment(rho, sigma, 2) - d * d;
}

double divergence(DivergenceKind kind, const DensityOperator& rho, const HermitianOperator& sigma,
                  double alpha) {
  require_order(alpha, 0.0, "divergence");
  require_pair(rho, sigma, "divergence");
  if (near_one(alpha)) return log_ratio_moment(rho, sigma, 1);
  double q = 0.0;
  if (kind == DivergenceKind::petz) {
    const Matrix a = mat_power(rho.base(), alpha).matrix();
    const Matrix b = mat_power(sigma, 1.0 - alpha).matrix();
    q = (a * b).trace().real();
  } else {
    const Matrix s = mat_power(sigma, (1.0 - alpha) / (2.0 * alpha)).matrix();
    q = sandwiched_q(rho.matrix(), s, alpha);
  }
  return std::log(q) / (alpha - 1.0);
}

// DownCurve ----------------------------------------------------------------------

DownCurve::DownCurve(const CQState& s) {
  const SpectralDecomposition e = spectral(marginal_E(s).base());
  mu_ = e.eigenvalues;
  mu_cut_ = support_threshold(mu_);
  for (std::size_t x = 0; x < s.alphabet_size(); ++x) {
    if (s.p()[x] == 0.0) continue;
    const SpectralDecomposition r = spectral(s.rhos()[x].base());
    const Matrix inner = r.eigenvectors.adjoint() * e.eigenvectors;
    blocks_.push_back(Block{s.p()[x], r.eigenvalues, inner.cwiseAbs2()});
  }
}

double DownCurve::petz_sum(double beta, bool conditional) const {
  RealVector mu_pow(mu_.size());
  for (Index j = 0; j < mu_.size(); ++j) {
    mu_pow(j) = mu_(j) < mu_cut_ ? 0.0 : std::pow(mu_(j), 1.0 - beta);
  }
  double total = 0.0;
  for (const Block& b : blocks_) {
    const double cut = support_threshold(b.lambda);
    double inner = 0.0;
    for (Index i = 0; i < b.lambda.size(); ++i) {
      if (b.lambda(i) < cut) continue;
      inner += std::pow(b.lambda(i), beta) * b.overlap.row(i).dot(mu_pow);
    }
    total += (conditional ? std::pow(b.p, beta) : b.p) * inner;
  }
  return total;
}

double DownCurve::first_moment(bool conditional) const {
  RealVector m(mu_.size());
  for (Index j = 0; j < mu_.size(); ++j) m(j) = mu_(j) < mu_cut_ ? 0.0 : std::log(mu_(j));
  double total = 0.0;
  for (const Block& b : blocks_) {
    const double cut = support_threshold(b.lambda);
    for (Index i = 0; i < b.lambda.size(); ++i) {
      if (b.lambda(i) < cut) continue;
      const double ell = std::log(conditional ? b.p * b.lambda(i) : b.lambda(i));
      total += b.p * b.lambda(i) * (ell - b.overlap.row(i).dot(m));
    }
  }
  return total;
}

double DownCurve::second_moment(bool conditional) const {
  RealVector m(mu_.size());
  for (Index j = 0; j < mu_.size(); ++j) m(j) = mu_(j) < mu_cut_ ? 0.0 : std::log(mu_(j));
  const RealVector m2 = m.cwiseAbs2();
  double total = 0.0;
  for (const Block& b : blocks_) {
    const double cut = support_threshold(b.lambda);
    for (Index i = 0; i < b.lambda.size(); ++i) {
      if (b.lambda(i) < cut) continue;
      const double ell = std::log(conditional ? b.p * b.lambda(i) : b.lambda(i));
      const double cross = b.overlap.row(i).dot(m);
      const double square = b.overlap.row(i).dot(m2);
      total += b.p * b.lambda(i) * (ell * ell - 2.0 * ell * cross + square);
    }
  }
  return total;
}

double DownCurve::entropy(double beta) const {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw ValidationError("DownCurve: order must be non-negative");
  }
  if (near_one(beta)) return entropy_vn();
  return -std::log(petz_sum(beta, true)) / (beta - 1.0);
}

double DownCurve::information(double beta) const {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw ValidationError("DownCurve: order must be non-negative");
  }
  if (near_one(beta)) return information_vn();
  return std::log(petz_sum(beta, false)) / (beta - 1.0);
}

double DownCurve::entropy_vn() const { return -first_moment(true); }
double DownCurve::information_vn() const { return first_moment(false); }

double DownCurve::entropy_second_moment() const { return second_moment(true); }
double DownCurve::information_second_moment() const { return second_moment(false); }

double DownCurve::entropy_variance() const {
  const double d = first_moment(true);
  return second_moment(true) - d * d;
}

double DownCurve::information_variance() const {
  const double d = first_moment(false);
  return second_moment(false) - d * d;
}

// Star quantities ------------------------------------------------------------------

namespace {

struct Compressed {
  Matrix basis;               // d x ds isometry onto supp(rho_E)
  std::vector<Matrix> rhos;   // U^dagger rho_x U for p(x) > 0
  std::vector<double> p;
  Matrix rho_e;               // compressed marginal
};

Compressed compress(const CQState& s) {
  const SpectralDecomposition e = spectral(marginal_E(s).base());
  const double cut = support_threshold(e.eigenvalues);
  Index ds = 0;
  while (ds < e.eigenvalues.size() && e.eigenvalues(ds) >= cut) ++ds;
  Compressed c;
  c.basis = e.eigenvectors.leftCols(ds);
  c.rho_e = Matrix::Zero(ds, ds);
  for (Index i = 0; i < ds; ++i) c.rho_e(i, i) = e.eigenvalues(i);
  for (std::size_t x = 0; x < s.alphabet_size(); ++x) {
    if (s.p()[x] == 0.0) continue;
    c.p.push_back(s.p()[x]);
    c.rhos.push_back(c.basis.adjoint() * s.rhos()[x].matrix() * c.basis);
  }
  return c;
}

// F(tau) = log(sum_x w_x Tr[(tau^g rho_x tau^g)^alpha]) / (alpha - 1), g = (1-alpha)/(2 alpha).
DensityObjective star_objective(const Compressed& c, double alpha, bool conditional) {
  std::vector<double> w;
  for (double p : c.p) w.push_back(conditional ? std::pow(p, alpha) : p);
  const double g = (1.0 - alpha) / (2.0 * alpha);
  return [&c, w, alpha, g](const SpectralDecomposition& tau) {
    const Index d = tau.eigenvalues.size();
    const Matrix t = tau.apply([g](double l) { return std::pow(l, g); });
    double sum = 0.0;
    Matrix acc = Matrix::Zero(d, d);
    for (std::size_t x = 0; x < c.rhos.size(); ++x) {
      const Matrix xm = t * c.rhos[x] * t;
      const SpectralDecomposition xs = spectral(HermitianOperator::symmetrized(xm));
      const double cut = support_threshold(xs.eigenvalues);
      double q = 0.0;
      for (Index i = 0; i < d; ++i) {
        if (xs.eigenvalues(i) >= cut) q += std::pow(xs.eigenvalues(i), alpha);
      }
      const Matrix xpow =
          xs.apply([&](double l) { return l < cut ? 0.0 : std::pow(l, alpha - 1.0); });
      const Matrix b = c.rhos[x] * t * xpow;
      acc += w[x] * (b + b.adjoint());
      sum += w[x] * q;
    }
    if (!(sum > 0.0)) throw DomainError("star objective: vanishing trace sum");
    const Matrix dfg = frechet_derivative(
        tau, [g](double l) { return std::pow(l, g); },
        [g](double l) { return g * std::pow(l, g - 1.0); }, acc);
    ObjectiveEval out;
    out.value = std::log(sum) / (alpha - 1.0);
    out.gradient = (alpha / ((alpha - 1.0) * sum)) * dfg;
    out.noise = 16.0 * std::numeric_limits<double>::epsilon() *
                static_cast<double>(c.rhos.size() * d) / std::abs(alpha - 1.0);
    return out;
  };
}

StarResult star(const CQState& s, double alpha, const MinimizeOptions& options, bool conditional) {
  require_order(alpha, 0.5, conditional ? "conditional_entropy(star)" : "mutual_information(star)");
  StarResult out;
  if (near_one(alpha)) {
    const DownCurve curve(s);
    out.value = conditional ? curve.entropy_vn() : curve.information_vn();
    out.sigma = marginal_E(s).matrix();
    return out;
  }
  const Compressed c = compress(s);
  MinimizeOptions opts = options;
  if (!opts.anchor) opts.anchor = c.rho_e;
  if (opts.warm_start) {
    if (opts.warm_start->rows() == c.basis.rows()) {
      opts.warm_start = Matrix(c.basis.adjoint() * (*opts.warm_start) * c.basis);
    } else {
      opts.warm_start.reset();
    }
  }
  const DensityObjective objective = star_objective(c, alpha, conditional);
  MinimizeResult r;
  try {
    r = minimize_sigma(c.basis.cols(), objective, opts);
  } catch (const ConvergenceError& e) {
    const double best = conditional ? -e.best_value() : e.best_value();
    std::ostringstream os;
    os << (conditional ? "H*" : "I*") << " at alpha=" << alpha << ": " << e.what();
    throw ConvergenceError(os.str(), best, e.residual());
  }
  out.value = conditional ? -r.value : r.value;
  out.sigma = c.basis * r.minimizer * c.basis.adjoint();
  out.residual = r.residual;
  out.converged = r.converged;
  return out;
}

double down_star(const CQState& s, double alpha, bool conditional) {
  require_order(alpha, 0.5, "down_star");
  if (near_one(alpha)) {
    const DownCurve curve(s);
    return conditional ? curve.entropy_vn() : curve.information_vn();
  }
  const Matrix t =
      mat_power(marginal_E(s).base(), (1.0 - alpha) / (2.0 * alpha)).matrix();
  double sum = 0.0;
  for (std::size_t x = 0; x < s.alphabet_size(); ++x) {
    const double p = s.p()[x];
    if (p == 0.0) continue;
    sum += (conditional ? std::pow(p, alpha) : p) * sandwiched_q(s.rhos()[x].matrix(), t, alpha);
  }
  const double d = std::log(sum) / (alpha - 1.0);
  return conditional ? -d : d;
}

}  // namespace

StarResult conditional_entropy_star(const CQState& s, double alpha,
                                    const MinimizeOptions& options) {
  return star(s, alpha, options, true);
}

StarResult mutual_information_star(const CQState& s, double alpha,
                                   const MinimizeOptions& options) {
  return star(s, alpha, options, false);
}

double conditional_entropy(EntropyKind kind, const CQState& s, double alpha,
                           const MinimizeOptions& options) {
  switch (kind) {
    case EntropyKind::down:
      require_order(alpha, 0.0, "conditional_entropy(down)");
      return DownCurve(s).entropy(alpha);
    case EntropyKind::star:
      return star(s, alpha, options, true).value;
    case EntropyKind::down_star:
      return down_star(s, alpha, true);
  }
  throw ValidationError("conditional_entropy: unknown kind");
}

double mutual_information(EntropyKind kind, const CQState& s, double alpha,
                          const MinimizeOptions& options) {
  switch (kind) {
    case EntropyKind::down:
      require_order(alpha, 0.0, "mutual_information(down)");
      return DownCurve(s).information(alpha);
    case EntropyKind::star:
      return star(s, alpha, options, false).value;
    case EntropyKind::down_star:
      return down_star(s, alpha, false);
  }
  throw ValidationError("mutual_information: unknown kind");
}

double cq_sandwiched_reduction(const CQState& s, const DensityOperator& tau, double alpha) {
  require_order(alpha, 0.5, "cq_sandwiched_reduction");
  if (tau.dim() != s.dim_e()) throw ValidationError("cq_sandwiched_reduction: dimension mismatch");
  if (near_one(alpha)) {
    double total = 0.0;
    for (std::size_t x = 0; x < s.alphabet_size(); ++x) {
      if (s.p()[x] == 0.0) continue;
      total += s.p()[x] * relative_entropy(s.rhos()[x], tau.base());
    }
    return total;
  }
  const Matrix t = mat_power(tau.base(), (1.0 - alpha) / (2.0 * alpha)).matrix();
  double sum = 0.0;
  for (std::size_t x = 0; x < s.alphabet_size(); ++x) {
    if (s.p()[x] == 0.0) continue;
    if (!support_contained(s.rhos()[x].base(), tau.base())) {
      throw DomainError("cq_sandwiched_reduction: supp(rho_E^x) is not contained in supp(tau)");
    }
    sum += s.p()[x] * sandwiched_q(s.rhos()[x].matrix(), t, alpha);
  }
  return std::log(sum) / (alpha - 1.0);
}

double cond_var(const CQState& s) { return DownCurve(s).entropy_variance(); }
double mi_var(const CQState& s) { return DownCurve(s).information_variance(); }

}  // namespace qpa
