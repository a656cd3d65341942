#include "qpa/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpa/errors.hpp"
#include "qpa/random.hpp"

namespace qpa {

namespace {

using Vec = Eigen::VectorXd;

Matrix to_hermitian(const Vec& theta, Index d) {
  Matrix h = Matrix::Zero(d, d);
  Index k = 0;
  for (Index i = 0; i < d; ++i) h(i, i) = theta(k++);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      h(i, j) = Complex(theta(k), theta(k + 1));
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  }
  return h;
}

Vec from_hermitian(const Matrix& h) {
  const Index d = h.rows();
  Vec theta(d * d);
  Index k = 0;
  for (Index i = 0; i < d; ++i) theta(k++) = h(i, i).real();
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      theta(k++) = h(i, j).real();
      theta(k++) = h(i, j).imag();
    }
  }
  return theta;
}

// Gradient coordinates of Tr[gamma dH] in the theta chart.
Vec chart_gradient(const Matrix& gamma) {
  const Index d = gamma.rows();
  Vec g(d * d);
  Index k = 0;
  for (Index i = 0; i < d; ++i) g(k++) = gamma(i, i).real();
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      g(k++) = 2.0 * gamma(i, j).real();
      g(k++) = 2.0 * gamma(i, j).imag();
    }
  }
  return g;
}

struct Point {
  Vec theta;
  Matrix tau;
  double value = std::numeric_limits<double>::infinity();
  Vec grad;
  double residual = std::numeric_limits<double>::infinity();
  double noise = 0.0;
  bool finite = false;
};

Point evaluate(const Vec& theta, Index d, const DensityObjective& objective) {
  Point pt;
  pt.theta = theta;
  const SpectralDecomposition h = spectral(HermitianOperator::symmetrized(to_hermitian(theta, d)));
  const double shift = h.eigenvalues(0);
  SpectralDecomposition tau{RealVector(d), h.eigenvectors};
  for (Index i = 0; i < d; ++i) tau.eigenvalues(i) = std::exp(h.eigenvalues(i) - shift);
  const double z = tau.eigenvalues.sum();
  tau.eigenvalues /= z;
  pt.tau = tau.reconstruct();

  ObjectiveEval ev;
  try {
    ev = objective(tau);
  } catch (const DomainError&) {
    return pt;
  }
  if (!std::isfinite(ev.value) || !ev.gradient.allFinite()) return pt;

  SpectralDecomposition shifted{RealVector(h.eigenvalues.array() - shift), h.eigenvectors};
  const auto ex = [](double x) { return std::exp(x); };
  const Matrix gsym = 0.5 * (ev.gradient + ev.gradient.adjoint());
  const Complex inner = (gsym * pt.tau).trace();
  Matrix gamma = frechet_derivative(shifted, ex, ex, gsym) / z - inner.real() * pt.tau;
  gamma = 0.5 * (gamma + gamma.adjoint());

  pt.value = ev.value;
  pt.noise = std::max(8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(ev.value)),
                      ev.noise);
  pt.grad = chart_gradient(gamma);
  pt.residual = gamma.norm() / std::max(1.0, std::abs(ev.value));
  pt.finite = true;
  return pt;
}

Vec chart_of(const Matrix& tau) {
  const HermitianOperator t = HermitianOperator::symmetrized(tau);
  const SpectralDecomposition sd = spectral(t);
  const double floor = 1e-12;
  const Matrix h = sd.apply([&](double l) { return std::log(std::max(l, floor)); });
  return from_hermitian(h);
}

Matrix interior(const Matrix& m, double weight) {
  const Index d = m.rows();
  Matrix out = m / m.trace().real();
  return (1.0 - weight) * out + weight * Matrix::Identity(d, d) / static_cast<double>(d);
}

MinimizeResult bfgs(const Vec& theta0, Index d, const DensityObjective& objective, double tol,
                    int max_iters) {
  const Index n = theta0.size();
  Point cur = evaluate(theta0, d, objective);
  MinimizeResult out;
  if (!cur.finite) {
    out.minimizer = cur.tau;
    out.value = std::numeric_limits<double>::infinity();
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;
  int failures = 0;
  int it = 0;
  for (; it < max_iters && cur.residual > tol; ++it) {
    Vec dir = -hinv * cur.grad;
    double slope = cur.grad.dot(dir);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      dir = -cur.grad;
      slope = -cur.grad.squaredNorm();
      fresh = true;
    }
    const double big = dir.cwiseAbs().maxCoeff();
    if (big > 8.0) {
      dir *= 8.0 / big;
      slope *= 8.0 / big;
    }
    double t = 1.0;
    Point next;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      next = evaluate(cur.theta + t * dir, d, objective);
      if (!next.finite) continue;
      if (next.value <= cur.value + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      // Within rounding of the current value: accept if the gradient shrinks.
      if (next.value - cur.value <= std::max(cur.noise, next.noise) &&
          next.grad.norm() < cur.grad.norm()) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (fresh || ++failures > 2) break;
      hinv.setIdentity();
      fresh = true;
      continue;
    }
    const Vec s = next.theta - cur.theta;
    const Vec y = next.grad - cur.grad;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (fresh) {
        hinv *= sy / y.squaredNorm();
        fresh = false;
      }
      const double rho = 1.0 / sy;
      const Vec hy = hinv * y;
      hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
              rho * (hy * s.transpose() + s * hy.transpose());
    }
    cur = std::move(next);
  }
  out.minimizer = cur.tau;
  out.value = cur.value;
  out.residual = cur.residual;
  out.converged = cur.residual <= tol;
  out.iterations = it;
  return out;
}

bool better(const MinimizeResult& a, const MinimizeResult& b) {
  if (a.converged != b.converged) return a.converged;
  return a.value < b.value;
}

MinimizeResult grid_search_qubit(const DensityObjective& objective, double tol, int max_iters) {
  const auto value_at = [&](double x, double y, double z) {
    Matrix tau(2, 2);
    tau << Complex(1.0 + z, 0.0), Complex(x, -y), Complex(x, y), Complex(1.0 - z, 0.0);
    tau *= 0.5;
    try {
      const SpectralDecomposition sd = spectral(HermitianOperator::symmetrized(tau));
      return objective(sd).value;
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double best = std::numeric_limits<double>::infinity();
  double bx = 0.0, by = 0.0, bz = 0.0;
  const auto scan = [&](double cx, double cy, double cz, double half, double step) {
    const int k = static_cast<int>(std::round(half / step));
    for (int i = -k; i <= k; ++i) {
      for (int j = -k; j <= k; ++j) {
        for (int l = -k; l <= k; ++l) {
          const double x = cx + i * step, y = cy + j * step, z = cz + l * step;
          if (x * x + y * y + z * z > 0.995 * 0.995) continue;
          const double v = value_at(x, y, z);
          if (v < best) {
            best = v;
            bx = x;
            by = y;
            bz = z;
          }
        }
      }
    }
  };
  scan(0.0, 0.0, 0.0, 1.0, 0.05);
  scan(bx, by, bz, 0.05, 0.005);
  Matrix tau(2, 2);
  tau << Complex(1.0 + bz, 0.0), Complex(bx, -by), Complex(bx, by), Complex(1.0 - bz, 0.0);
  tau *= 0.5;
  MinimizeResult polished = bfgs(chart_of(tau), 2, objective, tol, max_iters);
  if (!(polished.value <= best)) {
    polished.minimizer = tau;
    polished.value = best;
  }
  return polished;
}

}  // namespace

MinimizeResult minimize_from(const Matrix& start, const DensityObjective& objective, double tol,
                             int max_iters) {
  return bfgs(chart_of(interior(start, 1e-9)), start.rows(), objective, tol, max_iters);
}

MinimizeResult minimize_sigma(Index dim, const DensityObjective& objective,
                              const MinimizeOptions& options) {
  if (dim < 1) throw ValidationError("minimize_sigma: dimension must be positive");
  if (dim > static_cast<Index>(kTolerances.minimizer_max_dim)) {
    std::ostringstream os;
    os << "minimize_sigma: dimension " << dim << " exceeds the limit "
       << kTolerances.minimizer_max_dim;
    throw ValidationError(os.str());
  }
  if (dim == 1) {
    MinimizeResult out;
    out.minimizer = Matrix::Ones(1, 1);
    SpectralDecomposition sd{RealVector::Ones(1), Matrix::Ones(1, 1)};
    out.value = objective(sd).value;
    out.converged = true;
    out.start_values = {out.value};
    return out;
  }

  if (options.warm_start) {
    MinimizeResult warm = minimize_from(*options.warm_start, objective, options.tol,
                                        options.max_iters);
    if (warm.converged) {
      warm.start_values = {warm.value};
      return warm;
    }
  }

  std::vector<Matrix> starts;
  const Matrix mixed = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  if (options.anchor) starts.push_back(interior(*options.anchor, 0.01));
  starts.push_back(mixed);
  RandomStream rng(options.seed);
  while (static_cast<int>(starts.size()) < std::max(options.starts, 1)) {
    starts.push_back(interior(random_density(dim, rng).matrix(), 0.5));
  }

  MinimizeResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.residual = std::numeric_limits<double>::infinity();
  best.minimizer = mixed;
  std::vector<double> values;
  for (const Matrix& s : starts) {
    MinimizeResult r = bfgs(chart_of(s), dim, objective, options.tol, options.max_iters);
    values.push_back(r.value);
    if (better(r, best) || values.size() == 1) best = std::move(r);
  }
  if (!best.converged && options.grid_fallback && dim == 2) {
    MinimizeResult g = grid_search_qubit(objective, options.tol, options.max_iters);
    if (better(g, best)) best = std::move(g);
  }
  best.start_values = std::move(values);
  if (!best.converged && options.throw_on_failure) {
    std::ostringstream os;
    os << "minimize_sigma: no start reached the stationarity tolerance " << options.tol
       << " (best residual " << best.residual << ")";
    throw ConvergenceError(os.str(), best.value, best.residual);
  }
  return best;
}

}  // namespace qpa
