#include "qpa/verifier.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <cmath>
#include <sstream>

#include "qpa/errors.hpp"
#include "qpa/random.hpp"
#include "qpa/renyi.hpp"

namespace qpa {

namespace {

double violation(double lhs, double rhs) { return (lhs - rhs) / std::max(1.0, std::abs(rhs)); }

CheckReport make_report(std::string name, std::uint64_t trials, double slack, std::uint64_t seed) {
  CheckReport r;
  r.name = std::move(name);
  r.trials = trials;
  r.slack = slack;
  r.seed = seed;
  r.worst_violation = -std::numeric_limits<double>::infinity();
  return r;
}

void finalize(CheckReport& r) {
  if (!std::isfinite(r.worst_violation) && r.worst_violation < 0) r.worst_violation = 0.0;
  r.pass = r.pass && r.worst_violation <= r.slack;
}

}  // namespace

CheckReport check_trace_inequality(std::uint64_t trials, const std::vector<Index>& dims,
                                   std::uint64_t seed) {
  if (dims.empty()) throw ValidationError("check_trace_inequality: no dimensions given");
  for (Index d : dims) {
    if (d < 2 || d > 8) throw ValidationError("check_trace_inequality: dims must lie in [2, 8]");
  }
  CheckReport r = make_report("trace_inequality", trials, 1e-9, seed);
  RandomStream rng(seed);
  std::uint64_t reverse_failures = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Index d = dims[t % dims.size()];
    const double ck = 0.2 + 1.8 * rng.uniform();
    const double cl = 0.2 + 1.8 * rng.uniform();
    const HermitianOperator k = random_density(d, rng).base() * ck;
    const HermitianOperator l = random_density(d, rng).base() * cl;
    const double s = rng.uniform();

    const Matrix root = mat_power(k + l, -0.5).matrix();
    const double lhs = (k.matrix() * root * l.matrix() * root).trace().real();
    const double mid = 0.5 * ((k + l).trace() - abs_op(k - l).trace());
    const double rhs = (mat_power(k, 1.0 - s).matrix() * mat_power(l, s).matrix()).trace().real();

    r.worst_violation = std::max({r.worst_violation, violation(lhs, mid), violation(mid, rhs),
                                  violation(lhs, rhs)});
    if (violation(rhs, lhs) > r.slack) ++reverse_failures;
  }
  const double fraction =
      trials == 0 ? 0.0 : static_cast<double>(reverse_failures) / static_cast<double>(trials);
  std::ostringstream os;
  os << "reverse inequality failed in " << reverse_failures << " of " << trials << " trials";
  r.detail = os.str();
  if (fraction < 0.01) r.pass = false;
  finalize(r);
  return r;
}

CheckReport check_concavity(std::uint64_t trials, std::uint64_t seed) {
  CheckReport r = make_report("concavity", trials, 1e-7, seed);
  constexpr std::array<double, 3> kAlphas{1.3, 1.7, 2.0};
  constexpr std::array<double, 3> kLambdas{0.25, 0.5, 0.75};
  RandomStream rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 3);
    const double alpha = kAlphas[t % kAlphas.size()];
    const double lambda = kLambdas[(t / kAlphas.size()) % kLambdas.size()];
    std::vector<DensityOperator> rhos;
    for (std::size_t x = 0; x < k; ++x) rhos.push_back(random_density(2, rng));
    const std::vector<double> p = random_probability(k, rng);
    const std::vector<double> q = random_probability(k, rng);
    std::vector<double> mix(k);
    for (std::size_t x = 0; x < k; ++x) mix[x] = lambda * p[x] + (1.0 - lambda) * q[x];
    const double c = (alpha - 1.0) / alpha;
    try {
      const auto value = [&](const std::vector<double>& prior) {
        return std::exp(c * mutual_information(EntropyKind::star, CQState(prior, rhos), alpha));
      };
      const double fp = value(p);
      const double fq = value(q);
      const double fm = value(mix);
      r.worst_violation = std::max(r.worst_violation, violation(lambda * fp + (1.0 - lambda) * fq, fm));
    } catch (const ConvergenceError&) {
      ++r.excluded;
    }
  }
  if (trials > 0 && static_cast<double>(r.excluded) > 0.01 * static_cast<double>(trials)) {
    r.pass = false;
  }
  std::ostringstream os;
  os << r.excluded << " trials excluded on minimizer failure";
  r.detail = os.str();
  finalize(r);
  return r;
}

CheckReport check_derivatives(const CQState& s, VarianceConvention convention) {
  CheckReport r = make_report(
      convention == VarianceConvention::centered ? "derivatives" : "derivatives_uncentered", 4,
      1e-4, 0);
  const DownCurve curve(s);
  const bool centered = convention == VarianceConvention::centered;
  const double v_cond = centered ? curve.entropy_variance() : curve.entropy_second_moment();
  const double v_mi = centered ? curve.information_variance() : curve.information_second_moment();

  const auto slope = [](const std::function<double(double)>& f) {
    const auto central = [&](double h) { return (f(1.0 + h) - f(1.0 - h)) / (2.0 * h); };
    return (100.0 * central(1e-3) - central(1e-2)) / 99.0;
  };
  struct Item {
    const char* name;
    double numeric;
    double analytic;
  };
  const std::array<Item, 4> items{{
      {"H*", slope([&](double a) { return conditional_entropy(EntropyKind::star, s, a); }),
       -0.5 * v_cond},
      {"I*", slope([&](double a) { return mutual_information(EntropyKind::star, s, a); }),
       0.5 * v_mi},
      {"H_down(2-1/a)", slope([&](double a) { return curve.entropy(2.0 - 1.0 / a); }),
       -0.5 * v_cond},
      {"I_down(2-1/a)", slope([&](double a) { return curve.information(2.0 - 1.0 / a); }),
       0.5 * v_mi},
  }};
  std::ostringstream os;
  os.precision(10);
  for (const Item& it : items) {
    const double err = std::abs(it.numeric - it.analytic) / std::max(1.0, std::abs(it.analytic));
    r.worst_violation = std::max(r.worst_violation, err);
    os << it.name << ": numeric " << it.numeric << " analytic " << it.analytic << "; ";
  }
  r.detail = os.str();
  finalize(r);
  return r;
}

CheckReport check_monotone_and_limits(const CQState& s) {
  CheckReport r = make_report("monotone_and_limits", 0, 1.0, 0);
  constexpr std::array<double, 11> kGrid{0.55, 0.6, 0.7, 0.8, 0.9, 0.95, 1.05, 1.2, 1.5, 2.0, 3.0};
  const DensityOperator rho_xe(HermitianOperator::symmetrized(s.to_dense()));
  const Matrix rho_e = marginal_E(s).matrix();
  const Index nx = static_cast<Index>(s.alphabet_size());
  Matrix px = Matrix::Zero(nx, nx);
  for (Index x = 0; x < nx; ++x) px(x, x) = s.p()[static_cast<std::size_t>(x)];
  const std::array<HermitianOperator, 2> sigmas{
      HermitianOperator::symmetrized(tensor(Matrix::Identity(nx, nx), rho_e)),
      HermitianOperator::symmetrized(tensor(px, rho_e))};
  double worst = 0.0;
  std::uint64_t evaluations = 0;
  for (const HermitianOperator& sigma : sigmas) {
    for (DivergenceKind kind : {DivergenceKind::petz, DivergenceKind::sandwiched}) {
      double prev = divergence(kind, rho_xe, sigma, kGrid[0]);
      for (std::size_t i = 1; i < kGrid.size(); ++i) {
        const double cur = divergence(kind, rho_xe, sigma, kGrid[i]);
        worst = std::max(worst, violation(prev, cur) / 1e-9);
        prev = cur;
        ++evaluations;
      }
    }
  }
  const DownCurve curve(s);
  const double h = curve.entropy_vn();
  const double i = curve.information_vn();
  for (double a : {1.0 - 1e-4, 1.0 + 1e-4}) {
    for (EntropyKind kind : {EntropyKind::down, EntropyKind::star, EntropyKind::down_star}) {
      worst = std::max(worst, std::abs(conditional_entropy(kind, s, a) - h) / 1e-3);
      worst = std::max(worst, std::abs(mutual_information(kind, s, a) - i) / 1e-3);
      evaluations += 2;
    }
  }
  r.trials = evaluations;
  r.worst_violation = worst;
  r.detail = "violation in units of the per-quantity tolerance (1e-9 monotone, 1e-3 limits)";
  finalize(r);
  return r;
}

CheckReport check_additivity(const CQState& s, const std::vector<double>& alphas) {
  CheckReport r = make_report("additivity", alphas.size(), 1e-9, 0);
  const DownCurve one(s);
  const DownCurve two(iid_extend(s, 2));
  for (double a : alphas) {
    const double h2 = 2.0 * one.entropy(a);
    const double i2 = 2.0 * one.information(a);
    r.worst_violation = std::max({r.worst_violation, std::abs(violation(two.entropy(a), h2)),
                                  std::abs(violation(two.information(a), i2))});
  }
  finalize(r);
  return r;
}

CheckReport check_helstrom_attainment(std::uint64_t trials, std::uint64_t seed) {
  CheckReport r = make_report("helstrom_attainment", trials, 1e-9, seed);
  RandomStream rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Index d = 2 + static_cast<Index>(t % 3);
    const DensityOperator r0 = random_density(d, rng);
    const DensityOperator r1 = t == 0 ? r0 : random_density(d, rng);
    const HermitianOperator diff = r0.base() - r1.base();
    const SpectralDecomposition sd = spectral(diff);
    const Matrix pi0 = sd.apply([](double l) { return l >= 0.0 ? 1.0 : 0.0; });
    const double lhs = (pi0 * diff.matrix()).trace().real();
    const double rhs = trace_distance(r0.base(), r1.base());
    r.worst_violation = std::max(r.worst_violation, std::abs(violation(lhs, rhs)));
  }
  finalize(r);
  return r;
}

std::vector<CheckReport> run_battery(const std::vector<CQState>& states,
                                     const BatteryOptions& options) {
  std::vector<CheckReport> out;
  out.push_back(check_trace_inequality(options.trace_trials, {2, 3, 4, 5, 6}, options.seed));
  out.push_back(check_concavity(options.concavity_trials, options.seed));
  out.push_back(check_helstrom_attainment(options.helstrom_trials, options.seed));
  for (const CQState& s : states) {
    out.push_back(check_derivatives(s));
    out.push_back(check_monotone_and_limits(s));
    const double size = static_cast<double>(s.alphabet_size()) * static_cast<double>(s.dim_e());
    if (size * size <= static_cast<double>(kTolerances.iid_size_limit)) {
      out.push_back(check_additivity(s, {0.5, 0.75, 1.5, 2.0}));
    }
  }
  return out;
}

}  // namespace qpa
