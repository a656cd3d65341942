#include "qpa/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpa/errors.hpp"

namespace qpa {

SupResult sup_alpha(const std::function<double(double)>& objective, double lo, double hi) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError("sup_alpha: interval must satisfy lo <= hi");
  }
  const int points = static_cast<int>(kTolerances.alpha_grid_points);
  const auto grid = [&](int i) {
    if (i == points - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  };
  SupResult best{lo, -std::numeric_limits<double>::infinity()};
  int best_i = 0;
  for (int i = 0; i < points; ++i) {
    const double a = grid(i);
    const double v = objective(a);
    if (v > best.value) {
      best = {a, v};
      best_i = i;
    }
  }
  double a = grid(std::max(best_i - 1, 0));
  double b = grid(std::min(best_i + 1, points - 1));
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > kTolerances.alpha_refine_width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = objective(d);
    }
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::pa_converse:
      return "pa_converse";
    case BoundKind::pa_achievability:
      return "pa_achievability";
    case BoundKind::wiretap_secrecy:
      return "wiretap_secrecy";
    case BoundKind::wiretap_converse:
      return "wiretap_converse";
    case BoundKind::wiretap_error:
      return "wiretap_error";
  }
  return "?";
}

namespace {

double bound_constant(BoundKind kind) {
  switch (kind) {
    case BoundKind::pa_converse:
      return 4.0;
    case BoundKind::pa_achievability:
      return 1.0;
    case BoundKind::wiretap_secrecy:
      return 2.0;
    case BoundKind::wiretap_converse:
      return 5.0;
    case BoundKind::wiretap_error:
      return 4.0;
  }
  return 1.0;
}

bool is_lower_bound(BoundKind kind) {
  return kind == BoundKind::pa_converse || kind == BoundKind::wiretap_converse;
}

bool near_one(double alpha) { return std::abs(alpha - 1.0) < kTolerances.alpha_one_band; }

}  // namespace

double log_bound_term(BoundKind kind, double exponent, std::uint64_t n) {
  return std::log(bound_constant(kind)) - static_cast<double>(n) * exponent;
}

double raw_bound(BoundKind kind, double exponent, std::uint64_t n) {
  const double term = std::exp(log_bound_term(kind, exponent, n));
  return is_lower_bound(kind) ? 1.0 - term : term;
}

double clamped_bound(BoundKind kind, double exponent, std::uint64_t n) {
  return std::clamp(raw_bound(kind, exponent, n), 0.0, 1.0);
}

// ExponentEngine ----------------------------------------------------------------------

struct ExponentEngine::Impl {
  struct Cached {
    double value;
    Matrix sigma;
  };

  Impl(CQState st, MinimizeOptions opts)
      : s(std::move(st)), options(std::move(opts)), down(s), h_vn(down.entropy_vn()),
        i_vn(down.information_vn()) {}

  double star(double alpha, bool conditional) {
    if (near_one(alpha)) return conditional ? h_vn : i_vn;
    std::map<double, Cached>& cache = conditional ? h_cache : i_cache;
    const auto hit = cache.find(alpha);
    if (hit != cache.end()) return hit->second.value;
    MinimizeOptions opts = options;
    if (!cache.empty()) {
      auto it = cache.lower_bound(alpha);
      if (it == cache.end()) {
        --it;
      } else if (it != cache.begin()) {
        auto prev = std::prev(it);
        if (alpha - prev->first < it->first - alpha) it = prev;
      }
      opts.warm_start = it->second.sigma;
    }
    const StarResult r = conditional ? conditional_entropy_star(s, alpha, opts)
                                     : mutual_information_star(s, alpha, opts);
    cache.emplace(alpha, Cached{r.value, r.sigma});
    return r.value;
  }

  ExponentReport finish(BoundKind kind, double rate, double threshold, const SupResult& sup,
                        const std::vector<std::uint64_t>& ns) const {
    ExponentReport rep;
    rep.kind = kind;
    rep.rate = rate;
    rep.raw_sup = sup.value;
    rep.exponent = std::max(0.0, sup.value);
    rep.alpha_star = sup.alpha_star;
    rep.threshold = threshold;
    for (std::uint64_t n : ns) {
      rep.raw_bounds[n] = raw_bound(kind, rep.exponent, n);
      rep.bounds[n] = clamped_bound(kind, rep.exponent, n);
    }
    return rep;
  }

  CQState s;
  MinimizeOptions options;
  DownCurve down;
  double h_vn;
  double i_vn;
  std::map<double, Cached> h_cache;
  std::map<double, Cached> i_cache;
};

ExponentEngine::ExponentEngine(CQState s, MinimizeOptions options)
    : impl_(std::make_unique<Impl>(std::move(s), std::move(options))) {}
ExponentEngine::~ExponentEngine() = default;
ExponentEngine::ExponentEngine(ExponentEngine&&) noexcept = default;
ExponentEngine& ExponentEngine::operator=(ExponentEngine&&) noexcept = default;

const CQState& ExponentEngine::state() const { return impl_->s; }
double ExponentEngine::entropy_vn() const { return impl_->h_vn; }
double ExponentEngine::information_vn() const { return impl_->i_vn; }
double ExponentEngine::h_star(double alpha) { return impl_->star(alpha, true); }
double ExponentEngine::i_star(double alpha) { return impl_->star(alpha, false); }
double ExponentEngine::h_down(double beta) const { return impl_->down.entropy(beta); }
double ExponentEngine::i_down(double beta) const { return impl_->down.information(beta); }

namespace {

void require_rate(double rate, const char* what, bool non_negative) {
  if (!std::isfinite(rate) || (non_negative && rate < 0.0)) {
    std::ostringstream os;
    os << what << ": rate " << rate << (non_negative ? " must be finite and >= 0" : " must be finite");
    throw ValidationError(os.str());
  }
}

}  // namespace

ExponentReport ExponentEngine::pa_converse(double rate, const std::vector<std::uint64_t>& ns) {
  require_rate(rate, "pa_converse_exponent", false);
  const DownCurve& down = impl_->down;
  const SupResult sup = sup_alpha(
      [&](double a) {
        if (a >= 1.0) return 0.0;
        return ((1.0 - a) / a) * (rate - down.entropy(2.0 - 1.0 / a));
      },
      0.5, 1.0);
  return impl_->finish(BoundKind::pa_converse, rate, impl_->h_vn, sup, ns);
}

ExponentReport ExponentEngine::pa_achievability(double rate,
                                                const std::vector<std::uint64_t>& ns) {
  require_rate(rate, "pa_achievability_exponent", false);
  const SupResult sup = sup_alpha(
      [&](double a) {
        if (a <= 1.0) return 0.0;
        return ((a - 1.0) / a) * (impl_->star(a, true) - rate);
      },
      1.0, 2.0);
  return impl_->finish(BoundKind::pa_achievability, rate, impl_->h_vn, sup, ns);
}

ExponentReport ExponentEngine::wiretap_secrecy(double log_l, const std::vector<std::uint64_t>& ns) {
  require_rate(log_l, "wiretap_secrecy_exponent", true);
  const SupResult sup = sup_alpha(
      [&](double a) {
        if (a <= 1.0) return 0.0;
        return ((a - 1.0) / a) * (log_l - impl_->star(a, false));
      },
      1.0, 2.0);
  return impl_->finish(BoundKind::wiretap_secrecy, log_l, impl_->i_vn, sup, ns);
}

ExponentReport ExponentEngine::wiretap_converse(double log_l,
                                                const std::vector<std::uint64_t>& ns) {
  require_rate(log_l, "wiretap_converse_exponent", true);
  const DownCurve& down = impl_->down;
  const SupResult sup = sup_alpha(
      [&](double a) {
        if (a >= 1.0) return 0.0;
        return ((1.0 - a) / a) * (down.information(2.0 - 1.0 / a) - log_l);
      },
      0.5, 1.0);
  return impl_->finish(BoundKind::wiretap_converse, log_l, impl_->i_vn, sup, ns);
}

ExponentReport ExponentEngine::wiretap_error(double log_ml, const std::vector<std::uint64_t>& ns) {
  require_rate(log_ml, "wiretap_error_exponent", true);
  const DownCurve& down = impl_->down;
  const SupResult sup = sup_alpha(
      [&](double a) {
        if (a >= 1.0) return 0.0;
        return ((1.0 - a) / a) * (down.information(2.0 - 1.0 / a) - log_ml);
      },
      0.5, 1.0);
  return impl_->finish(BoundKind::wiretap_error, log_ml, impl_->i_vn, sup, ns);
}

ExponentReport pa_converse_exponent(const CQState& s, double rate,
                                    const std::vector<std::uint64_t>& ns) {
  return ExponentEngine(s).pa_converse(rate, ns);
}

ExponentReport pa_achievability_exponent(const CQState& s, double rate,
                                         const std::vector<std::uint64_t>& ns) {
  return ExponentEngine(s).pa_achievability(rate, ns);
}

ExponentReport wiretap_secrecy_exponent(const CQState& sigma_xe, double log_l,
                                        const std::vector<std::uint64_t>& ns) {
  return ExponentEngine(sigma_xe).wiretap_secrecy(log_l, ns);
}

ExponentReport wiretap_converse_exponent(const CQState& sigma_xe, double log_l,
                                         const std::vector<std::uint64_t>& ns) {
  return ExponentEngine(sigma_xe).wiretap_converse(log_l, ns);
}

ExponentReport wiretap_error_exponent(const CQState& sigma_xb, double log_ml,
                                      const std::vector<std::uint64_t>& ns) {
  return ExponentEngine(sigma_xb).wiretap_error(log_ml, ns);
}

// Entropy accumulation -------------------------------------------------------------------

namespace {

void validate_ea(const EAParams& p) {
  if (!std::isfinite(p.f_w) || !std::isfinite(p.R) || !std::isfinite(p.V)) {
    throw ValidationError("EAParams: f_w, V and R must be finite");
  }
  if (!(p.V > 2.0)) {
    std::ostringstream os;
    os << "EAParams: V=" << p.V << " must exceed 2";
    throw ValidationError(os.str());
  }
  if (!(p.prob_w > 0.0 && p.prob_w <= 1.0)) {
    std::ostringstream os;
    os << "EAParams: prob_w=" << p.prob_w << " must lie in (0, 1]";
    throw ValidationError(os.str());
  }
}

double ea_log_decay(const EAParams& p) {
  const double z = (p.R - p.f_w) / p.V;
  return -0.5 * static_cast<double>(p.n) * z * z;
}

}  // namespace

double ea_converse_bound(const EAParams& p) {
  validate_ea(p);
  const double gap = p.R - p.f_w;
  if (!(gap > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "ea_converse_bound: requires 0 < R - f(w), got R - f(w) = " << gap;
    throw DomainError(os.str());
  }
  if (!(gap < p.V)) {
    std::ostringstream os;
    os.precision(17);
    os << "ea_converse_bound: requires R - f(w) < V, got " << gap << " >= " << p.V;
    throw DomainError(os.str());
  }
  return 1.0 - std::exp(std::log(4.0 / p.prob_w) + ea_log_decay(p));
}

double ea_achievability_bound(const EAParams& p) {
  validate_ea(p);
  const double gap = p.f_w - p.R;
  if (!(gap > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "ea_achievability_bound: requires 0 < f(w) - R, got f(w) - R = " << gap;
    throw DomainError(os.str());
  }
  if (!(gap <= 0.5 * p.V * p.V)) {
    std::ostringstream os;
    os.precision(17);
    os << "ea_achievability_bound: requires f(w) - R <= V^2/2, got " << gap << " > "
       << 0.5 * p.V * p.V;
    throw DomainError(os.str());
  }
  return std::exp(-std::log(p.prob_w) + ea_log_decay(p));
}

// Moderate deviations -------------------------------------------------------------------------

const char* to_string(ModerateKind kind) {
  switch (kind) {
    case ModerateKind::pa_ach:
      return "pa_ach";
    case ModerateKind::pa_conv:
      return "pa_conv";
    case ModerateKind::wt_ach:
      return "wt_ach";
    case ModerateKind::wt_conv:
      return "wt_conv";
  }
  return "?";
}

namespace {

void validate_schedule(const ModerateSchedule& sched) {
  if (!(sched.exponent_t > 0.0 && sched.exponent_t < 0.5)) {
    std::ostringstream os;
    os << "ModerateSchedule: t=" << sched.exponent_t << " must lie in (0, 1/2)";
    throw ValidationError(os.str());
  }
  std::uint64_t prev = 0;
  for (std::uint64_t n : sched.n_list) {
    if (n <= prev) throw ValidationError("ModerateSchedule: n_list must be increasing and positive");
    prev = n;
  }
}

double a_of(const ModerateSchedule& sched, std::uint64_t n) {
  return std::pow(static_cast<double>(n), -sched.exponent_t);
}

}  // namespace

ModerateTable moderate_table(const CQState& s, ModerateKind kind, const ModerateSchedule& sched) {
  validate_schedule(sched);
  const bool pa = kind == ModerateKind::pa_ach || kind == ModerateKind::pa_conv;
  const DownCurve curve(s);
  ModerateTable table;
  table.kind = kind;
  table.variance = pa ? curve.entropy_variance() : curve.information_variance();
  table.threshold = pa ? curve.entropy_vn() : curve.information_vn();
  if (!(table.variance >= 1e-12)) {
    std::ostringstream os;
    os << "moderate_table: " << (pa ? "V(X|E)" : "V(X:E)") << " = " << table.variance
       << " vanishes; moderate deviations need a positive variance";
    throw DomainError(os.str());
  }
  table.limit = 1.0 / (2.0 * table.variance);

  ExponentEngine engine(s);
  for (std::uint64_t n : sched.n_list) {
    ModerateRow row;
    row.n = n;
    row.a_n = a_of(sched, n);
    BoundKind bk = BoundKind::pa_converse;
    switch (kind) {
      case ModerateKind::pa_conv:
        row.rate = table.threshold + row.a_n;
        bk = BoundKind::pa_converse;
        break;
      case ModerateKind::pa_ach:
        row.rate = table.threshold - row.a_n;
        bk = BoundKind::pa_achievability;
        break;
      case ModerateKind::wt_ach:
        row.rate = table.threshold + row.a_n;
        bk = BoundKind::wiretap_secrecy;
        break;
      case ModerateKind::wt_conv:
        row.rate = table.threshold - row.a_n;
        bk = BoundKind::wiretap_converse;
        break;
    }
    if (!pa && row.rate < 0.0) {
      row.in_window = false;
      row.exponent = row.bound = row.log_term = row.normalized_exponent =
          std::numeric_limits<double>::quiet_NaN();
      table.rows.push_back(row);
      continue;
    }
    ExponentReport rep;
    switch (kind) {
      case ModerateKind::pa_conv:
        rep = engine.pa_converse(row.rate);
        break;
      case ModerateKind::pa_ach:
        rep = engine.pa_achievability(row.rate);
        break;
      case ModerateKind::wt_ach:
        rep = engine.wiretap_secrecy(row.rate);
        break;
      case ModerateKind::wt_conv:
        rep = engine.wiretap_converse(row.rate);
        break;
    }
    row.exponent = rep.exponent;
    row.bound = clamped_bound(bk, rep.exponent, n);
    row.log_term = log_bound_term(bk, rep.exponent, n);
    row.normalized_exponent = -row.log_term / (static_cast<double>(n) * row.a_n * row.a_n);
    table.rows.push_back(row);
  }
  return table;
}

ModerateEATable moderate_ea_table(const EAParams& params, EASide side,
                                  const ModerateSchedule& sched) {
  validate_schedule(sched);
  validate_ea(params);
  ModerateEATable table;
  table.side = side;
  table.limit = 1.0 / (2.0 * params.V * params.V);
  for (std::uint64_t n : sched.n_list) {
    ModerateEARow row;
    row.n = n;
    row.a_n = a_of(sched, n);
    EAParams p = params;
    p.n = n;
    p.R = side == EASide::converse ? params.f_w + row.a_n : params.f_w - row.a_n;
    row.rate = p.R;
    const double na2 = static_cast<double>(n) * row.a_n * row.a_n;
    const double decay = -ea_log_decay(p);
    try {
      row.raw_bound = side == EASide::converse ? ea_converse_bound(p) : ea_achievability_bound(p);
    } catch (const DomainError&) {
      row.in_window = false;
      row.raw_bound = std::numeric_limits<double>::quiet_NaN();
    }
    const double log_c = side == EASide::converse ? std::log(4.0 / p.prob_w) : -std::log(p.prob_w);
    row.exponent_part = decay / na2;
    row.normalized_exponent = row.in_window ? (decay - log_c) / na2
                                            : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace qpa
