// Acceptance suite. Each criterion prints exactly one [PASS]/[FAIL] line with
// its tolerance and wall time; the process exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qpa/errors.hpp"
#include "qpa/exponents.hpp"
#include "qpa/hashing.hpp"
#include "qpa/random.hpp"
#include "qpa/renyi.hpp"
#include "qpa/serialize.hpp"
#include "qpa/simulator.hpp"
#include "qpa/verifier.hpp"

namespace {

const double kLog2 = std::log(2.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::string tolerance;
  double time_budget;  // seconds; 0 when the criterion states none
  std::function<Outcome()> run;
};

std::filesystem::path fixture_dir() { return QPA_FIXTURE_DIR; }

qpa::CQState fixture(const std::string& name) {
  return qpa::cq_state_from_json(qpa::load_json_file(fixture_dir() / (name + ".json")));
}

qpa::CQState random_state(std::size_t alphabet, std::uint64_t seed) {
  qpa::RandomStream rng(seed);
  return qpa::random_cq_state(alphabet, 2, rng);
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome sandwich_suite() {
  int checks = 0, failures = 0;
  double worst_upper = -1.0, worst_lower = -1.0;  // exact - upper, lower - exact
  for (int i = 0; i < 50; ++i) {
    const std::size_t alphabet = i % 2 == 0 ? 2 : 4;
    const qpa::CQState s = random_state(alphabet, 1000 + static_cast<std::uint64_t>(i));
    qpa::ExponentEngine engine(s);
    for (unsigned v = 1; v <= s.bits(); ++v) {
      for (unsigned n : {1u, 2u}) {
        const auto r = qpa::sandwich_check(s, v, n, &engine);
        ++checks;
        failures += r.pass() ? 0 : 1;
        worst_upper = std::max(worst_upper, r.exact - r.upper);
        worst_lower = std::max(worst_lower, r.lower - r.exact);
      }
    }
  }
  std::ostringstream os;
  os << checks << " checks, " << failures << " violations; max(exact-upper)=" << worst_upper
     << ", max(lower-exact)=" << worst_lower;
  return {failures == 0 && worst_upper <= qpa::kSandwichSlack && worst_lower <= qpa::kSandwichSlack,
          os.str()};
}

Outcome fixture_values() {
  const double pu = qpa::exact_pa_distance(fixture("product-uniform-2bit"), qpa::GFContext(2), 1).value;
  const double cb = qpa::exact_pa_distance(fixture("correlated-bit"), qpa::GFContext(1), 1).value;
  std::ostringstream os;
  os.precision(17);
  os << "product-uniform=" << pu << ", correlated-bit=" << cb;
  return {std::abs(pu - 0.125) <= 1e-12 && std::abs(cb - 0.5) <= 1e-12, os.str()};
}

Outcome universality() {
  int tables = 0, bad_tables = 0, bad_fraction = 0;
  for (unsigned u = 1; u <= 4; ++u) {
    for (unsigned v = 1; v <= u; ++v) {
      const qpa::GFContext ctx(u);
      ++tables;
      bad_tables += qpa::universality_check(ctx, v).uniform() ? 0 : 1;
      std::uint64_t balanced = 0;
      const auto family = qpa::enumerate_family(ctx, v);
      for (const auto& h : family) balanced += qpa::is_balanced(h) ? 1 : 0;
      // balanced / 2^{2u} == 1 - 2^{-u}  <=>  balanced * 2^u == 2^{2u} (2^u - 1)
      if (balanced * (std::uint64_t{1} << u) != family.size() * ((std::uint64_t{1} << u) - 1)) {
        ++bad_fraction;
      }
    }
  }
  std::ostringstream os;
  os << tables << " (u,v) pairs; non-uniform tables " << bad_tables << ", wrong balanced fractions "
     << bad_fraction;
  return {bad_tables == 0 && bad_fraction == 0, os.str()};
}

Outcome lemma_battery() {
  const auto trace = qpa::check_trace_inequality(10000, {2, 3, 4, 5, 6}, 1);
  const auto conc = qpa::check_concavity(1000, 1);
  const auto hel = qpa::check_helstrom_attainment(1000, 1);
  std::ostringstream os;
  for (const auto* r : {&trace, &conc, &hel}) {
    os << r->name << " worst=" << r->worst_violation << "/" << r->slack;
    if (r->excluded > 0) os << " excluded=" << r->excluded;
    os << "; ";
  }
  os << trace.detail;
  return {trace.pass && conc.pass && hel.pass, os.str()};
}

Outcome derivatives() {
  const qpa::CQState quarter = fixture("classical-quarter");
  const auto centered = qpa::check_derivatives(quarter);
  const auto uncentered = qpa::check_derivatives(quarter, qpa::VarianceConvention::uncentered);
  bool ok = centered.pass && !uncentered.pass;
  double worst = centered.worst_violation;
  int random_failures = 0;
  for (int i = 0; i < 10; ++i) {
    const auto r = qpa::check_derivatives(random_state(2, 2000 + static_cast<std::uint64_t>(i)));
    worst = std::max(worst, r.worst_violation);
    random_failures += r.pass ? 0 : 1;
  }
  ok = ok && random_failures == 0;
  std::ostringstream os;
  os << "V(1/4,3/4)=" << qpa::cond_var(quarter) << ", worst centered error " << worst
     << ", random failures " << random_failures << "/10, uncentered error "
     << uncentered.worst_violation << (uncentered.pass ? " (unexpectedly passes)" : " (fails as required)");
  return {ok, os.str()};
}

Outcome threshold_dichotomy() {
  const double dead_band = 1e-8;
  int cases = 0, disagreements = 0;
  std::string first;
  const auto record = [&](bool expected, double exponent, const char* what, int state, double delta) {
    ++cases;
    if ((exponent > dead_band) != expected) {
      ++disagreements;
      if (first.empty()) {
        std::ostringstream os;
        os << " first: state " << state << " " << what << " delta " << delta << " exponent " << exponent;
        first = os.str();
      }
    }
  };
  for (int i = 0; i < 200; ++i) {
    const std::size_t alphabet = i % 2 == 0 ? 2 : 4;
    qpa::ExponentEngine eng(random_state(alphabet, 3000 + static_cast<std::uint64_t>(i)));
    const double h = eng.entropy_vn();
    const double info = eng.information_vn();
    for (double delta : {-0.2, -0.05, 0.05, 0.2}) {
      record(delta > 0, eng.pa_converse(h + delta).exponent, "pa_conv", i, delta);
      record(delta < 0, eng.pa_achievability(h + delta).exponent, "pa_ach", i, delta);
      if (info + delta >= 0.0) {
        record(delta > 0, eng.wiretap_secrecy(info + delta).exponent, "wt_secrecy", i, delta);
        record(delta < 0, eng.wiretap_converse(info + delta).exponent, "wt_conv", i, delta);
      }
    }
  }
  std::ostringstream os;
  os << cases << " cases, " << disagreements << " disagreements" << first;
  return {disagreements == 0, os.str()};
}

Outcome additivity_and_limits() {
  std::vector<qpa::CQState> states{fixture("uniform-bit"), fixture("correlated-bit"),
                                   fixture("classical-quarter"), fixture("random-qubit-e")};
  for (int i = 0; i < 6; ++i) {
    states.push_back(random_state(i % 2 == 0 ? 2 : 4, 4000 + static_cast<std::uint64_t>(i)));
  }
  double worst_add = 0.0, worst_limit = 0.0;
  for (const auto& s : states) {
    const qpa::DownCurve one(s);
    const qpa::DownCurve two(qpa::iid_extend(s, 2));
    for (double a : {0.5, 0.75, 1.5, 2.0}) {
      worst_add = std::max(worst_add, std::abs(two.entropy(a) - 2 * one.entropy(a)));
      worst_add = std::max(worst_add, std::abs(two.information(a) - 2 * one.information(a)));
    }
    const double h = one.entropy_vn(), info = one.information_vn();
    for (double a : {1.0 - 1e-4, 1.0 + 1e-4}) {
      for (auto k : {qpa::EntropyKind::down, qpa::EntropyKind::star, qpa::EntropyKind::down_star}) {
        worst_limit = std::max(worst_limit, std::abs(qpa::conditional_entropy(k, s, a) - h));
      }
      for (auto k : {qpa::EntropyKind::down, qpa::EntropyKind::star}) {
        worst_limit = std::max(worst_limit, std::abs(qpa::mutual_information(k, s, a) - info));
      }
    }
  }
  std::ostringstream os;
  os << states.size() << " states; worst doubling error " << worst_add << ", worst limit error "
     << worst_limit;
  return {worst_add <= 1e-9 && worst_limit <= 1e-3, os.str()};
}

Outcome moderate() {
  const auto t = qpa::moderate_table(fixture("classical-quarter"), qpa::ModerateKind::pa_conv,
                                     {0.3, {100, 1000, 10000, 100000, 1000000}});
  const auto& last = t.rows.back();
  const double rel = std::abs(last.normalized_exponent - t.limit) / t.limit;
  std::ostringstream os;
  os << "n=1e6 normalized exponent " << last.normalized_exponent << " vs 1/(2V)=" << t.limit
     << " (relative gap " << rel << ")";
  return {last.n == 1000000 && rel <= 0.15, os.str()};
}

Outcome ea_formulas() {
  const double value = qpa::ea_converse_bound({0.0, 2.5, 0.1, 0.5, 1000});
  const double expected = 1.0 - 40.0 * std::exp(-20.0);
  const double rel = std::abs(value - expected) / expected;
  int wrong = 0;
  const auto rejects = [&](const std::function<void()>& f, bool should) {
    bool threw = false;
    try {
      f();
    } catch (const qpa::DomainError&) {
      threw = true;
    }
    wrong += threw == should ? 0 : 1;
  };
  const double v = 2.5, f = 1.0;
  rejects([&] { qpa::ea_converse_bound({f, v, 0.5, f, 10}); }, true);          // R - f = 0
  rejects([&] { qpa::ea_converse_bound({f, v, 0.5, f + v, 10}); }, true);      // R - f = V
  rejects([&] { qpa::ea_converse_bound({f, v, 0.5, std::nextafter(f, 9.0), 10}); }, false);
  rejects([&] { qpa::ea_converse_bound({f, v, 0.5, std::nextafter(f + v, 0.0), 10}); }, false);
  rejects([&] { qpa::ea_achievability_bound({f, v, 0.5, f, 10}); }, true);     // f - R = 0
  rejects([&] { qpa::ea_achievability_bound({3.125, v, 0.5, 0.0, 10}); }, false);  // f - R = V^2/2
  rejects([&] { qpa::ea_achievability_bound({std::nextafter(3.125, 9.0), v, 0.5, 0.0, 10}); }, true);
  rejects([&] { qpa::ea_achievability_bound({f, v, 0.5, std::nextafter(f, 0.0), 10}); }, false);
  std::ostringstream os;
  os.precision(17);
  os << "bound " << value << " vs 1-40e^-20 " << expected << " (relative " << rel << "); "
     << wrong << "/8 window decisions wrong";
  return {rel <= 1e-12 && wrong == 0, os.str()};
}

Outcome wiretap_tiny() {
  const std::vector<qpa::DensityOperator> eve{qpa::DensityOperator::diagonal({1.0, 0.0}),
                                              qpa::DensityOperator::diagonal({0.0, 1.0})};
  const double log_l = kLog2;  // L = 2
  int violations = 0, upper_checked = 0, lower_checked = 0;
  std::ostringstream os;
  for (const std::vector<double>& p :
       {std::vector<double>{0.5, 0.5}, std::vector<double>{0.8, 0.2}, std::vector<double>{0.95, 0.05}}) {
    const auto d1 = qpa::wiretap_d1(eve, p, 1, 1, qpa::WiretapMode::exact);
    qpa::ExponentEngine eng(qpa::CQState(p, eve));
    const double e_ach = eng.wiretap_secrecy(log_l).exponent;
    const double e_conv = eng.wiretap_converse(log_l).exponent;
    const double upper = 2.0 * std::exp(-e_ach);
    const double lower = 1.0 - 5.0 * std::exp(-e_conv);
    if (e_ach > 0.0) {
      ++upper_checked;
      if (d1.value > upper + 1e-9 || d1.pessimistic > upper + 1e-9) ++violations;
    }
    if (e_conv > 0.0) {
      ++lower_checked;
      if (d1.value < lower - 1e-9) ++violations;
    }
    os << "p0=" << p[0] << ": d1=" << d1.value << " (pessimistic " << d1.pessimistic << "), E_ach=" << e_ach
       << ", E_conv=" << e_conv << "; ";
  }
  os << upper_checked << " upper and " << lower_checked << " lower comparisons, " << violations
     << " violations";
  return {violations == 0, os.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "sandwich suite", "slack 1e-9", 60, sandwich_suite},
      {2, "exact fixture values", "abs 1e-12", 0, fixture_values},
      {3, "strong 2-universality and balance", "integer-exact", 0, universality},
      {4, "lemma battery", "zero violations at stated slacks", 120, lemma_battery},
      {5, "derivative identities", "1e-4", 0, derivatives},
      {6, "threshold dichotomy", "100% agreement, dead-band 1e-8", 0, threshold_dichotomy},
      {7, "additivity and alpha->1 limits", "1e-9 / 1e-3", 0, additivity_and_limits},
      {8, "moderate-deviation convergence", "15% of 1/(2V)", 10, moderate},
      {9, "entropy-accumulation formulas", "1e-12 relative, exact windows", 0, ea_formulas},
      {10, "wiretap tiny-instance sandwich", "slack 1e-9", 30, wiretap_tiny},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.time_budget > 0) {
      timing += fmt(" (budget %.0f s)", c.time_budget);
      if (secs > c.time_budget) {
        out.pass = false;
        timing += " over budget";
      }
    }
    failed += out.pass ? 0 : 1;
    std::printf("[%s] %2d %s | tol %s | %s | %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.tolerance.c_str(), timing.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
