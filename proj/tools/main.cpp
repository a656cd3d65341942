#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "output.hpp"
#include "qpa/errors.hpp"
#include "qpa/exponents.hpp"
#include "qpa/renyi.hpp"
#include "qpa/serialize.hpp"
#include "qpa/simulator.hpp"
#include "qpa/verifier.hpp"

#ifndef QPA_FIXTURE_DIR
#define QPA_FIXTURE_DIR "data/fixtures"
#endif

namespace fs = std::filesystem;
using qpa::Json;
using qpa::cli::Table;

namespace {

struct Globals {
  std::string state;
  std::string out;
  std::string format = "json";
  std::string units = "nats";
  std::string fixtures = QPA_FIXTURE_DIR;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct Result {
  Json params = Json::object();
  Json body = Json::object();
  Table table;
  bool failed = false;
};

double unit_of(const Globals& g) { return g.units == "bits" ? std::log(2.0) : 1.0; }

fs::path resolve_state_path(const Globals& g, const std::string& name) {
  const fs::path direct(name);
  if (fs::exists(direct)) return direct;
  const fs::path bundled = fs::path(g.fixtures) / (name + ".json");
  if (fs::exists(bundled)) return bundled;
  throw qpa::ValidationError(name + ": no such file or bundled fixture");
}

struct LoadedState {
  qpa::CQState state;
  std::string hash;
};

LoadedState load_state(const Globals& g, const std::string& name) {
  if (name.empty()) throw qpa::ValidationError("--state is required for this command");
  const fs::path path = resolve_state_path(g, name);
  const Json j = qpa::load_json_file(path);
  qpa::CQState s = qpa::cq_state_from_json(j);
  return {s, qpa::content_hash(qpa::to_json(s))};
}

qpa::SimOptions sim_options(const Globals& g) {
  qpa::SimOptions o;
  o.threads = g.threads;
  return o;
}

qpa::MinimizeOptions min_options(const Globals& g) {
  qpa::MinimizeOptions o;
  o.seed = g.seed;
  return o;
}

qpa::EntropyKind parse_kind(const std::string& k) {
  if (k == "down") return qpa::EntropyKind::down;
  if (k == "star") return qpa::EntropyKind::star;
  if (k == "down_star") return qpa::EntropyKind::down_star;
  throw qpa::ValidationError("unknown entropy kind '" + k + "'");
}

// entropy ---------------------------------------------------------------------------

struct EntropyArgs {
  std::vector<double> alphas{0.75, 1.0, 1.5, 2.0};
  std::vector<std::string> kinds{"down", "star", "down_star"};
  std::string quantity = "both";
};

Result cmd_entropy(const Globals& g, const EntropyArgs& a, const qpa::CQState& s) {
  Result r;
  r.params = {{"alpha", a.alphas}, {"kinds", a.kinds}, {"quantity", a.quantity}};
  const double unit = unit_of(g);
  std::vector<std::string> quantities;
  if (a.quantity == "cond" || a.quantity == "both") quantities.push_back("cond");
  if (a.quantity == "mi" || a.quantity == "both") quantities.push_back("mi");
  for (const std::string& q : quantities) {
    const bool cond = q == "cond";
    for (const std::string& k : a.kinds) {
      const qpa::EntropyKind kind = parse_kind(k);
      for (double alpha : a.alphas) {
        double value = 0.0;
        bool converged = true;
        if (kind == qpa::EntropyKind::star) {
          const qpa::StarResult sr = cond ? qpa::conditional_entropy_star(s, alpha, min_options(g))
                                          : qpa::mutual_information_star(s, alpha, min_options(g));
          value = sr.value;
          converged = sr.converged;
        } else {
          value = cond ? qpa::conditional_entropy(kind, s, alpha, min_options(g))
                       : qpa::mutual_information(kind, s, alpha, min_options(g));
        }
        r.table.rows.push_back(Json{{"quantity", q},
                                    {"kind", k},
                                    {"alpha", alpha},
                                    {"value", value / unit},
                                    {"converged", converged}});
      }
    }
  }
  r.body["rows"] = r.table.rows;
  return r;
}

// exponent / ea -----------------------------------------------------------------------

struct EAArgs {
  double f = 0.0;
  double V = 0.0;
  double prob = 1.0;
};

Result cmd_ea(const EAArgs& e, const std::string& side, const std::vector<double>& rates,
              const std::vector<std::uint64_t>& ns) {
  if (side != "conv" && side != "ach") {
    throw qpa::ValidationError("ea side must be conv or ach");
  }
  Result r;
  r.params = {{"side", side}, {"f", e.f}, {"V", e.V}, {"prob", e.prob}, {"R", rates}, {"n", ns}};
  for (double rate : rates) {
    for (std::uint64_t n : ns) {
      const qpa::EAParams p{e.f, e.V, e.prob, rate, n};
      const double b = side == "conv" ? qpa::ea_converse_bound(p) : qpa::ea_achievability_bound(p);
      r.table.rows.push_back(Json{{"side", side}, {"R", rate}, {"n", n}, {"bound", b}});
    }
  }
  r.body["rows"] = r.table.rows;
  return r;
}

struct ExponentArgs {
  std::string family = "pa";
  std::string side = "ach";
  std::vector<double> rates;
  std::vector<std::uint64_t> ns;
  EAArgs ea;
};

Result cmd_exponent(const Globals& g, const ExponentArgs& a, const std::optional<LoadedState>& st) {
  if (a.rates.empty()) throw qpa::ValidationError("--rate needs at least one value");
  if (a.family == "ea") {
    Result r = cmd_ea(a.ea, a.side, a.rates, a.ns.empty() ? std::vector<std::uint64_t>{1} : a.ns);
    r.params["family"] = "ea";
    return r;
  }
  if (!st) throw qpa::ValidationError("--state is required for the pa and wiretap families");
  const double unit = unit_of(g);
  qpa::ExponentEngine engine(st->state, min_options(g));
  Result r;
  r.params = {{"family", a.family}, {"side", a.side}, {"rate", a.rates}, {"n", a.ns}};
  Json reports = Json::array();
  for (double rate_in : a.rates) {
    const double rate = rate_in * unit;
    qpa::ExponentReport rep;
    if (a.family == "pa" && a.side == "ach") {
      rep = engine.pa_achievability(rate, a.ns);
    } else if (a.family == "pa" && a.side == "conv") {
      rep = engine.pa_converse(rate, a.ns);
    } else if (a.family == "wiretap" && a.side == "ach") {
      rep = engine.wiretap_secrecy(rate, a.ns);
    } else if (a.family == "wiretap" && a.side == "conv") {
      rep = engine.wiretap_converse(rate, a.ns);
    } else if (a.family == "wiretap" && a.side == "error") {
      rep = engine.wiretap_error(rate, a.ns);
    } else {
      throw qpa::ValidationError("unsupported family/side combination " + a.family + "/" + a.side);
    }
    reports.push_back(qpa::to_json(rep, unit));
    const Json base{{"kind", qpa::to_string(rep.kind)},
                    {"rate", rep.rate / unit},
                    {"exponent", rep.exponent / unit},
                    {"alpha_star", rep.alpha_star},
                    {"threshold", rep.threshold / unit},
                    {"vacuous", rep.vacuous()}};
    if (rep.bounds.empty()) {
      r.table.rows.push_back(base);
    }
    for (const auto& [n, b] : rep.bounds) {
      Json row = base;
      row["n"] = n;
      row["bound"] = b;
      row["raw_bound"] = rep.raw_bounds.at(n);
      r.table.rows.push_back(std::move(row));
    }
  }
  r.body["reports"] = std::move(reports);
  return r;
}

// simulate ----------------------------------------------------------------------------

struct SimulateArgs {
  unsigned v = 1;
  unsigned n = 1;
  std::string mode = "exact";
  std::uint64_t trials = 1000;
  bool breakdown = false;
};

Result cmd_simulate(const Globals& g, const SimulateArgs& a, const qpa::CQState& s) {
  if (a.mode != "exact" && a.mode != "sampled") {
    throw qpa::ValidationError("--mode must be exact or sampled");
  }
  if (a.n < 1) throw qpa::ValidationError("--n must be at least 1");
  Result r;
  r.params = {{"v", a.v}, {"n", a.n}, {"mode", a.mode}, {"breakdown", a.breakdown}};
  if (a.mode == "sampled") r.params["trials"] = a.trials;
  const unsigned u = s.bits();
  if (a.v < 1 || a.v > u) throw qpa::ValidationError("--v must lie in [1, u]");
  const qpa::CQState sn = qpa::iid_extend(s, a.n);
  const qpa::GFContext ctx(a.n * u);
  qpa::SimOptions opts = sim_options(g);
  opts.keep_breakdown = a.breakdown;
  const qpa::PAResult pa =
      a.mode == "exact" ? qpa::exact_pa_distance(sn, ctx, a.n * a.v, opts)
                        : qpa::sampled_pa_distance(sn, ctx, a.n * a.v, a.trials, g.seed, opts);
  r.body["pa"] = qpa::to_json(pa);

  qpa::ExponentEngine engine(s, min_options(g));
  const double rate = a.v * std::log(2.0);
  const double e_ach = engine.pa_achievability(rate).exponent;
  const double e_conv = engine.pa_converse(rate).exponent;
  const double upper = qpa::clamped_bound(qpa::BoundKind::pa_achievability, e_ach, a.n);
  const double lower = qpa::clamped_bound(qpa::BoundKind::pa_converse, e_conv, a.n);
  Json row{{"n", a.n},
           {"u", u},
           {"v", a.v},
           {"mode", a.mode},
           {"value", pa.value},
           {"std_error", pa.std_error},
           {"lower", lower},
           {"upper", upper},
           {"exponent_ach", e_ach / unit_of(g)},
           {"exponent_conv", e_conv / unit_of(g)}};
  if (pa.exact) {
    const bool ok = lower - qpa::kSandwichSlack <= pa.value && pa.value <= upper + qpa::kSandwichSlack;
    row["verdict"] = ok ? "pass" : "fail";
  } else {
    row["verdict"] = "n/a";
  }
  r.body["sandwich"] = row;
  if (a.breakdown) {
    for (const qpa::HashDistance& h : pa.per_hash) {
      r.table.rows.push_back(Json{{"a", h.a}, {"b", h.b}, {"distance", h.distance}});
    }
  } else {
    r.table.rows.push_back(row);
  }
  return r;
}

// wiretap -----------------------------------------------------------------------------

struct WiretapArgs {
  std::string channel;
  std::vector<double> prior;
  unsigned log2_m = 1;
  unsigned log2_l = 1;
  std::string mode = "exact";
  std::uint64_t trials = 10000;
};

Result cmd_wiretap(const Globals& g, const WiretapArgs& a, const std::optional<LoadedState>& st,
                   std::string& hash) {
  if (a.mode != "exact" && a.mode != "mc") throw qpa::ValidationError("--mode must be exact or mc");
  std::vector<qpa::DensityOperator> eve;
  std::vector<double> prior = a.prior;
  if (!a.channel.empty()) {
    const Json cj = qpa::load_json_file(resolve_state_path(g, a.channel));
    const qpa::WiretapChannel ch = qpa::wiretap_from_json(cj);
    eve = ch.marginals(qpa::Subsystem::E);
    if (prior.empty()) prior.assign(eve.size(), 1.0 / static_cast<double>(eve.size()));
    hash = qpa::content_hash(qpa::to_json(ch));
  } else if (st) {
    eve = st->state.rhos();
    if (prior.empty()) prior = st->state.p();
  } else {
    throw qpa::ValidationError("wiretap needs --channel or --state");
  }
  const qpa::CQState sigma_xe(prior, eve);
  Result r;
  r.params = {{"channel", a.channel}, {"prior", prior},    {"log2_m", a.log2_m},
              {"log2_l", a.log2_l},   {"mode", a.mode}};
  if (a.mode == "mc") r.params["trials"] = a.trials;
  const qpa::WiretapD1Result d1 =
      qpa::wiretap_d1(eve, prior, a.log2_m, a.log2_l,
                      a.mode == "exact" ? qpa::WiretapMode::exact : qpa::WiretapMode::monte_carlo,
                      a.trials, g.seed, sim_options(g));
  qpa::ExponentEngine engine(sigma_xe, min_options(g));
  const double log_l = a.log2_l * std::log(2.0);
  const qpa::ExponentReport ach = engine.wiretap_secrecy(log_l, {1});
  const qpa::ExponentReport conv = engine.wiretap_converse(log_l, {1});
  const double upper = ach.bounds.at(1);
  const double lower = conv.bounds.at(1);
  const double unit = unit_of(g);
  Json row{{"log2_m", a.log2_m},
           {"log2_l", a.log2_l},
           {"mode", a.mode},
           {"d1", d1.value},
           {"d1_pessimistic", d1.pessimistic},
           {"std_error", d1.std_error},
           {"exponent_ach", ach.exponent / unit},
           {"exponent_conv", conv.exponent / unit},
           {"upper", upper},
           {"lower", lower}};
  const bool upper_ok = ach.vacuous() || d1.value <= upper + qpa::kSandwichSlack;
  const bool lower_ok = conv.vacuous() || lower - qpa::kSandwichSlack <= d1.value;
  row["verdict"] = d1.exact ? ((upper_ok && lower_ok) ? "pass" : "fail") : "n/a";
  r.body["d1"] = qpa::to_json(d1);
  r.body["secrecy"] = qpa::to_json(ach, unit);
  r.body["converse"] = qpa::to_json(conv, unit);
  r.body["summary"] = row;
  r.table.rows.push_back(row);
  return r;
}

// verify ------------------------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> battery{"all"};
  std::optional<std::uint64_t> trials;
  std::vector<qpa::Index> dims{2, 3, 4, 5, 6};
};

std::vector<std::string> bundled_fixtures(const Globals& g) {
  std::vector<std::string> out;
  if (!fs::is_directory(g.fixtures)) {
    throw qpa::ValidationError(g.fixtures + ": fixture directory not found");
  }
  for (const auto& entry : fs::directory_iterator(g.fixtures)) {
    if (entry.path().extension() == ".json") out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Result cmd_verify(const Globals& g, const VerifyArgs& a) {
  const auto wants = [&](const std::string& name) {
    return std::find(a.battery.begin(), a.battery.end(), name) != a.battery.end() ||
           std::find(a.battery.begin(), a.battery.end(), "all") != a.battery.end();
  };
  const std::vector<std::string> known{"all",         "trace",    "concavity", "helstrom",
                                       "derivatives", "monotone", "additivity"};
  for (const std::string& b : a.battery) {
    if (std::find(known.begin(), known.end(), b) == known.end()) {
      throw qpa::ValidationError("unknown battery '" + b + "'");
    }
  }
  const std::vector<std::string> states =
      g.state.empty() ? bundled_fixtures(g) : std::vector<std::string>{g.state};
  Result r;
  r.params = {{"battery", a.battery}, {"dims", a.dims}, {"states", states}};
  if (a.trials) r.params["trials"] = *a.trials;

  std::vector<std::pair<std::string, qpa::CheckReport>> reports;
  if (wants("trace")) {
    reports.emplace_back("", qpa::check_trace_inequality(a.trials.value_or(10000), a.dims, g.seed));
  }
  if (wants("concavity")) {
    reports.emplace_back("", qpa::check_concavity(a.trials.value_or(1000), g.seed));
  }
  if (wants("helstrom")) {
    reports.emplace_back("", qpa::check_helstrom_attainment(a.trials.value_or(1000), g.seed));
  }
  for (const std::string& name : states) {
    const qpa::CQState s = load_state(g, name).state;
    const std::string label = fs::path(name).stem().string();
    if (wants("derivatives")) reports.emplace_back(label, qpa::check_derivatives(s));
    if (wants("monotone")) reports.emplace_back(label, qpa::check_monotone_and_limits(s));
    const double size = static_cast<double>(s.alphabet_size()) * static_cast<double>(s.dim_e());
    if (wants("additivity") && size * size <= static_cast<double>(qpa::kTolerances.iid_size_limit)) {
      reports.emplace_back(label, qpa::check_additivity(s, {0.5, 0.75, 1.5, 2.0}));
    }
  }
  Json arr = Json::array();
  for (const auto& [label, rep] : reports) {
    Json j = qpa::to_json(rep);
    j["state"] = label;
    arr.push_back(j);
    r.table.rows.push_back(Json{{"name", rep.name},
                                {"state", label},
                                {"trials", rep.trials},
                                {"worst_violation", rep.worst_violation},
                                {"slack", rep.slack},
                                {"excluded", rep.excluded},
                                {"pass", rep.pass}});
    if (!rep.pass) r.failed = true;
  }
  r.body["checks"] = std::move(arr);
  r.body["pass"] = !r.failed;
  return r;
}

// moderate ----------------------------------------------------------------------------

struct ModerateArgs {
  std::string kind = "pa_conv";
  double t = 0.3;
  std::vector<std::uint64_t> ns{100, 1000, 10000, 100000, 1000000};
  EAArgs ea;
};

Result cmd_moderate(const Globals& g, const ModerateArgs& a, const std::optional<LoadedState>& st) {
  Result r;
  r.params = {{"kind", a.kind}, {"t", a.t}, {"n", a.ns}};
  const qpa::ModerateSchedule sched{a.t, a.ns};
  const double unit = unit_of(g);
  if (a.kind == "ea_conv" || a.kind == "ea_ach") {
    r.params["f"] = a.ea.f;
    r.params["V"] = a.ea.V;
    r.params["prob"] = a.ea.prob;
    const qpa::EAParams p{a.ea.f, a.ea.V, a.ea.prob, 0.0, 0};
    const qpa::ModerateEATable t = qpa::moderate_ea_table(
        p, a.kind == "ea_conv" ? qpa::EASide::converse : qpa::EASide::achievability, sched);
    r.body = qpa::to_json(t, unit);
    for (const qpa::ModerateEARow& row : t.rows) {
      r.table.rows.push_back(Json{{"n", row.n},
                                  {"a_n", row.a_n / unit},
                                  {"rate", row.rate / unit},
                                  {"in_window", row.in_window},
                                  {"raw_bound", row.raw_bound},
                                  {"normalized_exponent", row.normalized_exponent},
                                  {"limit", t.limit}});
    }
    return r;
  }
  qpa::ModerateKind kind;
  if (a.kind == "pa_ach") {
    kind = qpa::ModerateKind::pa_ach;
  } else if (a.kind == "pa_conv") {
    kind = qpa::ModerateKind::pa_conv;
  } else if (a.kind == "wt_ach") {
    kind = qpa::ModerateKind::wt_ach;
  } else if (a.kind == "wt_conv") {
    kind = qpa::ModerateKind::wt_conv;
  } else {
    throw qpa::ValidationError("unknown moderate kind '" + a.kind + "'");
  }
  if (!st) throw qpa::ValidationError("--state is required for this moderate kind");
  const qpa::ModerateTable t = qpa::moderate_table(st->state, kind, sched);
  r.body = qpa::to_json(t, unit);
  for (const qpa::ModerateRow& row : t.rows) {
    r.table.rows.push_back(Json{{"n", row.n},
                                {"a_n", row.a_n / unit},
                                {"rate", row.rate / unit},
                                {"in_window", row.in_window},
                                {"exponent", row.exponent / unit},
                                {"bound", row.bound},
                                {"normalized_exponent", row.normalized_exponent},
                                {"limit", t.limit}});
  }
  return r;
}

void emit(const Globals& g, const std::string& command, const Result& r, const std::string& hash) {
  Json config{{"command", command}, {"state", g.state},   {"format", g.format},
              {"units", g.units},   {"seed", g.seed},     {"threads", g.threads},
              {"params", r.params}};
  std::ofstream file;
  if (!g.out.empty()) {
    file.open(g.out, std::ios::binary);
    if (!file) throw qpa::ValidationError(g.out + ": cannot open for writing");
  }
  std::ostream& os = g.out.empty() ? std::cout : file;
  if (g.format == "csv") {
    qpa::cli::write_csv(os, r.table, Json{{"config", config.dump()}, {"state_hash", hash}});
  } else {
    Json doc{{"config", config}, {"state_hash", hash}, {"result", r.body}};
    os << doc.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy amplification and wiretap exponents against quantum side information"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--state", g.state, "cq-state JSON file or bundled fixture name");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--units", g.units, "nats or bits; rates on the command line use the same unit")
      ->check(CLI::IsMember({"nats", "bits"}));
  app.add_option("--seed", g.seed, "seed for every random choice");
  app.add_option("--threads", g.threads, "worker threads, 0 for the hardware default");
  app.add_option("--fixtures", g.fixtures, "directory of bundled fixtures");

  EntropyArgs ent;
  CLI::App* entropy = app.add_subcommand("entropy", "conditional entropies and mutual informations");
  entropy->add_option("--alpha", ent.alphas, "orders")->delimiter(',');
  entropy->add_option("--kind", ent.kinds, "down, star, down_star")->delimiter(',');
  entropy->add_option("--quantity", ent.quantity, "cond, mi or both")
      ->check(CLI::IsMember({"cond", "mi", "both"}));

  ExponentArgs exp;
  CLI::App* exponent = app.add_subcommand("exponent", "error exponents and finite-n bounds");
  exponent->add_option("--family", exp.family, "pa, wiretap or ea")
      ->check(CLI::IsMember({"pa", "wiretap", "ea"}));
  exponent->add_option("--side", exp.side, "ach, conv or error");
  exponent->add_option("--rate", exp.rates, "rates R, log L or log ML")->delimiter(',')->required();
  exponent->add_option("--n", exp.ns, "blocklengths")->delimiter(',');
  exponent->add_option("--f", exp.ea.f, "ea: tradeoff value");
  exponent->add_option("--V", exp.ea.V, "ea: constant V > 2");
  exponent->add_option("--prob", exp.ea.prob, "ea: event probability");

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "exact or sampled privacy amplification");
  simulate->add_option("--v", sim.v, "output bits per copy");
  simulate->add_option("--n", sim.n, "number of copies");
  simulate->add_option("--mode", sim.mode, "exact or sampled");
  simulate->add_option("--trials", sim.trials, "hashes drawn in sampled mode");
  simulate->add_flag("--breakdown", sim.breakdown, "emit the per-hash distances");

  WiretapArgs wt;
  CLI::App* wiretap = app.add_subcommand("wiretap", "wiretap secrecy simulation");
  wiretap->add_option("--channel", wt.channel, "wiretap channel JSON (else --state holds Eve's states)");
  wiretap->add_option("--prior", wt.prior, "input distribution")->delimiter(',');
  wiretap->add_option("--log2-m", wt.log2_m, "log2 of the message count");
  wiretap->add_option("--log2-l", wt.log2_l, "log2 of the randomization count");
  wiretap->add_option("--mode", wt.mode, "exact or mc");
  wiretap->add_option("--trials", wt.trials, "samples in mc mode");

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify", "property battery");
  verify->add_option("--battery", ver.battery,
                     "all, trace, concavity, helstrom, derivatives, monotone, additivity")
      ->delimiter(',');
  verify->add_option("--trials", ver.trials, "trials for the randomized checks");
  verify->add_option("--dims", ver.dims, "dimensions for the trace inequality")->delimiter(',');

  ModerateArgs mod;
  CLI::App* moderate = app.add_subcommand("moderate", "moderate-deviation tables");
  moderate->add_option("--kind", mod.kind, "pa_ach, pa_conv, wt_ach, wt_conv, ea_conv, ea_ach");
  moderate->add_option("--t", mod.t, "a_n = n^-t");
  moderate->add_option("--n", mod.ns, "blocklengths")->delimiter(',');
  moderate->add_option("--f", mod.ea.f, "ea: tradeoff value");
  moderate->add_option("--V", mod.ea.V, "ea: constant V > 2");
  moderate->add_option("--prob", mod.ea.prob, "ea: event probability");

  EAArgs eaa;
  std::string ea_side = "conv";
  std::vector<double> ea_rates;
  std::vector<std::uint64_t> ea_ns{1};
  CLI::App* ea = app.add_subcommand("ea", "entropy accumulation bounds");
  ea->add_option("--side", ea_side, "conv or ach");
  ea->add_option("--f", eaa.f, "tradeoff value")->required();
  ea->add_option("--V", eaa.V, "constant V > 2")->required();
  ea->add_option("--prob", eaa.prob, "event probability");
  ea->add_option("--R", ea_rates, "rates")->delimiter(',')->required();
  ea->add_option("--n", ea_ns, "blocklengths")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(qpa::ErrorCategory::validation);
  }

  try {
    std::optional<LoadedState> st;
    std::string hash;
    if (!g.state.empty() && !verify->parsed()) {
      st = load_state(g, g.state);
      hash = st->hash;
    }
    Result r;
    std::string command;
    if (entropy->parsed()) {
      command = "entropy";
      if (!st) throw qpa::ValidationError("--state is required for entropy");
      r = cmd_entropy(g, ent, st->state);
    } else if (exponent->parsed()) {
      command = "exponent";
      r = cmd_exponent(g, exp, st);
    } else if (simulate->parsed()) {
      command = "simulate";
      if (!st) throw qpa::ValidationError("--state is required for simulate");
      r = cmd_simulate(g, sim, st->state);
    } else if (wiretap->parsed()) {
      command = "wiretap";
      r = cmd_wiretap(g, wt, st, hash);
    } else if (verify->parsed()) {
      command = "verify";
      r = cmd_verify(g, ver);
    } else if (moderate->parsed()) {
      command = "moderate";
      r = cmd_moderate(g, mod, st);
    } else {
      command = "ea";
      r = cmd_ea(eaa, ea_side, ea_rates, ea_ns);
    }
    emit(g, command, r, hash);
    return r.failed ? 1 : 0;
  } catch (const qpa::Error& e) {
    std::cerr << "qpa: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "qpa: " << e.what() << "\n";
    return static_cast<int>(qpa::ErrorCategory::validation);
  }
}
