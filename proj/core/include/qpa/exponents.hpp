#pragma once

// Exponent envelopes, finite-blocklength bound values, entropy-accumulation
// bound formulas and moderate-deviation tables.
//
// Every supremum over an open alpha interval is taken on its closed hull.
// Exponents are clamped at 0 and bounds into [0, 1]; raw values are kept.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qpa/cq_state.hpp"
#include "qpa/minimize.hpp"
#include "qpa/renyi.hpp"

namespace qpa {

struct SupResult {
  double alpha_star = 0.0;
  double value = 0.0;
};

/// Maximum of `objective` on [lo, hi]: 512-point grid, then golden-section
/// refinement of the best cell down to width 1e-9.
SupResult sup_alpha(const std::function<double(double)>& objective, double lo, double hi);

enum class BoundKind { pa_converse, pa_achievability, wiretap_secrecy, wiretap_converse,
                       wiretap_error };

const char* to_string(BoundKind kind);

struct ExponentReport {
  BoundKind kind = BoundKind::pa_converse;
  double rate = 0.0;          // R, log L or log ML in nats
  double exponent = 0.0;      // max(0, raw_sup)
  double raw_sup = 0.0;       // supremum of the objective before clamping
  double alpha_star = 1.0;
  double threshold = 0.0;     // H(X|E), I(X:E) or I(X:B)
  std::map<std::uint64_t, double> bounds;      // clamped into [0, 1]
  std::map<std::uint64_t, double> raw_bounds;  // before clamping
  bool vacuous() const { return exponent <= 0.0; }
};

/// Bound at blocklength n from an exponent, raw and clamped.
double raw_bound(BoundKind kind, double exponent, std::uint64_t n);
double clamped_bound(BoundKind kind, double exponent, std::uint64_t n);
/// log of the exponentially small term (c e^{-nE}) of the bound.
double log_bound_term(BoundKind kind, double exponent, std::uint64_t n);

/// Computes all exponents of one c-q state. Entropy curves are memoized in
/// alpha, so repeated calls at different rates share the minimizations. Not
/// safe for concurrent use of one instance.
class ExponentEngine {
 public:
  explicit ExponentEngine(CQState s, MinimizeOptions options = {});
  ~ExponentEngine();
  ExponentEngine(ExponentEngine&&) noexcept;
  ExponentEngine& operator=(ExponentEngine&&) noexcept;

  const CQState& state() const;

  double entropy_vn() const;
  double information_vn() const;
  /// H*_alpha, I*_alpha through the memoized curves.
  double h_star(double alpha);
  double i_star(double alpha);
  double h_down(double beta) const;
  double i_down(double beta) const;

  ExponentReport pa_converse(double rate, const std::vector<std::uint64_t>& ns = {});
  ExponentReport pa_achievability(double rate, const std::vector<std::uint64_t>& ns = {});
  /// Treats the state as sigma_XE.
  ExponentReport wiretap_secrecy(double log_l, const std::vector<std::uint64_t>& ns = {});
  ExponentReport wiretap_converse(double log_l, const std::vector<std::uint64_t>& ns = {});
  /// Treats the state as sigma_XB.
  ExponentReport wiretap_error(double log_ml, const std::vector<std::uint64_t>& ns = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ExponentReport pa_converse_exponent(const CQState& s, double rate,
                                    const std::vector<std::uint64_t>& ns = {});
ExponentReport pa_achievability_exponent(const CQState& s, double rate,
                                         const std::vector<std::uint64_t>& ns = {});
ExponentReport wiretap_secrecy_exponent(const CQState& sigma_xe, double log_l,
                                        const std::vector<std::uint64_t>& ns = {});
ExponentReport wiretap_converse_exponent(const CQState& sigma_xe, double log_l,
                                         const std::vector<std::uint64_t>& ns = {});
ExponentReport wiretap_error_exponent(const CQState& sigma_xb, double log_ml,
                                      const std::vector<std::uint64_t>& ns = {});

// Entropy accumulation -------------------------------------------------------------

struct EAParams {
  double f_w = 0.0;     // tradeoff function value (nats)
  double V = 0.0;       // constant > 2
  double prob_w = 1.0;  // Pr[wt = w], in (0, 1]
  double R = 0.0;
  std::uint64_t n = 0;
};

/// 1 - (4/prob_w) e^{-(n/2)((R - f_w)/V)^2}, unclamped. DomainError unless
/// 0 < R - f_w < V.
double ea_converse_bound(const EAParams& p);

/// (1/prob_w) e^{-(n/2)((R - f_w)/V)^2}, unclamped. DomainError unless
/// 0 < f_w - R <= V^2/2.
double ea_achievability_bound(const EAParams& p);

// Moderate deviations --------------------------------------------------------------

struct ModerateSchedule {
  double exponent_t = 0.3;  // a_n = n^{-t}, t in (0, 1/2)
  std::vector<std::uint64_t> n_list;
};

enum class ModerateKind { pa_ach, pa_conv, wt_ach, wt_conv };

const char* to_string(ModerateKind kind);

struct ModerateRow {
  std::uint64_t n = 0;
  double a_n = 0.0;
  double rate = 0.0;
  bool in_window = true;
  double exponent = 0.0;
  double bound = 0.0;
  double log_term = 0.0;  // log of the c e^{-nE} term
  double normalized_exponent = 0.0;  // -log_term / (n a_n^2)
};

struct ModerateTable {
  ModerateKind kind = ModerateKind::pa_conv;
  double threshold = 0.0;
  double variance = 0.0;
  double limit = 0.0;  // 1 / (2 V)
  std::vector<ModerateRow> rows;
};

/// DomainError when the relevant variance is below 1e-12.
ModerateTable moderate_table(const CQState& s, ModerateKind kind, const ModerateSchedule& sched);

enum class EASide { converse, achievability };

struct ModerateEARow {
  std::uint64_t n = 0;
  double a_n = 0.0;
  double rate = 0.0;
  bool in_window = true;
  double raw_bound = 0.0;
  double exponent_part = 0.0;        // (n/2)(a_n/V)^2 / (n a_n^2)
  double normalized_exponent = 0.0;  // -log(term) / (n a_n^2)
};

struct ModerateEATable {
  EASide side = EASide::converse;
  double limit = 0.0;  // 1 / (2 V^2)
  std::vector<ModerateEARow> rows;
};

/// Rows at R_n = f_w + a_n (converse) or f_w - a_n (achievability). The n
/// and R fields of `params` are ignored. Out-of-window rows are kept and
/// flagged.
ModerateEATable moderate_ea_table(const EAParams& params, EASide side,
                                  const ModerateSchedule& sched);

}  // namespace qpa
