#include "qpa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <thread>

#include "qpa/errors.hpp"
#include "qpa/random.hpp"

namespace qpa {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(std::uint64_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::uint64_t i = t; i < count; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double block_distance(const CQState& s, const AffineHash& h, const Matrix& target) {
  const BlockOperator blocks = hashed_blocks(s, h);
  double total = 0.0;
  for (const Matrix& b : blocks.blocks) total += hermitian_eigenvalues(b - target).cwiseAbs().sum();
  return 0.5 * total;
}

void require_width(const CQState& s, const GFContext& ctx) {
  if (s.alphabet_size() != ctx.size()) {
    std::ostringstream os;
    os << "hash family over GF(2^" << ctx.u() << ") does not match |X| = " << s.alphabet_size();
    throw ValidationError(os.str());
  }
}

}  // namespace

double pa_distance(const CQState& s, const AffineHash& h) {
  const Matrix target = marginal_E(s).matrix() / static_cast<double>(h.output_size());
  return block_distance(s, h, target);
}

PAResult exact_pa_distance(const CQState& s, const GFContext& ctx, unsigned v,
                           const SimOptions& options) {
  require_width(s, ctx);
  const HashFamily family = enumerate_family(ctx, v);
  const Matrix target = marginal_E(s).matrix() / static_cast<double>(std::uint64_t{1} << v);
  std::vector<double> d(family.size());
  parallel_for(family.size(), options.threads,
               [&](std::uint64_t i) { d[i] = block_distance(s, family.at(i), target); });
  PAResult out;
  out.exact = true;
  out.family_size = family.size();
  out.trials = family.size();
  out.value = pairwise_sum(d) / static_cast<double>(family.size());
  if (options.keep_breakdown) {
    out.per_hash.reserve(d.size());
    for (std::uint64_t i = 0; i < d.size(); ++i) {
      const AffineHash h = family.at(i);
      out.per_hash.push_back({h.a(), h.b(), d[i]});
    }
  }
  return out;
}

PAResult sampled_pa_distance(const CQState& s, const GFContext& ctx, unsigned v,
                             std::uint64_t trials, std::uint64_t seed, const SimOptions& options) {
  require_width(s, ctx);
  if (trials < 1) throw ValidationError("sampled_pa_distance: trials must be at least 1");
  const Matrix target = marginal_E(s).matrix() / static_cast<double>(std::uint64_t{1} << v);
  std::vector<double> d(trials);
  std::vector<AffineHash> hashes;
  hashes.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    hashes.push_back(sample_hash(ctx, v, counter_random(seed, t)));
  }
  parallel_for(trials, options.threads,
               [&](std::uint64_t t) { d[t] = block_distance(s, hashes[t], target); });
  const double mean = pairwise_sum(d) / static_cast<double>(trials);
  std::vector<double> sq(trials);
  for (std::uint64_t t = 0; t < trials; ++t) sq[t] = (d[t] - mean) * (d[t] - mean);
  PAResult out;
  out.exact = false;
  out.value = mean;
  out.family_size = HashFamily(ctx, v).size();
  out.trials = trials;
  out.std_error = trials > 1 ? std::sqrt(pairwise_sum(sq) / static_cast<double>(trials - 1) /
                                         static_cast<double>(trials))
                             : 0.0;
  if (options.keep_breakdown) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      out.per_hash.push_back({hashes[t].a(), hashes[t].b(), d[t]});
    }
  }
  return out;
}

SandwichReport sandwich_check(const CQState& s, unsigned v, unsigned n, ExponentEngine* engine,
                              const SimOptions& options) {
  const unsigned u = s.bits();
  if (n < 1) throw ValidationError("sandwich_check: n must be at least 1");
  if (v < 1 || v > u) throw ValidationError("sandwich_check: v must lie in [1, u]");
  const CQState sn = iid_extend(s, n);
  const GFContext ctx(n * u);
  const PAResult exact = exact_pa_distance(sn, ctx, n * v, options);

  std::unique_ptr<ExponentEngine> own;
  if (engine == nullptr) {
    own = std::make_unique<ExponentEngine>(s);
    engine = own.get();
  }
  SandwichReport r;
  r.n = n;
  r.u = u;
  r.v = v;
  r.rate = static_cast<double>(v) * std::log(2.0);
  r.exact = exact.value;
  r.exponent_ach = engine->pa_achievability(r.rate).exponent;
  r.exponent_conv = engine->pa_converse(r.rate).exponent;
  r.upper = clamped_bound(BoundKind::pa_achievability, r.exponent_ach, n);
  r.lower = clamped_bound(BoundKind::pa_converse, r.exponent_conv, n);
  r.upper_ok = r.exact <= r.upper + kSandwichSlack;
  r.lower_ok = r.lower - kSandwichSlack <= r.exact;
  return r;
}

// Wiretap -----------------------------------------------------------------------------

namespace {

struct HashD1 {
  double actual;
  double pessimistic;
};

HashD1 hash_d1(const Codebook& cb, const AffineHash& h,
               const std::vector<DensityOperator>& eve, double m) {
  if (h.a() == 0) return {1.0 - 1.0 / m, 1.0};
  const double d = wiretap_joint_blocks(cb, h, eve).d1();
  return {d, d};
}

void validate_wiretap(const std::vector<DensityOperator>& eve, const std::vector<double>& p,
                      unsigned log2_m) {
  if (eve.empty()) throw ValidationError("wiretap_d1: no channel outputs");
  if (p.size() != eve.size()) {
    throw ValidationError("wiretap_d1: prior and channel alphabet sizes differ");
  }
  double sum = 0.0;
  for (double q : p) {
    if (!(q >= 0.0)) throw ValidationError("wiretap_d1: prior entries must be non-negative");
    sum += q;
  }
  if (std::abs(sum - 1.0) > kTolerances.probability_sum) {
    throw ValidationError("wiretap_d1: prior must sum to 1");
  }
  if (log2_m < 1) throw ValidationError("wiretap_d1: M must be at least 2");
}

}  // namespace

WiretapD1Result wiretap_d1(const std::vector<DensityOperator>& eve, const std::vector<double>& p,
                           unsigned log2_m, unsigned log2_l, WiretapMode mode,
                           std::uint64_t trials, std::uint64_t seed, const SimOptions& options) {
  validate_wiretap(eve, p, log2_m);
  const unsigned u = log2_m + log2_l;
  if (u > kMaxFieldBits) throw CapacityError("wiretap_d1: log2(ML) exceeds the field limit");
  const GFContext ctx(u);
  const std::uint64_t ml = std::uint64_t{1} << u;
  const double m = static_cast<double>(std::uint64_t{1} << log2_m);
  const std::size_t k = p.size();

  WiretapD1Result out;
  if (mode == WiretapMode::exact) {
    const double codebooks = std::pow(static_cast<double>(k), static_cast<double>(ml));
    const double hashes = std::ldexp(1.0, static_cast<int>(2 * u));
    if (codebooks * hashes > std::ldexp(1.0, 22)) {
      std::ostringstream os;
      os << "wiretap_d1: exact mode needs |X|^(ML) * 2^(2u) = " << codebooks * hashes
         << " (codebook, hash) pairs, above the limit 2^22";
      throw CapacityError(os.str());
    }
    const auto ncb = static_cast<std::uint64_t>(codebooks);
    const HashFamily family(ctx, log2_m);
    std::vector<double> actual(ncb, 0.0), pessimistic(ncb, 0.0), unbalanced(ncb, 0.0);
    parallel_for(ncb, options.threads, [&](std::uint64_t c) {
      std::vector<std::size_t> entries(ml);
      double weight = 1.0;
      std::uint64_t code = c;
      for (std::uint64_t j = 0; j < ml; ++j) {
        entries[j] = code % k;
        code /= k;
        weight *= p[entries[j]];
      }
      if (weight == 0.0) return;
      const Codebook cb(entries, k);
      std::vector<double> da(family.size()), dp(family.size());
      for (std::uint64_t i = 0; i < family.size(); ++i) {
        const HashD1 d = hash_d1(cb, family.at(i), eve, m);
        da[i] = d.actual;
        dp[i] = d.pessimistic;
      }
      const double nh = static_cast<double>(family.size());
      actual[c] = weight * pairwise_sum(da) / nh;
      pessimistic[c] = weight * pairwise_sum(dp) / nh;
      unbalanced[c] = weight * static_cast<double>(ctx.size()) / nh;
    });
    out.exact = true;
    out.value = pairwise_sum(actual);
    out.pessimistic = pairwise_sum(pessimistic);
    out.unbalanced_weight = pairwise_sum(unbalanced);
    out.samples = ncb * family.size();
    return out;
  }

  if (trials < 1) throw ValidationError("wiretap_d1: Monte-Carlo mode needs trials >= 1");
  std::vector<double> cdf(k);
  double acc = 0.0;
  for (std::size_t x = 0; x < k; ++x) cdf[x] = (acc += p[x]);
  std::vector<double> actual(trials), pessimistic(trials), unbalanced(trials);
  parallel_for(trials, options.threads, [&](std::uint64_t t) {
    RandomStream rng(counter_random(seed, t));
    std::vector<std::size_t> entries(ml);
    for (std::uint64_t j = 0; j < ml; ++j) {
      const double r = rng.uniform() * acc;
      std::size_t x = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
      x = std::min(x, k - 1);
      while (p[x] == 0.0 && x > 0) --x;
      entries[j] = x;
    }
    const AffineHash h = sample_hash(ctx, log2_m, rng.next_u64());
    const HashD1 d = hash_d1(Codebook(entries, k), h, eve, m);
    actual[t] = d.actual;
    pessimistic[t] = d.pessimistic;
    unbalanced[t] = h.a() == 0 ? 1.0 : 0.0;
  });
  const double nt = static_cast<double>(trials);
  out.exact = false;
  out.value = pairwise_sum(actual) / nt;
  out.pessimistic = pairwise_sum(pessimistic) / nt;
  out.unbalanced_weight = pairwise_sum(unbalanced) / nt;
  std::vector<double> sq(trials);
  for (std::uint64_t t = 0; t < trials; ++t) sq[t] = (actual[t] - out.value) * (actual[t] - out.value);
  out.std_error = trials > 1 ? std::sqrt(pairwise_sum(sq) / (nt - 1.0) / nt) : 0.0;
  out.samples = trials;
  return out;
}

WiretapD1Result wiretap_d1(const WiretapChannel& channel, const std::vector<double>& p,
                           unsigned log2_m, unsigned log2_l, WiretapMode mode,
                           std::uint64_t trials, std::uint64_t seed, const SimOptions& options) {
  return wiretap_d1(channel.marginals(Subsystem::E), p, log2_m, log2_l, mode, trials, seed,
                    options);
}

}  // namespace qpa
