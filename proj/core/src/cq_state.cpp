#include "qpa/cq_state.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qpa/errors.hpp"

namespace qpa {

// BlockOperator ----------------------------------------------------------------

Matrix BlockOperator::to_dense() const {
  Index total = 0;
  for (const Matrix& b : blocks) total += b.rows();
  Matrix out = Matrix::Zero(total, total);
  Index offset = 0;
  for (const Matrix& b : blocks) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return out;
}

double BlockOperator::trace() const {
  double t = 0.0;
  for (const Matrix& b : blocks) t += b.trace().real();
  return t;
}

double trace_distance(const BlockOperator& a, const BlockOperator& b) {
  if (a.blocks.size() != b.blocks.size()) {
    throw ValidationError("trace_distance: block counts differ");
  }
  double total = 0.0;
  for (std::size_t z = 0; z < a.blocks.size(); ++z) {
    if (a.blocks[z].rows() != b.blocks[z].rows()) {
      throw ValidationError("trace_distance: block dimensions differ");
    }
    total += hermitian_eigenvalues(a.blocks[z] - b.blocks[z]).cwiseAbs().sum();
  }
  return 0.5 * total;
}

// CQState ----------------------------------------------------------------------

CQState::CQState(std::vector<double> p, std::vector<DensityOperator> rhos)
    : p_(std::move(p)), rhos_(std::move(rhos)) {
  if (p_.empty()) throw ValidationError("CQState: empty alphabet");
  if (p_.size() != rhos_.size()) {
    std::ostringstream os;
    os << "CQState: " << p_.size() << " probabilities but " << rhos_.size() << " states";
    throw ValidationError(os.str());
  }
  double sum = 0.0;
  for (double q : p_) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
      throw ValidationError("CQState: probabilities must be finite and non-negative");
    }
    sum += q;
  }
  if (std::abs(sum - 1.0) > kTolerances.probability_sum) {
    std::ostringstream os;
    os.precision(17);
    os << "CQState: probabilities sum to " << sum;
    throw ValidationError(os.str());
  }
  const Index d = rhos_.front().dim();
  for (const DensityOperator& r : rhos_) {
    if (r.dim() != d) throw ValidationError("CQState: blocks have different dimensions");
  }
}

CQState CQState::padded(std::vector<double> p, std::vector<DensityOperator> rhos) {
  if (p.empty() || rhos.empty()) throw ValidationError("CQState: empty alphabet");
  const std::size_t target = std::bit_ceil(p.size());
  const Index d = rhos.front().dim();
  while (p.size() < target) {
    p.push_back(0.0);
    rhos.push_back(DensityOperator::maximally_mixed(d));
  }
  return CQState(std::move(p), std::move(rhos));
}

unsigned CQState::bits() const {
  if (!std::has_single_bit(p_.size())) {
    std::ostringstream os;
    os << "CQState: alphabet size " << p_.size() << " is not a power of two";
    throw ValidationError(os.str());
  }
  return static_cast<unsigned>(std::countr_zero(p_.size()));
}

Matrix CQState::weighted_block(std::size_t x) const { return p_.at(x) * rhos_.at(x).matrix(); }

BlockOperator CQState::as_block_operator() const {
  BlockOperator out;
  out.blocks.reserve(p_.size());
  for (std::size_t x = 0; x < p_.size(); ++x) out.blocks.push_back(weighted_block(x));
  return out;
}

Matrix CQState::to_dense() const { return as_block_operator().to_dense(); }

DensityOperator marginal_E(const CQState& s) {
  Matrix sum = Matrix::Zero(s.dim_e(), s.dim_e());
  for (std::size_t x = 0; x < s.alphabet_size(); ++x) sum += s.weighted_block(x);
  sum /= sum.trace().real();
  return DensityOperator(HermitianOperator::symmetrized(sum));
}

CQState iid_extend(const CQState& s, unsigned n, std::size_t size_limit) {
  if (n < 1) throw ValidationError("iid_extend: n must be at least 1");
  const double per_copy = static_cast<double>(s.alphabet_size()) * static_cast<double>(s.dim_e());
  if (std::pow(per_copy, n) > static_cast<double>(size_limit)) {
    std::ostringstream os;
    os << "iid_extend: |X|^n * d_E^n = " << per_copy << "^" << n
       << " exceeds the explicit-size limit " << size_limit;
    throw CapacityError(os.str());
  }
  std::vector<double> p = s.p();
  std::vector<Matrix> blocks;
  for (const DensityOperator& r : s.rhos()) blocks.push_back(r.matrix());
  for (unsigned copy = 1; copy < n; ++copy) {
    std::vector<double> next_p;
    std::vector<Matrix> next_blocks;
    next_p.reserve(p.size() * s.alphabet_size());
    next_blocks.reserve(p.size() * s.alphabet_size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t x = 0; x < s.alphabet_size(); ++x) {
        next_p.push_back(p[i] * s.p()[x]);
        next_blocks.push_back(tensor(blocks[i], s.rhos()[x].matrix()));
      }
    }
    p = std::move(next_p);
    blocks = std::move(next_blocks);
  }
  std::vector<DensityOperator> rhos;
  rhos.reserve(blocks.size());
  for (const Matrix& b : blocks) rhos.emplace_back(HermitianOperator::symmetrized(b));
  return CQState(std::move(p), std::move(rhos));
}

namespace {

void require_hash_width(const CQState& s, const AffineHash& h) {
  if (s.alphabet_size() != h.input_size()) {
    std::ostringstream os;
    os << "apply_hash: hash input width 2^" << h.u() << " does not match |X| = "
       << s.alphabet_size();
    throw ValidationError(os.str());
  }
}

}  // namespace

BlockOperator hashed_blocks(const CQState& s, const AffineHash& h) {
  require_hash_width(s, h);
  BlockOperator out;
  out.blocks.assign(h.output_size(), Matrix::Zero(s.dim_e(), s.dim_e()));
  for (std::size_t x = 0; x < s.alphabet_size(); ++x) {
    if (s.p()[x] == 0.0) continue;
    out.blocks[h(static_cast<FieldElement>(x))] += s.weighted_block(x);
  }
  return out;
}

CQState apply_hash(const CQState& s, const AffineHash& h) {
  require_hash_width(s, h);
  std::vector<double> pz(h.output_size(), 0.0);
  for (std::size_t x = 0; x < s.alphabet_size(); ++x) {
    pz[h(static_cast<FieldElement>(x))] += s.p()[x];
  }
  const BlockOperator blocks = hashed_blocks(s, h);
  std::vector<DensityOperator> rhos;
  rhos.reserve(pz.size());
  for (std::size_t z = 0; z < pz.size(); ++z) {
    if (pz[z] == 0.0) {
      rhos.push_back(DensityOperator::maximally_mixed(s.dim_e()));
    } else {
      Matrix block = blocks.blocks[z];
      block /= block.trace().real();
      rhos.emplace_back(HermitianOperator::symmetrized(block));
    }
  }
  return CQState(std::move(pz), std::move(rhos));
}

BlockOperator randomized_target(const CQState& s, std::size_t zsize) {
  if (zsize < 1) throw ValidationError("randomized_target: |Z| must be at least 1");
  const Matrix block = marginal_E(s).matrix() / static_cast<double>(zsize);
  BlockOperator out;
  out.blocks.assign(zsize, block);
  return out;
}

// Wiretap channels -------------------------------------------------------------

WiretapChannel::WiretapChannel(Index dim_b, Index dim_e, std::vector<DensityOperator> outputs)
    : dim_b_(dim_b), dim_e_(dim_e), outputs_(std::move(outputs)) {
  if (dim_b < 1 || dim_e < 1) throw ValidationError("WiretapChannel: dimensions must be positive");
  if (outputs_.empty()) throw ValidationError("WiretapChannel: no outputs");
  for (const DensityOperator& o : outputs_) {
    if (o.dim() != dim_b * dim_e) {
      std::ostringstream os;
      os << "WiretapChannel: output of dimension " << o.dim() << " does not match dB*dE = "
         << dim_b * dim_e;
      throw ValidationError(os.str());
    }
  }
}

std::vector<DensityOperator> WiretapChannel::marginals(Subsystem keep) const {
  const std::array<Index, 2> dims{dim_b_, dim_e_};
  const std::array<Index, 1> kept{keep == Subsystem::B ? Index{0} : Index{1}};
  std::vector<DensityOperator> out;
  out.reserve(outputs_.size());
  for (const DensityOperator& o : outputs_) {
    out.emplace_back(partial_trace(o.base(), dims, kept));
  }
  return out;
}

CQState induced_cq(const WiretapChannel& channel, const std::vector<double>& p,
                   Subsystem keep) {
  if (p.size() != channel.alphabet_size()) {
    std::ostringstream os;
    os << "induced_cq: prior has " << p.size() << " entries, channel alphabet has "
       << channel.alphabet_size();
    throw ValidationError(os.str());
  }
  return CQState(p, channel.marginals(keep));
}

Codebook::Codebook(std::vector<std::size_t> entries, std::size_t alphabet_size)
    : entries_(std::move(entries)), alphabet_size_(alphabet_size) {
  for (std::size_t x : entries_) {
    if (x >= alphabet_size_) throw ValidationError("Codebook: entry is not a valid symbol");
  }
}

double WiretapBlocks::d1() const {
  const double m = static_cast<double>(per_message.size());
  double total = 0.0;
  for (const Matrix& block : per_message) {
    total += hermitian_eigenvalues(block - average).cwiseAbs().sum();
  }
  return 0.5 * total / m;
}

WiretapBlocks wiretap_joint_blocks(const Codebook& cb, const AffineHash& h,
                                   const std::vector<DensityOperator>& eve_states) {
  if (cb.size() != h.input_size()) {
    std::ostringstream os;
    os << "wiretap_joint_blocks: codebook size " << cb.size() << " must equal ML = 2^"
       << h.u();
    throw ValidationError(os.str());
  }
  if (cb.alphabet_size() != eve_states.size()) {
    throw ValidationError("wiretap_joint_blocks: codebook alphabet does not match the channel");
  }
  if (!is_balanced(h)) throw DomainError("wiretap_joint_blocks: hash is not balanced");
  const Index d = eve_states.front().dim();
  const double ml = static_cast<double>(cb.size());
  const double l = ml / static_cast<double>(h.output_size());
  WiretapBlocks out;
  out.per_message.assign(h.output_size(), Matrix::Zero(d, d));
  out.average = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < cb.size(); ++k) {
    const Matrix& sigma = eve_states[cb[k]].matrix();
    out.per_message[h(static_cast<FieldElement>(k))] += sigma / l;
    out.average += sigma / ml;
  }
  return out;
}

WiretapBlocks wiretap_joint_blocks(const Codebook& cb, const AffineHash& h,
                                   const WiretapChannel& channel) {
  return wiretap_joint_blocks(cb, h, channel.marginals(Subsystem::E));
}

// Quantum channels -------------------------------------------------------------

KrausChannel::KrausChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ValidationError("KrausChannel: no Kraus operators");
  const Index din = kraus_.front().cols();
  const Index dout = kraus_.front().rows();
  Matrix completeness = Matrix::Zero(din, din);
  for (const Matrix& k : kraus_) {
    if (k.cols() != din || k.rows() != dout) {
      throw ValidationError("KrausChannel: Kraus operators have different shapes");
    }
    completeness += k.adjoint() * k;
  }
  const double gap = (completeness - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
  if (gap > kTolerances.kraus_completeness) {
    std::ostringstream os;
    os << "KrausChannel: sum K^dagger K deviates from the identity by " << gap;
    throw ValidationError(os.str());
  }
}

Matrix KrausChannel::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(dim_out(), dim_out());
  for (const Matrix& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

StinespringDilation::StinespringDilation(const KrausChannel& channel)
    : dim_b_(channel.dim_out()), dim_e_(static_cast<Index>(channel.operators().size())) {
  const Index din = channel.dim_in();
  isometry_ = Matrix::Zero(dim_b_ * dim_e_, din);
  for (Index i = 0; i < dim_e_; ++i) {
    const Matrix& k = channel.operators()[static_cast<std::size_t>(i)];
    for (Index b = 0; b < dim_b_; ++b) isometry_.row(b * dim_e_ + i) = k.row(b);
  }
}

DensityOperator StinespringDilation::output(const DensityOperator& rho) const {
  if (rho.dim() != isometry_.cols()) {
    throw ValidationError("StinespringDilation: input dimension mismatch");
  }
  return DensityOperator(
      HermitianOperator::symmetrized(isometry_ * rho.matrix() * isometry_.adjoint()));
}

WiretapChannel StinespringDilation::channel_for(const std::vector<DensityOperator>& inputs) const {
  std::vector<DensityOperator> outputs;
  outputs.reserve(inputs.size());
  for (const DensityOperator& r : inputs) outputs.push_back(output(r));
  return WiretapChannel(dim_b_, dim_e_, std::move(outputs));
}

StinespringDilation stinespring(const KrausChannel& channel) {
  return StinespringDilation(channel);
}

}  // namespace qpa
