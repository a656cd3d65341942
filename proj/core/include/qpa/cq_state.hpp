#pragma once

// Classical-quantum states rho_XE = sum_x p(x) |x><x| (x) rho_E^x, wiretap
// channels x -> sigma_BE^x, codebooks, and the maps acting on them.
//
// c-q operators are kept as block lists (one d_E x d_E block per symbol);
// to_dense() expands them only on request.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qpa/hashing.hpp"
#include "qpa/operators.hpp"

namespace qpa {

/// A block-diagonal operator sum_z |z><z| (x) blocks[z].
struct BlockOperator {
  std::vector<Matrix> blocks;

  Matrix to_dense() const;
  double trace() const;
};

/// (1/2) sum_z ||a_z - b_z||_1, block by block.
double trace_distance(const BlockOperator& a, const BlockOperator& b);

class CQState {
 public:
  /// Validates the probability vector and that all blocks are density
  /// operators of a common dimension.
  CQState(std::vector<double> p, std::vector<DensityOperator> rhos);

  /// Pads the alphabet with zero-probability symbols up to the next power of
  /// two. Padded symbols carry the maximally mixed state as a placeholder;
  /// their weighted block is zero.
  static CQState padded(std::vector<double> p, std::vector<DensityOperator> rhos);

  std::size_t alphabet_size() const { return p_.size(); }
  Index dim_e() const { return rhos_.front().dim(); }
  const std::vector<double>& p() const { return p_; }
  const std::vector<DensityOperator>& rhos() const { return rhos_; }

  /// log2 |X|. ValidationError unless |X| is a power of two.
  unsigned bits() const;

  /// p(x) rho_E^x.
  Matrix weighted_block(std::size_t x) const;
  BlockOperator as_block_operator() const;
  Matrix to_dense() const;

 private:
  std::vector<double> p_;
  std::vector<DensityOperator> rhos_;
};

/// rho_E = sum_x p(x) rho_E^x.
DensityOperator marginal_E(const CQState& s);

/// rho_XE^{(x)n} over the lexicographically ordered alphabet X^n.
/// CapacityError when |X|^n * d_E^n exceeds `size_limit`.
CQState iid_extend(const CQState& s, unsigned n,
                   std::size_t size_limit = kTolerances.iid_size_limit);

/// R^h(rho_XE) as a c-q state over Z = {0,1}^v. Outputs with empty preimage get
/// probability 0 (and the placeholder block).
CQState apply_hash(const CQState& s, const AffineHash& h);

/// R^h(rho_XE) as the unnormalized block list sum_{x in h^-1(z)} p(x) rho_E^x.
BlockOperator hashed_blocks(const CQState& s, const AffineHash& h);

/// (1_Z / |Z|) (x) rho_E as a block list.
BlockOperator randomized_target(const CQState& s, std::size_t zsize);

// Wiretap channels -------------------------------------------------------------

enum class Subsystem { B, E };

class WiretapChannel {
 public:
  WiretapChannel(Index dim_b, Index dim_e, std::vector<DensityOperator> outputs);

  Index dim_b() const { return dim_b_; }
  Index dim_e() const { return dim_e_; }
  std::size_t alphabet_size() const { return outputs_.size(); }
  const std::vector<DensityOperator>& outputs() const { return outputs_; }

  /// Tr_B or Tr_E of every output.
  std::vector<DensityOperator> marginals(Subsystem keep) const;

 private:
  Index dim_b_;
  Index dim_e_;
  std::vector<DensityOperator> outputs_;
};

/// sigma_XB or sigma_XE induced by the prior p.
CQState induced_cq(const WiretapChannel& channel, const std::vector<double>& p,
                   Subsystem keep);

class Codebook {
 public:
  Codebook(std::vector<std::size_t> entries, std::size_t alphabet_size);

  std::size_t size() const { return entries_.size(); }
  std::size_t operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<std::size_t>& entries() const { return entries_; }
  std::size_t alphabet_size() const { return alphabet_size_; }

 private:
  std::vector<std::size_t> entries_;
  std::size_t alphabet_size_;
};

/// Eve's states under one (codebook, hash) realization.
struct WiretapBlocks {
  std::vector<Matrix> per_message;  // (1/L) sum_{k in h^-1(m)} sigma_E^{x_k}
  Matrix average;                   // (1/ML) sum_k sigma_E^{x_k}

  /// d_1 = (1/2) || sigma_ME - rho_M (x) sigma_E ||_1 with uniform rho_M.
  double d1() const;
};

/// DomainError when h is not balanced; |cb| must equal 2^u.
WiretapBlocks wiretap_joint_blocks(const Codebook& cb, const AffineHash& h,
                                   const std::vector<DensityOperator>& eve_states);
WiretapBlocks wiretap_joint_blocks(const Codebook& cb, const AffineHash& h,
                                   const WiretapChannel& channel);

// Quantum channels -------------------------------------------------------------

class KrausChannel {
 public:
  /// ValidationError unless sum_i K_i^dagger K_i = 1 within kraus_completeness.
  explicit KrausChannel(std::vector<Matrix> kraus);

  Index dim_in() const { return kraus_.front().cols(); }
  Index dim_out() const { return kraus_.front().rows(); }
  const std::vector<Matrix>& operators() const { return kraus_; }

  /// sum_i K_i rho K_i^dagger.
  Matrix apply(const Matrix& rho) const;

 private:
  std::vector<Matrix> kraus_;
};

/// V = sum_i K_i (x) |i>_E, mapping A' into B (x) E with d_E = #Kraus operators.
class StinespringDilation {
 public:
  explicit StinespringDilation(const KrausChannel& channel);

  const Matrix& isometry() const { return isometry_; }
  Index dim_b() const { return dim_b_; }
  Index dim_e() const { return dim_e_; }

  /// V rho V^dagger on B (x) E.
  DensityOperator output(const DensityOperator& rho) const;
  /// The c-q wiretap channel x -> V rho^x V^dagger for a coding map x -> rho^x.
  WiretapChannel channel_for(const std::vector<DensityOperator>& inputs) const;

 private:
  Matrix isometry_;
  Index dim_b_;
  Index dim_e_;
};

StinespringDilation stinespring(const KrausChannel& channel);

}  // namespace qpa
