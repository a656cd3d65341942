#pragma once

// Arithmetic in GF(2^u) and the affine hash family h(x) = [a*x + b]_v.
//
// Field elements are unsigned integers read as coefficient bitmasks (bit i is
// the coefficient of x^i). [y]_v keeps the v most significant bits of the
// u-bit string y.

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <vector>

namespace qpa {

using FieldElement = std::uint32_t;

inline constexpr unsigned kMaxFieldBits = 16;

/// Exhaustive factor check over GF(2)[x]; `poly` has degree >= 1.
bool is_irreducible(std::uint32_t poly);

/// Pinned modulus for GF(2^u): the irreducible polynomial of degree u with the
/// fewest terms, ties broken by smallest bitmask.
std::uint32_t default_modulus(unsigned u);

class GFContext {
 public:
  explicit GFContext(unsigned u);
  GFContext(unsigned u, std::uint32_t modulus);

  unsigned u() const { return u_; }
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t size() const { return std::uint32_t{1} << u_; }

  FieldElement mul(FieldElement x, FieldElement y) const;
  FieldElement add(FieldElement x, FieldElement y) const;
  /// Multiplicative inverse of a nonzero element.
  FieldElement inverse(FieldElement x) const;

  bool operator==(const GFContext& other) const {
    return u_ == other.u_ && modulus_ == other.modulus_;
  }

 private:
  void check_operand(FieldElement x) const;

  unsigned u_;
  std::uint32_t modulus_;
};

FieldElement gf_mul(const GFContext& ctx, FieldElement x, FieldElement y);
FieldElement gf_add(FieldElement x, FieldElement y);

class AffineHash {
 public:
  AffineHash(GFContext ctx, unsigned v, FieldElement a, FieldElement b);

  const GFContext& context() const { return ctx_; }
  unsigned u() const { return ctx_.u(); }
  unsigned v() const { return v_; }
  FieldElement a() const { return a_; }
  FieldElement b() const { return b_; }
  std::uint32_t input_size() const { return ctx_.size(); }
  std::uint32_t output_size() const { return std::uint32_t{1} << v_; }

  /// [a*x + b]_v. Throws ValidationError for x >= 2^u.
  std::uint32_t operator()(FieldElement x) const;

 private:
  GFContext ctx_;
  unsigned v_;
  FieldElement a_;
  FieldElement b_;
};

std::uint32_t eval_hash(const AffineHash& h, FieldElement x);

/// All 2^(2u) members (a, b) of the family, a-major then b-minor.
class HashFamily {
 public:
  HashFamily(GFContext ctx, unsigned v);

  std::uint64_t size() const { return std::uint64_t{1} << (2 * ctx_.u()); }
  AffineHash at(std::uint64_t index) const;
  const GFContext& context() const { return ctx_; }
  unsigned v() const { return v_; }

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = AffineHash;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = AffineHash;

    iterator() = default;
    iterator(const HashFamily* family, std::uint64_t index) : family_(family), index_(index) {}
    AffineHash operator*() const { return family_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++index_;
      return old;
    }
    bool operator==(const iterator& other) const { return index_ == other.index_; }

   private:
    const HashFamily* family_ = nullptr;
    std::uint64_t index_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size()}; }

 private:
  GFContext ctx_;
  unsigned v_;
};

/// CapacityError when u exceeds the enumeration limit.
HashFamily enumerate_family(const GFContext& ctx, unsigned v);

/// Every output has exactly 2^(u-v) preimages.
bool is_balanced(const AffineHash& h);

/// Exact pair-collision counts N(x, x', z, z') = #{(a,b) : h(x)=z and h(x')=z'}
/// for x != x'.
class CollisionTable {
 public:
  CollisionTable(unsigned u, unsigned v, std::vector<std::uint32_t> counts);

  std::uint32_t count(FieldElement x, FieldElement x2, std::uint32_t z, std::uint32_t z2) const;
  /// 2^(2u) / 2^(2v), the count strong 2-universality demands of every cell.
  std::uint64_t expected() const { return std::uint64_t{1} << (2 * (u_ - v_)); }
  bool uniform() const;
  /// Number of cells (pairs x != x' times output pairs).
  std::uint64_t cells() const;

 private:
  std::size_t offset(FieldElement x, FieldElement x2, std::uint32_t z, std::uint32_t z2) const;

  unsigned u_;
  unsigned v_;
  std::vector<std::uint32_t> counts_;
};

CollisionTable universality_check(const GFContext& ctx, unsigned v);

/// Counter-based SplitMix64 output for (seed, counter).
std::uint64_t counter_random(std::uint64_t seed, std::uint64_t counter);

/// (a, b) uniform over GF(2^u)^2, deterministic per seed.
AffineHash sample_hash(const GFContext& ctx, unsigned v, std::uint64_t seed);

}  // namespace qpa
