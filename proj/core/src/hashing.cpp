#include "qpa/hashing.hpp"

#include <array>
#include <bit>
#include <sstream>

#include "qpa/errors.hpp"
#include "qpa/tolerances.hpp"

namespace qpa {

namespace {

int degree(std::uint64_t poly) { return std::bit_width(poly) - 1; }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = degree(m);
  while (a != 0 && degree(a) >= dm) a ^= m << (degree(a) - dm);
  return a;
}

// Index 0 unused. Irreducibility of each entry is re-checked when a context is built.
constexpr std::array<std::uint32_t, kMaxFieldBits + 1> kModuli = {
    0x0,    0x2,    0x7,    0xb,     0x13,   0x25,   0x43,   0x83,    0x11b,
    0x203,  0x409,  0x805,  0x1009,  0x201b, 0x4021, 0x8003, 0x1002b,
};

}  // namespace

bool is_irreducible(std::uint32_t poly) {
  const int d = degree(poly);
  if (d < 1) return false;
  for (std::uint64_t q = 2; degree(q) <= d / 2; ++q) {
    if (poly_mod(poly, q) == 0) return false;
  }
  return true;
}

std::uint32_t default_modulus(unsigned u) {
  if (u < 1 || u > kMaxFieldBits) {
    std::ostringstream os;
    os << "GF(2^u): u must lie in [1, " << kMaxFieldBits << "], got " << u;
    throw ValidationError(os.str());
  }
  return kModuli[u];
}

// GFContext ------------------------------------------------------------------

GFContext::GFContext(unsigned u) : GFContext(u, default_modulus(u)) {}

GFContext::GFContext(unsigned u, std::uint32_t modulus) : u_(u), modulus_(modulus) {
  if (u < 1 || u > kMaxFieldBits) {
    std::ostringstream os;
    os << "GF(2^u): u must lie in [1, " << kMaxFieldBits << "], got " << u;
    throw ValidationError(os.str());
  }
  if (degree(modulus) != static_cast<int>(u) || !is_irreducible(modulus)) {
    std::ostringstream os;
    os << "GF(2^" << u << "): modulus 0x" << std::hex << modulus
       << " is not an irreducible polynomial of degree " << std::dec << u;
    throw ValidationError(os.str());
  }
}

void GFContext::check_operand(FieldElement x) const {
  if (x >= size()) {
    std::ostringstream os;
    os << "GF(2^" << u_ << "): operand " << x << " out of range";
    throw ValidationError(os.str());
  }
}

FieldElement GFContext::mul(FieldElement x, FieldElement y) const {
  check_operand(x);
  check_operand(y);
  std::uint64_t product = 0;
  for (std::uint64_t yy = y, xx = x; yy != 0; yy >>= 1, xx <<= 1) {
    if (yy & 1u) product ^= xx;
  }
  return static_cast<FieldElement>(poly_mod(product, modulus_));
}

FieldElement GFContext::add(FieldElement x, FieldElement y) const {
  check_operand(x);
  check_operand(y);
  return x ^ y;
}

FieldElement GFContext::inverse(FieldElement x) const {
  check_operand(x);
  if (x == 0) throw DomainError("GF(2^u): zero has no multiplicative inverse");
  // x^(2^u - 2) by square-and-multiply.
  FieldElement result = 1;
  FieldElement base = x;
  std::uint32_t e = size() - 2;
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

FieldElement gf_mul(const GFContext& ctx, FieldElement x, FieldElement y) {
  return ctx.mul(x, y);
}

FieldElement gf_add(FieldElement x, FieldElement y) { return x ^ y; }

// AffineHash -----------------------------------------------------------------

AffineHash::AffineHash(GFContext ctx, unsigned v, FieldElement a, FieldElement b)
    : ctx_(ctx), v_(v), a_(a), b_(b) {
  if (v < 1 || v > ctx_.u()) {
    std::ostringstream os;
    os << "AffineHash: output width v=" << v << " must lie in [1, " << ctx_.u() << "]";
    throw ValidationError(os.str());
  }
  if (a >= ctx_.size() || b >= ctx_.size()) {
    throw ValidationError("AffineHash: coefficients must be field elements");
  }
}

std::uint32_t AffineHash::operator()(FieldElement x) const {
  const FieldElement y = ctx_.add(ctx_.mul(a_, x), b_);
  return y >> (ctx_.u() - v_);
}

std::uint32_t eval_hash(const AffineHash& h, FieldElement x) { return h(x); }

// HashFamily -----------------------------------------------------------------

HashFamily::HashFamily(GFContext ctx, unsigned v) : ctx_(ctx), v_(v) {
  if (v < 1 || v > ctx_.u()) throw ValidationError("HashFamily: v must lie in [1, u]");
}

AffineHash HashFamily::at(std::uint64_t index) const {
  if (index >= size()) throw ValidationError("HashFamily: index out of range");
  const auto a = static_cast<FieldElement>(index >> ctx_.u());
  const auto b = static_cast<FieldElement>(index & (ctx_.size() - 1));
  return AffineHash(ctx_, v_, a, b);
}

HashFamily enumerate_family(const GFContext& ctx, unsigned v) {
  if (ctx.u() > kTolerances.max_enumerable_u) {
    std::ostringstream os;
    os << "enumerate_family: u=" << ctx.u() << " exceeds the enumeration limit u <= "
       << kTolerances.max_enumerable_u << " (use sample_hash)";
    throw CapacityError(os.str());
  }
  return HashFamily(ctx, v);
}

bool is_balanced(const AffineHash& h) {
  std::vector<std::uint32_t> hits(h.output_size(), 0);
  for (FieldElement x = 0; x < h.input_size(); ++x) ++hits[h(x)];
  const std::uint32_t target = std::uint32_t{1} << (h.u() - h.v());
  for (std::uint32_t c : hits) {
    if (c != target) return false;
  }
  return true;
}

// Universality ---------------------------------------------------------------

CollisionTable::CollisionTable(unsigned u, unsigned v, std::vector<std::uint32_t> counts)
    : u_(u), v_(v), counts_(std::move(counts)) {}

std::size_t CollisionTable::offset(FieldElement x, FieldElement x2, std::uint32_t z,
                                   std::uint32_t z2) const {
  const std::size_t nx = std::size_t{1} << u_;
  const std::size_t nz = std::size_t{1} << v_;
  return ((static_cast<std::size_t>(x) * nx + x2) * nz + z) * nz + z2;
}

std::uint32_t CollisionTable::count(FieldElement x, FieldElement x2, std::uint32_t z,
                                    std::uint32_t z2) const {
  if (x == x2) throw ValidationError("CollisionTable: the table covers x != x' only");
  if (x >= (1u << u_) || x2 >= (1u << u_) || z >= (1u << v_) || z2 >= (1u << v_)) {
    throw ValidationError("CollisionTable: index out of range");
  }
  return counts_[offset(x, x2, z, z2)];
}

bool CollisionTable::uniform() const {
  const std::uint32_t nx = 1u << u_;
  const std::uint32_t nz = 1u << v_;
  for (FieldElement x = 0; x < nx; ++x) {
    for (FieldElement x2 = 0; x2 < nx; ++x2) {
      if (x == x2) continue;
      for (std::uint32_t z = 0; z < nz; ++z) {
        for (std::uint32_t z2 = 0; z2 < nz; ++z2) {
          if (counts_[offset(x, x2, z, z2)] != expected()) return false;
        }
      }
    }
  }
  return true;
}

std::uint64_t CollisionTable::cells() const {
  const std::uint64_t nx = std::uint64_t{1} << u_;
  const std::uint64_t nz = std::uint64_t{1} << v_;
  return nx * (nx - 1) * nz * nz;
}

CollisionTable universality_check(const GFContext& ctx, unsigned v) {
  if (ctx.u() > kTolerances.max_universality_u) {
    std::ostringstream os;
    os << "universality_check: u=" << ctx.u() << " exceeds the exhaustive limit u <= "
       << kTolerances.max_universality_u;
    throw CapacityError(os.str());
  }
  const HashFamily family(ctx, v);
  const std::size_t nx = ctx.size();
  const std::size_t nz = std::size_t{1} << v;
  std::vector<std::uint32_t> counts(nx * nx * nz * nz, 0);
  std::vector<std::uint32_t> image(nx);
  for (const AffineHash& h : family) {
    for (FieldElement x = 0; x < nx; ++x) image[x] = h(x);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t x2 = 0; x2 < nx; ++x2) {
        if (x == x2) continue;
        ++counts[((x * nx + x2) * nz + image[x]) * nz + image[x2]];
      }
    }
  }
  return CollisionTable(ctx.u(), v, std::move(counts));
}

// Sampling -------------------------------------------------------------------

std::uint64_t counter_random(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AffineHash sample_hash(const GFContext& ctx, unsigned v, std::uint64_t seed) {
  const std::uint64_t mask = ctx.size() - 1;
  const auto a = static_cast<FieldElement>(counter_random(seed, 0) & mask);
  const auto b = static_cast<FieldElement>(counter_random(seed, 1) & mask);
  return AffineHash(ctx, v, a, b);
}

}  // namespace qpa
