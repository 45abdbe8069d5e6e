#pragma once

#include <cstdint>
#include <vector>

#include "ppc/errors.hpp"
#include "ppc/rng.hpp"

namespace ppc {

// A fully reduced residue, 0 <= value < p. All coding math runs on these.
using FieldElement = std::uint64_t;

// 2^61 - 1, Mersenne. Large enough for any session geometry we care about
// (needs p - 1 > N*L + M + n distinct nonzero points).
inline constexpr std::uint64_t kDefaultPrime = (std::uint64_t{1} << 61) - 1;

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// Arithmetic in the prime field F_p. Value type, cheap to copy; every
// operation is pure and returns reduced residues.
class Field {
  public:
    explicit Field(std::uint64_t prime = kDefaultPrime);

    std::uint64_t prime() const { return p_; }

    FieldElement reduce(std::uint64_t v) const { return v % p_; }

    // Signed ingestion; negative values map to p - |v| mod p.
    FieldElement from_int(std::int64_t v) const;

    FieldElement add(FieldElement a, FieldElement b) const {
        const std::uint64_t s = a + b; // p < 2^63, no overflow
        return s >= p_ ? s - p_ : s;
    }

    FieldElement sub(FieldElement a, FieldElement b) const {
        return a >= b ? a - b : a + p_ - b;
    }

    FieldElement neg(FieldElement a) const { return a == 0 ? 0 : p_ - a; }

    FieldElement mul(FieldElement a, FieldElement b) const {
        return static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(a) * b % p_);
    }

    FieldElement pow(FieldElement base, std::uint64_t exp) const;

    // Multiplicative inverse; throws FieldError("no inverse") on zero.
    FieldElement inv(FieldElement a) const;

    bool operator==(const Field& other) const { return p_ == other.p_; }
    bool operator!=(const Field& other) const { return p_ != other.p_; }

  private:
    std::uint64_t p_;
};

// `count` distinct nonzero elements, disjoint from `forbidden`, uniform over
// valid choices and reproducible from the generator state. Nonzero because a
// library polynomial evaluated at 0 would drop that matrix's contribution.
std::vector<FieldElement> sample_distinct_points(
    const Field& field, std::size_t count,
    const std::vector<FieldElement>& forbidden, Rng& rng);

} // namespace ppc
