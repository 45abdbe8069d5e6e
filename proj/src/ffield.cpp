#include "ppc/ffield.hpp"

#include <algorithm>
#include <unordered_set>

namespace ppc {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp,
                         std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1)
            acc = mulmod_u64(acc, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return acc;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % small == 0)
            return n == small;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // Deterministic witness set for the full 64-bit range.
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

Field::Field(std::uint64_t prime) : p_(prime) {
    if (prime < 2 || prime >= (std::uint64_t{1} << 63))
        throw FieldError("field modulus out of range: " +
                         std::to_string(prime));
    if (!is_prime_u64(prime))
        throw FieldError("field modulus is not prime: " +
                         std::to_string(prime));
}

FieldElement Field::from_int(std::int64_t v) const {
    if (v >= 0)
        return static_cast<std::uint64_t>(v) % p_;
    const std::uint64_t r = static_cast<std::uint64_t>(-(v + 1)) % p_;
    return neg(add(r, 1 % p_));
}

FieldElement Field::pow(FieldElement base, std::uint64_t exp) const {
    return powmod_u64(base, exp, p_);
}

FieldElement Field::inv(FieldElement a) const {
    if (a == 0)
        throw FieldError("no inverse: zero element");
    return pow(a, p_ - 2); // Fermat, p prime
}

std::vector<FieldElement> sample_distinct_points(
    const Field& field, std::size_t count,
    const std::vector<FieldElement>& forbidden, Rng& rng) {
    const std::uint64_t p = field.prime();
    std::unordered_set<FieldElement> taken;
    for (FieldElement f : forbidden) {
        if (f != 0)
            taken.insert(f);
    }
    const std::uint64_t nonzero = p - 1;
    if (count > nonzero || count + taken.size() > nonzero)
        throw FieldError("insufficient points: need " + std::to_string(count) +
                         " distinct nonzero elements outside " +
                         std::to_string(taken.size()) + " forbidden, field has " +
                         std::to_string(nonzero));

    std::vector<FieldElement> out;
    out.reserve(count);
    if (p <= 4096) {
        // Small field: partial shuffle of the explicit candidate list keeps
        // the draw uniform even when count is close to p - 1.
        std::vector<FieldElement> pool;
        pool.reserve(nonzero - taken.size());
        for (FieldElement v = 1; v < p; ++v) {
            if (!taken.contains(v))
                pool.push_back(v);
        }
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }
    while (out.size() < count) {
        const FieldElement v = 1 + rng.below(nonzero);
        if (taken.insert(v).second)
            out.push_back(v);
    }
    return out;
}

} // namespace ppc
