#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kh {

enum class RingKind { integers, rationals, mod_p };

// Coefficient ring selector: Z, Q, or Z_p for a prime p < 2^31.
struct RingTag {
    RingKind kind = RingKind::integers;
    uint32_t p = 0;

    static RingTag Z() { return {RingKind::integers, 0}; }
    static RingTag Q() { return {RingKind::rationals, 0}; }
    static RingTag Zp(uint32_t p);

    bool is_field() const { return kind != RingKind::integers; }
    bool operator==(const RingTag&) const = default;
    std::string name() const;
};

bool is_prime_u32(uint32_t n);

// Z_p arithmetic on machine words. Inverses cached up to a size bound,
// computed by Fermat exponentiation beyond it.
class PrimeField {
public:
    explicit PrimeField(uint32_t p);

    uint32_t p() const { return p_; }
    uint32_t reduce(int64_t a) const {
        int64_t r = a % static_cast<int64_t>(p_);
        return static_cast<uint32_t>(r < 0 ? r + p_ : r);
    }
    uint32_t add(uint32_t a, uint32_t b) const {
        uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    uint32_t mul(uint32_t a, uint32_t b) const {
        return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p_);
    }
    uint32_t inv(uint32_t a) const;
    uint32_t pow(uint32_t a, uint64_t e) const;

private:
    uint32_t p_;
    std::vector<uint32_t> inv_cache_;
};

}  // namespace kh
