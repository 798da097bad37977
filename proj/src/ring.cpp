#include "kh/ring.hpp"

namespace kh {

bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

RingTag RingTag::Zp(uint32_t p) {
    if (!is_prime_u32(p)) throw std::invalid_argument("Z_p requires a prime p, got " + std::to_string(p));
    return {RingKind::mod_p, p};
}

std::string RingTag::name() const {
    switch (kind) {
        case RingKind::integers: return "Z";
        case RingKind::rationals: return "Q";
        case RingKind::mod_p: return "Z_" + std::to_string(p);
    }
    return "?";
}

PrimeField::PrimeField(uint32_t p) : p_(p) {
    if (!is_prime_u32(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
    if (p_ <= 1 << 16) {
        inv_cache_.assign(p_, 0);
        if (p_ > 1) inv_cache_[1] = 1;
        // inv(a) = -(p/a) * inv(p mod a), standard linear-time recurrence
        for (uint32_t a = 2; a < p_; ++a)
            inv_cache_[a] = static_cast<uint32_t>(
                (static_cast<uint64_t>(p_ - p_ / a) * inv_cache_[p_ % a]) % p_);
    }
}

uint32_t PrimeField::pow(uint32_t a, uint64_t e) const {
    uint64_t base = a % p_, r = 1;
    while (e) {
        if (e & 1) r = r * base % p_;
        base = base * base % p_;
        e >>= 1;
    }
    return static_cast<uint32_t>(r);
}

uint32_t PrimeField::inv(uint32_t a) const {
    a %= p_;
    if (a == 0) throw std::domain_error("inverse of zero in Z_p");
    if (!inv_cache_.empty()) return inv_cache_[a];
    return pow(a, p_ - 2);
}

}  // namespace kh
