#include "kh/linalg.hpp"

namespace kh {

RankKernelResult rank_kernel(const SparseMat<mpz_class>& m, RingTag field) {
    if (!field.is_field()) throw std::invalid_argument("rank_kernel: INTEGERS tag rejected");
    RankKernelResult out;
    if (field.kind == RingKind::rationals) {
        RationalOps ops;
        auto rk = rank_kernel_field(ops, m, [](const mpz_class& v) { return mpq_class(v); });
        out.rank = rk.rank;
        out.kernel_q = std::move(rk.kernel);
        out.kernel_dim = static_cast<int64_t>(out.kernel_q.size());
    } else {
        PrimeField F(field.p);
        ModOps ops{&F};
        auto rk = rank_kernel_field(ops, m, [&](const mpz_class& v) {
            return static_cast<uint32_t>(mpz_class(v % F.p() + F.p()).get_ui() % F.p());
        });
        out.rank = rk.rank;
        out.kernel_p = std::move(rk.kernel);
        out.kernel_dim = static_cast<int64_t>(out.kernel_p.size());
    }
    return out;
}

std::vector<uint32_t> lift_and_divide(const std::vector<uint32_t>& x, const SparseMat<mpz_class>& d,
                                      uint32_t p, unsigned r) {
    if (static_cast<int64_t>(x.size()) != d.cols)
        throw std::invalid_argument("lift_and_divide: vector length mismatch");
    mpz_class pr;
    mpz_ui_pow_ui(pr.get_mpz_t(), p, r);
    std::vector<mpz_class> y(d.rows, 0);
    for (const auto& e : d.entries) {
        uint32_t xv = x[e.col] % p;
        if (xv) y[e.row] += e.val * xv;
    }
    std::vector<uint32_t> out(d.rows, 0);
    for (int64_t i = 0; i < d.rows; ++i) {
        if (y[i] % pr != 0)
            throw std::domain_error("lift_and_divide: input is not a page-" + std::to_string(r) +
                                    " cycle");
        mpz_class q = y[i] / pr;
        mpz_class res = q % p;
        if (res < 0) res += p;
        out[i] = static_cast<uint32_t>(res.get_ui());
    }
    return out;
}

}  // namespace kh
