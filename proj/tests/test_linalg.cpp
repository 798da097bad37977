#include "doctest.h"

#include <random>

#include "kh/linalg.hpp"
#include "kh/snf.hpp"
#include "oracles.hpp"

using namespace kh;

namespace {

SparseMat<mpz_class> from_dense(const std::vector<std::vector<long>>& rows) {
    SparseMat<mpz_class> m(static_cast<int64_t>(rows.size()),
                           rows.empty() ? 0 : static_cast<int64_t>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            if (rows[r][c]) m.add(static_cast<int32_t>(r), static_cast<int32_t>(c), rows[r][c]);
    m.normalize();
    return m;
}

std::vector<std::vector<mpz_class>> to_dense(const SparseMat<mpz_class>& m) {
    std::vector<std::vector<mpz_class>> d(m.rows, std::vector<mpz_class>(m.cols, 0));
    for (auto& e : m.entries) d[e.row][e.col] = e.val;
    return d;
}

}  // namespace

TEST_CASE("prime field arithmetic") {
    CHECK(is_prime_u32(2));
    CHECK(is_prime_u32(7));
    CHECK(!is_prime_u32(1));
    CHECK(!is_prime_u32(9));
    PrimeField F(7);
    for (uint32_t a = 1; a < 7; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
    PrimeField big(2147483647u);  // fits the p < 2^31 contract
    CHECK(big.mul(12345u, big.inv(12345u)) == 1);
    CHECK_THROWS(RingTag::Zp(6));
}

TEST_CASE("rank_kernel on the spec examples") {
    auto id2 = from_dense({{1, 0}, {0, 1}});
    auto rk = rank_kernel(id2, RingTag::Q());
    CHECK(rk.rank == 2);
    CHECK(rk.kernel_dim == 0);

    auto ones = from_dense({{1, 1}, {1, 1}});
    rk = rank_kernel(ones, RingTag::Zp(2));
    CHECK(rk.rank == 1);
    CHECK(rk.kernel_dim == 1);

    auto m = from_dense({{2, 4}, {1, 2}});
    rk = rank_kernel(m, RingTag::Zp(2));
    CHECK(rk.rank == 1);  // first row vanishes mod 2

    CHECK_THROWS(rank_kernel(id2, RingTag::Z()));
}

TEST_CASE("rank + kernel dim = cols, kernel vectors multiply to zero") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int R = 1 + static_cast<int>(rng() % 6), C = 1 + static_cast<int>(rng() % 6);
        SparseMat<mpz_class> m(R, C);
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) {
                int v = static_cast<int>(rng() % 7) - 3;
                if (v) m.add(r, c, v);
            }
        m.normalize();
        for (RingTag f : {RingTag::Q(), RingTag::Zp(2), RingTag::Zp(5)}) {
            auto rk = rank_kernel(m, f);
            CHECK(rk.rank + rk.kernel_dim == C);
            if (f.kind == RingKind::rationals) {
                for (const auto& k : rk.kernel_q) {
                    std::vector<mpq_class> x(C, 0);
                    for (auto& [i, v] : k) x[i] = v;
                    auto dense = to_dense(m);
                    for (int r = 0; r < R; ++r) {
                        mpq_class acc = 0;
                        for (int c = 0; c < C; ++c) acc += mpq_class(dense[r][c]) * x[c];
                        CHECK(acc == 0);
                    }
                }
            } else {
                PrimeField F(f.p);
                for (const auto& k : rk.kernel_p) {
                    std::vector<uint32_t> x(C, 0);
                    for (auto& [i, v] : k) x[i] = v;
                    auto dense = to_dense(m);
                    for (int r = 0; r < R; ++r) {
                        uint32_t acc = 0;
                        for (int c = 0; c < C; ++c) {
                            uint32_t mv = F.reduce(mpz_class(dense[r][c] % F.p()).get_si());
                            acc = F.add(acc, F.mul(mv, x[c]));
                        }
                        CHECK(acc == 0);
                    }
                }
            }
        }
    }
}

TEST_CASE("smith normal form: spec examples") {
    auto d120 = from_dense({{1, 0, 0}, {0, 2, 0}, {0, 0, 0}});
    auto s = smith_normal_form(d120);
    CHECK(s.rank == 2);
    REQUIRE(s.diagonal.size() == 2);
    CHECK(s.diagonal[0] == 1);
    CHECK(s.diagonal[1] == 2);

    auto zero = from_dense({{0, 0}, {0, 0}});
    s = smith_normal_form(zero);
    CHECK(s.rank == 0);
    CHECK(s.diagonal.empty());

    // d1 = gcd of entries = 2, d1*d2 = |det| = 8
    auto m = from_dense({{2, 4}, {6, 8}});
    s = smith_normal_form(m);
    REQUIRE(s.diagonal.size() == 2);
    CHECK(s.diagonal[0] == 2);
    CHECK(s.diagonal[1] == 4);
    auto od = oracle::dense_snf_oracle(to_dense(m));
    CHECK(od == s.diagonal);
}

TEST_CASE("smith normal form matches the dense oracle on random matrices") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        int R = 1 + static_cast<int>(rng() % 7), C = 1 + static_cast<int>(rng() % 7);
        SparseMat<mpz_class> m(R, C);
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) {
                int v = static_cast<int>(rng() % 9) - 4;
                if (v && rng() % 3) m.add(r, c, v);
            }
        m.normalize();
        auto s = smith_normal_form(m);
        auto od = oracle::dense_snf_oracle(to_dense(m));
        CHECK(s.diagonal == od);
        for (size_t t = 1; t < s.diagonal.size(); ++t)
            CHECK(s.diagonal[t] % s.diagonal[t - 1] == 0);
        // rank over Q equals SNF rank
        CHECK(rank_kernel(m, RingTag::Q()).rank == s.rank);
    }
}

TEST_CASE("smith transforms multiply out to the input") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        int R = 1 + static_cast<int>(rng() % 6), C = 1 + static_cast<int>(rng() % 6);
        SparseMat<mpz_class> m(R, C);
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) {
                int v = static_cast<int>(rng() % 7) - 3;
                if (v) m.add(r, c, v);
            }
        m.normalize();
        auto s = smith_normal_form(m, true);
        REQUIRE(s.U);
        REQUIRE(s.V);
        auto prod = sparse_mul(sparse_mul(*s.U, m), *s.V);
        SparseMat<mpz_class> diag(R, C);
        for (size_t t = 0; t < s.diagonal.size(); ++t)
            diag.add(static_cast<int32_t>(t), static_cast<int32_t>(t), s.diagonal[t]);
        diag.normalize();
        prod.normalize();
        CHECK(prod.entries.size() == diag.entries.size());
        CHECK((prod.entries == diag.entries));
        // transforms must be unimodular, and Vinv must invert V
        auto su = smith_normal_form(*s.U);
        CHECK(su.rank == R);
        for (auto& d : su.diagonal) CHECK(d == 1);
        auto sv = smith_normal_form(*s.V);
        CHECK(sv.rank == C);
        for (auto& d : sv.diagonal) CHECK(d == 1);
        REQUIRE(s.Vinv);
        auto vv = sparse_mul(*s.V, *s.Vinv);
        auto id = sparse_identity<mpz_class>(C);
        CHECK((vv.entries == id.entries));
    }
}

TEST_CASE("lift_and_divide") {
    // d = [2], x = [1], p = 2, r = 1: the Bockstein of Z_2 arising from x2
    auto d2 = from_dense({{2}});
    auto y = lift_and_divide({1}, d2, 2, 1);
    REQUIRE(y.size() == 1);
    CHECK(y[0] == 1);

    // zero matrix: zero output
    SparseMat<mpz_class> z(3, 2);
    auto y0 = lift_and_divide({1, 1}, z, 2, 1);
    CHECK(y0 == std::vector<uint32_t>{0, 0, 0});

    // 3x3 instance with SNF diagonal [1,4] at r = 2, against the dense oracle
    auto d = from_dense({{1, 3, 0}, {0, 4, 0}, {0, 0, 0}});
    auto snf = smith_normal_form(d);
    REQUIRE(snf.diagonal.size() == 2);
    CHECK(snf.diagonal[0] == 1);
    CHECK(snf.diagonal[1] == 4);
    std::vector<uint32_t> x{1, 1, 0};  // cycle of d mod 2, naive lift divisible by 4
    auto got = lift_and_divide(x, d, 2, 2);
    auto want = oracle::connecting_map_oracle(x, to_dense(d), 2, 2);
    CHECK(got == want);
    CHECK(got == std::vector<uint32_t>{1, 1, 0});
    // p^r * y == d * lift(x) entrywise over Z, up to the final mod-p reduction
    std::vector<mpz_class> dy(3, 0);
    for (auto& e : d.entries) dy[e.row] += e.val * x[e.col];
    for (int i = 0; i < 3; ++i) {
        CHECK(dy[i] % 4 == 0);
        CHECK((dy[i] / 4 - got[i]) % 2 == 0);
    }

    // divisibility failure raises
    CHECK_THROWS(lift_and_divide({1, 0, 0}, from_dense({{1}, {0}, {0}}).transposed(), 2, 1));
}
