#include "doctest.h"

#include "kh/thin.hpp"

using namespace kh;

namespace {

BigradedGroup homology_of(const BraidWord& w) {
    return integral_homology(CubeComplex(braid_closure(w), Theory::khovanov, RingTag::Z()));
}

const BraidWord UNKNOT(1, {});
const BraidWord TREFOIL(3, {1, 2, 1, 2});
const BraidWord T33(3, {1, 2, 1, 1, 2, 1});
const BraidWord OMEGA5_W(3, {1, 2, 1, 1, 2, 1, 2});  // Delta^2 sigma_2

}  // namespace

TEST_CASE("support_diagonals") {
    auto u = support_diagonals(homology_of(UNKNOT));
    REQUIRE(u.diagonals.count(0));
    CHECK(u.diagonals.at(0) == std::set<int>{-1, 1});
    CHECK(u.torsion_primes.empty());

    // trefoil: values {1,3} at every supported grading, including the UCT
    // echo of the Z_2 at (-2,-7) into grading -3
    auto t = support_diagonals(homology_of(TREFOIL));
    CHECK(t.torsion_primes == std::set<uint32_t>{2});
    for (auto& [i, vals] : t.diagonals)
        for (int v : vals) CHECK((v == 1 || v == 3));
    CHECK(t.diagonals.at(-3) == std::set<int>{1, 3});

    // Delta^2 sigma_2: three diagonals in homological grading -4
    auto o5 = support_diagonals(homology_of(OMEGA5_W));
    CHECK(o5.diagonals.at(-4).size() == 3);
}

TEST_CASE("find_thin_regions") {
    auto u = find_thin_regions(support_diagonals(homology_of(UNKNOT)));
    REQUIRE(u.size() == 1);
    CHECK(u[0].i1 == 0);
    CHECK(u[0].i2 == 0);
    CHECK(u[0].s_values == std::set<int>{0});

    auto t = find_thin_regions(support_diagonals(homology_of(TREFOIL)));
    REQUIRE(t.size() == 1);
    CHECK(t[0].i1 == -3);
    CHECK(t[0].i2 == 0);
    CHECK(t[0].s_values == std::set<int>{2});

    // no region may contain i = -4 for Delta^2 sigma_2
    auto o5 = find_thin_regions(support_diagonals(homology_of(OMEGA5_W)));
    for (auto& reg : o5) CHECK((reg.i2 < -4 || reg.i1 > -4));
}

TEST_CASE("check_main_theorem on the trefoil") {
    auto z = homology_of(TREFOIL);
    auto prof = support_diagonals(z);
    auto regions = find_thin_regions(prof);
    REQUIRE(regions.size() == 1);
    auto rep = check_main_theorem(z, prof, regions[0]);
    CHECK(rep.cond1_thin);
    CHECK(rep.cond2_no_odd_torsion_boundary);
    CHECK(rep.cond3_first_row_torsion_free);
    CHECK(rep.cond4_prior_row_vanishes);
    CHECK(rep.verdict);
    CHECK(rep.s == 2);
    CHECK(verify_verdict(z, regions[0]));
    // bookkeeping: ell is 1 exactly at the torsion grading, and ell_{i1} = 0
    CHECK(rep.ell.at(-2) == 1);
    CHECK(rep.ell.at(-3) == 0);
    CHECK(rep.k_plus.at(0) == 1);
    CHECK(rep.k_minus.at(0) == 1);
}

TEST_CASE("T(3,3): condition (4) fails, the stronger path carries the verdict") {
    auto z = homology_of(T33);
    auto prof = support_diagonals(z);
    // grading -4 carries three diagonals, so regions avoid it
    CHECK(prof.diagonals.at(-4).size() == 3);
    auto regions = find_thin_regions(prof);
    REQUIRE(!regions.empty());
    const ThinRegion* blue = nullptr;
    for (auto& reg : regions)
        if (reg.i1 <= -2 && -2 <= reg.i2) blue = &reg;
    REQUIRE(blue != nullptr);
    CHECK(blue->i1 == -3);
    CHECK(blue->i2 == 0);

    auto rep_plain = check_main_theorem(z, prof, *blue);
    CHECK(!rep_plain.cond4_prior_row_vanishes);
    CHECK(!rep_plain.verdict);

    PlanarDiagram d = braid_closure(T33);
    auto lee = filtered_pages(CubeComplex(d, Theory::lee, RingTag::Q()));
    auto tur = filtered_pages(CubeComplex(d, Theory::turner, RingTag::Zp(2)));
    auto rep = check_main_theorem(z, prof, *blue, &lee, &tur);
    CHECK(!rep.cond4_prior_row_vanishes);
    CHECK(rep.stronger_path_attempted);
    CHECK(rep.stronger_path_ok);
    CHECK(rep.verdict);
    CHECK(verify_verdict(z, *blue));
}

TEST_CASE("verify_verdict flags non-Z_2 torsion") {
    BigradedGroup z;
    z.groups[{0, 1}] = {1, {}};
    z.groups[{1, 1}] = {0, {mpz_class(4)}};
    ThinRegion reg{0, 2, {1}};
    CheckReport why;
    CHECK(!verify_verdict(z, reg, &why));
    CHECK(!why.ok);
    // torsion outside the region does not matter
    ThinRegion reg2{-1, 0, {1}};
    CHECK(verify_verdict(z, reg2));
}

TEST_CASE("lemma_rank_checks on the trefoil region") {
    auto z = homology_of(TREFOIL);
    auto prof = support_diagonals(z);
    auto regions = find_thin_regions(prof);
    REQUIRE(regions.size() == 1);
    auto dT = induced_map(CubeComplex(braid_closure(TREFOIL), Theory::khovanov, RingTag::Zp(2)),
                          InducedKind::dT_star);
    auto dL = induced_map(CubeComplex(braid_closure(TREFOIL), Theory::khovanov, RingTag::Q()),
                          InducedKind::dL_star);
    auto rep = lemma_rank_checks(z, regions[0], 2, dT, dL);
    CHECK(rep.ok);
    // the rank feeding the single Z_2: rk dT*(-3,-9) = rk dL*(-3,-9) = 1
    CHECK(dT.rank.at({-3, -9}) == 1);
    CHECK(dL.rank.at({-3, -9}) == 1);
}

TEST_CASE("lemma_rank_checks across T(3,4) and T(3,5) thin regions") {
    for (auto& w : {std::vector<int>{1, 2, 1, 2, 1, 2, 1, 2},
                    std::vector<int>{1, 2, 1, 2, 1, 2, 1, 2, 1, 2}}) {
        BraidWord bw(3, w);
        auto z = homology_of(bw);
        auto prof = support_diagonals(z);
        auto dT = induced_map(CubeComplex(braid_closure(bw), Theory::khovanov, RingTag::Zp(2)),
                              InducedKind::dT_star);
        auto dL = induced_map(CubeComplex(braid_closure(bw), Theory::khovanov, RingTag::Q()),
                              InducedKind::dL_star);
        for (auto& reg : find_thin_regions(prof)) {
            auto rep = check_main_theorem(z, prof, reg);
            if (!rep.verdict) continue;
            CHECK(lemma_rank_checks(z, reg, rep.s, dT, dL).ok);
        }
    }
}

TEST_CASE("unknot region is a vacuous pass") {
    auto z = homology_of(UNKNOT);
    auto prof = support_diagonals(z);
    auto regions = find_thin_regions(prof);
    REQUIRE(regions.size() == 1);
    auto rep = check_main_theorem(z, prof, regions[0]);
    CHECK(rep.verdict);
    CHECK(verify_verdict(z, regions[0]));
}
