#include "kh/thin.hpp"

#include <algorithm>

namespace kh {

DiagonalProfile support_diagonals(const BigradedGroup& z) {
    DiagonalProfile prof;
    for (auto& [ij, e] : z.groups)
        for (auto& t : e.torsion) {
            mpz_class m = t;
            for (uint32_t p = 2; p <= m; p = (p == 2 ? 3 : p + 2))
                if (m % p == 0) {
                    prof.torsion_primes.insert(p);
                    break;  // torsion entries are prime powers
                }
        }
    for (auto& [ij, e] : z.groups) {
        auto [i, j] = ij;
        if (e.rank > 0 || !e.torsion.empty()) prof.diagonals[i].insert(2 * i - j);
        // universal coefficients: torsion at (i, j) also feeds mod-p support
        // at (i-1, j)
        if (!e.torsion.empty()) prof.diagonals[i - 1].insert(2 * (i - 1) - j);
    }
    return prof;
}

namespace {

// s values compatible with one grading's diagonal set; nullopt = unconstrained
std::optional<std::set<int>> s_candidates(const std::set<int>& d) {
    if (d.empty()) return std::nullopt;
    int lo = *d.begin(), hi = *d.rbegin();
    if (d.size() > 2 || hi - lo > 2 || hi - lo == 1) return std::set<int>{};
    if (hi - lo == 2) return std::set<int>{lo + 1};
    return std::set<int>{lo - 1, lo + 1};  // single diagonal: two choices
}

std::set<int> intersect(const std::set<int>& a, const std::set<int>& b) {
    std::set<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

}  // namespace

std::vector<ThinRegion> find_thin_regions(const DiagonalProfile& p) {
    std::vector<ThinRegion> out;
    if (p.diagonals.empty()) return out;
    int lo = p.diagonals.begin()->first;
    int hi = p.diagonals.rbegin()->first;

    std::optional<std::set<int>> cur;  // running s constraint
    int start = lo;
    bool has_support = false;
    auto flush = [&](int end) {
        if (has_support && cur && !cur->empty()) out.push_back({start, end, *cur});
        cur = std::nullopt;
        has_support = false;
    };
    for (int i = lo; i <= hi; ++i) {
        auto dset = p.at(i);
        if (!dset) {  // unsupported grading: keep any running region going
            if (!has_support) start = i + 1;
            continue;
        }
        auto si = s_candidates(*dset);
        if (si && si->empty()) {
            // three or incompatible diagonals break every region through i
            flush(i - 1);
            start = i + 1;
            continue;
        }
        if (!cur) {
            if (!has_support) start = i;
            cur = si;
            has_support = true;
            continue;
        }
        auto meet = intersect(*cur, *si);
        if (meet.empty()) {
            flush(i - 1);
            start = i;
            cur = si;
            has_support = true;
        } else {
            cur = meet;
        }
    }
    flush(hi);
    return out;
}

namespace {

bool region_is_thin(const DiagonalProfile& prof, int i1, int i2, int s) {
    for (int i = i1; i <= i2; ++i) {
        auto d = prof.at(i);
        if (!d) continue;
        for (int v : *d)
            if (v != s - 1 && v != s + 1) return false;
    }
    return true;
}

// all differentials out of homological grading i vanish on every page
bool pages_vanish_at(const SpectralSequence& seq, int i) {
    for (auto& pg : seq.pages)
        for (auto& [ij, r] : pg.ranks)
            if (ij.first == i && r > 0) return false;
    return true;
}

int failure_count(const HypothesisReport& r) {
    return (!r.cond1_thin) + (!r.cond2_no_odd_torsion_boundary) +
           (!r.cond3_first_row_torsion_free) +
           (!(r.cond4_prior_row_vanishes || r.stronger_path_ok));
}

}  // namespace

HypothesisReport check_main_theorem(const BigradedGroup& z, const DiagonalProfile& prof,
                                    const ThinRegion& region, const SpectralSequence* lee_pages,
                                    const SpectralSequence* turner_pages) {
    HypothesisReport best;
    best.i1 = region.i1;
    best.i2 = region.i2;
    bool have_best = false;
    for (int s : region.s_values) {
        HypothesisReport rep;
        rep.i1 = region.i1;
        rep.i2 = region.i2;
        rep.s = s;

        rep.cond1_thin = region_is_thin(prof, region.i1, region.i2, s);
        if (!rep.cond1_thin)
            rep.witnesses.push_back("support leaves the two diagonals for s=" + std::to_string(s));

        // (2): dim_Q = dim_{Z_p} on row i1 for odd p; by universal
        // coefficients this forbids odd torsion in rows i1 and i1+1
        rep.cond2_no_odd_torsion_boundary = true;
        for (auto& [ij, e] : z.groups) {
            if (ij.first != region.i1 && ij.first != region.i1 + 1) continue;
            for (auto& t : e.torsion)
                if (t % 2 != 0) {
                    rep.cond2_no_odd_torsion_boundary = false;
                    rep.witnesses.push_back("odd torsion " + t.get_str() + " at (" +
                                            std::to_string(ij.first) + "," +
                                            std::to_string(ij.second) + ")");
                }
        }

        rep.cond3_first_row_torsion_free = true;
        for (auto& [ij, e] : z.groups)
            if (ij.first == region.i1 && !e.torsion.empty()) {
                rep.cond3_first_row_torsion_free = false;
                rep.witnesses.push_back("torsion in the first region row at (" +
                                        std::to_string(ij.first) + "," +
                                        std::to_string(ij.second) + ")");
            }

        rep.cond4_prior_row_vanishes = true;
        for (auto& [ij, e] : z.groups)
            if (ij.first == region.i1 - 1 && ij.second <= 2 * region.i1 - s - 3 &&
                (e.rank != 0 || !e.torsion.empty())) {
                rep.cond4_prior_row_vanishes = false;
                rep.witnesses.push_back("H^(" + std::to_string(ij.first) + "," +
                                        std::to_string(ij.second) + ") nonzero below the cutoff");
            }

        if (!rep.cond4_prior_row_vanishes && lee_pages && turner_pages) {
            rep.stronger_path_attempted = true;
            rep.stronger_path_ok = pages_vanish_at(*lee_pages, region.i1 - 1) &&
                                   pages_vanish_at(*turner_pages, region.i1 - 1);
            if (!rep.stronger_path_ok)
                rep.witnesses.push_back("a Lee or Turner differential out of grading " +
                                        std::to_string(region.i1 - 1) + " is nonzero");
        }

        rep.verdict = rep.cond1_thin && rep.cond2_no_odd_torsion_boundary &&
                      rep.cond3_first_row_torsion_free &&
                      (rep.cond4_prior_row_vanishes || rep.stronger_path_ok);

        if (rep.verdict) {
            for (int i = region.i1; i <= region.i2; ++i) {
                rep.k_plus[i] = z.rank(i, 2 * i - s + 1);
                rep.k_minus[i] = z.rank(i, 2 * i - s - 1);
                auto e = z.at(i, 2 * i - s - 1);
                rep.ell[i] = e ? static_cast<int64_t>(e->torsion.size()) : 0;
            }
            return rep;
        }
        if (!have_best || failure_count(rep) < failure_count(best)) {
            best = rep;
            have_best = true;
        }
    }
    return best;
}

bool verify_verdict(const BigradedGroup& z, const ThinRegion& region, CheckReport* why) {
    bool ok = true;
    for (auto& [ij, e] : z.groups) {
        if (ij.first < region.i1 || ij.first > region.i2) continue;
        for (auto& t : e.torsion)
            if (t != 2) {
                ok = false;
                if (why)
                    why->fail("torsion Z_" + t.get_str() + " at (" + std::to_string(ij.first) +
                              "," + std::to_string(ij.second) + ")");
            }
    }
    if (why && !ok) why->ok = false;
    return ok;
}

CheckReport lemma_rank_checks(const BigradedGroup& z, const ThinRegion& region, int s,
                              const InducedMap& dT_star, const InducedMap& dL_star) {
    CheckReport rep;
    auto rk = [](const InducedMap& m, int i, int j) {
        auto it = m.rank.find({i, j});
        return it == m.rank.end() ? int64_t(0) : it->second;
    };
    for (int i = region.i1; i < region.i2; ++i) {
        int64_t lower = rk(dT_star, i, 2 * i - s - 1);
        int64_t upper = rk(dT_star, i, 2 * i - s + 1);
        if (lower != upper)
            rep.fail("Turner rank lemma fails at i=" + std::to_string(i) + ": " +
                     std::to_string(lower) + " vs " + std::to_string(upper));
        int64_t lee = rk(dL_star, i, 2 * i - s - 1);
        auto e = z.at(i + 1, 2 * (i + 1) - s - 1);
        int64_t ell = e ? static_cast<int64_t>(e->torsion.size()) : 0;
        if (lower != lee || lee != ell)
            rep.fail("Turner/Lee/torsion lemma fails at i=" + std::to_string(i) +
                     ": dT=" + std::to_string(lower) + " dL=" + std::to_string(lee) +
                     " ell=" + std::to_string(ell));
    }
    for (auto& [ij, e] : z.groups) {
        auto [i, j] = ij;
        if (e.torsion.empty()) continue;
        if (i == region.i1)
            rep.fail("torsion in the first region row at i1");
        else if (i > region.i1 && i <= region.i2 && j != 2 * i - s - 1)
            rep.fail("torsion off the lower diagonal at (" + std::to_string(i) + "," +
                     std::to_string(j) + ")");
    }
    return rep;
}

}  // namespace kh
