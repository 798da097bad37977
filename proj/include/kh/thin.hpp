#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "kh/homology.hpp"
#include "kh/spectral.hpp"

namespace kh {

// Per homological grading, the set of diagonal values 2i - j over the support
// of integral homology together with every mod-p support derivable from it by
// universal coefficients. Only primes dividing a torsion coefficient can
// enlarge the rational support, so the "all primes" quantifier is finite.
struct DiagonalProfile {
    std::map<int, std::set<int>> diagonals;
    std::set<uint32_t> torsion_primes;

    const std::set<int>* at(int i) const {
        auto it = diagonals.find(i);
        return it == diagonals.end() ? nullptr : &it->second;
    }
};

DiagonalProfile support_diagonals(const BigradedGroup& z);

// A maximal interval [i1, i2] on which the support lies on the two adjacent
// diagonals s -+ 1 for a common s; when the support inside sits on a single
// diagonal every compatible s is listed.
struct ThinRegion {
    int i1 = 0, i2 = 0;
    std::set<int> s_values;
};

std::vector<ThinRegion> find_thin_regions(const DiagonalProfile& p);

// Hypotheses (1)-(4) of the torsion theorem on one region, with the
// stronger-theorem fallback (vanishing Lee/Turner differentials out of
// grading i1 - 1 on every page) attempted when (4) fails and page data is
// supplied.
struct HypothesisReport {
    int i1 = 0, i2 = 0;
    int s = 0;
    bool cond1_thin = false;
    bool cond2_no_odd_torsion_boundary = false;
    bool cond3_first_row_torsion_free = false;
    bool cond4_prior_row_vanishes = false;
    bool stronger_path_attempted = false;
    bool stronger_path_ok = false;
    bool verdict = false;
    std::vector<std::string> witnesses;
    // derived bookkeeping per grading in [i1, i2]
    std::map<int, int64_t> k_plus, k_minus, ell;
};

HypothesisReport check_main_theorem(const BigradedGroup& z, const DiagonalProfile& prof,
                                    const ThinRegion& region,
                                    const SpectralSequence* lee_pages = nullptr,
                                    const SpectralSequence* turner_pages = nullptr);

// The theorem's conclusion on a positively-judged region: every torsion
// coefficient with i1 <= i <= i2 equals exactly 2.
bool verify_verdict(const BigradedGroup& z, const ThinRegion& region, CheckReport* why = nullptr);

// Rank identities inside a verified thin region:
//   rk dT*(i, 2i-s-1) = rk dT*(i, 2i-s+1)               (Turner rank)
//   rk dT*(i, 2i-s-1) = rk dL*(i, 2i-s-1) = ell_{i+1}   (Turner/Lee/torsion)
//   torsion with i in (i1, i2] sits at (i, 2i-s-1) only  (lower diagonal)
//   ell_{i1} = 0
CheckReport lemma_rank_checks(const BigradedGroup& z, const ThinRegion& region, int s,
                              const InducedMap& dT_star, const InducedMap& dL_star);

}  // namespace kh
