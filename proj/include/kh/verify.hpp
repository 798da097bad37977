#pragma once

#include <string>
#include <vector>

#include "kh/braid.hpp"
#include "kh/homology.hpp"

namespace kh {

struct PaperCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct PaperSuiteResult {
    std::vector<PaperCheck> checks;
    std::vector<std::string> skipped;  // family members / sub-checks over budget
    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// The torsion program for the twist-positive Murasugi classes: for every
// family member within the crossing budget, verify
//  - the field and integral decompositions of odd half-twist closures,
//  - only-Z_2 integral torsion,
//  - Turner / Lee infinity pages against the linking-number predictions,
//  - the TBV identity and nu* acyclicity,
//  - Bockstein terminal pages against free ranks mod p in {2,3,5,7},
//  - thin-region hypothesis checks with verified verdicts.
// Spectral-sequence checks only run for members within `spectral_budget`
// crossings (they need dense transform bookkeeping); skipped members are
// listed with a notice.
PaperSuiteResult verify_paper_suite(int crossing_budget, int spectral_budget = 12,
                                    int threads = 0);

// members of Omega_0..Omega_3 with closure crossing count within budget
std::vector<std::pair<std::string, BraidWord>> paper_family(int crossing_budget);

}  // namespace kh
