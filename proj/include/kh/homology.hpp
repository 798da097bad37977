#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "kh/complex.hpp"
#include "kh/ring.hpp"

namespace kh {

using Bigrading = std::pair<int, int>;  // (i, j)

struct FieldTable {
    RingTag field;
    std::map<Bigrading, int64_t> dims;

    int64_t dim(int i, int j) const {
        auto it = dims.find({i, j});
        return it == dims.end() ? 0 : it->second;
    }
    int64_t total() const;
    bool operator==(const FieldTable& o) const { return field == o.field && dims == o.dims; }
};

// Integral homology: free rank plus torsion prime powers per bigrading,
// primary-decomposed and sorted.
struct GroupEntry {
    int64_t rank = 0;
    std::vector<mpz_class> torsion;
    bool operator==(const GroupEntry&) const = default;
};

struct BigradedGroup {
    std::map<Bigrading, GroupEntry> groups;

    const GroupEntry* at(int i, int j) const {
        auto it = groups.find({i, j});
        return it == groups.end() ? nullptr : &it->second;
    }
    int64_t rank(int i, int j) const {
        auto e = at(i, j);
        return e ? e->rank : 0;
    }
    // number of torsion summands of p-power order at (i, j)
    int64_t torsion_count(int i, int j, uint32_t p) const;
    std::vector<mpz_class> all_torsion() const;
    bool operator==(const BigradedGroup&) const = default;
};

struct LaurentPoly {
    std::map<int, int64_t> coeffs;  // exponent -> coefficient
    void add(int e, int64_t c) {
        auto& slot = coeffs[e];
        slot += c;
        if (slot == 0) coeffs.erase(e);
    }
    bool operator==(const LaurentPoly&) const = default;
    std::string text(const std::string& var = "q") const;
};

// dims of H^{i,j} for the KHOVANOV theory over Q or Z_p
FieldTable field_homology(const CubeComplex& c, RingTag field, int threads = 0);

BigradedGroup integral_homology(const CubeComplex& c, int threads = 0);

LaurentPoly jones_polynomial(const BigradedGroup& z);

// graded shift helpers: [r] shifts i, {s} shifts j (paper bracket conventions)
FieldTable shifted(const FieldTable& t, int dh, int dq);
BigradedGroup shifted(const BigradedGroup& z, int dh, int dq);
FieldTable tensor(const FieldTable& a, const FieldTable& b);

struct CheckReport {
    bool ok = true;
    std::vector<std::string> violations;
    void fail(std::string msg) {
        ok = false;
        violations.push_back(std::move(msg));
    }
};

// dim_{Z_p} H^{i,j} == rk H^{i,j} + t_p(i,j) + t_p(i+1,j)
CheckReport uct_check(const BigradedGroup& z, const FieldTable& f);

// dim H^{i,j}(mirror closure) == dim H^{-i,-j}(closure) over the given field
CheckReport mirror_duality_check(const BraidWord& w, RingTag field,
                                 SignConvention conv = SignConvention::paper);

// Euler-characteristic consistency of the unoriented skein long exact
// sequence at one crossing: alternating dimension sums vanish per j-strand.
struct LesReport {
    int crossing_sign = 0;
    int shift_c = 0;
    CheckReport check;
};
LesReport les_consistency(const BraidWord& w, int crossing_index, RingTag field,
                          SignConvention conv = SignConvention::paper);

}  // namespace kh
