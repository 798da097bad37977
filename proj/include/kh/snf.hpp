#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "kh/sparse.hpp"

namespace kh {

// Smith normal form of an integer matrix. `diagonal` lists the nonzero
// invariant factors d1 | d2 | ..., all positive; rank is their count.
// When transforms are requested, U and V are unimodular with U*A*V = S,
// where S is diag(diagonal) padded with zeros; Vinv is V^{-1}, tracked
// during elimination.
struct SmithDecomposition {
    std::vector<mpz_class> diagonal;
    int64_t rank = 0;
    std::optional<SparseMat<mpz_class>> U, V, Vinv;
};

SmithDecomposition smith_normal_form(const SparseMat<mpz_class>& a, bool with_transforms = false);

// Fast path for cube blocks: int64 arithmetic with overflow detection,
// falling back to exact bignum elimination if anything overflows.
SmithDecomposition smith_normal_form(const SparseMat<int64_t>& a);

}  // namespace kh
