#pragma once

// Independent reference implementations used only by tests. Each one takes a
// different algorithmic route from the library code it checks:
//  - jones_bracket_oracle: Temperley-Lieb transfer matrices (skein relation),
//    no cube of resolutions
//  - dense_snf_oracle: textbook row/column reduction on a dense matrix
//  - trace_circles_oracle: end-walking circle count, no union-find
//  - connecting_map_oracle: dense Bockstein connecting map via explicit lift

#include <gmpxx.h>

#include <vector>

#include "kh/braid.hpp"
#include "kh/diagram.hpp"
#include "kh/homology.hpp"

namespace kh::oracle {

LaurentPoly jones_bracket_oracle(const BraidWord& w,
                                 SignConvention conv = SignConvention::paper);

std::vector<mpz_class> dense_snf_oracle(std::vector<std::vector<mpz_class>> m);

int trace_circles_oracle(const PlanarDiagram& d, uint64_t vertex);

// (d * lift(x)) / p^r mod p computed with dense arithmetic and explicit
// entrywise verification that p^r * y == d * lift(x) over Z.
std::vector<uint32_t> connecting_map_oracle(const std::vector<uint32_t>& x,
                                            const std::vector<std::vector<mpz_class>>& d,
                                            uint32_t p, unsigned r);

}  // namespace kh::oracle
