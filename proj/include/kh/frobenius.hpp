#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kh/ring.hpp"

namespace kh {

enum class Theory { khovanov, lee, turner, barnatan_f2 };

// One graded piece of a Frobenius-style edge map. Labels: 0 is the unit
// generator "1" (degree +1), 1 is "X" (degree -1). Every table used here is
// symmetric in its two-circle slots, so merge/split factor order never
// matters. `jump` is the polynomial-degree raise of the induced chain map.
struct FrobPart {
    struct MulOut {
        int8_t coeff;
        uint8_t out;
    };
    struct ComulOut {
        int8_t coeff;
        uint8_t out1, out2;
    };
    int jump = 0;
    std::vector<MulOut> mul[2][2];
    std::vector<ComulOut> comul[2];
};

// A theory is the j-preserving Khovanov part plus an optional perturbation
// (Lee raises j by 4, Turner by 2). Filtered Bar-Natan over Z_2 is d + d_T.
struct FrobeniusTheory {
    Theory name = Theory::khovanov;
    FrobPart primary;
    std::optional<FrobPart> perturbation;
};

const FrobPart& khovanov_part();
const FrobPart& lee_part();
const FrobPart& turner_part();
const FrobeniusTheory& frobenius_theory(Theory t);

// LEE needs Q or Z_p with p odd; TURNER and BARNATAN_F2 need Z_2.
// KHOVANOV accepts Z, Q, and any Z_p. Throws on mismatch.
void check_theory_ring(Theory t, RingTag ring);

const char* theory_name(Theory t);

}  // namespace kh
