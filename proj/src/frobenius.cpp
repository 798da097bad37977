#include "kh/frobenius.hpp"

namespace kh {

namespace {

FrobPart make_khovanov() {
    FrobPart t;
    t.jump = 0;
    // m(1@1)=1, m(1@X)=X, m(X@1)=X, m(X@X)=0
    t.mul[0][0] = {{1, 0}};
    t.mul[0][1] = {{1, 1}};
    t.mul[1][0] = {{1, 1}};
    t.mul[1][1] = {};
    // Delta(1)=1@X+X@1, Delta(X)=X@X
    t.comul[0] = {{1, 0, 1}, {1, 1, 0}};
    t.comul[1] = {{1, 1, 1}};
    return t;
}

FrobPart make_lee() {
    FrobPart t;
    t.jump = 4;
    // m_L(X@X)=1, everything else 0
    t.mul[1][1] = {{1, 0}};
    // Delta_L(X)=1@1
    t.comul[1] = {{1, 0, 0}};
    return t;
}

FrobPart make_turner() {
    FrobPart t;
    t.jump = 2;
    // m_T(X@X)=X, everything else 0
    t.mul[1][1] = {{1, 1}};
    // Delta_T(1)=1@1
    t.comul[0] = {{1, 0, 0}};
    return t;
}

}  // namespace

const FrobPart& khovanov_part() {
    static const FrobPart t = make_khovanov();
    return t;
}
const FrobPart& lee_part() {
    static const FrobPart t = make_lee();
    return t;
}
const FrobPart& turner_part() {
    static const FrobPart t = make_turner();
    return t;
}

const FrobeniusTheory& frobenius_theory(Theory t) {
    static const FrobeniusTheory kh{Theory::khovanov, make_khovanov(), std::nullopt};
    static const FrobeniusTheory lee{Theory::lee, make_khovanov(), make_lee()};
    static const FrobeniusTheory tur{Theory::turner, make_khovanov(), make_turner()};
    // filtered Bar-Natan: m_B = m + m_T and Delta_B = Delta + Delta_T over Z_2
    static const FrobeniusTheory bn{Theory::barnatan_f2, make_khovanov(), make_turner()};
    switch (t) {
        case Theory::khovanov: return kh;
        case Theory::lee: return lee;
        case Theory::turner: return tur;
        case Theory::barnatan_f2: return bn;
    }
    throw std::logic_error("unknown theory");
}

void check_theory_ring(Theory t, RingTag ring) {
    switch (t) {
        case Theory::khovanov: return;
        case Theory::lee:
            if (ring.kind == RingKind::rationals) return;
            if (ring.kind == RingKind::mod_p && ring.p != 2) return;
            throw std::invalid_argument(
                "Lee theory needs Q or Z_p with p odd (the Z_2 analogue is TURNER)");
        case Theory::turner:
        case Theory::barnatan_f2:
            if (ring.kind == RingKind::mod_p && ring.p == 2) return;
            throw std::invalid_argument("Turner/Bar-Natan theories are Z_2 theories");
    }
}

const char* theory_name(Theory t) {
    switch (t) {
        case Theory::khovanov: return "khovanov";
        case Theory::lee: return "lee";
        case Theory::turner: return "turner";
        case Theory::barnatan_f2: return "barnatan_f2";
    }
    return "?";
}

}  // namespace kh
