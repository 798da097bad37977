#pragma once

#include <string>
#include <vector>

namespace kh {

// A word in the braid group B_s: letters are nonzero integers k with
// |k| < strands, k > 0 meaning sigma_k and k < 0 its inverse. The empty word
// is allowed; its closure is the strands-component unlink.
struct BraidWord {
    int strands = 1;
    std::vector<int> letters;

    BraidWord() = default;
    BraidWord(int s, std::vector<int> l);

    int crossings() const { return static_cast<int>(letters.size()); }
    bool operator==(const BraidWord&) const = default;
    std::string text() const;
};

// Grammar: whitespace-separated tokens, each a signed integer or "D" / "D^k"
// (half-twist power, expanded literally for the given strand count).
BraidWord parse_braid_word(const std::string& text, int strands);

// The half twist on s strands: (s1 s2 ... s_{s-1})(s1 ... s_{s-2})...(s1).
std::vector<int> half_twist_letters(int strands);

BraidWord mirror(const BraidWord& w);

// Swap sigma_1 <-> sigma_2 (3-strand braids only).
BraidWord phi_swap(const BraidWord& w);

// Closure permutation and component count. perm[q] = top position reached by
// the strand entering at bottom position q (1-based; index 0 unused).
struct ClosureInfo {
    std::vector<int> perm;
    int components = 0;
    std::vector<int> component_of_strand;  // 1-based bottom position -> component id
};
ClosureInfo closure_permutation(const BraidWord& w);

enum class MurasugiType { omega0, omega1, omega2, omega3, omega4, omega5, omega6 };

// A conjugacy class representative per Murasugi's classification of B_3.
// p/q exponent lists are class-dependent: omega4 takes p, omega5 takes q,
// omega6 takes equal-length lists (zeros only valid in the extended class).
struct MurasugiClass {
    MurasugiType type = MurasugiType::omega0;
    long n = 0;
    std::vector<long> p, q;
    bool allow_zero_exponents = false;  // the Omega_6' extension

    void validate() const;  // throws on arity mismatch or bad exponents
};

BraidWord murasugi_word(const MurasugiClass& c);

// Rewrites a class with n < 0 to an equivalent-up-to-mirror/phi class with
// n >= 0, per the mirror/phi identities; `transforms` records the applied
// maps in order. For omega6 the image lands in the extended class Omega_6'
// (zero exponents), reported by the flag on the returned class.
struct ReduceResult {
    MurasugiClass cls;
    std::vector<std::string> transforms;  // "mirror", "phi"
};
ReduceResult reduce_to_nonneg(const MurasugiClass& c);

std::string murasugi_name(MurasugiType t);

}  // namespace kh
