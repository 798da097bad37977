#include "kh/braid.hpp"

#include <sstream>
#include <stdexcept>

namespace kh {

BraidWord::BraidWord(int s, std::vector<int> l) : strands(s), letters(std::move(l)) {
    if (strands < 1) throw std::invalid_argument("braid needs at least one strand");
    for (int k : letters)
        if (k == 0 || std::abs(k) >= strands)
            throw std::invalid_argument("generator index " + std::to_string(k) +
                                        " out of range for " + std::to_string(strands) +
                                        " strands");
}

std::string BraidWord::text() const {
    std::ostringstream os;
    for (size_t i = 0; i < letters.size(); ++i) {
        if (i) os << ' ';
        os << letters[i];
    }
    return os.str();
}

std::vector<int> half_twist_letters(int strands) {
    std::vector<int> out;
    for (int top = strands - 1; top >= 1; --top)
        for (int k = 1; k <= top; ++k) out.push_back(k);
    return out;
}

static void append_power(std::vector<int>& letters, const std::vector<int>& base, long power) {
    if (power >= 0) {
        for (long t = 0; t < power; ++t) letters.insert(letters.end(), base.begin(), base.end());
    } else {
        std::vector<int> inv(base.rbegin(), base.rend());
        for (int& k : inv) k = -k;
        for (long t = 0; t < -power; ++t) letters.insert(letters.end(), inv.begin(), inv.end());
    }
}

BraidWord parse_braid_word(const std::string& text, int strands) {
    if (strands < 1) throw std::invalid_argument("braid needs at least one strand");
    std::vector<int> letters;
    std::istringstream is(text);
    std::string tok;
    auto delta = half_twist_letters(strands);
    while (is >> tok) {
        if (tok == "D") {
            append_power(letters, delta, 1);
            continue;
        }
        if (tok.rfind("D^", 0) == 0) {
            size_t used = 0;
            long k;
            try {
                k = std::stol(tok.substr(2), &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("malformed token '" + tok + "'");
            }
            if (used != tok.size() - 2) throw std::invalid_argument("malformed token '" + tok + "'");
            append_power(letters, delta, k);
            continue;
        }
        size_t used = 0;
        int k;
        try {
            k = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed token '" + tok + "'");
        }
        if (used != tok.size()) throw std::invalid_argument("malformed token '" + tok + "'");
        letters.push_back(k);
    }
    return BraidWord(strands, std::move(letters));
}

BraidWord mirror(const BraidWord& w) {
    std::vector<int> out(w.letters);
    for (int& k : out) k = -k;
    return BraidWord(w.strands, std::move(out));
}

BraidWord phi_swap(const BraidWord& w) {
    if (w.strands != 3) throw std::invalid_argument("phi_swap is defined on 3-strand braids");
    std::vector<int> out(w.letters);
    for (int& k : out) {
        int s = k > 0 ? 1 : -1;
        k = s * (std::abs(k) == 1 ? 2 : 1);
    }
    return BraidWord(w.strands, std::move(out));
}

ClosureInfo closure_permutation(const BraidWord& w) {
    int s = w.strands;
    std::vector<int> pos(s + 1);  // pos[q] = strand currently at position q
    for (int q = 0; q <= s; ++q) pos[q] = q;
    for (int k : w.letters) {
        int a = std::abs(k);
        std::swap(pos[a], pos[a + 1]);
    }
    ClosureInfo info;
    info.perm.assign(s + 1, 0);
    std::vector<int> top_of(s + 1, 0);  // strand -> its top position
    for (int q = 1; q <= s; ++q) top_of[pos[q]] = q;
    for (int q = 1; q <= s; ++q) info.perm[q] = top_of[q];
    info.component_of_strand.assign(s + 1, -1);
    for (int q = 1; q <= s; ++q) {
        if (info.component_of_strand[q] >= 0) continue;
        int c = info.components++;
        for (int r = q; info.component_of_strand[r] < 0; r = info.perm[r])
            info.component_of_strand[r] = c;
    }
    return info;
}

std::string murasugi_name(MurasugiType t) {
    return "Omega_" + std::to_string(static_cast<int>(t));
}

void MurasugiClass::validate() const {
    auto need = [&](size_t np, size_t nq) {
        if (p.size() != np || q.size() != nq)
            throw std::invalid_argument(murasugi_name(type) + ": exponent arity mismatch");
    };
    switch (type) {
        case MurasugiType::omega0:
        case MurasugiType::omega1:
        case MurasugiType::omega2:
        case MurasugiType::omega3: need(0, 0); break;
        case MurasugiType::omega4: need(1, 0); break;
        case MurasugiType::omega5: need(0, 1); break;
        case MurasugiType::omega6:
            if (p.size() != q.size() || p.empty())
                throw std::invalid_argument("Omega_6 needs equal-length p, q with r >= 1");
            break;
    }
    for (long e : p)
        if (e < 0 || (e == 0 && !allow_zero_exponents))
            throw std::invalid_argument(murasugi_name(type) + ": nonpositive exponent");
    for (long e : q)
        if (e < 0 || (e == 0 && !allow_zero_exponents))
            throw std::invalid_argument(murasugi_name(type) + ": nonpositive exponent");
}

BraidWord murasugi_word(const MurasugiClass& c) {
    c.validate();
    auto delta = half_twist_letters(3);
    std::vector<int> letters;
    long twist = 2 * c.n + (c.type == MurasugiType::omega3 ? 1 : 0);
    if (twist < 0) throw std::invalid_argument("murasugi_word needs n >= 0; use reduce_to_nonneg");
    append_power(letters, delta, twist);
    auto rep = [&](int gen, long count) {
        for (long t = 0; t < count; ++t) letters.push_back(gen);
    };
    switch (c.type) {
        case MurasugiType::omega0:
        case MurasugiType::omega3: break;
        case MurasugiType::omega1:
            letters.push_back(1);
            letters.push_back(2);
            break;
        case MurasugiType::omega2:
            for (int t = 0; t < 2; ++t) {
                letters.push_back(1);
                letters.push_back(2);
            }
            break;
        case MurasugiType::omega4: rep(-1, c.p[0]); break;
        case MurasugiType::omega5: rep(2, c.q[0]); break;
        case MurasugiType::omega6:
            for (size_t i = 0; i < c.p.size(); ++i) {
                rep(-1, c.p[i]);
                rep(2, c.q[i]);
            }
            break;
    }
    return BraidWord(3, std::move(letters));
}

ReduceResult reduce_to_nonneg(const MurasugiClass& c) {
    c.validate();
    if (c.n >= 0) return {c, {}};
    long m = -c.n;  // write the input as Delta^{-2m} beta (or Delta^{-2m+1} for omega3)
    MurasugiClass out;
    std::vector<std::string> tr;
    switch (c.type) {
        case MurasugiType::omega0:  // m(D^{-2m}) = D^{2m}
            out = {MurasugiType::omega0, m, {}, {}};
            tr = {"mirror"};
            break;
        case MurasugiType::omega1:  // m(D^{-2m} s1 s2) = D^{2m-2}(s1 s2)^2
            out = {MurasugiType::omega2, m - 1, {}, {}};
            tr = {"mirror"};
            break;
        case MurasugiType::omega2:  // m(D^{-2m}(s1 s2)^2) = D^{2m-2}(s1 s2)
            out = {MurasugiType::omega1, m - 1, {}, {}};
            tr = {"mirror"};
            break;
        case MurasugiType::omega3:  // m(D^{-2m+1}) = D^{2m-1} = D^{2(m-1)+1}
            out = {MurasugiType::omega3, m - 1, {}, {}};
            tr = {"mirror"};
            break;
        case MurasugiType::omega4:  // m phi(D^{-2m} s1^{-p}) = D^{2m} s2^{p}
            out = {MurasugiType::omega5, m, {}, {c.p[0]}};
            tr = {"mirror", "phi"};
            break;
        case MurasugiType::omega5:  // m phi(D^{-2m} s2^{q}) = D^{2m} s1^{-q}
            out = {MurasugiType::omega4, m, {c.q[0]}, {}};
            tr = {"mirror", "phi"};
            break;
        case MurasugiType::omega6: {
            // m phi(D^{-2m} s1^{-p1} s2^{q1} ...) = D^{2m} s2^{p1} s1^{-q1} ...,
            // which sits in Omega_6' with a zero exponent at each end
            out.type = MurasugiType::omega6;
            out.n = m;
            out.allow_zero_exponents = true;
            out.p.push_back(0);
            for (long e : c.q) out.p.push_back(e);
            for (long e : c.p) out.q.push_back(e);
            out.q.push_back(0);
            tr = {"mirror", "phi"};
            break;
        }
    }
    out.validate();
    return {out, tr};
}

}  // namespace kh
