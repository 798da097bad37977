#include "kh/homology.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "kh/linalg.hpp"
#include "kh/parallel.hpp"
#include "kh/snf.hpp"

namespace kh {

int64_t FieldTable::total() const {
    int64_t t = 0;
    for (auto& [ij, d] : dims) t += d;
    return t;
}

int64_t BigradedGroup::torsion_count(int i, int j, uint32_t p) const {
    auto e = at(i, j);
    if (!e) return 0;
    int64_t c = 0;
    for (const auto& t : e->torsion)
        if (t % p == 0) ++c;
    return c;
}

std::vector<mpz_class> BigradedGroup::all_torsion() const {
    std::vector<mpz_class> out;
    for (auto& [ij, e] : groups) out.insert(out.end(), e.torsion.begin(), e.torsion.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::string LaurentPoly::text(const std::string& var) const {
    if (coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        auto [e, c] = *it;
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        int64_t a = std::abs(c);
        if (a != 1 || e == 0) os << a;
        if (e != 0) {
            if (a != 1) os << "*";
            os << var;
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

namespace {

// factor an SNF diagonal into prime powers (primary decomposition)
void primary_decompose(const mpz_class& d, std::vector<mpz_class>& out) {
    mpz_class m = d;
    for (uint32_t p = 2; mpz_class(p) * p <= m; p = (p == 2 ? 3 : p + 2)) {
        if (m % p != 0) continue;
        mpz_class q = 1;
        while (m % p == 0) {
            q *= p;
            m /= p;
        }
        out.push_back(q);
    }
    if (m > 1) {
        if (!mpz_probab_prime_p(m.get_mpz_t(), 30))
            throw std::runtime_error("torsion coefficient with large composite factor: " +
                                     m.get_str());
        out.push_back(m);
    }
}

struct BlockRanks {
    std::map<Bigrading, int64_t> rank;                   // rank of d out of (i,j)
    std::map<Bigrading, std::vector<mpz_class>> diag;    // SNF diagonals (integral runs)
};

// per-block rank (and SNF diagonals over Z) for the Khovanov differential
BlockRanks block_ranks(const CubeComplex& c, RingTag field, int threads) {
    const auto& sup = c.support();
    BlockRanks out;
    std::vector<Bigrading> keys(sup.begin(), sup.end());
    std::vector<int64_t> ranks(keys.size(), 0);
    std::vector<std::vector<mpz_class>> diags(keys.size());
    run_parallel(
        static_cast<int64_t>(keys.size()),
        [&](int64_t k) {
            auto [i, j] = keys[k];
            SparseMat<int64_t> blk = c.khovanov_block(i, j);
            if (blk.entries.empty()) return;
            if (field.kind == RingKind::mod_p) {
                PrimeField F(field.p);
                ModOps ops{&F};
                auto rk = rank_kernel_field(ops, blk,
                                            [&](int64_t v) { return F.reduce(v); }, false);
                ranks[k] = rk.rank;
            } else {
                // fraction-free integer elimination: Q-rank equals Z-rank
                auto snf = smith_normal_form(blk);
                ranks[k] = snf.rank;
                diags[k] = std::move(snf.diagonal);
            }
        },
        threads);
    for (size_t k = 0; k < keys.size(); ++k) {
        out.rank[keys[k]] = ranks[k];
        if (field.kind == RingKind::integers) out.diag[keys[k]] = std::move(diags[k]);
    }
    return out;
}

}  // namespace

FieldTable field_homology(const CubeComplex& c, RingTag field, int threads) {
    if (!field.is_field()) throw std::invalid_argument("field_homology needs Q or Z_p");
    if (c.theory() != Theory::khovanov)
        throw std::invalid_argument("field_homology is for the KHOVANOV theory; filtered "
                                    "theories go through the spectral module");
    RingTag rt = field.kind == RingKind::rationals ? RingTag::Z() : field;
    BlockRanks br = block_ranks(c, rt, threads);
    FieldTable t{field, {}};
    for (const auto& ij : c.support()) {
        auto [i, j] = ij;
        int64_t dim = c.block(i, j).count;
        auto out = br.rank.find({i, j});
        if (out != br.rank.end()) dim -= out->second;
        auto in = br.rank.find({i - 1, j});
        if (in != br.rank.end()) dim -= in->second;
        if (dim) t.dims[{i, j}] = dim;
    }
    return t;
}

BigradedGroup integral_homology(const CubeComplex& c, int threads) {
    if (c.theory() != Theory::khovanov)
        throw std::invalid_argument("integral_homology is for the KHOVANOV theory");
    if (c.ring().kind != RingKind::integers)
        throw std::invalid_argument("integral_homology needs the complex over Z");
    BlockRanks br = block_ranks(c, RingTag::Z(), threads);
    BigradedGroup z;
    for (const auto& ij : c.support()) {
        auto [i, j] = ij;
        GroupEntry e;
        e.rank = c.block(i, j).count;
        auto out = br.rank.find({i, j});
        if (out != br.rank.end()) e.rank -= out->second;
        auto in = br.rank.find({i - 1, j});
        if (in != br.rank.end()) e.rank -= in->second;
        auto dg = br.diag.find({i - 1, j});
        if (dg != br.diag.end())
            for (const auto& d : dg->second)
                if (d > 1) primary_decompose(d, e.torsion);
        std::sort(e.torsion.begin(), e.torsion.end());
        if (e.rank != 0 || !e.torsion.empty()) z.groups[{i, j}] = std::move(e);
    }
    return z;
}

LaurentPoly jones_polynomial(const BigradedGroup& z) {
    LaurentPoly p;
    for (const auto& [ij, e] : z.groups) {
        auto [i, j] = ij;
        if (e.rank) p.add(j, (i % 2 == 0 ? 1 : -1) * e.rank);
    }
    return p;
}

FieldTable shifted(const FieldTable& t, int dh, int dq) {
    FieldTable out{t.field, {}};
    for (auto& [ij, d] : t.dims) out.dims[{ij.first + dh, ij.second + dq}] = d;
    return out;
}

BigradedGroup shifted(const BigradedGroup& z, int dh, int dq) {
    BigradedGroup out;
    for (auto& [ij, e] : z.groups) out.groups[{ij.first + dh, ij.second + dq}] = e;
    return out;
}

FieldTable tensor(const FieldTable& a, const FieldTable& b) {
    if (!(a.field == b.field)) throw std::invalid_argument("tensor: field mismatch");
    FieldTable out{a.field, {}};
    for (auto& [ij, d] : a.dims)
        for (auto& [kl, e] : b.dims) {
            auto& slot = out.dims[{ij.first + kl.first, ij.second + kl.second}];
            slot += d * e;
        }
    return out;
}

CheckReport uct_check(const BigradedGroup& z, const FieldTable& f) {
    if (f.field.kind != RingKind::mod_p)
        throw std::invalid_argument("uct_check compares integral homology with a Z_p table");
    uint32_t p = f.field.p;
    CheckReport rep;
    std::set<Bigrading> keys;
    for (auto& [ij, e] : z.groups) {
        keys.insert(ij);
        keys.insert({ij.first - 1, ij.second});
    }
    for (auto& [ij, d] : f.dims) keys.insert(ij);
    for (auto [i, j] : keys) {
        int64_t expect = z.rank(i, j) + z.torsion_count(i, j, p) + z.torsion_count(i + 1, j, p);
        int64_t got = f.dim(i, j);
        if (expect != got)
            rep.fail("UCT mismatch at (" + std::to_string(i) + "," + std::to_string(j) +
                     "): expected " + std::to_string(expect) + ", computed " + std::to_string(got));
    }
    return rep;
}

CheckReport mirror_duality_check(const BraidWord& w, RingTag field, SignConvention conv) {
    CubeComplex cw(braid_closure(w, conv), Theory::khovanov, RingTag::Z());
    CubeComplex cm(braid_closure(mirror(w), conv), Theory::khovanov, RingTag::Z());
    FieldTable tw = field_homology(cw, field);
    FieldTable tm = field_homology(cm, field);
    CheckReport rep;
    std::set<Bigrading> keys;
    for (auto& [ij, d] : tw.dims) keys.insert({-ij.first, -ij.second});
    for (auto& [ij, d] : tm.dims) keys.insert(ij);
    for (auto [i, j] : keys)
        if (tm.dim(i, j) != tw.dim(-i, -j))
            rep.fail("mirror duality fails at (" + std::to_string(i) + "," + std::to_string(j) +
                     ")");
    return rep;
}

LesReport les_consistency(const BraidWord& w, int crossing_index, RingTag field,
                          SignConvention conv) {
    PlanarDiagram d = braid_closure(w, conv);
    if (crossing_index < 0 || crossing_index >= d.crossing_count())
        throw std::invalid_argument("les_consistency: crossing index out of range");
    PlanarDiagram d0 = smooth_at(d, crossing_index, 0);
    PlanarDiagram d1 = smooth_at(d, crossing_index, 1);

    FieldTable h = field_homology(CubeComplex(d, Theory::khovanov, RingTag::Z()), field);
    FieldTable h0 = field_homology(CubeComplex(d0, Theory::khovanov, RingTag::Z()), field);
    FieldTable h1 = field_homology(CubeComplex(d1, Theory::khovanov, RingTag::Z()), field);

    LesReport rep;
    rep.crossing_sign = d.crossings[crossing_index].sign;
    std::set<int> js;
    std::set<int> is;
    auto note = [&](const FieldTable& t) {
        for (auto& [ij, dim] : t.dims) {
            is.insert(ij.first);
            js.insert(ij.second);
        }
    };
    note(h);
    note(h0);
    note(h1);
    int ilo = is.empty() ? 0 : *is.begin() - 2, ihi = is.empty() ? 0 : *is.rbegin() + 2;
    int jlo = js.empty() ? 0 : *js.begin() - 14, jhi = js.empty() ? 0 : *js.rbegin() + 14;

    // each strand is exact, so its alternating dimension sum vanishes; the
    // sign alternates across all three terms per homological step
    auto sign_of = [](int i) { return (((i % 2) + 2) % 2 == 0) ? 1 : -1; };
    if (rep.crossing_sign < 0) {
        // ... -> H^{i,j+1}(D1) -> H^{i,j}(D) -> H^{i-c,j-3c-1}(D0) -> H^{i+1,j+1}(D1) -> ...
        int c = d0.n_minus - d.n_minus;
        rep.shift_c = c;
        for (int j = jlo; j <= jhi; ++j) {
            int64_t sum = 0;
            for (int i = ilo - std::abs(c); i <= ihi + std::abs(c); ++i)
                sum += sign_of(i) *
                       (h1.dim(i, j + 1) - h.dim(i, j) + h0.dim(i - c, j - 3 * c - 1));
            if (sum != 0)
                rep.check.fail("negative-crossing LES strand j=" + std::to_string(j) +
                               " has alternating sum " + std::to_string(sum));
        }
    } else {
        // ... -> H^{i-c-1,j-3c-2}(D1) -> H^{i,j}(D) -> H^{i,j-1}(D0) -> H^{i-c,j-3c-2}(D1) -> ...
        int c = d1.n_minus - d.n_minus;
        rep.shift_c = c;
        for (int j = jlo; j <= jhi; ++j) {
            int64_t sum = 0;
            for (int i = ilo - std::abs(c) - 1; i <= ihi + std::abs(c) + 1; ++i)
                sum += sign_of(i) *
                       (h1.dim(i - c - 1, j - 3 * c - 2) - h.dim(i, j) + h0.dim(i, j - 1));
            if (sum != 0)
                rep.check.fail("positive-crossing LES strand j=" + std::to_string(j) +
                               " has alternating sum " + std::to_string(sum));
        }
    }
    return rep;
}

}  // namespace kh
