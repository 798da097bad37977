#include "kh/complex.hpp"

#include <algorithm>
#include <stdexcept>

namespace kh {

namespace {

// binomial table for label ranking, clamped (values above C(40,20) unused)
struct Binomials {
    static constexpr int N = 40;
    int64_t c[N + 1][N + 1];
    Binomials() {
        for (int n = 0; n <= N; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
            for (int k = n + 1; k <= N; ++k) c[n][k] = 0;
        }
    }
    int64_t operator()(int n, int k) const {
        if (k < 0 || k > n || n < 0) return 0;
        return c[n][k];
    }
};
const Binomials BC;

}  // namespace

// Rank of a k-bit mask among all k-bit masks in increasing numeric order
// (combinatorial number system).
int64_t CubeComplex::rank_mask(uint32_t mask, int k) {
    int64_t r = 0;
    int seen = 0;
    while (mask) {
        int p = __builtin_ctz(mask);
        mask &= mask - 1;
        ++seen;
        r += BC(p, seen);
    }
    (void)k;
    return r;
}

uint32_t CubeComplex::unrank_mask(int64_t r, int c, int k) {
    uint32_t mask = 0;
    for (int t = k; t >= 1; --t) {
        int p = t - 1;
        while (p + 1 <= c - 1 && BC(p + 1, t) <= r) ++p;
        mask |= uint32_t(1) << p;
        r -= BC(p, t);
    }
    return mask;
}

CubeComplex::CubeComplex(PlanarDiagram d, Theory t, RingTag ring)
    : diag_(std::move(d)), theory_(t), ring_(ring), n_(diag_.crossing_count()) {
    check_theory_ring(t, ring);
    if (n_ > 30) throw std::invalid_argument("crossing count too large for cube enumeration");

    const uint64_t nv = uint64_t(1) << n_;
    circ_count_.resize(nv);
    map_cached_ = nv * static_cast<uint64_t>(diag_.n_arcs) * 4 <= (uint64_t(1) << 29);
    if (map_cached_) circ_map_.resize(nv * diag_.n_arcs);

    std::vector<int32_t> scratch(diag_.n_arcs);
    std::map<std::pair<int, int>, int64_t> counts;
    for (uint64_t v = 0; v < nv; ++v) {
        int32_t* dst = map_cached_ ? &circ_map_[v * diag_.n_arcs] : scratch.data();
        int c = resolve_packed(diag_, v, dst);
        circ_count_[v] = static_cast<uint8_t>(c);
        int h = __builtin_popcountll(v);
        int i = h - diag_.n_minus;
        int base = h + diag_.n_plus - 2 * diag_.n_minus;
        for (int x = 0; x <= c; ++x) counts[{i, base + c - 2 * x}] += BC(c, x);
    }
    for (auto& [ij, cnt] : counts) {
        Block b;
        b.i = ij.first;
        b.j = ij.second;
        b.count = cnt;
        blocks_.emplace(ij, std::move(b));
        support_.push_back(ij);
        total_ += cnt;
    }
    // second pass fills per-block vertex lists in ascending vertex order
    for (uint64_t v = 0; v < nv; ++v) {
        int c = circ_count_[v];
        int h = __builtin_popcountll(v);
        int i = h - diag_.n_minus;
        int base = h + diag_.n_plus - 2 * diag_.n_minus;
        for (int x = 0; x <= c; ++x) {
            Block& b = blocks_.at({i, base + c - 2 * x});
            b.offset.push_back(0);  // fixed below
            b.vertices.push_back(static_cast<uint32_t>(v));
            b.xcount.push_back(static_cast<uint8_t>(x));
        }
    }
    for (auto& [ij, b] : blocks_) {
        int64_t acc = 0;
        for (size_t idx = 0; idx < b.vertices.size(); ++idx) {
            b.offset[idx] = acc;
            acc += BC(circ_count_[b.vertices[idx]], b.xcount[idx]);
        }
        if (acc != b.count) throw std::logic_error("block count mismatch");
    }
}

int64_t CubeComplex::generator_bytes_estimate() const {
    int64_t bytes = static_cast<int64_t>(circ_count_.size());
    bytes += static_cast<int64_t>(circ_map_.size()) * 4;
    for (auto& [ij, b] : blocks_) bytes += static_cast<int64_t>(b.vertices.size()) * 13;
    return bytes;
}

bool CubeComplex::has_block(int i, int j) const { return blocks_.count({i, j}) > 0; }

const CubeComplex::Block& CubeComplex::block(int i, int j) const {
    auto it = blocks_.find({i, j});
    return it == blocks_.end() ? empty_ : it->second;
}

void CubeComplex::circle_of(uint32_t vertex, int32_t* out) const {
    if (map_cached_) {
        const int32_t* src = &circ_map_[static_cast<uint64_t>(vertex) * diag_.n_arcs];
        std::copy(src, src + diag_.n_arcs, out);
    } else {
        resolve_packed(diag_, vertex, out);
    }
}

CubeComplex::EdgeMaps CubeComplex::edge_maps(uint32_t v, const int32_t* cv_map, int cv,
                                             uint32_t w) const {
    EdgeMaps em;
    std::vector<int32_t> cw_map(diag_.n_arcs);
    circle_of(w, cw_map.data());
    int cw = circ_count_[w];
    em.src2tgt.assign(cv, -1);
    if (cw == cv - 1) {
        em.merge = true;
        // two source circles land on one target circle
        std::vector<int32_t> tgt2src(cw, -1);
        em.a = em.b = -1;
        for (int32_t arc = 0; arc < diag_.n_arcs; ++arc) {
            int32_t s = cv_map[arc], t = cw_map[arc];
            em.src2tgt[s] = t;
            if (tgt2src[t] < 0)
                tgt2src[t] = s;
            else if (tgt2src[t] != s && em.a < 0) {
                em.a = std::min(tgt2src[t], s);
                em.b = std::max(tgt2src[t], s);
                em.target = t;
            }
        }
        if (em.a < 0) throw std::logic_error("merge edge without merging circles");
    } else if (cw == cv + 1) {
        em.merge = false;
        em.s = -1;
        em.t1 = em.t2 = -1;
        for (int32_t arc = 0; arc < diag_.n_arcs; ++arc) {
            int32_t s = cv_map[arc], t = cw_map[arc];
            if (em.src2tgt[s] < 0) {
                em.src2tgt[s] = t;
            } else if (em.src2tgt[s] != t) {
                em.s = s;
                em.t1 = std::min(em.src2tgt[s], t);
                em.t2 = std::max(em.src2tgt[s], t);
            }
        }
        if (em.s < 0) throw std::logic_error("split edge without splitting circle");
    } else {
        throw std::logic_error("adjacent vertices must differ by one circle");
    }
    return em;
}

SparseMat<int64_t> CubeComplex::part_block(const FrobPart& part, int i, int j) const {
    const Block& src = block(i, j);
    const Block& tgt = block(i + 1, j + part.jump);
    SparseMat<int64_t> m(tgt.count, src.count);
    if (src.count == 0 || tgt.count == 0) return m;

    std::vector<int32_t> cv_map(diag_.n_arcs);
    auto tgt_pos = [&](uint32_t w) -> int64_t {
        auto it = std::lower_bound(tgt.vertices.begin(), tgt.vertices.end(), w);
        if (it == tgt.vertices.end() || *it != w) return -1;
        return static_cast<int64_t>(it - tgt.vertices.begin());
    };

    for (size_t sv = 0; sv < src.vertices.size(); ++sv) {
        uint32_t v = src.vertices[sv];
        int cv = circ_count_[v];
        int k = src.xcount[sv];
        circle_of(v, cv_map.data());
        for (int r = 0; r < n_; ++r) {
            if ((v >> r) & 1) continue;
            uint32_t w = v | (uint32_t(1) << r);
            int64_t tp = tgt_pos(w);
            if (tp < 0) continue;  // target labeling weight unreachable for this edge
            int sign = (__builtin_popcount(v & ((uint32_t(1) << r) - 1)) & 1) ? -1 : 1;
            EdgeMaps em = edge_maps(v, cv_map.data(), cv, w);
            int tk = tgt.xcount[tp];

            // iterate source label masks of weight k in increasing order
            uint32_t mask = k == 0 ? 0 : (uint32_t(1) << k) - 1;
            int64_t col0 = src.offset[sv];
            for (int64_t t = 0; t < BC(cv, k); ++t) {
                // spectator bits
                uint32_t base = 0;
                uint32_t mm = mask;
                while (mm) {
                    int p = __builtin_ctz(mm);
                    mm &= mm - 1;
                    if (em.merge ? (p != em.a && p != em.b) : (p != em.s))
                        base |= uint32_t(1) << em.src2tgt[p];
                }
                if (em.merge) {
                    int la = (mask >> em.a) & 1, lb = (mask >> em.b) & 1;
                    for (const auto& out : part.mul[la][lb]) {
                        uint32_t tmask = base | (uint32_t(out.out) << em.target);
                        if (__builtin_popcount(tmask) != tk) continue;
                        m.entries.push_back({static_cast<int32_t>(tgt.offset[tp] + rank_mask(tmask, tk)),
                                             static_cast<int32_t>(col0 + t),
                                             static_cast<int64_t>(sign) * out.coeff});
                    }
                } else {
                    int ls = (mask >> em.s) & 1;
                    for (const auto& out : part.comul[ls]) {
                        uint32_t tmask = base | (uint32_t(out.out1) << em.t1) |
                                         (uint32_t(out.out2) << em.t2);
                        if (__builtin_popcount(tmask) != tk) continue;
                        m.entries.push_back({static_cast<int32_t>(tgt.offset[tp] + rank_mask(tmask, tk)),
                                             static_cast<int32_t>(col0 + t),
                                             static_cast<int64_t>(sign) * out.coeff});
                    }
                }
                // Gosper's hack: next mask with the same popcount
                if (k == 0) break;
                uint32_t c0 = mask & -mask, r0 = mask + c0;
                mask = (((r0 ^ mask) >> 2) / c0) | r0;
            }
        }
    }
    m.normalize();
    return m;
}

SparseMat<int64_t> CubeComplex::perturbation_block(int i, int j) const {
    const auto& th = frobenius_theory(theory_);
    if (!th.perturbation) {
        const Block& src = block(i, j);
        return SparseMat<int64_t>(0, src.count);
    }
    return part_block(*th.perturbation, i, j);
}

SparseMat<int64_t> CubeComplex::differential_block(int i, int j) const {
    const auto& th = frobenius_theory(theory_);
    SparseMat<int64_t> d0 = part_block(th.primary, i, j);
    if (!th.perturbation) return d0;
    SparseMat<int64_t> d1 = part_block(*th.perturbation, i, j);
    SparseMat<int64_t> out(d0.rows + d1.rows, d0.cols);
    out.entries = std::move(d0.entries);
    for (auto& e : d1.entries) out.entries.push_back({static_cast<int32_t>(e.row + d0.rows), e.col, e.val});
    out.normalize();
    return out;
}

SparseMat<int64_t> CubeComplex::nu_block(int i, int j) const {
    if (!(ring_.kind == RingKind::mod_p && ring_.p == 2) || theory_ != Theory::khovanov)
        throw std::invalid_argument("nu is defined on the Z_2 Khovanov complex");
    const Block& src = block(i, j);
    const Block& tgt = block(i, j + 2);
    SparseMat<int64_t> m(tgt.count, src.count);
    if (src.count == 0 || tgt.count == 0) return m;
    for (size_t sv = 0; sv < src.vertices.size(); ++sv) {
        uint32_t v = src.vertices[sv];
        int cv = circ_count_[v];
        int k = src.xcount[sv];
        if (k == 0) continue;
        auto it = std::lower_bound(tgt.vertices.begin(), tgt.vertices.end(), v);
        if (it == tgt.vertices.end() || *it != v) continue;
        int64_t tp = it - tgt.vertices.begin();
        uint32_t mask = (uint32_t(1) << k) - 1;
        for (int64_t t = 0; t < BC(cv, k); ++t) {
            uint32_t mm = mask;
            while (mm) {  // replace each single X by 1
                int p = __builtin_ctz(mm);
                mm &= mm - 1;
                uint32_t tmask = mask & ~(uint32_t(1) << p);
                m.entries.push_back({static_cast<int32_t>(tgt.offset[tp] + rank_mask(tmask, k - 1)),
                                     static_cast<int32_t>(src.offset[sv] + t), 1});
            }
            uint32_t c0 = mask & -mask, r0 = mask + c0;
            mask = (((r0 ^ mask) >> 2) / c0) | r0;
        }
    }
    m.normalize();
    return m;
}

}  // namespace kh
