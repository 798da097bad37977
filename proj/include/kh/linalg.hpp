#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <vector>

#include "kh/ring.hpp"
#include "kh/sparse.hpp"

namespace kh {

// Sparse vectors: (index, coeff) pairs sorted by index, no zero coeffs.
template <class T>
using SparseVec = std::vector<std::pair<int32_t, T>>;

// Field policies for the elimination templates.
struct RationalOps {
    using elt = mpq_class;
    static elt zero() { return mpq_class(0); }
    static elt one() { return mpq_class(1); }
    static bool is_zero(const elt& a) { return a == 0; }
    static elt add(const elt& a, const elt& b) { return a + b; }
    static elt sub(const elt& a, const elt& b) { return a - b; }
    static elt mul(const elt& a, const elt& b) { return a * b; }
    static elt neg(const elt& a) { return -a; }
    static elt inv(const elt& a) { return 1 / a; }
};

struct ModOps {
    const PrimeField* F = nullptr;
    using elt = uint32_t;
    static elt zero() { return 0; }
    static elt one() { return 1; }
    static bool is_zero(elt a) { return a == 0; }
    elt add(elt a, elt b) const { return F->add(a, b); }
    elt sub(elt a, elt b) const { return F->sub(a, b); }
    elt mul(elt a, elt b) const { return F->mul(a, b); }
    elt neg(elt a) const { return F->neg(a); }
    elt inv(elt a) const { return F->inv(a); }
};

// r -= c * b, all sparse, merge-based.
template <class Ops>
SparseVec<typename Ops::elt> axpy_sub(const Ops& ops, const SparseVec<typename Ops::elt>& r,
                                      const typename Ops::elt& c,
                                      const SparseVec<typename Ops::elt>& b) {
    SparseVec<typename Ops::elt> out;
    out.reserve(r.size() + b.size());
    size_t i = 0, j = 0;
    while (i < r.size() || j < b.size()) {
        if (j == b.size() || (i < r.size() && r[i].first < b[j].first)) {
            out.push_back(r[i++]);
        } else if (i == r.size() || b[j].first < r[i].first) {
            out.emplace_back(b[j].first, ops.neg(ops.mul(c, b[j].second)));
            ++j;
        } else {
            auto v = ops.sub(r[i].second, ops.mul(c, b[j].second));
            if (!Ops::is_zero(v)) out.emplace_back(r[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

// Incremental reduced-echelon basis over a field. Every stored vector has a
// distinct pivot (smallest support index), unit leading coefficient, and zero
// entries at every other stored pivot, so reduce() coordinates are canonical.
template <class Ops>
class EchelonBasis {
public:
    using elt = typename Ops::elt;
    using Vec = SparseVec<elt>;

    explicit EchelonBasis(Ops ops = Ops{}) : ops_(ops) {}

    struct Reduction {
        Vec residue;
        Vec aug_residue;
        std::vector<std::pair<int, elt>> coords;  // (slot, coefficient)
    };

    // Reduce v (and an optional augmentation carried in lockstep).
    Reduction reduce(Vec v, Vec aug = {}) const {
        Reduction out;
        for (;;) {
            int hit = -1;
            for (const auto& [idx, val] : v) {
                auto it = pivot_slot_.find(idx);
                if (it != pivot_slot_.end()) {
                    hit = it->second;
                    break;
                }
            }
            if (hit < 0) break;
            // coefficient at the pivot of slot `hit`
            elt c = Ops::zero();
            for (const auto& [idx, val] : v)
                if (idx == pivots_[hit]) {
                    c = val;
                    break;
                }
            v = axpy_sub(ops_, v, c, vecs_[hit]);
            if (!aug_[hit].empty() || !aug.empty()) aug = axpy_sub(ops_, aug, c, aug_[hit]);
            out.coords.emplace_back(hit, c);
        }
        out.residue = std::move(v);
        out.aug_residue = std::move(aug);
        return out;
    }

    // Reduce, then insert the residue if independent. Returns slot or -1.
    int insert(Vec v, Vec aug = {}) {
        auto red = reduce(std::move(v), std::move(aug));
        if (red.residue.empty()) return -1;
        return insert_reduced(std::move(red.residue), std::move(red.aug_residue));
    }

    // Insert a vector already reduced against the basis.
    int insert_reduced(Vec v, Vec aug = {}) {
        int32_t piv = v.front().first;
        elt lead = v.front().second;
        if (!Ops::is_zero(ops_.sub(lead, Ops::one()))) {
            elt il = ops_.inv(lead);
            for (auto& [i, x] : v) x = ops_.mul(x, il);
            for (auto& [i, x] : aug) x = ops_.mul(x, il);
        }
        int slot = static_cast<int>(vecs_.size());
        // back-substitute the new pivot out of existing vectors
        for (int s = 0; s < slot; ++s) {
            elt c = Ops::zero();
            for (const auto& [idx, val] : vecs_[s])
                if (idx == piv) {
                    c = val;
                    break;
                }
            if (!Ops::is_zero(c)) {
                vecs_[s] = axpy_sub(ops_, vecs_[s], c, v);
                aug_[s] = axpy_sub(ops_, aug_[s], c, aug);
            }
        }
        vecs_.push_back(std::move(v));
        aug_.push_back(std::move(aug));
        pivots_.push_back(piv);
        pivot_slot_[piv] = slot;
        return slot;
    }

    int dim() const { return static_cast<int>(vecs_.size()); }
    const Vec& vec(int slot) const { return vecs_[slot]; }
    const Vec& aug(int slot) const { return aug_[slot]; }
    const std::vector<int32_t>& pivots() const { return pivots_; }
    bool has_pivot(int32_t idx) const { return pivot_slot_.count(idx) > 0; }

private:
    Ops ops_;
    std::vector<Vec> vecs_;
    std::vector<Vec> aug_;
    std::vector<int32_t> pivots_;
    std::map<int32_t, int> pivot_slot_;
};

// rank + kernel basis of a sparse matrix over a field, by column elimination
// with augmentation.
template <class Ops, class T>
struct FieldRankKernel {
    int64_t rank = 0;
    std::vector<SparseVec<typename Ops::elt>> kernel;        // vectors in col-index space
    EchelonBasis<Ops> column_space;                          // echelon basis of the image
};

template <class Ops, class T, class Conv>
FieldRankKernel<Ops, T> rank_kernel_field(const Ops& ops, const SparseMat<T>& m, Conv conv,
                                          bool want_kernel = true) {
    using elt = typename Ops::elt;
    FieldRankKernel<Ops, T> out{0, {}, EchelonBasis<Ops>(ops)};
    std::vector<SparseVec<elt>> cols(m.cols);
    for (const auto& e : m.entries) {
        elt v = conv(e.val);
        if (!Ops::is_zero(v)) cols[e.col].emplace_back(e.row, v);
    }
    for (int32_t c = 0; c < m.cols; ++c) {
        SparseVec<elt> aug;
        if (want_kernel) aug.emplace_back(c, Ops::one());
        auto red = out.column_space.reduce(std::move(cols[c]), std::move(aug));
        if (red.residue.empty()) {
            if (want_kernel) out.kernel.push_back(std::move(red.aug_residue));
        } else {
            out.column_space.insert_reduced(std::move(red.residue), std::move(red.aug_residue));
            ++out.rank;
        }
    }
    return out;
}

// Public, ring-tagged rank/kernel over Q or Z_p (INTEGERS rejected).
struct RankKernelResult {
    int64_t rank = 0;
    int64_t kernel_dim = 0;
    // kernel vectors over the field: rationals for Q, residues in [0,p) for Z_p
    std::vector<SparseVec<mpq_class>> kernel_q;
    std::vector<SparseVec<uint32_t>> kernel_p;
};

RankKernelResult rank_kernel(const SparseMat<mpz_class>& m, RingTag field);

// (d * lift(x)) / p^r reduced mod p, with lift entrywise in [0, p).
// Throws if x is not a page-r cycle (divisibility failure).
std::vector<uint32_t> lift_and_divide(const std::vector<uint32_t>& x, const SparseMat<mpz_class>& d,
                                      uint32_t p, unsigned r);

}  // namespace kh
