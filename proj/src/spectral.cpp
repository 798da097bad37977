#include "kh/spectral.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "kh/snf.hpp"

namespace kh {

int64_t SpectralPage::total() const {
    int64_t t = 0;
    for (auto& [ij, d] : dims) t += d;
    return t;
}

std::map<int, int64_t> SpectralPage::totals_by_i() const {
    std::map<int, int64_t> out;
    for (auto& [ij, d] : dims)
        if (d) out[ij.first] += d;
    return out;
}

int64_t SpectralPage::total_rank() const {
    int64_t t = 0;
    for (auto& [ij, r] : ranks) t += r;
    return t;
}

const SpectralPage& SpectralSequence::page(int r) const {
    if (r < 1) throw std::invalid_argument("pages are indexed from 1");
    size_t idx = static_cast<size_t>(r - 1);
    return idx < pages.size() ? pages[idx] : pages.back();
}

namespace {

template <class Ops>
using Cols = std::vector<SparseVec<typename Ops::elt>>;

template <class Ops, class Conv>
Cols<Ops> block_columns(const Ops& ops, const SparseMat<int64_t>& m, Conv conv) {
    (void)ops;
    Cols<Ops> cols(m.cols);
    for (const auto& e : m.entries) {
        auto v = conv(e.val);
        if (!Ops::is_zero(v)) cols[e.col].emplace_back(e.row, v);
    }
    for (auto& c : cols)
        std::sort(c.begin(), c.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return cols;
}

// ---------------------------------------------------------------------------
// filtered (Lee / Turner) pages via zig-zag subspaces of the bicomplex
// ---------------------------------------------------------------------------

template <class Ops>
class ZigzagEngine {
public:
    using elt = typename Ops::elt;

    ZigzagEngine(const CubeComplex& c, Ops ops, std::function<elt(int64_t)> conv)
        : c_(c), ops_(ops), conv_(std::move(conv)) {
        const auto& th = frobenius_theory(c.theory());
        if (!th.perturbation) throw std::invalid_argument("filtered pages need a filtered theory");
        delta_ = th.perturbation->jump;
    }

    int delta() const { return delta_; }

    const Cols<Ops>& cols(int part, int i, int j) {
        auto key = std::make_tuple(part, i, j);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const auto& th = frobenius_theory(c_.theory());
        SparseMat<int64_t> m =
            part == 0 ? c_.part_block(th.primary, i, j) : c_.part_block(*th.perturbation, i, j);
        return cache_.emplace(key, block_columns(ops_, m, conv_)).first->second;
    }

    // dimension of the page-r survivor space at (i, j): projections to the
    // seed block of zig-zags x_k in C^{i, j+k*delta} with d0 x0 = 0 and
    // d1 x_{k-1} + d0 x_k = 0
    int64_t zbar_dim(int r, int i, int j) {
        auto vecs = zigzag_kernel(r, i, j, +1);
        EchelonBasis<Ops> ech(ops_);
        for (auto& v : vecs) ech.insert(std::move(v));
        return ech.dim();
    }

    // boundary space N_r at (i, j): d0 C^{i-1,j} plus d1 of the depth-(r-1)
    // downward zig-zag space at (i-1, j-delta)
    int64_t n_dim(int r, int i, int j) {
        EchelonBasis<Ops> ech(ops_);
        for (const auto& col : cols(0, i - 1, j)) {
            auto v = col;
            ech.insert(std::move(v));
        }
        if (r >= 2) {
            auto ws = zigzag_kernel(r - 1, i - 1, j - delta_, -1);
            const auto& d1 = cols(1, i - 1, j - delta_);
            for (auto& w : ws) {
                SparseVec<elt> img;
                for (auto& [t, a] : w) img = axpy_sub(ops_, img, ops_.neg(a), d1[t]);
                ech.insert(std::move(img));
            }
        }
        return ech.dim();
    }

private:
    // Solve the zig-zag system of depth `depth` seeded at (i, j); dir = +1
    // stacks levels upward in j (survivors), dir = -1 downward (boundaries,
    // where the d1 component of level k couples one level down). Returns the
    // kernel basis projected to the seed block.
    std::vector<SparseVec<elt>> zigzag_kernel(int depth, int i, int j, int dir) {
        std::vector<int> jlev(depth);
        for (int k = 0; k < depth; ++k) jlev[k] = j + dir * k * delta_;
        std::vector<int64_t> var_dim(depth), var_off(depth + 1, 0);
        for (int k = 0; k < depth; ++k) {
            var_dim[k] = c_.block(i, jlev[k]).count;
            var_off[k + 1] = var_off[k] + var_dim[k];
        }
        // equation row blocks live one homological step up, at every level
        // that receives a d0 or d1 component
        std::vector<int64_t> row_off(depth + 1, 0);
        for (int k = 0; k < depth; ++k)
            row_off[k + 1] = row_off[k] + c_.block(i + 1, jlev[k]).count;

        std::vector<SparseVec<elt>> sys(var_off[depth]);
        for (int k = 0; k < depth; ++k) {
            const auto& d0 = cols(0, i, jlev[k]);
            const auto& d1 = cols(1, i, jlev[k]);
            for (int64_t t = 0; t < var_dim[k]; ++t) {
                auto& dst = sys[var_off[k] + t];
                for (auto& [row, v] : d0[t])
                    dst.emplace_back(static_cast<int32_t>(row_off[k] + row), v);
                // d1 raises j by delta: for upward stacks that is level k+1,
                // for downward stacks level k-1
                int tgt = dir > 0 ? k + 1 : k - 1;
                if (tgt >= 0 && tgt < depth)
                    for (auto& [row, v] : d1[t])
                        dst.emplace_back(static_cast<int32_t>(row_off[tgt] + row), v);
                std::sort(dst.begin(), dst.end(),
                          [](auto& a, auto& b) { return a.first < b.first; });
            }
        }
        EchelonBasis<Ops> ech(ops_);
        std::vector<SparseVec<elt>> out;
        for (int64_t cidx = 0; cidx < var_off[depth]; ++cidx) {
            SparseVec<elt> aug;
            aug.emplace_back(static_cast<int32_t>(cidx), Ops::one());
            auto red = ech.reduce(std::move(sys[cidx]), std::move(aug));
            if (red.residue.empty()) {
                SparseVec<elt> proj;
                for (auto& [idx, v] : red.aug_residue)
                    if (idx < var_dim[0]) proj.emplace_back(idx, v);
                if (!proj.empty()) out.push_back(std::move(proj));
            } else {
                ech.insert_reduced(std::move(red.residue), std::move(red.aug_residue));
            }
        }
        return out;
    }

    const CubeComplex& c_;
    Ops ops_;
    std::function<elt(int64_t)> conv_;
    int delta_ = 0;
    std::map<std::tuple<int, int, int>, Cols<Ops>> cache_;
};

// rank tables from the page dimension recursion
// dim E_{r+1}(i,j) = dim E_r(i,j) - rk d_r(i,j) - rk d_r(i-1, j-r*delta)
void fill_ranks(std::vector<SpectralPage>& pages, int delta) {
    for (size_t pi = 0; pi + 1 < pages.size(); ++pi) {
        SpectralPage& pg = pages[pi];
        int r = pg.r;
        const SpectralPage& nxt = pages[pi + 1];
        std::set<Bigrading> keys;
        for (auto& [ij, d] : pg.dims) keys.insert(ij);
        for (auto& [ij, d] : nxt.dims) keys.insert(ij);
        for (auto [i, j] : keys) {  // ascending i within the ordered set
            int64_t incoming = 0;
            auto it = pg.ranks.find({i - 1, j - r * delta});
            if (it != pg.ranks.end()) incoming = it->second;
            int64_t rk = pg.dim(i, j) - nxt.dim(i, j) - incoming;
            if (rk < 0) throw std::logic_error("negative differential rank in page recursion");
            if (rk) pg.ranks[{i, j}] = rk;
        }
    }
}

template <class Ops>
SpectralSequence filtered_pages_impl(const CubeComplex& c, Ops ops,
                                     std::function<typename Ops::elt(int64_t)> conv,
                                     SeqKind kind) {
    ZigzagEngine<Ops> eng(c, ops, std::move(conv));
    int delta = eng.delta();

    int jmin = 0, jmax = 0;
    bool first = true;
    for (auto [i, j] : c.support()) {
        jmin = first ? j : std::min(jmin, j);
        jmax = first ? j : std::max(jmax, j);
        first = false;
    }
    int r_stop = first ? 1 : (jmax - jmin) / delta + 1;

    SpectralSequence seq;
    seq.seq = kind;
    seq.coeff = c.ring();
    for (int r = 1; r <= r_stop; ++r) {
        SpectralPage pg;
        pg.seq = kind;
        pg.coeff = c.ring();
        pg.r = r;
        pg.bidegree = {1, r * delta};
        for (auto [i, j] : c.support()) {
            int64_t z = eng.zbar_dim(r, i, j);
            int64_t n = eng.n_dim(r, i, j);
            if (z < n) throw std::logic_error("boundary space exceeds survivor space");
            if (z - n) pg.dims[{i, j}] = z - n;
        }
        bool stable = !seq.pages.empty() && seq.pages.back().dims == pg.dims;
        seq.pages.push_back(std::move(pg));
        if (stable && r * delta > jmax - jmin) break;
    }
    fill_ranks(seq.pages, delta);
    return seq;
}

}  // namespace

SpectralSequence filtered_pages(const CubeComplex& c) {
    const auto& th = frobenius_theory(c.theory());
    if (!th.perturbation)
        throw std::invalid_argument("filtered_pages needs the LEE or TURNER theory");
    SeqKind kind = c.theory() == Theory::lee ? SeqKind::lee : SeqKind::turner;
    if (c.ring().kind == RingKind::rationals) {
        RationalOps ops;
        return filtered_pages_impl<RationalOps>(
            c, ops, [](int64_t v) { return mpq_class(static_cast<long>(v)); }, kind);
    }
    auto F = std::make_shared<PrimeField>(c.ring().p);
    ModOps ops{F.get()};
    return filtered_pages_impl<ModOps>(c, ops, [F](int64_t v) { return F->reduce(v); }, kind);
}

std::map<int, int64_t> infinity_prediction(const PlanarDiagram& d) {
    auto lk = linking_numbers(d);
    int k = d.components;
    std::map<int, int64_t> out;
    for (uint32_t mask = 0; mask < (uint32_t(1) << k); ++mask) {
        int64_t sum = 0;
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                if (((mask >> a) & 1) && !((mask >> b) & 1)) sum += lk[a][b];
        out[static_cast<int>(2 * sum)] += 1;
    }
    return out;
}

InfinityPredictions infinity_predictions(const BraidWord& w, SignConvention conv) {
    auto table = infinity_prediction(braid_closure(w, conv));
    return {table, table};
}

std::map<int, int64_t> filtered_total_homology(const CubeComplex& c) {
    const auto& th = frobenius_theory(c.theory());
    if (!th.perturbation)
        throw std::invalid_argument("filtered_total_homology needs a filtered theory");
    int delta = th.perturbation->jump;
    bool rational = c.ring().kind == RingKind::rationals;
    PrimeField F(rational ? 2 : c.ring().p);

    // j-offsets per homological grading
    std::map<int, std::map<int, int64_t>> joff;
    std::map<int, int64_t> idim;
    for (auto [i, j] : c.support()) joff[i][j] = 0;
    for (auto& [i, offs] : joff) {
        int64_t acc = 0;
        for (auto& [j, off] : offs) {
            off = acc;
            acc += c.block(i, j).count;
        }
        idim[i] = acc;
    }

    auto total_rank = [&](int i) -> int64_t {
        auto rows_it = joff.find(i + 1);
        if (rows_it == joff.end()) return 0;
        RationalOps qops;
        ModOps mops{&F};
        EchelonBasis<RationalOps> eq(qops);
        EchelonBasis<ModOps> ep(mops);
        int64_t rank = 0;
        for (auto& [j, coff] : joff.at(i)) {
            SparseMat<int64_t> d0 = c.part_block(th.primary, i, j);
            SparseMat<int64_t> d1 = c.part_block(*th.perturbation, i, j);
            int64_t o0 = rows_it->second.count(j) ? rows_it->second.at(j) : -1;
            int64_t o1 = rows_it->second.count(j + delta) ? rows_it->second.at(j + delta) : -1;
            int64_t ncols = c.block(i, j).count;
            std::vector<SparseVec<mpq_class>> colsq;
            std::vector<SparseVec<uint32_t>> colsp;
            if (rational)
                colsq.assign(ncols, {});
            else
                colsp.assign(ncols, {});
            auto put = [&](const SparseMat<int64_t>& m, int64_t off) {
                if (off < 0) return;
                for (auto& e : m.entries) {
                    if (rational) {
                        colsq[e.col].emplace_back(static_cast<int32_t>(off + e.row),
                                                  mpq_class(static_cast<long>(e.val)));
                    } else {
                        uint32_t rv = F.reduce(e.val);
                        if (rv)
                            colsp[e.col].emplace_back(static_cast<int32_t>(off + e.row), rv);
                    }
                }
            };
            put(d0, o0);
            put(d1, o1);
            for (int64_t t = 0; t < ncols; ++t) {
                if (rational) {
                    auto& v = colsq[t];
                    std::sort(v.begin(), v.end(),
                              [](auto& a, auto& b) { return a.first < b.first; });
                    if (eq.insert(std::move(v)) >= 0) ++rank;
                } else {
                    auto& v = colsp[t];
                    std::sort(v.begin(), v.end(),
                              [](auto& a, auto& b) { return a.first < b.first; });
                    if (ep.insert(std::move(v)) >= 0) ++rank;
                }
            }
        }
        return rank;
    };

    std::map<int, int64_t> ranks;
    for (auto& [i, dim] : idim) ranks[i] = total_rank(i);
    std::map<int, int64_t> out;
    for (auto& [i, dim] : idim) {
        int64_t r_out = ranks.count(i) ? ranks.at(i) : 0;
        int64_t r_in = ranks.count(i - 1) ? ranks.at(i - 1) : 0;
        int64_t h = dim - r_out - r_in;
        if (h) out[i] = h;
    }
    return out;
}

// ---------------------------------------------------------------------------
// induced maps on homology bases
// ---------------------------------------------------------------------------

namespace {

template <class Ops>
class HomologyFixture {
public:
    using elt = typename Ops::elt;

    HomologyFixture(const CubeComplex& c, Ops ops, std::function<elt(int64_t)> conv)
        : ops_(ops) {
        for (auto [i, j] : c.support()) {
            Slot slot{EchelonBasis<Ops>(ops_), EchelonBasis<Ops>(ops_), {}};
            auto rk = rank_kernel_field(ops_, c.khovanov_block(i, j), conv, true);
            for (auto& col : block_columns(ops_, c.khovanov_block(i - 1, j), conv)) {
                auto v = col;
                slot.bnd.insert(std::move(v));
            }
            for (auto& k : rk.kernel) {
                auto red = slot.bnd.reduce(k);
                if (red.residue.empty()) continue;
                slot.quo.insert(std::move(red.residue));
            }
            for (int s = 0; s < slot.quo.dim(); ++s) slot.reps.push_back(slot.quo.vec(s));
            slots_.emplace(Bigrading{i, j}, std::move(slot));
        }
    }

    int64_t dim(int i, int j) const {
        auto it = slots_.find({i, j});
        return it == slots_.end() ? 0 : it->second.quo.dim();
    }

    const std::vector<SparseVec<elt>>& reps(int i, int j) const {
        static const std::vector<SparseVec<elt>> none;
        auto it = slots_.find({i, j});
        return it == slots_.end() ? none : it->second.reps;
    }

    std::vector<elt> class_coords(int i, int j, SparseVec<elt> v) const {
        auto it = slots_.find({i, j});
        if (it == slots_.end()) {
            if (!v.empty()) throw std::logic_error("class outside homology support");
            return {};
        }
        const Slot& slot = it->second;
        auto red1 = slot.bnd.reduce(std::move(v));
        auto red2 = slot.quo.reduce(std::move(red1.residue));
        if (!red2.residue.empty()) throw std::logic_error("vector is not a cycle class");
        std::vector<elt> coords(slot.quo.dim(), Ops::zero());
        for (auto& [s, a] : red2.coords) coords[s] = a;
        return coords;
    }

    std::vector<Bigrading> support() const {
        std::vector<Bigrading> out;
        for (auto& [ij, s] : slots_) out.push_back(ij);
        return out;
    }

private:
    struct Slot {
        EchelonBasis<Ops> bnd;
        EchelonBasis<Ops> quo;
        std::vector<SparseVec<elt>> reps;
    };
    Ops ops_;
    std::map<Bigrading, Slot> slots_;
};

template <class Ops>
SparseVec<typename Ops::elt> apply_cols(const Ops& ops, const Cols<Ops>& cols,
                                        const SparseVec<typename Ops::elt>& v) {
    SparseVec<typename Ops::elt> out;
    for (auto& [t, a] : v) out = axpy_sub(ops, out, ops.neg(a), cols[t]);
    return out;
}

struct F2Maps {
    std::shared_ptr<PrimeField> F = std::make_shared<PrimeField>(2);
    std::unique_ptr<HomologyFixture<ModOps>> fix;
    std::map<Bigrading, SparseMat<int64_t>> nu, dT, dB1;
    std::map<Bigrading, int64_t> hdim;
};

// nu*, dT*, dB1 over Z_2 on one shared homology basis
F2Maps build_f2_maps(const CubeComplex& c) {
    if (!(c.ring().kind == RingKind::mod_p && c.ring().p == 2) || c.theory() != Theory::khovanov)
        throw std::invalid_argument("the Z_2 induced maps need the Z_2 Khovanov complex");
    F2Maps out;
    ModOps ops{out.F.get()};
    auto conv = [F = out.F](int64_t v) { return F->reduce(v); };
    out.fix = std::make_unique<HomologyFixture<ModOps>>(c, ops, conv);

    for (auto [i, j] : out.fix->support()) {
        out.hdim[{i, j}] = out.fix->dim(i, j);
        const auto& reps = out.fix->reps(i, j);
        int64_t n = static_cast<int64_t>(reps.size());
        if (n == 0) continue;

        auto nu_cols = block_columns(ops, c.nu_block(i, j), conv);
        auto dT_cols = block_columns(ops, c.part_block(turner_part(), i, j), conv);
        SparseMat<mpz_class> dint = c.khovanov_block(i, j).map<mpz_class>(
            [](int64_t v) { return mpz_class(static_cast<long>(v)); });

        SparseMat<int64_t> mnu(out.fix->dim(i, j + 2), n);
        SparseMat<int64_t> mdT(out.fix->dim(i + 1, j + 2), n);
        SparseMat<int64_t> mdB(out.fix->dim(i + 1, j), n);
        for (int64_t k = 0; k < n; ++k) {
            auto img = apply_cols(ops, nu_cols, reps[k]);
            auto coords = out.fix->class_coords(i, j + 2, std::move(img));
            for (size_t t = 0; t < coords.size(); ++t)
                if (coords[t])
                    mnu.add(static_cast<int32_t>(t), static_cast<int32_t>(k), coords[t]);

            img = apply_cols(ops, dT_cols, reps[k]);
            coords = out.fix->class_coords(i + 1, j + 2, std::move(img));
            for (size_t t = 0; t < coords.size(); ++t)
                if (coords[t])
                    mdT.add(static_cast<int32_t>(t), static_cast<int32_t>(k), coords[t]);

            // Bockstein: lift the mod-2 cycle, apply the integral d, divide by 2
            std::vector<uint32_t> dense(c.block(i, j).count, 0);
            for (auto& [idx, a] : reps[k]) dense[idx] = a;
            auto lifted = lift_and_divide(dense, dint, 2, 1);
            SparseVec<uint32_t> sv;
            for (size_t idx = 0; idx < lifted.size(); ++idx)
                if (lifted[idx]) sv.emplace_back(static_cast<int32_t>(idx), lifted[idx]);
            coords = out.fix->class_coords(i + 1, j, std::move(sv));
            for (size_t t = 0; t < coords.size(); ++t)
                if (coords[t])
                    mdB.add(static_cast<int32_t>(t), static_cast<int32_t>(k), coords[t]);
        }
        mnu.normalize();
        mdT.normalize();
        mdB.normalize();
        out.nu.emplace(Bigrading{i, j}, std::move(mnu));
        out.dT.emplace(Bigrading{i, j}, std::move(mdT));
        out.dB1.emplace(Bigrading{i, j}, std::move(mdB));
    }
    return out;
}

int64_t fp_rank(const PrimeField& F, const SparseMat<int64_t>& m) {
    ModOps ops{&F};
    auto rk = rank_kernel_field(ops, m, [&](int64_t v) { return F.reduce(v); }, false);
    return rk.rank;
}

}  // namespace

int64_t InducedMap::total_rank() const {
    int64_t t = 0;
    for (auto& [ij, r] : rank) t += r;
    return t;
}

InducedMap induced_map(const CubeComplex& c, InducedKind which) {
    InducedMap out;
    out.kind = which;
    out.field = c.ring();
    if (c.theory() != Theory::khovanov)
        throw std::invalid_argument("induced maps live on the Khovanov complex");

    if (which == InducedKind::nu_star || which == InducedKind::dT_star) {
        auto maps = build_f2_maps(c);
        out.bidegree = which == InducedKind::nu_star ? std::pair<int, int>{0, 2}
                                                     : std::pair<int, int>{1, 2};
        out.hdim = maps.hdim;
        auto& src = which == InducedKind::nu_star ? maps.nu : maps.dT;
        for (auto& [ij, m] : src) {
            if (m.nnz()) out.rank[ij] = fp_rank(*maps.F, m);
            out.blocks.emplace(ij, std::move(m));
        }
        return out;
    }

    if (which == InducedKind::dB1) {
        if (c.ring().kind != RingKind::mod_p)
            throw std::invalid_argument("dB1 needs a Z_p complex");
        uint32_t p = c.ring().p;
        out.bidegree = {1, 0};
        if (p == 2) {
            auto maps = build_f2_maps(c);
            out.hdim = maps.hdim;
            for (auto& [ij, m] : maps.dB1) {
                if (m.nnz()) out.rank[ij] = fp_rank(*maps.F, m);
                out.blocks.emplace(ij, std::move(m));
            }
            return out;
        }
        PrimeField F(p);
        ModOps ops{&F};
        HomologyFixture<ModOps> fix(c, ops, [&](int64_t v) { return F.reduce(v); });
        for (auto [i, j] : fix.support()) {
            out.hdim[{i, j}] = fix.dim(i, j);
            const auto& reps = fix.reps(i, j);
            if (reps.empty()) continue;
            SparseMat<mpz_class> dint = c.khovanov_block(i, j).map<mpz_class>(
                [](int64_t v) { return mpz_class(static_cast<long>(v)); });
            SparseMat<int64_t> m(fix.dim(i + 1, j), static_cast<int64_t>(reps.size()));
            for (size_t k = 0; k < reps.size(); ++k) {
                std::vector<uint32_t> dense(c.block(i, j).count, 0);
                for (auto& [idx, a] : reps[k]) dense[idx] = a;
                auto lifted = lift_and_divide(dense, dint, p, 1);
                SparseVec<uint32_t> sv;
                for (size_t idx = 0; idx < lifted.size(); ++idx)
                    if (lifted[idx]) sv.emplace_back(static_cast<int32_t>(idx), lifted[idx]);
                auto coords = fix.class_coords(i + 1, j, std::move(sv));
                for (size_t t = 0; t < coords.size(); ++t)
                    if (coords[t])
                        m.add(static_cast<int32_t>(t), static_cast<int32_t>(k), coords[t]);
            }
            m.normalize();
            if (m.nnz()) out.rank[{i, j}] = fp_rank(F, m);
            out.blocks.emplace(Bigrading{i, j}, std::move(m));
        }
        return out;
    }

    // dL_star over Q or Z_p with p odd
    if (c.ring().kind == RingKind::mod_p && c.ring().p == 2)
        throw std::invalid_argument("the Lee map needs Q or Z_p with p odd");
    out.bidegree = {1, 4};
    if (c.ring().kind == RingKind::rationals) {
        RationalOps ops;
        auto conv = [](int64_t v) { return mpq_class(static_cast<long>(v)); };
        HomologyFixture<RationalOps> fix(c, ops, conv);
        for (auto [i, j] : fix.support()) {
            out.hdim[{i, j}] = fix.dim(i, j);
            const auto& reps = fix.reps(i, j);
            if (reps.empty()) continue;
            auto cols = block_columns(ops, c.part_block(lee_part(), i, j), conv);
            std::vector<SparseVec<mpq_class>> mcols;
            EchelonBasis<RationalOps> rk(ops);
            for (auto& rep : reps) {
                auto img = apply_cols(ops, cols, rep);
                auto coords = fix.class_coords(i + 1, j + 4, std::move(img));
                SparseVec<mpq_class> col;
                for (size_t t = 0; t < coords.size(); ++t)
                    if (coords[t] != 0) col.emplace_back(static_cast<int32_t>(t), coords[t]);
                auto cc = col;
                rk.insert(std::move(cc));
                mcols.push_back(std::move(col));
            }
            if (rk.dim()) out.rank[{i, j}] = rk.dim();
            out.qcols.emplace(Bigrading{i, j}, std::move(mcols));
        }
        return out;
    }
    PrimeField F(c.ring().p);
    ModOps ops{&F};
    auto conv = [&](int64_t v) { return F.reduce(v); };
    HomologyFixture<ModOps> fix(c, ops, conv);
    for (auto [i, j] : fix.support()) {
        out.hdim[{i, j}] = fix.dim(i, j);
        const auto& reps = fix.reps(i, j);
        if (reps.empty()) continue;
        auto cols = block_columns(ops, c.part_block(lee_part(), i, j), conv);
        SparseMat<int64_t> m(fix.dim(i + 1, j + 4), static_cast<int64_t>(reps.size()));
        for (size_t k = 0; k < reps.size(); ++k) {
            auto img = apply_cols(ops, cols, reps[k]);
            auto coords = fix.class_coords(i + 1, j + 4, std::move(img));
            for (size_t t = 0; t < coords.size(); ++t)
                if (coords[t]) m.add(static_cast<int32_t>(t), static_cast<int32_t>(k), coords[t]);
        }
        m.normalize();
        if (m.nnz()) out.rank[{i, j}] = fp_rank(F, m);
        out.blocks.emplace(Bigrading{i, j}, std::move(m));
    }
    return out;
}

TbvReport tbv_check(const CubeComplex& c) {
    auto maps = build_f2_maps(c);
    TbvReport rep;
    auto block_of = [](std::map<Bigrading, SparseMat<int64_t>>& src, int i, int j, int64_t rows,
                       int64_t cols) {
        auto it = src.find({i, j});
        if (it != src.end()) return it->second;
        return SparseMat<int64_t>(rows, cols);
    };
    auto hd = [&](int i, int j) {
        auto it = maps.hdim.find({i, j});
        return it == maps.hdim.end() ? int64_t(0) : it->second;
    };
    for (auto& [ij, dT] : maps.dT) {
        auto [i, j] = ij;
        int64_t hsrc = hd(i, j), htgt = hd(i + 1, j + 2);
        int64_t hmid1 = hd(i, j + 2), hmid2 = hd(i + 1, j);
        auto a = sparse_mul(block_of(maps.dB1, i, j + 2, htgt, hmid1),
                            block_of(maps.nu, i, j, hmid1, hsrc));
        auto b = sparse_mul(block_of(maps.nu, i + 1, j, htgt, hmid2),
                            block_of(maps.dB1, i, j, hmid2, hsrc));
        SparseMat<int64_t> diff(htgt, hsrc);
        diff.entries = a.entries;
        for (auto& e : b.entries) diff.entries.push_back(e);
        for (auto& e : dT.entries) diff.entries.push_back({e.row, e.col, -e.val});
        diff.normalize();
        auto mod2 = diff.map<int64_t>([](int64_t v) { return ((v % 2) + 2) % 2; });
        if (!mod2.entries.empty())
            rep.check.fail("TBV identity fails at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
        if (dT.nnz()) rep.dT_total_rank += fp_rank(*maps.F, dT);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Bockstein pages from integral lattices
// ---------------------------------------------------------------------------

namespace {

// SNF data of one differential block viewed at the prime p: the kernel-mod-p^r
// lattice of A is Y_r = V * diag(p^{max(0, r - v_t)}) with v_t the p-adic
// valuation of the t-th invariant factor (free columns count as v = infinity,
// encoded -1).
struct BlockLattice {
    int64_t n = 0;
    std::vector<int> val;
    SparseMat<mpz_class> V;
    std::vector<std::vector<std::pair<int32_t, mpz_class>>> vinv_rows;  // rows of V^{-1}
    std::vector<std::vector<std::pair<int32_t, mpz_class>>> vcols;      // columns of V
};

int vp_of(const mpz_class& d, uint32_t p) {
    int v = 0;
    mpz_class m = d;
    while (m != 0 && m % p == 0) {
        ++v;
        m /= p;
    }
    return v;
}

}  // namespace

SpectralSequence bockstein_pages(const CubeComplex& c, uint32_t p) {
    if (c.theory() != Theory::khovanov || c.ring().kind != RingKind::integers)
        throw std::invalid_argument("bockstein_pages needs the integral Khovanov complex");
    if (!is_prime_u32(p)) throw std::invalid_argument("p must be prime");

    auto m_exp = [](int v, int r) {
        if (v < 0) return 0;  // unconstrained kernel direction
        return std::max(0, r - v);
    };

    std::map<Bigrading, BlockLattice> lat;
    int max_val = 0;
    for (auto [i, j] : c.support()) {
        SparseMat<mpz_class> a = c.khovanov_block(i, j).map<mpz_class>(
            [](int64_t v) { return mpz_class(static_cast<long>(v)); });
        auto snf = smith_normal_form(a, true);
        BlockLattice bl;
        bl.n = a.cols;
        bl.val.assign(static_cast<size_t>(a.cols), -1);
        for (size_t t = 0; t < snf.diagonal.size(); ++t) {
            int v = vp_of(snf.diagonal[t], p);
            bl.val[t] = v;
            max_val = std::max(max_val, v);
        }
        bl.V = std::move(*snf.V);
        bl.vinv_rows.assign(static_cast<size_t>(bl.n), {});
        for (auto& e : snf.Vinv->entries) bl.vinv_rows[e.row].emplace_back(e.col, e.val);
        bl.vcols.assign(static_cast<size_t>(bl.n), {});
        for (auto& e : bl.V.entries) bl.vcols[e.col].emplace_back(e.row, e.val);
        lat.emplace(Bigrading{i, j}, std::move(bl));
    }

    SpectralSequence seq;
    seq.seq = SeqKind::bockstein;
    seq.coeff = RingTag::Zp(p);
    PrimeField F(p);
    ModOps mops{&F};

    int r_stop = max_val + 1;
    for (int r = 1; r <= r_stop; ++r) {
        SpectralPage pg;
        pg.seq = SeqKind::bockstein;
        pg.coeff = RingTag::Zp(p);
        pg.r = r;
        pg.bidegree = {1, 0};
        for (auto [i, j] : c.support()) {
            const BlockLattice& bl = lat.at({i, j});
            if (bl.n == 0) continue;
            // E_B^r = Y_r / (p Y_{r-1} + (1/p^{r-1}) A_{i-1} Y_{r-1}^{prev});
            // everything is expressed in the Y_r basis and reduced mod p,
            // where the quotient dimension is n - rank of the denominator
            EchelonBasis<ModOps> ech(mops);
            int64_t killed = 0;
            for (int64_t t = 0; t < bl.n; ++t) {
                int e = 1 + m_exp(bl.val[t], r - 1) - m_exp(bl.val[t], r);
                if (e == 0) {
                    SparseVec<uint32_t> v;
                    v.emplace_back(static_cast<int32_t>(t), 1);
                    if (ech.insert(std::move(v)) >= 0) ++killed;
                }
            }
            auto prev = lat.find({i - 1, j});
            if (prev != lat.end() && prev->second.n > 0) {
                const BlockLattice& pb = prev->second;
                SparseMat<int64_t> ablk = c.khovanov_block(i - 1, j);
                std::vector<std::vector<std::pair<int32_t, int64_t>>> acols(
                    static_cast<size_t>(ablk.cols));
                for (auto& e : ablk.entries) acols[e.col].emplace_back(e.row, e.val);
                mpz_class pr1;
                mpz_ui_pow_ui(pr1.get_mpz_t(), p, static_cast<unsigned>(r - 1));
                for (int64_t t = 0; t < pb.n; ++t) {
                    mpz_class scale;
                    mpz_ui_pow_ui(scale.get_mpz_t(), p,
                                  static_cast<unsigned>(m_exp(pb.val[t], r - 1)));
                    // y = scale * (V_prev e_t); x = A y / p^{r-1}
                    std::vector<mpz_class> x(static_cast<size_t>(bl.n), 0);
                    bool any = false;
                    for (auto& [row, v] : pb.vcols[t])
                        for (auto& [arow, av] : acols[row]) {
                            x[arow] += v * av;
                            any = true;
                        }
                    if (!any) continue;
                    bool nonzero = false;
                    for (auto& xv : x) {
                        if (xv == 0) continue;
                        xv *= scale;
                        if (xv % pr1 != 0)
                            throw std::logic_error("bockstein image is not divisible by p^{r-1}");
                        xv /= pr1;
                        nonzero = true;
                    }
                    if (!nonzero) continue;
                    // w = D_r^{-1} V^{-1} x, reduced mod p
                    SparseVec<uint32_t> w;
                    for (int64_t row = 0; row < bl.n; ++row) {
                        mpz_class acc = 0;
                        for (auto& [cc, vv] : bl.vinv_rows[row]) acc += vv * x[cc];
                        if (acc == 0) continue;
                        mpz_class den;
                        mpz_ui_pow_ui(den.get_mpz_t(), p,
                                      static_cast<unsigned>(m_exp(bl.val[row], r)));
                        if (acc % den != 0)
                            throw std::logic_error("bockstein pullback leaves the lattice");
                        acc /= den;
                        mpz_class res = acc % p;
                        if (res < 0) res += p;
                        uint32_t rv = static_cast<uint32_t>(res.get_ui());
                        if (rv) w.emplace_back(static_cast<int32_t>(row), rv);
                    }
                    if (!w.empty() && ech.insert(std::move(w)) >= 0) ++killed;
                }
            }
            int64_t dim = bl.n - killed;
            if (dim) pg.dims[{i, j}] = dim;
        }
        seq.pages.push_back(std::move(pg));
    }
    fill_ranks(seq.pages, 0);  // d_B^r has bidegree (1, 0)
    return seq;
}

}  // namespace kh
