#pragma once

#include <gmpxx.h>

#include <map>
#include <vector>

#include "kh/complex.hpp"
#include "kh/homology.hpp"
#include "kh/linalg.hpp"

namespace kh {

enum class SeqKind { lee, turner, bockstein };

struct SpectralPage {
    SeqKind seq = SeqKind::lee;
    RingTag coeff;
    int r = 1;
    std::pair<int, int> bidegree{1, 0};        // of d_r
    std::map<Bigrading, int64_t> dims;         // E_r table
    std::map<Bigrading, int64_t> ranks;        // rank of d_r out of (i,j)

    int64_t dim(int i, int j) const {
        auto it = dims.find({i, j});
        return it == dims.end() ? 0 : it->second;
    }
    int64_t total() const;
    std::map<int, int64_t> totals_by_i() const;
    int64_t total_rank() const;
};

struct SpectralSequence {
    SeqKind seq = SeqKind::lee;
    RingTag coeff;
    std::vector<SpectralPage> pages;  // E_1 first; the last page is E_infinity
    const SpectralPage& infinity() const { return pages.back(); }
    const SpectralPage& page(int r) const;  // 1-based, clamps to E_infinity
};

// Pages of the Lee or Turner spectral sequence of a filtered complex, through
// stabilization. The complex theory picks the sequence (LEE -> lee pages over
// its field, TURNER / BARNATAN_F2 -> turner pages over Z_2).
SpectralSequence filtered_pages(const CubeComplex& c);

// Bockstein pages of the integral KHOVANOV complex at the prime p.
SpectralSequence bockstein_pages(const CubeComplex& c, uint32_t p);

// Per-homological-grading dimension of both infinity pages, predicted from
// component subsets and linking numbers (identical formula for Lee/Turner).
std::map<int, int64_t> infinity_prediction(const PlanarDiagram& d);

struct InfinityPredictions {
    std::map<int, int64_t> lee;
    std::map<int, int64_t> turner;
};
InfinityPredictions infinity_predictions(const BraidWord& w,
                                         SignConvention conv = SignConvention::paper);

// Filtered Bar-Natan homology by total-complex rank bookkeeping, one
// dimension per homological grading (cross-check for the Turner E_infinity).
std::map<int, int64_t> filtered_total_homology(const CubeComplex& c);

enum class InducedKind { nu_star, dT_star, dL_star, dB1 };

// A chain-level-induced map on Khovanov homology, as matrices on a fixed
// echelon homology basis per bigrading. Z_p maps carry residue matrices, the
// rational Lee map carries exact rational columns.
struct InducedMap {
    InducedKind kind = InducedKind::nu_star;
    RingTag field;
    std::pair<int, int> bidegree{0, 2};
    std::map<Bigrading, int64_t> hdim;
    std::map<Bigrading, SparseMat<int64_t>> blocks;
    std::map<Bigrading, std::vector<SparseVec<mpq_class>>> qcols;
    std::map<Bigrading, int64_t> rank;
    int64_t total_rank() const;
};

InducedMap induced_map(const CubeComplex& c, InducedKind which);

// Shumakovitch: d_T^* = d_B^1 nu^* + nu^* d_B^1 on H(L;Z_2), verified as a
// literal matrix identity per bigrading on one shared homology basis.
struct TbvReport {
    CheckReport check;
    int64_t dT_total_rank = 0;
};
TbvReport tbv_check(const CubeComplex& c);

}  // namespace kh
