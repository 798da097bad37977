#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "kh/diagram.hpp"
#include "kh/frobenius.hpp"
#include "kh/ring.hpp"
#include "kh/sparse.hpp"

namespace kh {

// Cube of resolutions over a diagram. Generators are (vertex, labeling) pairs
// graded by i = h(I) - n_minus and j = (#1 - #X) + h(I) + n_plus - 2 n_minus;
// within a bigrading they are ordered lexicographically by (vertex bits,
// label bits), labels packed with bit c = 1 meaning an X on circle c.
// Differential blocks are produced per source bigrading with entries in
// {0, +-1}; callers reduce into their ring. Immutable once built.
class CubeComplex {
public:
    CubeComplex(PlanarDiagram d, Theory t, RingTag ring);

    const PlanarDiagram& diagram() const { return diag_; }
    Theory theory() const { return theory_; }
    RingTag ring() const { return ring_; }
    int crossings() const { return n_; }

    struct Block {
        int i = 0, j = 0;
        int64_t count = 0;
        std::vector<uint32_t> vertices;  // ascending vertex bitmasks
        std::vector<int64_t> offset;     // start index per vertex
        std::vector<uint8_t> xcount;     // #X labels per vertex at this bigrading
    };

    bool has_block(int i, int j) const;
    const Block& block(int i, int j) const;  // empty block if unsupported
    const std::vector<std::pair<int, int>>& support() const { return support_; }
    int64_t total_generators() const { return total_; }
    int64_t generator_bytes_estimate() const;

    int circle_count(uint32_t vertex) const { return circ_count_[vertex]; }

    // Matrix of one graded differential part out of bigrading (i, j), rows
    // indexed by the block at (i+1, j+part.jump).
    SparseMat<int64_t> part_block(const FrobPart& part, int i, int j) const;
    SparseMat<int64_t> khovanov_block(int i, int j) const { return part_block(khovanov_part(), i, j); }
    // Zero matrix when the theory has no perturbation.
    SparseMat<int64_t> perturbation_block(int i, int j) const;

    // The theory differential out of (i, j). For filtered theories the rows
    // span the two shifted target blocks, (i+1, j) entries first.
    SparseMat<int64_t> differential_block(int i, int j) const;

    // Shumakovitch's nu: replace one X by 1, bidegree (0, 2). Z_2 only.
    SparseMat<int64_t> nu_block(int i, int j) const;

    // label-rank helpers exposed for tests
    static int64_t rank_mask(uint32_t mask, int k);
    static uint32_t unrank_mask(int64_t r, int c, int k);

private:
    PlanarDiagram diag_;
    Theory theory_;
    RingTag ring_;
    int n_ = 0;

    std::vector<uint8_t> circ_count_;    // per vertex
    std::vector<int32_t> circ_map_;      // per vertex arc->circle, cached when affordable
    bool map_cached_ = false;

    std::map<std::pair<int, int>, Block> blocks_;
    std::vector<std::pair<int, int>> support_;
    int64_t total_ = 0;
    Block empty_;

    void circle_of(uint32_t vertex, int32_t* out) const;

    struct EdgeMaps {
        bool merge = false;
        int32_t a = 0, b = 0, target = 0;  // merge data: circles a,b -> target
        int32_t s = 0, t1 = 0, t2 = 0;     // split data: circle s -> t1,t2
        std::vector<int32_t> src2tgt;      // copy map for spectator circles
    };
    EdgeMaps edge_maps(uint32_t v, const int32_t* cv_map, int cv, uint32_t w) const;
};

// Spec-level constructor name.
inline CubeComplex build_complex(const PlanarDiagram& d, Theory t, RingTag ring) {
    return CubeComplex(d, t, ring);
}

}  // namespace kh
