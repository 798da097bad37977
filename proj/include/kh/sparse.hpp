#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kh {

// Sparse matrix in triplet form, entries kept sorted by (row, col) and deduped.
// T is the coefficient type: int64_t for cube blocks, mpz_class / mpq_class for
// exact arithmetic, uint32_t for Z_p residues.
template <class T>
struct SparseMat {
    struct Entry {
        int32_t row;
        int32_t col;
        T val;
        bool operator==(const Entry& o) const {
            return row == o.row && col == o.col && val == o.val;
        }
    };

    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<Entry> entries;

    SparseMat() = default;
    SparseMat(int64_t r, int64_t c) : rows(r), cols(c) {}

    void add(int32_t r, int32_t c, T v) {
        if (r < 0 || r >= rows || c < 0 || c >= cols) throw std::out_of_range("SparseMat::add index");
        entries.push_back({r, c, std::move(v)});
    }

    // Sort by (row, col), combine duplicates, drop zeros.
    void normalize() {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        std::vector<Entry> out;
        out.reserve(entries.size());
        for (auto& e : entries) {
            if (!out.empty() && out.back().row == e.row && out.back().col == e.col)
                out.back().val += e.val;
            else
                out.push_back(std::move(e));
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Entry& e) { return e.val == 0; }),
                  out.end());
        entries = std::move(out);
    }

    size_t nnz() const { return entries.size(); }
    bool empty() const { return entries.empty(); }

    template <class U, class Fn>
    SparseMat<U> map(Fn fn) const {
        SparseMat<U> m(rows, cols);
        m.entries.reserve(entries.size());
        for (const auto& e : entries) {
            U v = fn(e.val);
            if (!(v == U(0))) m.entries.push_back({e.row, e.col, std::move(v)});
        }
        return m;
    }

    SparseMat<T> transposed() const {
        SparseMat<T> m(cols, rows);
        m.entries.reserve(entries.size());
        for (const auto& e : entries) m.entries.push_back({e.col, e.row, e.val});
        m.normalize();
        return m;
    }

    // Rows as (col, val) lists; used by the eliminators.
    std::vector<std::vector<std::pair<int32_t, T>>> row_lists() const {
        std::vector<std::vector<std::pair<int32_t, T>>> rws(rows);
        for (const auto& e : entries) rws[e.row].emplace_back(e.col, e.val);
        for (auto& r : rws)
            std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.first < b.first; });
        return rws;
    }

    // Dense column-major product m * v for small checks.
    std::vector<T> apply(const std::vector<T>& v) const {
        if (static_cast<int64_t>(v.size()) != cols) throw std::invalid_argument("apply: size mismatch");
        std::vector<T> out(rows, T(0));
        for (const auto& e : entries) out[e.row] += e.val * v[e.col];
        return out;
    }
};

template <class T>
SparseMat<T> sparse_identity(int64_t n) {
    SparseMat<T> m(n, n);
    for (int64_t i = 0; i < n; ++i) m.entries.push_back({(int32_t)i, (int32_t)i, T(1)});
    return m;
}

template <class T>
SparseMat<T> sparse_mul(const SparseMat<T>& a, const SparseMat<T>& b) {
    if (a.cols != b.rows) throw std::invalid_argument("sparse_mul: shape mismatch");
    auto brows = b.row_lists();
    SparseMat<T> c(a.rows, b.cols);
    for (const auto& e : a.entries)
        for (const auto& [j, v] : brows[e.col]) c.entries.push_back({e.row, j, e.val * v});
    c.normalize();
    return c;
}

}  // namespace kh
