#pragma once

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "nullcorr/field.hpp"

namespace nullcorr {

struct MatrixInvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Column-major sparse matrix over a field F. Each column is sorted by row
/// index and stores no zeros; (row, col) keys are unique by construction.
template <class F>
struct SpMat {
    using Elem = typename F::Elem;
    using Col = std::vector<std::pair<int, Elem>>;

    int nrows = 0;
    int ncols = 0;
    std::vector<Col> cols;

    SpMat() = default;
    SpMat(int r, int c) : nrows(r), ncols(c), cols(static_cast<size_t>(c)) {}

    static SpMat identity(const F& f, int n) {
        SpMat m(n, n);
        for (int j = 0; j < n; ++j) m.cols[j].emplace_back(j, f.one());
        return m;
    }

    static SpMat zero(int r, int c) { return SpMat(r, c); }

    static SpMat from_triplets(const F& f, int r, int c,
                               const std::vector<std::tuple<int, int, Elem>>& ts) {
        SpMat m(r, c);
        for (const auto& [i, j, v] : ts) {
            if (i < 0 || i >= r || j < 0 || j >= c)
                throw MatrixInvariantViolation("entry index out of bounds");
            if (f.is_zero(v)) throw MatrixInvariantViolation("stored zero entry");
            m.cols[j].emplace_back(i, v);
        }
        for (auto& col : m.cols) {
            std::sort(col.begin(), col.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (size_t k = 1; k < col.size(); ++k)
                if (col[k].first == col[k - 1].first)
                    throw MatrixInvariantViolation("duplicate (row, col) entry");
        }
        return m;
    }

    std::vector<std::tuple<int, int, Elem>> triplets() const {
        std::vector<std::tuple<int, int, Elem>> ts;
        for (int j = 0; j < ncols; ++j)
            for (const auto& [i, v] : cols[j]) ts.emplace_back(i, j, v);
        return ts;
    }

    void set_col(int j, Col col) { cols[static_cast<size_t>(j)] = std::move(col); }
    const Col& col(int j) const { return cols[static_cast<size_t>(j)]; }

    size_t nnz() const {
        size_t n = 0;
        for (const auto& c : cols) n += c.size();
        return n;
    }

    SpMat transpose(const F&) const {
        SpMat t(ncols, nrows);
        for (int j = 0; j < ncols; ++j)
            for (const auto& [i, v] : cols[j]) t.cols[i].emplace_back(j, v);
        // row-sorted within each new column because j increases
        return t;
    }

    /// this * rhs
    SpMat mul(const F& f, const SpMat& rhs) const {
        if (ncols != rhs.nrows) throw MatrixInvariantViolation("mul: shape mismatch");
        SpMat out(nrows, rhs.ncols);
        std::vector<Elem> acc(static_cast<size_t>(nrows), f.zero());
        std::vector<int> touched;
        for (int j = 0; j < rhs.ncols; ++j) {
            touched.clear();
            for (const auto& [k, w] : rhs.cols[j]) {
                for (const auto& [i, v] : cols[k]) {
                    if (f.is_zero(acc[i])) touched.push_back(i);
                    acc[i] = f.add(acc[i], f.mul(v, w));
                }
            }
            std::sort(touched.begin(), touched.end());
            Col col;
            for (int i : touched) {
                if (!f.is_zero(acc[i])) col.emplace_back(i, acc[i]);
                acc[i] = f.zero();
            }
            out.cols[j] = std::move(col);
        }
        return out;
    }

    typename SpMat::Col mul_vec(const F& f, const Col& v) const {
        std::vector<Elem> acc(static_cast<size_t>(nrows), f.zero());
        std::vector<int> touched;
        for (const auto& [k, w] : v)
            for (const auto& [i, e] : cols[k]) {
                if (f.is_zero(acc[i])) touched.push_back(i);
                acc[i] = f.add(acc[i], f.mul(e, w));
            }
        std::sort(touched.begin(), touched.end());
        Col out;
        for (int i : touched) {
            if (!f.is_zero(acc[i])) out.emplace_back(i, acc[i]);
            acc[i] = f.zero();
        }
        return out;
    }

    /// [this | rhs]
    SpMat hstack(const SpMat& rhs) const {
        if (nrows != rhs.nrows) throw MatrixInvariantViolation("hstack: row mismatch");
        SpMat out(nrows, ncols + rhs.ncols);
        for (int j = 0; j < ncols; ++j) out.cols[j] = cols[j];
        for (int j = 0; j < rhs.ncols; ++j) out.cols[ncols + j] = rhs.cols[j];
        return out;
    }

    SpMat negate(const F& f) const {
        SpMat out = *this;
        for (auto& c : out.cols)
            for (auto& [i, v] : c) v = f.neg(v);
        return out;
    }

    bool is_zero_matrix() const {
        for (const auto& c : cols)
            if (!c.empty()) return false;
        return true;
    }

    bool equals(const F&, const SpMat& o) const {
        if (nrows != o.nrows || ncols != o.ncols) return false;
        for (int j = 0; j < ncols; ++j)
            if (cols[j] != o.cols[j]) return false;
        return true;
    }
};

/// Block assembly helper: place `block` at row offset ro, col offset co of dst.
template <class F>
void place_block(SpMat<F>& dst, const SpMat<F>& block, int ro, int co) {
    if (ro + block.nrows > dst.nrows || co + block.ncols > dst.ncols)
        throw MatrixInvariantViolation("place_block: out of bounds");
    for (int j = 0; j < block.ncols; ++j) {
        auto& dcol = dst.cols[co + j];
        for (const auto& [i, v] : block.cols[j]) dcol.emplace_back(ro + i, v);
        std::sort(dcol.begin(), dcol.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
}

}  // namespace nullcorr
