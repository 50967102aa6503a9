#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "nullcorr/smat.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nullcorr {

struct ContainmentViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotWellDefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Which elimination kernel to run. Both produce bit-identical canonical
/// output; Parallel uses OpenMP on batched column reductions and is only
/// exercised for the prime-field scalar type.
enum class ExecPolicy { Serial, Parallel };

inline ExecPolicy& default_policy() {
    static ExecPolicy p = ExecPolicy::Serial;
    return p;
}

/// Reduced column echelon form of the column space of a matrix.
///
/// Pivot rule: columns are processed left to right; each column is fully
/// reduced against the current pivot set, and the lowest remaining row index
/// becomes a new pivot (normalized to 1). A final back-reduction clears every
/// pivot row from the other basis columns; basis columns are ordered by pivot
/// row. The result is the unique reduced echelon basis, independent of the
/// execution policy. The field has no magnitudes, so no pivoting heuristics.
template <class F>
struct Echelon {
    using Elem = typename F::Elem;
    using Col = typename SpMat<F>::Col;

    int nrows = 0;
    int rank = 0;
    std::vector<int> pivot_rows;   // ascending
    std::vector<Col> basis;        // basis[k] has leading 1 at pivot_rows[k]
    SpMat<F> kernel;               // canonical kernel basis (empty unless requested)

    SpMat<F> basis_matrix() const {
        SpMat<F> m(nrows, rank);
        for (int k = 0; k < rank; ++k) m.cols[k] = basis[k];
        return m;
    }
};

namespace detail {

template <class F>
typename F::Elem get_entry(const typename SpMat<F>::Col& c, int row, const F& f) {
    for (const auto& [i, v] : c)
        if (i == row) return v;
    return f.zero();
}

// c -= s * b, both sorted sparse columns
template <class F>
void axpy_col(const F& f, typename SpMat<F>::Col& c, const typename F::Elem& s,
              const typename SpMat<F>::Col& b) {
    typename SpMat<F>::Col out;
    out.reserve(c.size() + b.size());
    size_t i = 0, j = 0;
    while (i < c.size() || j < b.size()) {
        if (j >= b.size() || (i < c.size() && c[i].first < b[j].first)) {
            out.push_back(c[i++]);
        } else if (i >= c.size() || b[j].first < c[i].first) {
            out.emplace_back(b[j].first, f.neg(f.mul(s, b[j].second)));
            ++j;
        } else {
            auto v = f.sub(c[i].second, f.mul(s, b[j].second));
            if (!f.is_zero(v)) out.emplace_back(c[i].first, v);
            ++i; ++j;
        }
    }
    c = std::move(out);
}

template <class F>
void scale_col(const F& f, typename SpMat<F>::Col& c, const typename F::Elem& s) {
    for (auto& [i, v] : c) v = f.mul(v, s);
}

}  // namespace detail

/// Column echelonization driver. When `with_history`, kernel vectors (in the
/// coordinates of the input columns) are collected and canonicalized.
template <class F>
class Echelonizer {
public:
    using Elem = typename F::Elem;
    using Col = typename SpMat<F>::Col;

    explicit Echelonizer(const F& f, int nrows) : f_(f) { ech_.nrows = nrows; }

    /// Fully reduce `c` against the current pivot set, eliminating every
    /// pivot-row entry. The result is the unique normal form: elimination at
    /// a pivot row r only creates fill-in at rows > r (each basis column has
    /// its pivot as lowest row), so one ascending sweep with a dense
    /// accumulator settles every row.
    void reduce_full(Col& c, Col* hist) const {
        thread_local std::vector<Elem> acc;      // stays all-zero between calls
        thread_local std::vector<int> heap;
        if (static_cast<int>(acc.size()) < ech_.nrows) acc.resize(static_cast<size_t>(ech_.nrows), f_.zero());
        auto push = [&](int r) {
            heap.push_back(r);
            std::push_heap(heap.begin(), heap.end(), std::greater<int>());
        };
        for (const auto& [i, v] : c) {
            acc[static_cast<size_t>(i)] = v;
            push(i);
        }
        Col out;
        int last = -1;
        while (!heap.empty()) {
            std::pop_heap(heap.begin(), heap.end(), std::greater<int>());
            int r = heap.back();
            heap.pop_back();
            if (r == last) continue;
            last = r;
            Elem v = acc[static_cast<size_t>(r)];
            if (f_.is_zero(v)) continue;
            acc[static_cast<size_t>(r)] = f_.zero();
            auto it = pivot_of_row_.find(r);
            if (it == pivot_of_row_.end()) {
                out.emplace_back(r, v);
                continue;
            }
            const Col& b = ech_.basis[static_cast<size_t>(it->second)];
            for (size_t k = 1; k < b.size(); ++k) {  // b[0] is the pivot itself
                auto& slot = acc[static_cast<size_t>(b[k].first)];
                bool was_zero = f_.is_zero(slot);
                slot = f_.sub(slot, f_.mul(v, b[k].second));
                if (was_zero && !f_.is_zero(slot)) push(b[k].first);
            }
            if (hist) detail::axpy_col(f_, *hist, v, hist_[static_cast<size_t>(it->second)]);
        }
        c = std::move(out);
    }

    /// Admit a fully reduced nonzero column as a new pivot.
    void admit(Col c, Col hist) {
        Elem lead = c.front().second;
        detail::scale_col(f_, c, f_.inv(lead));
        detail::scale_col(f_, hist, f_.inv(lead));
        pivot_of_row_[c.front().first] = static_cast<int>(ech_.basis.size());
        ech_.pivot_rows.push_back(c.front().first);
        ech_.basis.push_back(std::move(c));
        hist_.push_back(std::move(hist));
        ++ech_.rank;
    }

    void add_column(const Col& c, int col_index, bool with_history,
                    std::vector<Col>* kernel_out) {
        Col cur = c;
        Col hist;
        if (with_history) hist.emplace_back(col_index, f_.one());
        reduce_full(cur, with_history ? &hist : nullptr);
        if (cur.empty()) {
            if (kernel_out) kernel_out->push_back(std::move(hist));
        } else {
            admit(std::move(cur), std::move(hist));
        }
    }

    /// Sort basis by pivot row and clear pivot rows from other columns.
    void canonicalize() {
        std::vector<int> order(ech_.basis.size());
        for (size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return ech_.pivot_rows[a] < ech_.pivot_rows[b]; });
        std::vector<Col> nb;
        std::vector<int> np;
        nb.reserve(order.size());
        for (int k : order) {
            nb.push_back(std::move(ech_.basis[k]));
            np.push_back(ech_.pivot_rows[k]);
        }
        ech_.basis = std::move(nb);
        ech_.pivot_rows = std::move(np);
        pivot_of_row_.clear();
        for (size_t k = 0; k < ech_.pivot_rows.size(); ++k)
            pivot_of_row_[ech_.pivot_rows[k]] = static_cast<int>(k);
        for (size_t k = ech_.basis.size(); k-- > 0;) {
            for (size_t l = 0; l < ech_.basis.size(); ++l) {
                if (l == k) continue;
                Elem v = detail::get_entry<F>(ech_.basis[l], ech_.pivot_rows[k], f_);
                if (!f_.is_zero(v)) detail::axpy_col(f_, ech_.basis[l], v, ech_.basis[k]);
            }
        }
    }

    Echelon<F> take() { return std::move(ech_); }
    const Echelon<F>& current() const { return ech_; }
    int rank() const { return ech_.rank; }

private:
    const F& f_;
    Echelon<F> ech_;
    std::vector<Col> hist_;
    std::unordered_map<int, int> pivot_of_row_;
};

namespace detail {

// Canonicalize a set of kernel vectors (columns over the input-column index
// space) into a reduced echelon basis of their span.
template <class F>
SpMat<F> canonical_span(const F& f, int dim, std::vector<typename SpMat<F>::Col> vecs) {
    Echelonizer<F> e(f, dim);
    for (auto& v : vecs) e.add_column(v, 0, false, nullptr);
    e.canonicalize();
    auto ech = e.take();
    SpMat<F> m(dim, ech.rank);
    for (int k = 0; k < ech.rank; ++k) m.cols[k] = ech.basis[k];
    return m;
}

template <class F>
Echelon<F> echelonize_serial(const F& f, const SpMat<F>& m, bool want_kernel) {
    Echelonizer<F> e(f, m.nrows);
    std::vector<typename SpMat<F>::Col> kernel;
    for (int j = 0; j < m.ncols; ++j)
        e.add_column(m.cols[j], j, want_kernel, want_kernel ? &kernel : nullptr);
    e.canonicalize();
    auto ech = e.take();
    ech.kernel = want_kernel ? canonical_span(f, m.ncols, std::move(kernel))
                             : SpMat<F>(m.ncols, 0);
    return ech;
}

// Batched variant: each batch is pre-reduced against the current pivot set in
// parallel, then finished sequentially in column order. Reduction against a
// fixed pivot set has a unique normal form, so the output matches the serial
// kernel exactly.
template <class F>
Echelon<F> echelonize_parallel(const F& f, const SpMat<F>& m, bool want_kernel) {
    Echelonizer<F> e(f, m.nrows);
    std::vector<typename SpMat<F>::Col> kernel;
    const int batch = 64;
    std::vector<typename SpMat<F>::Col> cur, hist;
    for (int j0 = 0; j0 < m.ncols; j0 += batch) {
        int j1 = std::min(m.ncols, j0 + batch);
        int nb = j1 - j0;
        cur.assign(nb, {});
        hist.assign(nb, {});
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int k = 0; k < nb; ++k) {
            cur[k] = m.cols[j0 + k];
            if (want_kernel) hist[k].emplace_back(j0 + k, f.one());
            e.reduce_full(cur[k], want_kernel ? &hist[k] : nullptr);
        }
        for (int k = 0; k < nb; ++k) {
            e.reduce_full(cur[k], want_kernel ? &hist[k] : nullptr);
            if (cur[k].empty()) {
                if (want_kernel) kernel.push_back(std::move(hist[k]));
            } else {
                e.admit(std::move(cur[k]), std::move(hist[k]));
            }
        }
    }
    e.canonicalize();
    auto ech = e.take();
    ech.kernel = want_kernel ? canonical_span(f, m.ncols, std::move(kernel))
                             : SpMat<F>(m.ncols, 0);
    return ech;
}

}  // namespace detail

template <class F>
Echelon<F> echelonize(const F& f, const SpMat<F>& m, bool want_kernel = false,
                      std::optional<ExecPolicy> policy = std::nullopt) {
    ExecPolicy p = policy.value_or(default_policy());
    if constexpr (std::is_same_v<F, PrimeField>) {
        if (p == ExecPolicy::Parallel)
            return detail::echelonize_parallel(f, m, want_kernel);
    }
    return detail::echelonize_serial(f, m, want_kernel);
}

template <class F>
int rank(const F& f, const SpMat<F>& m) {
    return echelonize(f, m, false).rank;
}

/// Columns form the canonical basis of ker(m); m * kernel_basis(m) == 0.
template <class F>
SpMat<F> kernel_basis(const F& f, const SpMat<F>& m) {
    return echelonize(f, m, true).kernel;
}

/// Membership/coordinate queries against a fixed echelonized span.
template <class F>
class SpanSolver {
public:
    using Elem = typename F::Elem;
    using Col = typename SpMat<F>::Col;

    SpanSolver(const F& f, const SpMat<F>& gens) : f_(f), ncols_(gens.ncols) {
        Echelonizer<F> e(f, gens.nrows);
        std::vector<Col> dummy;
        for (int j = 0; j < gens.ncols; ++j) e.add_column(gens.cols[j], j, true, &dummy);
        // no canonicalize: keep admission-order histories usable
        e_ = std::make_unique<Echelonizer<F>>(std::move(e));
    }

    int rank() const { return e_->rank(); }

    /// If v lies in the span, return coordinates in terms of the original
    /// generator columns; otherwise nullopt.
    std::optional<Col> coords(const Col& v) const {
        Col cur = v, hist;
        e_->reduce_full(cur, &hist);
        if (!cur.empty()) return std::nullopt;
        // v - sum s_k gen_k = 0 was accumulated as negated history
        for (auto& [i, s] : hist) s = f_.neg(s);
        (void)ncols_;
        return hist;
    }

    bool contains(const Col& v) const {
        Col cur = v;
        e_->reduce_full(cur, nullptr);
        return cur.empty();
    }

private:
    const F& f_;
    int ncols_;
    std::unique_ptr<Echelonizer<F>> e_;
};

}  // namespace nullcorr
