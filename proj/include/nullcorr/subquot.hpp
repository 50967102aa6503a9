#pragma once

#include "nullcorr/elim.hpp"

namespace nullcorr {

/// A subquotient span(Z)/span(B) of a based ambient space, with a canonical
/// representative basis. This is the carrier for every cohomology group the
/// chase produces: Z are the cycles, B the boundaries.
///
/// Canonical form: echelonize B first, then the Z generators; basis columns
/// whose pivot rows were not claimed by B represent the quotient. Those
/// columns contain no B-pivot rows at all, so they are independent modulo
/// span(B), and there are exactly rank(Z) - rank(B) of them.
template <class F>
class Subquot {
public:
    using Elem = typename F::Elem;
    using Col = typename SpMat<F>::Col;

    Subquot() = default;

    /// spec-level constructor: verifies span(B) subset of span(Z)
    static Subquot make(const F& f, int ambient_dim, const SpMat<F>& Z, const SpMat<F>& B) {
        if (Z.nrows != ambient_dim || B.nrows != ambient_dim)
            throw ContainmentViolation("subquotient: ambient dimension mismatch");
        {
            SpanSolver<F> zspan(f, Z);
            for (int j = 0; j < B.ncols; ++j)
                if (!zspan.contains(B.col(j)))
                    throw ContainmentViolation("subquotient: boundary column outside span of cycles");
        }
        return make_unchecked(f, ambient_dim, Z, B);
    }

    /// internal constructor for chase steps where containment is structural;
    /// the quotient count is still validated
    static Subquot make_unchecked(const F& f, int ambient_dim, const SpMat<F>& Z, const SpMat<F>& B) {
        Subquot s;
        s.ambient_dim_ = ambient_dim;
        Echelonizer<F> e(f, ambient_dim);
        for (int j = 0; j < B.ncols; ++j) e.add_column(B.col(j), j, false, nullptr);
        int rank_b = e.rank();
        for (int j = 0; j < Z.ncols; ++j) e.add_column(Z.col(j), j, false, nullptr);
        e.canonicalize();
        auto ech = e.take();
        // recompute B's canonical echelon separately (canonicalize mixed the columns)
        auto bech = echelonize(f, B, false);
        s.bnd_ = bech.basis_matrix();
        std::vector<bool> is_b_pivot(static_cast<size_t>(ambient_dim), false);
        for (int r : bech.pivot_rows) is_b_pivot[static_cast<size_t>(r)] = true;
        SpMat<F> rep(ambient_dim, 0);
        for (int k = 0; k < ech.rank; ++k)
            if (!is_b_pivot[static_cast<size_t>(ech.pivot_rows[k])])
                rep.cols.push_back(ech.basis[static_cast<size_t>(k)]);
        rep.ncols = static_cast<int>(rep.cols.size());
        if (rep.ncols != ech.rank - rank_b)
            throw ContainmentViolation("subquotient: rank bookkeeping failed");
        s.rep_ = std::move(rep);
        s.dim_ = s.rep_.ncols;
        s.bnd_solver_ = std::make_shared<SpanSolver<F>>(f, s.bnd_);
        s.full_solver_ = std::make_shared<SpanSolver<F>>(f, s.bnd_.hstack(s.rep_));
        return s;
    }

    static Subquot zero(const F& f, int ambient_dim) {
        return make_unchecked(f, ambient_dim, SpMat<F>(ambient_dim, 0), SpMat<F>(ambient_dim, 0));
    }

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return dim_; }
    const SpMat<F>& rep() const { return rep_; }
    const SpMat<F>& bnd() const { return bnd_; }

    bool in_boundaries(const Col& v) const { return bnd_solver_->contains(v); }

    /// coordinates of an ambient vector's class on the representative basis;
    /// nullopt when the vector is outside span(Z)
    std::optional<Col> class_coords(const F& f, const Col& v) const {
        auto c = full_solver_->coords(v);
        if (!c) return std::nullopt;
        Col out;
        const int nb = bnd_.ncols;
        for (const auto& [i, s] : *c)
            if (i >= nb && !f.is_zero(s)) out.emplace_back(i - nb, s);
        return out;
    }

private:
    int ambient_dim_ = 0;
    int dim_ = 0;
    SpMat<F> rep_;  // ambient_dim x dim canonical representatives
    SpMat<F> bnd_;  // canonical echelon basis of the boundary span
    std::shared_ptr<SpanSolver<F>> bnd_solver_;
    std::shared_ptr<SpanSolver<F>> full_solver_;  // over [bnd | rep]
};

/// Matrix of the map induced on subquotients by an ambient-level matrix.
/// Requires amb * Z_src within span(Z_dst) and amb * B_src within span(B_dst);
/// otherwise the map is not well defined on classes and the chase is broken.
template <class F>
SpMat<F> induced_map(const F& f, const Subquot<F>& src, const Subquot<F>& dst,
                     const SpMat<F>& amb) {
    if (amb.ncols != src.ambient_dim() || amb.nrows != dst.ambient_dim())
        throw NotWellDefined("induced_map: ambient matrix shape mismatch");
    for (int j = 0; j < src.bnd().ncols; ++j)
        if (!dst.in_boundaries(amb.mul_vec(f, src.bnd().col(j))))
            throw NotWellDefined("induced_map: boundaries not mapped into boundaries");
    SpMat<F> out(dst.dim(), src.dim());
    for (int j = 0; j < src.dim(); ++j) {
        auto coords = dst.class_coords(f, amb.mul_vec(f, src.rep().col(j)));
        if (!coords) throw NotWellDefined("induced_map: image leaves the target cycle span");
        out.cols[static_cast<size_t>(j)] = std::move(*coords);
    }
    return out;
}

}  // namespace nullcorr
