#pragma once

#include <deque>
#include <map>
#include <set>

#include "nullcorr/expr.hpp"
#include "nullcorr/monad.hpp"
#include "nullcorr/subquot.hpp"

namespace nullcorr {

/// One computed cohomology group.
/// `has_basis` marks groups carrying an explicit subquotient representation
/// (directly or as the formal dual of one). Groups assembled from a long
/// exact sequence whose two contributions are both nonzero have an exact
/// dimension but only an extension-type representation; they are reported
/// with has_basis = false and cannot feed further induced maps.
struct CohomGroup {
    std::int64_t dim = 0;
    bool has_basis = false;
    std::string representation;
    std::string provenance;
};

struct ChaseOutcome {
    bool determined = false;
    CohomGroup group;
    std::string reason;  // first blocked arrow, when undetermined

    static ChaseOutcome det(CohomGroup g) { return {true, std::move(g), {}}; }
    static ChaseOutcome undet(std::string why) { return {false, {}, std::move(why)}; }
};

struct CohomTable {
    int t_min = 0, t_max = 0;
    int max_i = 0;
    // outcome[t - t_min][i]
    std::vector<std::vector<ChaseOutcome>> cells;
};

/// The cohomology engine. Evaluates h^i(E(t)) for expressions over the
/// monad's bundles by chasing the defining short exact sequences:
/// every group it determines is either represented as an explicit subquotient
/// of a labeled sum of graded pieces (lower half, i <= n) or is the Serre
/// dual of such a group (upper half), so induced maps between groups are
/// honest matrices and connecting maps are never guessed. When a needed rank
/// is not representable the engine answers Undetermined rather than asserting.
template <class F>
class ChaseEngine {
public:
    ChaseEngine(const MonadData& md, const F& field);

    const Weights& weights() const { return md_.weights(); }

    ChaseOutcome cohom(const SheafExpr& e, int i, int t);
    ChaseOutcome cohom_terms(const NSum& sum, int i, int t);
    CohomTable cohom_table(const SheafExpr& e, int t_min, int t_max);

    /// alternating sum over a fully determined column; nullopt if any cell is
    /// undetermined
    std::optional<std::int64_t> euler_column(const SheafExpr& e, int t);

    /// number of evaluations that ended Undetermined so far
    int undetermined_count() const { return undet_count_; }

private:
    enum class GKind { Full, DualFull, DimOnly, Undet };
    enum class How { AtomLine, SumParts, KerOf, CokerOf, DualWrap, None };

    struct Grp {
        GKind kind = GKind::Undet;
        std::int64_t dim = 0;
        std::string reason;
        std::string trace;

        // Full groups
        Subquot<F> sq;
        int amb_dim = 0;
        How how = How::None;
        std::vector<int> leaf_degrees;    // AtomLine slot degrees, in order
        std::vector<Grp*> parts;          // SumParts
        Grp* base = nullptr;              // KerOf / CokerOf ambient donor
        std::string resolved_key;         // Prod constructions: key of the factor resolved away
        NTerm other_term;                 // Prod constructions: the surviving factor (core, twist)

        Grp* dual_grp = nullptr;  // DualFull

        // identity
        CorePtr core;
        int level = 0, twist = 0;

        bool has_dim() const { return kind != GKind::Undet; }
        bool full() const { return kind == GKind::Full; }
    };

    enum class Arrow { A, TA, BW, TBW, AW };

    // --- plumbing
    Grp* fresh();
    Grp* make_undet(CorePtr c, int i, int t, std::string why);
    Grp* make_full_zero(CorePtr c, int i, int t, std::string trace);
    Grp* sum_group(const std::vector<Grp*>& parts);

    Grp* eval_term(const NTerm& term, int i, int extra_twist);
    Grp* eval(const CorePtr& core, int i, int t);
    Grp* eval_routed(const CorePtr& core, int i, int t, int route);
    Grp* eval_atom(const CorePtr& core, int i, int t);
    Grp* eval_line(const CorePtr& core, int i, int t);
    Grp* serre_dual(const CorePtr& core, int i, int t);

    // sequence data: for the factor core X of a product X (x) other, the
    // defining sequence instance at twist t. Exactly one of the flank slots
    // is a product term (flavor-2, needs an arrow); the rest are atom sums.
    struct SeqData {
        bool sub = false;  // E embeds in M (sub) or M surjects onto E (quot)
        std::vector<NTerm> s_parts, m_parts, c_parts;  // flank descriptors
        // flavor-1 entries: (m_index, s_or_c_index, form), mapping S -> M for
        // quot or M -> C for sub
        std::vector<std::tuple<int, int, FormValue>> entries;
        bool flavor2 = false;
        Arrow arrow = Arrow::A;
        std::string name;
    };
    std::optional<SeqData> seq_for(const CorePtr& factor, const NTerm& other, int t, bool alt);

    Grp* eval_seq(const CorePtr& core, int i, int t, const SeqData& sd);

    // --- evaluated flank sums
    struct FlankEval {
        bool all_have_dim = true;
        bool all_full = true;
        std::int64_t dim = 0;
        std::vector<Grp*> grps;
    };
    FlankEval eval_flank(const std::vector<NTerm>& parts, int level);

    // --- same-core transport: the ambient matrix of multiplication by h
    // between two canonically built atom groups of the same core
    std::optional<SpMat<F>> mult_amb(Grp* src, Grp* dst, const FormValue& h);
    void mult_amb_rec(Grp* src, Grp* dst, const FormValue& h, int ro, int co,
                      std::vector<std::tuple<int, int, typename F::Elem>>& out, bool& ok);

    // --- block maps between atom-core flank sums
    std::optional<SpMat<F>> block_amb(const std::vector<Grp*>& src, const std::vector<Grp*>& dst,
                                      const std::vector<std::tuple<int, int, FormValue>>& entries);
    // rank at a level, via the Serre-dual side above the middle
    std::optional<int> map_rank(const SeqData& sd, int level);

    // --- structure arrows on product groups
    std::optional<SpMat<F>> arrow_amb(Arrow a, Grp* prod_grp, Grp* other_side);
    std::optional<int> arrow_rank(const SeqData& sd, int level);

    SeqData dualize_seq(const SeqData& sd) const;

    // leaf matrices
    SpMat<F> leaf_a_row(int s) const;        // amb(H^0 H(s)) -> S_{s+gamma}
    SpMat<F> leaf_ta_col(int s) const;       // S_{s-gamma} -> amb(H^0 H*(s))
    SpMat<F> leaf_bw(int s) const;           // amb(H^0 H(s)) -> wedge-pair slots (s + a_k + a_l)
    SpMat<F> leaf_tbw(int s) const;          // wedge-pair dual slots -> amb(H^0 H*(s+gamma+zeta))
    SpMat<F> leaf_aw(int s) const;           // wedge-pair slots (s+a_k+a_l) -> amb(H^0 H(s+gamma))

    int h_weight(int k) const;
    ChaseOutcome outcome_of(Grp* g);

    const MonadData& md_;
    const F& f_;
    int n_, top_;  // top_ = 2n+1
    std::deque<Grp> pool_;
    std::map<std::string, Grp*> cache_;
    std::set<std::string> in_progress_;
    int undet_count_ = 0;

public:
    /// exposed for the verification suites: dimension-only access
    std::optional<std::int64_t> dim_of(const NTerm& term, int i, int t);
    std::optional<std::int64_t> dim_of_sum(const NSum& sum, int i, int t);
};

extern template class ChaseEngine<PrimeField>;
extern template class ChaseEngine<RationalField>;

}  // namespace nullcorr
