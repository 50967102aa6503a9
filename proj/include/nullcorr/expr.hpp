#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nullcorr/splitcalc.hpp"
#include "nullcorr/weights.hpp"

namespace nullcorr {

struct UnsupportedExpr : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// User-level expression tree over the monad's bundles.
/// Atoms: Q (the rank 2n+1 quotient), N (the rank 2n cohomology bundle),
/// their duals, and explicit line sums; combators: twist, dual, tensor,
/// exterior power.
struct SheafExpr {
    enum class Node { LineSum, Twist, Dual, Tensor, ExtPow, Q, Qdual, N, Ndual };
    Node node = Node::Q;
    std::vector<int> weights;  // LineSum
    int arg = 0;               // Twist amount / ExtPow exponent
    std::shared_ptr<const SheafExpr> a, b;

    static SheafExpr atom(Node n);
    static SheafExpr linesum(std::vector<int> w);
    static SheafExpr twist(SheafExpr e, int t);
    static SheafExpr dual(SheafExpr e);
    static SheafExpr tensor(SheafExpr x, SheafExpr y);
    static SheafExpr extpow(SheafExpr e, int q);

    std::string to_string() const;
};

/// prefix grammar: twist(N, -1), tensor(N, dual(N)), extpow(Qdual, 2),
/// linesum[0,0,-1], atoms N, Q, Ndual, Qdual, O
SheafExpr parse_expr(const std::string& s);

/// Normalized cores the engine evaluates. Prod factors are non-line cores in
/// canonical order; duals are eliminated (the cohomology bundle is symplectic,
/// its dual is a twist of itself; the quotient's dual is primitive).
enum class CoreKind { Line, Q, Qd, N, W2Q, W2Qd, W2N, Prod };

struct Core;
using CorePtr = std::shared_ptr<const Core>;

struct Core {
    CoreKind kind = CoreKind::Line;
    WeightList line;   // Line
    CorePtr a, b;      // Prod
    std::string key;   // canonical printable form, also the cache key

    static CorePtr make_line(WeightList wl);
    static CorePtr make(CoreKind k);             // Q, Qd, N, W2*
    static CorePtr make_prod(CorePtr x, CorePtr y);
};

/// one normalized summand: core twisted by t
struct NTerm {
    CorePtr core;
    int twist = 0;
};

/// a direct sum of normalized summands
struct NSum {
    std::vector<NTerm> terms;
    std::string key() const;
};

/// ranks and first Chern classes the rewrites need
int core_rank(const Weights& w, const CorePtr& c);
int core_c1(const Weights& w, const CorePtr& c);

/// the dual of a term, rewritten into the grammar (no Dual node survives)
NTerm dual_term(const Weights& w, const NTerm& t);

/// normalization: twists pushed onto terms, duals eliminated, tensors with
/// line sums distributed, exterior powers rewritten (top, top-1, rank-2 and
/// the wedge-square cores). Throws UnsupportedExpr for three or more
/// non-split tensor factors or exterior powers the engine does not carry.
NSum normalize(const Weights& w, const SheafExpr& e);

}  // namespace nullcorr
