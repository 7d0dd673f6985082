#pragma once

#include <span>
#include <vector>

#include "signrel/graph.hpp"
#include "signrel/measure_spec.hpp"

namespace signrel {

struct SolveParams {
    double c = 0.85;
    double tol = 1e-8;
    int max_iter = 200;
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;  // max-norm of the last successive-iterate difference
    bool converged = false;
};

struct SolveResult {
    std::vector<double> scores;
    SolveReport report;
};

// ---------------------------------------------------------------------------
// Katz

/// Row `source` of sum_{l=1..gamma} beta^l |A|^l, by gamma sparse
/// vector-matrix products.
std::vector<double> katz_unsigned_row(const SignedGraph& g, NodeId source, double beta, int gamma);

/// Row `source` of sum_{l=1..gamma} beta^l A^l with A taken either as the
/// signed +-1 adjacency (use_signs) or as |A|.
std::vector<double> katz_series_row(const SignedGraph& g, NodeId source, double beta, int gamma,
                                    bool use_signs);

/// Balanced / unbalanced path counts from a fixed source: rows of B_l and U_l.
struct SignedPathCounts {
    std::vector<double> balanced;
    std::vector<double> unbalanced;
    int length = 0;
};

/// B_1 = A+, U_1 = A-, B_l = B_{l-1}A+ + U_{l-1}A-, U_l = B_{l-1}A- + U_{l-1}A+.
/// Returns the counts for l = 1..max_length.
std::vector<SignedPathCounts> signed_path_counts(const SignedGraph& g, NodeId source,
                                                 int max_length);

/// sum_{l=1..gamma} beta^l (B_l - U_l) for row `source`. Scores may be negative.
std::vector<double> katz_signed_row(const SignedGraph& g, NodeId source, double beta, int gamma);

// ---------------------------------------------------------------------------
// Random walk with restart

/**
 * Row-normalized transition S = D^-1 A with D_ii = sum_k |A_ik|, stored
 * column-wise so one step is a gather over in-neighbors. Built from |A| for
 * the unsigned walk. Rows of dangling nodes are zero.
 */
class RandomWalkOperator {
public:
    RandomWalkOperator(const SignedGraph& g, bool use_signs, double c);

    std::size_t node_count() const noexcept { return inv_degree_.size(); }
    double restart() const noexcept { return c_; }
    bool use_signs() const noexcept { return use_signs_; }

    /// sum_k |S_ik|: 1 for nodes with out-edges, 0 for dangling nodes.
    double abs_row_sum(NodeId i) const noexcept { return inv_degree_[i] > 0.0 ? 1.0 : 0.0; }

    /// S_kj, or 0 when there is no edge.
    double transition(NodeId k, NodeId j) const;

    /// out = c * (r S) + (1 - c) e_source.
    void step(std::span<const double> r, NodeId source, std::span<double> out) const;

    /// out = r S (no restart term, no scaling).
    void propagate(std::span<const double> r, std::span<double> out) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> from_;
    std::vector<signed char> sign_;  // sign applied to the contribution of from_[k]
    std::vector<double> inv_degree_;
    double c_;
    bool use_signs_;
};

/// Row `source` of (1 - c)(I - cS)^-1 by the iteration r <- c rS + (1 - c)e,
/// starting from (1 - c)e, stopping once the max-norm change is <= tol.
SolveResult rwr_row(const RandomWalkOperator& op, NodeId source, double tol, int max_iter);
SolveResult rwr_row(const SignedGraph& g, NodeId source, const SolveParams& params,
                    bool use_signs);

// ---------------------------------------------------------------------------
// ASCOS++

/**
 * ASCOS++ propagation weights M_ik = (A_ik / kappa_i)(1 - e^{-A_ik}) over the
 * out-edges of i. kappa_i = sum_q |A_iq| for the signed variant and
 * sum_q A_iq for the unsigned one; rows with kappa_i = 0 are zero.
 */
class AscosOperator {
public:
    AscosOperator(const SignedGraph& g, bool signed_variant, double c);

    std::size_t node_count() const noexcept { return offsets_.size() - 1; }
    double decay() const noexcept { return c_; }

    /// c * sum_k M_ik x_k for one node i.
    double apply_row(NodeId i, std::span<const double> x) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> to_;
    std::vector<double> weight_;
    double c_;
};

/// Relevance of every node towards `target`: x_i = R(i, target), the
/// solution of x_i = c sum_k M_ik x_k for i != target with x_target = 1.
SolveResult ascospp_column(const AscosOperator& op, NodeId target, double tol, int max_iter);
SolveResult ascospp_column(const SignedGraph& g, NodeId target, const SolveParams& params,
                           bool signed_variant);

/// max_{i != target} |x_i - c sum_k M_ik x_k|, plus |x_target - 1|.
double ascospp_residual(const AscosOperator& op, NodeId target, std::span<const double> x);

// ---------------------------------------------------------------------------
// Batch scoring

/// Scores pairs with katz / ascospp / rwr. The strategy transform is applied
/// internally; the graph's direction is kept. Pairs are grouped so that each
/// distinct source (target, for ASCOS++) costs one solve; solves run on up to
/// `workers` threads (0 = hardware concurrency). Non-converged solves are
/// reported in `warnings`.
PairScoreSet score_global_pairs(const SignedGraph& g, const MeasureSpec& spec,
                                std::span<const NodePair> pairs, unsigned workers = 0);

/// Same, on a graph that is already strategy-transformed.
PairScoreSet score_global_pairs_prepared(const SignedGraph& prepared, const MeasureSpec& spec,
                                         std::span<const NodePair> pairs, unsigned workers = 0);

}  // namespace signrel
