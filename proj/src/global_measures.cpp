#include "signrel/global_measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "signrel/errors.hpp"

namespace signrel {
namespace {

void check_node(const SignedGraph& g, NodeId i) {
    if (i >= g.node_count()) {
        throw std::out_of_range("node id out of range: " + std::to_string(i));
    }
}

// y = x A, as a gather over in-neighbors. A is +-1 (use_signs) or |A|.
void multiply_adjacency(const SignedGraph& g, std::span<const double> x, std::span<double> y,
                        bool use_signs) {
    for (NodeId j = 0; j < g.node_count(); ++j) {
        double pos = 0.0;
        for (NodeId k : g.pos_in(j)) pos += x[k];
        double neg = 0.0;
        for (NodeId k : g.neg_in(j)) neg += x[k];
        y[j] = use_signs ? pos - neg : pos + neg;
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

void check_katz_params(double beta, int gamma) {
    if (!(beta > 0.0)) throw ConfigError("beta must be positive");
    if (gamma < 1) throw ConfigError("gamma must be at least 1");
}

void check_solve_params(double c, double tol, int max_iter) {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("c must lie in (0, 1)");
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
}

}  // namespace

// ---------------------------------------------------------------------------
// Katz

std::vector<double> katz_series_row(const SignedGraph& g, NodeId source, double beta, int gamma,
                                    bool use_signs) {
    check_katz_params(beta, gamma);
    check_node(g, source);
    const std::size_t n = g.node_count();
    std::vector<double> x(n, 0.0), next(n, 0.0), scores(n, 0.0);
    x[source] = 1.0;
    double weight = 1.0;
    for (int l = 1; l <= gamma; ++l) {
        multiply_adjacency(g, x, next, use_signs);
        std::swap(x, next);
        weight *= beta;
        for (std::size_t j = 0; j < n; ++j) scores[j] += weight * x[j];
    }
    return scores;
}

std::vector<double> katz_unsigned_row(const SignedGraph& g, NodeId source, double beta, int gamma) {
    return katz_series_row(g, source, beta, gamma, false);
}

namespace {

// One step of the balanced/unbalanced recurrence.
void advance_path_counts(const SignedGraph& g, std::span<const double> b, std::span<const double> u,
                         std::span<double> b_next, std::span<double> u_next) {
    for (NodeId j = 0; j < g.node_count(); ++j) {
        double bp = 0.0, up = 0.0;
        for (NodeId k : g.pos_in(j)) {
            bp += b[k];
            up += u[k];
        }
        double bn = 0.0, un = 0.0;
        for (NodeId k : g.neg_in(j)) {
            bn += b[k];
            un += u[k];
        }
        b_next[j] = bp + un;
        u_next[j] = bn + up;
    }
}

}  // namespace

std::vector<SignedPathCounts> signed_path_counts(const SignedGraph& g, NodeId source,
                                                 int max_length) {
    check_node(g, source);
    if (max_length < 1) throw ConfigError("path length must be at least 1");
    const std::size_t n = g.node_count();
    std::vector<double> b(n, 0.0), u(n, 0.0);
    b[source] = 1.0;  // the empty path has no negative edges
    std::vector<SignedPathCounts> out;
    out.reserve(static_cast<std::size_t>(max_length));
    for (int l = 1; l <= max_length; ++l) {
        SignedPathCounts step{std::vector<double>(n), std::vector<double>(n), l};
        advance_path_counts(g, b, u, step.balanced, step.unbalanced);
        b = step.balanced;
        u = step.unbalanced;
        out.push_back(std::move(step));
    }
    return out;
}

std::vector<double> katz_signed_row(const SignedGraph& g, NodeId source, double beta, int gamma) {
    check_katz_params(beta, gamma);
    check_node(g, source);
    const std::size_t n = g.node_count();
    std::vector<double> b(n, 0.0), u(n, 0.0), b_next(n), u_next(n), scores(n, 0.0);
    b[source] = 1.0;
    double weight = 1.0;
    for (int l = 1; l <= gamma; ++l) {
        advance_path_counts(g, b, u, b_next, u_next);
        std::swap(b, b_next);
        std::swap(u, u_next);
        weight *= beta;
        for (std::size_t j = 0; j < n; ++j) scores[j] += weight * (b[j] - u[j]);
    }
    return scores;
}

// ---------------------------------------------------------------------------
// Random walk with restart

RandomWalkOperator::RandomWalkOperator(const SignedGraph& g, bool use_signs, double c)
    : c_(c), use_signs_(use_signs) {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("c must lie in (0, 1)");
    const std::size_t n = g.node_count();
    inv_degree_.resize(n);
    for (NodeId i = 0; i < n; ++i) {
        auto d = g.out_degree(i);
        inv_degree_[i] = d == 0 ? 0.0 : 1.0 / static_cast<double>(d);
    }
    offsets_.assign(n + 1, 0);
    for (NodeId j = 0; j < n; ++j) {
        for (NodeId k : g.pos_in(j)) {
            from_.push_back(k);
            sign_.push_back(1);
        }
        for (NodeId k : g.neg_in(j)) {
            from_.push_back(k);
            sign_.push_back(use_signs ? -1 : 1);
        }
        offsets_[j + 1] = from_.size();
    }
}

double RandomWalkOperator::transition(NodeId k, NodeId j) const {
    for (std::size_t e = offsets_.at(j); e < offsets_.at(j + 1); ++e) {
        if (from_[e] == k) return sign_[e] * inv_degree_[k];
    }
    return 0.0;
}

void RandomWalkOperator::propagate(std::span<const double> r, std::span<double> out) const {
    const std::size_t n = node_count();
    for (NodeId j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t e = offsets_[j]; e < offsets_[j + 1]; ++e) {
            NodeId k = from_[e];
            acc += sign_[e] * r[k] * inv_degree_[k];
        }
        out[j] = acc;
    }
}

void RandomWalkOperator::step(std::span<const double> r, NodeId source, std::span<double> out) const {
    propagate(r, out);
    for (auto& v : out) v *= c_;
    out[source] += 1.0 - c_;
}

SolveResult rwr_row(const RandomWalkOperator& op, NodeId source, double tol, int max_iter) {
    check_solve_params(op.restart(), tol, max_iter);
    const std::size_t n = op.node_count();
    if (source >= n) throw std::out_of_range("node id out of range: " + std::to_string(source));

    SolveResult result;
    std::vector<double> r(n, 0.0), next(n, 0.0);
    r[source] = 1.0 - op.restart();
    for (int it = 1; it <= max_iter; ++it) {
        op.step(r, source, next);
        double change = max_abs_diff(r, next);
        std::swap(r, next);
        result.report.iterations = it;
        result.report.residual = change;
        if (change <= tol) {
            result.report.converged = true;
            break;
        }
    }
    result.scores = std::move(r);
    return result;
}

SolveResult rwr_row(const SignedGraph& g, NodeId source, const SolveParams& params,
                    bool use_signs) {
    check_node(g, source);
    RandomWalkOperator op(g, use_signs, params.c);
    return rwr_row(op, source, params.tol, params.max_iter);
}

// ---------------------------------------------------------------------------
// ASCOS++

AscosOperator::AscosOperator(const SignedGraph& g, bool signed_variant, double c) : c_(c) {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("c must lie in (0, 1)");
    const std::size_t n = g.node_count();
    const double mu_pos = 1.0 - std::exp(-1.0);
    const double mu_neg = 1.0 - std::exp(1.0);
    offsets_.assign(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) {
        auto pos = g.pos_out(i);
        auto neg = g.neg_out(i);
        double kappa = signed_variant
                           ? static_cast<double>(pos.size() + neg.size())
                           : static_cast<double>(pos.size()) - static_cast<double>(neg.size());
        if (kappa != 0.0) {
            for (NodeId k : pos) {
                to_.push_back(k);
                weight_.push_back(mu_pos / kappa);
            }
            for (NodeId k : neg) {
                to_.push_back(k);
                weight_.push_back(-mu_neg / kappa);
            }
        }
        offsets_[i + 1] = to_.size();
    }
}

double AscosOperator::apply_row(NodeId i, std::span<const double> x) const {
    double acc = 0.0;
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) acc += weight_[e] * x[to_[e]];
    return c_ * acc;
}

SolveResult ascospp_column(const AscosOperator& op, NodeId target, double tol, int max_iter) {
    check_solve_params(op.decay(), tol, max_iter);
    const std::size_t n = op.node_count();
    if (target >= n) throw std::out_of_range("node id out of range: " + std::to_string(target));

    SolveResult result;
    std::vector<double> x(n, 0.0), next(n, 0.0);
    x[target] = 1.0;
    for (int it = 1; it <= max_iter; ++it) {
        for (NodeId i = 0; i < n; ++i) next[i] = i == target ? 1.0 : op.apply_row(i, x);
        double change = max_abs_diff(x, next);
        result.report.iterations = it;
        result.report.residual = change;
        if (!std::isfinite(change)) break;  // diverged; keep the last finite iterate
        std::swap(x, next);
        if (change <= tol) {
            result.report.converged = true;
            break;
        }
    }
    result.scores = std::move(x);
    return result;
}

SolveResult ascospp_column(const SignedGraph& g, NodeId target, const SolveParams& params,
                           bool signed_variant) {
    check_node(g, target);
    AscosOperator op(g, signed_variant, params.c);
    return ascospp_column(op, target, params.tol, params.max_iter);
}

double ascospp_residual(const AscosOperator& op, NodeId target, std::span<const double> x) {
    double worst = std::abs(x[target] - 1.0);
    for (NodeId i = 0; i < op.node_count(); ++i) {
        if (i == target) continue;
        worst = std::max(worst, std::abs(x[i] - op.apply_row(i, x)));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Batch scoring

PairScoreSet score_global_pairs_prepared(const SignedGraph& prepared, const MeasureSpec& spec,
                                         std::span<const NodePair> pairs, unsigned workers) {
    if (spec.is_local()) {
        throw ConfigError("score_global_pairs: '" + std::string(to_string(spec.kind)) +
                          "' is a local measure");
    }
    spec.validate();
    for (const auto& p : pairs) {
        check_node(prepared, p.src);
        check_node(prepared, p.dst);
    }

    const bool is_signed = spec.strategy == Strategy::Signed;
    const bool by_target = spec.kind == MeasureKind::Ascos;

    // Distinct solve keys in ascending order, with the pair indices they serve.
    std::map<NodeId, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        groups[by_target ? pairs[k].dst : pairs[k].src].push_back(k);
    }
    std::vector<std::pair<NodeId, const std::vector<std::size_t>*>> keys;
    keys.reserve(groups.size());
    for (const auto& [key, idx] : groups) keys.emplace_back(key, &idx);

    std::optional<RandomWalkOperator> walk;
    std::optional<AscosOperator> ascos;
    if (spec.kind == MeasureKind::RandomWalk) walk.emplace(prepared, is_signed, spec.c);
    if (spec.kind == MeasureKind::Ascos) ascos.emplace(prepared, is_signed, spec.c);

    PairScoreSet out;
    out.measure = spec;
    out.pairs.assign(pairs.begin(), pairs.end());
    out.scores.assign(pairs.size(), 0.0);
    out.solves = keys.size();
    std::vector<std::optional<std::string>> notes(keys.size());

    detail::parallel_for(keys.size(), workers, [&](std::size_t q) {
        const auto [key, indices] = keys[q];
        std::vector<double> row;
        std::optional<SolveReport> report;
        switch (spec.kind) {
            case MeasureKind::Katz:
                row = is_signed ? katz_signed_row(prepared, key, spec.beta, spec.gamma)
                                : katz_unsigned_row(prepared, key, spec.beta, spec.gamma);
                break;
            case MeasureKind::RandomWalk: {
                auto solved = rwr_row(*walk, key, spec.tol, spec.max_iter);
                row = std::move(solved.scores);
                report = solved.report;
                break;
            }
            case MeasureKind::Ascos: {
                auto solved = ascospp_column(*ascos, key, spec.tol, spec.max_iter);
                row = std::move(solved.scores);
                report = solved.report;
                break;
            }
            default:
                break;
        }
        for (std::size_t k : *indices) {
            out.scores[k] = row[by_target ? pairs[k].src : pairs[k].dst];
        }
        if (report && !report->converged) {
            std::ostringstream msg;
            msg << spec.label() << ": solve for node " << prepared.label(key)
                << " did not converge in " << report->iterations << " iterations (residual "
                << report->residual << ")";
            notes[q] = msg.str();
        }
    });

    for (auto& n : notes) {
        if (n) out.warnings.push_back(std::move(*n));
    }
    return out;
}

PairScoreSet score_global_pairs(const SignedGraph& g, const MeasureSpec& spec,
                                std::span<const NodePair> pairs, unsigned workers) {
    if (spec.is_local()) {
        throw ConfigError("score_global_pairs: '" + std::string(to_string(spec.kind)) +
                          "' is a local measure");
    }
    return score_global_pairs_prepared(apply_strategy(g, spec.strategy), spec, pairs, workers);
}

}  // namespace signrel
