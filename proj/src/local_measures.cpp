#include "signrel/local_measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "signrel/errors.hpp"

namespace signrel {
namespace {

std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

void check_pair(const SignedGraph& g, NodeId i, NodeId j) {
    if (g.directed()) throw ConfigError("local measures require an undirected graph");
    if (i >= g.node_count() || j >= g.node_count()) {
        throw std::out_of_range("node id out of range: " + std::to_string(std::max(i, j)));
    }
}

struct CommonCounts {
    std::size_t pp = 0, nn = 0, pn = 0, np = 0;

    std::size_t agree() const { return pp + nn; }
    std::size_t disagree() const { return pn + np; }
    std::size_t total() const { return agree() + disagree(); }
};

CommonCounts common_counts(const SignedGraph& g, NodeId i, NodeId j) {
    return {intersection_size(g.pos_out(i), g.pos_out(j)),
            intersection_size(g.neg_out(i), g.neg_out(j)),
            intersection_size(g.pos_out(i), g.neg_out(j)),
            intersection_size(g.neg_out(i), g.pos_out(j))};
}

double union_size(const SignedGraph& g, NodeId i, NodeId j, std::size_t common) {
    return static_cast<double>(g.out_degree(i) + g.out_degree(j) - common);
}

}  // namespace

double ucn(const SignedGraph& g, NodeId i, NodeId j) {
    check_pair(g, i, j);
    return static_cast<double>(common_counts(g, i, j).total());
}

double scn(const SignedGraph& g, NodeId i, NodeId j) {
    check_pair(g, i, j);
    auto c = common_counts(g, i, j);
    return static_cast<double>(c.agree()) - static_cast<double>(c.disagree());
}

double uji(const SignedGraph& g, NodeId i, NodeId j) {
    check_pair(g, i, j);
    auto common = common_counts(g, i, j).total();
    double denom = union_size(g, i, j, common);
    return denom == 0.0 ? 0.0 : static_cast<double>(common) / denom;
}

double sji(const SignedGraph& g, NodeId i, NodeId j) {
    check_pair(g, i, j);
    auto c = common_counts(g, i, j);
    double denom = union_size(g, i, j, c.total());
    if (denom == 0.0) return 0.0;
    return (static_cast<double>(c.agree()) - static_cast<double>(c.disagree())) / denom;
}

double upa(const SignedGraph& g, NodeId i, NodeId j) {
    check_pair(g, i, j);
    return static_cast<double>(g.out_degree(i)) * static_cast<double>(g.out_degree(j));
}

double spa(const SignedGraph& g, NodeId i, NodeId j, SpaCombine combine) {
    check_pair(g, i, j);
    double plus = static_cast<double>(g.pos_out(i).size()) * static_cast<double>(g.pos_out(j).size());
    double minus = static_cast<double>(g.neg_out(i).size()) * static_cast<double>(g.neg_out(j).size());
    double diff = plus - minus;
    double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    double magnitude = combine == SpaCombine::Max ? std::max(plus, minus) : std::abs(diff);
    return sign * magnitude;
}

PairScoreSet score_local_pairs_prepared(const SignedGraph& prepared, const MeasureSpec& spec,
                                        std::span<const NodePair> pairs) {
    if (!spec.is_local()) {
        throw ConfigError("score_local_pairs: '" + std::string(to_string(spec.kind)) +
                          "' is a global measure");
    }
    const bool is_signed = spec.strategy == Strategy::Signed;

    PairScoreSet out;
    out.measure = spec;
    out.pairs.assign(pairs.begin(), pairs.end());
    out.scores.reserve(pairs.size());
    for (const auto& p : pairs) {
        double s = 0.0;
        switch (spec.kind) {
            case MeasureKind::CommonNeighbors:
                s = is_signed ? scn(prepared, p.src, p.dst) : ucn(prepared, p.src, p.dst);
                break;
            case MeasureKind::Jaccard:
                s = is_signed ? sji(prepared, p.src, p.dst) : uji(prepared, p.src, p.dst);
                break;
            case MeasureKind::PreferentialAttachment:
                s = is_signed ? spa(prepared, p.src, p.dst, spec.spa_combine)
                              : upa(prepared, p.src, p.dst);
                break;
            default:
                break;
        }
        out.scores.push_back(s);
    }
    return out;
}

PairScoreSet score_local_pairs(const SignedGraph& g, const MeasureSpec& spec,
                               std::span<const NodePair> pairs) {
    if (!spec.is_local()) {
        throw ConfigError("score_local_pairs: '" + std::string(to_string(spec.kind)) +
                          "' is a global measure");
    }
    auto prepared = apply_strategy(to_undirected(g), spec.strategy);
    return score_local_pairs_prepared(prepared, spec, pairs);
}

}  // namespace signrel
