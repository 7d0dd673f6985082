#pragma once

#include <span>

#include "signrel/graph.hpp"
#include "signrel/measure_spec.hpp"

namespace signrel {

/// Scores pair batches with one measure on one graph. The strategy transform
/// (and, for local measures, symmetrization) is done once at construction.
class Scorer {
public:
    Scorer(const SignedGraph& g, const MeasureSpec& spec, unsigned workers = 0);

    PairScoreSet score(std::span<const NodePair> pairs) const;

    const SignedGraph& prepared_graph() const noexcept { return prepared_; }
    const MeasureSpec& spec() const noexcept { return spec_; }

private:
    SignedGraph prepared_;
    MeasureSpec spec_;
    unsigned workers_;
};

/// One-shot convenience over Scorer.
PairScoreSet score_pairs(const SignedGraph& g, const MeasureSpec& spec,
                         std::span<const NodePair> pairs, unsigned workers = 0);

}  // namespace signrel
