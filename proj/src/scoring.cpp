#include "signrel/scoring.hpp"

#include "signrel/global_measures.hpp"
#include "signrel/local_measures.hpp"

namespace signrel {

Scorer::Scorer(const SignedGraph& g, const MeasureSpec& spec, unsigned workers)
    : spec_(spec), workers_(workers) {
    spec_.validate();
    prepared_ = spec_.is_local() ? apply_strategy(to_undirected(g), spec_.strategy)
                                 : apply_strategy(g, spec_.strategy);
}

PairScoreSet Scorer::score(std::span<const NodePair> pairs) const {
    if (spec_.is_local()) return score_local_pairs_prepared(prepared_, spec_, pairs);
    return score_global_pairs_prepared(prepared_, spec_, pairs, workers_);
}

PairScoreSet score_pairs(const SignedGraph& g, const MeasureSpec& spec,
                         std::span<const NodePair> pairs, unsigned workers) {
    return Scorer(g, spec, workers).score(pairs);
}

}  // namespace signrel
