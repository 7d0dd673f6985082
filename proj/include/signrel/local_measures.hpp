#pragma once

#include <span>

#include "signrel/graph.hpp"
#include "signrel/measure_spec.hpp"

// Neighborhood-only relevance scores on undirected signed graphs.
//
// The unsigned variants (ucn, uji, upa) read N_i as the union of positive and
// negative neighbors, so callers pick the strategy by transforming the graph
// first (remove_negative / ignore_signs). All functions throw ConfigError on
// directed input and std::out_of_range on bad node ids.

namespace signrel {

double ucn(const SignedGraph& g, NodeId i, NodeId j);

/// Agreeing common neighbors minus disagreeing ones; may be negative.
double scn(const SignedGraph& g, NodeId i, NodeId j);

double uji(const SignedGraph& g, NodeId i, NodeId j);

/// scn divided by the number of distinct neighbors of i and j; 0 when both
/// neighborhoods are empty.
double sji(const SignedGraph& g, NodeId i, NodeId j);

double upa(const SignedGraph& g, NodeId i, NodeId j);

/// sign(UPA+ - UPA-) * f(UPA+, UPA-) with sign(0) = 0.
double spa(const SignedGraph& g, NodeId i, NodeId j, SpaCombine combine = SpaCombine::Max);

/// Batch scoring for cn / ji / pa. Directed graphs are symmetrized first;
/// the strategy transform is applied internally.
PairScoreSet score_local_pairs(const SignedGraph& g, const MeasureSpec& spec,
                               std::span<const NodePair> pairs);

/// Same as score_local_pairs but on a graph that is already undirected and
/// strategy-transformed.
PairScoreSet score_local_pairs_prepared(const SignedGraph& prepared, const MeasureSpec& spec,
                                        std::span<const NodePair> pairs);

}  // namespace signrel
