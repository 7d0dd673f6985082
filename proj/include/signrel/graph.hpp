#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace signrel {

using NodeId = std::uint32_t;

/// One signed edge in dense node ids. `sign` is +1 or -1; `weight` is the raw
/// rating when the source data carries one.
struct SignedEdge {
    NodeId src = 0;
    NodeId dst = 0;
    int sign = 1;
    std::optional<double> weight;

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

/// Dense id <-> external label table, shared between a graph and every graph
/// derived from it.
class LabelTable {
public:
    LabelTable() = default;
    explicit LabelTable(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(NodeId id) const { return names_.at(id); }
    std::optional<NodeId> find(std::string_view name) const;
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
};

/**
 * Immutable sparse signed adjacency.
 *
 * Positive and negative out-edges are kept in separate CSR blocks (rows of A+
 * and A-), together with their transposes. Neighbor lists are sorted. An
 * undirected graph stores every edge in both directions; its edge counts
 * report unordered pairs.
 *
 * Invariants (checked by from_edges): no self-loops, one sign per ordered
 * pair, ids in [0, N), symmetric adjacency when undirected.
 */
class SignedGraph {
public:
    SignedGraph() = default;

    /// Builds a graph from an edge list. For undirected graphs each unordered
    /// pair must appear once, in either orientation. Throws ConfigError on any
    /// invariant violation.
    static SignedGraph from_edges(std::size_t node_count, bool directed,
                                  std::span<const SignedEdge> edges,
                                  std::shared_ptr<const LabelTable> labels = nullptr);

    std::size_t node_count() const noexcept { return node_count_; }
    bool directed() const noexcept { return directed_; }

    std::span<const NodeId> pos_out(NodeId i) const { return pos_out_.row(i); }
    std::span<const NodeId> neg_out(NodeId i) const { return neg_out_.row(i); }
    std::span<const NodeId> pos_in(NodeId i) const { return pos_in_.row(i); }
    std::span<const NodeId> neg_in(NodeId i) const { return neg_in_.row(i); }

    std::size_t out_degree(NodeId i) const { return pos_out(i).size() + neg_out(i).size(); }
    std::size_t in_degree(NodeId i) const { return pos_in(i).size() + neg_in(i).size(); }

    /// Number of positive (negative) edges; unordered pairs when undirected.
    std::size_t pos_edge_count() const noexcept;
    std::size_t neg_edge_count() const noexcept;
    std::size_t edge_count() const noexcept { return pos_edge_count() + neg_edge_count(); }

    /// A_ij in {-1, 0, +1}.
    int sign(NodeId i, NodeId j) const;

    bool has_weights() const noexcept { return has_weights_; }
    std::optional<double> weight(NodeId i, NodeId j) const;

    /// Edge list: every ordered edge when directed, (min, max) pairs when
    /// undirected. Ordered by source, then positive before negative, then target.
    std::vector<SignedEdge> edges() const;

    const LabelTable* labels() const noexcept { return labels_.get(); }
    std::shared_ptr<const LabelTable> shared_labels() const noexcept { return labels_; }
    std::string label(NodeId i) const;

    /// Rebuilds in-lists from out-lists and compares with the stored ones.
    bool transposes_consistent() const;

    /// Structural equality: same N, directedness, signed adjacency and weights.
    bool same_structure(const SignedGraph& other) const;

private:
    struct Csr {
        std::vector<std::size_t> offsets{0};
        std::vector<NodeId> ids;
        std::vector<double> weights;  // parallel to ids; empty when unweighted

        std::span<const NodeId> row(NodeId i) const {
            return {ids.data() + offsets.at(i), ids.data() + offsets.at(i + 1)};
        }
        std::size_t nnz() const noexcept { return ids.size(); }
    };

    static Csr build_csr(std::size_t n, std::vector<SignedEdge>& edges, bool transpose,
                         bool keep_weights);

    std::size_t node_count_ = 0;
    bool directed_ = true;
    bool has_weights_ = false;
    Csr pos_out_, neg_out_, pos_in_, neg_in_;
    std::shared_ptr<const LabelTable> labels_;
};

// ---------------------------------------------------------------------------
// Ingestion

enum class EdgeFormat {
    CsvWeighted,       // src,dst,rating,time
    WhitespaceSigned,  // src dst sign [time]
};

std::optional<EdgeFormat> parse_edge_format(std::string_view name);
std::string_view to_string(EdgeFormat format);

struct LoadReport {
    std::size_t rows = 0;
    std::size_t dropped_self_loops = 0;
    std::size_t duplicates_replaced = 0;
    std::size_t dropped_conflicts = 0;  // only when loading as undirected
};

struct LoadedGraph {
    SignedGraph graph;
    LoadReport report;
};

/// Parses an edge list. Labels are remapped to dense ids in order of first
/// appearance. Duplicate ordered pairs keep the latest timestamp (the last row
/// read on ties or when untimed). Throws ParseError on malformed rows.
LoadedGraph load_edge_list(std::istream& in, EdgeFormat format, bool directed);
LoadedGraph load_edge_list_file(const std::filesystem::path& path, EdgeFormat format,
                                bool directed);

// ---------------------------------------------------------------------------
// Transforms

/// Collapses directions. Pairs whose two directed edges disagree in sign are
/// dropped and counted in `dropped_conflicts`. Weights of agreeing reciprocal
/// edges are averaged. Undirected input is returned unchanged.
SignedGraph to_undirected(const SignedGraph& g, std::size_t* dropped_conflicts = nullptr);

SignedGraph remove_negative(const SignedGraph& g);
SignedGraph ignore_signs(const SignedGraph& g);

// ---------------------------------------------------------------------------
// Train/test split

struct TestPair {
    NodeId src = 0;
    NodeId dst = 0;
    int sign = 1;
    std::optional<double> weight;
};

struct SplitDataset {
    SignedGraph train;
    std::vector<TestPair> test_pairs;
    std::uint64_t seed = 0;
    double ratio = 0.8;
};

/// Shuffles the edge list with a seeded generator; the first floor(ratio * E)
/// edges form the training graph, the rest become test pairs.
SplitDataset split_train_test(const SignedGraph& g, double ratio, std::uint64_t seed);

/// Partitions [0, count) into `folds` disjoint, shuffled index sets whose
/// sizes differ by at most one.
std::vector<std::vector<std::size_t>> make_folds(std::size_t count, std::size_t folds,
                                                 std::uint64_t seed);

/// Training graph made of the given subset of `g.edges()`.
SignedGraph subgraph_from_edges(const SignedGraph& g, std::span<const SignedEdge> edges);

}  // namespace signrel
