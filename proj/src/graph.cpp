#include "signrel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "signrel/errors.hpp"
#include "shuffle.hpp"

namespace signrel {

// ---------------------------------------------------------------------------
// LabelTable

LabelTable::LabelTable(std::vector<std::string> names) : names_(std::move(names)) {
    index_.reserve(names_.size());
    for (NodeId i = 0; i < names_.size(); ++i) {
        index_.emplace(names_[i], i);
    }
}

std::optional<NodeId> LabelTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// SignedGraph

SignedGraph::Csr SignedGraph::build_csr(std::size_t n, std::vector<SignedEdge>& edges,
                                        bool transpose, bool keep_weights) {
    auto key = [transpose](const SignedEdge& e) {
        return transpose ? std::pair{e.dst, e.src} : std::pair{e.src, e.dst};
    };
    std::sort(edges.begin(), edges.end(),
              [&](const SignedEdge& a, const SignedEdge& b) { return key(a) < key(b); });

    Csr csr;
    csr.offsets.assign(n + 1, 0);
    csr.ids.reserve(edges.size());
    if (keep_weights) csr.weights.reserve(edges.size());
    for (const auto& e : edges) {
        auto [row, col] = key(e);
        ++csr.offsets[row + 1];
        csr.ids.push_back(col);
        if (keep_weights) csr.weights.push_back(*e.weight);
    }
    std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
    return csr;
}

SignedGraph SignedGraph::from_edges(std::size_t node_count, bool directed,
                                    std::span<const SignedEdge> edges,
                                    std::shared_ptr<const LabelTable> labels) {
    if (labels && labels->size() != node_count) {
        throw ConfigError("label table size does not match node count");
    }

    std::vector<SignedEdge> pos, neg;
    bool weighted = !edges.empty();
    for (const auto& e : edges) {
        if (e.src >= node_count || e.dst >= node_count) {
            throw ConfigError("edge endpoint out of range");
        }
        if (e.src == e.dst) throw ConfigError("self-loop at node " + std::to_string(e.src));
        if (e.sign != 1 && e.sign != -1) throw ConfigError("edge sign must be +1 or -1");
        weighted = weighted && e.weight.has_value();
        auto& bucket = e.sign > 0 ? pos : neg;
        bucket.push_back(e);
        if (!directed) bucket.push_back(SignedEdge{e.dst, e.src, e.sign, e.weight});
    }

    SignedGraph g;
    g.node_count_ = node_count;
    g.directed_ = directed;
    g.has_weights_ = weighted;
    g.labels_ = std::move(labels);
    g.pos_out_ = build_csr(node_count, pos, false, weighted);
    g.neg_out_ = build_csr(node_count, neg, false, weighted);
    g.pos_in_ = build_csr(node_count, pos, true, false);
    g.neg_in_ = build_csr(node_count, neg, true, false);

    // One sign per ordered pair: duplicate ids in a row, or a pair in both blocks.
    for (NodeId i = 0; i < node_count; ++i) {
        auto p = g.pos_out(i);
        auto n = g.neg_out(i);
        if (std::adjacent_find(p.begin(), p.end()) != p.end() ||
            std::adjacent_find(n.begin(), n.end()) != n.end()) {
            throw ConfigError("duplicate edge from node " + std::to_string(i));
        }
        std::vector<NodeId> common;
        std::set_intersection(p.begin(), p.end(), n.begin(), n.end(),
                              std::back_inserter(common));
        if (!common.empty()) {
            throw ConfigError("conflicting signs on edge " + std::to_string(i) + "->" +
                              std::to_string(common.front()));
        }
    }
    return g;
}

std::size_t SignedGraph::pos_edge_count() const noexcept {
    return directed_ ? pos_out_.nnz() : pos_out_.nnz() / 2;
}

std::size_t SignedGraph::neg_edge_count() const noexcept {
    return directed_ ? neg_out_.nnz() : neg_out_.nnz() / 2;
}

int SignedGraph::sign(NodeId i, NodeId j) const {
    auto p = pos_out(i);
    if (std::binary_search(p.begin(), p.end(), j)) return 1;
    auto n = neg_out(i);
    if (std::binary_search(n.begin(), n.end(), j)) return -1;
    return 0;
}

std::optional<double> SignedGraph::weight(NodeId i, NodeId j) const {
    if (!has_weights_) return std::nullopt;
    for (const Csr* csr : {&pos_out_, &neg_out_}) {
        auto row = csr->row(i);
        auto it = std::lower_bound(row.begin(), row.end(), j);
        if (it != row.end() && *it == j) {
            return csr->weights[csr->offsets[i] + static_cast<std::size_t>(it - row.begin())];
        }
    }
    return std::nullopt;
}

std::vector<SignedEdge> SignedGraph::edges() const {
    std::vector<SignedEdge> out;
    out.reserve(edge_count());
    for (NodeId i = 0; i < node_count_; ++i) {
        for (auto [csr, s] : {std::pair{&pos_out_, 1}, std::pair{&neg_out_, -1}}) {
            auto row = csr->row(i);
            for (std::size_t k = 0; k < row.size(); ++k) {
                NodeId j = row[k];
                if (!directed_ && j < i) continue;
                std::optional<double> w;
                if (has_weights_) w = csr->weights[csr->offsets[i] + k];
                out.push_back(SignedEdge{i, j, s, w});
            }
        }
    }
    return out;
}

std::string SignedGraph::label(NodeId i) const {
    if (labels_) return labels_->name(i);
    return std::to_string(i);
}

bool SignedGraph::transposes_consistent() const {
    auto check = [&](const Csr& out, const Csr& in) {
        std::vector<std::vector<NodeId>> rebuilt(node_count_);
        for (NodeId i = 0; i < node_count_; ++i) {
            for (NodeId j : out.row(i)) rebuilt[j].push_back(i);
        }
        for (NodeId j = 0; j < node_count_; ++j) {
            auto row = in.row(j);
            if (!std::equal(row.begin(), row.end(), rebuilt[j].begin(), rebuilt[j].end())) {
                return false;
            }
        }
        return true;
    };
    return check(pos_out_, pos_in_) && check(neg_out_, neg_in_);
}

bool SignedGraph::same_structure(const SignedGraph& other) const {
    if (node_count_ != other.node_count_ || directed_ != other.directed_ ||
        has_weights_ != other.has_weights_) {
        return false;
    }
    auto eq = [](const Csr& a, const Csr& b) {
        return a.offsets == b.offsets && a.ids == b.ids && a.weights == b.weights;
    };
    return eq(pos_out_, other.pos_out_) && eq(neg_out_, other.neg_out_);
}

// ---------------------------------------------------------------------------
// Ingestion

std::optional<EdgeFormat> parse_edge_format(std::string_view name) {
    if (name == "csv_weighted" || name == "csv") return EdgeFormat::CsvWeighted;
    if (name == "whitespace_signed" || name == "ws" || name == "tsv") {
        return EdgeFormat::WhitespaceSigned;
    }
    return std::nullopt;
}

std::string_view to_string(EdgeFormat format) {
    return format == EdgeFormat::CsvWeighted ? "csv_weighted" : "whitespace_signed";
}

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, EdgeFormat format) {
    std::vector<std::string_view> fields;
    if (format == EdgeFormat::CsvWeighted) {
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            fields.push_back(trim(line.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    } else {
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
            if (pos >= line.size()) break;
            auto end = line.find_first_of(" \t", pos);
            if (end == std::string_view::npos) end = line.size();
            fields.push_back(line.substr(pos, end - pos));
            pos = end;
        }
    }
    return fields;
}

double parse_number(std::string_view field, std::size_t line_no, const char* what) {
    std::string s(field);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError(line_no, std::string("invalid ") + what + " '" + std::string(field) + "'");
    }
    if (used != s.size() || !std::isfinite(value)) {
        throw ParseError(line_no, std::string("invalid ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

struct PendingEdge {
    int sign = 1;
    std::optional<double> weight;
    std::optional<std::int64_t> timestamp;
};

}  // namespace

LoadedGraph load_edge_list(std::istream& in, EdgeFormat format, bool directed) {
    std::vector<std::string> names;
    std::unordered_map<std::string, NodeId> ids;
    auto intern = [&](std::string_view label) {
        auto [it, inserted] = ids.try_emplace(std::string(label), static_cast<NodeId>(names.size()));
        if (inserted) names.emplace_back(label);
        return it->second;
    };

    LoadReport report;
    std::map<std::pair<NodeId, NodeId>, PendingEdge> pending;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        auto fields = split_fields(text, format);

        PendingEdge rec;
        if (format == EdgeFormat::CsvWeighted) {
            if (fields.size() != 4 && fields.size() != 3) {
                throw ParseError(line_no, "expected src,dst,rating,time");
            }
            double rating = parse_number(fields[2], line_no, "rating");
            if (rating == 0.0) throw ParseError(line_no, "rating must be non-zero");
            rec.sign = rating > 0 ? 1 : -1;
            rec.weight = rating;
            if (fields.size() == 4) {
                rec.timestamp = static_cast<std::int64_t>(parse_number(fields[3], line_no, "time"));
            }
        } else {
            if (fields.size() < 3 || fields.size() > 4) {
                throw ParseError(line_no, "expected 'src dst sign'");
            }
            double s = parse_number(fields[2], line_no, "sign");
            if (s == 0.0) throw ParseError(line_no, "sign must be non-zero");
            if (s != 1.0 && s != -1.0) throw ParseError(line_no, "sign must be +1 or -1");
            rec.sign = static_cast<int>(s);
            if (fields.size() == 4) {
                rec.timestamp = static_cast<std::int64_t>(parse_number(fields[3], line_no, "time"));
            }
        }
        if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty node id");

        ++report.rows;
        NodeId src = intern(fields[0]);
        NodeId dst = intern(fields[1]);
        if (src == dst) {
            ++report.dropped_self_loops;
            continue;
        }
        auto [it, inserted] = pending.try_emplace({src, dst}, rec);
        if (!inserted) {
            ++report.duplicates_replaced;
            const auto& old = it->second;
            // Untimed records sort before timed ones; ties go to the later row.
            bool newer = !old.timestamp || (rec.timestamp && *rec.timestamp >= *old.timestamp);
            if (newer) it->second = rec;
        }
    }

    std::vector<SignedEdge> edges;
    edges.reserve(pending.size());
    for (const auto& [key, rec] : pending) {
        edges.push_back(SignedEdge{key.first, key.second, rec.sign, rec.weight});
    }
    auto labels = std::make_shared<const LabelTable>(std::move(names));
    auto g = SignedGraph::from_edges(labels->size(), true, edges, labels);
    if (!directed) g = to_undirected(g, &report.dropped_conflicts);
    return {std::move(g), report};
}

LoadedGraph load_edge_list_file(const std::filesystem::path& path, EdgeFormat format,
                                bool directed) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return load_edge_list(in, format, directed);
}

// ---------------------------------------------------------------------------
// Transforms

SignedGraph to_undirected(const SignedGraph& g, std::size_t* dropped_conflicts) {
    if (dropped_conflicts) *dropped_conflicts = 0;
    if (!g.directed()) return g;

    std::vector<SignedEdge> out;
    std::size_t conflicts = 0;
    for (const auto& e : g.edges()) {
        int back = g.sign(e.dst, e.src);
        if (back == 0) {
            out.push_back(SignedEdge{std::min(e.src, e.dst), std::max(e.src, e.dst), e.sign,
                                     e.weight});
            continue;
        }
        // Reciprocal pair: handle once, from the smaller endpoint.
        if (e.src > e.dst) continue;
        if (back != e.sign) {
            ++conflicts;
            continue;
        }
        std::optional<double> w;
        if (g.has_weights()) w = 0.5 * (*e.weight + *g.weight(e.dst, e.src));
        out.push_back(SignedEdge{e.src, e.dst, e.sign, w});
    }
    if (dropped_conflicts) *dropped_conflicts = conflicts;
    return SignedGraph::from_edges(g.node_count(), false, out, g.shared_labels());
}

SignedGraph remove_negative(const SignedGraph& g) {
    auto edges = g.edges();
    std::erase_if(edges, [](const SignedEdge& e) { return e.sign < 0; });
    return SignedGraph::from_edges(g.node_count(), g.directed(), edges, g.shared_labels());
}

SignedGraph ignore_signs(const SignedGraph& g) {
    auto edges = g.edges();
    for (auto& e : edges) {
        e.sign = 1;
        if (e.weight) e.weight = std::abs(*e.weight);
    }
    return SignedGraph::from_edges(g.node_count(), g.directed(), edges, g.shared_labels());
}

// ---------------------------------------------------------------------------
// Splits

SignedGraph subgraph_from_edges(const SignedGraph& g, std::span<const SignedEdge> edges) {
    return SignedGraph::from_edges(g.node_count(), g.directed(), edges, g.shared_labels());
}

SplitDataset split_train_test(const SignedGraph& g, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
    auto edges = g.edges();
    if (edges.empty()) throw DataError("cannot split a graph without edges");

    detail::seeded_shuffle(edges, seed);
    auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(edges.size())));

    SplitDataset split;
    split.seed = seed;
    split.ratio = ratio;
    split.train = subgraph_from_edges(g, std::span(edges).first(n_train));
    split.test_pairs.reserve(edges.size() - n_train);
    for (std::size_t k = n_train; k < edges.size(); ++k) {
        const auto& e = edges[k];
        split.test_pairs.push_back(TestPair{e.src, e.dst, e.sign, e.weight});
    }
    return split;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t count, std::size_t folds,
                                                 std::uint64_t seed) {
    if (folds < 2) throw ConfigError("need at least two folds");
    if (count < folds) throw DataError("fewer items than folds");
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    detail::seeded_shuffle(order, seed);

    std::vector<std::vector<std::size_t>> out(folds);
    for (std::size_t k = 0; k < count; ++k) out[k % folds].push_back(order[k]);
    for (auto& f : out) std::sort(f.begin(), f.end());
    return out;
}

}  // namespace signrel
