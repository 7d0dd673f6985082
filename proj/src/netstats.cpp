#include "signrel/netstats.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "signrel/errors.hpp"

namespace signrel {

ReciprocityReport reciprocity(const SignedGraph& g) {
    if (!g.directed()) throw ConfigError("reciprocity needs a directed graph");

    ReciprocityReport r;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        for (NodeId j : g.pos_out(i)) {
            ++r.pos_edges;
            int back = g.sign(j, i);
            if (back > 0) ++r.pos_reciprocated;
            if (back < 0) ++r.mixed_pair_count;  // counted once, from the positive side
        }
        for (NodeId j : g.neg_out(i)) {
            ++r.neg_edges;
            if (g.sign(j, i) < 0) ++r.neg_reciprocated;
        }
    }
    r.pos_rate_undefined = r.pos_edges == 0;
    r.neg_rate_undefined = r.neg_edges == 0;
    if (!r.pos_rate_undefined) {
        r.pos_reciprocal_rate = static_cast<double>(r.pos_reciprocated) / static_cast<double>(r.pos_edges);
    }
    if (!r.neg_rate_undefined) {
        r.neg_reciprocal_rate = static_cast<double>(r.neg_reciprocated) / static_cast<double>(r.neg_edges);
    }
    return r;
}

TriadCensus triad_census(const SignedGraph& input) {
    TriadCensus census;
    SignedGraph g = to_undirected(input, &census.dropped_conflicts);

    // Merged, sorted neighbor lists carrying the edge sign.
    const std::size_t n = g.node_count();
    std::vector<std::vector<std::pair<NodeId, int>>> adj(n);
    for (NodeId i = 0; i < n; ++i) {
        auto& row = adj[i];
        for (NodeId j : g.pos_out(i)) row.emplace_back(j, 1);
        for (NodeId j : g.neg_out(i)) row.emplace_back(j, -1);
        std::sort(row.begin(), row.end());
    }

    for (NodeId i = 0; i < n; ++i) {
        const auto& ni = adj[i];
        for (const auto& [j, s_ij] : ni) {
            if (j <= i) continue;
            const auto& nj = adj[j];
            // Common neighbors k > j.
            auto a = std::upper_bound(ni.begin(), ni.end(), std::pair{j, 1});
            auto b = std::upper_bound(nj.begin(), nj.end(), std::pair{j, 1});
            while (a != ni.end() && b != nj.end()) {
                if (a->first < b->first) {
                    ++a;
                } else if (b->first < a->first) {
                    ++b;
                } else {
                    int negatives = (s_ij < 0) + (a->second < 0) + (b->second < 0);
                    ++census.counts[static_cast<std::size_t>(negatives)];
                    ++a;
                    ++b;
                }
            }
        }
    }

    auto total = census.total();
    if (total > 0) {
        census.balanced_fraction =
            static_cast<double>(census.counts[0] + census.counts[2]) / static_cast<double>(total);
    }
    return census;
}

std::optional<DegreeKind> parse_degree_kind(std::string_view name) {
    if (name == "in+") return DegreeKind::InPos;
    if (name == "in-") return DegreeKind::InNeg;
    if (name == "out+") return DegreeKind::OutPos;
    if (name == "out-") return DegreeKind::OutNeg;
    if (name == "total+") return DegreeKind::TotalPos;
    if (name == "total-") return DegreeKind::TotalNeg;
    return std::nullopt;
}

std::string_view to_string(DegreeKind kind) {
    switch (kind) {
        case DegreeKind::InPos: return "in+";
        case DegreeKind::InNeg: return "in-";
        case DegreeKind::OutPos: return "out+";
        case DegreeKind::OutNeg: return "out-";
        case DegreeKind::TotalPos: return "total+";
        case DegreeKind::TotalNeg: return "total-";
    }
    return "?";
}

std::map<std::size_t, std::size_t> degree_distribution(const SignedGraph& g, DegreeKind kind) {
    bool directional = kind != DegreeKind::TotalPos && kind != DegreeKind::TotalNeg;
    if (directional && !g.directed()) {
        throw ConfigError("degree kind '" + std::string(to_string(kind)) +
                          "' needs a directed graph");
    }
    std::map<std::size_t, std::size_t> hist;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        std::size_t d = 0;
        switch (kind) {
            case DegreeKind::InPos: d = g.pos_in(i).size(); break;
            case DegreeKind::InNeg: d = g.neg_in(i).size(); break;
            case DegreeKind::OutPos: d = g.pos_out(i).size(); break;
            case DegreeKind::OutNeg: d = g.neg_out(i).size(); break;
            case DegreeKind::TotalPos:
                d = g.pos_out(i).size() + (g.directed() ? g.pos_in(i).size() : 0);
                break;
            case DegreeKind::TotalNeg:
                d = g.neg_out(i).size() + (g.directed() ? g.neg_in(i).size() : 0);
                break;
        }
        ++hist[d];
    }
    return hist;
}

}  // namespace signrel
