#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>

#include "signrel/graph.hpp"

namespace signrel {

struct ReciprocityReport {
    std::size_t pos_edges = 0;
    std::size_t pos_reciprocated = 0;
    std::size_t neg_edges = 0;
    std::size_t neg_reciprocated = 0;
    std::size_t mixed_pair_count = 0;  // unordered pairs {i->j: +, j->i: -}

    double pos_reciprocal_rate = 0.0;
    double neg_reciprocal_rate = 0.0;
    bool pos_rate_undefined = false;  // no positive edges; rate reported as 0
    bool neg_rate_undefined = false;
};

/// Share of positive (negative) edges i->j whose reverse j->i exists with the
/// same sign. Throws ConfigError on undirected input.
ReciprocityReport reciprocity(const SignedGraph& g);

struct TriadCensus {
    // Indexed by the number of negative edges: (+++), (++-), (+--), (---).
    std::array<std::size_t, 4> counts{};
    double balanced_fraction = 0.0;
    std::size_t dropped_conflicts = 0;  // pairs removed when symmetrizing

    std::size_t total() const noexcept { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

/// Classifies every closed triangle of the undirected support by its signs.
/// Directed input is symmetrized first.
TriadCensus triad_census(const SignedGraph& g);

enum class DegreeKind { InPos, InNeg, OutPos, OutNeg, TotalPos, TotalNeg };

std::optional<DegreeKind> parse_degree_kind(std::string_view name);
std::string_view to_string(DegreeKind kind);

/// degree -> number of nodes. In/out kinds are rejected on undirected graphs.
/// The total kinds count in + out on directed graphs.
std::map<std::size_t, std::size_t> degree_distribution(const SignedGraph& g, DegreeKind kind);

}  // namespace signrel
