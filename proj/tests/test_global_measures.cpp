#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "signrel/errors.hpp"
#include "signrel/global_measures.hpp"

using namespace signrel;

namespace {

SignedGraph undirected(std::size_t n, std::vector<SignedEdge> edges) {
    return SignedGraph::from_edges(n, false, edges);
}

SignedGraph directed(std::size_t n, std::vector<SignedEdge> edges) {
    return SignedGraph::from_edges(n, true, edges);
}

SignedGraph signed_square() {
    return undirected(5, {{1, 2, 1, {}}, {1, 3, 1, {}}, {2, 4, -1, {}}, {3, 4, -1, {}}});
}

std::vector<NodePair> all_pairs_from(NodeId source, std::size_t n) {
    std::vector<NodePair> out;
    for (NodeId j = 0; j < n; ++j)
        if (j != source) out.push_back({source, j});
    return out;
}

}  // namespace

TEST(Katz, SingleHopIsScaledAdjacency) {
    auto g = signed_square();
    auto row = katz_unsigned_row(g, 2, 0.3, 1);
    EXPECT_DOUBLE_EQ(row[1], 0.3);
    EXPECT_DOUBLE_EQ(row[4], 0.3);
    EXPECT_EQ(row[3], 0.0);
    auto srow = katz_signed_row(g, 2, 0.3, 1);
    EXPECT_DOUBLE_EQ(srow[4], -0.3);
}

TEST(Katz, PathGraph) {
    auto g = undirected(4, {{1, 2, 1, {}}, {2, 3, 1, {}}});
    auto row = katz_unsigned_row(g, 1, 0.5, 2);
    EXPECT_DOUBLE_EQ(row[3], 0.25);
    EXPECT_DOUBLE_EQ(row[2], 0.5);
}

TEST(Katz, DisconnectedTargetIsZero) {
    auto g = undirected(4, {{0, 1, 1, {}}, {2, 3, -1, {}}});
    for (int gamma = 1; gamma <= 6; ++gamma) {
        EXPECT_EQ(katz_unsigned_row(g, 0, 0.2, gamma)[3], 0.0);
        EXPECT_EQ(katz_signed_row(g, 0, 0.2, gamma)[3], 0.0);
    }
}

TEST(Katz, SignedExamples) {
    auto g = signed_square();
    EXPECT_DOUBLE_EQ(katz_signed_row(g, 2, 0.5, 2)[3], 0.5);
    EXPECT_DOUBLE_EQ(katz_signed_row(g, 2, 0.5, 1)[1], 0.5);
}

TEST(Katz, SignedMatchesSignedSeriesAndDenseOracle) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        auto el = oracle::random_signed(30, 0.1, 0.5, seed, seed % 2 == 0);
        auto g = oracle::build(el);
        auto a = oracle::dense_adjacency(el);
        for (int gamma = 1; gamma <= 6; ++gamma) {
            NodeId src = static_cast<NodeId>(seed % 30);
            auto fast = katz_signed_row(g, src, 0.1, gamma);
            auto series = katz_series_row(g, src, 0.1, gamma, true);
            auto dense = oracle::katz_row(a, src, 0.1, gamma);
            for (NodeId j = 0; j < 30; ++j) {
                EXPECT_NEAR(fast[j], dense(j), 1e-10);
                EXPECT_NEAR(series[j], dense(j), 1e-10);
            }
        }
    }
}

TEST(Katz, PathCountsConserveTotal) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto el = oracle::random_signed(25, 0.12, 0.5, seed, true);
        auto g = oracle::build(el);
        Eigen::MatrixXd abs_a = oracle::dense_adjacency(el).cwiseAbs();
        auto counts = signed_path_counts(g, 0, 6);
        ASSERT_EQ(counts.size(), 6u);
        Eigen::MatrixXd power = Eigen::MatrixXd::Identity(25, 25);
        for (int l = 1; l <= 6; ++l) {
            power = power * abs_a;
            const auto& c = counts[l - 1];
            EXPECT_EQ(c.length, l);
            for (NodeId j = 0; j < 25; ++j) {
                EXPECT_GE(c.balanced[j], 0.0);
                EXPECT_GE(c.unbalanced[j], 0.0);
                EXPECT_EQ(c.balanced[j] + c.unbalanced[j], power(0, j));
            }
        }
    }
}

TEST(RandomWalk, OperatorRowSums) {
    auto g = directed(4, {{0, 1, 1, {}}, {0, 2, -1, {}}, {1, 2, 1, {}}});
    RandomWalkOperator op(g, true, 0.85);
    EXPECT_EQ(op.abs_row_sum(0), 1.0);
    EXPECT_EQ(op.abs_row_sum(3), 0.0);
    EXPECT_DOUBLE_EQ(op.transition(0, 2), -0.5);
    EXPECT_DOUBLE_EQ(op.transition(1, 2), 1.0);
    EXPECT_EQ(op.transition(2, 0), 0.0);
    RandomWalkOperator unsigned_op(g, false, 0.85);
    EXPECT_DOUBLE_EQ(unsigned_op.transition(0, 2), 0.5);
}

TEST(RandomWalk, IsolatedSource) {
    auto g = undirected(3, {{1, 2, 1, {}}});
    auto res = rwr_row(g, 0, {}, true);
    EXPECT_TRUE(res.report.converged);
    EXPECT_NEAR(res.scores[0], 1.0 - 0.85, 1e-15);
    EXPECT_EQ(res.scores[1], 0.0);
}

TEST(RandomWalk, RestartDominatedLimit) {
    auto g = oracle::build(oracle::random_signed(10, 0.3, 0.5, 4, false));
    auto res = rwr_row(g, 3, {.c = 1e-12}, true);
    EXPECT_NEAR(res.scores[3], 1.0, 1e-11);
    for (NodeId j = 0; j < 10; ++j)
        if (j != 3) EXPECT_NEAR(res.scores[j], 0.0, 1e-11);
}

TEST(RandomWalk, TwoNodeNegativeEdge) {
    auto g = undirected(2, {{0, 1, -1, {}}});
    auto res = rwr_row(g, 0, {.c = 0.5, .tol = 1e-14, .max_iter = 1000}, true);
    EXPECT_NEAR(res.scores[1], -1.0 / 3.0, 1e-12);
    EXPECT_NEAR(res.scores[0], 2.0 / 3.0, 1e-12);
}

TEST(RandomWalk, MatchesDenseInverseAndBounds) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (double c : {0.5, 0.85}) {
            auto el = oracle::random_signed(40, 0.08, 0.5, seed, true);
            auto g = oracle::build(el);
            auto a = oracle::dense_adjacency(el);
            NodeId src = static_cast<NodeId>(seed % 40);
            auto res = rwr_row(g, src, {.c = c, .tol = 1e-10, .max_iter = 1000}, true);
            ASSERT_TRUE(res.report.converged);
            EXPECT_LE(res.report.residual, 1e-10);
            auto dense = oracle::rwr_row(a, src, c);
            double abs_sum = 0.0;
            for (NodeId j = 0; j < 40; ++j) {
                EXPECT_NEAR(res.scores[j], dense(j), 1e-7);
                abs_sum += std::abs(res.scores[j]);
            }
            EXPECT_LE(abs_sum, 1.0 + 1e-12);
        }
    }
}

TEST(RandomWalk, IterationBound) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (double c : {0.5, 0.85}) {
            auto g = oracle::build(oracle::random_signed(50, 0.1, 0.4, seed, false));
            const double tol = 1e-8;
            auto res = rwr_row(g, 0, {.c = c, .tol = tol, .max_iter = 1000}, true);
            int bound = static_cast<int>(std::ceil(std::log(tol / (1.0 - c)) / std::log(c)));
            EXPECT_TRUE(res.report.converged);
            EXPECT_LE(res.report.iterations, bound);
        }
    }
}

TEST(RandomWalk, NonConvergenceReported) {
    auto g = oracle::build(oracle::random_signed(20, 0.3, 0.5, 1, false));
    auto res = rwr_row(g, 0, {.c = 0.85, .tol = 1e-12, .max_iter = 3}, true);
    EXPECT_FALSE(res.report.converged);
    EXPECT_EQ(res.report.iterations, 3);
}

// The six triplet shapes (R_ik, A_kj, R_ij): one step adds c R_ik S_kj to
// R_ij, which carries the sign of the balanced completion.
TEST(RandomWalk, SingleStepFavoursBalance) {
    struct Triplet { int r_ik, a_kj, r_ij; bool balanced; };
    const Triplet shapes[] = {{1, 1, 1, true},  {1, -1, 1, false}, {1, 1, -1, false},
                              {1, -1, -1, true}, {-1, -1, 1, true}, {-1, -1, -1, false}};
    for (const auto& t : shapes) {
        // i = 0, k = 1, j = 2; the only edge into j comes from k.
        auto g = directed(3, {{1, 2, t.a_kj, {}}});
        RandomWalkOperator op(g, true, 0.85);
        std::vector<double> r{0.0, 0.4 * t.r_ik, 0.3 * t.r_ij};
        std::vector<double> out(3);
        op.step(r, 0, out);
        double contribution = out[2];
        EXPECT_EQ(contribution > 0, t.r_ik * t.a_kj > 0);
        EXPECT_EQ(contribution * t.r_ij > 0, t.balanced);
    }
}

TEST(Ascos, OneEdgeFixedPoint) {
    auto g = directed(2, {{0, 1, 1, {}}});
    auto res = ascospp_column(g, 1, {.c = 0.5}, true);
    EXPECT_NEAR(res.scores[0], 0.5 * (1.0 - std::exp(-1.0)), 1e-12);
    EXPECT_NEAR(res.scores[0], 0.316, 1e-3);
    EXPECT_EQ(res.scores[1], 1.0);
}

TEST(Ascos, IsolatedTarget) {
    auto g = directed(3, {{1, 2, 1, {}}});
    auto res = ascospp_column(g, 0, {}, true);
    EXPECT_EQ(res.scores[0], 1.0);
    EXPECT_EQ(res.scores[1], 0.0);
    EXPECT_EQ(res.scores[2], 0.0);
}

TEST(Ascos, NegativeEdgeWeightFactor) {
    auto g = directed(2, {{0, 1, -1, {}}});
    AscosOperator op(g, true, 0.5);
    std::vector<double> x{0.0, 1.0};
    // c * (A / kappa) * (1 - e^{-A}) with A = -1, kappa = 1.
    double mu = op.apply_row(0, x) / (0.5 * -1.0);
    EXPECT_NEAR(mu, 1.0 - std::exp(1.0), 1e-15);
    EXPECT_NEAR(mu, -1.72, 5e-3);
    AscosOperator pos(directed(2, {{0, 1, 1, {}}}), true, 0.5);
    EXPECT_NEAR(pos.apply_row(0, x) / 0.5, 0.63, 5e-3);
}

TEST(Ascos, MatchesDenseSolveAndResidual) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto el = oracle::random_signed(30, 0.1, 0.4, seed, true);
        auto g = oracle::build(el);
        auto a = oracle::dense_adjacency(el);
        NodeId target = static_cast<NodeId>(seed % 30);
        const double tol = 1e-10;
        AscosOperator op(g, true, 0.5);
        auto res = ascospp_column(op, target, tol, 2000);
        ASSERT_TRUE(res.report.converged);
        EXPECT_EQ(res.scores[target], 1.0);
        EXPECT_LE(ascospp_residual(op, target, res.scores), 10 * tol);
        auto dense = oracle::ascos_column(a, target, 0.5, true);
        for (NodeId i = 0; i < 30; ++i) EXPECT_NEAR(res.scores[i], dense(i), 1e-8);
    }
}

TEST(Ascos, UnsignedMatchesDenseOnPositiveGraphs) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto el = oracle::random_signed(30, 0.12, 0.0, seed, true);
        auto g = oracle::build(el);
        auto res = ascospp_column(g, 2, {.c = 0.85, .tol = 1e-10, .max_iter = 2000}, false);
        ASSERT_TRUE(res.report.converged);
        auto dense = oracle::ascos_column(oracle::dense_adjacency(el), 2, 0.85, false);
        for (NodeId i = 0; i < 30; ++i) EXPECT_NEAR(res.scores[i], dense(i), 1e-8);
    }
}

TEST(BatchScoring, OneSolvePerSource) {
    auto g = oracle::build(oracle::random_signed(20, 0.2, 0.3, 2, false));
    MeasureSpec spec{.kind = MeasureKind::RandomWalk};
    auto pairs = all_pairs_from(5, 20);
    auto out = score_global_pairs(g, spec, pairs, 2);
    EXPECT_EQ(out.solves, 1u);
    auto direct = rwr_row(g, 5, {}, true);
    for (std::size_t p = 0; p < pairs.size(); ++p)
        EXPECT_EQ(out.scores[p], direct.scores[pairs[p].dst]);

    std::vector<NodePair> two_sources{{1, 2}, {3, 4}, {1, 5}, {3, 1}};
    EXPECT_EQ(score_global_pairs(g, spec, two_sources).solves, 2u);
}

TEST(BatchScoring, AscosGroupsByTarget) {
    auto g = oracle::build(oracle::random_signed(20, 0.2, 0.0, 2, true));
    MeasureSpec spec{.kind = MeasureKind::Ascos};
    std::vector<NodePair> pairs{{1, 7}, {2, 7}, {3, 7}};
    auto out = score_global_pairs(g, spec, pairs);
    EXPECT_EQ(out.solves, 1u);
    auto col = ascospp_column(g, 7, {}, true);
    EXPECT_EQ(out.scores[1], col.scores[2]);
}

TEST(BatchScoring, WorkerCountDoesNotChangeScores) {
    auto g = oracle::build(oracle::random_signed(40, 0.1, 0.4, 8, true));
    std::vector<NodePair> pairs;
    for (NodeId i = 0; i < 40; i += 3)
        for (NodeId j = 1; j < 40; j += 7)
            if (i != j) pairs.push_back({i, j});
    for (auto kind : {MeasureKind::Katz, MeasureKind::RandomWalk, MeasureKind::Ascos}) {
        MeasureSpec spec{.kind = kind, .c = 0.5};
        auto one = score_global_pairs(g, spec, pairs, 1);
        auto four = score_global_pairs(g, spec, pairs, 4);
        EXPECT_EQ(one.scores, four.scores);
    }
}

TEST(BatchScoring, NonConvergenceWarns) {
    auto g = oracle::build(oracle::random_signed(20, 0.3, 0.5, 1, false));
    MeasureSpec spec{.kind = MeasureKind::RandomWalk, .tol = 1e-14, .max_iter = 2};
    std::vector<NodePair> pairs{{0, 1}, {2, 3}};
    auto out = score_global_pairs(g, spec, pairs);
    ASSERT_FALSE(out.warnings.empty());
    EXPECT_NE(out.warnings.front().find("did not converge"), std::string::npos);
}

TEST(BatchScoring, RejectsLocalMeasure) {
    MeasureSpec spec{.kind = MeasureKind::CommonNeighbors};
    std::vector<NodePair> pairs{{0, 1}};
    EXPECT_THROW(score_global_pairs(signed_square(), spec, pairs), ConfigError);
}

TEST(BatchScoring, ReductionOnPositiveGraphs) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto g = oracle::build(oracle::random_signed(30, 0.15, 0.0, seed, seed % 2 == 0));
        auto pairs = all_pairs_from(static_cast<NodeId>(seed), 30);
        for (auto kind : {MeasureKind::Katz, MeasureKind::RandomWalk, MeasureKind::Ascos}) {
            MeasureSpec spec{.kind = kind};
            auto s = score_global_pairs(g, spec, pairs);
            spec.strategy = Strategy::IgnoreSign;
            auto i = score_global_pairs(g, spec, pairs);
            spec.strategy = Strategy::RemoveNegative;
            auto r = score_global_pairs(g, spec, pairs);
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                EXPECT_NEAR(s.scores[p], i.scores[p], 1e-8);
                EXPECT_NEAR(s.scores[p], r.scores[p], 1e-8);
            }
        }
    }
}
