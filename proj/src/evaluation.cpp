#include "signrel/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "signrel/errors.hpp"
#include "signrel/scoring.hpp"

namespace signrel {

std::string_view to_string(Task task) {
    return task == Task::LinkPrediction ? "link_prediction" : "tie_strength";
}

std::string_view to_string(Setting setting) {
    return setting == Setting::Directed ? "directed" : "undirected";
}

std::optional<Setting> parse_setting(std::string_view name) {
    if (name == "directed") return Setting::Directed;
    if (name == "undirected") return Setting::Undirected;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Metrics

namespace {

void check_labels(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw ConfigError("scores and labels differ in length");
    for (int l : labels) {
        if (l != 1 && l != -1) throw ConfigError("labels must be +1 or -1");
    }
}

std::size_t count_positive(std::span<const int> labels) {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
    check_labels(scores, labels);
    const std::size_t n = scores.size();
    const std::size_t n_pos = count_positive(labels);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DataError("AUC is undefined with a single class");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of (1-based, tie-averaged) ranks over the positives.
    double rank_sum = 0.0;
    for (std::size_t start = 0; start < n;) {
        std::size_t end = start + 1;
        while (end < n && scores[order[end]] == scores[order[start]]) ++end;
        double avg_rank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t k = start; k < end; ++k) {
            if (labels[order[k]] == 1) rank_sum += avg_rank;
        }
        start = end;
    }
    double p = static_cast<double>(n_pos);
    double wins = rank_sum - 0.5 * p * (p + 1.0);
    return wins / (p * static_cast<double>(n_neg));
}

ThresholdResult threshold_search(std::span<const double> scores, std::span<const int> labels) {
    check_labels(scores, labels);
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t n_pos = count_positive(labels);
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) return {-inf, 0.5, true};

    std::vector<std::pair<double, int>> sorted;
    sorted.reserve(scores.size());
    for (std::size_t k = 0; k < scores.size(); ++k) sorted.emplace_back(scores[k], labels[k]);
    std::sort(sorted.begin(), sorted.end());

    auto balanced = [&](std::size_t tp, std::size_t tn) {
        return 0.5 * (static_cast<double>(tp) / static_cast<double>(n_pos) +
                      static_cast<double>(tn) / static_cast<double>(n_neg));
    };

    // t = -inf: everything predicted positive.
    std::size_t tp = n_pos, tn = 0;
    ThresholdResult best{-inf, balanced(tp, tn), false};
    for (std::size_t k = 0; k < sorted.size();) {
        std::size_t end = k;
        while (end < sorted.size() && sorted[end].first == sorted[k].first) {
            if (sorted[end].second == 1) --tp; else ++tn;
            ++end;
        }
        double t = end < sorted.size()
                       ? sorted[k].first + 0.5 * (sorted[end].first - sorted[k].first)
                       : inf;
        double acc = balanced(tp, tn);
        if (acc > best.balanced_accuracy) best = {t, acc, false};
        k = end;
    }
    return best;
}

double normalize_strength(double rating) {
    double a = std::abs(rating);
    if (!(a >= 1.0 && a <= 10.0)) {
        throw DataError("rating " + std::to_string(rating) + " outside +-[1, 10]");
    }
    return rating / 10.0;
}

std::vector<double> normalize_strengths(std::span<const double> ratings) {
    std::vector<double> out;
    out.reserve(ratings.size());
    for (double r : ratings) out.push_back(normalize_strength(r));
    return out;
}

double rmse(std::span<const double> predicted, std::span<const double> truth) {
    if (predicted.size() != truth.size()) throw ConfigError("rmse: length mismatch");
    if (predicted.empty()) throw DataError("rmse of an empty set");
    double sum = 0.0;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        double d = predicted[k] - truth[k];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predicted.size()));
}

// ---------------------------------------------------------------------------
// Link prediction

namespace {

struct LinkOutcome {
    double auc = 0.0;
    std::size_t unseen = 0;
    std::optional<double> threshold;
    std::optional<double> accuracy;
    std::vector<std::string> warnings;
};

LinkOutcome evaluate_link_split(const SignedGraph& train, std::span<const TestPair> test,
                                const MeasureSpec& spec, const EvalOptions& options) {
    std::vector<int> labels;
    labels.reserve(test.size());
    for (const auto& t : test) labels.push_back(t.sign);
    if (count_positive(labels) == 0 || count_positive(labels) == labels.size()) {
        throw DataError("test set contains a single sign class; use a different seed");
    }

    LinkOutcome out;
    Scorer scorer(train, spec, options.workers);

    auto seen = [&](NodeId v) { return train.out_degree(v) + train.in_degree(v) > 0; };
    std::vector<NodePair> pairs;
    std::vector<std::size_t> where;
    for (std::size_t k = 0; k < test.size(); ++k) {
        if (seen(test[k].src) && seen(test[k].dst)) {
            pairs.push_back({test[k].src, test[k].dst});
            where.push_back(k);
        } else {
            ++out.unseen;
        }
    }
    std::vector<double> scores(test.size(), 0.0);
    auto scored = scorer.score(pairs);
    for (std::size_t q = 0; q < where.size(); ++q) scores[where[q]] = scored.scores[q];
    out.warnings = std::move(scored.warnings);
    if (out.unseen > 0) {
        out.warnings.push_back(std::to_string(out.unseen) +
                               " test pairs have an endpoint without training edges; scored 0");
    }
    out.auc = auc(scores, labels);

    if (options.search_threshold) {
        std::vector<NodePair> train_pairs;
        std::vector<int> train_labels;
        for (const auto& e : train.edges()) {
            train_pairs.push_back({e.src, e.dst});
            train_labels.push_back(e.sign);
        }
        auto train_scored = scorer.score(train_pairs);
        auto thr = threshold_search(train_scored.scores, train_labels);
        if (thr.single_class) out.warnings.push_back("training edges have a single sign class");
        std::size_t correct = 0;
        for (std::size_t k = 0; k < scores.size(); ++k) {
            int predicted = scores[k] >= thr.threshold ? 1 : -1;
            if (predicted == labels[k]) ++correct;
        }
        out.threshold = thr.threshold;
        out.accuracy = static_cast<double>(correct) / static_cast<double>(scores.size());
    }
    return out;
}

SignedGraph setting_graph(const SignedGraph& g, Setting setting) {
    if (setting == Setting::Undirected) return to_undirected(g);
    if (!g.directed()) throw ConfigError("directed setting needs a directed graph");
    return g;
}

}  // namespace

EvalReport eval_link_prediction(const SignedGraph& g, const MeasureSpec& spec, double ratio,
                                std::uint64_t seed, Setting setting, const EvalOptions& options) {
    spec.validate();
    auto base = setting_graph(g, setting);
    auto split = split_train_test(base, ratio, seed);
    auto outcome = evaluate_link_split(split.train, split.test_pairs, spec, options);

    EvalReport report;
    report.task = Task::LinkPrediction;
    report.measure = spec;
    report.setting = setting;
    report.metric_value = outcome.auc;
    report.threshold = outcome.threshold;
    report.accuracy = outcome.accuracy;
    report.split_seed = seed;
    report.ratio = ratio;
    report.n_test = split.test_pairs.size();
    report.unseen_endpoints = outcome.unseen;
    report.warnings = std::move(outcome.warnings);
    return report;
}

// ---------------------------------------------------------------------------
// Tie strength

namespace {

// Scores >= t stretch onto [0, 1], scores below t onto [-1, 0).
std::vector<double> stretch_around(std::span<const double> scores, double t) {
    if (scores.empty()) return {};
    auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
    double lo = *lo_it, hi = *hi_it;
    t = std::clamp(t, lo, hi);
    std::vector<double> out;
    out.reserve(scores.size());
    for (double s : scores) {
        if (s >= t) {
            out.push_back(hi > t ? (s - t) / (hi - t) : 0.0);
        } else {
            out.push_back((s - t) / (t - lo));
        }
    }
    return out;
}

std::vector<double> scale_by_max_abs(std::span<const double> scores) {
    double m = 0.0;
    for (double s : scores) m = std::max(m, std::abs(s));
    std::vector<double> out(scores.begin(), scores.end());
    if (m > 1.0) {
        for (auto& s : out) s /= m;
    }
    return out;
}

struct RatedEdges {
    std::vector<NodePair> pairs;
    std::vector<int> signs;
    std::vector<double> truth;
};

RatedEdges rated_edges(const SignedGraph& g) {
    if (!g.has_weights()) {
        throw DataError("tie-strength prediction needs rated edges; this dataset has none");
    }
    RatedEdges r;
    for (const auto& e : g.edges()) {
        r.pairs.push_back({e.src, e.dst});
        r.signs.push_back(e.sign);
        r.truth.push_back(normalize_strength(*e.weight));
    }
    if (r.pairs.empty()) throw DataError("no rated edges to evaluate");
    return r;
}

}  // namespace

std::vector<double> map_to_strength(std::span<const double> scores, std::span<const int> labels,
                                    Strategy strategy) {
    if (strategy == Strategy::Signed) return scale_by_max_abs(scores);
    auto thr = threshold_search(scores, labels);
    return stretch_around(scores, thr.threshold);
}

EvalReport eval_tie_strength(const SignedGraph& g, const MeasureSpec& spec, Setting setting,
                             const EvalOptions& options) {
    spec.validate();
    auto rated = rated_edges(g);
    auto scoring_graph = setting_graph(g, setting);
    auto scored = Scorer(scoring_graph, spec, options.workers).score(rated.pairs);
    auto predicted = map_to_strength(scored.scores, rated.signs, spec.strategy);

    EvalReport report;
    report.task = Task::TieStrength;
    report.measure = spec;
    report.setting = setting;
    report.metric_value = rmse(predicted, rated.truth);
    if (spec.strategy != Strategy::Signed) {
        report.threshold = threshold_search(scored.scores, rated.signs).threshold;
    }
    report.n_test = rated.pairs.size();
    report.warnings = std::move(scored.warnings);
    return report;
}

RunSummary summarize(std::vector<EvalReport> runs) {
    RunSummary s;
    if (runs.empty()) return s;
    double sum = 0.0;
    for (const auto& r : runs) sum += r.metric_value;
    s.mean = sum / static_cast<double>(runs.size());
    if (runs.size() > 1) {
        double sq = 0.0;
        for (const auto& r : runs) sq += (r.metric_value - s.mean) * (r.metric_value - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(runs.size() - 1));
    }
    s.runs = std::move(runs);
    return s;
}

// ---------------------------------------------------------------------------
// Cross validation

MeasureSpec ParamPoint::apply(MeasureSpec spec) const {
    if (beta) spec.beta = *beta;
    if (gamma) spec.gamma = *gamma;
    if (c) spec.c = *c;
    return spec;
}

namespace {

// Mean fold AUC, or nullopt when a solve failed to converge.
std::optional<double> link_cv_score(const SignedGraph& base, std::span<const SignedEdge> edges,
                                    const std::vector<std::vector<std::size_t>>& folds,
                                    const MeasureSpec& spec, const EvalOptions& options) {
    EvalOptions opts = options;
    opts.search_threshold = false;
    double total = 0.0;
    for (const auto& fold : folds) {
        std::vector<bool> held(edges.size(), false);
        for (std::size_t k : fold) held[k] = true;
        std::vector<SignedEdge> train_edges;
        std::vector<TestPair> test;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (held[k]) {
                test.push_back({edges[k].src, edges[k].dst, edges[k].sign, edges[k].weight});
            } else {
                train_edges.push_back(edges[k]);
            }
        }
        auto train = subgraph_from_edges(base, train_edges);
        auto outcome = evaluate_link_split(train, test, spec, opts);
        bool diverged = std::any_of(outcome.warnings.begin(), outcome.warnings.end(),
                                    [](const std::string& w) {
                                        return w.find("did not converge") != std::string::npos;
                                    });
        if (diverged) return std::nullopt;
        total += outcome.auc;
    }
    return total / static_cast<double>(folds.size());
}

std::optional<double> tie_cv_score(const SignedGraph& scoring_graph, const RatedEdges& rated,
                                   const std::vector<std::vector<std::size_t>>& folds,
                                   const MeasureSpec& spec, const EvalOptions& options) {
    auto scored = Scorer(scoring_graph, spec, options.workers).score(rated.pairs);
    if (!scored.warnings.empty()) return std::nullopt;

    double total = 0.0;
    for (const auto& fold : folds) {
        std::vector<bool> held(rated.pairs.size(), false);
        for (std::size_t k : fold) held[k] = true;
        std::vector<double> fold_scores, fold_truth, rest_scores;
        std::vector<int> rest_labels;
        for (std::size_t k = 0; k < rated.pairs.size(); ++k) {
            if (held[k]) {
                fold_scores.push_back(scored.scores[k]);
                fold_truth.push_back(rated.truth[k]);
            } else {
                rest_scores.push_back(scored.scores[k]);
                rest_labels.push_back(rated.signs[k]);
            }
        }
        std::vector<double> predicted;
        if (spec.strategy == Strategy::Signed) {
            predicted = scale_by_max_abs(fold_scores);
        } else {
            predicted = stretch_around(fold_scores, threshold_search(rest_scores, rest_labels).threshold);
        }
        total += rmse(predicted, fold_truth);
    }
    return total / static_cast<double>(folds.size());
}

}  // namespace

CrossValidationResult cross_validate(const SignedGraph& g, const MeasureSpec& base,
                                     std::span<const ParamPoint> grid, std::size_t folds,
                                     std::uint64_t seed, Task task, Setting setting,
                                     const EvalOptions& options) {
    if (grid.empty()) throw ConfigError("parameter grid is empty");
    if (folds < 2) throw ConfigError("cross validation needs at least two folds");

    auto graph = setting_graph(g, setting);
    std::vector<SignedEdge> edges;
    RatedEdges rated;
    std::vector<std::vector<std::size_t>> fold_sets;
    if (task == Task::LinkPrediction) {
        edges = graph.edges();
        fold_sets = make_folds(edges.size(), folds, seed);
    } else {
        rated = rated_edges(g);
        fold_sets = make_folds(rated.pairs.size(), folds, seed);
    }

    const bool maximize = task == Task::LinkPrediction;
    CrossValidationResult result;
    bool have_best = false;
    for (const auto& point : grid) {
        MeasureSpec spec = point.apply(base);
        spec.validate();
        auto score = task == Task::LinkPrediction
                         ? link_cv_score(graph, edges, fold_sets, spec, options)
                         : tie_cv_score(graph, rated, fold_sets, spec, options);
        if (!score) {
            result.warnings.push_back("skipped c=" + std::to_string(spec.c) +
                                      " beta=" + std::to_string(spec.beta) +
                                      ": solver did not converge");
            continue;
        }
        result.evaluated.emplace_back(spec, *score);

        bool better = false;
        if (!have_best) {
            better = true;
        } else if (*score != result.best_score) {
            better = maximize ? *score > result.best_score : *score < result.best_score;
        } else {
            better = std::tie(spec.c, spec.beta, spec.gamma) <
                     std::tie(result.best.c, result.best.beta, result.best.gamma);
        }
        if (better) {
            result.best = spec;
            result.best_score = *score;
            have_best = true;
        }
    }
    if (!have_best) throw DataError("every grid point failed to converge");
    return result;
}

}  // namespace signrel
