#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signrel/graph.hpp"
#include "signrel/measure_spec.hpp"

namespace signrel {

enum class Task { LinkPrediction, TieStrength };
enum class Setting { Directed, Undirected };

std::string_view to_string(Task task);
std::string_view to_string(Setting setting);
std::optional<Setting> parse_setting(std::string_view name);

// ---------------------------------------------------------------------------
// Metrics

/// Rank-based AUC: probability that a random positive outscores a random
/// negative, ties counting one half. Labels are +1 / -1. Throws DataError when
/// only one class is present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct ThresholdResult {
    double threshold = 0.0;          // may be +-infinity
    double balanced_accuracy = 0.0;  // on the data it was searched on
    bool single_class = false;
};

/// Threshold t maximizing balanced accuracy of "predict +1 iff score >= t".
/// Candidates are -inf, the midpoints between adjacent distinct scores, and
/// +inf; ties go to the smallest t. With a single class the threshold is -inf
/// and single_class is set.
ThresholdResult threshold_search(std::span<const double> scores, std::span<const int> labels);

/// Rating in +-[1, 10] mapped to [-1, 1]. Throws DataError when out of range.
double normalize_strength(double rating);
std::vector<double> normalize_strengths(std::span<const double> ratings);

double rmse(std::span<const double> predicted, std::span<const double> truth);

// ---------------------------------------------------------------------------
// Experiments

struct EvalReport {
    Task task = Task::LinkPrediction;
    MeasureSpec measure;
    Setting setting = Setting::Undirected;
    double metric_value = 0.0;            // AUC or RMSE
    std::optional<double> threshold;      // searched threshold, when computed
    std::optional<double> accuracy;       // test accuracy at that threshold
    std::uint64_t split_seed = 0;
    double ratio = 0.0;
    std::size_t n_test = 0;
    std::size_t unseen_endpoints = 0;
    std::vector<std::string> warnings;
};

struct EvalOptions {
    unsigned workers = 0;  // 0 = hardware concurrency
    /// Score the training edges to search the auxiliary sign threshold.
    bool search_threshold = true;
};

/// Splits the (optionally symmetrized) graph, scores every test pair on the
/// training graph and reports the AUC over the true signs. Test pairs with an
/// endpoint that has no training edges score 0 and are counted.
EvalReport eval_link_prediction(const SignedGraph& g, const MeasureSpec& spec, double ratio,
                                std::uint64_t seed, Setting setting,
                                const EvalOptions& options = {});

/// Scores every rated edge on the full binary network and reports the RMSE
/// against ratings / 10. Signed scores are divided by their max |score| when
/// it exceeds 1; remove-negative / ignore-sign scores are stretched around the
/// searched sign threshold.
EvalReport eval_tie_strength(const SignedGraph& g, const MeasureSpec& spec, Setting setting,
                             const EvalOptions& options = {});

/// Maps raw scores to tie-strength predictions in [-1, 1] (see eval_tie_strength).
/// `labels` are the edge signs used for the threshold search.
std::vector<double> map_to_strength(std::span<const double> scores, std::span<const int> labels,
                                    Strategy strategy);

struct RunSummary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single run
    std::vector<EvalReport> runs;
};

RunSummary summarize(std::vector<EvalReport> runs);

// ---------------------------------------------------------------------------
// Parameter selection

struct ParamPoint {
    std::optional<double> beta;
    std::optional<int> gamma;
    std::optional<double> c;

    MeasureSpec apply(MeasureSpec spec) const;
};

struct CrossValidationResult {
    MeasureSpec best;
    double best_score = 0.0;
    std::vector<std::pair<MeasureSpec, double>> evaluated;  // skipped points omitted
    std::vector<std::string> warnings;
};

/// Picks the grid point with the best mean fold metric (max AUC for link
/// prediction, min RMSE for tie strength). Ties go to smaller c, then smaller
/// beta. Points whose solves fail to converge are skipped with a warning;
/// throws DataError when every point is skipped.
CrossValidationResult cross_validate(const SignedGraph& g, const MeasureSpec& base,
                                     std::span<const ParamPoint> grid, std::size_t folds,
                                     std::uint64_t seed, Task task, Setting setting,
                                     const EvalOptions& options = {});

}  // namespace signrel
