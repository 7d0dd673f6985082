// Command-line front end: network statistics, pair scoring, evaluation and
// parameter search over signed edge lists.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "signrel/errors.hpp"
#include "signrel/evaluation.hpp"
#include "signrel/graph.hpp"
#include "signrel/measure_spec.hpp"
#include "signrel/netstats.hpp"
#include "signrel/scoring.hpp"

using json = nlohmann::ordered_json;
using namespace signrel;

namespace {

enum Exit { Ok = 0, DataFailure = 1, ConfigFailure = 2, InternalFailure = 3 };

struct Common {
    std::string data;
    std::string format = "csv_weighted";
    bool directed = true;
    std::string out;
    std::string out_format = "json";
    unsigned workers = 0;
};

struct MeasureFlags {
    std::string measure = "rwr";
    std::string strategy = "signed";
    double beta = 0.005;
    int gamma = 5;
    double c = 0.85;
    double tol = 1e-8;
    int max_iter = 200;
    std::string spa = "max";
};

// JSON has no infinities; unbounded thresholds are written as strings.
json number(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

LoadedGraph load(const Common& common) {
    auto fmt = parse_edge_format(common.format);
    if (!fmt) throw ConfigError("unknown format '" + common.format + "'");
    if (common.data.empty()) throw ConfigError("--data is required");
    return load_edge_list_file(common.data, *fmt, common.directed);
}

std::vector<MeasureSpec> measures_from(const MeasureFlags& f) {
    auto base = [&](MeasureKind kind, Strategy strategy) {
        MeasureSpec spec;
        spec.kind = kind;
        spec.strategy = strategy;
        spec.beta = f.beta;
        spec.gamma = f.gamma;
        spec.c = f.c;
        spec.tol = f.tol;
        spec.max_iter = f.max_iter;
        if (f.spa == "max") spec.spa_combine = SpaCombine::Max;
        else if (f.spa == "absdiff") spec.spa_combine = SpaCombine::AbsDifference;
        else throw ConfigError("unknown --spa '" + f.spa + "'");
        spec.validate();
        return spec;
    };

    std::vector<MeasureKind> kinds;
    if (f.measure == "all") {
        kinds = {MeasureKind::CommonNeighbors, MeasureKind::Jaccard,
                 MeasureKind::PreferentialAttachment, MeasureKind::Katz,
                 MeasureKind::Ascos, MeasureKind::RandomWalk};
    } else {
        auto kind = parse_measure(f.measure);
        if (!kind) throw ConfigError("unknown measure '" + f.measure + "'");
        kinds = {*kind};
    }
    std::vector<Strategy> strategies;
    if (f.strategy == "all") {
        strategies = {Strategy::Signed, Strategy::RemoveNegative, Strategy::IgnoreSign};
    } else {
        auto s = parse_strategy(f.strategy);
        if (!s) throw ConfigError("unknown strategy '" + f.strategy + "'");
        strategies = {*s};
    }
    std::vector<MeasureSpec> out;
    for (auto k : kinds)
        for (auto s : strategies) out.push_back(base(k, s));
    return out;
}

void add_measure_options(CLI::App& cmd, MeasureFlags& f, bool allow_all) {
    std::string all = allow_all ? " or all" : "";
    cmd.add_option("--measure", f.measure, "cn, ji, pa, katz, ascospp, rwr" + all)
        ->envname("SR_MEASURE")->capture_default_str();
    cmd.add_option("--strategy", f.strategy, "signed, remove_neg, ignore_sign" + all)
        ->envname("SR_STRATEGY")->capture_default_str();
    cmd.add_option("--beta", f.beta, "Katz decay")->envname("SR_BETA")->capture_default_str();
    cmd.add_option("--gamma", f.gamma, "Katz path length cap")
        ->envname("SR_GAMMA")->capture_default_str();
    cmd.add_option("--c", f.c, "restart / decay factor for rwr and ascospp")
        ->envname("SR_C")->capture_default_str();
    cmd.add_option("--tol", f.tol, "solver tolerance (max-norm change)")
        ->envname("SR_TOL")->capture_default_str();
    cmd.add_option("--max-iter", f.max_iter, "solver iteration cap")
        ->envname("SR_MAX_ITER")->capture_default_str();
    cmd.add_option("--spa", f.spa, "signed PA combiner: max or absdiff")
        ->envname("SR_SPA")->capture_default_str();
}

void write_output(const Common& common, const std::string& payload) {
    if (common.out.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(common.out, std::ios::binary);
    if (!f) throw DataError("cannot write " + common.out);
    f << payload;
}

Setting setting_from(const std::string& name) {
    auto s = parse_setting(name);
    if (!s) throw ConfigError("unknown setting '" + name + "'");
    return *s;
}

json spec_json(const MeasureSpec& m) {
    return {{"label", m.label()},       {"measure", std::string(to_string(m.kind))},
            {"strategy", std::string(to_string(m.strategy))},
            {"beta", m.beta},           {"gamma", m.gamma},
            {"c", m.c},                 {"tol", m.tol},
            {"max_iter", m.max_iter}};
}

// ---------------------------------------------------------------------------

void run_stats(const Common& common, const std::string& degree_kind) {
    auto loaded = load(common);
    const auto& g = loaded.graph;
    std::cerr << "loaded " << g.node_count() << " nodes, " << g.pos_edge_count() << " positive, "
              << g.neg_edge_count() << " negative edges\n";

    if (!degree_kind.empty()) {
        auto kind = parse_degree_kind(degree_kind);
        if (!kind) throw ConfigError("unknown degree kind '" + degree_kind + "'");
        auto hist = degree_distribution(g, *kind);
        std::ostringstream os;
        if (common.out_format == "csv") {
            os << "degree,count\n";
            for (const auto& [d, n] : hist) os << d << ',' << n << '\n';
        } else {
            json j = json::array();
            for (const auto& [d, n] : hist) j.push_back({{"degree", d}, {"count", n}});
            os << json{{"kind", std::string(to_string(*kind))}, {"histogram", j}}.dump(2) << '\n';
        }
        write_output(common, os.str());
        return;
    }

    json j;
    j["nodes"] = g.node_count();
    j["directed"] = g.directed();
    j["pos_edges"] = g.pos_edge_count();
    j["neg_edges"] = g.neg_edge_count();
    j["rows"] = loaded.report.rows;
    j["dropped_self_loops"] = loaded.report.dropped_self_loops;
    j["duplicates_replaced"] = loaded.report.duplicates_replaced;
    j["dropped_conflicts"] = loaded.report.dropped_conflicts;
    if (g.directed()) {
        auto r = reciprocity(g);
        j["reciprocity"] = {{"pos_edges", r.pos_edges},
                            {"pos_reciprocated", r.pos_reciprocated},
                            {"pos_rate", r.pos_reciprocal_rate},
                            {"neg_edges", r.neg_edges},
                            {"neg_reciprocated", r.neg_reciprocated},
                            {"neg_rate", r.neg_reciprocal_rate},
                            {"mixed_pairs", r.mixed_pair_count}};
    }
    auto t = triad_census(g);
    j["triads"] = {{"ppp", t.counts[0]},
                   {"ppn", t.counts[1]},
                   {"pnn", t.counts[2]},
                   {"nnn", t.counts[3]},
                   {"balanced_fraction", t.balanced_fraction},
                   {"dropped_conflicts", t.dropped_conflicts}};
    write_output(common, j.dump(2) + "\n");
}

std::vector<NodePair> read_pairs(const std::string& path, const SignedGraph& g,
                                 std::vector<std::pair<std::string, std::string>>& raw) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    const auto& labels = g.labels();
    std::vector<NodePair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        for (auto& ch : line)
            if (ch == ',' || ch == '\t') ch = ' ';
        std::istringstream fields(line);
        std::string a, b;
        if (!(fields >> a)) continue;
        if (a.front() == '#') continue;
        if (!(fields >> b)) throw ParseError(line_no, "expected two node labels");
        auto ia = labels ? labels->find(a) : std::nullopt;
        auto ib = labels ? labels->find(b) : std::nullopt;
        if (!ia) throw ConfigError("line " + std::to_string(line_no) + ": unknown node '" + a + "'");
        if (!ib) throw ConfigError("line " + std::to_string(line_no) + ": unknown node '" + b + "'");
        if (*ia == *ib) throw ConfigError("line " + std::to_string(line_no) + ": pair of identical nodes");
        pairs.push_back({*ia, *ib});
        raw.emplace_back(a, b);
    }
    return pairs;
}

void run_score(const Common& common, const MeasureFlags& flags, const std::string& pairs_path) {
    auto specs = measures_from(flags);
    auto loaded = load(common);
    std::vector<std::pair<std::string, std::string>> raw;
    auto pairs = read_pairs(pairs_path, loaded.graph, raw);
    auto scored = score_pairs(loaded.graph, specs.front(), pairs, common.workers);
    for (const auto& w : scored.warnings) std::cerr << "warning: " << w << '\n';

    std::ostringstream os;
    if (common.out_format == "json") {
        json rows = json::array();
        for (std::size_t k = 0; k < pairs.size(); ++k)
            rows.push_back({{"src", raw[k].first}, {"dst", raw[k].second}, {"score", scored.scores[k]}});
        os << json{{"measure", spec_json(specs.front())}, {"scores", rows}}.dump(2) << '\n';
    } else {
        os << "src,dst,score\n";
        for (std::size_t k = 0; k < pairs.size(); ++k)
            os << raw[k].first << ',' << raw[k].second << ',' << fmt_double(scored.scores[k]) << '\n';
    }
    write_output(common, os.str());
}

struct EvalFlags {
    std::string setting = "undirected";
    double ratio = 0.8;
    std::uint64_t seed = 1;
    std::size_t seeds = 5;
    bool no_threshold = false;
};

void run_eval(const Common& common, const MeasureFlags& flags, const EvalFlags& ef, Task task) {
    auto specs = measures_from(flags);
    auto setting = setting_from(ef.setting);
    if (ef.seeds == 0) throw ConfigError("--seeds must be at least 1");
    auto loaded = load(common);
    const auto& g = loaded.graph;
    if (task == Task::TieStrength && !g.has_weights()) {
        throw ConfigError("tie-strength prediction is not applicable: the dataset has no ratings");
    }
    if (setting == Setting::Directed && !g.directed()) {
        throw ConfigError("directed setting requested on a graph loaded as undirected");
    }
    EvalOptions options{.workers = common.workers, .search_threshold = !ef.no_threshold};

    json rows = json::array();
    std::ostringstream csv;
    csv << (task == Task::LinkPrediction ? "measure,auc_mean,auc_std,runs,threshold,accuracy\n"
                                         : "measure,rmse,threshold,n\n");
    for (const auto& spec : specs) {
        if (task == Task::LinkPrediction) {
            std::vector<EvalReport> runs;
            for (std::size_t k = 0; k < ef.seeds; ++k)
                runs.push_back(eval_link_prediction(g, spec, ef.ratio, ef.seed + k, setting, options));
            auto summary = summarize(std::move(runs));
            json run_list = json::array();
            for (const auto& r : summary.runs) {
                json rj{{"seed", r.split_seed}, {"auc", r.metric_value}, {"n_test", r.n_test},
                        {"unseen_endpoints", r.unseen_endpoints}};
                if (r.threshold) rj["threshold"] = number(*r.threshold);
                if (r.accuracy) rj["accuracy"] = *r.accuracy;
                rj["warnings"] = r.warnings;
                run_list.push_back(rj);
                for (const auto& w : r.warnings)
                    std::cerr << "warning: " << spec.label() << " seed " << r.split_seed << ": " << w << '\n';
            }
            rows.push_back({{"measure", spec_json(spec)},
                            {"auc_mean", summary.mean},
                            {"auc_std", summary.stddev},
                            {"runs", run_list}});
            const auto& first = summary.runs.front();
            csv << spec.label() << ',' << fmt_double(summary.mean) << ','
                << fmt_double(summary.stddev) << ',' << summary.runs.size() << ','
                << (first.threshold ? fmt_double(*first.threshold) : "") << ','
                << (first.accuracy ? fmt_double(*first.accuracy) : "") << '\n';
            std::cerr << spec.label() << "  AUC " << summary.mean << " +- " << summary.stddev << '\n';
        } else {
            auto r = eval_tie_strength(g, spec, setting, options);
            json rj{{"measure", spec_json(spec)}, {"rmse", r.metric_value}, {"n", r.n_test}};
            if (r.threshold) rj["threshold"] = number(*r.threshold);
            rj["warnings"] = r.warnings;
            rows.push_back(rj);
            csv << spec.label() << ',' << fmt_double(r.metric_value) << ','
                << (r.threshold ? fmt_double(*r.threshold) : "") << ',' << r.n_test << '\n';
            for (const auto& w : r.warnings) std::cerr << "warning: " << spec.label() << ": " << w << '\n';
            std::cerr << spec.label() << "  RMSE " << r.metric_value << '\n';
        }
    }

    if (common.out_format == "csv") {
        write_output(common, csv.str());
    } else {
        json j{{"task", std::string(to_string(task))},
               {"setting", std::string(to_string(setting))},
               {"data", common.data}};
        if (task == Task::LinkPrediction) {
            j["ratio"] = ef.ratio;
            j["seed"] = ef.seed;
            j["seeds"] = ef.seeds;
        }
        j["results"] = rows;
        write_output(common, j.dump(2) + "\n");
    }
}

struct CvFlags {
    std::string task = "link";
    std::string setting = "undirected";
    std::vector<double> grid_c;
    std::vector<double> grid_beta;
    std::vector<int> grid_gamma;
    std::size_t folds = 5;
    std::uint64_t seed = 1;
};

void run_cv(const Common& common, const MeasureFlags& flags, const CvFlags& cf) {
    auto specs = measures_from(flags);
    if (specs.size() != 1) throw ConfigError("cv takes a single measure and strategy");
    Task task;
    if (cf.task == "link") task = Task::LinkPrediction;
    else if (cf.task == "tie") task = Task::TieStrength;
    else throw ConfigError("unknown task '" + cf.task + "'");
    auto setting = setting_from(cf.setting);

    std::vector<std::optional<double>> cs{std::nullopt}, betas{std::nullopt};
    std::vector<std::optional<int>> gammas{std::nullopt};
    if (!cf.grid_c.empty()) cs.assign(cf.grid_c.begin(), cf.grid_c.end());
    if (!cf.grid_beta.empty()) betas.assign(cf.grid_beta.begin(), cf.grid_beta.end());
    if (!cf.grid_gamma.empty()) gammas.assign(cf.grid_gamma.begin(), cf.grid_gamma.end());
    std::vector<ParamPoint> grid;
    for (auto c : cs)
        for (auto b : betas)
            for (auto gm : gammas) grid.push_back({b, gm, c});

    auto loaded = load(common);
    if (task == Task::TieStrength && !loaded.graph.has_weights()) {
        throw ConfigError("tie-strength prediction is not applicable: the dataset has no ratings");
    }
    auto res = cross_validate(loaded.graph, specs.front(), grid, cf.folds, cf.seed, task, setting,
                              {.workers = common.workers});
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';

    json evaluated = json::array();
    for (const auto& [spec, score] : res.evaluated)
        evaluated.push_back({{"beta", spec.beta}, {"gamma", spec.gamma}, {"c", spec.c}, {"score", score}});
    json j{{"task", std::string(to_string(task))},
           {"setting", std::string(to_string(setting))},
           {"folds", cf.folds},
           {"seed", cf.seed},
           {"best", spec_json(res.best)},
           {"best_score", res.best_score},
           {"evaluated", evaluated},
           {"skipped", res.warnings}};
    write_output(common, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signed-network node relevance: statistics, scoring and evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--data", common.data, "edge list file")->envname("SR_DATA");
    app.add_option("--format", common.format, "csv_weighted or whitespace_signed")
        ->envname("SR_FORMAT")->capture_default_str();
    app.add_flag("--directed,!--undirected", common.directed,
                 "load as directed (default) or symmetrize on load")
        ->envname("SR_DIRECTED");
    app.add_option("--out", common.out, "output file (default stdout)")->envname("SR_OUT");
    app.add_option("--out-format", common.out_format, "json or csv")
        ->envname("SR_OUT_FORMAT")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--workers", common.workers, "solver threads, 0 = all cores")
        ->envname("SR_WORKERS")->capture_default_str();

    std::string degree_kind;
    auto* stats = app.add_subcommand("stats", "network statistics");
    stats->add_option("--degree", degree_kind,
                      "emit the histogram of one degree kind: in+, in-, out+, out-, total+, total-");

    MeasureFlags score_flags;
    std::string pairs_path;
    auto* score = app.add_subcommand("score", "score node pairs");
    add_measure_options(*score, score_flags, false);
    score->add_option("--pairs", pairs_path, "file of 'src,dst' label pairs")
        ->required()->envname("SR_PAIRS");

    MeasureFlags eval_flags;
    EvalFlags ef;
    auto* eval = app.add_subcommand("eval", "evaluate measures");
    eval->require_subcommand(1);
    add_measure_options(*eval, eval_flags, true);
    eval->add_option("--setting", ef.setting, "directed or undirected")
        ->envname("SR_SETTING")->capture_default_str();
    eval->add_option("--ratio", ef.ratio, "training share of edges")
        ->envname("SR_RATIO")->capture_default_str();
    eval->add_option("--seed", ef.seed, "first split seed")->envname("SR_SEED")->capture_default_str();
    eval->add_option("--seeds", ef.seeds, "number of splits (seed, seed+1, ...)")
        ->envname("SR_SEEDS")->capture_default_str();
    eval->add_flag("--no-threshold", ef.no_threshold, "skip the sign-threshold search");
    auto* eval_link = eval->add_subcommand("link", "link sign prediction (AUC)");
    auto* eval_tie = eval->add_subcommand("tie", "tie strength prediction (RMSE)");

    MeasureFlags cv_flags;
    CvFlags cf;
    auto* cv = app.add_subcommand("cv", "cross-validated parameter search");
    add_measure_options(*cv, cv_flags, false);
    cv->add_option("--task", cf.task, "link or tie")->capture_default_str();
    cv->add_option("--setting", cf.setting, "directed or undirected")
        ->envname("SR_SETTING")->capture_default_str();
    cv->add_option("--grid-c", cf.grid_c, "candidate c values")->delimiter(',');
    cv->add_option("--grid-beta", cf.grid_beta, "candidate beta values")->delimiter(',');
    cv->add_option("--grid-gamma", cf.grid_gamma, "candidate gamma values")->delimiter(',');
    cv->add_option("--folds", cf.folds, "number of folds")->capture_default_str();
    cv->add_option("--seed", cf.seed, "fold seed")->envname("SR_SEED")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : ConfigFailure;
    }

    try {
        if (*stats) run_stats(common, degree_kind);
        else if (*score) run_score(common, score_flags, pairs_path);
        else if (*eval_link) run_eval(common, eval_flags, ef, Task::LinkPrediction);
        else if (*eval_tie) run_eval(common, eval_flags, ef, Task::TieStrength);
        else if (*cv) run_cv(common, cv_flags, cf);
        return Ok;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return DataFailure;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return DataFailure;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ConfigFailure;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return InternalFailure;
    }
}
