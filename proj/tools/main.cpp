// kronlearn command-line tool: simulate, train, predict, evaluate,
// cross-validate and benchmark Kronecker-product kernel machines on labeled
// bipartite graphs. Reports are tab-separated text on stdout; lines starting
// with '#' echo the fully resolved configuration.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kronlearn/data.hpp"
#include "kronlearn/error.hpp"
#include "kronlearn/learners.hpp"
#include "kronlearn/model.hpp"
#include "kronlearn/rng.hpp"

namespace {

using namespace kronlearn;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 42;

void echo(const std::string& key, const std::string& value) {
    std::cout << "# " << key << '\t' << value << '\n';
}

void echo(const std::string& key, double value) {
    std::ostringstream out;
    out << value;
    echo(key, out.str());
}

void echo(const std::string& key, std::uint64_t value) { echo(key, std::to_string(value)); }

std::string format_auc(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::uint64_t m = 100, q = 100;
    double density = 0.25;
    double flip_prob = 0.2;
    std::uint64_t seed = kDefaultSeed;
    std::string out_prefix;
};

int run_simulate(const SimulateArgs& args) {
    if (!(args.density > 0.0 && args.density <= 1.0)) {
        throw UsageError("--density must be in (0, 1]");
    }
    if (!(args.flip_prob >= 0.0 && args.flip_prob < 0.5)) {
        throw UsageError("--flip-prob must be in [0, 0.5)");
    }
    echo("command", "simulate");
    echo("m", args.m);
    echo("q", args.q);
    echo("density", args.density);
    echo("flip_prob", args.flip_prob);
    echo("seed", args.seed);
    echo("out_prefix", args.out_prefix);

    const BipartiteDataset data =
        generate_checkerboard(args.m, args.q, args.density, args.flip_prob, args.seed);
    const std::string start_path = args.out_prefix + "_start.txt";
    const std::string end_path = args.out_prefix + "_end.txt";
    const std::string edge_path = args.out_prefix + "_edges.txt";
    save_dataset(data, start_path, end_path, edge_path);

    Index positives = 0;
    for (Index h = 0; h < data.edge_count(); ++h) positives += data.labels[h] > 0 ? 1 : 0;
    std::cout << "edges\t" << data.edge_count() << '\n';
    std::cout << "positives\t" << positives << '\n';
    std::cout << "negatives\t" << data.edge_count() - positives << '\n';
    std::cout << "files\t" << start_path << '\t' << end_path << '\t' << edge_path << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
    std::string start_path, end_path, edge_path;
    std::string loss = "l2svm";
    std::string mode = "dual";
    std::string kernel = "linear";
    double lambda = 1e-4;
    std::uint64_t outer = 10, inner = 10;
    double delta = 1.0;
    double tol = 1e-6;
    std::uint64_t seed = kDefaultSeed;
    std::string model_out;
    std::vector<std::string> early_stop_files;
    std::uint64_t patience = 2;
    double truncate_eps = -1.0;
};

TrainConfig build_train_config(const TrainArgs& args) {
    TrainConfig cfg;
    try {
        cfg.loss = parse_loss_kind(args.loss);
        const KernelSpec spec = parse_kernel_spec(args.kernel);
        cfg.start_kernel = spec;
        cfg.end_kernel = spec;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (cfg.loss == LossKind::l1svm) {
        throw UsageError(
            "--loss l1svm is not trainable: its generalized Hessian is identically zero, so "
            "the truncated Newton framework has no curvature to work with (use l2svm)");
    }
    if (args.mode != "dual" && args.mode != "primal") {
        throw UsageError("--mode must be dual or primal");
    }
    if (args.mode == "primal" && cfg.start_kernel.kind != KernelKind::linear) {
        throw UsageError("--mode primal requires --kernel linear (explicit feature space)");
    }
    if (!(args.lambda > 0.0)) throw UsageError("--lambda must be positive");
    if (args.inner < 1 || args.outer < 1) throw UsageError("--outer and --inner must be >= 1");
    if (!(args.delta > 0.0)) throw UsageError("--delta must be positive");
    cfg.lambda = args.lambda;
    cfg.outer_iters = args.outer;
    cfg.inner_iters = args.inner;
    cfg.step_size = args.delta;
    cfg.tol = args.tol;
    if (!args.early_stop_files.empty()) {
        if (args.early_stop_files.size() != 3) {
            throw UsageError("--early-stop-files expects three paths: start end edges");
        }
        EarlyStopConfig es;
        es.validation = load_dataset(args.early_stop_files[0], args.early_stop_files[1],
                                     args.early_stop_files[2]);
        es.patience = args.patience;
        cfg.early_stop = std::move(es);
    }
    return cfg;
}

void echo_train_config(const TrainArgs& args, const char* command) {
    echo("command", command);
    echo("loss", args.loss);
    echo("mode", args.mode);
    echo("kernel", args.kernel);
    echo("lambda", args.lambda);
    echo("outer", args.outer);
    echo("inner", args.inner);
    echo("delta", args.delta);
    echo("tol", args.tol);
    echo("seed", args.seed);
}

struct KernelPair {
    DenseMatrix K, G;
};

KernelPair training_kernels(const BipartiteDataset& data, const TrainConfig& cfg) {
    KernelPair pair;
    if (cfg.start_kernel.kind == KernelKind::precomputed) {
        check_symmetric(data.start_features, 1e-8, "precomputed start kernel");
        check_symmetric(data.end_features, 1e-8, "precomputed end kernel");
        pair.K = data.start_features;
        pair.G = data.end_features;
    } else {
        pair.K = kernel_matrix(data.start_features, data.start_features, cfg.start_kernel);
        pair.G = kernel_matrix(data.end_features, data.end_features, cfg.end_kernel);
    }
    return pair;
}

TrainedModel train_once(const BipartiteDataset& data, const TrainConfig& cfg, bool primal,
                        TrainReport* report) {
    if (primal) {
        // Ridge without early stopping is the closed one-shot system; with a
        // validation set it runs through the Newton loop so rounds can be
        // scored and snapshotted.
        if (cfg.loss == LossKind::ridge && !cfg.early_stop) {
            return train_ridge_primal(data, cfg, report);
        }
        return train_newton_primal(data, cfg, report);
    }
    const KernelPair kernels = training_kernels(data, cfg);
    if (cfg.loss == LossKind::ridge && !cfg.early_stop) {
        return train_ridge_dual(data, kernels.K, kernels.G, cfg, report);
    }
    return train_newton_dual(data, kernels.K, kernels.G, cfg, report);
}

int run_train(const TrainArgs& args) {
    TrainConfig cfg = build_train_config(args);
    echo_train_config(args, "train");
    if (cfg.early_stop) {
        echo("early_stop_patience", args.patience);
        echo("early_stop_edges",
             static_cast<std::uint64_t>(cfg.early_stop->validation.edge_count()));
    }

    const BipartiteDataset data = load_dataset(args.start_path, args.end_path, args.edge_path);
    echo("train_edges", static_cast<std::uint64_t>(data.edge_count()));
    echo("start_vertices", static_cast<std::uint64_t>(data.start_count()));
    echo("end_vertices", static_cast<std::uint64_t>(data.end_count()));

    TrainReport report;
    TrainedModel model = train_once(data, cfg, args.mode == "primal", &report);

    if (cfg.early_stop) {
        std::cout << "iter\tobjective\tval_auc\n";
        for (Index i = 0; i < report.objective_history.size(); ++i) {
            std::cout << i + 1 << '\t' << report.objective_history[i] << '\t'
                      << format_auc(report.validation_auc_history[i]) << '\n';
        }
        echo("stopped_early", report.stopped_early ? "true" : "false");
        echo("best_round", static_cast<std::uint64_t>(report.best_round + 1));
    } else {
        std::cout << "iter\tobjective\n";
        for (Index i = 0; i < report.objective_history.size(); ++i) {
            std::cout << i + 1 << '\t' << report.objective_history[i] << '\n';
        }
    }
    echo("solver_iterations", static_cast<std::uint64_t>(report.solver_iterations));

    if (args.truncate_eps >= 0.0) {
        auto* dual = std::get_if<DualModel>(&model);
        if (!dual) throw UsageError("--truncate-eps applies to dual models only");
        const Index zeroed = truncate_coefficients(*dual, args.truncate_eps);
        echo("truncated_coefficients", static_cast<std::uint64_t>(zeroed));
    }
    if (!args.model_out.empty()) {
        save_model(model, args.model_out);
        echo("model_saved", args.model_out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// predict / evaluate

struct PredictArgs {
    std::string start_path, end_path, edge_path;
    std::string model_path, out_path;
};

int run_predict(const PredictArgs& args) {
    echo("command", "predict");
    echo("model", args.model_path);
    echo("out", args.out_path);

    const TrainedModel model = load_model(args.model_path);
    PredictionRequest request;
    request.start_features = load_matrix_file(args.start_path);
    request.end_features = load_matrix_file(args.end_path);
    request.edges = load_edge_file(args.edge_path).edges;

    const DenseVector scores = predict(model, request);
    std::ofstream out(args.out_path);
    if (!out) throw DataError("cannot open '" + args.out_path + "' for writing");
    for (Index h = 0; h < scores.size(); ++h) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), scores[h]);
        out.write(buf, res.ptr - buf);
        out.put('\n');
    }
    if (!out) throw DataError("failed writing '" + args.out_path + "'");
    std::cout << "scores_written\t" << scores.size() << '\n';
    return 0;
}

struct EvaluateArgs {
    std::string scores_path, labels_path;
};

int run_evaluate(const EvaluateArgs& args) {
    echo("command", "evaluate");
    echo("scores", args.scores_path);
    echo("labels", args.labels_path);

    const DenseMatrix score_rows = load_matrix_file(args.scores_path);
    if (score_rows.cols() != 1) {
        throw DataError("scores file must have one score per line, found " +
                        std::to_string(score_rows.cols()) + " columns");
    }
    const DenseVector scores(score_rows.values());

    // Labels: either one per line or the third column of an edge file.
    const DenseMatrix label_rows = load_matrix_file(args.labels_path);
    DenseVector labels(label_rows.rows());
    if (label_rows.cols() == 1) {
        labels = DenseVector(label_rows.values());
    } else if (label_rows.cols() == 3) {
        for (Index r = 0; r < label_rows.rows(); ++r) labels[r] = label_rows(r, 2);
    } else {
        throw DataError("labels file must have 1 column (labels) or 3 (edge list)");
    }

    std::cout << format_auc(auc(scores, labels)) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// cv

struct CvArgs {
    TrainArgs train;
    std::uint64_t folds = 3;
    std::uint64_t jobs = 1;
};

struct CvRoundResult {
    Index round = 0;
    Index test_start_fold = 0, test_end_fold = 0;
    Index train_count = 0, test_count = 0;
    bool defined = false;
    double auc_value = 0.0;
    std::vector<double> scores;
    std::vector<double> labels;
};

BipartiteDataset edge_subset(const BipartiteDataset& data, const std::vector<Index>& edges) {
    BipartiteDataset subset;
    subset.start_features = data.start_features;
    subset.end_features = data.end_features;
    for (const Index h : edges) {
        subset.edges.push_back(data.edges.first[h], data.edges.second[h]);
        subset.labels.values().push_back(data.labels[h]);
    }
    return subset;
}

int run_cv(const CvArgs& args) {
    TrainConfig cfg = build_train_config(args.train);
    if (args.folds < 2) throw UsageError("--folds must be >= 2");
    echo_train_config(args.train, "cv");
    echo("folds", args.folds);
    echo("jobs", args.jobs);

    const BipartiteDataset data =
        load_dataset(args.train.start_path, args.train.end_path, args.train.edge_path);
    echo("edges", static_cast<std::uint64_t>(data.edge_count()));
    const SplitPlan plan = vertex_disjoint_split(data, args.folds, args.folds, args.train.seed);
    const bool primal = args.train.mode == "primal";

    const auto run_round = [&](Index r) {
        const SplitPlan::Round& round = plan.rounds[r];
        CvRoundResult result;
        result.round = r;
        result.test_start_fold = round.test_start_fold;
        result.test_end_fold = round.test_end_fold;
        result.train_count = round.train_edges.size();
        result.test_count = round.test_edges.size();
        if (round.train_edges.empty() || round.test_edges.empty()) return result;

        const BipartiteDataset train_data = edge_subset(data, round.train_edges);
        const TrainedModel model = train_once(train_data, cfg, primal, nullptr);

        // Under a precomputed kernel the full training matrices double as the
        // rectangular blocks for every vertex; with feature kernels the
        // features themselves are the request.
        PredictionRequest request;
        request.start_features = data.start_features;
        request.end_features = data.end_features;
        for (const Index h : round.test_edges) {
            request.edges.push_back(data.edges.first[h], data.edges.second[h]);
        }
        const DenseVector scores = predict(model, request);
        result.scores.assign(scores.values().begin(), scores.values().end());
        for (const Index h : round.test_edges) result.labels.push_back(data.labels[h]);

        bool has_pos = false, has_neg = false;
        for (const double y : result.labels) {
            has_pos = has_pos || y == 1.0;
            has_neg = has_neg || y == -1.0;
        }
        if (has_pos && has_neg) {
            result.defined = true;
            result.auc_value = auc(scores, DenseVector(std::vector<double>(result.labels)));
        }
        return result;
    };

    std::vector<CvRoundResult> results(plan.rounds.size());
    if (args.jobs <= 1) {
        for (Index r = 0; r < plan.rounds.size(); ++r) results[r] = run_round(r);
    } else {
        std::vector<std::future<CvRoundResult>> futures;
        futures.reserve(plan.rounds.size());
        for (Index r = 0; r < plan.rounds.size(); ++r) {
            futures.push_back(std::async(std::launch::async, run_round, r));
        }
        for (Index r = 0; r < plan.rounds.size(); ++r) results[r] = futures[r].get();
    }

    std::cout << "round\tstart_fold\tend_fold\ttrain_edges\ttest_edges\tauc\n";
    double auc_sum = 0.0;
    Index defined_rounds = 0;
    std::vector<double> pooled_scores, pooled_labels;
    for (const CvRoundResult& result : results) {
        std::cout << result.round + 1 << '\t' << result.test_start_fold << '\t'
                  << result.test_end_fold << '\t' << result.train_count << '\t'
                  << result.test_count << '\t'
                  << (result.defined ? format_auc(result.auc_value) : "nan") << '\n';
        if (result.defined) {
            auc_sum += result.auc_value;
            ++defined_rounds;
        }
        pooled_scores.insert(pooled_scores.end(), result.scores.begin(), result.scores.end());
        pooled_labels.insert(pooled_labels.end(), result.labels.begin(), result.labels.end());
    }
    std::cout << "mean_auc\t"
              << (defined_rounds ? format_auc(auc_sum / static_cast<double>(defined_rounds))
                                 : "nan")
              << '\n';
    bool has_pos = false, has_neg = false;
    for (const double y : pooled_labels) {
        has_pos = has_pos || y == 1.0;
        has_neg = has_neg || y == -1.0;
    }
    std::cout << "pooled_auc\t"
              << (has_pos && has_neg
                      ? format_auc(auc(DenseVector(std::move(pooled_scores)),
                                       DenseVector(std::move(pooled_labels))))
                      : "nan")
              << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::string sizes = "4000,40000";
    std::string mode = "fast";
    std::uint64_t m = 200, q = 200;
    std::uint64_t reps = 5;
    std::uint64_t seed = kDefaultSeed;
    double naive_guard = 4e9;
};

std::vector<Index> parse_sizes(const std::string& text) {
    std::vector<Index> sizes;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            const long long value = std::stoll(item);
            if (value < 1) throw UsageError("--sizes entries must be positive");
            sizes.push_back(static_cast<Index>(value));
        } catch (const std::invalid_argument&) {
            throw UsageError("cannot parse --sizes entry '" + item + "'");
        } catch (const std::out_of_range&) {
            throw UsageError("--sizes entry '" + item + "' out of range");
        }
    }
    if (sizes.empty()) throw UsageError("--sizes is empty");
    return sizes;
}

DenseMatrix random_symmetric(Rng& rng, Index n) {
    DenseMatrix a(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            const double value = rng.uniform(-1.0, 1.0);
            a(i, j) = value;
            a(j, i) = value;
        }
    }
    return a;
}

int run_bench(const BenchArgs& args) {
    if (args.mode != "fast" && args.mode != "naive") {
        throw UsageError("--mode must be fast or naive");
    }
    const std::vector<Index> sizes = parse_sizes(args.sizes);
    echo("command", "bench");
    echo("mode", args.mode);
    echo("m", args.m);
    echo("q", args.q);
    echo("sizes", args.sizes);
    echo("reps", args.reps);
    echo("seed", args.seed);
    if (args.mode == "naive") echo("naive_guard", args.naive_guard);

    Rng rng(args.seed);
    const DenseMatrix K = random_symmetric(rng, args.m);
    const DenseMatrix G = random_symmetric(rng, args.q);

    std::cout << "n\tseconds\n";
    for (const Index n : sizes) {
        // Training-shaped operator: the same edge set on both sides.
        EdgeIndexSeq edges;
        edges.first.reserve(n);
        edges.second.reserve(n);
        for (Index h = 0; h < n; ++h) {
            edges.push_back(rng.uniform_index(args.q), rng.uniform_index(args.m));
        }
        DenseVector v(n);
        for (Index h = 0; h < n; ++h) v[h] = rng.uniform(-1.0, 1.0);

        if (args.mode == "naive" &&
            static_cast<double>(n) * static_cast<double>(n) > args.naive_guard) {
            std::cout << n << "\tskipped\n";
            continue;
        }

        const SampledKronOperator op(G, K, edges, edges);
        KronWorkspace ws;
        double best = std::numeric_limits<double>::infinity();
        double sink = 0.0;
        for (Index rep = 0; rep < std::max<std::uint64_t>(1, args.reps); ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const DenseVector u = args.mode == "fast" ? sampled_kron_matvec(op, v, &ws)
                                                      : sampled_kron_matvec_direct(op, v);
            const auto stop = std::chrono::steady_clock::now();
            sink += u[0];
            best = std::min(best, std::chrono::duration<double>(stop - start).count());
        }
        if (!std::isfinite(sink)) throw NumericalError("bench: non-finite product");
        std::cout << n << '\t' << best << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "kronlearn: matrix-free Kronecker-product kernel machines for bipartite graphs"};
    app.require_subcommand(1);

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Generate a checkerboard dataset");
    simulate->add_option("--m", simulate_args.m, "Number of start vertices")->required();
    simulate->add_option("--q", simulate_args.q, "Number of end vertices")->required();
    simulate->add_option("--density", simulate_args.density,
                         "Fraction of the m*q edges that receive labels");
    simulate->add_option("--flip-prob", simulate_args.flip_prob, "Label flip probability");
    simulate->add_option("--seed", simulate_args.seed, "RNG seed");
    simulate->add_option("--out-prefix", simulate_args.out_prefix, "Output file prefix")
        ->required();

    const auto add_train_options = [](CLI::App* cmd, TrainArgs& args) {
        cmd->add_option("start", args.start_path, "Start-vertex feature (or kernel) file")
            ->required();
        cmd->add_option("end", args.end_path, "End-vertex feature (or kernel) file")->required();
        cmd->add_option("edges", args.edge_path, "Edge list file: start end label")->required();
        cmd->add_option("--loss", args.loss, "ridge | l2svm | logistic | rankrls");
        cmd->add_option("--mode", args.mode, "dual | primal");
        cmd->add_option("--kernel", args.kernel, "linear | gaussian:<gamma> | precomputed");
        cmd->add_option("--lambda", args.lambda, "Regularization strength");
        cmd->add_option("--outer", args.outer, "Outer Newton iterations");
        cmd->add_option("--inner", args.inner, "Inner solver iterations per Newton step");
        cmd->add_option("--delta", args.delta, "Newton step size");
        cmd->add_option("--tol", args.tol, "Inner solver relative-residual tolerance");
        cmd->add_option("--seed", args.seed, "RNG seed (echoed; training is deterministic)");
    };

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Train a model");
    add_train_options(train, train_args);
    train->add_option("--model-out", train_args.model_out, "Where to write the trained model");
    train
        ->add_option("--early-stop-files", train_args.early_stop_files,
                     "Validation dataset: start end edges")
        ->expected(3);
    train->add_option("--patience", train_args.patience,
                      "Stop after this many rounds without validation AUC improvement");
    train->add_option("--truncate-eps", train_args.truncate_eps,
                      "Zero dual coefficients with |a_i| <= eps after training");

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "Score edges with a trained model");
    predict_cmd
        ->add_option("start", predict_args.start_path, "Start-vertex features or kernel block")
        ->required();
    predict_cmd->add_option("end", predict_args.end_path, "End-vertex features or kernel block")
        ->required();
    predict_cmd->add_option("edges", predict_args.edge_path, "Edges to score: start end [label]")
        ->required();
    predict_cmd->add_option("--model", predict_args.model_path, "Model file")->required();
    predict_cmd->add_option("--out", predict_args.out_path, "Score output file, one per line")
        ->required();

    EvaluateArgs evaluate_args;
    auto* evaluate = app.add_subcommand("evaluate", "Compute AUC from scores and labels");
    evaluate->add_option("--scores", evaluate_args.scores_path, "Score file, one per line")
        ->required();
    evaluate
        ->add_option("--labels", evaluate_args.labels_path,
                     "Label file: one label per line, or an edge file with labels")
        ->required();

    CvArgs cv_args;
    auto* cv = app.add_subcommand("cv", "Vertex-disjoint cross-validation");
    add_train_options(cv, cv_args.train);
    cv->add_option("--folds", cv_args.folds, "Folds per vertex side (3 gives nine rounds)");
    cv->add_option("--jobs", cv_args.jobs, "Rounds trained concurrently");
    cv->add_option("--early-stop-files", cv_args.train.early_stop_files,
                   "Validation dataset applied to every round: start end edges")
        ->expected(3);
    cv->add_option("--patience", cv_args.train.patience,
                   "Stop a round after this many rounds without validation AUC improvement");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Time the sampled Kronecker matvec");
    bench->add_option("--sizes", bench_args.sizes, "Comma-separated edge counts");
    bench->add_option("--mode", bench_args.mode, "fast | naive");
    bench->add_option("--m", bench_args.m, "Start vertices");
    bench->add_option("--q", bench_args.q, "End vertices");
    bench->add_option("--reps", bench_args.reps, "Repetitions per size (best time reported)");
    bench->add_option("--seed", bench_args.seed, "RNG seed");
    bench->add_option("--naive-guard", bench_args.naive_guard,
                      "Skip naive timings whose n^2 work exceeds this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "kronlearn: " << e.what() << '\n';
        return 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(simulate_args);
        if (train->parsed()) return run_train(train_args);
        if (predict_cmd->parsed()) return run_predict(predict_args);
        if (evaluate->parsed()) return run_evaluate(evaluate_args);
        if (cv->parsed()) return run_cv(cv_args);
        if (bench->parsed()) return run_bench(bench_args);
        std::cerr << "kronlearn: no subcommand\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "kronlearn: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "kronlearn: numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "kronlearn: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "kronlearn: " << e.what() << '\n';
        return 2;
    }
}
