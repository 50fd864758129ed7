#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kronlearn/data.hpp"
#include "kronlearn/model.hpp"

using namespace kronlearn;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(KRONLEARN_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    while (fgets(buf, sizeof(buf), pipe)) result.output += buf;
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path work_dir() {
    static const std::filesystem::path dir = [] {
        auto path = std::filesystem::temp_directory_path() /
                    ("kronlearn_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
        return path;
    }();
    return dir;
}

std::string wfile(const std::string& name) { return (work_dir() / name).string(); }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Index count_lines(const std::string& text) {
    Index lines = 0;
    for (const char c : text) lines += c == '\n' ? 1 : 0;
    return lines;
}

std::string last_line(const std::string& text) {
    std::istringstream in(text);
    std::string line, last;
    while (std::getline(in, line)) {
        if (!line.empty()) last = line;
    }
    return last;
}

// Pulls "key<TAB>value" report rows (both '#'-echoed and plain).
std::string report_value(const std::string& output, const std::string& key) {
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# " + key + "\t", 0) == 0) return line.substr(key.size() + 3);
        if (line.rfind(key + "\t", 0) == 0) return line.substr(key.size() + 1);
    }
    return "";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes the dataset and is usage-checked") {
    const auto result = run_cli("simulate --m 10 --q 10 --density 0.25 --seed 3 --out-prefix " +
                                wfile("toy"));
    CHECK(result.exit_code == 0);
    CHECK(report_value(result.output, "edges") == "25");
    CHECK(count_lines(read_file(wfile("toy_edges.txt"))) == 25);
    CHECK(count_lines(read_file(wfile("toy_start.txt"))) == 10);

    const auto bad = run_cli("simulate --m 10 --q 10 --density 0 --out-prefix " + wfile("bad"));
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("density") != std::string::npos);
}

TEST_CASE("simulate is byte-identical under a fixed seed") {
    const std::string args = "simulate --m 8 --q 9 --density 0.5 --seed 77 --out-prefix ";
    CHECK(run_cli(args + wfile("rep1")).exit_code == 0);
    CHECK(run_cli(args + wfile("rep2")).exit_code == 0);
    for (const char* suffix : {"_start.txt", "_end.txt", "_edges.txt"}) {
        CHECK(read_file(wfile("rep1") + suffix) == read_file(wfile("rep2") + suffix));
    }
}

TEST_CASE("ridge training on the one-edge toy recovers the scalar solution") {
    {
        std::ofstream(wfile("one_start.txt")) << "2\n";
        std::ofstream(wfile("one_end.txt")) << "3\n";
        std::ofstream(wfile("one_edges.txt")) << "0 0 5\n";
    }
    const auto result = run_cli("train " + wfile("one_start.txt") + " " + wfile("one_end.txt") +
                                " " + wfile("one_edges.txt") +
                                " --loss ridge --lambda 0.5 --model-out " + wfile("one.txt"));
    CHECK(result.exit_code == 0);
    const TrainedModel model = load_model(wfile("one.txt"));
    const auto& dual = std::get<DualModel>(model);
    CHECK(dual.coefficients[0] == doctest::Approx(5.0 / 36.5).epsilon(1e-9));
}

TEST_CASE("l1svm is rejected with the zero-Hessian explanation") {
    const auto result = run_cli("train " + wfile("one_start.txt") + " " + wfile("one_end.txt") +
                                " " + wfile("one_edges.txt") + " --loss l1svm");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("generalized Hessian") != std::string::npos);
}

TEST_CASE("primal mode requires the linear kernel") {
    const std::string data = wfile("one_start.txt") + " " + wfile("one_end.txt") + " " +
                             wfile("one_edges.txt");
    CHECK(run_cli("train " + data + " --mode primal --kernel gaussian:1").exit_code == 1);
    CHECK(run_cli("train " + data + " --mode primal --kernel precomputed").exit_code == 1);
}

TEST_CASE("a zero model scores everything zero and ties evaluate to 0.5") {
    DualModel zero;
    zero.start_vertices = DenseMatrix{{1.0}, {2.0}};
    zero.end_vertices = DenseMatrix{{1.0}, {2.0}};
    zero.edges.push_back(0, 0);
    zero.edges.push_back(1, 1);
    zero.coefficients = DenseVector(2);
    zero.start_count = 2;
    zero.end_count = 2;
    save_model(TrainedModel{zero}, wfile("zero_model.txt"));
    {
        std::ofstream(wfile("req_start.txt")) << "4\n5\n";
        std::ofstream(wfile("req_end.txt")) << "6\n7\n";
        std::ofstream(wfile("req_edges.txt")) << "0 0 1\n0 1 -1\n1 0 1\n1 1 -1\n";
    }
    const auto predicted = run_cli("predict " + wfile("req_start.txt") + " " +
                                   wfile("req_end.txt") + " " + wfile("req_edges.txt") +
                                   " --model " + wfile("zero_model.txt") + " --out " +
                                   wfile("zero_scores.txt"));
    CHECK(predicted.exit_code == 0);
    CHECK(read_file(wfile("zero_scores.txt")) == "0\n0\n0\n0\n");

    const auto evaluated = run_cli("evaluate --scores " + wfile("zero_scores.txt") +
                                   " --labels " + wfile("req_edges.txt"));
    CHECK(evaluated.exit_code == 0);
    CHECK(last_line(evaluated.output) == "0.5000");
}

TEST_CASE("evaluate prints 1.0000 on a perfect ranking") {
    {
        std::ofstream(wfile("perfect_scores.txt")) << "0.9\n-0.2\n0.8\n-0.5\n";
        std::ofstream(wfile("perfect_labels.txt")) << "1\n-1\n1\n-1\n";
    }
    const auto result = run_cli("evaluate --scores " + wfile("perfect_scores.txt") +
                                " --labels " + wfile("perfect_labels.txt"));
    CHECK(result.exit_code == 0);
    CHECK(last_line(result.output) == "1.0000");
}

TEST_CASE("predict then evaluate reproduces the in-process AUC exactly") {
    const std::string train_prefix = wfile("pipe_train");
    const std::string test_prefix = wfile("pipe_test");
    REQUIRE(run_cli("simulate --m 60 --q 60 --density 0.5 --seed 21 --out-prefix " + train_prefix)
                .exit_code == 0);
    REQUIRE(run_cli("simulate --m 40 --q 40 --density 0.5 --seed 22 --out-prefix " + test_prefix)
                .exit_code == 0);
    REQUIRE(run_cli("train " + train_prefix + "_start.txt " + train_prefix + "_end.txt " +
                    train_prefix + "_edges.txt --loss l2svm --kernel gaussian:0.1 --lambda 0.01 " +
                    "--model-out " + wfile("pipe_model.txt"))
                .exit_code == 0);
    REQUIRE(run_cli("predict " + test_prefix + "_start.txt " + test_prefix + "_end.txt " +
                    test_prefix + "_edges.txt --model " + wfile("pipe_model.txt") + " --out " +
                    wfile("pipe_scores.txt"))
                .exit_code == 0);
    const auto evaluated = run_cli("evaluate --scores " + wfile("pipe_scores.txt") +
                                   " --labels " + test_prefix + "_edges.txt");
    CHECK(evaluated.exit_code == 0);

    const TrainedModel model = load_model(wfile("pipe_model.txt"));
    const BipartiteDataset test = load_dataset(test_prefix + "_start.txt",
                                               test_prefix + "_end.txt",
                                               test_prefix + "_edges.txt");
    PredictionRequest request;
    request.start_features = test.start_features;
    request.end_features = test.end_features;
    request.edges = test.edges;
    const double in_process = auc(predict(model, request), test.labels);
    char expected[32];
    std::snprintf(expected, sizeof(expected), "%.4f", in_process);
    CHECK(last_line(evaluated.output) == expected);
}

TEST_CASE("train logs one objective row per outer round") {
    const auto result = run_cli("train " + wfile("pipe_train") + "_start.txt " +
                                wfile("pipe_train") + "_end.txt " + wfile("pipe_train") +
                                "_edges.txt --loss l2svm --kernel gaussian:1 " +
                                "--lambda 0.0078125 --outer 10 --inner 10");
    CHECK(result.exit_code == 0);
    Index objective_rows = 0;
    std::istringstream in(result.output);
    std::string line;
    bool in_table = false;
    while (std::getline(in, line)) {
        if (line == "iter\tobjective") {
            in_table = true;
        } else if (in_table && !line.empty() && line[0] != '#') {
            ++objective_rows;
        } else if (in_table) {
            break;
        }
    }
    CHECK(objective_rows == 10);
}

TEST_CASE("training with early-stop files logs validation AUC per round") {
    const std::string val_prefix = wfile("pipe_val");
    REQUIRE(run_cli("simulate --m 30 --q 30 --density 0.5 --seed 23 --out-prefix " + val_prefix)
                .exit_code == 0);
    const auto result = run_cli(
        "train " + wfile("pipe_train") + "_start.txt " + wfile("pipe_train") + "_end.txt " +
        wfile("pipe_train") + "_edges.txt --loss l2svm --kernel gaussian:0.1 --lambda 0.01 " +
        "--outer 8 --early-stop-files " + val_prefix + "_start.txt " + val_prefix + "_end.txt " +
        val_prefix + "_edges.txt --patience 2");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("iter\tobjective\tval_auc") != std::string::npos);
    CHECK(report_value(result.output, "stopped_early") != "");
    CHECK(report_value(result.output, "best_round") != "");
}

TEST_CASE("cv reports nine rounds and is deterministic") {
    const std::string prefix = wfile("cv_data");
    REQUIRE(run_cli("simulate --m 24 --q 24 --density 0.6 --seed 31 --out-prefix " + prefix)
                .exit_code == 0);
    const std::string cmd = "cv " + prefix + "_start.txt " + prefix + "_end.txt " + prefix +
                            "_edges.txt --loss ridge --kernel gaussian:0.1 --lambda 0.01 " +
                            "--folds 3 --seed 4";
    const auto first = run_cli(cmd);
    CHECK(first.exit_code == 0);
    Index round_rows = 0;
    std::istringstream in(first.output);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] >= '1' && line[0] <= '9' &&
            line.find('\t') != std::string::npos) {
            ++round_rows;
        }
    }
    CHECK(round_rows == 9);
    CHECK(first.output.find("mean_auc\t") != std::string::npos);
    CHECK(first.output.find("pooled_auc\t") != std::string::npos);

    const auto second = run_cli(cmd);
    CHECK(second.output == first.output);

    // Round-ordered output buffering keeps parallel runs identical too.
    const auto parallel = run_cli(cmd + " --jobs 4");
    std::string serial_body = first.output, parallel_body = parallel.output;
    const auto strip_jobs = [](std::string& text) {
        std::istringstream stream(text);
        std::string out, row;
        while (std::getline(stream, row)) {
            if (row.rfind("# jobs", 0) != 0) out += row + "\n";
        }
        text = out;
    };
    strip_jobs(serial_body);
    strip_jobs(parallel_body);
    CHECK(serial_body == parallel_body);
}

TEST_CASE("cv on the clean checkerboard clears the desk-scale bar") {
    const std::string prefix = wfile("cv_desk");
    REQUIRE(run_cli("simulate --m 200 --q 200 --density 1.0 --flip-prob 0 --seed 5 "
                    "--out-prefix " + prefix)
                .exit_code == 0);
    const auto result = run_cli("cv " + prefix + "_start.txt " + prefix + "_end.txt " + prefix +
                                "_edges.txt --loss l2svm --kernel gaussian:3 "
                                "--lambda 0.0078125 --folds 3 --seed 9 --jobs 4");
    CHECK(result.exit_code == 0);
    const double mean_auc = std::stod(report_value(result.output, "mean_auc"));
    CHECK(mean_auc >= 0.6);
}

TEST_CASE("bench emits one row per requested size and flags skipped naive rows") {
    const auto fast = run_cli("bench --sizes 500,1000,2000 --mode fast --m 50 --q 50 --reps 2");
    CHECK(fast.exit_code == 0);
    Index rows = 0;
    std::istringstream in(fast.output);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("500\t", 0) == 0 || line.rfind("1000\t", 0) == 0 ||
            line.rfind("2000\t", 0) == 0) {
            ++rows;
        }
    }
    CHECK(rows == 3);

    const auto naive = run_cli(
        "bench --sizes 500,4000 --mode naive --m 50 --q 50 --reps 2 --naive-guard 1000000");
    CHECK(naive.exit_code == 0);
    CHECK(naive.output.find("4000\tskipped") != std::string::npos);
    CHECK(naive.output.find("500\tskipped") == std::string::npos);
}

TEST_CASE("exit codes distinguish usage and data errors") {
    CHECK(run_cli("train missing_a missing_b missing_c").exit_code == 2);
    CHECK(run_cli("train").exit_code == 1);
    CHECK(run_cli("nonsense").exit_code == 1);
    CHECK(run_cli("predict " + wfile("req_start.txt") + " " + wfile("req_end.txt") + " " +
                  wfile("req_edges.txt") + " --model " + wfile("does_not_exist.txt") + " --out " +
                  wfile("x.txt"))
              .exit_code == 2);
}

TEST_CASE("model and request dimension mismatches exit nonzero") {
    {
        std::ofstream(wfile("wide_start.txt")) << "1 2 3\n4 5 6\n";
    }
    const auto result = run_cli("predict " + wfile("wide_start.txt") + " " + wfile("req_end.txt") +
                                " " + wfile("req_edges.txt") + " --model " +
                                wfile("zero_model.txt") + " --out " + wfile("y.txt"));
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("dim") != std::string::npos);
}

}  // TEST_SUITE
