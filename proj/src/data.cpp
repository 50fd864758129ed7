#include "kronlearn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "kronlearn/error.hpp"
#include "kronlearn/rng.hpp"

namespace kronlearn {

void BipartiteDataset::validate() const {
    if (edge_count() == 0) throw DataError("dataset has no edges");
    if (labels.size() != edge_count()) {
        throw DataError("dataset has " + std::to_string(edge_count()) + " edges but " +
                        std::to_string(labels.size()) + " labels");
    }
    edges.validate(start_count(), end_count(), "dataset edges");
    if (!all_finite(start_features) || !all_finite(end_features) || !all_finite(labels)) {
        throw DataError("dataset contains non-finite values");
    }
}

namespace {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& path, Index line_no) {
    double x = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), x);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw DataError(path + ":" + std::to_string(line_no) + ": cannot parse number '" + token +
                        "'");
    }
    if (!std::isfinite(x)) {
        throw DataError(path + ":" + std::to_string(line_no) + ": non-finite value '" + token +
                        "'");
    }
    return x;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

Index parse_index(const std::string& token, const std::string& path, Index line_no) {
    const double x = parse_double(token, path, line_no);
    if (x < 0 || x != std::floor(x)) {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": edge indices must be nonnegative integers, got '" + token + "'");
    }
    return static_cast<Index>(x);
}

}  // namespace

DenseMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature file '" + path + "'");
    std::vector<double> values;
    Index cols = 0, rows = 0, line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (rows == 0) {
            cols = tokens.size();
        } else if (tokens.size() != cols) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(cols) + " columns, found " +
                            std::to_string(tokens.size()));
        }
        for (const auto& tok : tokens) values.push_back(parse_double(tok, path, line_no));
        ++rows;
    }
    if (rows == 0) throw DataError("feature file '" + path + "' is empty");
    return DenseMatrix(rows, cols, std::move(values));
}

EdgeList load_edge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge file '" + path + "'");
    EdgeList list;
    std::vector<double> labels;
    std::string line;
    Index line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 2 && tokens.size() != 3) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected 'start end [label]', found " +
                            std::to_string(tokens.size()) + " fields");
        }
        const bool row_has_label = tokens.size() == 3;
        if (first_row) {
            list.has_labels = row_has_label;
            first_row = false;
        } else if (row_has_label != list.has_labels) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": label column must be present on every line or on none");
        }
        list.edges.push_back(parse_index(tokens[0], path, line_no),
                             parse_index(tokens[1], path, line_no));
        list.line_numbers.push_back(line_no);
        if (row_has_label) labels.push_back(parse_double(tokens[2], path, line_no));
    }
    if (list.edges.size() == 0) throw DataError("edge file '" + path + "' is empty");
    list.labels = DenseVector(std::move(labels));
    return list;
}

BipartiteDataset load_dataset(const std::string& start_path, const std::string& end_path,
                              const std::string& edge_path) {
    BipartiteDataset data;
    data.start_features = load_matrix_file(start_path);
    data.end_features = load_matrix_file(end_path);

    EdgeList list = load_edge_file(edge_path);
    if (!list.has_labels) {
        throw DataError("edge file '" + edge_path + "' has no label column");
    }
    for (Index h = 0; h < list.edges.size(); ++h) {
        if (list.edges.first[h] >= data.start_count() ||
            list.edges.second[h] >= data.end_count()) {
            throw DataError(edge_path + ":" + std::to_string(list.line_numbers[h]) +
                            ": edge (" + std::to_string(list.edges.first[h]) + "," +
                            std::to_string(list.edges.second[h]) + ") out of range for " +
                            std::to_string(data.start_count()) + " start / " +
                            std::to_string(data.end_count()) + " end vertices");
        }
    }
    data.edges = std::move(list.edges);
    data.labels = std::move(list.labels);
    data.validate();
    return data;
}

namespace {

void save_feature_file(const DenseMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
    if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace

void save_dataset(const BipartiteDataset& data, const std::string& start_path,
                  const std::string& end_path, const std::string& edge_path) {
    save_feature_file(data.start_features, start_path);
    save_feature_file(data.end_features, end_path);
    std::ofstream out(edge_path);
    if (!out) throw DataError("cannot open '" + edge_path + "' for writing");
    for (Index h = 0; h < data.edge_count(); ++h) {
        out << data.edges.first[h] << ' ' << data.edges.second[h] << ' '
            << format_double(data.labels[h]) << '\n';
    }
    if (!out) throw DataError("failed writing '" + edge_path + "'");
}

int checkerboard_clean_label(double d, double t) {
    const bool d_odd = static_cast<long long>(std::floor(d)) % 2 != 0;
    const bool t_odd = static_cast<long long>(std::floor(t)) % 2 != 0;
    return d_odd == t_odd ? 1 : -1;
}

BipartiteDataset generate_checkerboard(Index m, Index q, double density, double flip_prob,
                                       std::uint64_t seed) {
    if (!(density > 0.0 && density <= 1.0)) {
        throw std::invalid_argument("checkerboard: density must be in (0, 1], got " +
                                    std::to_string(density));
    }
    if (!(flip_prob >= 0.0 && flip_prob < 0.5)) {
        throw std::invalid_argument("checkerboard: flip probability must be in [0, 0.5), got " +
                                    std::to_string(flip_prob));
    }
    const Index total = m * q;
    const Index n = static_cast<Index>(std::llround(density * static_cast<double>(total)));
    if (n < 1) {
        throw std::invalid_argument("checkerboard: density " + std::to_string(density) + " on " +
                                    std::to_string(m) + "x" + std::to_string(q) +
                                    " yields no edges");
    }

    Rng rng(seed);
    BipartiteDataset data;
    data.start_features = DenseMatrix(m, 1);
    for (Index i = 0; i < m; ++i) data.start_features(i, 0) = rng.uniform(0.0, 100.0);
    data.end_features = DenseMatrix(q, 1);
    for (Index j = 0; j < q; ++j) data.end_features(j, 0) = rng.uniform(0.0, 100.0);

    // Distinct flat edge indices (flat = start * q + end), sampled without
    // replacement: partial Fisher-Yates over the flat space when dense enough,
    // rejection sampling otherwise. The Fisher-Yates array is virtual -- only
    // displaced slots are stored -- so memory stays O(n).
    std::vector<Index> flats;
    flats.reserve(n);
    if (density > 0.01) {
        std::unordered_map<Index, Index> displaced;
        displaced.reserve(2 * n);
        for (Index i = 0; i < n; ++i) {
            const Index j = i + rng.uniform_index(total - i);
            const auto it_j = displaced.find(j);
            const Index value_j = it_j == displaced.end() ? j : it_j->second;
            const auto it_i = displaced.find(i);
            const Index value_i = it_i == displaced.end() ? i : it_i->second;
            displaced[j] = value_i;
            flats.push_back(value_j);
        }
    } else {
        std::unordered_set<Index> seen;
        seen.reserve(2 * n);
        while (flats.size() < n) {
            const Index flat = rng.uniform_index(total);
            if (seen.insert(flat).second) flats.push_back(flat);
        }
    }

    std::vector<double> labels;
    labels.reserve(n);
    for (Index h = 0; h < n; ++h) {
        const Index start = flats[h] / q;
        const Index end = flats[h] % q;
        data.edges.push_back(start, end);
        int label = checkerboard_clean_label(data.start_features(start, 0),
                                             data.end_features(end, 0));
        if (rng.uniform01() < flip_prob) label = -label;
        labels.push_back(static_cast<double>(label));
    }
    data.labels = DenseVector(std::move(labels));
    return data;
}

SplitPlan vertex_disjoint_split(const BipartiteDataset& data, Index start_folds, Index end_folds,
                                std::uint64_t seed) {
    const Index m = data.start_count(), q = data.end_count();
    if (start_folds < 2 || end_folds < 2) {
        throw std::invalid_argument("vertex_disjoint_split: need at least 2 folds per side");
    }
    if (m < start_folds || q < end_folds) {
        throw std::invalid_argument("vertex_disjoint_split: " + std::to_string(m) + " start / " +
                                    std::to_string(q) + " end vertices cannot fill " +
                                    std::to_string(start_folds) + "x" +
                                    std::to_string(end_folds) + " folds");
    }

    Rng rng(seed);
    const auto assign_folds = [&rng](Index count, Index folds) {
        std::vector<Index> order(count);
        std::iota(order.begin(), order.end(), Index{0});
        for (Index i = count - 1; i > 0; --i) {
            const Index j = rng.uniform_index(i + 1);
            std::swap(order[i], order[j]);
        }
        std::vector<Index> fold(count);
        for (Index pos = 0; pos < count; ++pos) fold[order[pos]] = pos % folds;
        return fold;
    };

    SplitPlan plan;
    plan.start_folds = start_folds;
    plan.end_folds = end_folds;
    plan.start_fold = assign_folds(m, start_folds);
    plan.end_fold = assign_folds(q, end_folds);

    plan.rounds.resize(start_folds * end_folds);
    for (Index i = 0; i < start_folds; ++i) {
        for (Index j = 0; j < end_folds; ++j) {
            auto& round = plan.rounds[i * end_folds + j];
            round.test_start_fold = i;
            round.test_end_fold = j;
        }
    }
    for (Index h = 0; h < data.edge_count(); ++h) {
        const Index sf = plan.start_fold[data.edges.first[h]];
        const Index ef = plan.end_fold[data.edges.second[h]];
        for (Index i = 0; i < start_folds; ++i) {
            for (Index j = 0; j < end_folds; ++j) {
                auto& round = plan.rounds[i * end_folds + j];
                if (sf == i && ef == j) {
                    round.test_edges.push_back(h);
                } else if (sf != i && ef != j) {
                    round.train_edges.push_back(h);
                }
            }
        }
    }
    return plan;
}

double auc(const DenseVector& scores, const DenseVector& labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("auc: " + std::to_string(scores.size()) + " scores vs " +
                                    std::to_string(labels.size()) + " labels");
    }
    const Index n = scores.size();
    Index positives = 0, negatives = 0;
    for (Index i = 0; i < n; ++i) {
        if (labels[i] == 1.0) {
            ++positives;
        } else if (labels[i] == -1.0) {
            ++negatives;
        } else {
            throw DataError("auc: label at index " + std::to_string(i) + " is " +
                            std::to_string(labels[i]) + ", expected -1 or +1");
        }
    }
    if (positives == 0 || negatives == 0) {
        throw DataError("auc: needs at least one positive and one negative label");
    }

    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&scores](Index a, Index b) { return scores[a] < scores[b]; });

    // Rank sum over positives with average ranks for ties; equivalent to
    // pairwise counting with half credit for tied pairs.
    double pos_rank_sum = 0.0;
    Index i = 0;
    while (i < n) {
        Index j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (Index k = i; k < j; ++k) {
            if (labels[order[k]] == 1.0) pos_rank_sum += avg_rank;
        }
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double neg = static_cast<double>(negatives);
    return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * neg);
}

}  // namespace kronlearn
