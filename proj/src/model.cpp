#include "kronlearn/model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kronlearn/error.hpp"

namespace kronlearn {

namespace {

constexpr const char* kFormatVersion = "kronlearn-model/1";

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// Rectangular kernel block between request vertices and training vertices.
// For a precomputed kernel the request matrix already is that block.
DenseMatrix request_kernel_block(const DenseMatrix& request_side, const DenseMatrix& training_side,
                                 const KernelSpec& spec, Index training_count, const char* side) {
    if (spec.kind == KernelKind::precomputed) {
        if (request_side.cols() != training_count) {
            throw std::invalid_argument(std::string("predict: precomputed ") + side +
                                        " kernel block has " +
                                        std::to_string(request_side.cols()) +
                                        " columns, expected " + std::to_string(training_count));
        }
        return request_side;
    }
    if (request_side.cols() != training_side.cols()) {
        throw std::invalid_argument(std::string("predict: ") + side + " feature dim " +
                                    std::to_string(request_side.cols()) +
                                    " does not match training dim " +
                                    std::to_string(training_side.cols()));
    }
    return kernel_matrix(request_side, training_side, spec);
}

}  // namespace

DenseVector predict_dual(const DualModel& model, const PredictionRequest& request,
                         bool drop_zero_coefficients) {
    if (model.coefficients.size() != model.edges.size()) {
        throw std::invalid_argument("predict_dual: model has " +
                                    std::to_string(model.coefficients.size()) +
                                    " coefficients for " + std::to_string(model.edges.size()) +
                                    " edges");
    }
    const DenseMatrix k_hat = request_kernel_block(request.start_features, model.start_vertices,
                                                   model.start_kernel, model.start_count, "start");
    const DenseMatrix g_hat = request_kernel_block(request.end_features, model.end_vertices,
                                                   model.end_kernel, model.end_count, "end");
    request.edges.validate(k_hat.rows(), g_hat.rows(), "prediction request edges");

    // Column side: training edges, optionally with exact-zero coefficients
    // and their columns removed.
    EdgeIndexSeq col_idx;
    DenseVector coeffs;
    if (drop_zero_coefficients) {
        for (Index h = 0; h < model.edges.size(); ++h) {
            if (model.coefficients[h] != 0.0) {
                col_idx.push_back(model.edges.second[h], model.edges.first[h]);
                coeffs.values().push_back(model.coefficients[h]);
            }
        }
        if (col_idx.size() == 0) return DenseVector(request.edges.size());
    } else {
        for (Index h = 0; h < model.edges.size(); ++h) {
            col_idx.push_back(model.edges.second[h], model.edges.first[h]);
        }
        coeffs = model.coefficients;
    }

    EdgeIndexSeq row_idx;
    for (Index h = 0; h < request.edges.size(); ++h) {
        row_idx.push_back(request.edges.second[h], request.edges.first[h]);
    }
    const SampledKronOperator op(g_hat, k_hat, std::move(row_idx), std::move(col_idx));
    return sampled_kron_matvec(op, coeffs);
}

DenseVector predict_primal(const PrimalModel& model, const PredictionRequest& request) {
    const Index d = model.start_dim, r = model.end_dim;
    if (model.weights.size() != d * r) {
        throw std::invalid_argument("predict_primal: weight length " +
                                    std::to_string(model.weights.size()) + " is not " +
                                    std::to_string(d) + "*" + std::to_string(r));
    }
    if (request.start_features.cols() != d || request.end_features.cols() != r) {
        throw std::invalid_argument("predict_primal: request feature dims (" +
                                    std::to_string(request.start_features.cols()) + "," +
                                    std::to_string(request.end_features.cols()) +
                                    ") do not match model dims (" + std::to_string(d) + "," +
                                    std::to_string(r) + ")");
    }
    request.edges.validate(request.start_features.rows(), request.end_features.rows(),
                           "prediction request edges");

    EdgeIndexSeq row_idx;
    for (Index h = 0; h < request.edges.size(); ++h) {
        row_idx.push_back(request.edges.second[h], request.edges.first[h]);
    }
    // Full column space of (T (x) D): weight l multiplies column (l/d, l%d).
    EdgeIndexSeq col_idx;
    col_idx.first.reserve(r * d);
    col_idx.second.reserve(r * d);
    for (Index l = 0; l < r * d; ++l) col_idx.push_back(l / d, l % d);

    const SampledKronOperator op(request.end_features, request.start_features, std::move(row_idx),
                                 std::move(col_idx));
    return sampled_kron_matvec(op, model.weights);
}

Index truncate_coefficients(DualModel& model, double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("truncate_coefficients: negative epsilon");
    Index zeroed = 0;
    for (Index h = 0; h < model.coefficients.size(); ++h) {
        if (model.coefficients[h] != 0.0 && std::abs(model.coefficients[h]) <= epsilon) {
            model.coefficients[h] = 0.0;
            ++zeroed;
        }
    }
    return zeroed;
}

DenseVector predict(const TrainedModel& model, const PredictionRequest& request) {
    if (const auto* dual = std::get_if<DualModel>(&model)) return predict_dual(*dual, request);
    return predict_primal(std::get<PrimalModel>(model), request);
}

namespace {

void write_kernel_line(std::ostream& out, const char* key, const KernelSpec& spec) {
    out << key << ' ';
    switch (spec.kind) {
        case KernelKind::linear:
            out << "linear";
            break;
        case KernelKind::precomputed:
            out << "precomputed";
            break;
        case KernelKind::gaussian:
            out << "gaussian " << format_double(spec.gamma);
            break;
    }
    out << '\n';
}

void write_matrix_section(std::ostream& out, const char* name, const DenseMatrix& m) {
    out << "section " << name << '\n';
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

class ModelReader {
public:
    ModelReader(const std::string& path) : path_(path), in_(path) {
        if (!in_) throw DataError("cannot open model file '" + path + "'");
    }

    std::string next_line(const std::string& context) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty()) return line;
        }
        throw DataError(path_ + ": truncated model file, expected " + context);
    }

    void expect_section(const std::string& name) {
        const std::string line = next_line("section " + name);
        if (line != "section " + name) {
            throw DataError(path_ + ":" + std::to_string(line_no_) + ": expected 'section " +
                            name + "', found '" + line + "'");
        }
    }

    double parse_value(const std::string& token) {
        double x = 0.0;
        auto res = std::from_chars(token.data(), token.data() + token.size(), x);
        if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
            throw DataError(path_ + ":" + std::to_string(line_no_) + ": cannot parse number '" +
                            token + "'");
        }
        return x;
    }

    DenseMatrix read_matrix(const std::string& name, Index rows, Index cols) {
        expect_section(name);
        std::vector<double> values;
        values.reserve(rows * cols);
        for (Index r = 0; r < rows; ++r) {
            std::istringstream row(next_line("row " + std::to_string(r) + " of " + name));
            std::string tok;
            Index count = 0;
            while (row >> tok) {
                values.push_back(parse_value(tok));
                ++count;
            }
            if (count != cols) {
                throw DataError(path_ + ":" + std::to_string(line_no_) + ": section " + name +
                                " row has " + std::to_string(count) + " values, expected " +
                                std::to_string(cols));
            }
        }
        return DenseMatrix(rows, cols, std::move(values));
    }

    Index line_no() const { return line_no_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream in_;
    Index line_no_ = 0;
};

KernelSpec parse_kernel_line(ModelReader& reader, const std::string& line, const char* key) {
    std::istringstream in(line);
    std::string k, kind;
    in >> k >> kind;
    if (k != key) {
        throw DataError(reader.path() + ": expected '" + key + "', found '" + line + "'");
    }
    if (kind == "linear") return KernelSpec::linear();
    if (kind == "precomputed") return KernelSpec::precomputed();
    if (kind == "gaussian") {
        std::string gamma;
        if (!(in >> gamma)) throw DataError(reader.path() + ": gaussian kernel missing gamma");
        return KernelSpec::gaussian(reader.parse_value(gamma));
    }
    throw DataError(reader.path() + ": unknown kernel kind '" + kind + "'");
}

Index parse_count_line(ModelReader& reader, const std::string& line, const char* key) {
    std::istringstream in(line);
    std::string k;
    long long value = -1;
    in >> k >> value;
    if (k != key || value < 0) {
        throw DataError(reader.path() + ": expected '" + key + " <count>', found '" + line + "'");
    }
    return static_cast<Index>(value);
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << kFormatVersion << '\n';
    if (const auto* dual = std::get_if<DualModel>(&model)) {
        out << "kind dual\n";
        write_kernel_line(out, "start_kernel", dual->start_kernel);
        write_kernel_line(out, "end_kernel", dual->end_kernel);
        out << "start_count " << dual->start_count << '\n';
        out << "end_count " << dual->end_count << '\n';
        out << "start_dim " << dual->start_vertices.cols() << '\n';
        out << "end_dim " << dual->end_vertices.cols() << '\n';
        out << "edge_count " << dual->edges.size() << '\n';
        if (!dual->start_vertices.empty()) {
            write_matrix_section(out, "start_vertices", dual->start_vertices);
        }
        if (!dual->end_vertices.empty()) {
            write_matrix_section(out, "end_vertices", dual->end_vertices);
        }
        out << "section edges\n";
        for (Index h = 0; h < dual->edges.size(); ++h) {
            out << dual->edges.first[h] << ' ' << dual->edges.second[h] << '\n';
        }
        out << "section coefficients\n";
        for (Index h = 0; h < dual->coefficients.size(); ++h) {
            out << format_double(dual->coefficients[h]) << '\n';
        }
    } else {
        const auto& primal = std::get<PrimalModel>(model);
        out << "kind primal\n";
        out << "start_dim " << primal.start_dim << '\n';
        out << "end_dim " << primal.end_dim << '\n';
        out << "section weights\n";
        for (Index i = 0; i < primal.weights.size(); ++i) {
            out << format_double(primal.weights[i]) << '\n';
        }
    }
    out << "end\n";
    if (!out) throw DataError("failed writing '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
    ModelReader reader(path);
    const std::string version = reader.next_line("format version");
    if (version != kFormatVersion) {
        throw DataError(path + ": unsupported model format '" + version + "', expected '" +
                        kFormatVersion + "'");
    }
    const std::string kind_line = reader.next_line("kind");
    if (kind_line == "kind dual") {
        DualModel model;
        model.start_kernel = parse_kernel_line(reader, reader.next_line("start_kernel"), "start_kernel");
        model.end_kernel = parse_kernel_line(reader, reader.next_line("end_kernel"), "end_kernel");
        model.start_count = parse_count_line(reader, reader.next_line("start_count"), "start_count");
        model.end_count = parse_count_line(reader, reader.next_line("end_count"), "end_count");
        const Index start_dim = parse_count_line(reader, reader.next_line("start_dim"), "start_dim");
        const Index end_dim = parse_count_line(reader, reader.next_line("end_dim"), "end_dim");
        const Index edge_count = parse_count_line(reader, reader.next_line("edge_count"), "edge_count");
        if (start_dim > 0) {
            model.start_vertices = reader.read_matrix("start_vertices", model.start_count, start_dim);
        }
        if (end_dim > 0) {
            model.end_vertices = reader.read_matrix("end_vertices", model.end_count, end_dim);
        }
        reader.expect_section("edges");
        for (Index h = 0; h < edge_count; ++h) {
            std::istringstream in(reader.next_line("edge " + std::to_string(h)));
            long long s = -1, e = -1;
            in >> s >> e;
            if (s < 0 || e < 0 || static_cast<Index>(s) >= model.start_count ||
                static_cast<Index>(e) >= model.end_count) {
                throw DataError(path + ":" + std::to_string(reader.line_no()) +
                                ": invalid model edge");
            }
            model.edges.push_back(static_cast<Index>(s), static_cast<Index>(e));
        }
        reader.expect_section("coefficients");
        model.coefficients = DenseVector(edge_count);
        for (Index h = 0; h < edge_count; ++h) {
            model.coefficients[h] =
                reader.parse_value(reader.next_line("coefficient " + std::to_string(h)));
        }
        if (reader.next_line("end marker") != "end") {
            throw DataError(path + ": missing 'end' marker");
        }
        return model;
    }
    if (kind_line == "kind primal") {
        PrimalModel model;
        model.start_dim = parse_count_line(reader, reader.next_line("start_dim"), "start_dim");
        model.end_dim = parse_count_line(reader, reader.next_line("end_dim"), "end_dim");
        reader.expect_section("weights");
        model.weights = DenseVector(model.start_dim * model.end_dim);
        for (Index i = 0; i < model.weights.size(); ++i) {
            model.weights[i] = reader.parse_value(reader.next_line("weight " + std::to_string(i)));
        }
        if (reader.next_line("end marker") != "end") {
            throw DataError(path + ": missing 'end' marker");
        }
        return model;
    }
    throw DataError(path + ": unknown model kind line '" + kind_line + "'");
}

}  // namespace kronlearn
