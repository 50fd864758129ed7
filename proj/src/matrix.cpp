#include "kronlearn/matrix.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "kronlearn/error.hpp"

namespace kronlearn {

DenseMatrix::DenseMatrix(Index rows, Index cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols) {
        throw std::invalid_argument("DenseMatrix: value count " + std::to_string(values_.size()) +
                                    " does not equal " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    values_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw std::invalid_argument("DenseMatrix: ragged initializer rows");
        }
        values_.insert(values_.end(), row.begin(), row.end());
    }
}

double dot(const DenseVector& a, const DenseVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: lengths " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
    double s = 0.0;
    for (Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const DenseVector& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const DenseVector& v) {
    double m = 0.0;
    for (Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("axpy: lengths " + std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()));
    }
    for (Index i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(DenseVector& v, double alpha) {
    for (Index i = 0; i < v.size(); ++i) v[i] *= alpha;
}

bool all_finite(const DenseVector& v) {
    for (Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) return false;
    }
    return true;
}

bool all_finite(const DenseMatrix& a) {
    for (double x : a.values()) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

KernelSpec KernelSpec::gaussian(double gamma) {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("gaussian kernel requires gamma > 0, got " +
                                    std::to_string(gamma));
    }
    return {KernelKind::gaussian, gamma};
}

std::string to_string(const KernelSpec& spec) {
    switch (spec.kind) {
        case KernelKind::linear:
            return "linear";
        case KernelKind::precomputed:
            return "precomputed";
        case KernelKind::gaussian: {
            char buf[64];
            auto res = std::to_chars(buf, buf + sizeof(buf), spec.gamma);
            return "gaussian:" + std::string(buf, res.ptr);
        }
    }
    return "linear";
}

KernelSpec parse_kernel_spec(const std::string& text) {
    if (text == "linear") return KernelSpec::linear();
    if (text == "precomputed") return KernelSpec::precomputed();
    const std::string prefix = "gaussian:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string num = text.substr(prefix.size());
        double gamma = 0.0;
        auto res = std::from_chars(num.data(), num.data() + num.size(), gamma);
        if (res.ec != std::errc() || res.ptr != num.data() + num.size()) {
            throw std::invalid_argument("cannot parse gaussian gamma from '" + num + "'");
        }
        return KernelSpec::gaussian(gamma);
    }
    throw std::invalid_argument("unknown kernel '" + text +
                                "' (expected linear, gaussian:<gamma> or precomputed)");
}

DenseMatrix kernel_matrix(const DenseMatrix& x1, const DenseMatrix& x2, const KernelSpec& spec) {
    if (spec.kind == KernelKind::precomputed) {
        throw std::invalid_argument("kernel_matrix: precomputed kernels are read, not evaluated");
    }
    if (x1.cols() != x2.cols()) {
        throw std::invalid_argument("kernel_matrix: feature dims " + std::to_string(x1.cols()) +
                                    " vs " + std::to_string(x2.cols()));
    }
    const Index n1 = x1.rows(), n2 = x2.rows(), f = x1.cols();
    DenseMatrix out(n1, n2);
    if (spec.kind == KernelKind::linear) {
        for (Index i = 0; i < n1; ++i) {
            const double* a = x1.row_data(i);
            for (Index j = 0; j < n2; ++j) {
                const double* b = x2.row_data(j);
                double s = 0.0;
                for (Index k = 0; k < f; ++k) s += a[k] * b[k];
                out(i, j) = s;
            }
        }
    } else {
        const double gamma = spec.gamma;
        for (Index i = 0; i < n1; ++i) {
            const double* a = x1.row_data(i);
            for (Index j = 0; j < n2; ++j) {
                const double* b = x2.row_data(j);
                // Direct pairwise distance; the norm-expansion form cancels
                // catastrophically at small distances.
                double d2 = 0.0;
                for (Index k = 0; k < f; ++k) {
                    const double diff = a[k] - b[k];
                    d2 += diff * diff;
                }
                out(i, j) = std::exp(-gamma * d2);
            }
        }
    }
    if (!all_finite(out)) {
        throw NumericalError("kernel_matrix: non-finite kernel value");
    }
    return out;
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& v) {
    if (a.cols() != v.size()) {
        throw std::invalid_argument("matvec: matrix is " + std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + ", vector has length " +
                                    std::to_string(v.size()));
    }
    DenseVector out(a.rows());
    for (Index i = 0; i < a.rows(); ++i) {
        const double* row = a.row_data(i);
        double s = 0.0;
        for (Index j = 0; j < a.cols(); ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

DenseVector matvec_transposed(const DenseMatrix& a, const DenseVector& v) {
    if (a.rows() != v.size()) {
        throw std::invalid_argument("matvec_transposed: matrix is " + std::to_string(a.rows()) +
                                    "x" + std::to_string(a.cols()) + ", vector has length " +
                                    std::to_string(v.size()));
    }
    // Accumulate row by row so the storage is still walked in row-major order.
    DenseVector out(a.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        const double* row = a.row_data(i);
        const double vi = v[i];
        for (Index j = 0; j < a.cols(); ++j) out[j] += vi * row[j];
    }
    return out;
}

void check_symmetric(const DenseMatrix& k, double tol, const char* what) {
    if (k.rows() != k.cols()) {
        throw DataError(std::string(what) + " is not square: " + std::to_string(k.rows()) + "x" +
                        std::to_string(k.cols()));
    }
    for (Index i = 0; i < k.rows(); ++i) {
        for (Index j = i + 1; j < k.cols(); ++j) {
            const double diff = std::abs(k(i, j) - k(j, i));
            const double scale = std::max({1.0, std::abs(k(i, j)), std::abs(k(j, i))});
            if (diff > tol * scale) {
                throw DataError(std::string(what) + " is not symmetric at (" + std::to_string(i) +
                                "," + std::to_string(j) + "): " + std::to_string(k(i, j)) +
                                " vs " + std::to_string(k(j, i)));
            }
        }
    }
}

}  // namespace kronlearn
