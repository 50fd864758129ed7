#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace kronlearn {

using Index = std::size_t;

/// Dense real vector.
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(Index n, double fill = 0.0) : values_(n, fill) {}
    DenseVector(std::initializer_list<double> init) : values_(init) {}
    explicit DenseVector(std::vector<double> values) : values_(std::move(values)) {}

    Index size() const { return values_.size(); }
    double operator[](Index i) const { return values_[i]; }
    double& operator[](Index i) { return values_[i]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    const double* data() const { return values_.data(); }
    double* data() { return values_.data(); }

private:
    std::vector<double> values_;
};

/// Dense real matrix, row-major storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(Index rows, Index cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    DenseMatrix(Index rows, Index cols, std::vector<double> values);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    bool empty() const { return values_.empty(); }

    double operator()(Index r, Index c) const { return values_[r * cols_ + c]; }
    double& operator()(Index r, Index c) { return values_[r * cols_ + c]; }

    const double* row_data(Index r) const { return values_.data() + r * cols_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<double> values_;
};

// Vector arithmetic helpers used throughout the solvers and learners.
double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& v);
double norm_inf(const DenseVector& v);
/// y += alpha * x
void axpy(double alpha, const DenseVector& x, DenseVector& y);
void scale(DenseVector& v, double alpha);
bool all_finite(const DenseVector& v);
bool all_finite(const DenseMatrix& a);

enum class KernelKind { linear, gaussian, precomputed };

/// Vertex kernel choice; gamma applies to the gaussian kernel only.
struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double gamma = 1.0;

    static KernelSpec linear() { return {KernelKind::linear, 1.0}; }
    static KernelSpec gaussian(double gamma);
    static KernelSpec precomputed() { return {KernelKind::precomputed, 1.0}; }
};

std::string to_string(const KernelSpec& spec);
/// Parses the CLI grammar: "linear" | "gaussian:<gamma>" | "precomputed".
KernelSpec parse_kernel_spec(const std::string& text);

/// Pairwise kernel evaluations between the rows of x1 and x2.
/// Linear: <x1_i, x2_j>. Gaussian: exp(-gamma * ||x1_i - x2_j||^2), with the
/// squared distance accumulated pairwise (no norm-expansion shortcut).
DenseMatrix kernel_matrix(const DenseMatrix& x1, const DenseMatrix& x2, const KernelSpec& spec);

DenseVector matvec(const DenseMatrix& a, const DenseVector& v);
/// A^T v without materializing the transpose.
DenseVector matvec_transposed(const DenseMatrix& a, const DenseVector& v);

/// Rejects non-square or asymmetric matrices; used on precomputed training kernels.
void check_symmetric(const DenseMatrix& k, double tol = 1e-8, const char* what = "kernel matrix");

}  // namespace kronlearn
