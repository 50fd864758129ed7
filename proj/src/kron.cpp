#include "kronlearn/kron.hpp"

#include <stdexcept>
#include <string>

namespace kronlearn {

void EdgeIndexSeq::validate(Index first_bound, Index second_bound, const char* what) const {
    if (first.size() != second.size()) {
        throw std::invalid_argument(std::string(what) + ": index sequences have lengths " +
                                    std::to_string(first.size()) + " vs " +
                                    std::to_string(second.size()));
    }
    for (Index h = 0; h < first.size(); ++h) {
        if (first[h] >= first_bound || second[h] >= second_bound) {
            throw std::invalid_argument(std::string(what) + ": edge " + std::to_string(h) +
                                        " = (" + std::to_string(first[h]) + "," +
                                        std::to_string(second[h]) + ") outside bounds (" +
                                        std::to_string(first_bound) + "," +
                                        std::to_string(second_bound) + ")");
        }
    }
}

FactorIndexPair index_decompose(Index flat, Index first_rows, Index second_rows) {
    if (second_rows == 0 || first_rows == 0) {
        throw std::invalid_argument("index_decompose: empty factor");
    }
    if (flat >= first_rows * second_rows) {
        throw std::invalid_argument("index_decompose: flat index " + std::to_string(flat) +
                                    " out of range [0," +
                                    std::to_string(first_rows * second_rows) + ")");
    }
    return {flat / second_rows, flat % second_rows};
}

SampledKronOperator::SampledKronOperator(const DenseMatrix& first, const DenseMatrix& second,
                                         EdgeIndexSeq row_idx, EdgeIndexSeq col_idx)
    : first_(&first), second_(&second), row_idx_(std::move(row_idx)), col_idx_(std::move(col_idx)) {
    if (row_idx_.size() == 0 || col_idx_.size() == 0) {
        throw std::invalid_argument(
            "SampledKronOperator: at least one row and one column edge required");
    }
    row_idx_.validate(first.rows(), second.rows(), "SampledKronOperator row index");
    col_idx_.validate(first.cols(), second.cols(), "SampledKronOperator col index");
}

namespace {

// Row-major view of either a matrix or a materialized transpose of one.
struct FactorView {
    const double* data = nullptr;
    Index rows = 0;
    Index cols = 0;
    const double* row(Index r) const { return data + r * cols; }
};

void transpose_into(const double* src, Index rows, Index cols, std::vector<double>& dst) {
    dst.resize(rows * cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) dst[c * rows + r] = src[r * cols + c];
    }
}

FactorView oriented(const DenseMatrix& mat, bool transposed, std::vector<double>& buf) {
    if (!transposed) return {mat.values().data(), mat.rows(), mat.cols()};
    transpose_into(mat.values().data(), mat.rows(), mat.cols(), buf);
    return {buf.data(), mat.cols(), mat.rows()};
}

// Shared core of the forward and transposed products. With `transposed` the
// factors are read as M^T, N^T and the index sequences swap roles, so the
// same scatter/gather pair covers both directions. All phases stream rows
// contiguously: the scatter walks rows of the factor transpose, the gather
// rows of a transposed copy of the intermediate. The extra transposes cost
// O(ab + cd + intermediate), negligible next to the O(ae + df) phases.
DenseVector apply_vec_trick(const SampledKronOperator& op, const DenseVector& v,
                            KronWorkspace* workspace, KronBranch branch, bool transposed) {
    const DenseMatrix& M = op.first();
    const DenseMatrix& N = op.second();
    const EdgeIndexSeq& rows = transposed ? op.col_index() : op.row_index();
    const EdgeIndexSeq& cols = transposed ? op.row_index() : op.col_index();
    // Effective dimensions: the applied matrix has first factor a x b and
    // second factor c x d.
    const Index a = transposed ? M.cols() : M.rows();
    const Index b = transposed ? M.rows() : M.cols();
    const Index c = transposed ? N.cols() : N.rows();
    const Index d = transposed ? N.rows() : N.cols();
    const Index e = cols.size();
    const Index f = rows.size();

    if (v.size() != e) {
        throw std::invalid_argument("sampled_kron_matvec: vector length " +
                                    std::to_string(v.size()) + ", operator expects " +
                                    std::to_string(e));
    }

    bool via_first = a * e + d * f <= c * e + b * f;  // ties take the first-factor path
    if (branch == KronBranch::via_first) via_first = true;
    if (branch == KronBranch::via_second) via_first = false;

    KronWorkspace local;
    KronWorkspace& ws = workspace ? *workspace : local;
    DenseVector u(f);

    if (via_first) {
        // T = V M^T (d x a), with V scattered from v: row t_g of T gains
        // v_g times column r_g of the first factor.
        const FactorView mt = oriented(M, !transposed, ws.factor_scratch);   // b x a
        const FactorView nv = oriented(N, transposed, ws.factor_scratch2);   // c x d
        ws.scratch.assign(d * a, 0.0);
        for (Index g = 0; g < e; ++g) {
            const double* src = mt.row(cols.first[g]);
            double* dst = ws.scratch.data() + cols.second[g] * a;
            const double vg = v[g];
            for (Index k = 0; k < a; ++k) dst[k] += vg * src[k];
        }
        transpose_into(ws.scratch.data(), d, a, ws.scratch2);  // T^T, a x d
        for (Index h = 0; h < f; ++h) {
            const double* nrow = nv.row(rows.second[h]);
            const double* trow = ws.scratch2.data() + rows.first[h] * d;
            double s = 0.0;
            for (Index k = 0; k < d; ++k) s += nrow[k] * trow[k];
            u[h] = s;
        }
    } else {
        // S = N V (c x b), accumulated transposed: row r_g of S^T gains
        // v_g times column t_g of the second factor.
        const FactorView nt = oriented(N, !transposed, ws.factor_scratch);   // d x c
        const FactorView mv = oriented(M, transposed, ws.factor_scratch2);    // a x b
        ws.scratch.assign(b * c, 0.0);
        for (Index g = 0; g < e; ++g) {
            const double* src = nt.row(cols.second[g]);
            double* dst = ws.scratch.data() + cols.first[g] * c;
            const double vg = v[g];
            for (Index k = 0; k < c; ++k) dst[k] += vg * src[k];
        }
        transpose_into(ws.scratch.data(), b, c, ws.scratch2);  // S, c x b
        for (Index h = 0; h < f; ++h) {
            const double* srow = ws.scratch2.data() + rows.second[h] * b;
            const double* mrow = mv.row(rows.first[h]);
            double s = 0.0;
            for (Index k = 0; k < b; ++k) s += srow[k] * mrow[k];
            u[h] = s;
        }
    }
    return u;
}

}  // namespace

DenseVector sampled_kron_matvec(const SampledKronOperator& op, const DenseVector& v,
                                KronWorkspace* workspace, KronBranch branch) {
    return apply_vec_trick(op, v, workspace, branch, false);
}

DenseVector sampled_kron_matvec_transposed(const SampledKronOperator& op, const DenseVector& v,
                                           KronWorkspace* workspace, KronBranch branch) {
    return apply_vec_trick(op, v, workspace, branch, true);
}

DenseVector naive_sampled_kron_matvec(const SampledKronOperator& op, const DenseVector& v,
                                      Index guard) {
    const DenseMatrix& M = op.first();
    const DenseMatrix& N = op.second();
    const Index a = M.rows(), b = M.cols(), c = N.rows(), d = N.cols();
    if (a * c * b * d > guard) {
        throw std::invalid_argument("naive_sampled_kron_matvec: product has " +
                                    std::to_string(a * c) + "x" + std::to_string(b * d) +
                                    " entries, above the guard of " + std::to_string(guard));
    }
    if (v.size() != op.in_dim()) {
        throw std::invalid_argument("naive_sampled_kron_matvec: vector length " +
                                    std::to_string(v.size()) + ", operator expects " +
                                    std::to_string(op.in_dim()));
    }
    // Materialize M (x) N from the definition.
    DenseMatrix kron(a * c, b * d);
    for (Index p = 0; p < a; ++p)
        for (Index q = 0; q < c; ++q)
            for (Index r = 0; r < b; ++r)
                for (Index t = 0; t < d; ++t) kron(p * c + q, r * d + t) = M(p, r) * N(q, t);

    const EdgeIndexSeq& rows = op.row_index();
    const EdgeIndexSeq& cols = op.col_index();
    DenseVector u(rows.size());
    for (Index h = 0; h < rows.size(); ++h) {
        const Index flat_row = rows.first[h] * c + rows.second[h];
        double s = 0.0;
        for (Index g = 0; g < cols.size(); ++g) {
            const Index flat_col = cols.first[g] * d + cols.second[g];
            s += kron(flat_row, flat_col) * v[g];
        }
        u[h] = s;
    }
    return u;
}

DenseVector sampled_kron_matvec_direct(const SampledKronOperator& op, const DenseVector& v) {
    if (v.size() != op.in_dim()) {
        throw std::invalid_argument("sampled_kron_matvec_direct: vector length " +
                                    std::to_string(v.size()) + ", operator expects " +
                                    std::to_string(op.in_dim()));
    }
    const DenseMatrix& M = op.first();
    const DenseMatrix& N = op.second();
    const EdgeIndexSeq& rows = op.row_index();
    const EdgeIndexSeq& cols = op.col_index();
    const Index e = cols.size(), f = rows.size();
    DenseVector u(f);
    for (Index h = 0; h < f; ++h) {
        const Index p = rows.first[h];
        const Index q = rows.second[h];
        double s = 0.0;
        for (Index g = 0; g < e; ++g) {
            s += v[g] * M(p, cols.first[g]) * N(q, cols.second[g]);
        }
        u[h] = s;
    }
    return u;
}

}  // namespace kronlearn
