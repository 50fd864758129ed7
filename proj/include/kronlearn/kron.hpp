#pragma once

#include <cstddef>
#include <vector>

#include "kronlearn/matrix.hpp"

namespace kronlearn {

/// Per-edge index pair: `first[h]` points into the first Kronecker factor,
/// `second[h]` into the second. In dataset terms first = start vertex,
/// second = end vertex; the learners reorder as needed when they fix which
/// factor comes first in the product.
struct EdgeIndexSeq {
    std::vector<Index> first;
    std::vector<Index> second;

    Index size() const { return first.size(); }
    void push_back(Index f, Index s) {
        first.push_back(f);
        second.push_back(s);
    }
    /// Rejects mismatched lengths or indices outside [0, bound).
    void validate(Index first_bound, Index second_bound, const char* what) const;
};

struct FactorIndexPair {
    Index first;
    Index second;
};

/// Splits a flat row index of (M (x) N) into row indices of the factors:
/// first = flat / second_rows, second = flat % second_rows. All 0-based.
FactorIndexPair index_decompose(Index flat, Index first_rows, Index second_rows);

/// R (M (x) N) C^T without materializing the product. Holds views of the two
/// factors; they must outlive the operator. row_idx (length f) selects output
/// rows via (rows of M, rows of N); col_idx (length e) selects input columns
/// via (cols of M, cols of N). Duplicate edges are allowed on both sides:
/// column duplicates accumulate, row duplicates repeat outputs.
class SampledKronOperator {
public:
    SampledKronOperator(const DenseMatrix& first, const DenseMatrix& second,
                        EdgeIndexSeq row_idx, EdgeIndexSeq col_idx);

    const DenseMatrix& first() const { return *first_; }
    const DenseMatrix& second() const { return *second_; }
    const EdgeIndexSeq& row_index() const { return row_idx_; }
    const EdgeIndexSeq& col_index() const { return col_idx_; }

    /// f: length of the output of the forward product.
    Index out_dim() const { return row_idx_.size(); }
    /// e: length of the input of the forward product.
    Index in_dim() const { return col_idx_.size(); }

private:
    const DenseMatrix* first_;
    const DenseMatrix* second_;
    EdgeIndexSeq row_idx_;
    EdgeIndexSeq col_idx_;
};

/// Which intermediate the vec-trick routes through. `automatic` picks the
/// cheaper side, preferring the first-factor path on cost ties.
enum class KronBranch { automatic, via_first, via_second };

/// Reusable scratch buffers for the vec-trick intermediates.
struct KronWorkspace {
    std::vector<double> scratch;
    std::vector<double> scratch2;
    std::vector<double> factor_scratch;
    std::vector<double> factor_scratch2;
};

/// u = R (M (x) N) C^T v via the generalized vec trick:
/// scatter v into the sparse matrix V with vec(V) = C^T v, form T = V M^T
/// (or S = N V), then gather the requested rows. O(min(ae + df, ce + bf)).
DenseVector sampled_kron_matvec(const SampledKronOperator& op, const DenseVector& v,
                                KronWorkspace* workspace = nullptr,
                                KronBranch branch = KronBranch::automatic);

/// The transposed product C (M^T (x) N^T) R^T v, realized by swapping the
/// roles of the index sequences and reading the factors transposed in place.
DenseVector sampled_kron_matvec_transposed(const SampledKronOperator& op, const DenseVector& v,
                                           KronWorkspace* workspace = nullptr,
                                           KronBranch branch = KronBranch::automatic);

/// Test oracle: materializes M (x) N, applies the row/column selections and a
/// dense matvec. Rejects products with more than `guard` entries.
DenseVector naive_sampled_kron_matvec(const SampledKronOperator& op, const DenseVector& v,
                                      Index guard = 1'000'000);

/// Entrywise evaluation u_h = sum_g v_g M[p_h, r_g] N[q_h, t_g]; O(f*e) time,
/// no materialization. This is the quadratic-cost baseline the fast path is
/// benchmarked against.
DenseVector sampled_kron_matvec_direct(const SampledKronOperator& op, const DenseVector& v);

}  // namespace kronlearn
