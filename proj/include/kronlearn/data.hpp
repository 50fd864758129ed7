#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kronlearn/kron.hpp"
#include "kronlearn/matrix.hpp"

namespace kronlearn {

/// Labeled bipartite graph: start-vertex features (m x d), end-vertex
/// features (q x r), n edges with labels. In precomputed-kernel mode the
/// feature matrices hold the m x m / q x q training kernels instead.
/// edges.first indexes start vertices, edges.second end vertices.
struct BipartiteDataset {
    DenseMatrix start_features;
    DenseMatrix end_features;
    EdgeIndexSeq edges;
    DenseVector labels;

    Index start_count() const { return start_features.rows(); }
    Index end_count() const { return end_features.rows(); }
    Index edge_count() const { return edges.size(); }

    void validate() const;
};

/// Whitespace-separated decimal text, one row per line, no header.
DenseMatrix load_matrix_file(const std::string& path);

/// Edge list rows are "start_index end_index [label]", 0-based; the label
/// column must be present on every line or on none.
struct EdgeList {
    EdgeIndexSeq edges;
    DenseVector labels;  // empty when the file has no label column
    bool has_labels = false;
    std::vector<Index> line_numbers;  // source line of each edge, for diagnostics
};
EdgeList load_edge_file(const std::string& path);

/// File formats: feature files are whitespace-separated decimal text, one
/// vertex per line, no header; edge files have three columns per line:
/// start_index end_index label, 0-based.
BipartiteDataset load_dataset(const std::string& start_path, const std::string& end_path,
                              const std::string& edge_path);
void save_dataset(const BipartiteDataset& data, const std::string& start_path,
                  const std::string& end_path, const std::string& edge_path);

/// +1 iff floor(d) and floor(t) are both odd or both even, else -1.
int checkerboard_clean_label(double d, double t);

/// Simulated dataset: one feature per vertex ~ uniform(0, 100), labels from
/// the checkerboard rule, round(density*m*q) distinct edges sampled without
/// replacement, each label independently flipped with probability flip_prob.
/// Deterministic under seed.
BipartiteDataset generate_checkerboard(Index m, Index q, double density, double flip_prob,
                                       std::uint64_t seed);

/// Vertex-disjoint cross-validation plan. Start vertices are partitioned into
/// start_folds folds and end vertices into end_folds folds; round (i, j)
/// tests on the labeled edges inside block (i, j) and trains on the edges in
/// blocks sharing neither fold. The remaining edges are left unused.
struct SplitPlan {
    Index start_folds = 0;
    Index end_folds = 0;
    std::vector<Index> start_fold;  // size m
    std::vector<Index> end_fold;    // size q

    struct Round {
        Index test_start_fold = 0;
        Index test_end_fold = 0;
        std::vector<Index> train_edges;
        std::vector<Index> test_edges;
    };
    std::vector<Round> rounds;  // start_folds * end_folds, row-major
};

SplitPlan vertex_disjoint_split(const BipartiteDataset& data, Index start_folds, Index end_folds,
                                std::uint64_t seed);

/// Area under the ROC curve with half credit for ties, computed via rank
/// sums in O(n log n). Labels must be in {-1, +1} with both classes present.
double auc(const DenseVector& scores, const DenseVector& labels);

}  // namespace kronlearn
