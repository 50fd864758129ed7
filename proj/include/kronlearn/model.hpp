#pragma once

#include <string>
#include <variant>

#include "kronlearn/kron.hpp"
#include "kronlearn/matrix.hpp"

namespace kronlearn {

/// Self-contained dual predictor: per-training-edge coefficients plus the
/// training vertices they refer to. When a kernel is precomputed the matching
/// vertex matrix is empty and prediction expects rectangular kernel blocks
/// against the training vertices instead of features.
struct DualModel {
    DenseVector coefficients;   // length n
    DenseMatrix start_vertices; // m x d features; empty if start kernel precomputed
    DenseMatrix end_vertices;   // q x r features; empty if end kernel precomputed
    EdgeIndexSeq edges;         // n: first -> start vertex, second -> end vertex
    KernelSpec start_kernel;
    KernelSpec end_kernel;
    Index start_count = 0;      // m
    Index end_count = 0;        // q
};

/// Explicit weight vector over the Kronecker feature space, linear kernels
/// only. weights[j_end * start_dim + j_start] multiplies t[j_end] * d[j_start].
struct PrimalModel {
    DenseVector weights;  // length start_dim * end_dim
    Index start_dim = 0;  // d
    Index end_dim = 0;    // r
};

/// New vertices plus the (start, end) pairs to score. Under a precomputed
/// kernel the corresponding feature matrix holds the rectangular kernel block
/// (new vertices x training vertices).
struct PredictionRequest {
    DenseMatrix start_features;  // u rows
    DenseMatrix end_features;    // v rows
    EdgeIndexSeq edges;          // length t_hat: first -> [u), second -> [v)
};

/// Representer predictions via the sampled Kronecker product of the
/// rectangular kernel blocks. Entries of the coefficient vector that are
/// exactly 0.0 are dropped, along with their columns, before the product;
/// pass drop_zero_coefficients = false to force the dense path.
DenseVector predict_dual(const DualModel& model, const PredictionRequest& request,
                         bool drop_zero_coefficients = true);

DenseVector predict_primal(const PrimalModel& model, const PredictionRequest& request);

/// Zeroes coefficients with |a_i| <= epsilon; returns how many were zeroed.
/// An explicit post-processing step -- training never truncates on its own.
Index truncate_coefficients(DualModel& model, double epsilon);

using TrainedModel = std::variant<DualModel, PrimalModel>;

DenseVector predict(const TrainedModel& model, const PredictionRequest& request);

/// Line-oriented text format, version "kronlearn-model/1": a header block of
/// "key value" lines, then named sections of full-precision decimal arrays.
/// Round trips are lossless (shortest round-trip float formatting).
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace kronlearn
