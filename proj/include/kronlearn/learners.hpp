#pragma once

#include <optional>
#include <vector>

#include "kronlearn/data.hpp"
#include "kronlearn/losses.hpp"
#include "kronlearn/matrix.hpp"
#include "kronlearn/model.hpp"

namespace kronlearn {

/// Stop training once validation AUC has not improved for `patience` outer
/// rounds; the model keeps the coefficients from the best round.
struct EarlyStopConfig {
    BipartiteDataset validation;
    Index patience = 2;
};

struct TrainConfig {
    double lambda = 1e-4;
    Index outer_iters = 10;
    Index inner_iters = 10;
    double step_size = 1.0;  // delta; a halving fallback engages only if the objective rises
    LossKind loss = LossKind::l2svm;
    double tol = 1e-6;  // inner solver relative-residual tolerance
    KernelSpec start_kernel = KernelSpec::linear();
    KernelSpec end_kernel = KernelSpec::linear();
    std::optional<EarlyStopConfig> early_stop;
};

struct TrainReport {
    std::vector<double> objective_history;       // one entry per outer round
    std::vector<double> validation_auc_history;  // filled when early stopping is configured
    Index best_round = 0;                        // 0-based, into the histories
    bool stopped_early = false;
    Index solver_iterations = 0;  // total inner iterations across the run
};

/// One-shot Kronecker ridge regression in the dual: solves
/// (R(G (x) K)R^T + lambda I) a = y matrix-free with MINRES, capped at
/// outer_iters * inner_iters iterations. K and G are the training kernel
/// matrices over start and end vertices.
DualModel train_ridge_dual(const BipartiteDataset& data, const DenseMatrix& K,
                           const DenseMatrix& G, const TrainConfig& cfg,
                           TrainReport* report = nullptr);

/// One-shot primal ridge: solves the normal system
/// ((T^T (x) D^T)R^T R(T (x) D) + lambda I) w = (T^T (x) D^T)R^T y.
/// Requires explicit features (rejects precomputed kernels).
PrimalModel train_ridge_primal(const BipartiteDataset& data, const TrainConfig& cfg,
                               TrainReport* report = nullptr);

/// Truncated Newton in the dual: per outer round recomputes predictions,
/// evaluates the loss gradient and generalized Hessian, solves
/// (H R(G (x) K)R^T + lambda I) x = g + lambda a with TFQMR capped at
/// inner_iters, and steps a -= delta x. For l2svm the predictions drop zero
/// coefficients and the inner operator only touches active-margin rows.
DualModel train_newton_dual(const BipartiteDataset& data, const DenseMatrix& K,
                            const DenseMatrix& G, const TrainConfig& cfg,
                            TrainReport* report = nullptr);

/// Primal truncated Newton: predictions R(T (x) D) w, gradient
/// (T^T (x) D^T)R^T g + lambda w, Hessian operator
/// (T^T (x) D^T)R^T H R(T (x) D) + lambda I solved with MINRES.
PrimalModel train_newton_primal(const BipartiteDataset& data, const TrainConfig& cfg,
                                TrainReport* report = nullptr);

struct EarlyStopDecision {
    bool stop = false;
    Index best_index = 0;  // 0-based round with the best AUC so far
};

/// stop is set once the best entry is `patience` or more rounds old.
EarlyStopDecision early_stop_check(const std::vector<double>& auc_history, Index patience);

}  // namespace kronlearn
