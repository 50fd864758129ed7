#include "kronlearn/learners.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kronlearn/error.hpp"
#include "kronlearn/solvers.hpp"

namespace kronlearn {

namespace {

// Dataset edges are (start, end); the training operator R(G (x) K)R^T puts
// the end-vertex factor first.
EdgeIndexSeq operator_index(const EdgeIndexSeq& edges) {
    EdgeIndexSeq out;
    out.first = edges.second;
    out.second = edges.first;
    return out;
}

EdgeIndexSeq operator_index_subset(const EdgeIndexSeq& edges, const std::vector<Index>& subset) {
    EdgeIndexSeq out;
    out.first.reserve(subset.size());
    out.second.reserve(subset.size());
    for (const Index h : subset) out.push_back(edges.second[h], edges.first[h]);
    return out;
}

// Column enumeration of (T (x) D): flat weight l maps to column (l / d, l % d).
EdgeIndexSeq identity_col_index(Index end_cols, Index start_cols) {
    EdgeIndexSeq out;
    out.first.reserve(end_cols * start_cols);
    out.second.reserve(end_cols * start_cols);
    for (Index l = 0; l < end_cols * start_cols; ++l) {
        out.push_back(l / start_cols, l % start_cols);
    }
    return out;
}

// R(G (x) K)R^T a with exact-zero coefficients and their columns dropped.
DenseVector dual_predictions(const DenseMatrix& G, const DenseMatrix& K,
                             const EdgeIndexSeq& row_ops, const EdgeIndexSeq& edges,
                             const DenseVector& a, KronWorkspace& ws) {
    Index nonzero = 0;
    for (Index h = 0; h < a.size(); ++h) {
        if (a[h] != 0.0) ++nonzero;
    }
    if (nonzero == 0) return DenseVector(row_ops.size());
    if (nonzero == a.size()) {
        const SampledKronOperator op(G, K, row_ops, operator_index(edges));
        return sampled_kron_matvec(op, a, &ws);
    }
    EdgeIndexSeq cols;
    DenseVector coeffs;
    cols.first.reserve(nonzero);
    cols.second.reserve(nonzero);
    coeffs.values().reserve(nonzero);
    for (Index h = 0; h < a.size(); ++h) {
        if (a[h] != 0.0) {
            cols.push_back(edges.second[h], edges.first[h]);
            coeffs.values().push_back(a[h]);
        }
    }
    const SampledKronOperator op(G, K, row_ops, std::move(cols));
    return sampled_kron_matvec(op, coeffs, &ws);
}

void check_dual_inputs(const BipartiteDataset& data, const DenseMatrix& K, const DenseMatrix& G) {
    data.validate();
    if (K.rows() != data.start_count() || K.cols() != data.start_count()) {
        throw std::invalid_argument("train dual: start kernel is " + std::to_string(K.rows()) +
                                    "x" + std::to_string(K.cols()) + " for " +
                                    std::to_string(data.start_count()) + " start vertices");
    }
    if (G.rows() != data.end_count() || G.cols() != data.end_count()) {
        throw std::invalid_argument("train dual: end kernel is " + std::to_string(G.rows()) + "x" +
                                    std::to_string(G.cols()) + " for " +
                                    std::to_string(data.end_count()) + " end vertices");
    }
}

void check_config(const TrainConfig& cfg) {
    if (!(cfg.lambda > 0.0)) {
        throw std::invalid_argument("train: lambda must be positive, got " +
                                    std::to_string(cfg.lambda));
    }
    if (cfg.inner_iters < 1) throw std::invalid_argument("train: inner_iters must be >= 1");
    if (!(cfg.step_size > 0.0)) throw std::invalid_argument("train: step_size must be positive");
}

void check_newton_loss(LossKind loss) {
    if (loss == LossKind::l1svm) {
        throw std::invalid_argument(
            "l1svm has a zero generalized Hessian; the truncated Newton trainers need a loss "
            "with a nonzero one (use l2svm instead)");
    }
}

void check_primal_kernels(const TrainConfig& cfg) {
    if (cfg.start_kernel.kind == KernelKind::precomputed ||
        cfg.end_kernel.kind == KernelKind::precomputed) {
        throw std::invalid_argument(
            "primal training requires explicit features, not precomputed kernels");
    }
    if (cfg.start_kernel.kind != KernelKind::linear ||
        cfg.end_kernel.kind != KernelKind::linear) {
        throw std::invalid_argument(
            "primal training operates on the explicit Kronecker feature space; only linear "
            "vertex kernels are supported (use dual mode for gaussian)");
    }
}

DualModel make_dual_model(const BipartiteDataset& data, const TrainConfig& cfg, DenseVector a) {
    DualModel model;
    model.coefficients = std::move(a);
    model.edges = data.edges;
    model.start_kernel = cfg.start_kernel;
    model.end_kernel = cfg.end_kernel;
    model.start_count = data.start_count();
    model.end_count = data.end_count();
    if (cfg.start_kernel.kind != KernelKind::precomputed) {
        model.start_vertices = data.start_features;
    }
    if (cfg.end_kernel.kind != KernelKind::precomputed) {
        model.end_vertices = data.end_features;
    }
    return model;
}

// Rectangular kernel block between validation and training vertices; under a
// precomputed kernel the validation matrix must already be that block.
DenseMatrix validation_kernel_block(const DenseMatrix& validation_side,
                                    const DenseMatrix& training_side, const KernelSpec& spec,
                                    const char* side) {
    if (spec.kind == KernelKind::precomputed) {
        if (validation_side.cols() != training_side.rows()) {
            throw std::invalid_argument(
                std::string("early stopping: precomputed validation ") + side + " block has " +
                std::to_string(validation_side.cols()) + " columns, expected " +
                std::to_string(training_side.rows()));
        }
        return validation_side;
    }
    return kernel_matrix(validation_side, training_side, spec);
}

}  // namespace

EarlyStopDecision early_stop_check(const std::vector<double>& auc_history, Index patience) {
    if (auc_history.empty()) {
        throw std::invalid_argument("early_stop_check: needs at least one recorded round");
    }
    EarlyStopDecision decision;
    for (Index i = 1; i < auc_history.size(); ++i) {
        if (auc_history[i] > auc_history[decision.best_index]) decision.best_index = i;
    }
    decision.stop = (auc_history.size() - 1 - decision.best_index) >= patience;
    return decision;
}

DualModel train_ridge_dual(const BipartiteDataset& data, const DenseMatrix& K,
                           const DenseMatrix& G, const TrainConfig& cfg, TrainReport* report) {
    check_dual_inputs(data, K, G);
    check_config(cfg);
    const Index n = data.edge_count();
    const EdgeIndexSeq rows = operator_index(data.edges);
    const SampledKronOperator op(G, K, rows, rows);

    KronWorkspace ws;
    LinearOperator system;
    system.dim = n;
    const double lambda = cfg.lambda;
    system.apply = [&](const DenseVector& v) {
        DenseVector out = sampled_kron_matvec(op, v, &ws);
        axpy(lambda, v, out);
        return out;
    };

    // The single linear system gets the whole iteration budget.
    const Index cap = std::max<Index>(1, cfg.outer_iters) * cfg.inner_iters;
    const SolveReport solve = solve_symmetric(system, data.labels, cap, cfg.tol);

    if (report) {
        report->solver_iterations = solve.iterations;
        const DenseVector p = sampled_kron_matvec(op, solve.solution, &ws);
        report->objective_history = {loss_value(LossKind::ridge, p, data.labels) +
                                     0.5 * lambda * dot(solve.solution, p)};
        report->best_round = 0;
    }
    return make_dual_model(data, cfg, solve.solution);
}

PrimalModel train_ridge_primal(const BipartiteDataset& data, const TrainConfig& cfg,
                               TrainReport* report) {
    data.validate();
    check_config(cfg);
    check_primal_kernels(cfg);
    const Index d = data.start_features.cols();
    const Index r = data.end_features.cols();
    const SampledKronOperator op(data.end_features, data.start_features,
                                 operator_index(data.edges), identity_col_index(r, d));

    KronWorkspace ws;
    LinearOperator system;
    system.dim = d * r;
    const double lambda = cfg.lambda;
    system.apply = [&](const DenseVector& v) {
        const DenseVector t = sampled_kron_matvec(op, v, &ws);
        DenseVector out = sampled_kron_matvec_transposed(op, t, &ws);
        axpy(lambda, v, out);
        return out;
    };
    const DenseVector rhs = sampled_kron_matvec_transposed(op, data.labels, &ws);

    const Index cap = std::max<Index>(1, cfg.outer_iters) * cfg.inner_iters;
    const SolveReport solve = solve_symmetric(system, rhs, cap, cfg.tol);

    if (report) {
        report->solver_iterations = solve.iterations;
        const DenseVector p = sampled_kron_matvec(op, solve.solution, &ws);
        report->objective_history = {loss_value(LossKind::ridge, p, data.labels) +
                                     0.5 * lambda * dot(solve.solution, solve.solution)};
        report->best_round = 0;
    }

    PrimalModel model;
    model.weights = solve.solution;
    model.start_dim = d;
    model.end_dim = r;
    return model;
}

namespace {

// Shared outer loop of Algorithms 2-3. The callbacks hide whether the state
// vector is dual coefficients or primal weights:
//   predictions(c): training predictions for state c
//   solve_step(c, p, g): inner solve for the Newton direction
//   objective(c, p): loss plus the matching regularizer
//   validation_scores(c): scores on the early-stopping set
template <typename Predict, typename SolveStep, typename Objective, typename Validate>
DenseVector newton_loop(const TrainConfig& cfg, const DenseVector& y, Index state_dim,
                        Predict&& predictions, SolveStep&& solve_step, Objective&& objective,
                        Validate&& validation_scores, const char* who, TrainReport* report) {
    DenseVector state(state_dim);
    DenseVector p(y.size());
    double current_objective = objective(state, p);

    DenseVector best_state = state;
    std::vector<double> auc_history;
    bool stopped_early = false;
    Index best_round = 0;

    for (Index outer = 0; outer < cfg.outer_iters; ++outer) {
        const DenseVector g = loss_gradient(cfg.loss, p, y);
        SolveReport inner = solve_step(state, p, g);
        if (report) report->solver_iterations += inner.iterations;

        // delta = step_size, halved (at most 10 times) only if the step
        // fails to decrease the objective.
        double delta = cfg.step_size;
        bool accepted = false;
        DenseVector next_state, next_p;
        double next_objective = 0.0;
        for (int halving = 0; halving <= 10; ++halving) {
            next_state = state;
            axpy(-delta, inner.solution, next_state);
            next_p = predictions(next_state);
            next_objective = objective(next_state, next_p);
            if (!std::isfinite(next_objective)) {
                throw NumericalError(std::string(who) + ": non-finite objective at outer round " +
                                     std::to_string(outer + 1) + " (delta=" +
                                     std::to_string(delta) + ", |state|_inf=" +
                                     std::to_string(norm_inf(next_state)) + ", |step|_inf=" +
                                     std::to_string(norm_inf(inner.solution)) + ")");
            }
            if (next_objective <= current_objective + 1e-12 * (1.0 + std::abs(current_objective))) {
                accepted = true;
                break;
            }
            delta *= 0.5;
        }
        if (!accepted) break;  // no step length decreases the objective

        state = std::move(next_state);
        p = std::move(next_p);
        current_objective = next_objective;
        if (report) report->objective_history.push_back(current_objective);

        if (cfg.early_stop) {
            const DenseVector scores = validation_scores(state);
            auc_history.push_back(auc(scores, cfg.early_stop->validation.labels));
            const EarlyStopDecision decision = early_stop_check(auc_history, cfg.early_stop->patience);
            if (decision.best_index == auc_history.size() - 1) best_state = state;
            best_round = decision.best_index;
            if (decision.stop) {
                stopped_early = true;
                break;
            }
        }
    }

    if (report) {
        report->validation_auc_history = auc_history;
        report->stopped_early = stopped_early;
        report->best_round =
            cfg.early_stop ? best_round
                           : (report->objective_history.empty()
                                  ? 0
                                  : report->objective_history.size() - 1);
    }
    return cfg.early_stop && !auc_history.empty() ? best_state : state;
}

}  // namespace

DualModel train_newton_dual(const BipartiteDataset& data, const DenseMatrix& K,
                            const DenseMatrix& G, const TrainConfig& cfg, TrainReport* report) {
    check_dual_inputs(data, K, G);
    check_config(cfg);
    check_newton_loss(cfg.loss);
    const Index n = data.edge_count();
    const double lambda = cfg.lambda;
    const EdgeIndexSeq rows = operator_index(data.edges);
    const SampledKronOperator full_op(G, K, rows, rows);
    KronWorkspace ws;

    // Early-stopping machinery: rectangular kernel blocks against the
    // validation vertices, computed once.
    DenseMatrix k_val, g_val;
    EdgeIndexSeq val_rows;
    if (cfg.early_stop) {
        const BipartiteDataset& val = cfg.early_stop->validation;
        val.validate();
        k_val = validation_kernel_block(val.start_features, data.start_features, cfg.start_kernel,
                                        "start");
        g_val = validation_kernel_block(val.end_features, data.end_features, cfg.end_kernel,
                                        "end");
        val_rows = operator_index(val.edges);
    }

    const auto predictions = [&](const DenseVector& a) {
        return dual_predictions(G, K, rows, data.edges, a, ws);
    };
    const auto objective = [&](const DenseVector& a, const DenseVector& p) {
        return loss_value(cfg.loss, p, data.labels) + 0.5 * lambda * dot(a, p);
    };
    const auto validation_scores = [&](const DenseVector& a) {
        return dual_predictions(g_val, k_val, val_rows, data.edges, a, ws);
    };

    const auto solve_step = [&](const DenseVector& a, const DenseVector& p, const DenseVector& g) {
        DenseVector rhs = g;
        axpy(lambda, a, rhs);

        LinearOperator system;
        system.dim = n;
        SolveReport result;
        if (cfg.loss == LossKind::l2svm) {
            // Only active-margin rows carry the generalized Hessian, so the
            // inner matvec gathers just those rows and scatters them back.
            const std::vector<Index> active = l2svm_active_set(p, data.labels);
            if (active.empty()) {
                system.apply = [&](const DenseVector& v) {
                    DenseVector out = v;
                    scale(out, lambda);
                    return out;
                };
                return solve_general(system, rhs, cfg.inner_iters, cfg.tol);
            }
            const SampledKronOperator active_op(G, K, operator_index_subset(data.edges, active),
                                                rows);
            system.apply = [&, active_op](const DenseVector& v) {
                const DenseVector gathered = sampled_kron_matvec(active_op, v, &ws);
                DenseVector out = v;
                scale(out, lambda);
                for (Index i = 0; i < active.size(); ++i) out[active[i]] += gathered[i];
                return out;
            };
            return solve_general(system, rhs, cfg.inner_iters, cfg.tol);
        }
        const HessianOp hess = loss_hessian(cfg.loss, p, data.labels);
        system.apply = [&](const DenseVector& v) {
            const DenseVector t = sampled_kron_matvec(full_op, v, &ws);
            DenseVector out = hess.apply(t);
            axpy(lambda, v, out);
            return out;
        };
        return solve_general(system, rhs, cfg.inner_iters, cfg.tol);
    };

    DenseVector a = newton_loop(cfg, data.labels, n, predictions, solve_step, objective,
                                validation_scores, "train_newton_dual", report);
    return make_dual_model(data, cfg, std::move(a));
}

PrimalModel train_newton_primal(const BipartiteDataset& data, const TrainConfig& cfg,
                                TrainReport* report) {
    data.validate();
    check_config(cfg);
    check_newton_loss(cfg.loss);
    check_primal_kernels(cfg);
    const Index d = data.start_features.cols();
    const Index r = data.end_features.cols();
    const double lambda = cfg.lambda;
    const EdgeIndexSeq cols = identity_col_index(r, d);
    const SampledKronOperator op(data.end_features, data.start_features,
                                 operator_index(data.edges), cols);
    KronWorkspace ws;

    EdgeIndexSeq val_rows;
    if (cfg.early_stop) {
        const BipartiteDataset& val = cfg.early_stop->validation;
        val.validate();
        if (val.start_features.cols() != d || val.end_features.cols() != r) {
            throw std::invalid_argument(
                "early stopping: validation feature dims do not match training");
        }
        val_rows = operator_index(val.edges);
    }

    const auto predictions = [&](const DenseVector& w) {
        return sampled_kron_matvec(op, w, &ws);
    };
    const auto objective = [&](const DenseVector& w, const DenseVector& p) {
        return loss_value(cfg.loss, p, data.labels) + 0.5 * lambda * dot(w, w);
    };
    const auto validation_scores = [&](const DenseVector& w) {
        const SampledKronOperator val_op(cfg.early_stop->validation.end_features,
                                         cfg.early_stop->validation.start_features, val_rows,
                                         cols);
        return sampled_kron_matvec(val_op, w, &ws);
    };

    const auto solve_step = [&](const DenseVector& w, const DenseVector& p, const DenseVector& g) {
        LinearOperator system;
        system.dim = d * r;
        DenseVector rhs;
        if (cfg.loss == LossKind::l2svm) {
            const std::vector<Index> active = l2svm_active_set(p, data.labels);
            if (active.empty()) {
                rhs = w;
                scale(rhs, lambda);
                system.apply = [&](const DenseVector& v) {
                    DenseVector out = v;
                    scale(out, lambda);
                    return out;
                };
                return solve_symmetric(system, rhs, cfg.inner_iters, cfg.tol);
            }
            const SampledKronOperator active_op(data.end_features, data.start_features,
                                                operator_index_subset(data.edges, active), cols);
            DenseVector g_active(active.size());
            for (Index i = 0; i < active.size(); ++i) g_active[i] = g[active[i]];
            rhs = sampled_kron_matvec_transposed(active_op, g_active, &ws);
            axpy(lambda, w, rhs);
            system.apply = [&, active_op](const DenseVector& v) {
                const DenseVector t = sampled_kron_matvec(active_op, v, &ws);
                DenseVector out = sampled_kron_matvec_transposed(active_op, t, &ws);
                axpy(lambda, v, out);
                return out;
            };
            return solve_symmetric(system, rhs, cfg.inner_iters, cfg.tol);
        }
        const HessianOp hess = loss_hessian(cfg.loss, p, data.labels);
        rhs = sampled_kron_matvec_transposed(op, g, &ws);
        axpy(lambda, w, rhs);
        system.apply = [&](const DenseVector& v) {
            const DenseVector t = sampled_kron_matvec(op, v, &ws);
            DenseVector out = sampled_kron_matvec_transposed(op, hess.apply(t), &ws);
            axpy(lambda, v, out);
            return out;
        };
        return solve_symmetric(system, rhs, cfg.inner_iters, cfg.tol);
    };

    DenseVector w = newton_loop(cfg, data.labels, d * r, predictions, solve_step, objective,
                                validation_scores, "train_newton_primal", report);
    PrimalModel model;
    model.weights = std::move(w);
    model.start_dim = d;
    model.end_dim = r;
    return model;
}

}  // namespace kronlearn
