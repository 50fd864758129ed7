#pragma once

#include <functional>

#include "kronlearn/matrix.hpp"

namespace kronlearn {

/// A linear map exposed only through matvec closures. apply_transposed is
/// optional and unused by the solvers here; it exists for callers composing
/// operators.
struct LinearOperator {
    Index dim = 0;
    std::function<DenseVector(const DenseVector&)> apply;
    std::function<DenseVector(const DenseVector&)> apply_transposed;
};

struct SolveReport {
    DenseVector solution;
    Index iterations = 0;
    /// ||b - A x|| / max(||b||, eps), recomputed from an explicit matvec.
    double final_relative_residual = 0.0;
    bool converged = false;
};

/// MINRES for symmetric (possibly indefinite) operators. Starts from the zero
/// vector; stops at `tol` on the relative residual or at `max_iters`. Hitting
/// the iteration cap is not an error -- truncated solves are the intended
/// early-stopping mode -- so inspect `converged` when exactness matters.
/// Throws NumericalError if NaN/Inf appears in the recurrence.
SolveReport solve_symmetric(const LinearOperator& a, const DenseVector& b,
                            Index max_iters, double tol = 1e-6);

/// Transpose-free QMR for general operators; same contract as
/// solve_symmetric. Only `apply` is required. Throws NumericalError on
/// breakdown (near-zero inner product) or NaN/Inf.
SolveReport solve_general(const LinearOperator& a, const DenseVector& b,
                          Index max_iters, double tol = 1e-6);

}  // namespace kronlearn
