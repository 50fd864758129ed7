#include "kronlearn/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kronlearn/error.hpp"

namespace kronlearn {

namespace {

constexpr double kTinyNorm = 1e-300;

DenseVector apply_checked(const LinearOperator& a, const DenseVector& v, const char* who) {
    DenseVector out = a.apply(v);
    if (out.size() != a.dim) {
        throw std::invalid_argument(std::string(who) + ": operator returned length " +
                                    std::to_string(out.size()) + ", expected " +
                                    std::to_string(a.dim));
    }
    return out;
}

double explicit_relative_residual(const LinearOperator& a, const DenseVector& b,
                                  const DenseVector& x, double bnorm, const char* who) {
    DenseVector r = apply_checked(a, x, who);
    for (Index i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return norm2(r) / std::max(bnorm, kTinyNorm);
}

void require_dims(const LinearOperator& a, const DenseVector& b, const char* who) {
    if (!a.apply) {
        throw std::invalid_argument(std::string(who) + ": operator has no apply closure");
    }
    if (a.dim != b.size()) {
        throw std::invalid_argument(std::string(who) + ": operator dim " + std::to_string(a.dim) +
                                    " vs rhs length " + std::to_string(b.size()));
    }
}

}  // namespace

SolveReport solve_symmetric(const LinearOperator& a, const DenseVector& b, Index max_iters,
                            double tol) {
    require_dims(a, b, "solve_symmetric");
    const Index n = b.size();
    SolveReport report;
    report.solution = DenseVector(n);

    const double beta1 = norm2(b);
    if (beta1 == 0.0) {
        report.converged = true;
        return report;
    }

    // Lanczos pair and the last two QR'd search directions.
    DenseVector v = b;
    scale(v, 1.0 / beta1);
    DenseVector v_prev(n);
    DenseVector d_km1(n), d_km2(n);
    double beta_k = 0.0;
    double c_km2 = 1.0, s_km2 = 0.0, c_km1 = 1.0, s_km1 = 0.0;
    double phibar = beta1;

    for (Index k = 1; k <= max_iters; ++k) {
        DenseVector w = apply_checked(a, v, "solve_symmetric");
        if (k > 1) axpy(-beta_k, v_prev, w);
        const double alpha = dot(v, w);
        axpy(-alpha, v, w);
        const double beta_next = norm2(w);
        if (!std::isfinite(alpha) || !std::isfinite(beta_next)) {
            throw NumericalError("solve_symmetric: non-finite Lanczos value at iteration " +
                                 std::to_string(k));
        }

        // Apply the two previous Givens rotations to column k of the
        // tridiagonal, then form the one that zeroes beta_next.
        const double eps = s_km2 * beta_k;
        const double dtilde = c_km2 * beta_k;
        const double delta = c_km1 * dtilde + s_km1 * alpha;
        const double gtilde = -s_km1 * dtilde + c_km1 * alpha;
        const double rho = std::sqrt(gtilde * gtilde + beta_next * beta_next);
        if (rho == 0.0) {
            throw NumericalError("solve_symmetric: singular projected system at iteration " +
                                 std::to_string(k));
        }
        const double c_k = gtilde / rho;
        const double s_k = beta_next / rho;
        const double tau = c_k * phibar;
        phibar = -s_k * phibar;

        // d_k = (v - delta d_{k-1} - eps d_{k-2}) / rho
        DenseVector d_k = v;
        if (k > 1) axpy(-delta, d_km1, d_k);
        if (k > 2) axpy(-eps, d_km2, d_k);
        scale(d_k, 1.0 / rho);
        axpy(tau, d_k, report.solution);

        d_km2 = std::move(d_km1);
        d_km1 = std::move(d_k);
        c_km2 = c_km1;
        s_km2 = s_km1;
        c_km1 = c_k;
        s_km1 = s_k;
        report.iterations = k;

        if (!std::isfinite(phibar)) {
            throw NumericalError("solve_symmetric: non-finite residual estimate at iteration " +
                                 std::to_string(k));
        }
        if (std::abs(phibar) <= tol * beta1 || beta_next <= kTinyNorm) break;

        v_prev = std::move(v);
        v = std::move(w);
        scale(v, 1.0 / beta_next);
        beta_k = beta_next;
    }

    report.final_relative_residual =
        explicit_relative_residual(a, b, report.solution, beta1, "solve_symmetric");
    report.converged = report.final_relative_residual <= tol;
    return report;
}

SolveReport solve_general(const LinearOperator& a, const DenseVector& b, Index max_iters,
                          double tol) {
    require_dims(a, b, "solve_general");
    const Index n = b.size();
    SolveReport report;
    report.solution = DenseVector(n);

    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        report.converged = true;
        return report;
    }

    // Restarted GMRES: Arnoldi with modified Gram-Schmidt, the Hessenberg
    // kept triangular by Givens rotations. One iteration is one operator
    // application. Quasi-minimal-residual methods with short recurrences were
    // measured to stall on the clustered spectra of the kernel systems here,
    // so the inner budget buys full minimization instead; the basis is capped
    // per restart cycle to bound memory.
    const Index restart = std::min<Index>(std::max<Index>(max_iters, 1), 128);
    std::vector<DenseVector> basis;
    std::vector<double> hess((restart + 1) * restart, 0.0);
    const auto h_at = [&](Index i, Index j) -> double& { return hess[i * restart + j]; };
    std::vector<double> givens_c(restart), givens_s(restart), rhs(restart + 1);

    DenseVector x(n);
    Index total_iters = 0;
    while (total_iters < max_iters) {
        DenseVector residual = apply_checked(a, x, "solve_general");
        for (Index i = 0; i < n; ++i) residual[i] = b[i] - residual[i];
        const double rnorm = norm2(residual);
        if (!std::isfinite(rnorm)) {
            throw NumericalError("solve_general: non-finite residual at iteration " +
                                 std::to_string(total_iters));
        }
        if (rnorm <= tol * bnorm) break;

        basis.clear();
        scale(residual, 1.0 / rnorm);
        basis.push_back(std::move(residual));
        std::fill(rhs.begin(), rhs.end(), 0.0);
        rhs[0] = rnorm;

        Index steps = 0;
        bool exhausted = false;
        while (steps < restart && total_iters < max_iters && !exhausted) {
            const Index j = steps;
            DenseVector w = apply_checked(a, basis[j], "solve_general");
            ++total_iters;
            for (Index i = 0; i <= j; ++i) {
                const double hij = dot(w, basis[i]);
                h_at(i, j) = hij;
                axpy(-hij, basis[i], w);
            }
            const double hnext = norm2(w);
            if (!std::isfinite(hnext)) {
                throw NumericalError("solve_general: non-finite Arnoldi vector at iteration " +
                                     std::to_string(total_iters));
            }
            h_at(j + 1, j) = hnext;

            // Rotate column j into triangular form.
            for (Index i = 0; i < j; ++i) {
                const double tmp = givens_c[i] * h_at(i, j) + givens_s[i] * h_at(i + 1, j);
                h_at(i + 1, j) = -givens_s[i] * h_at(i, j) + givens_c[i] * h_at(i + 1, j);
                h_at(i, j) = tmp;
            }
            const double denom = std::sqrt(h_at(j, j) * h_at(j, j) + hnext * hnext);
            if (denom <= kTinyNorm) {
                // The operator annihilated the basis direction; nothing more
                // to extract from this cycle.
                exhausted = true;
                break;
            }
            givens_c[j] = h_at(j, j) / denom;
            givens_s[j] = hnext / denom;
            h_at(j, j) = denom;
            rhs[j + 1] = -givens_s[j] * rhs[j];
            rhs[j] *= givens_c[j];
            ++steps;

            if (hnext <= kTinyNorm * std::max(1.0, denom)) {
                exhausted = true;  // invariant subspace reached, solution is exact
            } else if (std::abs(rhs[j + 1]) <= tol * bnorm) {
                break;
            } else {
                scale(w, 1.0 / hnext);
                basis.push_back(std::move(w));
            }
        }

        if (steps == 0) break;
        // Back-substitute the triangular system and expand the correction.
        std::vector<double> y(steps, 0.0);
        for (Index ri = steps; ri-- > 0;) {
            double s = rhs[ri];
            for (Index c = ri + 1; c < steps; ++c) s -= h_at(ri, c) * y[c];
            y[ri] = s / h_at(ri, ri);
        }
        for (Index i = 0; i < steps; ++i) axpy(y[i], basis[i], x);
        if (exhausted) break;
    }

    report.solution = std::move(x);
    report.iterations = total_iters;
    report.final_relative_residual =
        explicit_relative_residual(a, b, report.solution, bnorm, "solve_general");
    report.converged = report.final_relative_residual <= tol;
    return report;
}

}  // namespace kronlearn
