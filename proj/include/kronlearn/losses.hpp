#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kronlearn/matrix.hpp"

namespace kronlearn {

/// l1svm is recognized for value/subgradient only; the Newton trainers and
/// loss_hessian reject it.
enum class LossKind { ridge, l2svm, logistic, rankrls, l1svm };

LossKind parse_loss_kind(const std::string& name);
std::string to_string(LossKind kind);
bool is_classification_loss(LossKind kind);

/// Generalized Hessian of a loss at fixed (p, y), applied matrix-free.
/// ridge: identity. l2svm: 0/1 diagonal over the active margin set.
/// logistic: positive diagonal. rankrls: n*I - 1*1^T.
class HessianOp {
public:
    DenseVector apply(const DenseVector& v) const;
    Index dim() const { return dim_; }

    /// Diagonal entries for the diagonal forms; for rankrls the implicit
    /// diagonal is n-1 and is not stored.
    const DenseVector& diagonal() const { return diagonal_; }

    static HessianOp identity(Index n);
    static HessianOp diagonal_form(DenseVector diag);
    static HessianOp rank_centering(Index n);

private:
    enum class Form { identity, diagonal, rank_centering };
    Form form_ = Form::identity;
    Index dim_ = 0;
    DenseVector diagonal_;
};

double loss_value(LossKind kind, const DenseVector& p, const DenseVector& y);
DenseVector loss_gradient(LossKind kind, const DenseVector& p, const DenseVector& y);
HessianOp loss_hessian(LossKind kind, const DenseVector& p, const DenseVector& y);

/// Hinge value and a subgradient; provided for completeness, not consumed by
/// the trainers.
std::pair<double, DenseVector> l1svm_value_subgradient(const DenseVector& p, const DenseVector& y);

/// Indices with p_i * y_i < 1 (strict), the rows that carry the l2svm
/// generalized Hessian.
std::vector<Index> l2svm_active_set(const DenseVector& p, const DenseVector& y);

}  // namespace kronlearn
