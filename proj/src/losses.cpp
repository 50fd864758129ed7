#include "kronlearn/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "kronlearn/error.hpp"

namespace kronlearn {

namespace {

// log(1 + exp(x)) without overflow for large |x|.
double softplus(double x) {
    if (x > 30.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// 1 / (1 + exp(-x)), saturating instead of overflowing.
double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double ex = std::exp(x);
    return ex / (1.0 + ex);
}

void check_inputs(LossKind kind, const DenseVector& p, const DenseVector& y) {
    if (p.size() != y.size()) {
        throw std::invalid_argument("loss: prediction length " + std::to_string(p.size()) +
                                    " vs label length " + std::to_string(y.size()));
    }
    if (is_classification_loss(kind)) {
        for (Index i = 0; i < y.size(); ++i) {
            if (y[i] != 1.0 && y[i] != -1.0) {
                throw DataError("loss " + to_string(kind) + ": label at index " +
                                std::to_string(i) + " is " + std::to_string(y[i]) +
                                ", classification losses require labels in {-1,+1}");
            }
        }
    }
}

}  // namespace

LossKind parse_loss_kind(const std::string& name) {
    if (name == "ridge") return LossKind::ridge;
    if (name == "l2svm") return LossKind::l2svm;
    if (name == "logistic") return LossKind::logistic;
    if (name == "rankrls") return LossKind::rankrls;
    if (name == "l1svm") return LossKind::l1svm;
    throw std::invalid_argument("unknown loss '" + name +
                                "' (expected ridge, l2svm, logistic or rankrls)");
}

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::ridge: return "ridge";
        case LossKind::l2svm: return "l2svm";
        case LossKind::logistic: return "logistic";
        case LossKind::rankrls: return "rankrls";
        case LossKind::l1svm: return "l1svm";
    }
    return "ridge";
}

bool is_classification_loss(LossKind kind) {
    return kind == LossKind::l2svm || kind == LossKind::logistic || kind == LossKind::l1svm;
}

HessianOp HessianOp::identity(Index n) {
    HessianOp op;
    op.form_ = Form::identity;
    op.dim_ = n;
    return op;
}

HessianOp HessianOp::diagonal_form(DenseVector diag) {
    HessianOp op;
    op.form_ = Form::diagonal;
    op.dim_ = diag.size();
    op.diagonal_ = std::move(diag);
    return op;
}

HessianOp HessianOp::rank_centering(Index n) {
    HessianOp op;
    op.form_ = Form::rank_centering;
    op.dim_ = n;
    return op;
}

DenseVector HessianOp::apply(const DenseVector& v) const {
    if (v.size() != dim_) {
        throw std::invalid_argument("HessianOp: vector length " + std::to_string(v.size()) +
                                    " vs dim " + std::to_string(dim_));
    }
    switch (form_) {
        case Form::identity:
            return v;
        case Form::diagonal: {
            DenseVector out(dim_);
            for (Index i = 0; i < dim_; ++i) out[i] = diagonal_[i] * v[i];
            return out;
        }
        case Form::rank_centering: {
            // n I - 1 1^T
            double total = 0.0;
            for (Index i = 0; i < dim_; ++i) total += v[i];
            DenseVector out(dim_);
            const double n = static_cast<double>(dim_);
            for (Index i = 0; i < dim_; ++i) out[i] = n * v[i] - total;
            return out;
        }
    }
    return v;
}

double loss_value(LossKind kind, const DenseVector& p, const DenseVector& y) {
    check_inputs(kind, p, y);
    const Index n = p.size();
    switch (kind) {
        case LossKind::ridge: {
            double s = 0.0;
            for (Index i = 0; i < n; ++i) {
                const double e = p[i] - y[i];
                s += e * e;
            }
            return 0.5 * s;
        }
        case LossKind::l2svm: {
            double s = 0.0;
            for (Index i = 0; i < n; ++i) {
                const double m = 1.0 - p[i] * y[i];
                if (m > 0.0) s += m * m;
            }
            return 0.5 * s;
        }
        case LossKind::logistic: {
            double s = 0.0;
            for (Index i = 0; i < n; ++i) s += softplus(-y[i] * p[i]);
            return s;
        }
        case LossKind::rankrls: {
            // (1/4) sum_ij (e_i - e_j)^2 = (n/2) sum e^2 - (1/2) (sum e)^2
            double sum = 0.0, sumsq = 0.0;
            for (Index i = 0; i < n; ++i) {
                const double e = y[i] - p[i];
                sum += e;
                sumsq += e * e;
            }
            return 0.5 * static_cast<double>(n) * sumsq - 0.5 * sum * sum;
        }
        case LossKind::l1svm: {
            double s = 0.0;
            for (Index i = 0; i < n; ++i) s += std::max(0.0, 1.0 - p[i] * y[i]);
            return s;
        }
    }
    return 0.0;
}

DenseVector loss_gradient(LossKind kind, const DenseVector& p, const DenseVector& y) {
    check_inputs(kind, p, y);
    const Index n = p.size();
    DenseVector g(n);
    switch (kind) {
        case LossKind::ridge:
            for (Index i = 0; i < n; ++i) g[i] = p[i] - y[i];
            break;
        case LossKind::l2svm:
            for (Index i = 0; i < n; ++i) g[i] = (p[i] * y[i] < 1.0) ? p[i] - y[i] : 0.0;
            break;
        case LossKind::logistic:
            for (Index i = 0; i < n; ++i) g[i] = -y[i] * sigmoid(-y[i] * p[i]);
            break;
        case LossKind::rankrls: {
            double sum = 0.0;
            for (Index i = 0; i < n; ++i) sum += y[i] - p[i];
            const double nn = static_cast<double>(n);
            for (Index i = 0; i < n; ++i) g[i] = sum + nn * (p[i] - y[i]);
            break;
        }
        case LossKind::l1svm:
            for (Index i = 0; i < n; ++i) g[i] = (p[i] * y[i] < 1.0) ? -y[i] : 0.0;
            break;
    }
    return g;
}

HessianOp loss_hessian(LossKind kind, const DenseVector& p, const DenseVector& y) {
    check_inputs(kind, p, y);
    const Index n = p.size();
    switch (kind) {
        case LossKind::ridge:
            return HessianOp::identity(n);
        case LossKind::l2svm: {
            DenseVector diag(n);
            for (Index i = 0; i < n; ++i) diag[i] = (p[i] * y[i] < 1.0) ? 1.0 : 0.0;
            return HessianOp::diagonal_form(std::move(diag));
        }
        case LossKind::logistic: {
            DenseVector diag(n);
            for (Index i = 0; i < n; ++i) {
                const double s = sigmoid(y[i] * p[i]);
                diag[i] = s * (1.0 - s);
            }
            return HessianOp::diagonal_form(std::move(diag));
        }
        case LossKind::rankrls:
            return HessianOp::rank_centering(n);
        case LossKind::l1svm:
            throw std::invalid_argument(
                "l1svm has a zero generalized Hessian; the truncated Newton framework needs a "
                "loss with a nonzero one (use l2svm instead)");
    }
    return HessianOp::identity(n);
}

std::pair<double, DenseVector> l1svm_value_subgradient(const DenseVector& p,
                                                       const DenseVector& y) {
    return {loss_value(LossKind::l1svm, p, y), loss_gradient(LossKind::l1svm, p, y)};
}

std::vector<Index> l2svm_active_set(const DenseVector& p, const DenseVector& y) {
    check_inputs(LossKind::l2svm, p, y);
    std::vector<Index> active;
    for (Index i = 0; i < p.size(); ++i) {
        if (p[i] * y[i] < 1.0) active.push_back(i);
    }
    return active;
}

}  // namespace kronlearn
