// Test-only oracles, kept independent of the library's fast paths: a dense
// Gaussian-elimination solve, explicit sampled-Kronecker matrices built
// entry by entry from the definition, and a deterministic test RNG.
#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "kronlearn/kron.hpp"
#include "kronlearn/matrix.hpp"

namespace oracles {

using kronlearn::DenseMatrix;
using kronlearn::DenseVector;
using kronlearn::EdgeIndexSeq;
using kronlearn::Index;

// Gaussian elimination with partial pivoting.
inline DenseVector dense_solve(DenseMatrix a, DenseVector b) {
    const Index n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("dense_solve: dims");
    for (Index col = 0; col < n; ++col) {
        Index pivot = col;
        for (Index r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        }
        if (a(pivot, col) == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        if (pivot != col) {
            for (Index c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
            std::swap(b[col], b[pivot]);
        }
        for (Index r = col + 1; r < n; ++r) {
            const double factor = a(r, col) / a(col, col);
            if (factor == 0.0) continue;
            for (Index c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
            b[r] -= factor * b[col];
        }
    }
    DenseVector x(n);
    for (Index ri = n; ri-- > 0;) {
        double s = b[ri];
        for (Index c = ri + 1; c < n; ++c) s -= a(ri, c) * x[c];
        x[ri] = s / a(ri, ri);
    }
    return x;
}

// Entry (h, g) = M[p_h, r_g] * N[q_h, t_g], straight from the Kronecker
// definition plus the index selections.
inline DenseMatrix explicit_sampled_kron(const DenseMatrix& m, const DenseMatrix& n,
                                         const EdgeIndexSeq& rows, const EdgeIndexSeq& cols) {
    DenseMatrix out(rows.size(), cols.size());
    for (Index h = 0; h < rows.size(); ++h) {
        for (Index g = 0; g < cols.size(); ++g) {
            out(h, g) = m(rows.first[h], cols.first[g]) * n(rows.second[h], cols.second[g]);
        }
    }
    return out;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (Index r = 0; r < a.rows(); ++r) {
        for (Index c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
    }
    return out;
}

inline double rel_inf_error(const DenseVector& got, const DenseVector& want) {
    double diff = 0.0, ref = 0.0;
    for (Index i = 0; i < got.size(); ++i) {
        diff = std::max(diff, std::abs(got[i] - want[i]));
        ref = std::max(ref, std::abs(want[i]));
    }
    return diff / (1.0 + ref);
}

// Deterministic generators for test instances (std::mt19937_64 is fine here;
// portability only matters for the library's own simulation RNG).
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    Index index(Index n) {
        return std::uniform_int_distribution<Index>(0, n - 1)(engine_);
    }
    DenseVector vector(Index n, double lo = -1.0, double hi = 1.0) {
        DenseVector v(n);
        for (Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }
    DenseMatrix matrix(Index rows, Index cols, double lo = -1.0, double hi = 1.0) {
        DenseMatrix m(rows, cols);
        for (Index r = 0; r < rows; ++r) {
            for (Index c = 0; c < cols; ++c) m(r, c) = uniform(lo, hi);
        }
        return m;
    }
    EdgeIndexSeq edges(Index count, Index first_bound, Index second_bound) {
        EdgeIndexSeq seq;
        for (Index h = 0; h < count; ++h) seq.push_back(index(first_bound), index(second_bound));
        return seq;
    }

private:
    std::mt19937_64 engine_;
};

// Random instance of the sampled product exercising every dimension.
struct KronInstance {
    DenseMatrix m, n;
    EdgeIndexSeq rows, cols;
    DenseVector v;
};

inline KronInstance random_kron_instance(TestRng& rng, Index max_dim = 8, Index max_edges = 64) {
    KronInstance inst;
    const Index a = 1 + rng.index(max_dim);
    const Index b = 1 + rng.index(max_dim);
    const Index c = 1 + rng.index(max_dim);
    const Index d = 1 + rng.index(max_dim);
    const Index f = 1 + rng.index(max_edges);
    const Index e = 1 + rng.index(max_edges);
    inst.m = rng.matrix(a, b);
    inst.n = rng.matrix(c, d);
    inst.rows = rng.edges(f, a, c);
    inst.cols = rng.edges(e, b, d);
    inst.v = rng.vector(e);
    return inst;
}

}  // namespace oracles
