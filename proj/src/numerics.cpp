// SPDX-License-Identifier: Apache-2.0
#include "femtoslice/numerics.hpp"

#include <cmath>
#include <stdexcept>

#include "femtoslice/errors.hpp"
#include "femtoslice/tolerances.hpp"

namespace femtoslice::numerics {

namespace {

void require_finite(const std::vector<cx>& entries) {
    for (const cx& e : entries) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
            throw std::invalid_argument("non-finite matrix entry");
        }
    }
}

} // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), e_(rows * cols, cx(0.0, 0.0)) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (e_.size() != rows_ * cols_) {
        throw std::invalid_argument("entry count does not match matrix shape");
    }
    require_finite(e_);
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(const std::vector<cx>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    require_finite(m.e_);
    return m;
}

CVector::CVector(std::size_t n) : e_(n, cx(0.0, 0.0)) {}

CVector::CVector(std::vector<cx> entries) : e_(std::move(entries)) {
    require_finite(e_);
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul shape mismatch");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cx aik = a(i, k);
            if (aik == cx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

CMatrix add(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("add shape mismatch");
    }
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

CMatrix scale(const CMatrix& a, cx s) {
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) * s;
    return out;
}

CMatrix hermitian(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

CMatrix invert(const CMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("invert needs a square matrix");
    const std::size_t n = a.rows();
    // Gauss-Jordan on [A | I] with partial pivoting.
    CMatrix w(a);
    CMatrix inv = CMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(w(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::abs(w(r, col));
            if (mag > best) { best = mag; pivot = r; }
        }
        if (best < tol::kPivotMin) {
            throw SingularMatrixError("pivot below threshold during inversion");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(col, j), w(pivot, j));
                std::swap(inv(col, j), inv(pivot, j));
            }
        }
        const cx p = w(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            w(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const cx f = w(r, col);
            if (f == cx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                w(r, j) -= f * w(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

CVector matvec(const CMatrix& a, const CVector& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("matvec shape mismatch");
    CVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cx acc(0.0, 0.0);
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

cx dot_conj(const CVector& u, const CVector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("dot shape mismatch");
    cx acc(0.0, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

double norm(const CVector& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::norm(v[i]);
    return std::sqrt(acc);
}

CVector normalize(const CVector& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    CVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
    return out;
}

CVector phase_fix(const CVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > tol::kPhaseEntryMin) {
            const cx rot = std::conj(v[i]) / mag;
            CVector out(v.size());
            for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] * rot;
            return out;
        }
    }
    return v;
}

EigenPair max_eigenvector(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("max_eigenvector needs a square matrix");
    }
    const std::size_t n = a.rows();
    CMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));

    // Fixed pseudo-random start so no crafted input sits orthogonal to the
    // dominant eigenspace; same start for a given size keeps calls repeatable.
    CVector v(n);
    std::uint64_t state = 0x9E3779B97F4A7C15ull;
    for (std::size_t i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double re = 0.25 + static_cast<double>(state >> 40) / 16777216.0;
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double im = 0.25 + static_cast<double>(state >> 40) / 16777216.0;
        v[i] = cx(re, im);
    }
    v = phase_fix(normalize(v));

    for (int iter = 0; iter < tol::kPowerIterMax; ++iter) {
        CVector w = matvec(s, v);
        const double wn = norm(w);
        if (wn < 1e-300) {
            // Zero map: every vector is an eigenvector with eigenvalue 0.
            return {v, 0.0};
        }
        for (std::size_t i = 0; i < n; ++i) w[i] /= wn;
        w = phase_fix(w);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff += std::norm(w[i] - v[i]);
        v = w;
        if (std::sqrt(diff) < tol::kPowerIterDiff) break;
    }
    const double value = dot_conj(v, matvec(s, v)).real();
    return {v, value};
}

CVector null_vector(const CMatrix& a) {
    if (a.rows() != a.cols() + 1) {
        throw std::invalid_argument("null_vector expects rows = cols + 1");
    }
    CMatrix gram = matmul(hermitian(a), a);
    CMatrix gram_inv;
    try {
        gram_inv = invert(gram);
    } catch (const SingularMatrixError&) {
        throw DegenerateChannelError("cross channel is rank deficient");
    }
    // Projector onto the orthogonal complement of the column space.
    CMatrix proj = CMatrix::identity(a.rows());
    CMatrix back = matmul(a, matmul(gram_inv, hermitian(a)));
    for (std::size_t i = 0; i < proj.rows(); ++i)
        for (std::size_t j = 0; j < proj.cols(); ++j) proj(i, j) -= back(i, j);

    EigenPair top = max_eigenvector(proj);
    if (std::abs(top.value - 1.0) > tol::kNullEigenGap) {
        throw DegenerateChannelError("complement projector lacks a unit eigenvalue");
    }
    // Residual ||u^H a|| must vanish; anything else means the projector
    // arithmetic degraded (near-singular gram matrix).
    double residual = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        cx acc(0.0, 0.0);
        for (std::size_t i = 0; i < a.rows(); ++i) acc += std::conj(top.vector[i]) * a(i, j);
        residual += std::norm(acc);
    }
    if (std::sqrt(residual) > tol::kNullResidual) {
        throw DegenerateChannelError("null vector residual above tolerance");
    }
    return top.vector;
}

} // namespace femtoslice::numerics
