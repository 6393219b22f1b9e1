// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// Small dense complex matrices, sized for a handful of sub-channels.
// Row-major storage, checked at construction so NaNs fail fast.

namespace femtoslice::numerics {

using cx = std::complex<double>;

class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(const std::vector<cx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cx& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    const cx& operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

    const std::vector<cx>& entries() const { return e_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cx> e_;
};

class CVector {
public:
    CVector() = default;
    explicit CVector(std::size_t n);
    explicit CVector(std::vector<cx> entries);

    std::size_t size() const { return e_.size(); }
    cx& operator[](std::size_t i) { return e_[i]; }
    const cx& operator[](std::size_t i) const { return e_[i]; }
    const std::vector<cx>& entries() const { return e_; }

private:
    std::vector<cx> e_;
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix add(const CMatrix& a, const CMatrix& b);
CMatrix scale(const CMatrix& a, cx s);
/// Conjugate transpose.
CMatrix hermitian(const CMatrix& a);
/// Gaussian elimination with partial pivoting; SingularMatrixError when a
/// pivot falls below tol::kPivotMin.
CMatrix invert(const CMatrix& a);

CVector matvec(const CMatrix& a, const CVector& v);
/// sum_i conj(u_i) v_i
cx dot_conj(const CVector& u, const CVector& v);
double norm(const CVector& v);
CVector normalize(const CVector& v);
/// Multiply by a unit phase so the first entry above tol::kPhaseEntryMin
/// is real positive.  Deterministic output for any input phase.
CVector phase_fix(const CVector& v);

struct EigenPair {
    CVector vector;
    double value = 0.0;
};

/// Dominant eigenpair of a Hermitian PSD matrix by power iteration.  The
/// input is symmetrized as (a + a^H)/2 first; the returned vector is unit
/// norm and phase-fixed.
EigenPair max_eigenvector(const CMatrix& a);

/// Unit vector u with u^H a = 0 for a tall (rows = cols + 1) full-rank a,
/// found as the dominant eigenvector of the orthogonal-complement
/// projector I - a (a^H a)^{-1} a^H.  DegenerateChannelError when a is
/// rank deficient or the residual check fails.
CVector null_vector(const CMatrix& a);

} // namespace femtoslice::numerics
