// SPDX-License-Identifier: Apache-2.0
#pragma once

// Every numeric threshold the library relies on lives here so that a
// tolerance is never re-invented (slightly differently) at a call site.

namespace femtoslice::tol {

// Gaussian elimination: a pivot below this magnitude means singular.
inline constexpr double kPivotMin = 1e-12;
// ||A * inv(A) - I||_max allowed for an inverse to be considered sound.
inline constexpr double kInverseResidual = 1e-9;

// Power iteration: stop once successive phase-aligned iterates differ by
// less than this, or after the iteration cap.
inline constexpr double kPowerIterDiff = 1e-10;
inline constexpr int kPowerIterMax = 500;
// Magnitude that counts as "nonzero" when fixing an eigenvector's phase.
inline constexpr double kPhaseEntryMin = 1e-6;

// receive null vector: required ||u^H A||, and how close the projector's
// top eigenvalue must be to 1 before the channel is called degenerate.
inline constexpr double kNullResidual = 1e-9;
inline constexpr double kNullEigenGap = 1e-6;

// Zero-forcing alignment residual allowed on cross channels.
inline constexpr double kAlignResidual = 1e-8;
// Off-diagonal leakage and column-norm slack allowed for the transmit set.
inline constexpr double kZfDiagonalResidual = 1e-9;

// Power control must invert the serving path loss to this relative error.
inline constexpr double kPowerControlIdentity = 1e-12;

// Node placement rejection sampling gives up after this many attempts.
inline constexpr int kTopologyMaxAttempts = 10000;

} // namespace femtoslice::tol
