#pragma once

#include <numbers>

namespace swlab {

// Factor by which the Lambda2+ -> Lambda2+ block of i(s*) acts, divided by tr s.
// Fixed by scalar_block_factor(Id) = 2 = kKappa * tr Id and confirmed against the
// t-derivative of the self-dual curvature in the sw tests.
inline constexpr double kKappa = 0.5;

// Weight of the F- term in the hermitian-perturbation equation, as printed. The adjoint
// coefficients used by sw_adjoint imply 8 sqrt 2 instead (see the kahler tests).
inline constexpr double kHermitianPerturbationWeight = 4 * std::numbers::sqrt2;

// Default one-step integrator resolution.
inline constexpr int kHolonomyStepsPerEdge = 64;
inline constexpr int kTransportSteps = 128;

// Numerical kernel detection.
inline constexpr double kKernelRelTol = 1e-8;
inline constexpr double kKernelMinGap = 1e3;

}  // namespace swlab
