#pragma once

#include <array>
#include <random>

#include "swlab/grid.hpp"

namespace swlab {

using MetricField = Field<Mat4>;
// G[k](i, j) = Gamma^k_ij
using Chr = std::array<Mat4, 4>;
// T[i](j, l), first index the derivative direction
using Tensor3 = std::array<Mat4, 4>;

Field<double> sqrt_det(const MetricField& g);
MetricField inverse(const MetricField& g);
MetricField flat_metric(const Grid& grid);

Field<Chr> christoffel(const MetricField& g);

// (nabla_i sigma)_jl for sigma = g s, using the discrete Christoffel symbols.
Field<Tensor3> nabla_lowered(const MetricField& g, const Field<Chr>& gamma, const Field<Mat4>& s);

// d/dt Gamma of g_t = (1 + t s)^T g (1 + t s) at t = 0.
Field<Chr> lc_variation(const MetricField& g, const Field<Mat4>& s);
// lc_variation minus nabla s, as Gamma-type coefficients.
Field<Chr> omega_dot(const MetricField& g, const Field<Mat4>& s);
// Lowers the upper index: out[i](j, k) = g_km T^m_ij.
Field<Tensor3> lower_last(const MetricField& g, const Field<Chr>& t);

Field<Vec4> divergence(const MetricField& g, const Field<Mat4>& s);
Field<Vec4> d_trace(const MetricField& g, const Field<Mat4>& s);
// Endomorphism g^-1 (nabla_i X_j + nabla_j X_i) for a vector field X.
Field<Mat4> lie_metric(const MetricField& g, const Field<Vec4>& X);
// g^ij nabla_i X_j
Field<double> div_vector_cov(const MetricField& g, const Field<Vec4>& X);
// (1/sqrt g) d_mu (sqrt g X^mu)
Field<double> div_vector(const MetricField& g, const Field<Vec4>& X);

// L2 products weighted by sqrt(det g) h^4.
double l2_inner(const Field<double>& a, const Field<double>& b, const MetricField& g);
double l2_inner_oneform(const Field<Vec4>& a, const Field<Vec4>& b, const MetricField& g);
double l2_inner_twoform(const Field<Vec6>& a, const Field<Vec6>& b, const MetricField& g);
// 2 tr(s t*), t* the g-adjoint; equals 2 tr(st) on symmetric endomorphisms.
double l2_inner_sym(const Field<Mat4>& s, const Field<Mat4>& t, const MetricField& g);
// sum a^* b
cd l2_inner_spinor(const Field<Vec2c>& a, const Field<Vec2c>& b, const MetricField& g);
cd l2_inner_spinor(const Field<Vec4c>& a, const Field<Vec4c>& b, const MetricField& g);

// Band-limited random trigonometric polynomial: sum of `terms` modes with |k_a| <= max_mode.
Field<double> random_trig(const Grid& grid, std::mt19937_64& rng, int max_mode, int terms, double amp);

}  // namespace swlab
