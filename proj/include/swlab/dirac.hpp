#pragma once

#include <functional>

#include "swlab/calculus.hpp"

namespace swlab {

// Frame field; column a of E is the frame vector e_a in standard coordinates.
struct SpincStructure {
    Field<Mat4> E;
};

// Imaginary 1-form A = i a; stores the real coordinate components a_mu.
using Connection = Field<Vec4>;

// W[a](b, c) = omega_abc = g(nabla_{e_a} e_b, e_c)
using SpinCoeffs = std::array<Mat4, 4>;

MetricField frame_to_metric(const SpincStructure& xi);
SpincStructure metric_to_frame(const MetricField& g);
SpincStructure identity_frame(const Grid& grid);

Field<SpinCoeffs> spin_connection_coeffs(const SpincStructure& xi);

// Everything the Dirac operator needs from a frame field.
struct Geometry {
    Grid grid;
    Field<Mat4> E, Einv;
    MetricField g;
    Field<double> sqrtg;
    Field<Chr> gamma;
    Field<SpinCoeffs> omega;
};
Geometry make_geometry(const SpincStructure& xi);

// D = sum_a gamma_a (e_a(psi) + 1/4 sum_bc omega_abc gamma_b gamma_c psi + 1/2 A(e_a) psi)
Field<Vec4c> dirac(const Geometry& geo, const Connection& a, const Field<Vec4c>& psi);
Field<Vec4c> dirac(const SpincStructure& xi, const Connection& a, const Field<Vec4c>& psi);
// Restrictions W+ -> W- and W- -> W+.
Field<Vec2c> dirac_plus(const Geometry& geo, const Connection& a, const Field<Vec2c>& psi);
Field<Vec2c> dirac_minus(const Geometry& geo, const Connection& a, const Field<Vec2c>& chi);

// nabla^W_{e_d} psi for d = 0..3.
std::array<Field<Vec4c>, 4> spinor_covariant_derivative(const Geometry& geo, const Connection& a,
                                                        const Field<Vec4c>& psi);

// Real coordinate components of F_A / i = da.
Field<Vec6> curvature(const Connection& a);
// Exterior derivative of a 2-form (components 123,124,134,234).
Field<Vec4> exterior_d2(const Field<Vec6>& w);

// t-derivative of dirac along xi_t with frames (1 + t s)^-1 E, metrics (1 + t s)^T g (1 + t s):
// -rho(s* nabla^W_A psi) + 1/4 sum Omega_abc gamma_a gamma_b gamma_c psi, with Omega the
// variation of the spin coefficients built from lc_variation.
Field<Vec4c> dirac_variation(const SpincStructure& xi, const Connection& a, const Field<Vec4c>& psi,
                             const Field<Mat4>& s);
// -rho(s* nabla^W_A psi) - 1/2 rho(div s - d tr s) psi evaluated with the discrete operators.
Field<Vec4c> dirac_variation_closed_form(const SpincStructure& xi, const Connection& a, const Field<Vec4c>& psi,
                                         const Field<Mat4>& s);

// Pointwise metric path on [0, t1]: g(x, t) and its t-derivative.
struct MetricPath {
    std::function<Mat4(std::size_t, double)> g;
    std::function<Mat4(std::size_t, double)> gdot;
};
// g_t = (1 + t s)^T g0 (1 + t s)
MetricPath pullback_path(const MetricField& g0, const Field<Mat4>& s);
// g_t = (1 - t) g0 + t g1
MetricPath straight_path(const MetricField& g0, const MetricField& g1);

// RK4 for E' = -1/2 g_t^-1 g_t' E on [t0, t1] at every grid point.
SpincStructure xi_transport(const SpincStructure& xi0, const MetricPath& path, double t0, double t1,
                            int steps = 128);

// psi -> e^{-iu} psi, a -> a + 2 du.
Connection gauge_connection(const Connection& a, const Field<double>& u);
Field<Vec4c> gauge_spinor(const Field<Vec4c>& psi, const Field<double>& u);

}  // namespace swlab
