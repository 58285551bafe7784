#pragma once

#include "swlab/dirac.hpp"

namespace swlab {

struct Configuration {
    Connection a;            // A = i a
    Field<Vec2c> psi;        // W+
    SpincStructure xi;
};

// tau: imaginary 1-form i tau (coordinate components); s: g-symmetric endomorphism field.
struct TangentVector {
    Field<Vec4> tau;
    Field<Vec2c> phi;
    Field<Mat4> s;
};

// (W- spinor, traceless hermitian endomorphism of W+)
struct SWValue {
    Field<Vec2c> neg;
    Field<Mat2c> herm;
};

// theta = i sum_k theta_k w_k^+ in the orthonormal self-dual basis of the frame.
struct ObstructionCovector {
    Field<Vec2c> chi;
    Field<Vec3> theta;
};

TangentVector zero_tangent(const Grid& g);
ObstructionCovector zero_covector(const Grid& g);

// Frame components of a coordinate 2-form in the self-dual / anti-self-dual orthonormal bases.
Field<Vec3> selfdual_coeffs(const Geometry& geo, const Field<Vec6>& w);
Field<Vec3> antiselfdual_coeffs(const Geometry& geo, const Field<Vec6>& w);

// d* of the real self-dual form sum_k theta_k w_k^+ as a coordinate 1-form (flux form).
Field<Vec4> d_star_selfdual(const Geometry& geo, const Field<Vec3>& theta);
// Coordinate 1-form with frame components v.
Field<Vec4> coframe_to_coordinates(const Geometry& geo, const Field<Vec4>& v);
// Frame components of psi^* (x) chi.
Field<Vec4c> pair_oneform(const Field<Vec2c>& psi, const Field<Vec2c>& chi);

SWValue sw_functional(const Configuration& c);
SWValue sw_differential(const Configuration& c, const TangentVector& v);
TangentVector sw_adjoint(const Configuration& c, const ObstructionCovector& w);

// Pointwise transpose of S0 -> -P+ i(S0) F- paired with theta, as a frame endomorphism.
Mat4 fminus_theta_transpose(const Vec3& fminus, const Vec3& theta);

double inner(const SWValue& x, const SWValue& y, const MetricField& g);
double inner(const SWValue& x, const ObstructionCovector& w, const MetricField& g);
double inner(const TangentVector& x, const TangentVector& y, const MetricField& g);
double norm(const SWValue& x, const MetricField& g);

struct KernelResidual {
    Field<Vec4> r1;   // d* theta + Im(psi^* x chi), coordinate 1-form (imaginary part dropped)
    Field<Vec2c> r2;  // D chi - 1/2 rho(theta) psi
    Field<Mat4> r3;   // third adjoint component without its two trace terms
    Field<double> r4; // (theta, F+)
    Field<cd> r5;     // div(psi^* x chi)
};
// Throws std::invalid_argument if psi == 0 or ||sw_functional(c)|| > monopole_tol * ||c||
// (monopole_tol < 0 skips the monopole check).
KernelResidual kernel_residual(const Configuration& c, const ObstructionCovector& w, double monopole_tol = 1e-8);

// div(phi^* x zeta) in the edge-flux discretization compatible with summation by parts.
Field<cd> div_pair(const Geometry& geo, const Field<Vec2c>& phi, const Field<Vec2c>& zeta);

struct KernelScalarReport {
    double dirac_divergence_defect = 0;  // max |2 div(phi^* x zeta) - <D phi, zeta> + <phi, D zeta>|
    double fplus_theta = 0;      // ||(F+, theta)||
    double div_re = 0;           // ||div Re(psi^* x chi)||
    double div_im = 0;           // ||div Im(psi^* x chi)||
    double residual = 0;         // ||sw_adjoint(c, w)||
};
// Replays the trace argument and the d* argument at c for the covector w.
KernelScalarReport kernel_scalar_check(const Configuration& c, const ObstructionCovector& w);

// Pointwise max of 2 div(phi^* x zeta) - (<D phi, zeta> - <phi, D zeta>).
double dirac_divergence_defect(const Geometry& geo, const Connection& a, const Field<Vec2c>& phi, const Field<Vec2c>& zeta);

}  // namespace swlab
