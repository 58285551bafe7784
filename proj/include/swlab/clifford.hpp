#pragma once

#include <array>

#include "swlab/types.hpp"

namespace swlab {

// Spinor in W0 = W0+ (+) W0-, stored as (plus, minus).
struct SpinorValue {
    Vec2c plus = Vec2c::Zero();
    Vec2c minus = Vec2c::Zero();

    Vec4c full() const;
    static SpinorValue from(const Vec4c& v);
    double norm2() const { return plus.squaredNorm() + minus.squaredNorm(); }
};

// Block form of an endomorphism of W0.
struct SpinorEndo {
    Mat2c pp = Mat2c::Zero(), pm = Mat2c::Zero(), mp = Mat2c::Zero(), mm = Mat2c::Zero();

    Mat4c matrix() const;
    static SpinorEndo from(const Mat4c& m);
};

// Exterior form on an orthonormal coframe. Coefficient of e^I is c[mask], bit a-1 set iff e^a in I,
// factors taken in increasing index order.
struct Form {
    std::array<cd, 16> c{};

    static Form scalar(cd v);
    static Form one(const Vec4c& v);
    static Form two(const Vec6& w);  // real 2-form, basis 12,13,14,23,24,34
    static Form two(const Eigen::Matrix<cd, 6, 1>& w);
    static Form volume(cd v = 1.0);
    Form& operator+=(const Form& o);
};

// gamma(i) for 1 <= i <= 4; throws std::out_of_range otherwise.
const Mat4c& gamma(int i);
const std::array<Mat4c, 4>& gammas();

Mat4c clifford_matrix(const Form& f);
SpinorValue clifford_mul(const Form& f, const SpinorValue& s);

// Orthonormal bases of self-dual and anti-self-dual 2-forms (basis 12,13,14,23,24,34).
const std::array<Vec6, 3>& selfdual_basis();
const std::array<Vec6, 3>& antiselfdual_basis();

// Action on W+ of the imaginary self-dual form i*sum_k t_k w_k^+.
Mat2c rho_plus(const Vec3& t);
// Action on W- of the imaginary anti-self-dual form i*sum_k t_k w_k^-.
Mat2c rho_minus(const Vec3& t);
// Coefficients t with rho_plus(t) = m, for m traceless hermitian.
Vec3 rho_plus_inverse(const Mat2c& m);

SpinorEndo quadratic_map(const Vec2c& psi);

// v with <rho(sigma) psi, chi> = 2 <sigma, v> for all complex 1-forms sigma,
// <x, y> = x^* y on spinors and on coframe coefficients. Conjugate-linear in psi.
Vec4c spinor_pair_to_oneform(const Vec2c& psi, const Vec2c& chi);

// Real inner products used throughout.
inline double herm_inner(const Mat2c& a, const Mat2c& b) { return 0.25 * (a * b.adjoint()).trace().real(); }
inline double spinor_inner(const Vec2c& a, const Vec2c& b) { return a.dot(b).real(); }

// 2 [[lambda, mu contraction], [mu wedge, -lambda]] on (1, e) with e = dzb1^dzb2 / 2 the unit (0,2)-form,
// mu the coefficient of dzb1^dzb2.
SpinorEndo rho_selfdual_block(cd lambda, cd mu);

}  // namespace swlab
