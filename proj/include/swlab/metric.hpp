#pragma once

#include <array>

#include "swlab/types.hpp"

namespace swlab {

// 2-forms are 6-vectors in the basis 12,13,14,23,24,34 of the declared coframe.
inline constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

Mat4 twoform_matrix(const Vec6& w);
Vec6 matrix_twoform(const Mat4& m);  // reads the strict upper triangle

// Coordinate coframe dx^mu, metric g.
Vec6 hodge_star(const Mat4& g, const Vec6& w);
Vec6 selfdual_project(const Mat4& g, const Vec6& w);
Vec6 antiselfdual_project(const Mat4& g, const Vec6& w);

// i(s*) w with (s* a)(X) = a(sX).
Vec6 i_derivation(const Mat4& s, const Vec6& w);

// P+ o i(s0*) restricted to Lambda2-, as a 3x3 matrix in the orthonormal bases of Lambda2+- for g
// (row: Lambda2+ index, column: Lambda2- index). Throws on |tr s0| > 1e-10 |s0|.
Mat3 delta_minus(const Mat4& g, const Mat4& s0);
// Same map for s0 given in an orthonormal frame.
Mat3 delta_minus_frame(const Mat4& s0);

// Scalar by which the Lambda2+ block of i(s*) acts; s in an orthonormal frame.
double scalar_block_factor(const Mat4& s);

// (s, t) = 2 tr(st) on symmetric endomorphisms.
inline double sym_inner(const Mat4& s, const Mat4& t) { return 2.0 * (s * t).trace(); }
// (u, v) = 1/2 tr(u v^T) on real linear maps between orthonormal spaces.
inline double hom_inner(const Mat3& u, const Mat3& v) { return 0.5 * (u * v.transpose()).trace(); }

struct Polar {
    Mat4 rotation;
    Mat4 positive;
};
// E = R P with R^T g R = g and g P symmetric positive definite. Throws if det E <= 0.
Polar polar_decompose(const Mat4& E, const Mat4& g);

Mat4 spd_sqrt(const Mat4& g);      // throws on non-SPD input
Mat4 spd_inv_sqrt(const Mat4& g);  // throws on non-SPD input
bool is_spd(const Mat4& g);

// -1/4 [g^-1 h, g^-1 k]
Mat4 xi_curvature(const Mat4& g, const Mat4& h, const Mat4& k);

// Transport E' = -1/2 g^-1 g' E around g -> g+eh -> g+eh+ek -> g+ek -> g starting at g^-1/2;
// returns (E_loop E_0^-1 - Id) / eps^2.
Mat4 xi_holonomy_oracle(const Mat4& g, const Mat4& h, const Mat4& k, double eps, int steps_per_edge = 64);

// One RK4 run of E' = -1/2 g(t)^-1 g'(t) E along the straight segment g0 -> g1.
Mat4 transport_segment(const Mat4& E, const Mat4& g0, const Mat4& g1, int steps);

}  // namespace swlab
