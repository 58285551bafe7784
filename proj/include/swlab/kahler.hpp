#pragma once

#include <array>
#include <Eigen/Dense>

#include "swlab/constants.hpp"
#include "swlab/sw.hpp"

namespace swlab {

// z1 = x1 + i x2, z2 = x3 + i x4 on the flat torus.
struct ComplexStructure {
    Mat4 J;
    static ComplexStructure standard();
    // J^2 = -Id, g(J., J.) = g and J compatible with the orientation of g.
    bool compatible(const Mat4& g, double tol = 1e-12) const;
};

// omega(X, Y) = g(J X, Y) for the flat metric: dx1^dx2 + dx3^dx4.
Vec6 kahler_form();

struct SymSplit {
    Mat4 herm;      // commutes with J
    Mat4 antiherm;  // anticommutes with J
};
SymSplit split_sym(const Mat4& s);

// Complexification of f in the basis (Z1, Z2, Zb1, Zb2), Z_j = (d_{2j-1} - i d_{2j}) / 2:
// f = [[a, conj(b)], [b, conj(a)]].
struct ABComponents {
    Mat2c a;
    Mat2c b;
};
ABComponents ab_components(const Mat4& f);
Mat4 from_ab(const ABComponents& c);

// Complex coefficient matrix of dz_j (dual 1-form coefficients in dx).
Vec4c dz(int j);
Vec4c dzbar(int j);

// a = sum a_ij dz_i (x) dzb_j  ->  -2i sum a_ij dz_i ^ dzb_j as a real 2-form. Throws on non-hermitian a.
Vec6 herm_to_11form(const Mat2c& a);
// Inverse on real (1,1)-forms; the (2,0) + (0,2) part is discarded.
Mat2c herm_from_11form(const Vec6& w);
// Complex 2-form sum u_ij dz_i ^ dzb_j as an antisymmetric coordinate matrix.
Mat4c sigma_10_01(const Mat2c& u);

// Coordinate matrices of the bilinear forms sum u_ij dz_i (x) dzb_j and sum v_ij dzb_i (x) dzb_j.
Mat4c tensor_10_01(const Mat2c& u);
Mat4c tensor_01_01(const Mat2c& v);
// 1/2 Re(U + U^T).
Mat4 sym_re_part(const Mat4c& U);
// h_ij = S(Z_i, Zb_j) for a real symmetric S.
Mat2c hermitian_part(const Mat4& S);

// delta_minus at the flat metric applied to the two halves of a traceless s. Rows index the
// self-dual basis (row 0 is omega / sqrt 2), columns the anti-self-dual basis.
struct DeltaSplit {
    Mat3 from_herm;
    Mat3 from_antiherm;
};
DeltaSplit delta_minus_split(const Mat4& s);

// Complex forms on the torus. Coefficient of dz_I ^ dzb_J is c[mask], bit 0: dz1, 1: dz2, 2: dzb1,
// 3: dzb2, factors in increasing bit order. |dz_j|^2 = |dzb_j|^2 = 2.
using ComplexForm = std::array<cd, 16>;
using FormField = Field<ComplexForm>;

int form_weight(int mask);
FormField zero_forms(const Grid& g);
cd l2_inner_forms(const FormField& a, const FormField& b);

// d_A and dbar_A with the connection 1/2 A, A = i a. Exact adjoints under the flat L^2 product.
FormField del(const Connection& a, const FormField& f);
FormField dbar(const Connection& a, const FormField& f);
FormField del_adjoint(const Connection& a, const FormField& f);
FormField dbar_adjoint(const Connection& a, const FormField& f);
FormField del(const FormField& f);
FormField dbar(const FormField& f);
FormField del_adjoint(const FormField& f);
FormField dbar_adjoint(const FormField& f);

struct DolbeaultField {
    Field<cd> a00;
    Field<Vec2c> a01;  // coefficients of dzb1, dzb2
    Field<cd> a02;     // coefficient of dzb1 ^ dzb2
};
DolbeaultField zero_dolbeault(const Grid& g);
FormField to_forms(const DolbeaultField& f);
DolbeaultField from_forms(const FormField& f);

// degree 0 or 1; throws std::invalid_argument otherwise.
DolbeaultField dolbeault(const Connection& a, const DolbeaultField& f, int degree);
// degree 1 or 2.
DolbeaultField dolbeault_adjoint(const Connection& a, const DolbeaultField& f, int degree);
// sqrt 2 (dbar_A + dbar_A^*) on all degrees.
DolbeaultField kahler_dirac(const Connection& a, const DolbeaultField& f);

// Frozen unitary with U gamma_a U^* = c(dx_a) on the model (1, e, f1, f2),
// e = dzb1^dzb2 / 2, f_j = dzb_j / sqrt 2.
const Mat4c& identification_unitary();
DolbeaultField to_dolbeault(const Field<Vec4c>& psi);
Field<Vec4c> from_dolbeault(const DolbeaultField& f);

struct KahlerResidual {
    Field<Vec2c> r1;  // dbar_A alpha + dbar_A^* beta
    Field<cd> r2;     // F^{0,2} - conj(alpha) beta / 2, coefficient of dzb1 ^ dzb2
    Field<cd> r3;     // coefficient of omega in i(|alpha|^2 - |beta|^2)/4 omega - (F^+)^{1,1}
};
// alpha in A^{0,0}, beta the coefficient of dzb1 ^ dzb2; F = i da is the curvature of a.
KahlerResidual kahler_sw_residual(const Connection& a, const Field<cd>& alpha, const Field<cd>& beta);

// Rows: 2 sqrt2 dbar^* mu + conj(alpha) chi (4 per point), dbar_A^* chi (2), sqrt2 dbar_A chi - mu alpha (2),
// d(conj(alpha) chi) - dbar(alpha conj(chi)) (8). Columns: (Re, Im) of the chi coefficients, then of mu.
Eigen::MatrixXd assemble_kernel_operator(const Connection& a, const Field<cd>& alpha, std::size_t max_entries = 1u << 26);

// The operator above applied to (chi, mu); blocks in row order.
struct KernelBlocks {
    Field<Vec2c> ra;
    Field<cd> rb;
    Field<cd> rc;
    Field<std::array<cd, 4>> re;  // masks dz1^dzb1, dz1^dzb2, dz2^dzb1, dz2^dzb2
};
KernelBlocks apply_kernel_operator(const Connection& a, const Field<cd>& alpha, const Field<Vec2c>& chi,
                                   const Field<cd>& mu);

// (F^-)^* (x) theta: half the pointwise adjoint of s -> delta_minus(s0) F^- (the transpose of
// s0 -> -P+ i(s0) F- is -2 times this), as a hermitian frame endomorphism.
Mat4 fminus_dual(const Vec3& fminus, const Vec3& theta);

// Real (1,1)-form -i(d(conj(alpha) chi) - dbar(alpha conj(chi))) - weight (F^-)^* (x) lambda omega on the flat
// metric, endomorphisms carried to forms by herm_to_11form o hermitian_part.
Field<Vec6> hermitian_perturbation_residual(const Connection& a, const Field<cd>& alpha, const Field<Vec2c>& chi,
                                            const Field<double>& lambda, double weight = kHermitianPerturbationWeight);

struct KernelReport {
    int dimension = 0;
    double gap = 0;  // separation between counted and uncounted singular values
    bool indeterminate = false;
    double sigma_max = 0;
    double sigma_min = 0;
    Eigen::VectorXd singular_values;
};
KernelReport kernel_dimension(const Eigen::MatrixXd& m, double tol);

}  // namespace swlab
