#include "swlab/kahler.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swlab/constants.hpp"
#include "swlab/metric.hpp"

namespace swlab {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Columns Z1, Z2, Zb1, Zb2.
const Mat4c& frame_p() {
    static const Mat4c P = [] {
        Mat4c p = Mat4c::Zero();
        p(0, 0) = 0.5;
        p(1, 0) = -0.5 * I;
        p(2, 1) = 0.5;
        p(3, 1) = -0.5 * I;
        p.col(2) = p.col(0).conjugate();
        p.col(3) = p.col(1).conjugate();
        return p;
    }();
    return P;
}

Vec4c zvec(int j, bool bar) {
    Vec4c z = frame_p().col(j - 1);
    return bar ? Vec4c(z.conjugate()) : z;
}

int wedge_sign(int mask, int k) { return (std::popcount(unsigned(mask) & ((1u << k) - 1)) % 2) ? -1 : 1; }

// Bit k: 0 dz1, 1 dz2, 2 dzb1, 3 dzb2.
int axis0(int k) { return 2 * (k % 2); }
bool antiholomorphic(int k) { return k >= 2; }

// 1/2 A(W) with A = i a and W = Z_j or Zb_j.
cd half_conn(const Vec4& a, int k) {
    int m = axis0(k);
    cd s = antiholomorphic(k) ? I : -I;
    return 0.5 * I * 0.5 * (a(m) + s * a(m + 1));
}

// sum_{k in bits} e_k ^ (D_k + c_k), or its adjoint.
FormField wedge_derivative(const Connection* a, const FormField& f, int bits, bool adjoint) {
    const Grid& g = f.grid;
    const double inv = 1.0 / (2.0 * g.h);
    return generate<ComplexForm>(g, [&](std::size_t x) {
        ComplexForm out{};
        std::array<ComplexForm, 4> d;  // central differences along each axis
        for (int mu = 0; mu < 4; ++mu) {
            const auto& fp = f[g.shift(x, mu, 1)];
            const auto& fm = f[g.shift(x, mu, -1)];
            for (int m = 0; m < 16; ++m) d[mu][m] = (fp[m] - fm[m]) * inv;
        }
        for (int k = 0; k < 4; ++k) {
            if (!(bits & (1 << k))) continue;
            int m0 = axis0(k);
            // D_k = (d_m0 + s i d_m1) / 2; its adjoint is -(d_m0 - s i d_m1) / 2.
            cd s = antiholomorphic(k) ? I : -I;
            cd c = a ? half_conn((*a)[x], k) : cd(0);
            for (int M = 0; M < 16; ++M) {
                if (M & (1 << k)) continue;
                int P = M | (1 << k);
                double sg = wedge_sign(M, k);
                if (!adjoint) {
                    cd Df = 0.5 * (d[m0][M] + s * d[m0 + 1][M]);
                    out[P] += sg * (Df + c * f[x][M]);
                } else {
                    cd Db = -0.5 * (d[m0][P] - s * d[m0 + 1][P]);
                    out[M] += sg * 2.0 * (Db + std::conj(c) * f[x][P]);
                }
            }
        }
        return out;
    });
}

FormField combine(const FormField& a, const FormField& b, double sb) {
    return generate<ComplexForm>(a.grid, [&](std::size_t x) {
        ComplexForm c;
        for (int m = 0; m < 16; ++m) c[m] = a[x][m] + sb * b[x][m];
        return c;
    });
}

void check_hermitian(const Mat2c& a) {
    if ((a - a.adjoint()).norm() > 1e-12 * std::max(1.0, a.norm())) throw std::invalid_argument("input is not hermitian");
}

}  // namespace

ComplexStructure ComplexStructure::standard() {
    ComplexStructure c;
    c.J = Mat4::Zero();
    c.J(1, 0) = 1;
    c.J(0, 1) = -1;
    c.J(3, 2) = 1;
    c.J(2, 3) = -1;
    return c;
}

bool ComplexStructure::compatible(const Mat4& g, double tol) const {
    if ((J * J + Mat4::Identity()).norm() > tol) return false;
    if ((J.transpose() * g * J - g).norm() > tol * std::max(1.0, g.norm())) return false;
    Mat4 W = J.transpose() * g;  // omega(e_i, e_j)
    double pf = W(0, 1) * W(2, 3) - W(0, 2) * W(1, 3) + W(0, 3) * W(1, 2);
    return pf > 0;
}

Vec6 kahler_form() { return matrix_twoform(ComplexStructure::standard().J.transpose()); }

SymSplit split_sym(const Mat4& s) {
    const Mat4& J = ComplexStructure::standard().J;
    Mat4 t = J * s * J;
    return {0.5 * (s - t), 0.5 * (s + t)};
}

ABComponents ab_components(const Mat4& f) {
    const Mat4c& P = frame_p();
    Mat4c F = P.inverse() * f.cast<cd>() * P;
    return {F.topLeftCorner<2, 2>(), F.bottomLeftCorner<2, 2>()};
}

Mat4 from_ab(const ABComponents& c) {
    const Mat4c& P = frame_p();
    Mat4c F;
    F << c.a, c.b.conjugate(), c.b, c.a.conjugate();
    return (P * F * P.inverse()).real();
}

Vec4c dz(int j) {
    if (j < 1 || j > 2) throw std::out_of_range("dz index must be 1 or 2");
    Vec4c v = Vec4c::Zero();
    v(2 * j - 2) = 1;
    v(2 * j - 1) = I;
    return v;
}
Vec4c dzbar(int j) { return dz(j).conjugate(); }

Mat4c sigma_10_01(const Mat2c& u) {
    Mat4c w = Mat4c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Vec4c p = dz(i + 1), q = dzbar(j + 1);
            w += u(i, j) * (p * q.transpose() - q * p.transpose());
        }
    return w;
}

Vec6 herm_to_11form(const Mat2c& a) {
    check_hermitian(a);
    Mat4c w = -2.0 * I * sigma_10_01(a);
    return matrix_twoform(w.real());
}

Mat2c herm_from_11form(const Vec6& w) {
    Mat4c W = twoform_matrix(w).cast<cd>();
    Mat2c a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = 0.5 * I * (zvec(i + 1, false).transpose() * W * zvec(j + 1, true))(0, 0);
    return a;
}

Mat4c tensor_10_01(const Mat2c& u) {
    Mat4c w = Mat4c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) w += u(i, j) * dz(i + 1) * dzbar(j + 1).transpose();
    return w;
}

Mat4c tensor_01_01(const Mat2c& v) {
    Mat4c w = Mat4c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) w += v(i, j) * dzbar(i + 1) * dzbar(j + 1).transpose();
    return w;
}

Mat4 sym_re_part(const Mat4c& U) { return 0.5 * (U + U.transpose()).real(); }

Mat2c hermitian_part(const Mat4& S) {
    Mat2c h;
    Mat4c Sc = S.cast<cd>();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) h(i, j) = (zvec(i + 1, false).transpose() * Sc * zvec(j + 1, true))(0, 0);
    return h;
}

DeltaSplit delta_minus_split(const Mat4& s) {
    if (std::abs(s.trace()) > 1e-12 * std::max(1.0, s.norm())) throw std::invalid_argument("s must be traceless");
    SymSplit p = split_sym(s);
    return {delta_minus_frame(p.herm), delta_minus_frame(p.antiherm)};
}

int form_weight(int mask) { return 1 << std::popcount(unsigned(mask)); }

FormField zero_forms(const Grid& g) { return FormField(g, ComplexForm{}); }

cd l2_inner_forms(const FormField& a, const FormField& b) {
    const Grid& g = a.grid;
    auto part = [&](bool imag) {
        return grid_sum(g, [&](std::size_t x) {
            cd s = 0;
            for (int m = 0; m < 16; ++m) s += double(form_weight(m)) * std::conj(a[x][m]) * b[x][m];
            return imag ? s.imag() : s.real();
        });
    };
    return cd(part(false), part(true)) * g.cell_volume();
}

FormField del(const Connection& a, const FormField& f) { return wedge_derivative(&a, f, 0b0011, false); }
FormField dbar(const Connection& a, const FormField& f) { return wedge_derivative(&a, f, 0b1100, false); }
FormField del_adjoint(const Connection& a, const FormField& f) { return wedge_derivative(&a, f, 0b0011, true); }
FormField dbar_adjoint(const Connection& a, const FormField& f) { return wedge_derivative(&a, f, 0b1100, true); }
FormField del(const FormField& f) { return wedge_derivative(nullptr, f, 0b0011, false); }
FormField dbar(const FormField& f) { return wedge_derivative(nullptr, f, 0b1100, false); }
FormField del_adjoint(const FormField& f) { return wedge_derivative(nullptr, f, 0b0011, true); }
FormField dbar_adjoint(const FormField& f) { return wedge_derivative(nullptr, f, 0b1100, true); }

DolbeaultField zero_dolbeault(const Grid& g) {
    return {Field<cd>(g, 0.0), Field<Vec2c>(g, Vec2c::Zero()), Field<cd>(g, 0.0)};
}

FormField to_forms(const DolbeaultField& f) {
    return generate<ComplexForm>(f.a00.grid, [&](std::size_t x) {
        ComplexForm c{};
        c[0] = f.a00[x];
        c[4] = f.a01[x](0);
        c[8] = f.a01[x](1);
        c[12] = f.a02[x];
        return c;
    });
}

DolbeaultField from_forms(const FormField& f) {
    return {map(f, [](const ComplexForm& c) { return c[0]; }),
            map(f, [](const ComplexForm& c) { return Vec2c(c[4], c[8]); }),
            map(f, [](const ComplexForm& c) { return c[12]; })};
}

namespace {
DolbeaultField keep_degree(const DolbeaultField& f, int degree) {
    DolbeaultField z = zero_dolbeault(f.a00.grid);
    if (degree == 0) z.a00 = f.a00;
    if (degree == 1) z.a01 = f.a01;
    if (degree == 2) z.a02 = f.a02;
    return z;
}
}  // namespace

DolbeaultField dolbeault(const Connection& a, const DolbeaultField& f, int degree) {
    if (degree != 0 && degree != 1) throw std::invalid_argument("dolbeault degree must be 0 or 1");
    return from_forms(dbar(a, to_forms(keep_degree(f, degree))));
}

DolbeaultField dolbeault_adjoint(const Connection& a, const DolbeaultField& f, int degree) {
    if (degree != 1 && degree != 2) throw std::invalid_argument("dolbeault_adjoint degree must be 1 or 2");
    return from_forms(dbar_adjoint(a, to_forms(keep_degree(f, degree))));
}

DolbeaultField kahler_dirac(const Connection& a, const DolbeaultField& f) {
    FormField u = to_forms(f);
    FormField r = combine(dbar(a, u), dbar_adjoint(a, u), 1.0);
    for (auto& c : r.v)
        for (auto& z : c) z *= kSqrt2;
    return from_forms(r);
}

const Mat4c& identification_unitary() {
    static const Mat4c U = [] {
        const double r = 1.0 / std::sqrt(2.0);
        Mat4c u;
        u << r, r, 0, 0,
            -r, r, 0, 0,
            0, 0, r, r,
            0, 0, r, -r;
        return u;
    }();
    return U;
}

DolbeaultField to_dolbeault(const Field<Vec4c>& psi) {
    const Mat4c& U = identification_unitary();
    Field<Vec4c> m = map(psi, [&](const Vec4c& p) -> Vec4c { return U * p; });
    return {map(m, [](const Vec4c& v) { return v(0); }),
            map(m, [](const Vec4c& v) { return Vec2c(v(2) / kSqrt2, v(3) / kSqrt2); }),
            map(m, [](const Vec4c& v) { return v(1) / 2.0; })};
}

Field<Vec4c> from_dolbeault(const DolbeaultField& f) {
    Mat4c Ui = identification_unitary().adjoint();
    return generate<Vec4c>(f.a00.grid, [&](std::size_t x) -> Vec4c {
        Vec4c m(f.a00[x], 2.0 * f.a02[x], kSqrt2 * f.a01[x](0), kSqrt2 * f.a01[x](1));
        return Ui * m;
    });
}

KahlerResidual kahler_sw_residual(const Connection& a, const Field<cd>& alpha, const Field<cd>& beta) {
    const Grid& g = a.grid;
    DolbeaultField f = zero_dolbeault(g);
    f.a00 = alpha;
    f.a02 = beta;
    DolbeaultField d =
        from_forms(combine(dbar(a, to_forms(keep_degree(f, 0))), dbar_adjoint(a, to_forms(keep_degree(f, 2))), 1.0));
    Field<Vec6> da = curvature(a);
    Vec4c zb1 = zvec(1, true), zb2 = zvec(2, true);
    KahlerResidual r;
    r.r1 = d.a01;
    r.r2 = generate<cd>(g, [&](std::size_t x) {
        Mat4c F = I * twoform_matrix(da[x]).cast<cd>();
        cd f02 = (zb1.transpose() * F * zb2)(0, 0);
        return f02 - std::conj(alpha[x]) * beta[x] / 2.0;
    });
    r.r3 = generate<cd>(g, [&](std::size_t x) {
        cd lambda = I * 0.5 * (da[x](0) + da[x](5));
        double a2 = std::norm(alpha[x]), b2 = 4.0 * std::norm(beta[x]);
        return I * (a2 - b2) / 4.0 - lambda;
    });
    return r;
}

KernelBlocks apply_kernel_operator(const Connection& a, const Field<cd>& alpha, const Field<Vec2c>& chi,
                                   const Field<cd>& mu) {
    const Grid& g = alpha.grid;
    FormField X = generate<ComplexForm>(g, [&](std::size_t x) {
        ComplexForm c{};
        c[4] = chi[x](0);
        c[8] = chi[x](1);
        return c;
    });
    FormField M = generate<ComplexForm>(g, [&](std::size_t x) {
        ComplexForm c{};
        c[12] = mu[x];
        return c;
    });
    FormField abx = generate<ComplexForm>(g, [&](std::size_t x) {
        ComplexForm c{};
        c[4] = std::conj(alpha[x]) * chi[x](0);
        c[8] = std::conj(alpha[x]) * chi[x](1);
        return c;
    });
    FormField axb = generate<ComplexForm>(g, [&](std::size_t x) {
        ComplexForm c{};
        c[1] = alpha[x] * std::conj(chi[x](0));
        c[2] = alpha[x] * std::conj(chi[x](1));
        return c;
    });
    FormField dsm = dbar_adjoint(M);
    FormField dsx = dbar_adjoint(a, X);
    FormField dx = dbar(a, X);
    FormField e = combine(del(abx), dbar(axb), -1.0);
    const double s22 = 2.0 * kSqrt2;
    KernelBlocks k;
    k.ra = generate<Vec2c>(g, [&](std::size_t x) {
        return Vec2c(s22 * dsm[x][4] + abx[x][4], s22 * dsm[x][8] + abx[x][8]);
    });
    k.rb = map(dsx, [](const ComplexForm& c) { return c[0]; });
    k.rc = generate<cd>(g, [&](std::size_t x) { return kSqrt2 * dx[x][12] - mu[x] * alpha[x]; });
    k.re = map(e, [](const ComplexForm& c) { return std::array<cd, 4>{c[5], c[9], c[6], c[10]}; });
    return k;
}

Mat4 fminus_dual(const Vec3& fminus, const Vec3& theta) { return -0.5 * fminus_theta_transpose(fminus, theta); }

Field<Vec6> hermitian_perturbation_residual(const Connection& a, const Field<cd>& alpha, const Field<Vec2c>& chi,
                                            const Field<double>& lambda, double weight) {
    const Grid& g = alpha.grid;
    KernelBlocks k = apply_kernel_operator(a, alpha, chi, Field<cd>(g, 0.0));
    auto fm = antiselfdual_coeffs(make_geometry(identity_frame(g)), curvature(a));
    return generate<Vec6>(g, [&](std::size_t x) -> Vec6 {
        Mat2c u;
        u << k.re[x][0], k.re[x][1], k.re[x][2], k.re[x][3];
        Vec6 d = matrix_twoform(sigma_10_01(-I * u).real());
        Mat4 f = fminus_dual(fm[x], Vec3(kSqrt2 * lambda[x], 0, 0));
        return d - weight * herm_to_11form(hermitian_part(split_sym(f).herm));
    });
}

Eigen::MatrixXd assemble_kernel_operator(const Connection& a, const Field<cd>& alpha, std::size_t max_entries) {
    const Grid& g = alpha.grid;
    const std::size_t N = g.size();
    const std::size_t rows = 16 * N, cols = 6 * N;
    if (rows * cols > max_entries) throw std::length_error("kernel operator exceeds the dense memory bound");
    Eigen::MatrixXd m(rows, cols);
    Field<Vec2c> chi(g, Vec2c::Zero());
    Field<cd> mu(g, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        cd unit = (c % 2) ? I : cd(1);
        if (c < 4 * N)
            chi[c / 4](int(c % 4) / 2) = unit;
        else
            mu[(c - 4 * N) / 2] = unit;
        KernelBlocks k = apply_kernel_operator(a, alpha, chi, mu);
        if (c < 4 * N)
            chi[c / 4](int(c % 4) / 2) = 0;
        else
            mu[(c - 4 * N) / 2] = 0;
        for (std::size_t x = 0; x < N; ++x) {
            for (int j = 0; j < 2; ++j) {
                m(4 * x + 2 * j, c) = k.ra[x](j).real();
                m(4 * x + 2 * j + 1, c) = k.ra[x](j).imag();
            }
            m(4 * N + 2 * x, c) = k.rb[x].real();
            m(4 * N + 2 * x + 1, c) = k.rb[x].imag();
            m(6 * N + 2 * x, c) = k.rc[x].real();
            m(6 * N + 2 * x + 1, c) = k.rc[x].imag();
            for (int j = 0; j < 4; ++j) {
                m(8 * N + 8 * x + 2 * j, c) = k.re[x][j].real();
                m(8 * N + 8 * x + 2 * j + 1, c) = k.re[x][j].imag();
            }
        }
    }
    return m;
}

KernelReport kernel_dimension(const Eigen::MatrixXd& m, double tol) {
    KernelReport r;
    const Eigen::Index k = std::min(m.rows(), m.cols());
    const int extra = int(m.cols() - k);
    const double inf = std::numeric_limits<double>::infinity();
    if (k == 0) {
        r.dimension = int(m.cols());
        r.gap = inf;
        return r;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    r.singular_values = svd.singularValues();
    r.sigma_max = r.singular_values(0);
    r.sigma_min = r.singular_values(k - 1);
    const double thr = tol * r.sigma_max;
    int count = 0;
    for (Eigen::Index i = 0; i < k; ++i)
        if (r.singular_values(i) <= thr) ++count;
    r.dimension = count + extra;
    if (count == 0)
        r.gap = r.sigma_min / thr;
    else if (count == k)
        r.gap = inf;
    else {
        double lo = r.singular_values(k - count), hi = r.singular_values(k - count - 1);
        r.gap = lo > 0 ? hi / lo : inf;
    }
    r.indeterminate = r.gap < kKernelMinGap;
    return r;
}

}  // namespace swlab
