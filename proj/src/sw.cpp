#include "swlab/sw.hpp"

#include <stdexcept>

#include "swlab/clifford.hpp"
#include "swlab/constants.hpp"
#include "swlab/metric.hpp"

namespace swlab {

TangentVector zero_tangent(const Grid& g) {
    return {Field<Vec4>(g, Vec4::Zero()), Field<Vec2c>(g, Vec2c::Zero()), Field<Mat4>(g, Mat4::Zero())};
}

ObstructionCovector zero_covector(const Grid& g) {
    return {Field<Vec2c>(g, Vec2c::Zero()), Field<Vec3>(g, Vec3::Zero())};
}

namespace {

Vec6 frame_form(const Mat4& E, const Vec6& w) { return matrix_twoform(E.transpose() * twoform_matrix(w) * E); }

Vec3 project(const std::array<Vec6, 3>& basis, const Vec6& w) {
    return Vec3(basis[0].dot(w), basis[1].dot(w), basis[2].dot(w));
}

Vec6 combine(const std::array<Vec6, 3>& basis, const Vec3& t) {
    return t(0) * basis[0] + t(1) * basis[1] + t(2) * basis[2];
}

Field<Vec4c> lift_plus(const Field<Vec2c>& p) {
    return map(p, [](const Vec2c& v) -> Vec4c { return SpinorValue{v, Vec2c::Zero()}.full(); });
}

// Orthonormal basis of traceless symmetric matrices for (S, T) = 2 tr(ST).
const std::array<Mat4, 9>& traceless_basis() {
    static const std::array<Mat4, 9> b = [] {
        std::array<Mat4, 9> r;
        int n = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                r[n].setZero();
                r[n](i, j) = r[n](j, i) = 0.5;
                ++n;
            }
        Vec4 d[3] = {Vec4(1, -1, 0, 0) / 2.0, Vec4(1, 1, -2, 0) / (2.0 * std::sqrt(3.0)),
                     Vec4(1, 1, 1, -3) / (2.0 * std::sqrt(6.0))};
        for (auto& v : d) r[n++] = v.asDiagonal();
        return r;
    }();
    return b;
}

}  // namespace

Field<Vec3> selfdual_coeffs(const Geometry& geo, const Field<Vec6>& w) {
    return generate<Vec3>(geo.grid, [&](std::size_t x) { return project(selfdual_basis(), frame_form(geo.E[x], w[x])); });
}

Field<Vec3> antiselfdual_coeffs(const Geometry& geo, const Field<Vec6>& w) {
    return generate<Vec3>(geo.grid,
                          [&](std::size_t x) { return project(antiselfdual_basis(), frame_form(geo.E[x], w[x])); });
}

Field<Vec4> d_star_selfdual(const Geometry& geo, const Field<Vec3>& theta) {
    // flux^{mu nu} = sqrt g Theta^{mu nu}
    Field<Mat4> flux = generate<Mat4>(geo.grid, [&](std::size_t x) -> Mat4 {
        const Mat4& E = geo.E[x];
        return geo.sqrtg[x] * (E * twoform_matrix(combine(selfdual_basis(), theta[x])) * E.transpose());
    });
    std::array<Field<Mat4>, 4> d = {diff(flux, 0), diff(flux, 1), diff(flux, 2), diff(flux, 3)};
    return generate<Vec4>(geo.grid, [&](std::size_t x) -> Vec4 {
        Vec4 up = Vec4::Zero();
        for (int mu = 0; mu < 4; ++mu) up -= d[mu][x].row(mu).transpose();
        return geo.g[x] * up / geo.sqrtg[x];
    });
}

Field<Vec4> coframe_to_coordinates(const Geometry& geo, const Field<Vec4>& v) {
    return generate<Vec4>(geo.grid, [&](std::size_t x) -> Vec4 { return geo.Einv[x].transpose() * v[x]; });
}

Field<Vec4c> pair_oneform(const Field<Vec2c>& psi, const Field<Vec2c>& chi) {
    return generate<Vec4c>(psi.grid, [&](std::size_t x) { return spinor_pair_to_oneform(psi[x], chi[x]); });
}

SWValue sw_functional(const Configuration& c) {
    Geometry geo = make_geometry(c.xi);
    SWValue out;
    out.neg = dirac_plus(geo, c.a, c.psi);
    auto fp = selfdual_coeffs(geo, curvature(c.a));
    out.herm = generate<Mat2c>(geo.grid, [&](std::size_t x) -> Mat2c {
        return rho_plus(fp[x]) - quadratic_map(c.psi[x]).pp;
    });
    return out;
}

SWValue sw_differential(const Configuration& c, const TangentVector& v) {
    Geometry geo = make_geometry(c.xi);
    auto F = curvature(c.a);
    auto fp = selfdual_coeffs(geo, F);
    auto fm = antiselfdual_coeffs(geo, F);
    auto dtau = selfdual_coeffs(geo, curvature(v.tau));
    auto dphi = dirac_plus(geo, c.a, v.phi);
    auto dvar = dirac_variation(c.xi, c.a, lift_plus(c.psi), v.s);
    const auto& gm = gammas();
    SWValue out;
    out.neg = generate<Vec2c>(geo.grid, [&](std::size_t x) -> Vec2c {
        const Mat4& E = geo.E[x];
        Mat4c rho = Mat4c::Zero();
        for (int a = 0; a < 4; ++a) rho += (I * v.tau[x].dot(E.col(a))) * gm[a];
        Vec4c half = 0.5 * rho * SpinorValue{c.psi[x], Vec2c::Zero()}.full();
        return half.tail<2>() + dphi[x] + dvar[x].tail<2>();
    });
    out.herm = generate<Mat2c>(geo.grid, [&](std::size_t x) -> Mat2c {
        Mat4 S = geo.Einv[x] * v.s[x] * geo.E[x];
        double tr = S.trace();
        Mat4 S0 = S - 0.25 * tr * Mat4::Identity();
        const Vec2c& p = c.psi[x];
        const Vec2c& q = v.phi[x];
        Mat2c quad = q * p.adjoint() + p * q.adjoint() - p.dot(q).real() * Mat2c::Identity();
        return rho_plus(dtau[x]) - quad - kKappa * tr * rho_plus(fp[x]) - rho_plus(delta_minus_frame(S0) * fm[x]);
    });
    return out;
}

Mat4 fminus_theta_transpose(const Vec3& fminus, const Vec3& theta) {
    Mat4 T = Mat4::Zero();
    for (const auto& B : traceless_basis()) T += -theta.dot(delta_minus_frame(B) * fminus) * B;
    return T;
}

TangentVector sw_adjoint(const Configuration& c, const ObstructionCovector& w) {
    Geometry geo = make_geometry(c.xi);
    auto F = curvature(c.a);
    auto fp = selfdual_coeffs(geo, F);
    auto fm = antiselfdual_coeffs(geo, F);
    auto v = pair_oneform(c.psi, w.chi);
    Field<Vec4> im_v = map(v, [](const Vec4c& z) -> Vec4 { return z.imag(); });
    Field<Vec4> re_v = map(v, [](const Vec4c& z) -> Vec4 { return z.real(); });

    TangentVector out;
    auto ds = d_star_selfdual(geo, w.theta);
    auto imc = coframe_to_coordinates(geo, im_v);
    out.tau = ds + imc;

    auto dchi = dirac_minus(geo, c.a, w.chi);
    out.phi = generate<Vec2c>(geo.grid, [&](std::size_t x) -> Vec2c {
        return dchi[x] - 0.5 * rho_plus(w.theta[x]) * c.psi[x];
    });

    auto nab = spinor_covariant_derivative(geo, c.a, lift_plus(c.psi));
    Field<Vec4> X = generate<Vec4>(geo.grid, [&](std::size_t x) -> Vec4 { return geo.E[x] * re_v[x]; });
    auto L = lie_metric(geo.g, X);
    auto divX = div_vector(geo.g, X);
    const auto& gm = gammas();
    out.s = generate<Mat4>(geo.grid, [&](std::size_t x) -> Mat4 {
        Vec4c chi = SpinorValue{Vec2c::Zero(), w.chi[x]}.full();
        Mat4 M;
        for (int a = 0; a < 4; ++a)
            for (int d = 0; d < 4; ++d) M(a, d) = chi.dot(gm[a] * nab[d][x]).real();
        Mat4 T = -0.25 * (M + M.transpose()) - 0.5 * kKappa * fp[x].dot(w.theta[x]) * Mat4::Identity() +
                 fminus_theta_transpose(fm[x], w.theta[x]);
        return geo.E[x] * T * geo.Einv[x] + 0.25 * L[x] - 0.5 * divX[x] * Mat4::Identity();
    });
    return out;
}

double inner(const SWValue& x, const SWValue& y, const MetricField& g) {
    const double dv = g.grid.cell_volume();
    return grid_sum(g.grid, [&](std::size_t i) {
        return std::sqrt(g[i].determinant()) * dv * (spinor_inner(x.neg[i], y.neg[i]) + herm_inner(x.herm[i], y.herm[i]));
    });
}

double inner(const SWValue& x, const ObstructionCovector& w, const MetricField& g) {
    const double dv = g.grid.cell_volume();
    return grid_sum(g.grid, [&](std::size_t i) {
        return std::sqrt(g[i].determinant()) * dv *
               (spinor_inner(x.neg[i], w.chi[i]) + herm_inner(x.herm[i], rho_plus(w.theta[i])));
    });
}

double inner(const TangentVector& x, const TangentVector& y, const MetricField& g) {
    return l2_inner_oneform(x.tau, y.tau, g) + l2_inner_spinor(x.phi, y.phi, g).real() + l2_inner_sym(x.s, y.s, g);
}

double norm(const SWValue& x, const MetricField& g) { return std::sqrt(inner(x, x, g)); }

Field<cd> div_pair(const Geometry& geo, const Field<Vec2c>& phi, const Field<Vec2c>& zeta) {
    const Grid& G = geo.grid;
    const auto& gm = gammas();
    // K^mu = -1/2 sqrt g sum_a E^mu_a gamma_a, restricted to W- -> W+ pairing
    auto K = [&](std::size_t x, int mu) -> Mat2c {
        Mat4c k = Mat4c::Zero();
        for (int a = 0; a < 4; ++a) k += geo.E[x](mu, a) * gm[a];
        return (-0.5 * geo.sqrtg[x]) * k.topRightCorner<2, 2>();
    };
    return generate<cd>(G, [&](std::size_t x) {
        cd acc = 0;
        for (int mu = 0; mu < 4; ++mu) {
            std::size_t xp = G.shift(x, mu, 1), xm = G.shift(x, mu, -1);
            Mat2c kp = 0.5 * (K(x, mu) + K(xp, mu)), km = 0.5 * (K(x, mu) + K(xm, mu));
            cd up = phi[x].dot(kp * zeta[xp]) + phi[xp].dot(kp * zeta[x]);
            cd dn = phi[xm].dot(km * zeta[x]) + phi[x].dot(km * zeta[xm]);
            acc += (up - dn) / (2.0 * G.h);
        }
        return acc / geo.sqrtg[x];
    });
}

double dirac_divergence_defect(const Geometry& geo, const Connection& a, const Field<Vec2c>& phi, const Field<Vec2c>& zeta) {
    auto dv = div_pair(geo, phi, zeta);
    auto dphi = dirac_plus(geo, a, phi);
    auto dzeta = dirac_minus(geo, a, zeta);
    double m = 0;
    for (std::size_t x = 0; x < phi.size(); ++x) {
        cd rhs = dphi[x].dot(zeta[x]) - phi[x].dot(dzeta[x]);
        m = std::max(m, std::abs(2.0 * dv[x] - rhs));
    }
    return m;
}

KernelResidual kernel_residual(const Configuration& c, const ObstructionCovector& w, double monopole_tol) {
    Geometry geo = make_geometry(c.xi);
    double psi_norm = std::sqrt(std::abs(l2_inner_spinor(c.psi, c.psi, geo.g)));
    if (psi_norm == 0.0) throw std::invalid_argument("kernel_residual: reducible configuration (psi = 0)");
    if (monopole_tol >= 0) {
        double a_norm = std::sqrt(l2_inner_oneform(c.a, c.a, geo.g));
        double r = norm(sw_functional(c), geo.g);
        if (r > monopole_tol * (psi_norm + a_norm)) throw std::invalid_argument("kernel_residual: configuration is not a monopole");
    }
    auto F = curvature(c.a);
    auto fp = selfdual_coeffs(geo, F);
    auto full = sw_adjoint(c, w);
    auto v = pair_oneform(c.psi, w.chi);
    Field<Vec4> X = generate<Vec4>(geo.grid, [&](std::size_t x) -> Vec4 { return geo.E[x] * v[x].real(); });
    Field<Vec4> Y = generate<Vec4>(geo.grid, [&](std::size_t x) -> Vec4 { return geo.E[x] * v[x].imag(); });
    auto divX = div_vector(geo.g, X);
    auto divY = div_vector(geo.g, Y);
    KernelResidual r;
    r.r1 = full.tau;
    r.r2 = full.phi;
    r.r3 = generate<Mat4>(geo.grid, [&](std::size_t x) -> Mat4 {
        return full.s[x] + (0.5 * divX[x] + 0.5 * kKappa * fp[x].dot(w.theta[x])) * Mat4::Identity();
    });
    r.r4 = generate<double>(geo.grid, [&](std::size_t x) { return fp[x].dot(w.theta[x]); });
    r.r5 = generate<cd>(geo.grid, [&](std::size_t x) { return cd(divX[x], divY[x]); });
    return r;
}

KernelScalarReport kernel_scalar_check(const Configuration& c, const ObstructionCovector& w) {
    Geometry geo = make_geometry(c.xi);
    auto fp = selfdual_coeffs(geo, curvature(c.a));
    auto v = pair_oneform(c.psi, w.chi);
    Field<Vec4> X = generate<Vec4>(geo.grid, [&](std::size_t x) -> Vec4 { return geo.E[x] * v[x].real(); });
    Field<Vec4> Y = generate<Vec4>(geo.grid, [&](std::size_t x) -> Vec4 { return geo.E[x] * v[x].imag(); });
    auto divX = div_vector(geo.g, X);
    auto divY = div_vector(geo.g, Y);
    Field<double> ft = generate<double>(geo.grid, [&](std::size_t x) { return fp[x].dot(w.theta[x]); });
    auto adj = sw_adjoint(c, w);
    KernelScalarReport r;
    r.dirac_divergence_defect = dirac_divergence_defect(geo, c.a, c.psi, w.chi);
    r.fplus_theta = std::sqrt(l2_inner(ft, ft, geo.g));
    r.div_re = std::sqrt(l2_inner(divX, divX, geo.g));
    r.div_im = std::sqrt(l2_inner(divY, divY, geo.g));
    r.residual = std::sqrt(inner(adj, adj, geo.g));
    return r;
}

}  // namespace swlab
