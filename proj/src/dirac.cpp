#include "swlab/dirac.hpp"

#include <stdexcept>

#include "swlab/clifford.hpp"
#include "swlab/metric.hpp"

namespace swlab {

MetricField frame_to_metric(const SpincStructure& xi) {
    return map(xi.E, [](const Mat4& E) -> Mat4 {
        Mat4 g = (E * E.transpose()).inverse();
        return 0.5 * (g + g.transpose());
    });
}

SpincStructure metric_to_frame(const MetricField& g) {
    return {map(g, [](const Mat4& m) -> Mat4 { return spd_inv_sqrt(m); })};
}

SpincStructure identity_frame(const Grid& grid) { return {Field<Mat4>(grid, Mat4::Identity())}; }

namespace {

using Frame4 = std::array<Field<Mat4>, 4>;

Frame4 diffs(const Field<Mat4>& f) { return {diff(f, 0), diff(f, 1), diff(f, 2), diff(f, 3)}; }

// Coordinate vector nabla_X Y given X, Y and d_lambda Y.
Vec4 covariant(const Chr& G, const Vec4& X, const Vec4& Y, const std::array<Vec4, 4>& dY) {
    Vec4 r = Vec4::Zero();
    for (int l = 0; l < 4; ++l) r += X(l) * dY[l];
    for (int m = 0; m < 4; ++m) r(m) += X.dot(G[m] * Y);
    return r;
}

// V[a][b] = nabla_{e_a} Y_b for the columns Y_b of a matrix field.
std::array<std::array<Vec4, 4>, 4> covariant_columns(const Chr& G, const Mat4& E, const Mat4& Y,
                                                     const Frame4& dY, std::size_t x) {
    std::array<std::array<Vec4, 4>, 4> V;
    for (int b = 0; b < 4; ++b) {
        std::array<Vec4, 4> d;
        for (int l = 0; l < 4; ++l) d[l] = dY[l][x].col(b);
        for (int a = 0; a < 4; ++a) V[a][b] = covariant(G, E.col(a), Y.col(b), d);
    }
    return V;
}

SpinCoeffs antisym_bc(const SpinCoeffs& raw) {
    SpinCoeffs w;
    for (int a = 0; a < 4; ++a) w[a] = 0.5 * (raw[a] - raw[a].transpose());
    return w;
}

const std::array<std::array<Mat4c, 4>, 4>& gamma_pairs() {
    static const auto p = [] {
        std::array<std::array<Mat4c, 4>, 4> r;
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) r[b][c] = gammas()[b] * gammas()[c];
        return r;
    }();
    return p;
}

// 1/4 sum_bc w_bc gamma_b gamma_c
Mat4c spin_matrix(const Mat4& w) {
    Mat4c r = Mat4c::Zero();
    for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
            if (w(b, c) != 0.0) r += (0.25 * w(b, c)) * gamma_pairs()[b][c];
    return r;
}

std::array<Field<Vec4c>, 4> spinor_diffs(const Field<Vec4c>& psi) {
    return {diff(psi, 0), diff(psi, 1), diff(psi, 2), diff(psi, 3)};
}

}  // namespace

Field<SpinCoeffs> spin_connection_coeffs(const SpincStructure& xi) {
    auto g = frame_to_metric(xi);
    auto G = christoffel(g);
    auto dE = diffs(xi.E);
    return generate<SpinCoeffs>(g.grid, [&](std::size_t x) {
        const Mat4& E = xi.E[x];
        auto V = covariant_columns(G[x], E, E, dE, x);
        SpinCoeffs raw;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) raw[a](b, c) = V[a][b].dot(g[x] * E.col(c));
        return antisym_bc(raw);
    });
}

Geometry make_geometry(const SpincStructure& xi) {
    Geometry geo;
    geo.grid = xi.E.grid;
    geo.E = xi.E;
    geo.Einv = map(xi.E, [](const Mat4& m) -> Mat4 { return m.inverse(); });
    geo.g = frame_to_metric(xi);
    geo.sqrtg = sqrt_det(geo.g);
    geo.gamma = christoffel(geo.g);
    geo.omega = spin_connection_coeffs(xi);
    return geo;
}

std::array<Field<Vec4c>, 4> spinor_covariant_derivative(const Geometry& geo, const Connection& a,
                                                        const Field<Vec4c>& psi) {
    auto dpsi = spinor_diffs(psi);
    std::array<Field<Vec4c>, 4> out;
    for (int d = 0; d < 4; ++d)
        out[d] = generate<Vec4c>(geo.grid, [&](std::size_t x) -> Vec4c {
            const Mat4& E = geo.E[x];
            Vec4c r = Vec4c::Zero();
            for (int m = 0; m < 4; ++m) r += E(m, d) * dpsi[m][x];
            double ae = a[x].dot(E.col(d));
            r += spin_matrix(geo.omega[x][d]) * psi[x] + (0.5 * I * ae) * psi[x];
            return r;
        });
    return out;
}

Field<Vec4c> dirac(const Geometry& geo, const Connection& a, const Field<Vec4c>& psi) {
    auto dpsi = spinor_diffs(psi);
    const auto& gm = gammas();
    return generate<Vec4c>(geo.grid, [&](std::size_t x) -> Vec4c {
        const Mat4& E = geo.E[x];
        Mat4c M = Mat4c::Zero();
        Vec4c r = Vec4c::Zero();
        for (int d = 0; d < 4; ++d) {
            Vec4c nab = Vec4c::Zero();
            for (int m = 0; m < 4; ++m) nab += E(m, d) * dpsi[m][x];
            r += gm[d] * nab;
            M += gm[d] * (spin_matrix(geo.omega[x][d]) + Mat4c::Identity() * (0.5 * I * a[x].dot(E.col(d))));
        }
        return r + M * psi[x];
    });
}

Field<Vec4c> dirac(const SpincStructure& xi, const Connection& a, const Field<Vec4c>& psi) {
    return dirac(make_geometry(xi), a, psi);
}

Field<Vec2c> dirac_plus(const Geometry& geo, const Connection& a, const Field<Vec2c>& psi) {
    auto full = map(psi, [](const Vec2c& p) -> Vec4c { return SpinorValue{p, Vec2c::Zero()}.full(); });
    auto d = dirac(geo, a, full);
    return map(d, [](const Vec4c& v) -> Vec2c { return v.tail<2>(); });
}

Field<Vec2c> dirac_minus(const Geometry& geo, const Connection& a, const Field<Vec2c>& chi) {
    auto full = map(chi, [](const Vec2c& p) -> Vec4c { return SpinorValue{Vec2c::Zero(), p}.full(); });
    auto d = dirac(geo, a, full);
    return map(d, [](const Vec4c& v) -> Vec2c { return v.head<2>(); });
}

Field<Vec6> curvature(const Connection& a) {
    std::array<Field<Vec4>, 4> d = {diff(a, 0), diff(a, 1), diff(a, 2), diff(a, 3)};
    return generate<Vec6>(a.grid, [&](std::size_t x) {
        Vec6 F;
        for (int p = 0; p < 6; ++p) {
            int m = kPairs[p][0], n = kPairs[p][1];
            F(p) = d[m][x](n) - d[n][x](m);
        }
        return F;
    });
}

Field<Vec4> exterior_d2(const Field<Vec6>& w) {
    std::array<Field<Vec6>, 4> d = {diff(w, 0), diff(w, 1), diff(w, 2), diff(w, 3)};
    auto comp = [](int i, int j) {
        for (int p = 0; p < 6; ++p)
            if (kPairs[p][0] == i && kPairs[p][1] == j) return p;
        return -1;
    };
    const int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    return generate<Vec4>(w.grid, [&](std::size_t x) {
        Vec4 r;
        for (int t = 0; t < 4; ++t) {
            int i = triples[t][0], j = triples[t][1], k = triples[t][2];
            r(t) = d[i][x](comp(j, k)) - d[j][x](comp(i, k)) + d[k][x](comp(i, j));
        }
        return r;
    });
}

Field<Vec4c> dirac_variation(const SpincStructure& xi, const Connection& a, const Field<Vec4c>& psi,
                             const Field<Mat4>& s) {
    Geometry geo = make_geometry(xi);
    auto nab = spinor_covariant_derivative(geo, a, psi);
    auto N = nabla_lowered(geo.g, geo.gamma, s);
    auto dE = diffs(geo.E);
    Field<Mat4> sE = generate<Mat4>(geo.grid, [&](std::size_t x) -> Mat4 { return s[x] * geo.E[x]; });
    auto dsE = diffs(sE);
    const auto& gm = gammas();
    return generate<Vec4c>(geo.grid, [&](std::size_t x) -> Vec4c {
        const Mat4& E = geo.E[x];
        const Mat4& g = geo.g[x];
        Mat4 S = geo.Einv[x] * s[x] * E;
        Mat4 sigma = g * s[x];
        // -sum_a gamma_a nabla_{s e_a} psi
        Vec4c r = Vec4c::Zero();
        for (int aa = 0; aa < 4; ++aa) {
            Vec4c v = Vec4c::Zero();
            for (int d = 0; d < 4; ++d) v += S(d, aa) * nab[d][x];
            r -= gm[aa] * v;
        }
        auto V = covariant_columns(geo.gamma[x], E, E, dE, x);
        auto W = covariant_columns(geo.gamma[x], E, sE[x], dsE, x);
        Tensor3 Nf;  // frame components of nabla sigma
        for (int i = 0; i < 4; ++i) {
            Mat4 t = Mat4::Zero();
            for (int m = 0; m < 4; ++m) t += E(m, i) * N[x][m];
            Nf[i] = E.transpose() * t * E;
        }
        SpinCoeffs raw;
        for (int aa = 0; aa < 4; ++aa)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) {
                    Vec4 ec = E.col(c);
                    raw[aa](b, c) = V[aa][b].dot(sigma * ec) - W[aa][b].dot(g * ec) + Nf[aa](b, c) +
                                    Nf[b](aa, c) - Nf[c](aa, b);
                }
        SpinCoeffs om = antisym_bc(raw);
        Mat4c M = Mat4c::Zero();
        for (int aa = 0; aa < 4; ++aa) M += gm[aa] * spin_matrix(om[aa]);
        return r + M * psi[x];
    });
}

Field<Vec4c> dirac_variation_closed_form(const SpincStructure& xi, const Connection& a, const Field<Vec4c>& psi,
                                         const Field<Mat4>& s) {
    Geometry geo = make_geometry(xi);
    auto nab = spinor_covariant_derivative(geo, a, psi);
    auto div = divergence(geo.g, s);
    auto dtr = d_trace(geo.g, s);
    const auto& gm = gammas();
    return generate<Vec4c>(geo.grid, [&](std::size_t x) -> Vec4c {
        const Mat4& E = geo.E[x];
        Mat4 S = geo.Einv[x] * s[x] * E;
        Vec4c r = Vec4c::Zero();
        for (int aa = 0; aa < 4; ++aa) {
            Vec4c v = Vec4c::Zero();
            for (int d = 0; d < 4; ++d) v += S(d, aa) * nab[d][x];
            r -= gm[aa] * v;
        }
        Vec4 alpha = div[x] - dtr[x];
        Mat4c rho = Mat4c::Zero();
        for (int aa = 0; aa < 4; ++aa) rho += alpha.dot(E.col(aa)) * gm[aa];
        return r - 0.5 * rho * psi[x];
    });
}

MetricPath pullback_path(const MetricField& g0, const Field<Mat4>& s) {
    MetricPath p;
    p.g = [&g0, &s](std::size_t x, double t) -> Mat4 {
        Mat4 f = Mat4::Identity() + t * s[x];
        return f.transpose() * g0[x] * f;
    };
    p.gdot = [&g0, &s](std::size_t x, double t) -> Mat4 {
        Mat4 f = Mat4::Identity() + t * s[x];
        Mat4 m = s[x].transpose() * g0[x] * f;
        return m + m.transpose();
    };
    return p;
}

MetricPath straight_path(const MetricField& g0, const MetricField& g1) {
    MetricPath p;
    p.g = [&g0, &g1](std::size_t x, double t) -> Mat4 { return (1 - t) * g0[x] + t * g1[x]; };
    p.gdot = [&g0, &g1](std::size_t x, double) -> Mat4 { return g1[x] - g0[x]; };
    return p;
}

SpincStructure xi_transport(const SpincStructure& xi0, const MetricPath& path, double t0, double t1, int steps) {
    if (steps < 1) throw std::invalid_argument("xi_transport: steps must be positive");
    const double dt = (t1 - t0) / steps;
    Field<Mat4> out = generate<Mat4>(xi0.E.grid, [&](std::size_t x) -> Mat4 {
        auto rhs = [&](double t, const Mat4& E) -> Mat4 {
            Mat4 gt = path.g(x, t);
            Eigen::LLT<Mat4> llt(gt);
            if (llt.info() != Eigen::Success) throw std::domain_error("xi_transport: path leaves the SPD cone");
            return -0.5 * llt.solve(path.gdot(x, t)) * E;
        };
        Mat4 E = xi0.E[x];
        for (int i = 0; i < steps; ++i) {
            double t = t0 + i * dt;
            Mat4 k1 = rhs(t, E);
            Mat4 k2 = rhs(t + 0.5 * dt, E + 0.5 * dt * k1);
            Mat4 k3 = rhs(t + 0.5 * dt, E + 0.5 * dt * k2);
            Mat4 k4 = rhs(t + dt, E + dt * k3);
            E += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return E;
    });
    return {out};
}

Connection gauge_connection(const Connection& a, const Field<double>& u) {
    std::array<Field<double>, 4> d = {diff(u, 0), diff(u, 1), diff(u, 2), diff(u, 3)};
    return generate<Vec4>(a.grid, [&](std::size_t x) -> Vec4 {
        return a[x] + 2.0 * Vec4(d[0][x], d[1][x], d[2][x], d[3][x]);
    });
}

Field<Vec4c> gauge_spinor(const Field<Vec4c>& psi, const Field<double>& u) {
    return generate<Vec4c>(psi.grid, [&](std::size_t x) -> Vec4c { return std::exp(-I * u[x]) * psi[x]; });
}

}  // namespace swlab
