#include "swlab/calculus.hpp"

#include "swlab/metric.hpp"

namespace swlab {

Field<double> sqrt_det(const MetricField& g) {
    return map(g, [](const Mat4& m) { return std::sqrt(m.determinant()); });
}

MetricField inverse(const MetricField& g) {
    return map(g, [](const Mat4& m) -> Mat4 { return m.inverse(); });
}

MetricField flat_metric(const Grid& grid) { return MetricField(grid, Mat4::Identity()); }

namespace {

std::array<Field<Mat4>, 4> all_diffs(const Field<Mat4>& f) {
    return {diff(f, 0), diff(f, 1), diff(f, 2), diff(f, 3)};
}

}  // namespace

Field<Chr> christoffel(const MetricField& g) {
    for (const auto& m : g.v)
        if (!is_spd(m)) throw std::invalid_argument("christoffel: metric not SPD");
    auto dg = all_diffs(g);
    return generate<Chr>(g.grid, [&](std::size_t x) {
        Mat4 gi = g[x].inverse();
        Chr low;  // low[l](i,j) = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    low[l](i, j) = 0.5 * (dg[i][x](j, l) + dg[j][x](i, l) - dg[l][x](i, j));
        Chr G;
        for (int k = 0; k < 4; ++k) {
            G[k].setZero();
            for (int l = 0; l < 4; ++l) G[k] += gi(k, l) * low[l];
        }
        return G;
    });
}

Field<Tensor3> nabla_lowered(const MetricField& g, const Field<Chr>& G, const Field<Mat4>& s) {
    Field<Mat4> sigma = generate<Mat4>(g.grid, [&](std::size_t x) -> Mat4 { return g[x] * s[x]; });
    auto ds = all_diffs(sigma);
    return generate<Tensor3>(g.grid, [&](std::size_t x) {
        const Mat4& sg = sigma[x];
        Tensor3 N;
        for (int i = 0; i < 4; ++i) {
            // Gi(m, j) = Gamma^m_ij
            Mat4 Gi;
            for (int m = 0; m < 4; ++m) Gi.row(m) = G[x][m].row(i);
            N[i] = ds[i][x] - Gi.transpose() * sg - sg * Gi;
        }
        return N;
    });
}

Field<Chr> lc_variation(const MetricField& g, const Field<Mat4>& s) {
    auto G = christoffel(g);
    auto N = nabla_lowered(g, G, s);
    return generate<Chr>(g.grid, [&](std::size_t x) {
        Mat4 gi = g[x].inverse();
        Chr low;  // low[l](i,j) = N_i jl + N_j il - N_l ij
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) low[l](i, j) = N[x][i](j, l) + N[x][j](i, l) - N[x][l](i, j);
        Chr D;
        for (int k = 0; k < 4; ++k) {
            D[k].setZero();
            for (int l = 0; l < 4; ++l) D[k] += gi(k, l) * low[l];
        }
        return D;
    });
}

Field<Chr> omega_dot(const MetricField& g, const Field<Mat4>& s) {
    auto G = christoffel(g);
    auto N = nabla_lowered(g, G, s);
    return generate<Chr>(g.grid, [&](std::size_t x) {
        Mat4 gi = g[x].inverse();
        Chr low;  // g(omega_dot(e_i) e_j, e_l) = N_j il - N_l ij
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) low[l](i, j) = N[x][j](i, l) - N[x][l](i, j);
        Chr D;
        for (int k = 0; k < 4; ++k) {
            D[k].setZero();
            for (int l = 0; l < 4; ++l) D[k] += gi(k, l) * low[l];
        }
        return D;
    });
}

Field<Tensor3> lower_last(const MetricField& g, const Field<Chr>& t) {
    return generate<Tensor3>(g.grid, [&](std::size_t x) {
        Tensor3 out;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) {
                    double acc = 0;
                    for (int m = 0; m < 4; ++m) acc += g[x](k, m) * t[x][m](i, j);
                    out[i](j, k) = acc;
                }
        return out;
    });
}

Field<Vec4> divergence(const MetricField& g, const Field<Mat4>& s) {
    auto G = christoffel(g);
    auto N = nabla_lowered(g, G, s);
    return generate<Vec4>(g.grid, [&](std::size_t x) {
        Mat4 gi = g[x].inverse();
        Vec4 d = Vec4::Zero();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) d += gi(i, j) * N[x][i].row(j).transpose();
        return d;
    });
}

Field<Vec4> d_trace(const MetricField& g, const Field<Mat4>& s) {
    Field<double> tr = map(s, [](const Mat4& m) { return m.trace(); });
    std::array<Field<double>, 4> d = {diff(tr, 0), diff(tr, 1), diff(tr, 2), diff(tr, 3)};
    return generate<Vec4>(g.grid, [&](std::size_t x) { return Vec4(d[0][x], d[1][x], d[2][x], d[3][x]); });
}

namespace {

// nabla_i X_j as a matrix (i, j)
Field<Mat4> nabla_covector(const MetricField& g, const Field<Chr>& G, const Field<Vec4>& X) {
    Field<Vec4> low = generate<Vec4>(g.grid, [&](std::size_t x) -> Vec4 { return g[x] * X[x]; });
    std::array<Field<Vec4>, 4> d = {diff(low, 0), diff(low, 1), diff(low, 2), diff(low, 3)};
    return generate<Mat4>(g.grid, [&](std::size_t x) {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double acc = d[i][x](j);
                for (int m = 0; m < 4; ++m) acc -= G[x][m](i, j) * low[x](m);
                r(i, j) = acc;
            }
        return r;
    });
}

}  // namespace

Field<Mat4> lie_metric(const MetricField& g, const Field<Vec4>& X) {
    auto G = christoffel(g);
    auto nX = nabla_covector(g, G, X);
    return generate<Mat4>(g.grid, [&](std::size_t x) -> Mat4 {
        return g[x].inverse() * (nX[x] + nX[x].transpose());
    });
}

Field<double> div_vector_cov(const MetricField& g, const Field<Vec4>& X) {
    auto G = christoffel(g);
    auto nX = nabla_covector(g, G, X);
    return generate<double>(g.grid, [&](std::size_t x) { return (g[x].inverse() * nX[x]).trace(); });
}

Field<double> div_vector(const MetricField& g, const Field<Vec4>& X) {
    auto sg = sqrt_det(g);
    Field<double> out(g.grid, 0.0);
    for (int mu = 0; mu < 4; ++mu) {
        Field<double> flux = generate<double>(g.grid, [&](std::size_t x) { return sg[x] * X[x](mu); });
        auto d = diff(flux, mu);
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += d[x];
    }
    for (std::size_t x = 0; x < out.size(); ++x) out[x] /= sg[x];
    return out;
}

namespace {

template <class F>
double weighted_sum(const MetricField& g, F f) {
    const double dv = g.grid.cell_volume();
    return grid_sum(g.grid, [&](std::size_t x) { return std::sqrt(g[x].determinant()) * dv * f(x); });
}

}  // namespace

double l2_inner(const Field<double>& a, const Field<double>& b, const MetricField& g) {
    return weighted_sum(g, [&](std::size_t x) { return a[x] * b[x]; });
}

double l2_inner_oneform(const Field<Vec4>& a, const Field<Vec4>& b, const MetricField& g) {
    return weighted_sum(g, [&](std::size_t x) { return a[x].dot(g[x].inverse() * b[x]); });
}

double l2_inner_twoform(const Field<Vec6>& a, const Field<Vec6>& b, const MetricField& g) {
    return weighted_sum(g, [&](std::size_t x) {
        Mat4 gi = g[x].inverse();
        Mat4 A = twoform_matrix(a[x]), B = twoform_matrix(b[x]);
        return 0.5 * (gi * A * gi * B.transpose()).trace();
    });
}

double l2_inner_sym(const Field<Mat4>& s, const Field<Mat4>& t, const MetricField& g) {
    return weighted_sum(g, [&](std::size_t x) {
        Mat4 tstar = g[x].inverse() * t[x].transpose() * g[x];
        return 2.0 * (s[x] * tstar).trace();
    });
}

cd l2_inner_spinor(const Field<Vec2c>& a, const Field<Vec2c>& b, const MetricField& g) {
    double re = weighted_sum(g, [&](std::size_t x) { return a[x].dot(b[x]).real(); });
    double im = weighted_sum(g, [&](std::size_t x) { return a[x].dot(b[x]).imag(); });
    return {re, im};
}

cd l2_inner_spinor(const Field<Vec4c>& a, const Field<Vec4c>& b, const MetricField& g) {
    double re = weighted_sum(g, [&](std::size_t x) { return a[x].dot(b[x]).real(); });
    double im = weighted_sum(g, [&](std::size_t x) { return a[x].dot(b[x]).imag(); });
    return {re, im};
}

Field<double> random_trig(const Grid& grid, std::mt19937_64& rng, int max_mode, int terms, double amp) {
    std::uniform_int_distribution<int> mode(-max_mode, max_mode);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::array<int, 4>> ks(terms);
    std::vector<double> c(terms), ph(terms);
    for (int t = 0; t < terms; ++t) {
        for (int a = 0; a < 4; ++a) ks[t][a] = mode(rng);
        c[t] = amp * unit(rng) / terms;
        ph[t] = 3.141592653589793 * unit(rng);
    }
    return generate<double>(grid, [&](std::size_t x) {
        Vec4 p = grid.point(x);
        double v = 0;
        for (int t = 0; t < terms; ++t) {
            double arg = ph[t];
            for (int a = 0; a < 4; ++a) arg += ks[t][a] * p(a);
            v += c[t] * std::cos(arg);
        }
        return v;
    });
}

}  // namespace swlab
