#include "swlab/metric.hpp"

#include <stdexcept>

#include "swlab/clifford.hpp"

namespace swlab {

Mat4 twoform_matrix(const Vec6& w) {
    Mat4 m = Mat4::Zero();
    for (int p = 0; p < 6; ++p) {
        m(kPairs[p][0], kPairs[p][1]) = w(p);
        m(kPairs[p][1], kPairs[p][0]) = -w(p);
    }
    return m;
}

Vec6 matrix_twoform(const Mat4& m) {
    Vec6 w;
    for (int p = 0; p < 6; ++p) w(p) = m(kPairs[p][0], kPairs[p][1]);
    return w;
}

namespace {

int levi_civita(int a, int b, int c, int d) {
    int p[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (p[i] == p[j]) return 0;
            if (p[i] > p[j]) sign = -sign;
        }
    return sign;
}

}  // namespace

bool is_spd(const Mat4& g) {
    if (!g.isApprox(g.transpose(), 1e-12)) return false;
    Eigen::LLT<Mat4> llt(g);
    return llt.info() == Eigen::Success;
}

Vec6 hodge_star(const Mat4& g, const Vec6& w) {
    if (!is_spd(g)) throw std::invalid_argument("hodge_star: metric not SPD");
    Mat4 gi = g.inverse();
    Mat4 up = gi * twoform_matrix(w) * gi;  // w^{ij}
    double vol = std::sqrt(g.determinant());
    Mat4 r = Mat4::Zero();
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            double acc = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) acc += up(i, j) * levi_civita(i, j, k, l);
            r(k, l) = 0.5 * vol * acc;
        }
    return matrix_twoform(r);
}

Vec6 selfdual_project(const Mat4& g, const Vec6& w) { return 0.5 * (w + hodge_star(g, w)); }
Vec6 antiselfdual_project(const Mat4& g, const Vec6& w) { return 0.5 * (w - hodge_star(g, w)); }

Vec6 i_derivation(const Mat4& s, const Vec6& w) {
    Mat4 W = twoform_matrix(w);
    return matrix_twoform(s.transpose() * W + W * s);
}

Mat3 delta_minus(const Mat4& g, const Mat4& s0) {
    if (std::abs(s0.trace()) > 1e-10 * std::max(1.0, s0.norm()))
        throw std::invalid_argument("delta_minus: input not traceless");
    Mat4 E = spd_inv_sqrt(g);
    return delta_minus_frame(E.inverse() * s0 * E);
}

Mat3 delta_minus_frame(const Mat4& S) {
    if (std::abs(S.trace()) > 1e-10 * std::max(1.0, S.norm()))
        throw std::invalid_argument("delta_minus: input not traceless");
    const auto& bp = selfdual_basis();
    const auto& bm = antiselfdual_basis();
    Mat3 m;
    for (int l = 0; l < 3; ++l) {
        Vec6 img = i_derivation(S, bm[l]);
        for (int k = 0; k < 3; ++k) m(k, l) = bp[k].dot(img);
    }
    return m;
}

double scalar_block_factor(const Mat4& s) {
    const auto& bp = selfdual_basis();
    double acc = 0;
    for (int k = 0; k < 3; ++k) acc += bp[k].dot(i_derivation(s, bp[k]));
    return acc / 3.0;
}

Mat4 spd_sqrt(const Mat4& g) {
    if (!is_spd(g)) throw std::invalid_argument("spd_sqrt: input not SPD");
    Eigen::SelfAdjointEigenSolver<Mat4> es(g);
    return es.operatorSqrt();
}

Mat4 spd_inv_sqrt(const Mat4& g) {
    if (!is_spd(g)) throw std::invalid_argument("spd_inv_sqrt: input not SPD");
    Eigen::SelfAdjointEigenSolver<Mat4> es(g);
    return es.operatorInverseSqrt();
}

Polar polar_decompose(const Mat4& E, const Mat4& g) {
    if (E.determinant() <= 0) throw std::invalid_argument("polar_decompose: det E <= 0");
    Mat4 G = spd_sqrt(g), Gi = G.inverse();
    Mat4 Et = G * E * Gi;
    Eigen::JacobiSVD<Mat4> svd(Et, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat4 R = svd.matrixU() * svd.matrixV().transpose();
    Mat4 P = svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().transpose();
    return {Gi * R * G, Gi * P * G};
}

Mat4 xi_curvature(const Mat4& g, const Mat4& h, const Mat4& k) {
    Mat4 gi = g.inverse();
    Mat4 H = gi * h, K = gi * k;
    return -0.25 * (H * K - K * H);
}

Mat4 transport_segment(const Mat4& E, const Mat4& g0, const Mat4& g1, int steps) {
    const Mat4 dg = g1 - g0;
    auto rhs = [&](double t, const Mat4& X) -> Mat4 {
        Mat4 gt = g0 + t * dg;
        return -0.5 * gt.ldlt().solve(dg) * X;
    };
    Mat4 X = E;
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        double t = i * dt;
        Mat4 k1 = rhs(t, X);
        Mat4 k2 = rhs(t + 0.5 * dt, X + 0.5 * dt * k1);
        Mat4 k3 = rhs(t + 0.5 * dt, X + 0.5 * dt * k2);
        Mat4 k4 = rhs(t + dt, X + dt * k3);
        X += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return X;
}

Mat4 xi_holonomy_oracle(const Mat4& g, const Mat4& h, const Mat4& k, double eps, int steps_per_edge) {
    const Mat4 c[4] = {g, g + eps * h, g + eps * h + eps * k, g + eps * k};
    for (const auto& m : c)
        if (!is_spd(m)) throw std::invalid_argument("xi_holonomy_oracle: loop leaves the SPD cone");
    const Mat4 E0 = spd_inv_sqrt(g);
    Mat4 E = E0;
    for (int e = 0; e < 4; ++e) E = transport_segment(E, c[e], c[(e + 1) % 4], steps_per_edge);
    return (E * E0.inverse() - Mat4::Identity()) / (eps * eps);
}

}  // namespace swlab
