#include "swlab/clifford.hpp"

#include <bit>
#include <stdexcept>

namespace swlab {

Vec4c SpinorValue::full() const {
    Vec4c v;
    v << plus, minus;
    return v;
}

SpinorValue SpinorValue::from(const Vec4c& v) { return {v.head<2>(), v.tail<2>()}; }

Mat4c SpinorEndo::matrix() const {
    Mat4c m;
    m << pp, pm, mp, mm;
    return m;
}

SpinorEndo SpinorEndo::from(const Mat4c& m) {
    return {m.topLeftCorner<2, 2>(), m.topRightCorner<2, 2>(), m.bottomLeftCorner<2, 2>(),
            m.bottomRightCorner<2, 2>()};
}

namespace {

constexpr int kPairMask[6] = {0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100};

std::array<Mat4c, 4> build_gammas() {
    Mat2c e = Mat2c::Identity(), sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, -I, I, 0;
    sz << 1, 0, 0, -1;
    std::array<Mat2c, 4> c = {e, I * sx, I * sy, I * sz};
    auto make = [&] {
        std::array<Mat4c, 4> g;
        for (int a = 0; a < 4; ++a) {
            g[a].setZero();
            g[a].topRightCorner<2, 2>() = -c[a].adjoint();
            g[a].bottomLeftCorner<2, 2>() = c[a];
        }
        return g;
    };
    auto g = make();
    Mat4c vol = g[0] * g[1] * g[2] * g[3];
    if (std::abs(vol(0, 0) + 1.0) > 1e-12) {
        c[3] = -c[3];
        g = make();
    }
    return g;
}

}  // namespace

const std::array<Mat4c, 4>& gammas() {
    static const std::array<Mat4c, 4> g = build_gammas();
    return g;
}

const Mat4c& gamma(int i) {
    if (i < 1 || i > 4) throw std::out_of_range("gamma index must be in 1..4");
    return gammas()[i - 1];
}

Form Form::scalar(cd v) {
    Form f;
    f.c[0] = v;
    return f;
}

Form Form::one(const Vec4c& v) {
    Form f;
    for (int a = 0; a < 4; ++a) f.c[1 << a] = v(a);
    return f;
}

Form Form::two(const Vec6& w) { return two(Eigen::Matrix<cd, 6, 1>(w.cast<cd>())); }

Form Form::two(const Eigen::Matrix<cd, 6, 1>& w) {
    Form f;
    for (int p = 0; p < 6; ++p) f.c[kPairMask[p]] = w(p);
    return f;
}

Form Form::volume(cd v) {
    Form f;
    f.c[15] = v;
    return f;
}

Form& Form::operator+=(const Form& o) {
    for (int m = 0; m < 16; ++m) c[m] += o.c[m];
    return *this;
}

Mat4c clifford_matrix(const Form& f) {
    static const std::array<Mat4c, 16> basis = [] {
        std::array<Mat4c, 16> b;
        for (int m = 0; m < 16; ++m) {
            b[m] = Mat4c::Identity();
            for (int a = 0; a < 4; ++a)
                if (m & (1 << a)) b[m] = b[m] * gammas()[a];
        }
        return b;
    }();
    Mat4c r = Mat4c::Zero();
    for (int m = 0; m < 16; ++m)
        if (f.c[m] != 0.0) r += f.c[m] * basis[m];
    return r;
}

SpinorValue clifford_mul(const Form& f, const SpinorValue& s) {
    return SpinorValue::from(clifford_matrix(f) * s.full());
}

const std::array<Vec6, 3>& selfdual_basis() {
    static const std::array<Vec6, 3> b = [] {
        const double r = 1.0 / std::sqrt(2.0);
        std::array<Vec6, 3> v;
        v[0] << r, 0, 0, 0, 0, r;
        v[1] << 0, r, 0, 0, -r, 0;
        v[2] << 0, 0, r, r, 0, 0;
        return v;
    }();
    return b;
}

const std::array<Vec6, 3>& antiselfdual_basis() {
    static const std::array<Vec6, 3> b = [] {
        const double r = 1.0 / std::sqrt(2.0);
        std::array<Vec6, 3> v;
        v[0] << r, 0, 0, 0, 0, -r;
        v[1] << 0, r, 0, 0, r, 0;
        v[2] << 0, 0, r, -r, 0, 0;
        return v;
    }();
    return b;
}

namespace {

const std::array<Mat2c, 3>& plus_generators() {
    static const std::array<Mat2c, 3> m = [] {
        std::array<Mat2c, 3> r;
        for (int k = 0; k < 3; ++k)
            r[k] = (I * clifford_matrix(Form::two(selfdual_basis()[k]))).topLeftCorner<2, 2>();
        return r;
    }();
    return m;
}

const std::array<Mat2c, 3>& minus_generators() {
    static const std::array<Mat2c, 3> m = [] {
        std::array<Mat2c, 3> r;
        for (int k = 0; k < 3; ++k)
            r[k] = (I * clifford_matrix(Form::two(antiselfdual_basis()[k]))).bottomRightCorner<2, 2>();
        return r;
    }();
    return m;
}

}  // namespace

Mat2c rho_plus(const Vec3& t) {
    const auto& m = plus_generators();
    return t(0) * m[0] + t(1) * m[1] + t(2) * m[2];
}

Mat2c rho_minus(const Vec3& t) {
    const auto& m = minus_generators();
    return t(0) * m[0] + t(1) * m[1] + t(2) * m[2];
}

Vec3 rho_plus_inverse(const Mat2c& a) {
    const auto& m = plus_generators();
    Vec3 t;
    for (int k = 0; k < 3; ++k) t(k) = herm_inner(a, m[k]) / herm_inner(m[k], m[k]);
    return t;
}

SpinorEndo quadratic_map(const Vec2c& psi) {
    SpinorEndo e;
    e.pp = psi * psi.adjoint() - 0.5 * psi.squaredNorm() * Mat2c::Identity();
    return e;
}

Vec4c spinor_pair_to_oneform(const Vec2c& psi, const Vec2c& chi) {
    Vec4c v;
    for (int a = 0; a < 4; ++a) {
        // Psi = (psi, 0), X = (0, chi): Psi^* gamma_a X = psi^* (-c_a^*) chi
        Mat2c b = gammas()[a].topRightCorner<2, 2>();
        v(a) = -0.5 * psi.dot(b * chi);
    }
    return v;
}

SpinorEndo rho_selfdual_block(cd lambda, cd mu) {
    SpinorEndo e;
    e.pp << 2.0 * lambda, 4.0 * std::conj(mu), 4.0 * mu, -2.0 * lambda;
    return e;
}

}  // namespace swlab
