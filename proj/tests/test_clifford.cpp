#include <gtest/gtest.h>

#include <random>

#include "swlab/clifford.hpp"
#include "swlab/kahler.hpp"
#include "swlab/metric.hpp"
#include "swlab/sampling.hpp"

using namespace swlab;

namespace {

Vec4c random_vec4c(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Vec4c v;
    for (int k = 0; k < 4; ++k) v(k) = cd(n(rng), n(rng));
    return v;
}

// Complex coordinate 2-form lambda omega + mu dzb1^dzb2 - conj(mu) dz1^dz2.
Eigen::Matrix<cd, 6, 1> kahler_selfdual(cd lambda, cd mu) {
    Eigen::Matrix<cd, 6, 1> b, w;
    b << 0, 1, -I, -I, -1, 0;
    w << lambda, 0, 0, 0, 0, lambda;
    return w + mu * b - std::conj(mu) * b.conjugate();
}

}  // namespace

TEST(Gamma, Anticommutation) {
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            Mat4c ac = gamma(i) * gamma(j) + gamma(j) * gamma(i);
            Mat4c expect = (i == j ? -2.0 : 0.0) * Mat4c::Identity();
            EXPECT_LT((ac - expect).norm(), 1e-14) << i << "," << j;
        }
}

TEST(Gamma, SquareIsMinusIdentity) { EXPECT_LT((gamma(1) * gamma(1) + Mat4c::Identity()).norm(), 1e-15); }

TEST(Gamma, SkewHermitianAndOffDiagonal) {
    for (int i = 1; i <= 4; ++i) {
        EXPECT_LT((gamma(i) + gamma(i).adjoint()).norm(), 1e-15);
        EXPECT_LT((gamma(i).topLeftCorner<2, 2>().norm()), 1e-15);
        EXPECT_LT((gamma(i).bottomRightCorner<2, 2>().norm()), 1e-15);
    }
}

TEST(Gamma, RepresentationDimension) { EXPECT_EQ(gamma(1).rows(), 4); }

TEST(Gamma, IndexOutOfRange) {
    EXPECT_THROW(gamma(0), std::out_of_range);
    EXPECT_THROW(gamma(5), std::out_of_range);
}

TEST(Gamma, VolumeFormOrientation) {
    Mat4c vol = gamma(1) * gamma(2) * gamma(3) * gamma(4);
    Mat4c expect = Mat4c::Identity();
    expect.topLeftCorner<2, 2>() *= -1.0;
    EXPECT_LT((vol - expect).norm(), 1e-14);
    EXPECT_LT((clifford_matrix(Form::volume()) - expect).norm(), 1e-14);
}

TEST(CliffordMul, OneForm) {
    SpinorValue s = SpinorValue::from(Vec4c(1, 0, 0, 0));
    Vec4c e1(1, 0, 0, 0);
    SpinorValue out = clifford_mul(Form::one(e1), s);
    EXPECT_LT((out.full() - gamma(1).col(0)).norm(), 1e-15);
}

TEST(CliffordMul, TwoFormIsProductOfGenerators) {
    std::mt19937_64 rng(3);
    SpinorValue s = SpinorValue::from(random_vec4c(rng));
    Vec6 w = Vec6::Zero();
    w(0) = 1;
    Vec4c expect = gamma(1) * gamma(2) * s.full();
    EXPECT_LT((clifford_mul(Form::two(w), s).full() - expect).norm(), 1e-14);
    Vec4c half = 0.5 * (gamma(1) * gamma(2) - gamma(2) * gamma(1)) * s.full();
    EXPECT_LT((half - expect).norm(), 1e-14);
}

TEST(CliffordMul, RealOneFormSkewAdjoint) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    for (int t = 0; t < 20; ++t) {
        Vec4c sigma(n(rng), n(rng), n(rng), n(rng));
        Vec4c psi = random_vec4c(rng);
        Vec4c out = clifford_mul(Form::one(sigma), SpinorValue::from(psi)).full();
        EXPECT_NEAR(out.dot(psi).real(), 0.0, 1e-13);
    }
}

TEST(CliffordMul, TopDegreeIsVolume) {
    // Masks have 4 bits, so degree > 4 is unrepresentable.
    Form f;
    f.c[15] = 1.0;
    EXPECT_LT((clifford_matrix(f) - clifford_matrix(Form::volume())).norm(), 1e-15);
}

TEST(CliffordMul, ChiralBlocksOfSelfDualForms) {
    for (int k = 0; k < 3; ++k) {
        Mat4c p = clifford_matrix(Form::two(selfdual_basis()[k]));
        EXPECT_LT((p.bottomRightCorner<2, 2>().norm()), 1e-14);
        EXPECT_LT((p.topRightCorner<2, 2>().norm()), 1e-14);
        Mat4c m = clifford_matrix(Form::two(antiselfdual_basis()[k]));
        EXPECT_LT((m.topLeftCorner<2, 2>().norm()), 1e-14);
        EXPECT_LT((m.bottomLeftCorner<2, 2>().norm()), 1e-14);
    }
}

TEST(CliffordMul, BasesAreDualOrthonormal) {
    const Mat4 g = Mat4::Identity();
    for (int k = 0; k < 3; ++k) {
        EXPECT_LT((hodge_star(g, selfdual_basis()[k]) - selfdual_basis()[k]).norm(), 1e-15);
        EXPECT_LT((hodge_star(g, antiselfdual_basis()[k]) + antiselfdual_basis()[k]).norm(), 1e-15);
        for (int l = 0; l < 3; ++l) {
            EXPECT_NEAR(selfdual_basis()[k].dot(selfdual_basis()[l]), k == l, 1e-15);
            EXPECT_NEAR(selfdual_basis()[k].dot(antiselfdual_basis()[l]), 0, 1e-15);
        }
    }
}

TEST(RhoPlus, InverseRoundTrip) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        Vec3 v = random_vec3(rng);
        Mat2c m = rho_plus(v);
        EXPECT_LT((m - m.adjoint()).norm(), 1e-14);
        EXPECT_NEAR(std::abs(m.trace()), 0, 1e-14);
        EXPECT_LT((rho_plus_inverse(m) - v).norm(), 1e-13);
    }
}

TEST(SelfDualBlock, OmegaImage) {
    SpinorEndo e = rho_selfdual_block(I, 0.0);
    Mat2c expect;
    expect << 2.0 * I, 0, 0, -2.0 * I;
    EXPECT_LT((e.pp - expect).norm(), 1e-15);
}

TEST(SelfDualBlock, Zero) { EXPECT_LT(rho_selfdual_block(0.0, 0.0).matrix().norm(), 1e-15); }

// Under the identification the abstract action of lambda omega + mu - conj(mu) is the block
// with lambda replaced by -i lambda (the block takes the real coefficient of the hermitian matrix).
TEST(SelfDualBlock, AgreesWithCliffordUnderIdentification) {
    const Mat4c& U = identification_unitary();
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n;
    for (int t = 0; t < 20; ++t) {
        cd lambda(0, n(rng)), mu(n(rng), n(rng));
        Mat4c model = U * clifford_matrix(Form::two(kahler_selfdual(lambda, mu))) * U.adjoint();
        Mat4c expect = Mat4c::Zero();
        expect.topLeftCorner<2, 2>() = rho_selfdual_block(-I * lambda, mu).pp;
        EXPECT_LT((model - expect).norm(), 1e-13);
    }
}

TEST(SelfDualBlock, Hermitian) {
    SpinorEndo e = rho_selfdual_block(0.7, cd(0.2, -1.1));
    EXPECT_LT((e.pp - e.pp.adjoint()).norm(), 1e-15);
    EXPECT_NEAR(std::abs(e.pp.trace()), 0, 1e-15);
}

TEST(QuadraticMap, Examples) {
    Mat2c expect;
    expect << 0.5, 0, 0, -0.5;
    EXPECT_LT((quadratic_map(Vec2c(1, 0)).pp - expect).norm(), 1e-15);
    EXPECT_LT(quadratic_map(Vec2c::Zero()).matrix().norm(), 1e-15);
}

TEST(QuadraticMap, TracelessHermitianAndGaugeCovariant) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        Vec2c psi = random_vec2c(rng);
        SpinorEndo q = quadratic_map(psi);
        EXPECT_LT((q.pp - q.pp.adjoint()).norm(), 1e-14);
        EXPECT_NEAR(std::abs(q.pp.trace()), 0, 1e-14);
        EXPECT_LT(q.pm.norm() + q.mp.norm() + q.mm.norm(), 1e-15);
        cd f(0.3, -1.2);
        EXPECT_LT((quadratic_map(f * psi).pp - std::norm(f) * q.pp).norm(), 1e-13);
    }
}

TEST(QuadraticMap, QuarterPairing) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        Mat2c r = rho_plus(random_vec3(rng));
        Vec2c phi = random_vec2c(rng);
        EXPECT_NEAR(herm_inner(r, quadratic_map(phi).pp), 0.25 * spinor_inner(r * phi, phi), 1e-12);
    }
}

TEST(PairOneform, Zero) {
    std::mt19937_64 rng(9);
    EXPECT_LT(spinor_pair_to_oneform(Vec2c::Zero(), random_vec2c(rng)).norm(), 1e-15);
}

TEST(PairOneform, DefiningProperty) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 100; ++t) {
        Vec2c psi = random_vec2c(rng), chi = random_vec2c(rng);
        Vec4c sigma = random_vec4c(rng);
        SpinorValue s;
        s.plus = psi;
        Vec2c lhs_vec = clifford_mul(Form::one(sigma), s).minus;
        cd lhs = lhs_vec.dot(chi);
        cd rhs = 2.0 * sigma.dot(spinor_pair_to_oneform(psi, chi));
        EXPECT_LT(std::abs(lhs - rhs), 1e-12);
    }
}

TEST(PairOneform, Sesquilinear) {
    std::mt19937_64 rng(11);
    Vec2c psi = random_vec2c(rng), chi = random_vec2c(rng);
    cd f(0.4, 0.9);
    Vec4c v = spinor_pair_to_oneform(psi, chi);
    EXPECT_LT((spinor_pair_to_oneform(f * psi, chi) - std::conj(f) * v).norm(), 1e-14);
    EXPECT_LT((spinor_pair_to_oneform(psi, f * chi) - f * v).norm(), 1e-14);
}

// psi = (alpha, 0), chi a (0,1)-form: the pairing is conj(alpha) chi / sqrt 2 as a (0,1)-form.
TEST(PairOneform, KahlerModel) {
    const Mat4c& U = identification_unitary();
    cd alpha(0.6, -0.8);
    Vec2c a01(cd(0.3, 0.2), cd(-1.0, 0.5));
    Vec4c model_psi(alpha, 0, 0, 0);
    Vec4c model_chi(0, 0, a01(0) * std::sqrt(2.0), a01(1) * std::sqrt(2.0));
    Vec4c psi = U.adjoint() * model_psi, chi = U.adjoint() * model_chi;
    ASSERT_LT(psi.tail<2>().norm(), 1e-15);
    ASSERT_LT(chi.head<2>().norm(), 1e-15);
    Vec4c v = spinor_pair_to_oneform(psi.head<2>(), chi.tail<2>());
    // Coordinate coefficients of conj(alpha) (a1 dzb1 + a2 dzb2) / sqrt 2.
    Vec4c expect = std::conj(alpha) / std::sqrt(2.0) * (a01(0) * dzbar(1) + a01(1) * dzbar(2));
    // spinor_pair_to_oneform is conjugate-linear in its first slot; v pairs as sigma^* v.
    EXPECT_LT((v - expect).norm(), 1e-14);
}
