#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "swlab/calculus.hpp"
#include "swlab/clifford.hpp"
#include "swlab/field_io.hpp"
#include "swlab/kahler.hpp"
#include "swlab/metric.hpp"
#include "swlab/sampling.hpp"

using namespace swlab;

namespace {

Mat2c random_mat2c(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Mat2c m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = cd(n(rng), n(rng));
    return m;
}

FormField random_forms(const Grid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    FormField f = zero_forms(g);
    for (auto& c : f.v)
        for (auto& z : c) z = cd(n(rng), n(rng));
    return f;
}

DolbeaultField random_dolbeault(const Grid& g, std::uint64_t seed) {
    Sampler r(g, seed);
    Field<Vec2c> s = r.spinor2(1);
    Field<Vec2c> t = r.spinor2(1);
    return {map(s, [](const Vec2c& v) { return v(0); }), t, map(s, [](const Vec2c& v) { return v(1); })};
}

double max_diff(const DolbeaultField& a, const DolbeaultField& b) {
    double m = 0;
    for (std::size_t x = 0; x < a.a00.size(); ++x)
        m = std::max({m, std::abs(a.a00[x] - b.a00[x]), (a.a01[x] - b.a01[x]).norm(), std::abs(a.a02[x] - b.a02[x])});
    return m;
}

double max_abs(const FormField& f) {
    double m = 0;
    for (const auto& c : f.v)
        for (const auto& z : c) m = std::max(m, std::abs(z));
    return m;
}

double max_abs(const KernelBlocks& k) {
    double m = 0;
    for (std::size_t x = 0; x < k.ra.size(); ++x) {
        m = std::max({m, k.ra[x].norm(), std::abs(k.rb[x]), std::abs(k.rc[x])});
        for (const auto& z : k.re[x]) m = std::max(m, std::abs(z));
    }
    return m;
}

Connection random_connection(const Grid& g, std::uint64_t seed, double amp = 0.7) { return Sampler(g, seed).oneform(amp); }

}  // namespace

TEST(ComplexStructure, StandardSquaresToMinusIdentity) {
    const Mat4& J = ComplexStructure::standard().J;
    EXPECT_LT((J * J + Mat4::Identity()).norm(), 1e-15);
    EXPECT_EQ(J(1, 0), 1.0);
}

TEST(ComplexStructure, Compatibility) {
    ComplexStructure c = ComplexStructure::standard();
    EXPECT_TRUE(c.compatible(Mat4::Identity()));
    EXPECT_TRUE(c.compatible(3.0 * Mat4::Identity()));
    Mat4 g = Mat4::Identity();
    g(0, 0) = 2;
    EXPECT_FALSE(c.compatible(g));
    ComplexStructure flipped = c;
    flipped.J.bottomRightCorner<2, 2>() *= -1.0;
    EXPECT_FALSE(flipped.compatible(Mat4::Identity()));
    // The conjugate structure induces the same orientation in complex dimension two.
    EXPECT_TRUE(ComplexStructure{-c.J}.compatible(Mat4::Identity()));
}

TEST(KahlerForm, Coefficients) {
    Vec6 expect;
    expect << 1, 0, 0, 0, 0, 1;
    EXPECT_LT((kahler_form() - expect).norm(), 1e-15);
    EXPECT_LT((hodge_star(Mat4::Identity(), kahler_form()) - kahler_form()).norm(), 1e-15);
}

TEST(SplitSym, Identity) {
    SymSplit p = split_sym(Mat4::Identity());
    EXPECT_LT((p.herm - Mat4::Identity()).norm(), 1e-15);
    EXPECT_LT(p.antiherm.norm(), 1e-15);
}

TEST(SplitSym, ProjectionsAreComplementary) {
    std::mt19937_64 rng(1);
    const Mat4& J = ComplexStructure::standard().J;
    for (int t = 0; t < 20; ++t) {
        Mat4 s = random_symmetric(rng);
        SymSplit p = split_sym(s);
        EXPECT_LT((p.herm + p.antiherm - s).norm(), 1e-14);
        EXPECT_LT((p.herm * J - J * p.herm).norm(), 1e-14);
        EXPECT_LT((p.antiherm * J + J * p.antiherm).norm(), 1e-14);
        EXPECT_NEAR((p.herm * p.antiherm).trace(), 0, 1e-13);
        EXPECT_LT((split_sym(p.herm).herm - p.herm).norm(), 1e-14);
    }
}

TEST(SplitSym, PureBPartIsAntihermitian) {
    std::mt19937_64 rng(2);
    Mat2c b = random_mat2c(rng);
    b = 0.5 * (b + b.transpose()).eval();
    Mat4 s = from_ab({Mat2c::Zero(), b});
    SymSplit p = split_sym(s);
    EXPECT_LT(p.herm.norm(), 1e-14);
    EXPECT_LT((p.antiherm - s).norm(), 1e-14);
}

TEST(ABComponents, Examples) {
    ABComponents id = ab_components(Mat4::Identity());
    EXPECT_LT((id.a - Mat2c::Identity()).norm(), 1e-15);
    EXPECT_LT(id.b.norm(), 1e-15);
    ABComponents j = ab_components(ComplexStructure::standard().J);
    EXPECT_LT((j.a - I * Mat2c::Identity()).norm(), 1e-15);
    EXPECT_LT(j.b.norm(), 1e-15);
}

TEST(ABComponents, RoundTripAndJLinearity) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    const Mat4& J = ComplexStructure::standard().J;
    for (int t = 0; t < 20; ++t) {
        Mat4 f;
        for (int i = 0; i < 16; ++i) f(i) = n(rng);
        ABComponents c = ab_components(f);
        EXPECT_LT((from_ab(c) - f).norm(), 1e-13);
        Mat4 lin = 0.5 * (f - J * f * J);
        EXPECT_LT(ab_components(lin).b.norm(), 1e-13);
        EXPECT_LT((ab_components(lin).a - c.a).norm(), 1e-13);
        Mat4 s = f + f.transpose();
        Mat2c a = ab_components(s).a;
        EXPECT_LT((a - a.adjoint()).norm(), 1e-13);
    }
}

TEST(Forms, DzPairing) {
    for (int j = 1; j <= 2; ++j) {
        EXPECT_NEAR(dz(j).squaredNorm(), 2.0, 1e-15);
        EXPECT_LT((dzbar(j) - dz(j).conjugate()).norm(), 1e-15);
        EXPECT_NEAR(std::abs(dz(j).dot(dzbar(j))), 0, 1e-15);
    }
    EXPECT_THROW(dz(3), std::out_of_range);
}

TEST(HermTo11Form, Examples) {
    EXPECT_LT((herm_to_11form(Mat2c::Identity()) + 4.0 * kahler_form()).norm(), 1e-14);
    EXPECT_LT(herm_to_11form(Mat2c::Zero()).norm(), 1e-15);
    Mat2c bad = Mat2c::Zero();
    bad(0, 1) = 1;
    EXPECT_THROW(herm_to_11form(bad), std::invalid_argument);
}

TEST(HermTo11Form, RoundTripAndType) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        Mat2c a = random_mat2c(rng);
        a = (a + a.adjoint()).eval();
        Vec6 w = herm_to_11form(a);
        EXPECT_LT((herm_from_11form(w) - a).norm(), 1e-13);
        // Real (1,1)-forms are J-invariant.
        const Mat4& J = ComplexStructure::standard().J;
        Mat4 W = twoform_matrix(w);
        EXPECT_LT((J.transpose() * W * J - W).norm(), 1e-13);
    }
}

TEST(HermTo11Form, SigmaAgreesOnHermitianPart) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        Mat2c u = random_mat2c(rng);
        Mat2c h = 0.25 * (u + u.adjoint());
        EXPECT_LT((hermitian_part(sym_re_part(tensor_10_01(u))) - h).norm(), 1e-13);
        Mat4c s = sigma_10_01(u);
        Mat4 re = (-0.5 * I * (s - s.conjugate())).real();
        EXPECT_LT((herm_to_11form(h) - matrix_twoform(re)).norm(), 1e-13);
        EXPECT_LT(split_sym(sym_re_part(tensor_01_01(u))).herm.norm(), 1e-13);
    }
}

TEST(DeltaMinusSplit, HalvesTargetComplementaryRows) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 100; ++t) {
        Mat4 s = random_traceless_symmetric(rng);
        DeltaSplit d = delta_minus_split(s);
        EXPECT_LT((d.from_herm.bottomRows<2>().norm()), 1e-13);
        EXPECT_LT((d.from_antiherm.topRows<1>().norm()), 1e-13);
        EXPECT_LT((d.from_herm + d.from_antiherm - delta_minus_frame(s)).norm(), 1e-13);
    }
}

TEST(DeltaMinusSplit, ZeroAndTrace) {
    DeltaSplit d = delta_minus_split(Mat4::Zero());
    EXPECT_EQ(d.from_herm.norm() + d.from_antiherm.norm(), 0.0);
    EXPECT_THROW(delta_minus_split(Mat4::Identity()), std::invalid_argument);
}

// The pointwise transpose of the F- term: omega-directions land in the J-commuting half,
// the (0,2) directions in the anticommuting half.
TEST(DeltaMinusSplit, FminusTransposeTargets) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    for (int t = 0; t < 20; ++t) {
        Vec3 fm = random_vec3(rng);
        Mat4 h = fminus_theta_transpose(fm, Vec3(n(rng), 0, 0));
        EXPECT_LT(split_sym(h).antiherm.norm(), 1e-13);
        EXPECT_NEAR(h.trace(), 0, 1e-13);
        Mat4 a = fminus_theta_transpose(fm, Vec3(0, n(rng), n(rng)));
        EXPECT_LT(split_sym(a).herm.norm(), 1e-13);
    }
}

TEST(Dolbeault, ConstantFunctionIsHolomorphic) {
    Grid g(4);
    DolbeaultField f = zero_dolbeault(g);
    f.a00 = Field<cd>(g, cd(0.3, -0.4));
    DolbeaultField d = dolbeault(Connection(g, Vec4::Zero()), f, 0);
    EXPECT_LT(max_diff(d, zero_dolbeault(g)), 1e-15);
}

TEST(Dolbeault, InvalidDegree) {
    Grid g(4);
    Connection a(g, Vec4::Zero());
    EXPECT_THROW(dolbeault(a, zero_dolbeault(g), 2), std::invalid_argument);
    EXPECT_THROW(dolbeault_adjoint(a, zero_dolbeault(g), 0), std::invalid_argument);
}

TEST(Dolbeault, AdjointExactWithConnection) {
    Grid g(6);
    Connection a = random_connection(g, 8);
    for (int deg : {0, 1}) {
        DolbeaultField f = random_dolbeault(g, 9 + deg), h = random_dolbeault(g, 20 + deg);
        cd lhs = l2_inner_forms(to_forms(dolbeault(a, f, deg)), to_forms(h));
        cd rhs = l2_inner_forms(to_forms(f), to_forms(dolbeault_adjoint(a, h, deg + 1)));
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::abs(lhs)) << deg;
    }
}

TEST(Dolbeault, FormOperatorsAreAdjoint) {
    Grid g(4);
    std::mt19937_64 rng(11);
    Connection a = random_connection(g, 12);
    FormField f = random_forms(g, rng), h = random_forms(g, rng);
    cd d1 = l2_inner_forms(dbar(a, f), h) - l2_inner_forms(f, dbar_adjoint(a, h));
    cd d2 = l2_inner_forms(del(a, f), h) - l2_inner_forms(f, del_adjoint(a, h));
    EXPECT_LT(std::abs(d1), 1e-9);
    EXPECT_LT(std::abs(d2), 1e-9);
}

TEST(Dolbeault, SquareVanishesForConstantConnection) {
    Grid g(6);
    std::mt19937_64 rng(13);
    for (Vec4 c : {Vec4(0, 0, 0, 0), Vec4(0.3, -0.2, 0.5, 0.1)}) {
        Connection a(g, c);
        FormField f = random_forms(g, rng);
        EXPECT_LT(max_abs(dbar(a, dbar(a, f))), 1e-12);
        EXPECT_LT(max_abs(dbar_adjoint(a, dbar_adjoint(a, f))), 1e-12);
    }
}

TEST(Dolbeault, KahlerIdentity) {
    Grid g(4);
    std::mt19937_64 rng(14);
    FormField f = random_forms(g, rng);
    FormField k1 = del_adjoint(dbar(f)), k2 = dbar(del_adjoint(f));
    double m = 0;
    for (std::size_t x = 0; x < g.size(); ++x)
        for (int j = 0; j < 16; ++j) m = std::max(m, std::abs(k1[x][j] + k2[x][j]));
    EXPECT_LT(m, 1e-12);
}

TEST(Identification, UnitaryIntertwinesGammas) {
    const Mat4c& U = identification_unitary();
    EXPECT_LT((U * U.adjoint() - Mat4c::Identity()).norm(), 1e-14);
    EXPECT_LT(U.imag().norm(), 1e-15);
    std::mt19937_64 rng(15);
    Field<Vec4c> psi = Sampler(Grid(4), 15).spinor4(1);
    Field<Vec4c> back = from_dolbeault(to_dolbeault(psi));
    double e = 0;
    for (std::size_t x = 0; x < psi.size(); ++x) e = std::max(e, (back[x] - psi[x]).norm());
    EXPECT_LT(e, 1e-14);
}

TEST(KahlerDirac, MatchesSpinorDirac) {
    Grid g(6);
    Connection a = random_connection(g, 16);
    Field<Vec4c> psi = Sampler(g, 17).spinor4(1);
    DolbeaultField d = to_dolbeault(dirac(identity_frame(g), a, psi));
    DolbeaultField k = kahler_dirac(a, to_dolbeault(psi));
    EXPECT_LT(max_diff(d, k), 1e-9);
}

TEST(KahlerResidual, Zero) {
    Grid g(4);
    KahlerResidual r = kahler_sw_residual(Connection(g, Vec4::Zero()), Field<cd>(g, 0.0), Field<cd>(g, 0.0));
    for (std::size_t x = 0; x < g.size(); ++x)
        EXPECT_EQ(r.r1[x].norm() + std::abs(r.r2[x]) + std::abs(r.r3[x]), 0.0);
}

TEST(KahlerResidual, ConstantSection) {
    Grid g(4);
    cd alpha(0.6, 0.8);
    KahlerResidual r = kahler_sw_residual(Connection(g, Vec4::Zero()), Field<cd>(g, alpha), Field<cd>(g, 0.0));
    for (std::size_t x = 0; x < g.size(); ++x) {
        EXPECT_LT(r.r1[x].norm(), 1e-15);
        EXPECT_LT(std::abs(r.r2[x]), 1e-15);
        EXPECT_LT(std::abs(r.r3[x] - 0.25 * I * std::norm(alpha)), 1e-15);
    }
}

// With psi = (alpha, beta) in the positive half, the spinor equations and the Kahler residual
// agree block by block up to fixed factors.
TEST(KahlerResidual, EquivalentToSpinorEquations) {
    Grid g(6);
    Connection a = random_connection(g, 18);
    Field<Vec4c> psi = Sampler(g, 19).spinor4(1);
    Field<Vec4c> pos = map(psi, [](const Vec4c& v) {
        Vec4c w = v;
        w.tail<2>().setZero();
        return w;
    });
    Configuration c{a, map(psi, [](const Vec4c& v) { return Vec2c(v.head<2>()); }), identity_frame(g)};
    SWValue sv = sw_functional(c);
    DolbeaultField db = to_dolbeault(pos);
    KahlerResidual kr = kahler_sw_residual(a, db.a00, db.a02);
    const Mat4c& U = identification_unitary();
    double e1 = 0, e2 = 0, e3 = 0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        Mat2c m = U.topLeftCorner<2, 2>() * sv.herm[x] * U.topLeftCorner<2, 2>().adjoint();
        Vec2c n = U.bottomRightCorner<2, 2>() * sv.neg[x];
        e1 = std::max(e1, (n - 2.0 * kr.r1[x]).norm());
        e2 = std::max(e2, std::abs(m(1, 0) - 4.0 * kr.r2[x]));
        e3 = std::max(e3, std::abs(m(0, 0) - 2.0 * I * kr.r3[x]));
    }
    EXPECT_LT(e1, 1e-10);
    EXPECT_LT(e2, 1e-10);
    EXPECT_LT(e3, 1e-10);
}

// Real-linear only: the last block involves conj(chi).
TEST(KernelOperator, RealLinearInDirection) {
    Grid g(4);
    Connection a = random_connection(g, 21, 0.3);
    Sampler r(g, 22);
    Field<cd> alpha = map(r.spinor2(1), [](const Vec2c& v) { return v(0); });
    Field<Vec2c> chi1 = r.spinor2(1), chi2 = r.spinor2(1);
    Field<cd> mu1 = map(r.spinor2(1), [](const Vec2c& v) { return v(1); });
    Field<cd> mu2 = map(r.spinor2(1), [](const Vec2c& v) { return v(0); });
    double s = -1.3;
    KernelBlocks k1 = apply_kernel_operator(a, alpha, chi1, mu1);
    KernelBlocks k2 = apply_kernel_operator(a, alpha, chi2, mu2);
    KernelBlocks k = apply_kernel_operator(a, alpha, chi1 + scaled(chi2, s), mu1 + scaled(mu2, s));
    KernelBlocks d{k.ra - (k1.ra + scaled(k2.ra, s)), k.rb - (k1.rb + scaled(k2.rb, s)), k.rc - (k1.rc + scaled(k2.rc, s)),
                   k.re};
    for (std::size_t x = 0; x < g.size(); ++x)
        for (int j = 0; j < 4; ++j) d.re[x][j] -= k1.re[x][j] + s * k2.re[x][j];
    EXPECT_LT(max_abs(d), 1e-12);
}

TEST(KernelOperator, ConstantMuIsKernelWithoutSection) {
    Grid g(4);
    KernelBlocks k = apply_kernel_operator(Connection(g, Vec4::Zero()), Field<cd>(g, 0.0), Field<Vec2c>(g, Vec2c::Zero()),
                                           Field<cd>(g, cd(0.5, 0.5)));
    EXPECT_EQ(max_abs(k), 0.0);
}

TEST(KernelOperator, AssembledColumnsMatchApply) {
    Grid g(4);
    Connection a = random_connection(g, 23, 0.3);
    Field<cd> alpha = map(Sampler(g, 24).spinor2(1), [](const Vec2c& v) { return v(0); });
    Eigen::MatrixXd m = assemble_kernel_operator(a, alpha);
    const std::size_t N = g.size();
    ASSERT_EQ(m.rows(), Eigen::Index(16 * N));
    ASSERT_EQ(m.cols(), Eigen::Index(6 * N));
    std::mt19937_64 rng(25);
    std::normal_distribution<double> n;
    Eigen::VectorXd v(6 * N);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = n(rng);
    Field<Vec2c> chi(g, Vec2c::Zero());
    Field<cd> mu(g, 0.0);
    for (std::size_t x = 0; x < N; ++x) {
        chi[x] = Vec2c(cd(v(4 * x), v(4 * x + 1)), cd(v(4 * x + 2), v(4 * x + 3)));
        mu[x] = cd(v(4 * N + 2 * x), v(4 * N + 2 * x + 1));
    }
    KernelBlocks k = apply_kernel_operator(a, alpha, chi, mu);
    Eigen::VectorXd w = m * v;
    double e = 0;
    for (std::size_t x = 0; x < N; ++x) {
        for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(cd(w(4 * x + 2 * j), w(4 * x + 2 * j + 1)) - k.ra[x](j)));
        e = std::max(e, std::abs(cd(w(4 * N + 2 * x), w(4 * N + 2 * x + 1)) - k.rb[x]));
        e = std::max(e, std::abs(cd(w(6 * N + 2 * x), w(6 * N + 2 * x + 1)) - k.rc[x]));
        for (int j = 0; j < 4; ++j)
            e = std::max(e, std::abs(cd(w(8 * N + 8 * x + 2 * j), w(8 * N + 8 * x + 2 * j + 1)) - k.re[x][j]));
    }
    EXPECT_LT(e, 1e-10);
}

TEST(KernelOperator, MemoryBound) {
    Grid g(4);
    EXPECT_THROW(assemble_kernel_operator(Connection(g, Vec4::Zero()), Field<cd>(g, 1.0), 1000), std::length_error);
}

// At alpha = 1, A = 0: ra + 2 sqrt2 dbar^* rc = chi + 4 dbar^* dbar chi, so |chi| <= |ra + 2 sqrt2 dbar^* rc|.
TEST(KernelOperator, ChiBoundedByResidual) {
    Grid g(6);
    Connection a(g, Vec4::Zero());
    Sampler r(g, 26);
    Field<Vec2c> chi = r.spinor2(1);
    Field<cd> mu = map(r.spinor2(1), [](const Vec2c& v) { return v(0); });
    KernelBlocks k = apply_kernel_operator(a, Field<cd>(g, 1.0), chi, mu);
    DolbeaultField rc = zero_dolbeault(g);
    rc.a02 = k.rc;
    Field<Vec2c> lhs = k.ra + scaled(dolbeault_adjoint(a, rc, 2).a01, cd(2 * std::sqrt(2.0)));
    double nl = 0, nc = 0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        nl += lhs[x].squaredNorm();
        nc += chi[x].squaredNorm();
    }
    EXPECT_LE(nc, nl * (1 + 1e-12));
}

TEST(KernelDimension, ZeroAndIdentity) {
    KernelReport z = kernel_dimension(Eigen::MatrixXd::Zero(5, 3), 1e-8);
    EXPECT_EQ(z.dimension, 3);
    KernelReport id = kernel_dimension(Eigen::MatrixXd::Identity(6, 4), 1e-8);
    EXPECT_EQ(id.dimension, 0);
    EXPECT_FALSE(id.indeterminate);
    EXPECT_NEAR(id.gap, 1e8, 1);
    KernelReport wide = kernel_dimension(Eigen::MatrixXd::Identity(2, 5), 1e-8);
    EXPECT_EQ(wide.dimension, 3);
}

TEST(KernelDimension, GradedSpectrumIsIndeterminate) {
    Eigen::VectorXd d(4);
    d << 1, 1e-3, 1e-7, 1e-9;
    KernelReport r = kernel_dimension(Eigen::MatrixXd(d.asDiagonal()), 1e-8);
    EXPECT_EQ(r.dimension, 1);
    EXPECT_NEAR(r.gap, 100, 1e-6);
    EXPECT_TRUE(r.indeterminate);
}

TEST(KernelDimension, FlatTorusWithConstantSection) {
    Grid g(4);
    Eigen::MatrixXd m = assemble_kernel_operator(Connection(g, Vec4::Zero()), Field<cd>(g, 1.0));
    KernelReport r = kernel_dimension(m, 1e-8);
    EXPECT_EQ(r.dimension, 0);
    EXPECT_FALSE(r.indeterminate);
}

namespace {

// alpha = e^f and A = 2(d f - dbar f), so dbar_A alpha = 0 up to O(h^2) while F- does not vanish.
struct HolomorphicBackground {
    Connection a;
    Field<cd> alpha;
};

HolomorphicBackground holomorphic_background(const Grid& g) {
    auto f = [](const Vec4& x) { return 0.4 * std::sin(x(0)) * std::cos(x(2)) + 0.3 * std::cos(x(1) + x(3)); };
    auto df = [](const Vec4& x) {
        return Vec4(0.4 * std::cos(x(0)) * std::cos(x(2)), -0.3 * std::sin(x(1) + x(3)),
                    -0.4 * std::sin(x(0)) * std::sin(x(2)), -0.3 * std::sin(x(1) + x(3)));
    };
    HolomorphicBackground b;
    b.a = generate<Vec4>(g, [&](std::size_t i) {
        Vec4 d = df(g.point(i));
        return Vec4(-2 * d(1), 2 * d(0), -2 * d(3), 2 * d(2));
    });
    b.alpha = generate<cd>(g, [&](std::size_t i) { return cd(std::exp(f(g.point(i)))); });
    return b;
}

Vec6 omega_perp(const Vec6& w) {
    Vec6 o = kahler_form() / std::sqrt(2.0);
    return w - w.dot(o) * o;
}

struct WeightFit {
    double weight;  // least-squares weight of the F- term implied by sw_adjoint
    double defect;  // max omega-perp defect of the residual at the given weight, relative
};

// 4 sqrt2 times the hermitian traceless part of sw_adjoint's metric component against the residual.
WeightFit adjoint_weight(int n, double weight) {
    Grid g(n);
    HolomorphicBackground b = holomorphic_background(g);
    Sampler r(g, 5);
    Field<Vec2c> chi01 = r.spinor2(1);
    Field<double> lambda = r.scalar(1);
    DolbeaultField pd = zero_dolbeault(g), cf = zero_dolbeault(g);
    pd.a00 = b.alpha;
    cf.a01 = chi01;
    Field<Vec4c> p4 = from_dolbeault(pd), c4 = from_dolbeault(cf);
    Configuration c{b.a, map(p4, [](const Vec4c& v) { return Vec2c(v.head<2>()); }), identity_frame(g)};
    Field<Vec2c> chi = map(c4, [](const Vec4c& v) { return Vec2c(v.tail<2>()); });
    Field<Vec3> theta = map(lambda, [](double l) { return Vec3(std::sqrt(2.0) * l, 0, 0); });
    Field<Mat4> s = sw_adjoint(c, ObstructionCovector{chi, theta}).s;
    Field<Vec6> res0 = hermitian_perturbation_residual(b.a, b.alpha, chi01, lambda, 0.0);
    Field<Vec6> res1 = hermitian_perturbation_residual(b.a, b.alpha, chi01, lambda, 1.0);
    Field<Vec6> res = hermitian_perturbation_residual(b.a, b.alpha, chi01, lambda, weight);
    double pq = 0, qq = 0, d = 0, scale = 0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        Mat4 t = s[x] - 0.25 * s[x].trace() * Mat4::Identity();
        Vec6 lhs = 4 * std::sqrt(2.0) * herm_to_11form(hermitian_part(split_sym(t).herm));
        Vec6 q = res0[x] - res1[x];  // (F-)^* (x) lambda omega as a form
        Vec6 p = lhs - omega_perp(res0[x]);
        pq += p.dot(q);
        qq += q.dot(q);
        d = std::max(d, omega_perp(lhs - res[x]).norm());
        scale = std::max(scale, lhs.norm());
    }
    return {-pq / qq, d / scale};
}

}  // namespace

TEST(HermitianPerturbation, ZeroSources) {
    Grid g(4);
    Connection a = random_connection(g, 30);
    Field<Vec6> r = hermitian_perturbation_residual(a, Field<cd>(g, 1.0), Field<Vec2c>(g, Vec2c::Zero()),
                                                    Field<double>(g, 0.0));
    for (const auto& w : r.v) EXPECT_LT(w.norm(), 1e-15);
}

TEST(HermitianPerturbation, FlatConnectionIgnoresWeight) {
    Grid g(4);
    Connection a(g, Vec4(0.2, -0.1, 0.3, 0.4));
    Sampler r(g, 31);
    Field<cd> alpha = map(r.spinor2(1), [](const Vec2c& v) { return v(0); });
    Field<Vec2c> chi = r.spinor2(1);
    Field<double> lambda = r.scalar(1);
    Field<Vec6> r1 = hermitian_perturbation_residual(a, alpha, chi, lambda);
    Field<Vec6> r2 = hermitian_perturbation_residual(a, alpha, chi, lambda, 100.0);
    for (std::size_t x = 0; x < g.size(); ++x) EXPECT_LT((r1[x] - r2[x]).norm(), 1e-14);
}

TEST(HermitianPerturbation, FminusDualIsTracelessHermitian) {
    std::mt19937_64 rng(32);
    const Mat4& J = ComplexStructure::standard().J;
    for (int t = 0; t < 20; ++t) {
        Mat4 f = fminus_dual(random_vec3(rng), Vec3(1.3, 0, 0));
        EXPECT_NEAR(f.trace(), 0, 1e-14);
        EXPECT_LT((f * J - J * f).norm(), 1e-14);
        EXPECT_LT((f - f.transpose()).norm(), 1e-14);
    }
}

TEST(HermitianPerturbation, SourceTermMatchesLieDerivative) {
    Grid g(6);
    Connection a = random_connection(g, 33);
    Sampler r(g, 34);
    Field<cd> alpha = map(r.spinor2(1), [](const Vec2c& v) { return v(0); });
    Field<Vec2c> chi01 = r.spinor2(1);
    DolbeaultField pd = zero_dolbeault(g), cf = zero_dolbeault(g);
    pd.a00 = alpha;
    cf.a01 = chi01;
    Field<Vec4c> p4 = from_dolbeault(pd), c4 = from_dolbeault(cf);
    Field<Vec4c> v = pair_oneform(map(p4, [](const Vec4c& z) { return Vec2c(z.head<2>()); }),
                                  map(c4, [](const Vec4c& z) { return Vec2c(z.tail<2>()); }));
    Field<Mat4> L = lie_metric(flat_metric(g), map(v, [](const Vec4c& z) -> Vec4 { return z.real(); }));
    Field<Vec6> res = hermitian_perturbation_residual(a, alpha, chi01, Field<double>(g, 0.0));
    double e = 0;
    for (std::size_t x = 0; x < g.size(); ++x)
        e = std::max(e, (res[x] - herm_to_11form(hermitian_part(std::sqrt(2.0) * split_sym(L[x]).herm))).norm());
    EXPECT_LT(e, 1e-12);
}

// The adjoint fixes the F- weight at 8 sqrt2; the printed 4 sqrt2 leaves an O(1) defect.
TEST(HermitianPerturbation, AdjointImpliesWeight) {
    const double derived = 8 * std::sqrt(2.0);
    WeightFit w8 = adjoint_weight(8, derived), w16 = adjoint_weight(16, derived);
    EXPECT_NEAR(w16.weight, derived, 5e-3);
    EXPECT_LT(std::abs(w16.weight - derived), std::abs(w8.weight - derived));
    EXPECT_GT(w8.defect / w16.defect, 3.0);
    WeightFit printed = adjoint_weight(16, kHermitianPerturbationWeight);
    EXPECT_GT(printed.defect, 0.2);
}

TEST(KernelOperator, AlphaBlocksScaleLinearly) {
    Grid g(4);
    Connection a = random_connection(g, 35, 0.3);
    Sampler r(g, 36);
    Field<cd> alpha = map(r.spinor2(1), [](const Vec2c& v) { return v(0); });
    Field<Vec2c> chi = r.spinor2(1);
    Field<cd> mu = map(r.spinor2(1), [](const Vec2c& v) { return v(1); });
    KernelBlocks k0 = apply_kernel_operator(a, Field<cd>(g, 0.0), chi, mu);
    KernelBlocks k1 = apply_kernel_operator(a, alpha, chi, mu);
    KernelBlocks k2 = apply_kernel_operator(a, scaled(alpha, cd(2)), chi, mu);
    double e = 0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        e = std::max(e, (k2.ra[x] - k0.ra[x] - 2.0 * (k1.ra[x] - k0.ra[x])).norm());
        e = std::max(e, std::abs(k2.rb[x] - k1.rb[x]));
        e = std::max(e, std::abs(k2.rc[x] - k0.rc[x] - 2.0 * (k1.rc[x] - k0.rc[x])));
        for (int j = 0; j < 4; ++j) e = std::max(e, std::abs(k2.re[x][j] - 2.0 * k1.re[x][j]));
    }
    EXPECT_LT(e, 1e-12);
}

// Each step of the vanishing argument at alpha = 1, A = 0 bounded by the residual blocks.
TEST(KernelOperator, VanishingChainReplay) {
    Grid g(6);
    Connection a(g, Vec4::Zero());
    for (std::uint64_t seed : {40u, 41u, 42u}) {
        Sampler r(g, seed);
        r.max_mode = seed == 40u ? 1 : 2;
        Field<Vec2c> chi = r.spinor2(1);
        Field<cd> mu = map(r.spinor2(1), [](const Vec2c& v) { return v(0); });
        KernelBlocks k = apply_kernel_operator(a, Field<cd>(g, 1.0), chi, mu);
        DolbeaultField rc = zero_dolbeault(g), x = zero_dolbeault(g), rb = zero_dolbeault(g);
        rc.a02 = k.rc;
        x.a01 = chi;
        rb.a00 = k.rb;
        Field<Vec2c> lhs = k.ra + scaled(dolbeault_adjoint(a, rc, 2).a01, cd(2 * std::sqrt(2.0)));
        auto l2 = [&](const DolbeaultField& f) { return std::sqrt(l2_inner_forms(to_forms(f), to_forms(f)).real()); };
        DolbeaultField lf = zero_dolbeault(g), raf = zero_dolbeault(g), mf = zero_dolbeault(g);
        lf.a01 = lhs;
        raf.a01 = k.ra;
        mf.a02 = mu;
        const double L = l2(lf);
        // chi + 4 dbar^* dbar chi = ra + 2 sqrt2 dbar^* rc.
        EXPECT_LE(l2(x), L * (1 + 1e-12));
        EXPECT_LE(l2(dolbeault(a, x, 1)), 0.5 * L * (1 + 1e-12));
        EXPECT_LE(l2(dolbeault_adjoint(a, mf, 2)), (l2(raf) + L) / (2 * std::sqrt(2.0)) * (1 + 1e-12));
        // Laplacian of chi: (lhs - chi) / 4 + dbar rb, and the d-Laplacian agrees with it.
        FormField xf = to_forms(x);
        FormField lap = del_adjoint(del(xf));
        FormField lap2 = del(del_adjoint(xf));
        for (std::size_t p = 0; p < g.size(); ++p)
            for (int j = 0; j < 16; ++j) lap[p][j] += lap2[p][j];
        double nl = std::sqrt(l2_inner_forms(lap, lap).real());
        EXPECT_LE(nl, 0.5 * L + l2(dolbeault(a, rb, 0)) + 1e-12 * L);
    }
}

TEST(KernelOperator, ExportsAsTwoDimensionalField) {
    Grid g(4);
    Eigen::MatrixXd m = assemble_kernel_operator(Connection(g, Vec4::Zero()), Field<cd>(g, 1.0));
    std::stringstream ss;
    write_raw(ss, matrix_to_raw(m));
    RawField back = read_raw(ss);
    ASSERT_EQ(back.dims, (std::vector<int>{int(m.rows()), int(m.cols())}));
    EXPECT_EQ(back.components, 1);
    EXPECT_FALSE(back.complex);
    EXPECT_EQ(back.data[3 * m.cols() + 7], m(3, 7));
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    EXPECT_TRUE((Eigen::Map<const RowMajor>(back.data.data(), m.rows(), m.cols()) == m));
}
