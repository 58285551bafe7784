#include "swlab/sampling.hpp"

namespace swlab {

Field<double> Sampler::scalar(double amp) { return random_trig(grid, rng, max_mode, terms, amp); }

Field<Vec4> Sampler::oneform(double amp) {
    Field<Vec4> f(grid, Vec4::Zero());
    for (int c = 0; c < 4; ++c) {
        auto t = scalar(amp);
        for (std::size_t x = 0; x < grid.size(); ++x) f[x](c) = t[x];
    }
    return f;
}

Field<Vec3> Sampler::triple(double amp) {
    Field<Vec3> f(grid, Vec3::Zero());
    for (int c = 0; c < 3; ++c) {
        auto t = scalar(amp);
        for (std::size_t x = 0; x < grid.size(); ++x) f[x](c) = t[x];
    }
    return f;
}

Field<Vec2c> Sampler::spinor2(double amp) {
    Field<Vec2c> f(grid, Vec2c::Zero());
    for (int c = 0; c < 2; ++c) {
        auto re = scalar(amp), im = scalar(amp);
        for (std::size_t x = 0; x < grid.size(); ++x) f[x](c) = cd(re[x], im[x]);
    }
    return f;
}

Field<Vec4c> Sampler::spinor4(double amp) {
    Field<Vec4c> f(grid, Vec4c::Zero());
    for (int c = 0; c < 4; ++c) {
        auto re = scalar(amp), im = scalar(amp);
        for (std::size_t x = 0; x < grid.size(); ++x) f[x](c) = cd(re[x], im[x]);
    }
    return f;
}

MetricField Sampler::metric(double amp) {
    Field<Mat4> A(grid, Mat4::Identity());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            auto t = scalar(amp);
            for (std::size_t x = 0; x < grid.size(); ++x) A[x](i, j) += t[x];
        }
    return map(A, [](const Mat4& a) -> Mat4 { return a.transpose() * a; });
}

Field<Mat4> Sampler::sym_endo(const MetricField& g, double amp) {
    Field<Mat4> B(grid, Mat4::Zero());
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            auto t = scalar(amp);
            for (std::size_t x = 0; x < grid.size(); ++x) B[x](i, j) = B[x](j, i) = t[x];
        }
    return generate<Mat4>(grid, [&](std::size_t x) -> Mat4 { return g[x].inverse() * B[x]; });
}

namespace {
double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }
}  // namespace

Mat4 random_symmetric(std::mt19937_64& rng) {
    Mat4 s;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) s(i, j) = s(j, i) = unit(rng);
    return s;
}

Mat4 random_traceless_symmetric(std::mt19937_64& rng) {
    Mat4 s = random_symmetric(rng);
    return s - (s.trace() / 4.0) * Mat4::Identity();
}

Mat4 random_spd(std::mt19937_64& rng, double spread) {
    Mat4 a = Mat4::Identity();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) += spread * unit(rng);
    return a.transpose() * a;
}

Vec2c random_vec2c(std::mt19937_64& rng) {
    Vec2c v;
    for (int i = 0; i < 2; ++i) v(i) = cd(unit(rng), unit(rng));
    return v;
}

Vec3 random_vec3(std::mt19937_64& rng) { return Vec3(unit(rng), unit(rng), unit(rng)); }

}  // namespace swlab
