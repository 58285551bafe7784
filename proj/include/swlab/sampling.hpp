#pragma once

#include <random>

#include "swlab/sw.hpp"

namespace swlab {

// Band-limited random fields. A Sampler seeded identically produces the same continuum
// fields on every grid, which makes grid-refinement studies meaningful.
struct Sampler {
    Grid grid;
    std::mt19937_64 rng;
    int max_mode = 1;
    int terms = 3;

    Sampler(const Grid& g, std::uint64_t seed) : grid(g), rng(seed) {}

    Field<double> scalar(double amp);
    Field<Vec4> oneform(double amp);
    Field<Vec3> triple(double amp);
    Field<Vec2c> spinor2(double amp);
    Field<Vec4c> spinor4(double amp);
    // A^T A with A = Id + amp * random.
    MetricField metric(double amp);
    // g^-1 B with B symmetric: symmetric with respect to g.
    Field<Mat4> sym_endo(const MetricField& g, double amp);
};

// Pointwise random samples.
Mat4 random_spd(std::mt19937_64& rng, double spread = 0.3);
Mat4 random_symmetric(std::mt19937_64& rng);
Mat4 random_traceless_symmetric(std::mt19937_64& rng);
Vec2c random_vec2c(std::mt19937_64& rng);
Vec3 random_vec3(std::mt19937_64& rng);

}  // namespace swlab
