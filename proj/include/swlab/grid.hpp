#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "swlab/parallel.hpp"
#include "swlab/types.hpp"

namespace swlab {

// Periodic lattice on [0, 2pi)^4. Point (i0,i1,i2,i3) has index ((i0 n + i1) n + i2) n + i3.
struct Grid {
    int n = 4;
    double h = 2.0 * std::numbers::pi / 4;

    Grid() = default;
    explicit Grid(int n_) : n(n_), h(2.0 * std::numbers::pi / n_) {
        if (n_ < 4 || n_ % 2) throw std::invalid_argument("grid size must be even and >= 4");
    }

    std::size_t size() const { return std::size_t(n) * n * n * n; }
    std::size_t stride(int axis) const {
        std::size_t s = 1;
        for (int a = 3; a > axis; --a) s *= n;
        return s;
    }
    int coord(std::size_t idx, int axis) const { return int(idx / stride(axis)) % n; }
    std::size_t shift(std::size_t idx, int axis, int d) const {
        int c = coord(idx, axis);
        int c2 = ((c + d) % n + n) % n;
        return idx + (std::ptrdiff_t(c2) - c) * std::ptrdiff_t(stride(axis));
    }
    Vec4 point(std::size_t idx) const {
        Vec4 x;
        for (int a = 0; a < 4; ++a) x(a) = coord(idx, a) * h;
        return x;
    }
    double cell_volume() const { return h * h * h * h; }
    bool operator==(const Grid& o) const { return n == o.n; }
};

template <class T>
struct Field {
    Grid grid;
    std::vector<T> v;

    Field() = default;
    Field(const Grid& g, const T& init) : grid(g), v(g.size(), init) {}

    std::size_t size() const { return v.size(); }
    T& operator[](std::size_t i) { return v[i]; }
    const T& operator[](std::size_t i) const { return v[i]; }
};

template <class T, class F>
Field<T> generate(const Grid& g, F f) {
    Field<T> out;
    out.grid = g;
    out.v.resize(g.size());
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out.v[i] = f(i);
    });
    return out;
}

template <class T, class F>
auto map(const Field<T>& a, F f) {
    using R = std::decay_t<decltype(f(a.v[0]))>;
    return generate<R>(a.grid, [&](std::size_t i) { return f(a.v[i]); });
}

template <class T>
Field<T> operator+(const Field<T>& a, const Field<T>& b) {
    return generate<T>(a.grid, [&](std::size_t i) -> T { return a.v[i] + b.v[i]; });
}
template <class T>
Field<T> operator-(const Field<T>& a, const Field<T>& b) {
    return generate<T>(a.grid, [&](std::size_t i) -> T { return a.v[i] - b.v[i]; });
}
template <class T, class S>
Field<T> scaled(const Field<T>& a, S c) {
    return generate<T>(a.grid, [&](std::size_t i) -> T { return c * a.v[i]; });
}

// Central difference along axis mu in 0..3.
template <class T>
Field<T> diff(const Field<T>& f, int mu) {
    const Grid& g = f.grid;
    const double inv = 1.0 / (2.0 * g.h);
    return generate<T>(g, [&](std::size_t i) -> T {
        return (f.v[g.shift(i, mu, 1)] - f.v[g.shift(i, mu, -1)]) * inv;
    });
}

// Same, axis in 1..4.
template <class T>
Field<T> partial_derivative(const Field<T>& f, int axis) {
    if (axis < 1 || axis > 4) throw std::out_of_range("axis must be in 1..4");
    return diff(f, axis - 1);
}

// Deterministic grid sum of a per-point real quantity.
template <class F>
double grid_sum(const Grid& g, F f) {
    std::vector<double> terms(g.size());
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) terms[i] = f(i);
    });
    return pairwise_sum(terms);
}

}  // namespace swlab
