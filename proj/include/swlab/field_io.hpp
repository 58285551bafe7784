#pragma once

#include <iosfwd>
#include <string>
#include <type_traits>
#include <vector>

#include "swlab/grid.hpp"

namespace swlab {

// Container: one JSON header line {"dims":[...],"components":k,"dtype":"f64"|"c128"}
// followed by little-endian values in row-major lattice order, components fastest.
struct RawField {
    std::vector<int> dims;
    int components = 1;
    bool complex = false;
    std::vector<double> data;  // complex values stored as (re, im) pairs
};

void write_raw(std::ostream& os, const RawField& f);
RawField read_raw(std::istream& is);
void write_raw_file(const std::string& path, const RawField& f);
RawField read_raw_file(const std::string& path);

RawField matrix_to_raw(const Eigen::MatrixXd& m);

namespace detail {
template <class T>
struct Layout {
    using Scalar = typename T::Scalar;
    static constexpr int components = T::SizeAtCompileTime;
    static const Scalar* data(const T& v) { return v.data(); }
    static Scalar* data(T& v) { return v.data(); }
};
template <>
struct Layout<double> {
    using Scalar = double;
    static constexpr int components = 1;
    static const double* data(const double& v) { return &v; }
    static double* data(double& v) { return &v; }
};
}  // namespace detail

// Matrix-valued points are written in Eigen storage (column-major) order.
template <class T>
RawField to_raw(const Field<T>& f) {
    using L = detail::Layout<T>;
    constexpr bool cplx = !std::is_same_v<typename L::Scalar, double>;
    RawField r;
    r.dims = {f.grid.n, f.grid.n, f.grid.n, f.grid.n};
    r.components = L::components;
    r.complex = cplx;
    const int per = L::components * (cplx ? 2 : 1);
    r.data.resize(f.size() * per);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double* p = reinterpret_cast<const double*>(L::data(f[i]));
        std::copy(p, p + per, r.data.begin() + i * per);
    }
    return r;
}

template <class T>
Field<T> from_raw(const RawField& r) {
    using L = detail::Layout<T>;
    constexpr bool cplx = !std::is_same_v<typename L::Scalar, double>;
    if (r.dims.size() != 4 || r.components != L::components || r.complex != cplx)
        throw std::invalid_argument("field container shape does not match requested type");
    for (int d : r.dims)
        if (d != r.dims[0]) throw std::invalid_argument("field container is not a cubic lattice");
    Field<T> f;
    f.grid = Grid(r.dims[0]);
    f.v.resize(f.grid.size());
    const int per = L::components * (cplx ? 2 : 1);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double* p = reinterpret_cast<double*>(L::data(f.v[i]));
        std::copy(r.data.begin() + i * per, r.data.begin() + (i + 1) * per, p);
    }
    return f;
}

}  // namespace swlab
