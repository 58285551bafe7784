#pragma once

#include <Eigen/Dense>
#include <complex>

namespace swlab {

using cd = std::complex<double>;
inline constexpr cd I{0.0, 1.0};

using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

}  // namespace swlab
