#pragma once

#include <complex>

#include <Eigen/Dense>

namespace kreinphoton {

using Complex = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec4c = Eigen::Vector4cd;
using Mat2 = Eigen::Matrix2d;
using Mat2c = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;

}  // namespace kreinphoton
