#pragma once

// Fixed-size matrix aliases and the Pauli basis shared by every module.
//
// Basis convention: |up> = (1,0), sigma_z|up> = +|up>. Two-qubit states use
// the ordering |up up>, |up down>, |down up>, |down down> with party A as the
// left tensor factor.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>

namespace qobesity {

using cplx = std::complex<double>;

using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Mat4 = Eigen::Matrix4d;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

/// sigma_0 = identity, sigma_1..3 = x, y, z.
inline const std::array<Mat2c, 4>& pauli() {
    static const std::array<Mat2c, 4> basis = [] {
        const cplx i(0.0, 1.0);
        std::array<Mat2c, 4> s;
        s[0] << 1, 0, 0, 1;
        s[1] << 0, 1, 1, 0;
        s[2] << 0, -i, i, 0;
        s[3] << 1, 0, 0, -1;
        return s;
    }();
    return basis;
}

inline Mat4c kron(const Mat2c& a, const Mat2c& b) {
    Mat4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

/// sigma_i (x) sigma_j, cached.
inline const Mat4c& pauli_pair(int i, int j) {
    static const std::array<Mat4c, 16> table = [] {
        std::array<Mat4c, 16> t;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                t[4 * a + b] = kron(pauli()[a], pauli()[b]);
        return t;
    }();
    return table[4 * i + j];
}

/// Determinant through LU with partial pivoting.
template <typename Derived>
typename Derived::Scalar lu_determinant(const Eigen::MatrixBase<Derived>& m) {
    return m.partialPivLu().determinant();
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace qobesity
