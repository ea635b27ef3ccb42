#pragma once

#include "qobesity/qobesity.hpp"

#include <gtest/gtest.h>

namespace qobesity::testing {

inline Eigen::Vector4cd ket(double uu, double ud, double du, double dd) {
    Eigen::Vector4cd v;
    v << uu, ud, du, dd;
    return v;
}

inline DensityMatrix2Q phi_plus() { return DensityMatrix2Q::pure(ket(1, 0, 0, 1) / std::sqrt(2.0)); }
inline DensityMatrix2Q up_up() { return DensityMatrix2Q::pure(ket(1, 0, 0, 0)); }

/// p |Psi-><Psi-| + (1 - p) 1/4, correlations c = (-p, -p, -p).
inline DensityMatrix2Q werner(double p) {
    Mat4c m = Mat4c::Zero();
    m(0, 0) = m(3, 3) = (1.0 - p) / 4.0;
    m(1, 1) = m(2, 2) = (1.0 + p) / 4.0;
    m(1, 2) = m(2, 1) = -p / 2.0;
    return DensityMatrix2Q::from_matrix(m);
}

/// Bloch vector of site A by explicit partial trace over B.
inline Vec3 bloch_a_by_trace(const Mat4c& rho) {
    Mat2c ra = Mat2c::Zero();
    for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int b = 0; b < 2; ++b)
                ra(a1, a2) += rho(2 * a1 + b, 2 * a2 + b);
    Vec3 v;
    for (int k = 1; k <= 3; ++k)
        v[k - 1] = (ra * pauli()[k]).trace().real();
    return v;
}

inline Mat2c diag2(cplx x, cplx y) {
    Mat2c m = Mat2c::Zero();
    m(0, 0) = x;
    m(1, 1) = y;
    return m;
}

template <typename F>
ErrorCode error_code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::MalformedInput;
}

} // namespace qobesity::testing
