#pragma once

// Random states and operators for property tests and the acceptance suite.

#include "qobesity/obesity.hpp"
#include "qobesity/qstate.hpp"

#include <random>

namespace qobesity::random {

using Rng = std::mt19937_64;

template <int N>
Eigen::Matrix<cplx, N, N> ginibre(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Matrix<cplx, N, N> m;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            m(i, j) = cplx(g(rng), g(rng));
    return m;
}

/// Normalized G G^dagger with G complex Gaussian; full rank almost surely.
inline DensityMatrix2Q ginibre_state(Rng& rng) {
    const Mat4c g = ginibre<4>(rng);
    Mat4c rho = g * g.adjoint();
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix2Q::unchecked(rho);
}

/// Haar-distributed 2x2 unitary (QR of a Ginibre matrix with phase fix).
inline Mat2c haar_unitary(Rng& rng) {
    const Mat2c g = ginibre<2>(rng);
    Eigen::HouseholderQR<Mat2c> qr(g);
    Mat2c q = qr.householderQ();
    const Mat2c r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k)
        q.col(k) *= r(k, k) / std::abs(r(k, k));
    return q;
}

/// Random element of SL(2, C).
inline Mat2c special_linear(Rng& rng) {
    Mat2c m = ginibre<2>(rng);
    return m / std::sqrt(m.determinant());
}

/// Random invertible 2x2 with |det| spread over a few decades.
inline Mat2c invertible(Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat2c m = special_linear(rng);
    return m * std::pow(10.0, u(rng));
}

/// Uniform mixture weights over the four Bell states mapped to (c1, c2, c3).
inline BellDiagonalParams bell_diagonal_params(Rng& rng) {
    std::exponential_distribution<double> e(1.0);
    double p[4];
    double sum = 0.0;
    for (double& x : p) {
        x = e(rng);
        sum += x;
    }
    // Phi+, Phi-, Psi+, Psi- correlation signatures.
    static constexpr double sig[4][3] = {{1, -1, 1}, {-1, 1, 1}, {1, 1, -1}, {-1, -1, -1}};
    BellDiagonalParams c{0.0, 0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
        c.c1 += p[k] / sum * sig[k][0];
        c.c2 += p[k] / sum * sig[k][1];
        c.c3 += p[k] / sum * sig[k][2];
    }
    return c;
}

/// Random state with the zero pattern of the rho_(k) family (k = 1, 2, 3):
/// masked G G^dagger shifted to positivity.
inline DensityMatrix2Q x_family_state(Rng& rng, int k) {
    const Mat4c g = ginibre<4>(rng);
    Mat4c m = g * g.adjoint();
    for (const auto& [i, j] : x_family_zero_entries(k))
        m(i, j) = 0.0;
    Eigen::SelfAdjointEigenSolver<Mat4c> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    std::uniform_real_distribution<double> u(0.0, 0.5);
    if (lo < 0.0)
        m += (-lo * (1.0 + u(rng))) * Mat4c::Identity();
    m /= m.trace();
    m = 0.5 * (m + m.adjoint()).eval();
    return DensityMatrix2Q::unchecked(m);
}

inline Eigen::Vector3d unit_vector(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Vector3d n(g(rng), g(rng), g(rng));
    return n / n.norm();
}

} // namespace qobesity::random
