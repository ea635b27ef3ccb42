#pragma once

// Quantum obesity Omega = |det R|^(1/4) and its closed forms.

#include "qobesity/qstate.hpp"

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace qobesity {

/// Below this |det R| the fourth root is reported as exactly zero.
inline constexpr double kDetFloor = 1e-48;

inline double obesity_from_determinant(double det) {
    const double a = std::abs(det);
    return a < kDetFloor ? 0.0 : std::pow(a, 0.25);
}

inline double obesity(const CorrelationMatrix& r) { return obesity_from_determinant(r.determinant()); }

inline double obesity(const DensityMatrix2Q& rho) { return obesity(correlation_matrix(rho)); }

/// Entries forced to zero in the rho_(k) family: the delta_k3 slots vanish
/// unless k = 3 and the delta_k2 slots vanish unless k = 2.
inline std::vector<std::pair<int, int>> x_family_zero_entries(int k) {
    if (k < 1 || k > 3)
        throw Error(ErrorCode::PatternMismatch, "family index must be 1, 2 or 3");
    std::vector<std::pair<int, int>> zeros;
    if (k != 3)
        zeros.insert(zeros.end(), {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    if (k != 2)
        zeros.insert(zeros.end(), {{0, 2}, {2, 0}, {1, 3}, {3, 1}});
    return zeros;
}

inline double obesity_x_family(const DensityMatrix2Q& rho, int k, double tol = 1e-10) {
    const auto& m = rho.matrix();
    std::ostringstream bad;
    for (const auto& [i, j] : x_family_zero_entries(k))
        if (std::abs(m(i, j)) > tol)
            bad << " rho" << i + 1 << j + 1 << "=" << m(i, j);
    if (!bad.str().empty())
        throw Error(ErrorCode::PatternMismatch, "state is not in family " + std::to_string(k) + ":" + bad.str());
    const double coherence = std::norm(m(1, 2)) - std::norm(m(0, 3));
    const double population = (m(1, 1) * m(2, 2) - m(0, 0) * m(3, 3)).real();
    const double prod = std::abs(coherence * population);
    // 16 * prod is |det R|; keep the same zero floor as obesity().
    return 16.0 * prod < kDetFloor ? 0.0 : 2.0 * std::pow(prod, 0.25);
}

struct BellDiagonalParams {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    /// Eigenvalues of (1/4)(1 + sum c_j sigma_j (x) sigma_j).
    std::array<double, 4> eigenvalues() const {
        return {(1 + c1 - c2 + c3) / 4, (1 - c1 + c2 + c3) / 4, (1 + c1 + c2 - c3) / 4,
                (1 - c1 - c2 - c3) / 4};
    }

    bool physical(double tol = 1e-12) const {
        for (double e : eigenvalues())
            if (e < -tol)
                return false;
        return true;
    }
};

inline CorrelationMatrix bell_diagonal_correlation(const BellDiagonalParams& p) {
    Mat4 r = Mat4::Zero();
    r(0, 0) = 1.0;
    r(1, 1) = p.c1;
    r(2, 2) = p.c2;
    r(3, 3) = p.c3;
    return CorrelationMatrix(r);
}

inline DensityMatrix2Q bell_diagonal_state(const BellDiagonalParams& p) {
    if (!p.physical())
        throw Error(ErrorCode::UnphysicalParams, "Bell-diagonal parameters give a negative eigenvalue");
    return DensityMatrix2Q::from_matrix(density_from_correlation(bell_diagonal_correlation(p)), 1e-10);
}

inline double obesity_bell_diagonal(const BellDiagonalParams& p) {
    if (!p.physical())
        throw Error(ErrorCode::UnphysicalParams, "Bell-diagonal parameters give a negative eigenvalue");
    return obesity_from_determinant(p.c1 * p.c2 * p.c3);
}

} // namespace qobesity
