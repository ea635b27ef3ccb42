#pragma once

// Quantum steering ellipsoids: the set of Bloch vectors one party can be
// steered to by projective measurements on the other.

#include "qobesity/obesity.hpp"

#include <Eigen/Eigenvalues>

namespace qobesity {

enum class Party { A, B };

inline constexpr double kMarginalTol = 1e-9;

struct SteeringEllipsoid {
    Vec3 center = Vec3::Zero();
    Mat3 Q = Mat3::Zero();
    Vec3 semiaxes = Vec3::Zero();     // ascending, sqrt of eigenvalues of Q
    Mat3 orientation = Mat3::Identity(); // columns are the principal axes
    double gamma = 1.0;

    double volume() const { return 4.0 * kPi / 3.0 * semiaxes.prod(); }
};

namespace detail {

inline double lorentz_factor(const Vec3& marginal) {
    const double n2 = marginal.squaredNorm();
    if (std::sqrt(n2) >= 1.0 - kMarginalTol)
        throw Error(ErrorCode::SingularMarginal,
                    "marginal Bloch vector has length " + std::to_string(std::sqrt(n2)) +
                        "; the measured party is pure and the ellipsoid degenerates");
    return 1.0 / (1.0 - n2);
}

} // namespace detail

/// gamma_b = 1 / (1 - |b|^2).
inline double gamma_b(const CorrelationMatrix& r) { return detail::lorentz_factor(r.b()); }
inline double gamma_b(const DensityMatrix2Q& rho) { return gamma_b(correlation_matrix(rho)); }

/// Ellipsoid of the steered party. For Party::A measurements act on B:
///   c = gamma (a - T b),  Q = gamma (T - a b^T)(1 + gamma b b^T)(T^T - b a^T).
/// Party::B swaps the roles of (a, b) and (T, T^T).
inline SteeringEllipsoid steering_ellipsoid(const CorrelationMatrix& r, Party steered = Party::A) {
    Vec3 a = r.a();
    Vec3 b = r.b();
    Mat3 t = r.T();
    if (steered == Party::B) {
        std::swap(a, b);
        t.transposeInPlace();
    }
    SteeringEllipsoid e;
    e.gamma = detail::lorentz_factor(b);
    const double g = e.gamma;
    e.center = g * (a - t * b);
    const Mat3 left = t - a * b.transpose();
    Mat3 q = g * left * (Mat3::Identity() + g * b * b.transpose()) * left.transpose();
    q = 0.5 * (q + q.transpose()).eval();
    e.Q = q;

    Eigen::SelfAdjointEigenSolver<Mat3> es(q);
    Vec3 ev = es.eigenvalues();
    for (int k = 0; k < 3; ++k)
        if (ev[k] < 0.0 && ev[k] > -1e-10)
            ev[k] = 0.0;
    e.semiaxes = ev.cwiseMax(0.0).cwiseSqrt();
    e.orientation = es.eigenvectors();
    return e;
}

inline SteeringEllipsoid steering_ellipsoid(const DensityMatrix2Q& rho, Party steered = Party::A) {
    return steering_ellipsoid(correlation_matrix(rho), steered);
}

/// Volume of A's steering ellipsoid, (4 pi / 3) gamma_b^2 Omega^4. This is
/// the product of the semiaxes: det Q = gamma^4 det(T - a b^T)^2 and
/// det(T - a b^T) = det R.
inline double ellipsoid_volume(const CorrelationMatrix& r) {
    const double g = gamma_b(r);
    const double om = obesity(r);
    return 4.0 * kPi / 3.0 * g * g * std::pow(om, 4);
}

inline double ellipsoid_volume(const DensityMatrix2Q& rho) { return ellipsoid_volume(correlation_matrix(rho)); }

/// The (4 pi / 3) gamma_b^4 Omega^4 form. It only agrees with the
/// geometric volume when b = 0.
inline double ellipsoid_volume_gamma4(const DensityMatrix2Q& rho) {
    const auto r = correlation_matrix(rho);
    const double g = gamma_b(r);
    return 4.0 * kPi / 3.0 * std::pow(g, 4) * std::pow(obesity(r), 4);
}

struct SteeredOutcome {
    Vec3 bloch = Vec3::Zero();
    double probability = 0.0;
};

/// Outcome +1 of measuring sigma.n on B: A is left with (a + T n)/(1 + b.n).
inline SteeredOutcome steered_bloch_vector(const CorrelationMatrix& r, const Vec3& n) {
    const Vec3 nn = n / n.norm();
    SteeredOutcome out;
    const double weight = 1.0 + r.b().dot(nn);
    out.probability = 0.5 * weight;
    if (out.probability <= 1e-12)
        throw Error(ErrorCode::ZeroProbability, "measurement outcome has zero probability");
    out.bloch = (r.a() + r.T() * nn) / weight;
    return out;
}

inline SteeredOutcome steered_bloch_vector(const DensityMatrix2Q& rho, const Vec3& n) {
    return steered_bloch_vector(correlation_matrix(rho), n);
}

} // namespace qobesity
