#pragma once

// Local filtering operations rho -> (O_A (x) O_B) rho (O_A (x) O_B)^dagger / tr.
//
// Under a filter the correlation matrix transforms as
//   R^F = |det O_A| |det O_B| L_A R L_B^T / tr,
// where L = Lambda (O (x) O*) Lambda^dagger / |det O| is a proper Lorentz
// transformation with det L = 1. Hence
//   Omega(rho_F) * tr = Omega(rho) * |det O_A| |det O_B|.
// The determinant-free statement Omega(rho_F) = Omega(rho) / tr only holds
// for |det O_A| = |det O_B| = 1; both forms are provided.

#include "qobesity/obesity.hpp"

#include <algorithm>

namespace qobesity {

inline constexpr double kSingularTol = 1e-12;

struct LocalFilter {
    Mat2c A = Mat2c::Identity();
    Mat2c B = Mat2c::Identity();

    static LocalFilter identity() { return {}; }

    double det_a() const { return std::abs(A.determinant()); }
    double det_b() const { return std::abs(B.determinant()); }

    bool invertible() const { return det_a() > kSingularTol && det_b() > kSingularTol; }

    /// Largest singular value of both operators at most 1.
    bool sub_normalized(double tol = 1e-12) const {
        Eigen::JacobiSVD<Mat2c> sa(A), sb(B);
        return sa.singularValues()[0] <= 1.0 + tol && sb.singularValues()[0] <= 1.0 + tol;
    }

    Mat4c kron() const { return qobesity::kron(A, B); }
};

namespace detail {

inline void require_invertible(const LocalFilter& f) {
    if (!f.invertible())
        throw Error(ErrorCode::SingularOperator,
                    "filter operators must be invertible (|det O_A|=" + std::to_string(f.det_a()) +
                        ", |det O_B|=" + std::to_string(f.det_b()) + ")");
}

inline const Mat4c& lambda_matrix() {
    static const Mat4c lam = [] {
        const cplx i(0.0, 1.0);
        Mat4c m;
        m << 1, 0, 0, 1,
             0, 1, 1, 0,
             0, i, -i, 0,
             1, 0, 0, -1;
        return Mat4c(m / std::sqrt(2.0));
    }();
    return lam;
}

/// Pauli-coefficient action of X -> O X O^dagger (unnormalized lift).
inline Mat4 pauli_action(const Mat2c& o) {
    const Mat4c m = lambda_matrix() * qobesity::kron(o, o.conjugate()) * lambda_matrix().adjoint();
    return m.real();
}

} // namespace detail

struct LorentzLift {
    Mat4 L = Mat4::Identity();

    double determinant() const { return lu_determinant(L); }

    /// max |L^T eta L - eta| with eta = diag(1, -1, -1, -1).
    double minkowski_defect() const {
        const Mat4 eta = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
        return (L.transpose() * eta * L - eta).cwiseAbs().maxCoeff();
    }
};

inline LorentzLift lorentz_lift(const Mat2c& o) {
    const double d = std::abs(o.determinant());
    if (d <= kSingularTol)
        throw Error(ErrorCode::SingularOperator, "cannot lift a singular operator");
    const Mat4c m = detail::lambda_matrix() * kron(o, o.conjugate()) * detail::lambda_matrix().adjoint();
    const double imag = m.imag().cwiseAbs().maxCoeff();
    if (imag > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw Error(ErrorCode::SingularOperator, "lift is not real (imaginary part " + std::to_string(imag) + ")");
    return LorentzLift{m.real() / d};
}

struct FilteredState {
    DensityMatrix2Q state;
    double trace_norm = 1.0;
};

inline double filter_trace_norm(const DensityMatrix2Q& rho, const LocalFilter& f) {
    const Mat4c o = f.kron();
    return (o * rho.matrix() * o.adjoint()).trace().real();
}

inline FilteredState apply_filter(const DensityMatrix2Q& rho, const LocalFilter& f) {
    detail::require_invertible(f);
    const Mat4c o = f.kron();
    Mat4c out = o * rho.matrix() * o.adjoint();
    const double tn = out.trace().real();
    if (tn <= kSingularTol)
        throw Error(ErrorCode::FilterAnnihilatesState, "trace after filtering is " + std::to_string(tn));
    out /= tn;
    out = 0.5 * (out + out.adjoint()).eval();
    return {DensityMatrix2Q::from_matrix(out, 1e-9), tn};
}

/// F = 1 / tr[(O_A (x) O_B) rho (O_A (x) O_B)^dagger].
inline double filtering_function(const DensityMatrix2Q& rho, const LocalFilter& f) {
    detail::require_invertible(f);
    const double tn = filter_trace_norm(rho, f);
    if (tn <= kSingularTol)
        throw Error(ErrorCode::FilterAnnihilatesState, "trace after filtering is " + std::to_string(tn));
    return 1.0 / tn;
}

/// Omega(rho) * F, valid for unit-determinant filters only.
inline double filtered_obesity_theorem(const DensityMatrix2Q& rho, const LocalFilter& f) {
    detail::require_invertible(f);
    if (std::abs(f.det_a() - 1.0) > 1e-9 || std::abs(f.det_b() - 1.0) > 1e-9)
        throw Error(ErrorCode::PreconditionViolation,
                    "determinant-free scaling needs |det O| = 1; use filtered_obesity_general");
    return obesity(rho) * filtering_function(rho, f);
}

/// Omega(rho) * |det O_A| |det O_B| * F, valid for every invertible filter.
inline double filtered_obesity_general(const DensityMatrix2Q& rho, const LocalFilter& f) {
    return obesity(rho) * f.det_a() * f.det_b() * filtering_function(rho, f);
}

/// Correlation matrix of the filtered state, computed on R alone.
inline CorrelationMatrix filtered_correlation_matrix(const CorrelationMatrix& r, const LocalFilter& f) {
    detail::require_invertible(f);
    const Mat4 la = lorentz_lift(f.A).L;
    const Mat4 lb = lorentz_lift(f.B).L;
    Mat4 out = f.det_a() * f.det_b() * la * r.matrix() * lb.transpose();
    // out(0,0) is the trace of the unnormalized filtered state.
    const double tn = out(0, 0);
    if (tn <= kSingularTol)
        throw Error(ErrorCode::FilterAnnihilatesState, "trace after filtering is " + std::to_string(tn));
    out /= tn;
    out(0, 0) = 1.0;
    return CorrelationMatrix(out);
}

/// diag(eta, 1) on both sites with eta = (min(A+,A-)/max(A+,A-))^(1/4), the
/// shrinking entry acting on the more populated level. Equalizes the two
/// diagonal populations of an X-form pair state, removing both local Bloch
/// vectors.
inline LocalFilter ising_optimal_filter(double a_plus, double a_minus) {
    if (!(a_plus > 1e-10) || !(a_minus > 1e-10))
        throw Error(ErrorCode::FilterUndefined,
                    "optimal filter needs A+ > 0 and A- > 0 (A+=" + std::to_string(a_plus) +
                        ", A-=" + std::to_string(a_minus) + ")");
    const double eta = std::pow(std::min(a_plus, a_minus) / std::max(a_plus, a_minus), 0.25);
    Mat2c o = Mat2c::Identity();
    if (a_plus >= a_minus)
        o(0, 0) = eta;
    else
        o(1, 1) = eta;
    return {o, o};
}

} // namespace qobesity
