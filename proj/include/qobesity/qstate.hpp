#pragma once

// Two-qubit states: validation, Pauli correlation matrix, partial traces and
// concurrence.

#include "qobesity/errors.hpp"
#include "qobesity/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

namespace qobesity {

inline constexpr double kStateTol = 1e-10;

struct ValidationReport {
    double hermiticity_error = 0.0;
    cplx trace{0.0, 0.0};
    Eigen::VectorXd eigenvalues;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }

    std::string summary() const {
        std::ostringstream os;
        for (std::size_t k = 0; k < violations.size(); ++k)
            os << (k ? "; " : "") << violations[k];
        if (eigenvalues.size() > 0) {
            os << " [eigenvalues:";
            for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
                os << ' ' << eigenvalues[k];
            os << ']';
        }
        return os.str();
    }
};

/// Checks hermiticity, unit trace and positivity of any square matrix.
inline ValidationReport validate_matrix(const Eigen::MatrixXcd& m, double tol = kStateTol) {
    ValidationReport r;
    if (m.rows() != m.cols() || m.rows() == 0) {
        r.violations.push_back("matrix is not square");
        return r;
    }
    r.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
    r.trace = m.trace();
    if (r.hermiticity_error > tol)
        r.violations.push_back("not Hermitian (max deviation " + std::to_string(r.hermiticity_error) + ")");
    if (std::abs(r.trace - cplx(1.0, 0.0)) > tol)
        r.violations.push_back("trace " + std::to_string(r.trace.real()) + (r.trace.imag() != 0.0 ? "+i" + std::to_string(r.trace.imag()) : "") + " != 1");
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    r.eigenvalues = es.eigenvalues();
    if (r.eigenvalues.minCoeff() < -tol)
        r.violations.push_back("negative eigenvalue " + std::to_string(r.eigenvalues.minCoeff()));
    return r;
}

/// Two-qubit density matrix. Construction through `from_matrix` enforces the
/// physical invariants, so every function taking a DensityMatrix2Q may assume
/// a valid state.
class DensityMatrix2Q {
public:
    DensityMatrix2Q() : rho_(Mat4c::Identity() / 4.0) {}

    static DensityMatrix2Q from_matrix(const Mat4c& m, double tol = kStateTol) {
        const auto report = validate_matrix(m, tol);
        if (!report.ok())
            throw Error(ErrorCode::InvalidState, report.summary());
        return DensityMatrix2Q(m);
    }

    /// Skips validation; for matrices valid by construction.
    static DensityMatrix2Q unchecked(const Mat4c& m) { return DensityMatrix2Q(m); }

    static DensityMatrix2Q maximally_mixed() { return DensityMatrix2Q(); }

    static DensityMatrix2Q pure(const Eigen::Vector4cd& psi) {
        const Eigen::Vector4cd v = psi / psi.norm();
        return DensityMatrix2Q(v * v.adjoint());
    }

    const Mat4c& matrix() const { return rho_; }
    cplx operator()(int i, int j) const { return rho_(i, j); }

private:
    explicit DensityMatrix2Q(const Mat4c& m) : rho_(m) {}
    Mat4c rho_;
};

inline ValidationReport validate_state(const DensityMatrix2Q& rho, double tol = kStateTol) {
    return validate_matrix(rho.matrix(), tol);
}

/// R_ij = <sigma_i (x) sigma_j>. Column 0 carries the Bloch vector of A,
/// row 0 the Bloch vector of B, and T_ij = R_{i+1, j+1}.
class CorrelationMatrix {
public:
    CorrelationMatrix() : r_(Mat4::Zero()) { r_(0, 0) = 1.0; }
    explicit CorrelationMatrix(const Mat4& r) : r_(r) {}

    static CorrelationMatrix from_blocks(const Vec3& a, const Vec3& b, const Mat3& t) {
        Mat4 r;
        r(0, 0) = 1.0;
        r.block<3, 1>(1, 0) = a;
        r.block<1, 3>(0, 1) = b.transpose();
        r.block<3, 3>(1, 1) = t;
        return CorrelationMatrix(r);
    }

    const Mat4& matrix() const { return r_; }
    double operator()(int i, int j) const { return r_(i, j); }

    Vec3 a() const { return r_.block<3, 1>(1, 0); }
    Vec3 b() const { return r_.block<1, 3>(0, 1).transpose(); }
    Mat3 T() const { return r_.block<3, 3>(1, 1); }

    double determinant() const { return lu_determinant(r_); }

private:
    Mat4 r_;
};

inline CorrelationMatrix correlation_matrix(const DensityMatrix2Q& rho) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r(i, j) = (rho.matrix() * pauli_pair(i, j)).trace().real();
    r(0, 0) = 1.0;
    return CorrelationMatrix(r);
}

/// (1/4) sum_ij R_ij sigma_i (x) sigma_j without any physicality check.
inline Mat4c density_from_correlation(const CorrelationMatrix& r) {
    Mat4c m = Mat4c::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (r(i, j) != 0.0)
                m += r(i, j) * pauli_pair(i, j);
    return m / 4.0;
}

/// Throws InvalidState when the reconstruction is not a physical state.
inline DensityMatrix2Q state_from_correlation_matrix(const CorrelationMatrix& r, double tol = kStateTol) {
    return DensityMatrix2Q::from_matrix(density_from_correlation(r), tol);
}

namespace detail {

inline void check_pair_indices(int i, int j, int n) {
    if (n < 2 || n > 30 || i < 0 || j <= i || j >= n)
        throw Error(ErrorCode::IndexOutOfRange,
                    "need 0 <= i < j < N, got i=" + std::to_string(i) + " j=" + std::to_string(j) +
                        " N=" + std::to_string(n));
}

// Site s is bit (N-1-s) of the basis index; bit value 1 means spin down.
inline int site_bit(std::size_t index, int site, int n) {
    return static_cast<int>((index >> (n - 1 - site)) & 1U);
}

} // namespace detail

/// Partial trace of an N-qubit density matrix onto sites (i, j), i left.
inline Mat4c pair_reduced_matrix(const Eigen::MatrixXcd& full, int i, int j, int n) {
    detail::check_pair_indices(i, j, n);
    const std::size_t dim = std::size_t{1} << n;
    if (static_cast<std::size_t>(full.rows()) != dim || static_cast<std::size_t>(full.cols()) != dim)
        throw Error(ErrorCode::IndexOutOfRange, "matrix dimension does not match 2^N");
    const std::size_t mi = std::size_t{1} << (n - 1 - i);
    const std::size_t mj = std::size_t{1} << (n - 1 - j);
    const std::size_t pair_mask = mi | mj;
    Mat4c out = Mat4c::Zero();
    for (std::size_t row = 0; row < dim; ++row) {
        const std::size_t env = row & ~pair_mask;
        const int r = 2 * detail::site_bit(row, i, n) + detail::site_bit(row, j, n);
        for (int c = 0; c < 4; ++c) {
            const std::size_t col = env | ((c & 2) ? mi : 0) | ((c & 1) ? mj : 0);
            out(r, c) += full(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        }
    }
    return out;
}

/// Pair reduced matrix of a pure N-qubit state vector.
template <typename Vector>
Mat4c pair_reduced_matrix_pure(const Vector& psi, int i, int j, int n) {
    detail::check_pair_indices(i, j, n);
    const std::size_t dim = std::size_t{1} << n;
    if (static_cast<std::size_t>(psi.size()) != dim)
        throw Error(ErrorCode::IndexOutOfRange, "vector dimension does not match 2^N");
    const std::size_t mi = std::size_t{1} << (n - 1 - i);
    const std::size_t mj = std::size_t{1} << (n - 1 - j);
    const std::size_t pair_mask = mi | mj;
    Mat4c out = Mat4c::Zero();
    for (std::size_t env = 0; env < dim; ++env) {
        if (env & pair_mask)
            continue;
        std::array<cplx, 4> amp;
        for (int c = 0; c < 4; ++c)
            amp[c] = psi[static_cast<Eigen::Index>(env | ((c & 2) ? mi : 0) | ((c & 1) ? mj : 0))];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                out(r, c) += amp[r] * std::conj(amp[c]);
    }
    return out;
}

inline DensityMatrix2Q pair_reduced_state(const Eigen::MatrixXcd& full, int i, int j, int n,
                                          double tol = 1e-9) {
    return DensityMatrix2Q::from_matrix(pair_reduced_matrix(full, i, j, n), tol);
}

/// Wootters concurrence, using the Hermitian form sqrt(rho) rho~ sqrt(rho)
/// whose eigenvalues are the squares of the lambda_i.
inline double concurrence(const DensityMatrix2Q& rho) {
    const Mat4c yy = pauli_pair(2, 2);
    const Mat4c flipped = yy * rho.matrix().conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Mat4c> es(rho.matrix());
    const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
    const Mat4c sqrt_rho = es.eigenvectors() * ev.cwiseSqrt().cast<cplx>().asDiagonal() *
                           es.eigenvectors().adjoint();
    Mat4c m = sqrt_rho * flipped * sqrt_rho;
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat4c> es2(m, Eigen::EigenvaluesOnly);
    std::array<double, 4> lam;
    for (int k = 0; k < 4; ++k)
        lam[k] = std::sqrt(std::max(0.0, es2.eigenvalues()[k]));
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

} // namespace qobesity
