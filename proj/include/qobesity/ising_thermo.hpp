#pragma once

// Ground-state correlators of the transverse-field Ising chain
//   H = -sum_i (lambda sigma^x_i sigma^x_{i+1} + sigma^z_i)
// in the thermodynamic limit, from the G_l integrals and Toeplitz
// determinants, and the resulting X-form pair states.

#include "qobesity/obesity.hpp"
#include "qobesity/quadrature.hpp"

#include <cmath>
#include <vector>

namespace qobesity::ising {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr std::size_t kDefaultQuadBudget = 200000;

/// Quasiparticle dispersion sqrt((lambda sin phi)^2 + (1 + lambda cos phi)^2).
inline double omega_phi(double phi, double lambda) {
    const double s = lambda * std::sin(phi);
    const double c = 1.0 + lambda * std::cos(phi);
    return std::sqrt(s * s + c * c);
}

inline quadrature::Options quad_options(double quad_tol, std::size_t budget = kDefaultQuadBudget) {
    if (!(quad_tol > 0.0))
        throw Error(ErrorCode::QuadratureFailure, "quadrature tolerance must be positive");
    quadrature::Options opt;
    // The result is divided by pi afterwards.
    opt.abs_tol = quad_tol * kPi;
    opt.max_evaluations = budget;
    return opt;
}

/// Near lambda = 1 the integrands vary on a scale |1 - lambda| next to phi = pi.
inline std::vector<double> singular_breakpoints(double lambda) {
    const double gap = std::abs(1.0 - lambda);
    if (gap > 0.5)
        return {};
    return quadrature::endpoint_breakpoints(0.0, kPi, std::max(0.25 * gap, 1e-9));
}

template <typename Numerator>
double dispersion_integral(Numerator&& num, double lambda, double quad_tol,
                           std::size_t budget = kDefaultQuadBudget) {
    auto integrand = [&](double phi) {
        const double w = omega_phi(phi, lambda);
        // Only reached at lambda = 1, phi = pi, where the ratio tends to 0.
        if (w == 0.0)
            return 0.0;
        return num(phi) / w;
    };
    const auto bp = singular_breakpoints(lambda);
    return quadrature::adaptive_simpson(integrand, 0.0, kPi, quad_options(quad_tol, budget), bp).value / kPi;
}

/// G_l = (1/pi) int_0^pi [cos(l phi) + lambda cos((l+1) phi)] / omega_phi dphi.
inline double g_ell(int ell, double lambda, double quad_tol = kDefaultQuadTol,
                    std::size_t budget = kDefaultQuadBudget) {
    return dispersion_integral(
        [&](double phi) { return std::cos(ell * phi) + lambda * std::cos((ell + 1) * phi); }, lambda,
        quad_tol, budget);
}

enum class SzFormula {
    /// <sigma^z> = G_0, positive: the lambda = 0 ground state is all up.
    FromG0,
    /// -(1/pi) int (1 + cos phi)/omega_phi; agrees in magnitude only at lambda = 1.
    OnePlusCosIntegrand,
};

inline double sigma_z_expectation(double lambda, double quad_tol = kDefaultQuadTol,
                                  SzFormula formula = SzFormula::FromG0) {
    if (formula == SzFormula::OnePlusCosIntegrand)
        return -dispersion_integral([](double phi) { return 1.0 + std::cos(phi); }, lambda, quad_tol);
    return g_ell(0, lambda, quad_tol);
}

/// G_l for l in [-k_max, k_max], filled once per lambda.
class GTable {
public:
    GTable(double lambda, int k_max, double quad_tol = kDefaultQuadTol, std::size_t budget = kDefaultQuadBudget)
        : lambda_(lambda), k_max_(k_max), values_(2 * static_cast<std::size_t>(k_max) + 1) {
        for (int l = -k_max; l <= k_max; ++l)
            values_[static_cast<std::size_t>(l + k_max)] = g_ell(l, lambda, quad_tol, budget);
    }

    double operator()(int l) const {
        if (l < -k_max_ || l > k_max_)
            throw Error(ErrorCode::IndexOutOfRange, "G_" + std::to_string(l) + " outside cached range");
        return values_[static_cast<std::size_t>(l + k_max_)];
    }

    double lambda() const { return lambda_; }
    int k_max() const { return k_max_; }

private:
    double lambda_;
    int k_max_;
    std::vector<double> values_;
};

/// det of the k x k matrix with entries G_{i - j + offset}.
inline double toeplitz_determinant(const GTable& g, int k, int offset) {
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m(i, j) = g(i - j + offset);
    return m.partialPivLu().determinant();
}

struct IsingCorrelators {
    double lambda = 0.0;
    int k = 1;
    double sz = 0.0;
    double xx = 0.0;
    double yy = 0.0;
    double zz = 0.0;
    std::vector<double> g; // G_l for l = -k .. k
};

inline constexpr int kMaxSeparation = 10;

inline IsingCorrelators pair_correlators(double lambda, int k, double quad_tol = kDefaultQuadTol,
                                         std::size_t budget = kDefaultQuadBudget) {
    if (k < 1 || k > kMaxSeparation)
        throw Error(ErrorCode::IndexOutOfRange, "separation k must be in [1, 10]");
    const GTable g(lambda, k, quad_tol, budget);
    IsingCorrelators c;
    c.lambda = lambda;
    c.k = k;
    c.sz = g(0);
    c.xx = toeplitz_determinant(g, k, -1);
    c.yy = toeplitz_determinant(g, k, 1);
    c.zz = c.sz * c.sz - g(k) * g(-k);
    for (int l = -k; l <= k; ++l)
        c.g.push_back(g(l));
    return c;
}

struct IsingPairState {
    double A_plus = 0.0;
    double A_minus = 0.0;
    double B = 0.0;
    double C_plus = 0.0;
    double C_minus = 0.0;
    IsingCorrelators correlators;
    DensityMatrix2Q rho;
};

inline constexpr double kPairStateTol = 1e-7;

/// X-form pair state from correlators:
///   A+- = (1 +- 2 sz + zz)/4, B = (1 - zz)/4, C+- = (xx +- yy)/4.
inline IsingPairState pair_state_from_correlators(const IsingCorrelators& c) {
    IsingPairState s;
    s.correlators = c;
    s.A_plus = (1.0 + 2.0 * c.sz + c.zz) / 4.0;
    s.A_minus = (1.0 - 2.0 * c.sz + c.zz) / 4.0;
    s.B = (1.0 - c.zz) / 4.0;
    s.C_plus = (c.xx + c.yy) / 4.0;
    s.C_minus = (c.xx - c.yy) / 4.0;
    Mat4c m = Mat4c::Zero();
    m(0, 0) = s.A_plus;
    m(1, 1) = s.B;
    m(2, 2) = s.B;
    m(3, 3) = s.A_minus;
    m(0, 3) = m(3, 0) = s.C_minus;
    m(1, 2) = m(2, 1) = s.C_plus;
    const auto report = validate_matrix(m, kPairStateTol);
    if (!report.ok())
        throw Error(ErrorCode::InvalidState,
                    "pair state at lambda=" + std::to_string(c.lambda) + ", k=" + std::to_string(c.k) +
                        " (sz=" + std::to_string(c.sz) + " xx=" + std::to_string(c.xx) +
                        " yy=" + std::to_string(c.yy) + " zz=" + std::to_string(c.zz) +
                        "): " + report.summary());
    s.rho = DensityMatrix2Q::unchecked(m);
    return s;
}

inline IsingPairState ising_pair_state(double lambda, int k, double quad_tol = kDefaultQuadTol,
                                       std::size_t budget = kDefaultQuadBudget) {
    return pair_state_from_correlators(pair_correlators(lambda, k, quad_tol, budget));
}

/// Omega = 2 |(C+^2 - C-^2)(B^2 - A+ A-)|^(1/4).
inline double pair_obesity(const IsingPairState& s) {
    const double prod = std::abs((s.C_plus * s.C_plus - s.C_minus * s.C_minus) *
                                 (s.B * s.B - s.A_plus * s.A_minus));
    return 16.0 * prod < kDetFloor ? 0.0 : 2.0 * std::pow(prod, 0.25);
}

/// Square-root closed form |B + sqrt(A+ A-)|^(-1/2) / sqrt(2).
inline double filter_function_sqrt_form(const IsingPairState& s) {
    return std::pow(std::abs(s.B + std::sqrt(s.A_plus * s.A_minus)), -0.5) / std::sqrt(2.0);
}

/// Omega^F / Omega for the optimal filter by direct algebra: 1 / (2 (B + sqrt(A+ A-))).
inline double filter_function_direct_closed_form(const IsingPairState& s) {
    return 1.0 / (2.0 * (s.B + std::sqrt(s.A_plus * s.A_minus)));
}

} // namespace qobesity::ising
