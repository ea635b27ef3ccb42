#include "test_helpers.hpp"

#include <map>
#include <vector>

using namespace qobesity;
using namespace qobesity::testing;

namespace {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n) : x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) {
            double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16)
                    break;
            }
            x[static_cast<std::size_t>(i)] = z;
            w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
    template <typename F>
    double integrate(F&& f, double a, double b) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += w[i] * f(0.5 * (b - a) * x[i] + 0.5 * (b + a));
        return 0.5 * (b - a) * s;
    }
};

const ed::GroundSpace& ising_ed14(double lambda) {
    static std::map<double, ed::GroundSpace> cache;
    auto it = cache.find(lambda);
    if (it == cache.end()) {
        ed::SolverOptions opt;
        opt.allow_iterative = true;
        it = cache.emplace(lambda, ed::ground_space({ed::Model::IsingLenz, 14, lambda}, opt)).first;
    }
    return it->second;
}

} // namespace

TEST(Dispersion, Examples) {
    for (double phi : {0.0, 0.7, 2.0, kPi})
        EXPECT_DOUBLE_EQ(ising::omega_phi(phi, 0.0), 1.0);
    EXPECT_NEAR(ising::omega_phi(kPi, 1.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(ising::omega_phi(0.0, 2.0), 3.0);
    EXPECT_GT(ising::omega_phi(kPi - 1e-3, 1.0), 0.0);
}

TEST(GEll, ZeroCoupling) {
    EXPECT_NEAR(ising::g_ell(0, 0.0), 1.0, 1e-10);
    for (int l : {-3, -2, -1, 1, 2, 5})
        EXPECT_NEAR(ising::g_ell(l, 0.0), 0.0, 1e-10) << l;
}

TEST(GEll, StrongCouplingLimit) { EXPECT_NEAR(ising::g_ell(-1, 50.0), 1.0, 0.05); }

TEST(GEll, MatchesGaussLegendreReference) {
    const GaussLegendre gl(4096);
    const double lambda = 0.5;
    for (int l = -6; l <= 6; ++l) {
        const double ref = gl.integrate(
                               [&](double phi) {
                                   return (std::cos(l * phi) + lambda * std::cos((l + 1) * phi)) /
                                          ising::omega_phi(phi, lambda);
                               },
                               0.0, kPi) /
                           kPi;
        EXPECT_NEAR(ising::g_ell(l, lambda), ref, 1e-10) << l;
    }
}

TEST(GEll, CriticalPointConverges) {
    // At lambda = 1 the integrand has a kink at phi = pi; the known closed
    // forms are G_0 = 2/pi and G_{-1} = 2/pi.
    EXPECT_NEAR(ising::g_ell(0, 1.0), 2.0 / kPi, 1e-9);
    EXPECT_NEAR(ising::g_ell(-1, 1.0), 2.0 / kPi, 1e-9);
}

TEST(GEll, BudgetExhaustionIsReported) {
    EXPECT_EQ(error_code_of([] { ising::g_ell(3, 0.999, 1e-12, 50); }), ErrorCode::QuadratureFailure);
    EXPECT_EQ(error_code_of([] { ising::g_ell(3, 0.5, 0.0); }), ErrorCode::QuadratureFailure);
}

TEST(SigmaZ, Limits) {
    EXPECT_NEAR(std::abs(ising::sigma_z_expectation(0.0)), 1.0, 1e-10);
    EXPECT_GT(ising::sigma_z_expectation(0.0), 0.0);
    EXPECT_NEAR(ising::sigma_z_expectation(50.0), 0.0, 0.05);
}

TEST(SigmaZ, OnePlusCosIntegrandAgreesOnlyAtCriticality) {
    const double at1 = ising::sigma_z_expectation(1.0, 1e-10, ising::SzFormula::OnePlusCosIntegrand);
    EXPECT_NEAR(std::abs(at1), ising::sigma_z_expectation(1.0), 1e-9);
    const double at05 = ising::sigma_z_expectation(0.5, 1e-10, ising::SzFormula::OnePlusCosIntegrand);
    EXPECT_GT(std::abs(std::abs(at05) - ising::sigma_z_expectation(0.5)), 1e-3);
}

TEST(SigmaZ, MatchesExactDiagonalization) {
    const auto c = ed::pair_correlators(ising_ed14(0.5), 0, 1);
    EXPECT_NEAR(ising::sigma_z_expectation(0.5), c.sz_i, 1e-2);
}

TEST(Correlators, NearestNeighbourStructure) {
    const auto c = ising::pair_correlators(0.7, 1);
    EXPECT_DOUBLE_EQ(c.xx, ising::g_ell(-1, 0.7));
    EXPECT_DOUBLE_EQ(c.yy, ising::g_ell(1, 0.7));
    EXPECT_NEAR(c.zz, c.sz * c.sz - ising::g_ell(1, 0.7) * ising::g_ell(-1, 0.7), 1e-15);
}

TEST(Correlators, ZeroCoupling) {
    for (int k = 1; k <= 4; ++k) {
        const auto c = ising::pair_correlators(0.0, k);
        EXPECT_NEAR(c.xx, 0.0, 1e-10);
        EXPECT_NEAR(c.yy, 0.0, 1e-10);
        EXPECT_NEAR(c.zz, 1.0, 1e-10);
    }
}

TEST(Correlators, SeparationRange) {
    EXPECT_EQ(error_code_of([] { ising::pair_correlators(0.5, 0); }), ErrorCode::IndexOutOfRange);
    EXPECT_EQ(error_code_of([] { ising::pair_correlators(0.5, 11); }), ErrorCode::IndexOutOfRange);
    const auto c = ising::pair_correlators(0.5, 10);
    EXPECT_LE(std::abs(c.xx), 1.0 + 1e-9);
}

TEST(Correlators, MatchExactDiagonalization) {
    for (double lambda : {0.2, 0.5, 1.5}) {
        const auto& gs = ising_ed14(lambda);
        for (int k : {1, 2}) {
            const auto th = ising::pair_correlators(lambda, k);
            const auto ex = ed::pair_correlators(gs, 0, k);
            EXPECT_NEAR(th.sz, ex.sz_i, 2e-2) << lambda << " " << k;
            EXPECT_NEAR(th.xx, ex.xx, 2e-2) << lambda << " " << k;
            EXPECT_NEAR(th.yy, ex.yy, 2e-2) << lambda << " " << k;
            EXPECT_NEAR(th.zz, ex.zz, 2e-2) << lambda << " " << k;
        }
    }
}

TEST(PairState, ZeroCouplingIsUpUp) {
    const auto s = ising::ising_pair_state(0.0, 1);
    EXPECT_LT((s.rho.matrix() - up_up().matrix()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ(obesity(s.rho), 0.0);
}

TEST(PairState, MatchesExactDiagonalizationEntrywise) {
    for (int k : {1, 2}) {
        const auto s = ising::ising_pair_state(0.5, k);
        const auto ex = ed::pair_reduced_state(ising_ed14(0.5), 0, k);
        EXPECT_LT((s.rho.matrix() - ex.matrix()).cwiseAbs().maxCoeff(), 2e-2) << k;
    }
}

TEST(PairState, OrderedPhase) {
    const auto s = ising::ising_pair_state(2.0, 1);
    EXPECT_GT(obesity(s.rho), 0.0);
    const double xx_plateau = ising::pair_correlators(50.0, 1).xx;
    EXPECT_GT(xx_plateau, 0.95);
    EXPECT_NEAR(s.correlators.xx, xx_plateau, 0.2);
}

TEST(PairState, ClosedFormObesityMatchesDeterminant) {
    for (double lambda : {0.3, 0.9, 1.0, 1.4}) {
        const auto s = ising::ising_pair_state(lambda, 2);
        EXPECT_NEAR(ising::pair_obesity(s), obesity(s.rho), 1e-10);
        EXPECT_NEAR(obesity_x_family(s.rho, 1), obesity(s.rho), 1e-10);
    }
}

TEST(PairState, ValidAcrossGrid) {
    for (int k : {1, 2}) {
        double prev = -1.0;
        for (const double lambda : scan::uniform_grid(0.0, 2.0, 0.01)) {
            const auto s = ising::ising_pair_state(lambda, k);
            const auto rep = validate_state(s.rho, 1e-7);
            EXPECT_TRUE(rep.ok()) << lambda << ": " << rep.summary();
            EXPECT_NEAR(rep.trace.real(), 1.0, 1e-9);
            const double om = obesity(s.rho);
            if (prev >= 0.0)
                EXPECT_LT(std::abs(om - prev), 5 * 0.01) << lambda;
            prev = om;
        }
    }
}

TEST(PairState, QuadratureToleranceRobustness) {
    for (const double lambda : scan::uniform_grid(0.0, 2.0, 0.05)) {
        if (std::abs(lambda - 1.0) <= 0.01)
            continue;
        const double a = obesity(ising::ising_pair_state(lambda, 1, 1e-10).rho);
        const double b = obesity(ising::ising_pair_state(lambda, 1, 5e-11).rho);
        EXPECT_LT(std::abs(a - b), 1e-6) << lambda;
    }
}

TEST(PairState, FilterFunctionForms) {
    const auto s = ising::ising_pair_state(0.8, 1);
    const auto f = ising_optimal_filter(s.A_plus, s.A_minus);
    const auto out = apply_filter(s.rho, f);
    const double direct = obesity(out.state) / obesity(s.rho);
    EXPECT_NEAR(direct, ising::filter_function_direct_closed_form(s), 1e-9);
    // The square-root form is a different number.
    EXPECT_GT(std::abs(ising::filter_function_sqrt_form(s) - direct), 1e-3);
}
