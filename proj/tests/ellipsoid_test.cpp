#include "test_helpers.hpp"

using namespace qobesity;
using namespace qobesity::testing;

namespace {

/// Bloch vector of A after projecting B onto the +1 eigenstate of sigma.n,
/// by explicit projector algebra.
std::pair<Vec3, double> steer_by_projector(const DensityMatrix2Q& rho, const Vec3& n) {
    Mat2c proj = Mat2c::Identity();
    for (int k = 0; k < 3; ++k)
        proj += n[k] * pauli()[k + 1];
    proj *= 0.5;
    const Mat4c op = kron(Mat2c::Identity(), proj);
    const Mat4c post = op * rho.matrix() * op;
    const double prob = post.trace().real();
    return {bloch_a_by_trace(post / prob), prob};
}

double surface_residual(const SteeringEllipsoid& e, const Vec3& x) {
    const Vec3 d = x - e.center;
    return d.dot(e.Q.inverse() * d) - 1.0;
}

} // namespace

TEST(Gamma, Examples) {
    EXPECT_DOUBLE_EQ(gamma_b(bell_diagonal_state({0.3, 0.2, -0.4})), 1.0);
    const auto r = CorrelationMatrix::from_blocks(Vec3::Zero(), Vec3(0, 0.6, 0), Mat3::Zero());
    EXPECT_NEAR(gamma_b(r), 1.5625, 1e-14);
    EXPECT_EQ(error_code_of([] { gamma_b(up_up()); }), ErrorCode::SingularMarginal);
}

TEST(Ellipsoid, PhiPlusIsBlochSphere) {
    const auto e = steering_ellipsoid(phi_plus());
    EXPECT_LT(e.center.norm(), 1e-15);
    EXPECT_LT((e.semiaxes - Vec3::Ones()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(ellipsoid_volume(phi_plus()), 4.0 * kPi / 3.0, 1e-12);
}

TEST(Ellipsoid, MaximallyMixedIsPoint) {
    const auto rho = DensityMatrix2Q::maximally_mixed();
    const auto e = steering_ellipsoid(rho);
    EXPECT_LT(e.center.norm(), 1e-15);
    EXPECT_LT(e.semiaxes.norm(), 1e-15);
    EXPECT_EQ(ellipsoid_volume(rho), 0.0);
}

TEST(Ellipsoid, WernerHalf) {
    const auto e = steering_ellipsoid(werner(0.5));
    EXPECT_LT(e.center.norm(), 1e-15);
    EXPECT_LT((e.semiaxes - Vec3::Constant(0.5)).cwiseAbs().maxCoeff(), 1e-12);
    // Omega^4 = |det R| = p^3 = 1/8, matching the semiaxis product 0.5^3.
    EXPECT_NEAR(ellipsoid_volume(werner(0.5)), 4.0 * kPi / 3.0 / 8.0, 1e-12);
    EXPECT_NEAR(e.volume(), 4.0 * kPi / 3.0 * 0.125, 1e-12);
}

TEST(Ellipsoid, PureMarginalRejected) {
    EXPECT_EQ(error_code_of([] { steering_ellipsoid(up_up()); }), ErrorCode::SingularMarginal);
}

TEST(Ellipsoid, InvariantsOnRandomStates) {
    random::Rng rng(23);
    for (int n = 0; n < 500; ++n) {
        const auto rho = random::ginibre_state(rng);
        for (Party p : {Party::A, Party::B}) {
            const auto e = steering_ellipsoid(rho, p);
            EXPECT_LT((e.Q - e.Q.transpose()).cwiseAbs().maxCoeff(), 1e-15);
            EXPECT_GE(e.semiaxes.minCoeff(), 0.0);
            EXPECT_LE(e.semiaxes.maxCoeff(), 1.0 + 1e-9);
            EXPECT_LE(e.center.norm(), 1.0 + 1e-9);
            EXPECT_GE(e.gamma, 1.0);
            // Surface points stay inside the Bloch ball.
            for (int s = 0; s < 20; ++s) {
                const Vec3 u = random::unit_vector(rng);
                const Vec3 x = e.center + e.orientation * e.semiaxes.asDiagonal() * u;
                EXPECT_LE(x.norm(), 1.0 + 1e-8);
            }
        }
    }
}

TEST(Ellipsoid, VolumeMatchesSemiaxes) {
    random::Rng rng(29);
    for (int n = 0; n < 500; ++n) {
        const auto rho = random::ginibre_state(rng);
        const auto r = correlation_matrix(rho);
        const auto e = steering_ellipsoid(r);
        const double g = gamma_b(r);
        EXPECT_NEAR(std::sqrt(e.Q.determinant()), g * g * std::abs(r.determinant()), 1e-12);
        EXPECT_NEAR(ellipsoid_volume(r), e.volume(), 1e-8);
    }
}

TEST(Ellipsoid, Gamma4FormOnlyHoldsWithoutMarginal) {
    EXPECT_NEAR(ellipsoid_volume_gamma4(werner(0.5)), ellipsoid_volume(werner(0.5)), 1e-14);
    random::Rng rng(31);
    const auto rho = random::ginibre_state(rng);
    const double g = gamma_b(rho);
    ASSERT_GT(g, 1.0 + 1e-6);
    EXPECT_NEAR(ellipsoid_volume_gamma4(rho) / ellipsoid_volume(rho), g * g, 1e-10);
}

TEST(Steering, ClosedFormMatchesProjector) {
    random::Rng rng(37);
    for (int n = 0; n < 300; ++n) {
        const auto rho = random::ginibre_state(rng);
        const Vec3 dir = random::unit_vector(rng);
        const auto out = steered_bloch_vector(rho, dir);
        const auto [bloch, prob] = steer_by_projector(rho, dir);
        EXPECT_NEAR(out.probability, prob, 1e-12);
        EXPECT_LT((out.bloch - bloch).norm(), 1e-12);
    }
}

TEST(Steering, Examples) {
    const auto prod = steered_bloch_vector(up_up(), Vec3(0.6, 0.0, 0.8));
    EXPECT_LT((prod.bloch - Vec3(0, 0, 1)).norm(), 1e-15);
    const auto bell = steered_bloch_vector(phi_plus(), Vec3(0, 0, 1));
    EXPECT_LT((bell.bloch - Vec3(0, 0, 1)).norm(), 1e-15);
    EXPECT_NEAR(bell.probability, 0.5, 1e-15);
    const auto mixed = steered_bloch_vector(DensityMatrix2Q::maximally_mixed(), Vec3(1, 0, 0));
    EXPECT_LT(mixed.bloch.norm(), 1e-15);
    EXPECT_NEAR(mixed.probability, 0.5, 1e-15);
    EXPECT_EQ(error_code_of([] { steered_bloch_vector(up_up(), Vec3(0, 0, -1)); }), ErrorCode::ZeroProbability);
}

TEST(Steering, OutcomesLieOnSurface) {
    random::Rng rng(41);
    int checked = 0;
    for (int n = 0; n < 1000; ++n) {
        const auto rho = random::ginibre_state(rng);
        const auto e = steering_ellipsoid(rho);
        if (e.semiaxes.minCoeff() < 1e-6)
            continue;
        const auto out = steered_bloch_vector(rho, random::unit_vector(rng));
        EXPECT_NEAR(surface_residual(e, out.bloch), 0.0, 1e-7);
        ++checked;
    }
    EXPECT_GT(checked, 900);
}

TEST(Ellipsoid, ZeroObesityHasFlatAxis) {
    // Classically correlated states: Omega = 0, so the ellipsoid is flat.
    random::Rng rng(43);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int n = 0; n < 100; ++n) {
        const double p = u(rng), q = u(rng), w = u(rng);
        Mat4c m = Eigen::Vector4cd(w * p, w * (1 - p), (1 - w) * q, (1 - w) * (1 - q)).asDiagonal();
        const auto rho = DensityMatrix2Q::from_matrix(m);
        EXPECT_EQ(obesity(rho), 0.0);
        EXPECT_EQ(ellipsoid_volume(rho), 0.0);
        EXPECT_LT(steering_ellipsoid(rho).semiaxes.minCoeff(), 1e-8);
    }
}

TEST(Ellipsoid, SwapSymmetricStatesGiveEqualEllipsoids) {
    random::Rng rng(47);
    Mat4c swap = Mat4c::Zero();
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    for (int n = 0; n < 100; ++n) {
        const Mat4c m = random::ginibre_state(rng).matrix();
        const auto rho = DensityMatrix2Q::unchecked(0.5 * (m + swap * m * swap));
        const auto ea = steering_ellipsoid(rho, Party::A), eb = steering_ellipsoid(rho, Party::B);
        EXPECT_LT((ea.center - eb.center).norm(), 1e-10);
        EXPECT_LT((ea.Q - eb.Q).cwiseAbs().maxCoeff(), 1e-10);
    }
}
