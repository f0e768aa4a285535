#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "soliton/errors.hpp"
#include "soliton/toric.hpp"
#include "soliton/volume_min.hpp"

using namespace soliton;

namespace {

ExpRationalSum F_of(const BuiltinSpec& spec)
{
    return assemble_F(builtin_model(spec));
}

Vector<double> grad(const ExpRationalSum& F, std::vector<double> z)
{
    return gradient_F<double>(F, z);
}

Matrix<double> hess(const ExpRationalSum& F, std::vector<double> z)
{
    return hessian_F<double>(F, z);
}

double min_eigenvalue(const Matrix<double>& H)
{
    return Eigen::SelfAdjointEigenSolver<Matrix<double>>(H).eigenvalues().minCoeff();
}

}   // namespace

TEST(Gradient, GaussianCriticalAtOnes)
{
    EXPECT_LT(grad(F_of({"Cn", 2, 0}), {1, 1}).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(Gradient, LineAtTwo)
{
    auto g = grad(F_of({"Cn", 1, 0}), {2.0});
    EXPECT_NEAR(g[0], std::exp(2.0) / 4, 1e-12);
    EXPECT_NEAR(g[0], 1.847264, 1e-6);
}

TEST(Gradient, BlowupCriticalAtRootTwo)
{
    double r = std::sqrt(2.0);
    EXPECT_LT(grad(F_of({"OkPn", 2, 1}), {r, r}).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Gradient, MatchesClosedFormDerivativeOffDiagonal)
{
    auto F = F_of({"OkPn", 2, 1});
    for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{0.4, 1.7}})
    {
        auto g = grad(F, {a, b});
        double h = 1e-6;
        double da = (oracle::blowup(a + h, b) - oracle::blowup(a - h, b)) / (2 * h);
        double db = (oracle::blowup(a, b + h) - oracle::blowup(a, b - h)) / (2 * h);
        EXPECT_NEAR(g[0], da, 1e-6 * std::max(1.0, std::abs(da)));
        EXPECT_NEAR(g[1], db, 1e-6 * std::max(1.0, std::abs(db)));
    }
}

TEST(Gradient, ConfluentDiagonalDerivative)
{
    auto F = F_of({"OkPn", 2, 1});
    for (double t : {0.8, 1.3, 2.0})
    {
        auto g = grad(F, {t, t});
        double h = 1e-5;
        double along = (oracle::blowup_diagonal(t + h) - oracle::blowup_diagonal(t - h)) / (2 * h);
        EXPECT_NEAR(g[0] + g[1], along, 1e-7 * std::abs(along));
        // By symmetry the two components agree.
        EXPECT_NEAR(g[0], g[1], 1e-10 * std::abs(g[0]));
    }
}

TEST(Gradient, ConfluentAgreesWithFiniteDifferences)
{
    for (const auto& spec : example_builtins())
    {
        auto F = F_of(spec);
        std::vector<double> z(assemble_F(builtin_model(spec)).rank(), 1.1);
        auto g = grad(F, z);
        auto fd = finite_difference_gradient<double>(F, z, 1e-3);
        double scale = std::max(1.0, g.lpNorm<Eigen::Infinity>());
        EXPECT_LT((g - fd).lpNorm<Eigen::Infinity>() / scale, 1e-4) << spec.label();
    }
}

TEST(Gradient, TaylorConsistentAcrossConfluence)
{
    // Off-diagonal points approaching the diagonal: first-order Taylor
    // residuals from the confluent point must shrink quadratically.
    auto F = F_of({"OkPn", 3, 1});
    std::vector<double> on{1.2, 1.2, 1.2};
    auto g0 = grad(F, on);
    auto H = hess(F, on);
    double f0 = confluent_value<double>(F, on);
    for (double s : {1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12})
    {
        Vector<double> d(3);
        d << s, -0.7 * s, 0.2 * s;
        std::vector<double> z{1.2 + d[0], 1.2 + d[1], 1.2 + d[2]};
        double bound = 50 * s * s + 1e-13;
        EXPECT_LT((grad(F, z) - g0 - H * d).lpNorm<Eigen::Infinity>(), bound) << s;
        EXPECT_LT(std::abs(confluent_value<double>(F, z) - f0 - g0.dot(d)), bound) << s;
    }
}

TEST(Hessian, LineAtOne)
{
    auto H = hess(F_of({"Cn", 1, 0}), {1.0});
    EXPECT_NEAR(H(0, 0), std::exp(1.0), 1e-12);
}

TEST(Hessian, GaussianAtOnes)
{
    for (int n = 1; n <= 4; ++n)
    {
        auto H = hess(F_of({"Cn", n, 0}), std::vector<double>(static_cast<std::size_t>(n), 1.0));
        // d^2/dz_i dz_j prod e^{z}/z at ones: e^n on the diagonal, 0 off it.
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                EXPECT_NEAR(H(i, j), i == j ? std::exp(static_cast<double>(n)) : 0.0, 1e-10);
        EXPECT_GT(min_eigenvalue(H), 0.0);
    }
}

TEST(Hessian, ConfluentDiagonalSecondDerivative)
{
    auto F = F_of({"OkPn", 2, 1});
    for (double t : {0.9, 1.5})
    {
        auto H = hess(F, {t, t});
        double h = 1e-4;
        double second = (oracle::blowup_diagonal(t + h) - 2 * oracle::blowup_diagonal(t) + oracle::blowup_diagonal(t - h))
                        / (h * h);
        EXPECT_NEAR(H.sum(), second, 1e-5 * second);
    }
}

TEST(Hessian, ConfluentMatchesNearbyAnalytic)
{
    auto F = F_of({"OkPn", 3, 2});
    auto on = hess(F, {1.0, 1.0, 1.0});
    auto near = hess(F, {1.0 + 2e-3, 1.0 - 1e-3, 1.0 + 5e-4});
    EXPECT_LT((on - near).cwiseAbs().maxCoeff() / on.cwiseAbs().maxCoeff(), 1e-2);
}

TEST(Hessian, PositiveDefiniteAtRandomPoints)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    auto builtins = example_builtins();
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto& spec = builtins[static_cast<std::size_t>(trial) % builtins.size()];
        auto F = F_of(spec);
        std::vector<double> z;
        for (std::size_t i = 0; i < F.rank(); ++i)
            z.push_back(u(rng));
        EXPECT_GT(min_eigenvalue(hess(F, z)), 0.0) << spec.label();
    }
}

TEST(Symmetry, FullGroupsForSymmetricModels)
{
    EXPECT_EQ(detect_symmetry(builtin_model({"Cn", 3, 0})).size(), 6u);
    EXPECT_EQ(detect_symmetry(builtin_model({"OkPn", 3, 1})).size(), 6u);
    EXPECT_EQ(detect_symmetry(builtin_model({"OkPn", 4, 3})).size(), 24u);
}

TEST(Symmetry, DistinctWeightsGiveIdentityOnly)
{
    IsolatedFixedPoint p{Covector({-1, -2}), {Covector({1, 0}), Covector({0, 2})}};
    auto perms = detect_symmetry(LocalizationProblem(2, {p}));
    ASSERT_EQ(perms.size(), 1u);
    EXPECT_EQ(perms[0], (Permutation{0, 1}));
}

TEST(Symmetry, OrbitsOfGeneratedGroup)
{
    auto orbits = permutation_orbits(4, {{1, 0, 2, 3}, {0, 1, 3, 2}});
    ASSERT_EQ(orbits.size(), 2u);
    EXPECT_EQ(orbits[0], (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(orbits[1], (std::vector<std::size_t>{2, 3}));
}

TEST(Minimize, GaussianOnes)
{
    for (int n = 1; n <= 6; ++n)
    {
        auto report = minimize_F(builtin_model({"Cn", n, 0}));
        for (double z : report.zeta_star)
            EXPECT_NEAR(z, 1.0, 1e-8);
    }
}

TEST(Minimize, BlowupRootTwo)
{
    auto report = minimize_F(builtin_model({"OkPn", 2, 1}));
    for (double z : report.zeta_star)
        EXPECT_NEAR(z, std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(report.value, (std::sqrt(2.0) + 1) * std::exp(std::sqrt(2.0)) / 2, 1e-10);
    EXPECT_LE(report.grad_norm, report.grad_tol);
}

TEST(Minimize, OMinusOneOverP2MatchesCriticalRoot)
{
    auto report = minimize_F(builtin_model({"OkPn", 3, 1}));
    double root = oracle::bisect({-3, -3, 0, 2}, 1.0, 2.0);
    EXPECT_NEAR(root, 1.5674683748524, 1e-12);
    for (double z : report.zeta_star)
        EXPECT_NEAR(z, root, 1e-8);
}

TEST(Minimize, WithoutSymmetryFromAsymmetricStart)
{
    SolverConfig config;
    config.use_symmetry = false;
    config.initial_point = std::vector<double>{0.5, 3.0};
    auto report = minimize_F(builtin_model({"OkPn", 2, 1}), config);
    for (double z : report.zeta_star)
        EXPECT_NEAR(z, std::sqrt(2.0), 1e-8);
    EXPECT_EQ(report.symmetry_group_order, 1u);
}

TEST(Minimize, ExtendedPrecisionAgrees)
{
    SolverConfig config;
    config.precision = Precision::Extended;
    auto report = minimize_F(builtin_model({"OkPn", 3, 2}), config);
    double root = oracle::bisect({-6, 0, 3, 2}, 0.5, 2.0);
    for (double z : report.zeta_star)
        EXPECT_NEAR(z, root, 1e-9);
}

TEST(Minimize, LineBundleComponent)
{
    auto report = minimize_F(LocalizationProblem(1, projective_line_bundle(1, 1)));
    // (eta+1)e^eta/eta^2 is critical at sqrt 2.
    EXPECT_NEAR(report.zeta_star[0], std::sqrt(2.0), 1e-8);
}

TEST(Minimize, IterationCapRaisesNotConverged)
{
    SolverConfig config;
    config.max_iter = 1;
    config.use_symmetry = false;
    config.initial_point = std::vector<double>{0.3, 4.0};
    try
    {
        minimize_F(builtin_model({"OkPn", 2, 1}), config);
        FAIL() << "expected NotConverged";
    }
    catch (const NotConverged& e)
    {
        EXPECT_EQ(e.best_iterate().size(), 2u);
        EXPECT_GT(e.grad_norm(), 0.0);
    }
}

TEST(Minimize, InfeasibleStartRaisesEmptyLambda)
{
    SolverConfig config;
    config.initial_point = std::vector<double>{1.0, -1.0};
    EXPECT_THROW(minimize_F(builtin_model({"OkPn", 2, 1}), config), EmptyLambda);
}

TEST(Minimize, RejectsBadConfig)
{
    SolverConfig config;
    config.grad_tol = 0;
    EXPECT_THROW(minimize_F(builtin_model({"Cn", 2, 0}), config), InvalidInput);
    config.grad_tol = 1e-10;
    config.max_iter = 0;
    EXPECT_THROW(minimize_F(builtin_model({"Cn", 2, 0}), config), InvalidInput);
}

TEST(Minimize, ResultLiesInLambda)
{
    for (const auto& spec : example_builtins())
    {
        auto problem = builtin_model(spec);
        auto report = minimize_F(problem);
        EXPECT_TRUE(lambda_membership<double>(asymptotic_cone(problem), report.zeta_star)) << spec.label();
    }
}

TEST(InitialPoint, InsideLambda)
{
    for (const auto& spec : example_builtins())
    {
        auto problem = builtin_model(spec);
        EXPECT_TRUE(lambda_membership<double>(asymptotic_cone(problem), initial_point(problem)));
    }
}

TEST(CriticalRoot, Examples)
{
    EXPECT_NEAR(critical_root(Polynomial({-2, 0, 1})), std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(critical_root(Polynomial({-1, 1})), 1.0, 1e-15);
    EXPECT_NEAR(critical_root(Polynomial({-3, -3, 0, 2})), oracle::bisect({-3, -3, 0, 2}, 0, 3), 1e-13);
}

TEST(CriticalRoot, Failures)
{
    EXPECT_THROW(critical_root(Polynomial({1, 0, 1})), NoPositiveRoot);
    EXPECT_THROW(critical_root(Polynomial({5})), NoPositiveRoot);
    EXPECT_THROW(critical_root(Polynomial({2, -3, 1})), InvalidInput);   // roots 1 and 2
}
