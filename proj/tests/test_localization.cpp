#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "soliton/errors.hpp"
#include "soliton/laurent.hpp"
#include "soliton/localization.hpp"

using namespace soliton;

namespace {

struct TableRow
{
    int n;
    int k;
    std::vector<long> numerator;   // lowest degree first, as printed
    long rate;
    int pole;
    Rational scale;
    std::vector<long> critical;    // eta(P' + cP) - mP, primitive
    double root;
};

// Printed table rows, with the scale relating them to the exact diagonal limit
// and the critical polynomials obtained by differentiating each row by hand.
const std::vector<TableRow>& table()
{
    static const std::vector<TableRow> rows = {
        {2, 1, {1, 1}, 1, 2, Rational(1), {-2, 0, 1}, 1.414213562373095},
        {3, 1, {1, 2, 2}, 1, 3, Rational(1), {-3, -3, 0, 2}, 1.567468374852422},
        {3, 2, {2, 2, 1}, 2, 3, Rational(1, 4), {-6, 0, 3, 2}, 1.078616888508759},
        {4, 1, {2, 6, 9, 9}, 1, 4, Rational(1, 2), {-8, -16, -12, 0, 9}, 1.653396118514065},
        {4, 2, {3, 6, 6, 4}, 2, 4, Rational(1, 6), {-3, -3, 0, 2, 2}, 1.144714242553332},
        {4, 3, {6, 6, 3, 1}, 3, 4, Rational(1, 18), {-24, 0, 12, 8, 3}, 1.016422459216227},
    };
    return rows;
}

Polynomial poly(const std::vector<long>& c)
{
    std::vector<Rational> r(c.begin(), c.end());
    return Polynomial(r);
}

Covector diagonal(std::size_t n)
{
    return Covector(std::vector<Rational>(n, Rational(1)));
}

// O(-k) over P^{n-1}, term i: e^{(k+1-n) z_i + sum_{j != i} z_j} / (k z_i prod_{j != i}(z_j - z_i)).
double okpn_closed_form(int n, int k, const std::vector<double>& z)
{
    double total = 0.0;
    for (int i = 0; i < n; ++i)
    {
        double expo = (k + 1 - n) * z[i];
        double den = k * z[i];
        for (int j = 0; j < n; ++j)
            if (j != i)
            {
                expo += z[j];
                den *= z[j] - z[i];
            }
        total += std::exp(expo) / den;
    }
    return total;
}

}   // namespace

TEST(LocalizationProblem, RejectsMalformedFixedPoints)
{
    IsolatedFixedPoint a{Covector({0, 0}), {Covector({1, 0}), Covector({0, 1})}};
    IsolatedFixedPoint short_point{Covector({0, 0}), {Covector({1, 0})}};
    IsolatedFixedPoint zero_weight{Covector({0, 0}), {Covector({0, 0}), Covector({0, 1})}};
    IsolatedFixedPoint wrong_rank{Covector({0, 0, 0}), {Covector({1, 0}), Covector({0, 1})}};
    EXPECT_NO_THROW(LocalizationProblem(2, {a}));
    EXPECT_THROW(LocalizationProblem(2, {a, short_point}), InvalidInput);
    EXPECT_THROW(LocalizationProblem(2, {zero_weight}), InvalidInput);
    EXPECT_THROW(LocalizationProblem(2, {wrong_rank}), InvalidInput);
}

TEST(LocalizationProblem, LineBundleNeedsRankOneAndPositiveTop)
{
    LineBundleComponent ok{1, {1, 1}};
    EXPECT_NO_THROW(LocalizationProblem(1, ok));
    EXPECT_THROW(LocalizationProblem(2, ok), UnsupportedComponent);
    EXPECT_THROW(LocalizationProblem(1, LineBundleComponent{1, {1}}), InvalidInput);
    EXPECT_THROW(LocalizationProblem(1, LineBundleComponent{1, {1, 0}}), InvalidInput);
}

TEST(AssembleF, BlowupMatchesTwoTermFormula)
{
    auto F = assemble_F(builtin_model({"OkPn", 2, 1}));
    ASSERT_EQ(F.size(), 2u);
    for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{0.5, 3.0}, std::pair{1.2, 0.7}})
    {
        std::vector<double> z{a, b};
        EXPECT_NEAR(eval_sum<double>(F, z), oracle::blowup(a, b), 1e-12 * std::abs(oracle::blowup(a, b)));
    }
}

TEST(AssembleF, OkPnMatchesClosedFormOffDiagonal)
{
    for (auto [n, k] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 1}, std::pair{4, 2}, std::pair{4, 3}})
    {
        auto F = assemble_F(builtin_model({"OkPn", n, k}));
        std::vector<double> z;
        for (int i = 0; i < n; ++i)
            z.push_back(0.6 + 0.37 * i);
        double expected = okpn_closed_form(n, k, z);
        EXPECT_NEAR(eval_sum<double>(F, z) / expected, 1.0, 1e-10) << n << "," << k;
    }
}

TEST(AssembleF, GaussianIsSingleTerm)
{
    for (int n = 1; n <= 6; ++n)
    {
        auto F = assemble_F(builtin_model({"Cn", n, 0}));
        ASSERT_EQ(F.size(), 1u);
        std::vector<double> z;
        for (int i = 0; i < n; ++i)
            z.push_back(0.5 + 0.25 * i);
        EXPECT_NEAR(eval_sum<double>(F, z) / oracle::gaussian(z), 1.0, 1e-13);
    }
}

TEST(AssembleF, RepeatedWeightsMergeIntoMultiplicity)
{
    IsolatedFixedPoint p{Covector({-1}), {Covector({1}), Covector({1})}};
    auto F = assemble_F(LocalizationProblem(1, {p}));
    ASSERT_EQ(F.terms()[0].denominator.size(), 1u);
    EXPECT_EQ(F.terms()[0].denominator[0].multiplicity, 2);
}

TEST(LineBundle, ProjectiveLineOMinusOne)
{
    auto form = line_bundle_F(LineBundleComponent{1, {1, 1}});
    EXPECT_EQ(form.to_string(), "(η+1)e^η/η²");
}

TEST(LineBundle, PointBase)
{
    auto form = line_bundle_F(LineBundleComponent{0, {1}});
    EXPECT_EQ(form.to_string(), "e^η/η");
}

TEST(LineBundle, PlaneOMinusTwo)
{
    auto data = projective_line_bundle(2, 2);
    ASSERT_EQ(data.chern_integrals.size(), 3u);
    EXPECT_EQ(data.chern_integrals[0], 4);
    EXPECT_EQ(data.chern_integrals[1], 2);
    EXPECT_EQ(data.chern_integrals[2], 1);
    auto form = line_bundle_F(data);
    EXPECT_EQ(form.numerator, Polynomial(std::vector<Rational>{4, 2, Rational(1, 2)}));
    EXPECT_EQ(form.exp_rate, 1);
    EXPECT_EQ(form.pole_order, 3);
}

TEST(LineBundle, AssembleMatchesClosedForm)
{
    LineBundleComponent data = projective_line_bundle(2, 1);
    auto F = assemble_F(LocalizationProblem(1, data));
    auto form = line_bundle_F(data);
    for (double t : {0.5, 1.0, 2.5})
    {
        std::vector<double> z{t};
        EXPECT_NEAR(eval_sum<double>(F, z), form.evaluate(t), 1e-12 * form.evaluate(t));
    }
}

TEST(Restrict, BlowupDiagonal)
{
    auto form = restrict_diagonal(assemble_F(builtin_model({"OkPn", 2, 1})), diagonal(2));
    EXPECT_EQ(form.to_string(), "(η+1)e^η/η²");
}

TEST(Restrict, OMinusTwoOverP3)
{
    auto form = restrict_diagonal(assemble_F(builtin_model({"OkPn", 4, 2})), diagonal(4));
    auto [scale, canonical] = form.canonical();
    EXPECT_EQ(canonical.to_string(), "(4η³+6η²+6η+3)e^{2η}/η⁴");
}

TEST(Restrict, GaussianC3)
{
    auto form = restrict_diagonal(assemble_F(builtin_model({"Cn", 3, 0})), diagonal(3));
    EXPECT_EQ(form.to_string(), "e^{3η}/η³");
}

TEST(Restrict, ReproducesEveryTableRowUpToScale)
{
    for (const auto& row : table())
    {
        auto form = restrict_diagonal(assemble_F(builtin_model({"OkPn", row.n, row.k})), diagonal(row.n));
        auto [scale, canonical] = form.canonical();
        EXPECT_EQ(canonical.numerator, poly(row.numerator)) << row.n << "," << row.k;
        EXPECT_EQ(canonical.exp_rate, Rational(row.rate));
        EXPECT_EQ(canonical.pole_order, row.pole);
        EXPECT_EQ(scale, row.scale);
    }
}

TEST(Restrict, AgreesWithConfluentEvaluationOnTheRay)
{
    for (const auto& row : table())
    {
        auto F = assemble_F(builtin_model({"OkPn", row.n, row.k}));
        auto form = restrict_diagonal(F, diagonal(row.n));
        for (double t : {0.7, 1.3, 2.2})
        {
            std::vector<double> z(static_cast<std::size_t>(row.n), t);
            double direct = confluent_value<double>(F, z);
            EXPECT_NEAR(direct / form.evaluate(t), 1.0, 1e-9) << row.n << "," << row.k << " at " << t;
        }
    }
}

TEST(Restrict, LineBundleClosedFormAtKEta)
{
    // F(k eta) of the fibre-rotation form equals the diagonal restriction exactly.
    for (const auto& row : table())
    {
        auto form = restrict_diagonal(assemble_F(builtin_model({"OkPn", row.n, row.k})), diagonal(row.n));
        auto lb = line_bundle_F(projective_line_bundle(row.n - 1, row.k));
        for (double t : {0.6, 1.1, 1.9})
            EXPECT_NEAR(lb.evaluate(row.k * t) / form.evaluate(t), 1.0, 1e-12);
    }
}

TEST(Restrict, OffDiagonalRay)
{
    auto F = assemble_F(builtin_model({"Cn", 2, 0}));
    auto form = restrict_diagonal(F, Covector({1, 2}));
    for (double t : {0.5, 1.0, 1.5})
        EXPECT_NEAR(form.evaluate(t), oracle::gaussian({t, 2 * t}), 1e-12 * oracle::gaussian({t, 2 * t}));
    // The blowup has two exponential rates off the diagonal.
    EXPECT_THROW(restrict_diagonal(assemble_F(builtin_model({"OkPn", 2, 1})), Covector({1, 2})),
                 MixedExponentialRates);
}

TEST(Restrict, MixedRatesThrow)
{
    IsolatedFixedPoint a{Covector({-1}), {Covector({1})}};
    IsolatedFixedPoint b{Covector({-2}), {Covector({1})}};
    auto F = assemble_F(LocalizationProblem(1, {a, b}));
    EXPECT_THROW(restrict_diagonal(F, Covector({1})), MixedExponentialRates);
}

TEST(Restrict, UncancelledPoleThrows)
{
    ExpRationalSum F(2, {});
    ExpRationalTerm t;
    t.coefficient = 1;
    t.exponent = Covector({0, 0});
    t.denominator.push_back({Covector({1, -1}), 1});
    F.add(t);
    EXPECT_THROW(restrict_diagonal(F, Covector({1, 1})), ResidualPole);
}

TEST(CriticalPolynomial, HandDifferentiatedRows)
{
    for (const auto& row : table())
    {
        UnivariateForm form{poly(row.numerator), Rational(row.rate), row.pole};
        EXPECT_EQ(critical_polynomial(form), poly(row.critical)) << row.n << "," << row.k;
    }
}

TEST(CriticalPolynomial, GaussianDiagonal)
{
    UnivariateForm form{Polynomial({1}), Rational(2), 2};
    EXPECT_EQ(critical_polynomial(form), Polynomial({-1, 1}));
}

TEST(CriticalPolynomial, VanishesWhereTheDerivativeDoes)
{
    for (const auto& row : table())
    {
        UnivariateForm form{poly(row.numerator), Rational(row.rate), row.pole};
        double h = 1e-5;
        double d = (form.evaluate(row.root + h) - form.evaluate(row.root - h)) / (2 * h);
        EXPECT_NEAR(d / form.evaluate(row.root), 0.0, 1e-8);
    }
}

TEST(Builtins, Validation)
{
    EXPECT_THROW(validate_builtin({"OkPn", 2, 2}), InvalidTwist);
    EXPECT_THROW(validate_builtin({"OkPn", 3, 0}), InvalidTwist);
    EXPECT_THROW(validate_builtin({"Cn", 0, 0}), InvalidInput);
    EXPECT_THROW(validate_builtin({"Torus", 2, 0}), UnsupportedModel);
    EXPECT_NO_THROW(validate_builtin({"OkPn", 4, 3}));
}

TEST(Builtins, LabelsAndListing)
{
    EXPECT_EQ(BuiltinSpec({"OkPn", 2, 1}).label(), "O(-1)->P^1");
    EXPECT_EQ(BuiltinSpec({"Cn", 3, 0}).label(), "C^3");
    EXPECT_EQ(example_builtins().size(), 12u);
}

TEST(UnivariateForm, ReducedCancelsCommonPowers)
{
    UnivariateForm f{Polynomial({0, 0, 2}), Rational(1), 3};
    auto r = f.reduced();
    EXPECT_EQ(r.numerator, Polynomial({2}));
    EXPECT_EQ(r.pole_order, 1);
}
