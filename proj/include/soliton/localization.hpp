#ifndef SOLITON_LOCALIZATION_HPP
#define SOLITON_LOCALIZATION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "soliton/exp_rational.hpp"
#include "soliton/polynomial.hpp"
#include "soliton/rational.hpp"

namespace soliton {

/**
 * An isolated fixed point of the torus action: the moment value mu(p) and
 * the isotropy weights of the tangent representation, with multiplicity.
 * The Hamiltonian of zeta at the point is <mu(p), zeta>.
 */
struct IsolatedFixedPoint
{
    Covector moment_value;
    std::vector<Covector> weights;
};

/**
 * The zero section D of a negative line bundle L over a Fano base, with the
 * fibre-rotating circle. chern_integrals[i] is the intersection number
 * int_D c1(K_D^{-1} (x) L)^i c1(L*)^{n-i}, i = 0..n, n = base_dim.
 */
struct LineBundleComponent
{
    int base_dim = 0;
    std::vector<Integer> chern_integrals;
};

/** Generators of a polyhedral cone in t* (V-representation). */
struct ConeDescription
{
    std::size_t rank = 0;
    std::vector<Covector> generators;

    bool trivial() const noexcept { return generators.empty(); }
};

/**
 * Fixed point data of a torus action with compact fixed point set. Either a
 * list of isolated fixed points, or a single line-bundle component (rank 1).
 * An explicit asymptotic cone may be attached; otherwise it is derived from
 * the fixed point data where needed.
 */
class LocalizationProblem
{
    public:
        LocalizationProblem(std::size_t rank, std::vector<IsolatedFixedPoint> points,
                            std::optional<ConeDescription> cone = std::nullopt);
        LocalizationProblem(std::size_t rank, LineBundleComponent component,
                            std::optional<ConeDescription> cone = std::nullopt);

        std::size_t rank() const noexcept { return rank_; }
        bool has_line_bundle() const noexcept { return std::holds_alternative<LineBundleComponent>(components_); }
        const std::vector<IsolatedFixedPoint>& fixed_points() const;
        const LineBundleComponent& line_bundle() const;
        const std::optional<ConeDescription>& cone() const noexcept { return cone_; }

        /** Ambient complex dimension. */
        std::size_t dimension() const;

    private:
        void validate() const;

        std::size_t rank_;
        std::variant<std::vector<IsolatedFixedPoint>, LineBundleComponent> components_;
        std::optional<ConeDescription> cone_;
};

/**
 * F(eta) = poly(eta) * exp(rate * eta) / eta^pole_order, exact rational data.
 */
struct UnivariateForm
{
    Polynomial numerator;
    Rational exp_rate = 0;
    int pole_order = 0;

    /** Cancels common powers of eta between numerator and denominator. */
    UnivariateForm reduced() const;

    /**
     * Splits off the rational scale: returns (scale, form) with a primitive
     * integer numerator having positive leading coefficient.
     */
    std::pair<Rational, UnivariateForm> canonical() const;

    template <typename Real>
    Real evaluate(Real eta) const
    {
        Real den = 1;
        for (int i = 0; i < pole_order; ++i)
            den *= eta;
        return numerator.evaluate(eta) * std::exp(to_real<Real>(exp_rate) * eta) / den;
    }

    /** Display form such as "(η+1)e^η/η²". */
    std::string to_string() const;

    bool operator==(const UnivariateForm&) const = default;
};

/** Localization sum: one term exp(-<mu,zeta>)/prod <w,zeta> per fixed point. */
ExpRationalSum assemble_F(const LocalizationProblem& problem);

/** (sum_i a_i eta^i / i!) e^eta / eta^{n+1}. */
UnivariateForm line_bundle_F(const LineBundleComponent& data);

/**
 * Intersection data for L = O(-k) over P^m: a_i = (m+1-k)^i k^{m-i}.
 * Requires 0 < k and m >= 0.
 */
LineBundleComponent projective_line_bundle(int m, int k);

/**
 * Exact limit of F(eta * direction) as a univariate form, computed by an
 * exact eps-expansion around the ray. Throws ResidualPole if poles do not
 * cancel and MixedExponentialRates if more than one exponential survives.
 */
UnivariateForm restrict_diagonal(const ExpRationalSum& F, const Covector& direction);

/**
 * Primitive integer numerator of dF/deta after clearing exp(c eta)/eta^{m+1}.
 * Positive leading coefficient.
 */
Polynomial critical_polynomial(const UnivariateForm& F);

struct BuiltinSpec
{
    std::string name;   // "Cn" or "OkPn"
    int n = 0;
    int k = 0;

    std::string label() const;
};

/**
 * Cn: C^n with the diagonal torus. OkPn: total space of O(-k) over P^{n-1}
 * with the torus induced from GL(n), 0 < k < n.
 */
LocalizationProblem builtin_model(const BuiltinSpec& spec);

/** Validates a builtin spec; throws UnsupportedModel or InvalidTwist. */
void validate_builtin(const BuiltinSpec& spec);

/** Every builtin model listed by the command line tool's models verb. */
std::vector<BuiltinSpec> example_builtins();

}   // namespace soliton

#endif
