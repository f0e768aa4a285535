#ifndef SOLITON_LAURENT_HPP
#define SOLITON_LAURENT_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soliton/exp_rational.hpp"

namespace soliton {

/**
 * Truncated Laurent series sum_{k=min_order}^{max_order} c_k eps^k. The
 * truncation order is part of the value: products and sums are truncated to
 * the smaller of the operands' max orders and never beyond.
 */
template <typename Real>
class LaurentSeries
{
    public:
        LaurentSeries() = default;
        LaurentSeries(int min_order, std::vector<Real> coeffs)
            : min_order_(min_order), coeffs_(std::move(coeffs)) {}

        int min_order() const noexcept { return min_order_; }
        int max_order() const noexcept { return min_order_ + static_cast<int>(coeffs_.size()) - 1; }
        const std::vector<Real>& coeffs() const noexcept { return coeffs_; }

        /** Coefficient of eps^k; zero below min_order. k must not exceed max_order. */
        Real coefficient(int k) const;

        LaurentSeries operator+(const LaurentSeries& other) const;
        LaurentSeries operator*(const LaurentSeries& other) const;

    private:
        int min_order_ = 0;
        std::vector<Real> coeffs_;
};

/**
 * Expands sum(zeta + eps*delta) in eps through eps^order. Each term becomes
 * (rational Laurent part) * exp(<a,zeta>) * exp(eps <a,delta>); pairings that
 * vanish at zeta contribute the pole eps^{-m} <w,delta>^{-m}.
 *
 * Throws NonGenericDirection when some w vanishing at zeta also vanishes on delta.
 */
template <typename Real>
LaurentSeries<Real> laurent_expand(const ExpRationalSum& sum, std::span<const Real> zeta,
                                   std::span<const Real> delta, int order);

struct ConfluentOptions
{
    /** Expansion order; negative means max denominator degree of the sum. */
    int order = -1;
    /** Poles count as cancelled when |c_k| <= pole_tol * (1 + max_{j>=0} |c_j|). */
    double pole_tol = 1e-9;
    std::uint64_t seed = 0x5eedf00dULL;
    int max_attempts = 16;
};

/**
 * Draws a small random rational direction that is generic for the
 * denominator covectors vanishing at zeta. If zeta is nonsingular every
 * direction is generic and the first draw is returned.
 */
template <typename Real>
std::vector<Real> generic_direction(const ExpRationalSum& sum, std::span<const Real> zeta,
                                    std::uint64_t seed, int max_attempts = 16);

template <typename Real>
struct ConfluentExpansion
{
    LaurentSeries<Real> series;
    std::vector<Real> direction;
};

/** Expansion along a generic direction with the pole-cancellation check applied. */
template <typename Real>
ConfluentExpansion<Real> confluent_expansion(const ExpRationalSum& sum, std::span<const Real> zeta,
                                             const ConfluentOptions& options = {});

/**
 * Value of the sum at zeta, including points where individual terms are
 * singular or nearly singular but the sum is finite. Dispatches on
 * evaluation_path. Throws ResidualPole if the poles do not cancel.
 */
template <typename Real>
Real confluent_value(const ExpRationalSum& sum, std::span<const Real> zeta,
                     const ConfluentOptions& options = {});

/**
 * Direct: every denominator covector is far from zero at zeta and the
 * termwise sum is accurate. Laurent: the small ones vanish exactly.
 * Contour: some are small but nonzero, where the termwise sum cancels
 * catastrophically, and a contour circle is available.
 */
enum class EvaluationPath
{
    Direct,
    Laurent,
    Contour,
};

std::string to_string(EvaluationPath path);

/**
 * Relative distance below which the termwise sum is considered inaccurate:
 * (eps * 1e13)^(1/(m+2)) for the largest denominator degree m, so that
 * values, gradients and Hessians keep about 13 digits.
 */
template <typename Real>
Real near_confluence_threshold(const ExpRationalSum& sum);

/** min over denominator covectors of |<w,zeta>| / (|w|_1 max|zeta_i|). */
template <typename Real>
Real singular_distance(const ExpRationalSum& sum, std::span<const Real> zeta);

/**
 * True when the poles of the terms along the hyperplane <w,.> = 0 cancel in
 * the sum, checked by a Laurent expansion at a generic point of it.
 */
bool removable_hyperplane(const ExpRationalSum& sum, const Covector& w);

struct ContourOptions
{
    int nodes = 64;
    std::uint64_t seed = 0xc1c1e5ULL;
};

/**
 * Circle zeta + radius * e^{i theta} * direction in complex space. It
 * encloses only removable hyperplanes, so the sum is holomorphic on the
 * disc and its mean over equispaced nodes is its value at zeta up to an
 * aliasing error of order radius^nodes. No node comes near the singular
 * hyperplane of any single term.
 */
struct ContourCircle
{
    std::vector<long double> center;
    std::vector<long double> direction;
    long double radius = 0;
    int nodes = 0;
    /** Smallest node distance to a hyperplane, measured like singular_distance. */
    long double clearance = 0;

    /** Node j at angle 2 pi (j + 1/2) / nodes. */
    std::vector<std::complex<long double>> node(int j) const;
};

template <typename Real>
struct EvaluationPlan
{
    EvaluationPath path = EvaluationPath::Direct;
    /** Set when path is Contour. */
    std::optional<ContourCircle> circle;
};

template <typename Real>
EvaluationPlan<Real> plan_evaluation(const ExpRationalSum& sum, std::span<const Real> zeta,
                                     const ContourOptions& options = {});

template <typename Real>
EvaluationPath evaluation_path(const ExpRationalSum& sum, std::span<const Real> zeta)
{
    return plan_evaluation<Real>(sum, zeta).path;
}

/** One term at a complex point, in extended precision. */
std::complex<long double> eval_term_complex(const ExpRationalTerm& term,
                                            std::span<const std::complex<long double>> z);

/** Mean of the sum over the circle nodes. */
long double contour_value(const ExpRationalSum& sum, const ContourCircle& circle);

/** Throws ResidualPole unless all negative-order coefficients are negligible. */
template <typename Real>
void check_pole_cancellation(const LaurentSeries<Real>& series, double pole_tol);

}   // namespace soliton

#endif
