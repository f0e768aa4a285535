#ifndef SOLITON_EXP_RATIONAL_HPP
#define SOLITON_EXP_RATIONAL_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "soliton/rational.hpp"

namespace soliton {

/** Floating point mode used for transcendental evaluation. */
enum class Precision
{
    Double,     // binary64
    Extended,   // long double (x87 80-bit on x86-64)
};

Precision parse_precision(const std::string& name);
std::string to_string(Precision p);

/** A factor <w, zeta>^multiplicity of a term denominator. */
struct DenominatorFactor
{
    Covector weight;
    int multiplicity = 1;

    bool operator==(const DenominatorFactor&) const = default;
};

/**
 * coefficient * exp(<exponent, zeta>) / prod <w_i, zeta>^{m_i}
 */
struct ExpRationalTerm
{
    Rational coefficient = 1;
    Covector exponent;
    std::vector<DenominatorFactor> denominator;

    std::size_t rank() const noexcept { return exponent.rank(); }
    /** Total denominator degree, the sum of multiplicities. */
    int degree() const;
    /** Throws InvalidInput on rank mismatches, zero weights or bad multiplicities. */
    void validate() const;

    /**
     * Rewrites the denominator with primitive integer covectors whose first
     * nonzero entry is positive, merges repeated factors and sorts them. The
     * extracted scale and sign move into the coefficient; the function is
     * unchanged.
     */
    ExpRationalTerm canonical() const;

    bool operator==(const ExpRationalTerm&) const = default;
    bool operator<(const ExpRationalTerm& other) const;
};

/** A finite sum of exponential-rational terms over a common torus rank. */
class ExpRationalSum
{
    public:
        ExpRationalSum() = default;
        ExpRationalSum(std::size_t rank, std::vector<ExpRationalTerm> terms);

        std::size_t rank() const noexcept { return rank_; }
        const std::vector<ExpRationalTerm>& terms() const noexcept { return terms_; }
        std::size_t size() const noexcept { return terms_.size(); }
        void add(ExpRationalTerm term);
        /** Largest total denominator degree over the terms. */
        int max_degree() const;

        /**
         * Canonical multiset form: canonical terms, identical shapes merged by
         * adding coefficients, zero terms dropped, sorted.
         */
        ExpRationalSum canonical() const;

        /** Exact equality of canonical forms. */
        bool equivalent_to(const ExpRationalSum& other) const;

    private:
        std::size_t rank_ = 0;
        std::vector<ExpRationalTerm> terms_;
};

/**
 * Relative threshold below which a pairing <w, zeta> is treated as exactly
 * zero: |<w,zeta>| <= tol * |w|_1 * |zeta|_inf.
 */
template <typename Real>
constexpr Real default_vanish_tolerance()
{
    return 64 * std::numeric_limits<Real>::epsilon();
}

template <typename Real>
bool pairing_vanishes(const Covector& w, std::span<const Real> zeta, Real tol = default_vanish_tolerance<Real>());

/** Evaluates one term; throws SingularDenominator if a factor vanishes at zeta. */
template <typename Real>
Real eval_term(const ExpRationalTerm& term, std::span<const Real> zeta);

/** Termwise evaluation; only valid away from the confluent locus. */
template <typename Real>
Real eval_sum(const ExpRationalSum& sum, std::span<const Real> zeta);

/** True if no denominator covector of the sum vanishes at zeta. */
template <typename Real>
bool is_nonsingular(const ExpRationalSum& sum, std::span<const Real> zeta);

}   // namespace soliton

#endif
