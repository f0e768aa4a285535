#ifndef SOLITON_POLYNOMIAL_HPP
#define SOLITON_POLYNOMIAL_HPP

#include <string>
#include <utility>
#include <vector>

#include "soliton/rational.hpp"

namespace soliton {

/** Dense univariate polynomial with rational coefficients, lowest degree first. */
class Polynomial
{
    public:
        Polynomial() = default;
        explicit Polynomial(std::vector<Rational> coeffs);
        Polynomial(std::initializer_list<long> coeffs);

        static Polynomial monomial(const Rational& c, int degree);

        /** -1 for the zero polynomial. */
        int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
        bool is_zero() const noexcept { return coeffs_.empty(); }
        const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
        Rational coeff(int k) const;
        const Rational& leading() const { return coeffs_.back(); }

        Polynomial operator+(const Polynomial& other) const;
        Polynomial operator-(const Polynomial& other) const;
        Polynomial operator*(const Polynomial& other) const;
        Polynomial operator*(const Rational& scale) const;
        Polynomial& operator+=(const Polynomial& other);
        bool operator==(const Polynomial& other) const { return coeffs_ == other.coeffs_; }

        Polynomial derivative() const;
        /** Multiplies by x^k. */
        Polynomial shifted(int k) const;
        /** Largest k with x^k dividing this polynomial (0 for the zero polynomial). */
        int low_order() const;

        /**
         * Splits this polynomial as scale * primitive where primitive has
         * coprime integer coefficients and a positive leading coefficient.
         */
        std::pair<Rational, Polynomial> primitive_part() const;

        template <typename Real>
        Real evaluate(Real x) const
        {
            Real acc = 0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
                acc = acc * x + to_real<Real>(*it);
            return acc;
        }

        /** e.g. "2η³-3η-3" with the given variable name. */
        std::string to_string(const std::string& var = "η") const;

    private:
        void trim();
        std::vector<Rational> coeffs_;
};

/** Unicode superscript digits for exponent display. */
std::string superscript(int value);

}   // namespace soliton

#endif
