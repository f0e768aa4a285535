#ifndef SOLITON_RATIONAL_HPP
#define SOLITON_RATIONAL_HPP

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace soliton {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

/** Parses "p/q", "n", or a finite decimal such as "-0.25" exactly. */
Rational parse_rational(const std::string& text);

/** "p/q" in lowest terms, or "p" when the denominator is one. */
std::string to_string(const Rational& value);

/** Correctly rounded when numerator and denominator fit the mantissa of Real. */
template <typename Real>
Real to_real(const Rational& value)
{
    const mpq_t& q = value.backend().data();
    if (mpz_sizeinbase(mpq_numref(q), 2) <= std::numeric_limits<Real>::digits
        && mpz_sizeinbase(mpq_denref(q), 2) <= std::numeric_limits<Real>::digits
        && mpz_fits_slong_p(mpq_numref(q)) && mpz_fits_slong_p(mpq_denref(q)))
        return static_cast<Real>(mpz_get_si(mpq_numref(q))) / static_cast<Real>(mpz_get_si(mpq_denref(q)));
    return static_cast<Real>(value);
}

/**
 * A rational element of the dual Lie algebra t*, i.e. a linear functional on
 * the Lie algebra of a rank-s torus. Used for isotropy weights, moment values
 * and facet normals alike.
 */
class Covector
{
    public:
        Covector() = default;
        explicit Covector(std::vector<Rational> coords) : coords_(std::move(coords)) {}
        Covector(std::initializer_list<long> coords);

        /** The i-th standard dual basis vector of t* for a rank-s torus. */
        static Covector basis(std::size_t rank, std::size_t i);
        static Covector zero(std::size_t rank);

        std::size_t rank() const noexcept { return coords_.size(); }
        const Rational& operator[](std::size_t i) const { return coords_[i]; }
        Rational& operator[](std::size_t i) { return coords_[i]; }
        const std::vector<Rational>& coords() const noexcept { return coords_; }

        bool is_zero() const;

        /** Exact pairing with a rational vector of the same length. */
        Rational pair(const Covector& other) const;

        /** Pairing with a real point of the Lie algebra. */
        template <typename Real>
        Real pair(std::span<const Real> zeta) const
        {
            Real sum = 0;
            for (std::size_t i = 0; i < coords_.size(); ++i)
                sum += to_real<Real>(coords_[i]) * zeta[i];
            return sum;
        }

        /** Sum of absolute values of the coordinates, as a double. */
        double l1_norm() const;

        /**
         * Positive rational scale c with (*this) = c * primitive, where
         * primitive has coprime integer coordinates. Zero covectors return
         * (0, *this).
         */
        std::pair<Rational, Covector> primitive_part() const;

        Covector operator+(const Covector& other) const;
        Covector operator-(const Covector& other) const;
        Covector operator-() const;
        Covector operator*(const Rational& scale) const;

        /** Permutes coordinates: result[perm[i]] = (*this)[i]. */
        Covector permuted(std::span<const std::size_t> perm) const;

        bool operator==(const Covector& other) const { return coords_ == other.coords_; }
        bool operator!=(const Covector& other) const { return !(*this == other); }
        bool operator<(const Covector& other) const { return coords_ < other.coords_; }

        std::string to_string() const;

    private:
        std::vector<Rational> coords_;
};

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/** Determinant of a square rational matrix given by rows. */
Rational determinant(const std::vector<Covector>& rows);

/** |det| of a square rational matrix given by rows; zero when singular. */
Rational abs_determinant(const std::vector<Covector>& rows);

/**
 * Solves rows * x = rhs exactly. Returns false when the system is singular.
 */
bool solve_exact(const std::vector<Covector>& rows, const std::vector<Rational>& rhs,
                 std::vector<Rational>& solution);

}   // namespace soliton

#endif
