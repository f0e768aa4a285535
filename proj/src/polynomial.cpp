#include "soliton/polynomial.hpp"

#include <sstream>

namespace soliton {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
{
    trim();
}

Polynomial::Polynomial(std::initializer_list<long> coeffs)
{
    for (long c : coeffs)
        coeffs_.emplace_back(c);
    trim();
}

Polynomial Polynomial::monomial(const Rational& c, int degree)
{
    std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
    v.back() = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

Rational Polynomial::coeff(int k) const
{
    if (k < 0 || k > degree())
        return 0;
    return coeffs_[static_cast<std::size_t>(k)];
}

Polynomial Polynomial::operator+(const Polynomial& other) const
{
    Polynomial out = *this;
    out += other;
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    if (other.coeffs_.size() > coeffs_.size())
        coeffs_.resize(other.coeffs_.size(), Rational(0));
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i)
        coeffs_[i] += other.coeffs_[i];
    trim();
    return *this;
}

Polynomial Polynomial::operator-(const Polynomial& other) const
{
    return *this + other * Rational(-1);
}

Polynomial Polynomial::operator*(const Polynomial& other) const
{
    if (is_zero() || other.is_zero())
        return {};
    std::vector<Rational> v(coeffs_.size() + other.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
            v[i + j] += coeffs_[i] * other.coeffs_[j];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Rational& scale) const
{
    std::vector<Rational> v = coeffs_;
    for (auto& c : v)
        c *= scale;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::derivative() const
{
    if (coeffs_.size() <= 1)
        return {};
    std::vector<Rational> v;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        v.push_back(coeffs_[i] * Rational(static_cast<long>(i)));
    return Polynomial(std::move(v));
}

Polynomial Polynomial::shifted(int k) const
{
    if (is_zero() || k == 0)
        return *this;
    std::vector<Rational> v;
    if (k > 0)
    {
        v.assign(static_cast<std::size_t>(k), Rational(0));
        v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    }
    else
    {
        v.assign(coeffs_.begin() + std::min<std::size_t>(coeffs_.size(), static_cast<std::size_t>(-k)),
                 coeffs_.end());
    }
    return Polynomial(std::move(v));
}

int Polynomial::low_order() const
{
    int k = 0;
    while (k <= degree() && coeffs_[static_cast<std::size_t>(k)] == 0)
        ++k;
    return is_zero() ? 0 : k;
}

std::pair<Rational, Polynomial> Polynomial::primitive_part() const
{
    if (is_zero())
        return {Rational(0), *this};
    Integer den_lcm = 1;
    for (const auto& c : coeffs_)
        den_lcm = lcm(den_lcm, boost::multiprecision::denominator(c));
    Integer g = 0;
    std::vector<Integer> ints;
    for (const auto& c : coeffs_)
    {
        Integer v = boost::multiprecision::numerator(Rational(c * Rational(den_lcm)));
        ints.push_back(v);
        g = gcd(g, v);
    }
    if (ints.back() < 0)
        g = -g;
    std::vector<Rational> prim;
    for (const auto& v : ints)
        prim.emplace_back(Integer(v / g));
    return {Rational(g, den_lcm), Polynomial(std::move(prim))};
}

std::string superscript(int value)
{
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string s = std::to_string(value);
    std::string out;
    for (char c : s)
        out += (c == '-') ? std::string("⁻") : std::string(digits[c - '0']);
    return out;
}

std::string Polynomial::to_string(const std::string& var) const
{
    if (is_zero())
        return "0";
    std::ostringstream oss;
    bool first = true;
    for (int k = degree(); k >= 0; --k)
    {
        Rational c = coeffs_[static_cast<std::size_t>(k)];
        if (c == 0)
            continue;
        bool negative = c < 0;
        Rational mag = negative ? Rational(-c) : c;
        if (negative)
            oss << "-";
        else if (!first)
            oss << "+";
        first = false;
        bool unit = (mag == 1);
        if (!unit || k == 0)
        {
            std::string m = soliton::to_string(mag);
            bool fraction = m.find('/') != std::string::npos;
            if (fraction && k > 0)
                oss << "(" << m << ")";
            else
                oss << m;
        }
        if (k >= 1)
            oss << var;
        if (k >= 2)
            oss << superscript(k);
    }
    return oss.str();
}

}   // namespace soliton
