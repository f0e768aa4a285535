#include "soliton/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

bool is_integer_literal(const std::string& s)
{
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start >= s.size())
        return false;
    return std::all_of(s.begin() + start, s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Integer parse_integer(const std::string& s)
{
    if (!is_integer_literal(s))
        throw InvalidInput("not an integer: '" + s + "'");
    return Integer(s[0] == '+' ? s.substr(1) : s);
}

}   // namespace

Rational parse_rational(const std::string& raw)
{
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            text.push_back(c);
    if (text.empty())
        throw InvalidInput("empty rational literal");

    auto slash = text.find('/');
    if (slash != std::string::npos)
    {
        Integer num = parse_integer(text.substr(0, slash));
        Integer den = parse_integer(text.substr(slash + 1));
        if (den == 0)
            throw InvalidInput("zero denominator in '" + raw + "'");
        return Rational(num, den);
    }

    auto dot = text.find('.');
    if (dot != std::string::npos)
    {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (whole == "-" || whole == "+" || whole.empty())
            whole += "0";
        if (frac.empty() || !std::all_of(frac.begin(), frac.end(),
                                         [](unsigned char c) { return std::isdigit(c); }))
            throw InvalidInput("malformed decimal: '" + raw + "'");
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        Rational value(parse_integer(whole));
        Rational tail(Integer(frac), scale);
        return negative ? value - tail : value + tail;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& value)
{
    Integer num = boost::multiprecision::numerator(value);
    Integer den = boost::multiprecision::denominator(value);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

Covector::Covector(std::initializer_list<long> coords)
{
    coords_.reserve(coords.size());
    for (long c : coords)
        coords_.emplace_back(c);
}

Covector Covector::basis(std::size_t rank, std::size_t i)
{
    Covector out = zero(rank);
    out.coords_[i] = 1;
    return out;
}

Covector Covector::zero(std::size_t rank)
{
    return Covector(std::vector<Rational>(rank, Rational(0)));
}

bool Covector::is_zero() const
{
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c == 0; });
}

Rational Covector::pair(const Covector& other) const
{
    if (other.rank() != rank())
        throw InvalidInput("covector rank mismatch in pairing");
    Rational sum = 0;
    for (std::size_t i = 0; i < coords_.size(); ++i)
        sum += coords_[i] * other.coords_[i];
    return sum;
}

double Covector::l1_norm() const
{
    double sum = 0.0;
    for (const auto& c : coords_)
        sum += std::fabs(static_cast<double>(c));
    return sum;
}

std::pair<Rational, Covector> Covector::primitive_part() const
{
    if (is_zero())
        return {Rational(0), *this};
    Integer den_lcm = 1;
    for (const auto& c : coords_)
        den_lcm = lcm(den_lcm, boost::multiprecision::denominator(c));
    std::vector<Integer> ints;
    ints.reserve(coords_.size());
    Integer g = 0;
    for (const auto& c : coords_)
    {
        Rational scaled = c * Rational(den_lcm);
        Integer v = boost::multiprecision::numerator(scaled);
        ints.push_back(v);
        g = gcd(g, v);
    }
    std::vector<Rational> prim;
    prim.reserve(ints.size());
    for (const auto& v : ints)
        prim.emplace_back(Integer(v / g));
    return {Rational(g, den_lcm), Covector(std::move(prim))};
}

Covector Covector::operator+(const Covector& other) const
{
    if (other.rank() != rank())
        throw InvalidInput("covector rank mismatch");
    Covector out = *this;
    for (std::size_t i = 0; i < coords_.size(); ++i)
        out.coords_[i] += other.coords_[i];
    return out;
}

Covector Covector::operator-(const Covector& other) const
{
    return *this + (-other);
}

Covector Covector::operator-() const
{
    Covector out = *this;
    for (auto& c : out.coords_)
        c = -c;
    return out;
}

Covector Covector::operator*(const Rational& scale) const
{
    Covector out = *this;
    for (auto& c : out.coords_)
        c *= scale;
    return out;
}

Covector Covector::permuted(std::span<const std::size_t> perm) const
{
    Covector out = zero(rank());
    for (std::size_t i = 0; i < coords_.size(); ++i)
        out.coords_[perm[i]] = coords_[i];
    return out;
}

std::string Covector::to_string() const
{
    std::ostringstream oss;
    oss << "(";
    for (std::size_t i = 0; i < coords_.size(); ++i)
        oss << (i ? "," : "") << soliton::to_string(coords_[i]);
    oss << ")";
    return oss.str();
}

Integer gcd(const Integer& a, const Integer& b)
{
    return boost::multiprecision::gcd(a, b);
}

Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0)
        return 0;
    return boost::multiprecision::abs(a / gcd(a, b) * b);
}

namespace {

// Gaussian elimination on an augmented rational matrix; returns rank and
// leaves the matrix in reduced row echelon form.
std::size_t row_reduce(std::vector<std::vector<Rational>>& m, std::size_t cols, Rational* det)
{
    std::size_t rank = 0;
    if (det)
        *det = 1;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col)
    {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0)
            ++pivot;
        if (pivot == m.size())
        {
            if (det)
                *det = 0;
            continue;
        }
        if (pivot != rank)
        {
            std::swap(m[pivot], m[rank]);
            if (det)
                *det = -*det;
        }
        Rational p = m[rank][col];
        if (det)
            *det *= p;
        for (auto& v : m[rank])
            v /= p;
        for (std::size_t r = 0; r < m.size(); ++r)
        {
            if (r == rank || m[r][col] == 0)
                continue;
            Rational f = m[r][col];
            for (std::size_t c = col; c < m[r].size(); ++c)
                m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

}   // namespace

Rational abs_determinant(const std::vector<Covector>& rows)
{
    return boost::multiprecision::abs(determinant(rows));
}

Rational determinant(const std::vector<Covector>& rows)
{
    std::size_t n = rows.size();
    std::vector<std::vector<Rational>> m;
    for (const auto& r : rows)
    {
        if (r.rank() != n)
            throw InvalidInput("determinant of a non-square matrix");
        m.push_back(r.coords());
    }
    Rational det;
    std::size_t rank = row_reduce(m, n, &det);
    if (rank < n)
        return 0;
    return det;
}

bool solve_exact(const std::vector<Covector>& rows, const std::vector<Rational>& rhs,
                 std::vector<Rational>& solution)
{
    std::size_t n = rows.size();
    std::vector<std::vector<Rational>> m;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (rows[i].rank() != n)
            throw InvalidInput("solve_exact needs a square system");
        auto row = rows[i].coords();
        row.push_back(rhs[i]);
        m.push_back(std::move(row));
    }
    if (row_reduce(m, n, nullptr) < n)
        return false;
    solution.assign(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        solution[i] = m[i][n];
    return true;
}

}   // namespace soliton
