#include "soliton/surface.hpp"

#include <algorithm>
#include <numeric>

#include "soliton/errors.hpp"

namespace soliton {

void CyclicQuotient::validate() const
{
    if (!(p > q && q > 0))
        throw InvalidInput("cyclic quotient needs p > q > 0");
    if (std::gcd(p, q) != 1)
        throw InvalidInput("cyclic quotient needs gcd(p, q) = 1");
}

HJExpansion hj_expand(const CyclicQuotient& c, HJOrientation orientation)
{
    c.validate();
    HJExpansion out;
    out.orientation = orientation;
    long a = orientation == HJOrientation::POverQ ? c.p : c.q;
    long b = orientation == HJOrientation::POverQ ? c.q : c.p;
    // a/b = r - 1/(b/(r*b - a))
    while (true)
    {
        long r = (a + b - 1) / b;
        out.coefficients.push_back(r);
        long rest = r * b - a;
        if (rest == 0)
            break;
        a = b;
        b = rest;
    }
    out.flagged = std::any_of(out.coefficients.begin(), out.coefficients.end(), [](long r) { return r < 2; });
    return out;
}

std::pair<Integer, Integer> hj_value(const std::vector<long>& coefficients)
{
    if (coefficients.empty())
        throw InvalidInput("empty Hirzebruch-Jung expansion");
    // Evaluate from the tail: value = r_j - 1/value.
    Rational value(coefficients.back());
    for (auto it = coefficients.rbegin() + 1; it != coefficients.rend(); ++it)
    {
        if (value == 0)
            throw InvalidInput("continued fraction has a zero tail");
        value = Rational(*it) - 1 / value;
    }
    return {boost::multiprecision::numerator(value), boost::multiprecision::denominator(value)};
}

std::size_t StarGraph::vertex_count() const
{
    std::size_t n = 1;
    for (const auto& chain : branches)
        n += chain.size();
    return n;
}

void StarGraph::validate() const
{
    if (b < 1)
        throw InvalidInput("central weight b must be at least 1");
    if (genus < 0)
        throw InvalidInput("genus must be non-negative");
    for (const auto& chain : branches)
    {
        if (chain.empty())
            throw InvalidInput("empty branch chain");
        for (long w : chain)
            if (w < 2)
                throw InvalidInput("branch weights must be at least 2");
    }
}

Rational star_criterion(const StarGraph& g)
{
    g.validate();
    Rational total(g.b);
    for (const auto& chain : g.branches)
    {
        auto [d, e] = hj_value(chain);
        total -= Rational(e, d);
    }
    return total;
}

bool is_negative_definite(const StarGraph& g)
{
    return star_criterion(g) > 0;
}

std::vector<std::vector<long>> build_intersection_matrix(const StarGraph& g)
{
    g.validate();
    std::size_t n = g.vertex_count();
    std::vector<std::vector<long>> Q(n, std::vector<long>(n, 0));
    Q[0][0] = -g.b;
    std::size_t index = 1;
    for (const auto& chain : g.branches)
    {
        for (std::size_t j = 0; j < chain.size(); ++j, ++index)
        {
            Q[index][index] = -chain[j];
            std::size_t prev = j == 0 ? 0 : index - 1;
            Q[index][prev] = Q[prev][index] = 1;
        }
    }
    return Q;
}

std::vector<Integer> leading_minors_of_negation(const std::vector<std::vector<long>>& Q)
{
    std::size_t n = Q.size();
    std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
    {
        if (Q[i].size() != n)
            throw InvalidInput("intersection matrix is not square");
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = -Q[i][j];
    }
    // Bareiss without pivoting: m[k][k] after step k is the (k+1)-th leading minor.
    std::vector<Integer> minors;
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k)
    {
        minors.push_back(m[k][k]);
        if (m[k][k] == 0)
        {
            minors.resize(n, Integer(0));
            break;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return minors;
}

bool minors_negative_definite(const std::vector<std::vector<long>>& Q)
{
    auto minors = leading_minors_of_negation(Q);
    return std::all_of(minors.begin(), minors.end(), [](const Integer& d) { return d > 0; });
}

namespace {

struct CanonicalVisitor
{
    CanonicalModelVerdict operator()(const CyclicQuotient& c) const
    {
        auto expansion = hj_expand(c);
        bool admits = std::all_of(expansion.coefficients.begin(), expansion.coefficients.end(),
                                  [](long r) { return r > 2; });
        if (admits)
            return {true, "minimal resolution"};
        return {false, "minimal resolution contains a (-2)-curve"};
    }

    CanonicalModelVerdict operator()(const NegLineBundleOverCurve& l) const
    {
        if (l.genus < 1)
            throw InvalidConeData("line bundle case needs a base curve of genus at least 1");
        if (l.degree < 1)
            throw InvalidConeData("line bundle must have negative degree");
        return {true, "total space of L"};
    }

    CanonicalModelVerdict operator()(const StarGraph& g) const
    {
        if (g.genus < 1)
            throw InvalidConeData("star graph case needs a central curve of genus at least 1");
        if (!is_negative_definite(g))
            return {false, "intersection matrix is not negative definite"};
        for (const auto& chain : g.branches)
            for (long w : chain)
                if (w < 3)
                    return {false, "minimal good resolution contains a (-2)-curve"};
        return {true, "minimal good resolution"};
    }
};

}   // namespace

CanonicalModelVerdict smooth_canonical_model(const SurfaceCone& cone)
{
    return std::visit(CanonicalVisitor{}, cone);
}

std::string to_string(ShrinkingManifold m)
{
    switch (m)
    {
        case ShrinkingManifold::C2: return "C2";
        case ShrinkingManifold::BlowupC2: return "BlowupC2";
        case ShrinkingManifold::None: return "None";
    }
    return "None";
}

ShrinkingVerdict shrinking_admissible(const std::vector<long>& self_intersections)
{
    for (long v : self_intersections)
        if (v > -1)
            throw InvalidInput("self-intersections of exceptional curves must be <= -1");
    // Past the first blowup every configuration carries a curve of self-intersection <= -2.
    if (self_intersections.size() >= 2
        && std::all_of(self_intersections.begin(), self_intersections.end(), [](long v) { return v == -1; }))
        throw InvalidInput("two or more exceptional curves of a blowup of C2 include one with self-intersection <= -2");
    if (self_intersections.empty())
        return {true, ShrinkingManifold::C2};
    if (self_intersections.size() == 1 && self_intersections[0] == -1)
        return {true, ShrinkingManifold::BlowupC2};
    return {false, ShrinkingManifold::None};
}

}   // namespace soliton
