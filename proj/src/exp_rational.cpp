#include "soliton/exp_rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "soliton/errors.hpp"

namespace soliton {

Precision parse_precision(const std::string& name)
{
    if (name == "f64" || name == "double")
        return Precision::Double;
    if (name == "extended" || name == "long")
        return Precision::Extended;
    throw InvalidInput("unknown precision '" + name + "' (expected f64 or extended)");
}

std::string to_string(Precision p)
{
    return p == Precision::Double ? "f64" : "extended";
}

int ExpRationalTerm::degree() const
{
    int d = 0;
    for (const auto& f : denominator)
        d += f.multiplicity;
    return d;
}

void ExpRationalTerm::validate() const
{
    for (const auto& f : denominator)
    {
        if (f.weight.rank() != exponent.rank())
            throw InvalidInput("denominator covector " + f.weight.to_string() + " has wrong rank");
        if (f.weight.is_zero())
            throw InvalidInput("denominator covector must be nonzero");
        if (f.multiplicity < 1)
            throw InvalidInput("denominator multiplicity must be positive");
    }
}

ExpRationalTerm ExpRationalTerm::canonical() const
{
    ExpRationalTerm out;
    out.coefficient = coefficient;
    out.exponent = exponent;
    std::map<Covector, int> merged;
    for (const auto& f : denominator)
    {
        auto [scale, prim] = f.weight.primitive_part();
        std::size_t lead = 0;
        while (lead < prim.rank() && prim[lead] == 0)
            ++lead;
        if (lead < prim.rank() && prim[lead] < 0)
        {
            prim = -prim;
            scale = -scale;
        }
        for (int m = 0; m < f.multiplicity; ++m)
            out.coefficient /= scale;
        merged[prim] += f.multiplicity;
    }
    for (auto& [w, m] : merged)
        out.denominator.push_back({w, m});
    return out;
}

bool ExpRationalTerm::operator<(const ExpRationalTerm& other) const
{
    if (exponent != other.exponent)
        return exponent < other.exponent;
    if (denominator.size() != other.denominator.size())
        return denominator.size() < other.denominator.size();
    for (std::size_t i = 0; i < denominator.size(); ++i)
    {
        if (denominator[i].weight != other.denominator[i].weight)
            return denominator[i].weight < other.denominator[i].weight;
        if (denominator[i].multiplicity != other.denominator[i].multiplicity)
            return denominator[i].multiplicity < other.denominator[i].multiplicity;
    }
    return coefficient < other.coefficient;
}

ExpRationalSum::ExpRationalSum(std::size_t rank, std::vector<ExpRationalTerm> terms)
    : rank_(rank)
{
    if (rank == 0)
        throw InvalidInput("torus rank must be at least 1");
    for (auto& t : terms)
        add(std::move(t));
}

void ExpRationalSum::add(ExpRationalTerm term)
{
    if (term.rank() != rank_)
        throw InvalidInput("term rank " + std::to_string(term.rank()) + " does not match sum rank "
                           + std::to_string(rank_));
    term.validate();
    terms_.push_back(std::move(term));
}

int ExpRationalSum::max_degree() const
{
    int d = 0;
    for (const auto& t : terms_)
        d = std::max(d, t.degree());
    return d;
}

ExpRationalSum ExpRationalSum::canonical() const
{
    std::vector<ExpRationalTerm> canon;
    for (const auto& t : terms_)
        canon.push_back(t.canonical());
    std::sort(canon.begin(), canon.end());
    std::vector<ExpRationalTerm> merged;
    for (auto& t : canon)
    {
        if (!merged.empty() && merged.back().exponent == t.exponent
            && merged.back().denominator == t.denominator)
            merged.back().coefficient += t.coefficient;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const ExpRationalTerm& t) { return t.coefficient == 0; });
    ExpRationalSum out;
    out.rank_ = rank_;
    out.terms_ = std::move(merged);
    return out;
}

bool ExpRationalSum::equivalent_to(const ExpRationalSum& other) const
{
    if (rank_ != other.rank_)
        return false;
    return canonical().terms_ == other.canonical().terms_;
}

template <typename Real>
bool pairing_vanishes(const Covector& w, std::span<const Real> zeta, Real tol)
{
    Real scale = 0;
    for (Real z : zeta)
        scale = std::max(scale, std::abs(z));
    Real value = w.pair<Real>(zeta);
    return std::abs(value) <= tol * static_cast<Real>(w.l1_norm()) * scale;
}

template <typename Real>
Real eval_term(const ExpRationalTerm& term, std::span<const Real> zeta)
{
    if (zeta.size() != term.rank())
        throw InvalidInput("evaluation point has wrong length");
    Real denom = 1;
    for (const auto& f : term.denominator)
    {
        if (pairing_vanishes<Real>(f.weight, zeta))
            throw SingularDenominator(f.weight.to_string(),
                                      "denominator covector " + f.weight.to_string() + " vanishes at the evaluation point");
        Real p = f.weight.pair<Real>(zeta);
        for (int m = 0; m < f.multiplicity; ++m)
            denom *= p;
    }
    return to_real<Real>(term.coefficient) * std::exp(term.exponent.pair<Real>(zeta)) / denom;
}

template <typename Real>
Real eval_sum(const ExpRationalSum& sum, std::span<const Real> zeta)
{
    Real total = 0;
    for (const auto& t : sum.terms())
        total += eval_term<Real>(t, zeta);
    return total;
}

template <typename Real>
bool is_nonsingular(const ExpRationalSum& sum, std::span<const Real> zeta)
{
    for (const auto& t : sum.terms())
        for (const auto& f : t.denominator)
            if (pairing_vanishes<Real>(f.weight, zeta))
                return false;
    return true;
}

#define SOLITON_INSTANTIATE(Real)                                                         \
    template bool pairing_vanishes<Real>(const Covector&, std::span<const Real>, Real);   \
    template Real eval_term<Real>(const ExpRationalTerm&, std::span<const Real>);         \
    template Real eval_sum<Real>(const ExpRationalSum&, std::span<const Real>);           \
    template bool is_nonsingular<Real>(const ExpRationalSum&, std::span<const Real>);

SOLITON_INSTANTIATE(double)
SOLITON_INSTANTIATE(long double)

#undef SOLITON_INSTANTIATE

}   // namespace soliton
