#include "soliton/localization.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "soliton/errors.hpp"

namespace soliton {

LocalizationProblem::LocalizationProblem(std::size_t rank, std::vector<IsolatedFixedPoint> points,
                                         std::optional<ConeDescription> cone)
    : rank_(rank), components_(std::move(points)), cone_(std::move(cone))
{
    validate();
}

LocalizationProblem::LocalizationProblem(std::size_t rank, LineBundleComponent component,
                                         std::optional<ConeDescription> cone)
    : rank_(rank), components_(std::move(component)), cone_(std::move(cone))
{
    validate();
}

const std::vector<IsolatedFixedPoint>& LocalizationProblem::fixed_points() const
{
    if (has_line_bundle())
        throw InvalidInput("problem has a line-bundle component, not isolated fixed points");
    return std::get<std::vector<IsolatedFixedPoint>>(components_);
}

const LineBundleComponent& LocalizationProblem::line_bundle() const
{
    if (!has_line_bundle())
        throw InvalidInput("problem has isolated fixed points, not a line-bundle component");
    return std::get<LineBundleComponent>(components_);
}

std::size_t LocalizationProblem::dimension() const
{
    if (has_line_bundle())
        return static_cast<std::size_t>(line_bundle().base_dim) + 1;
    return fixed_points().front().weights.size();
}

void LocalizationProblem::validate() const
{
    if (rank_ == 0)
        throw InvalidInput("torus rank must be at least 1");
    if (cone_)
    {
        if (cone_->rank != rank_)
            throw InvalidInput("cone rank does not match torus rank");
        for (const auto& g : cone_->generators)
            if (g.rank() != rank_ || g.is_zero())
                throw InvalidInput("cone generators must be nonzero covectors of the torus rank");
    }
    if (has_line_bundle())
    {
        const auto& lb = line_bundle();
        if (rank_ != 1)
            throw UnsupportedComponent("line-bundle components are supported for rank-1 tori only");
        if (lb.base_dim < 0)
            throw InvalidInput("base dimension must be nonnegative");
        if (lb.chern_integrals.size() != static_cast<std::size_t>(lb.base_dim) + 1)
            throw InvalidInput("expected base_dim + 1 Chern integrals");
        if (lb.chern_integrals.back() <= 0)
            throw InvalidInput("top anticanonical intersection number must be positive");
        return;
    }
    const auto& points = fixed_points();
    if (points.empty())
        throw InvalidInput("localization problem needs at least one fixed point");
    std::size_t n = points.front().weights.size();
    if (n == 0)
        throw InvalidInput("fixed points need at least one isotropy weight");
    for (const auto& p : points)
    {
        if (p.moment_value.rank() != rank_)
            throw InvalidInput("moment value " + p.moment_value.to_string() + " has wrong rank");
        if (p.weights.size() != n)
            throw InvalidInput("all fixed points must carry the same number of weights");
        for (const auto& w : p.weights)
        {
            if (w.rank() != rank_)
                throw InvalidInput("weight " + w.to_string() + " has wrong rank");
            if (w.is_zero())
                throw InvalidInput("isotropy weights must be nonzero");
        }
    }
}

namespace {

Rational factorial(int n)
{
    Rational f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

std::string exponential_string(const Rational& rate)
{
    if (rate == 0)
        return "";
    if (rate == 1)
        return "e^η";
    if (rate == -1)
        return "e^{-η}";
    std::string r = to_string(rate);
    if (r.find('/') != std::string::npos)
        r = "(" + r + ")";
    return "e^{" + r + "η}";
}

}   // namespace

UnivariateForm UnivariateForm::reduced() const
{
    UnivariateForm out = *this;
    if (out.numerator.is_zero())
    {
        out.pole_order = 0;
        out.exp_rate = 0;
        return out;
    }
    int common = std::min(out.numerator.low_order(), out.pole_order);
    if (common > 0)
    {
        out.numerator = out.numerator.shifted(-common);
        out.pole_order -= common;
    }
    return out;
}

std::pair<Rational, UnivariateForm> UnivariateForm::canonical() const
{
    UnivariateForm r = reduced();
    auto [scale, prim] = r.numerator.primitive_part();
    r.numerator = prim;
    return {scale, r};
}

std::string UnivariateForm::to_string() const
{
    if (numerator.is_zero())
        return "0";
    std::string exp = exponential_string(exp_rate);
    std::string num;
    bool constant = numerator.degree() == 0;
    if (constant)
    {
        Rational c = numerator.coeff(0);
        if (c != 1 || exp.empty())
            num = (c == -1 && !exp.empty()) ? "-" : soliton::to_string(c);
        if (!exp.empty() && c != 1 && c != -1)
            num += "·";
    }
    else
    {
        num = "(" + numerator.to_string() + ")";
    }
    std::string out = num + exp;
    if (pole_order == 1)
        out += "/η";
    else if (pole_order > 1)
        out += "/η" + superscript(pole_order);
    else if (pole_order < 0)
        out += "·η" + superscript(-pole_order);
    return out;
}

ExpRationalSum assemble_F(const LocalizationProblem& problem)
{
    ExpRationalSum F(problem.rank(), {});
    if (problem.has_line_bundle())
    {
        const auto& lb = problem.line_bundle();
        int n = lb.base_dim;
        for (int i = 0; i <= n; ++i)
        {
            Rational coeff = Rational(lb.chern_integrals[static_cast<std::size_t>(i)]) / factorial(i);
            if (coeff == 0)
                continue;
            ExpRationalTerm t;
            t.coefficient = coeff;
            t.exponent = Covector{1};
            t.denominator.push_back({Covector{1}, n + 1 - i});
            F.add(std::move(t));
        }
        return F;
    }
    for (const auto& p : problem.fixed_points())
    {
        ExpRationalTerm t;
        t.coefficient = 1;
        t.exponent = -p.moment_value;
        for (const auto& w : p.weights)
        {
            auto it = std::find_if(t.denominator.begin(), t.denominator.end(),
                                   [&](const DenominatorFactor& f) { return f.weight == w; });
            if (it != t.denominator.end())
                ++it->multiplicity;
            else
                t.denominator.push_back({w, 1});
        }
        F.add(std::move(t));
    }
    return F;
}

UnivariateForm line_bundle_F(const LineBundleComponent& data)
{
    int n = data.base_dim;
    if (n < 0 || data.chern_integrals.size() != static_cast<std::size_t>(n) + 1)
        throw InvalidInput("expected base_dim + 1 Chern integrals");
    std::vector<Rational> coeffs;
    for (int i = 0; i <= n; ++i)
        coeffs.push_back(Rational(data.chern_integrals[static_cast<std::size_t>(i)]) / factorial(i));
    return UnivariateForm{Polynomial(std::move(coeffs)), Rational(1), n + 1};
}

LineBundleComponent projective_line_bundle(int m, int k)
{
    if (m < 0 || k <= 0)
        throw InvalidInput("projective_line_bundle needs m >= 0 and k > 0");
    LineBundleComponent out;
    out.base_dim = m;
    for (int i = 0; i <= m; ++i)
    {
        Integer a = 1;
        for (int j = 0; j < i; ++j)
            a *= (m + 1 - k);
        for (int j = 0; j < m - i; ++j)
            a *= k;
        out.chern_integrals.push_back(a);
    }
    return out;
}

UnivariateForm restrict_diagonal(const ExpRationalSum& F, const Covector& direction)
{
    if (direction.rank() != F.rank())
        throw InvalidInput("restriction direction has wrong rank");
    if (direction.is_zero())
        throw InvalidInput("restriction direction must be nonzero");
    if (F.terms().empty())
        return {};

    // Generic transverse direction d: <w,d> != 0 whenever <w,direction> = 0.
    std::mt19937_64 rng(0xd1a90a1ULL);
    std::uniform_int_distribution<int> draw(-24, 24);
    Covector d;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt)
    {
        std::vector<Rational> c(F.rank());
        for (auto& v : c)
            v = draw(rng);
        d = Covector(std::move(c));
        found = true;
        for (const auto& t : F.terms())
            for (const auto& f : t.denominator)
                if (f.weight.pair(direction) == 0 && f.weight.pair(d) == 0)
                    found = false;
    }
    if (!found)
        throw NonGenericDirection("no generic transverse direction found for the restriction");

    int common_deg = F.max_degree();
    // rate -> order (<= 0) -> polynomial numerator over eta^common_deg
    std::map<Rational, std::map<int, Polynomial>> groups;

    for (const auto& t : F.terms())
    {
        Rational rate = t.exponent.pair(direction);
        Rational s = t.exponent.pair(d);
        int pole = 0;
        for (const auto& f : t.denominator)
            if (f.weight.pair(direction) == 0)
                pole += f.multiplicity;

        // Regular factor R(eps) through eps^pole.
        std::vector<Rational> r(static_cast<std::size_t>(pole) + 1, Rational(0));
        r[0] = t.coefficient;
        for (const auto& f : t.denominator)
        {
            Rational alpha = f.weight.pair(direction);
            Rational beta = f.weight.pair(d);
            if (alpha == 0)
            {
                for (int m = 0; m < f.multiplicity; ++m)
                    for (auto& v : r)
                        v /= beta;
                continue;
            }
            // (alpha + beta eps)^{-m}
            std::vector<Rational> inv(r.size());
            Rational c = 1;
            for (int m = 0; m < f.multiplicity; ++m)
                c /= alpha;
            Rational ratio = -beta / alpha;
            for (std::size_t j = 0; j < inv.size(); ++j)
            {
                inv[j] = c;
                c = c * ratio * Rational(f.multiplicity + static_cast<int>(j)) / Rational(static_cast<int>(j) + 1);
            }
            std::vector<Rational> prod(r.size(), Rational(0));
            for (std::size_t i = 0; i < r.size(); ++i)
                for (std::size_t j = 0; i + j < r.size(); ++j)
                    prod[i + j] += r[i] * inv[j];
            r = std::move(prod);
        }

        // exp(eps * eta * s) = sum_j (s eta)^j eps^j / j!
        for (int k = -pole; k <= 0; ++k)
        {
            std::vector<Rational> poly(static_cast<std::size_t>(k + pole) + 1, Rational(0));
            Rational sj = 1;
            for (int j = 0; j <= k + pole; ++j)
            {
                poly[static_cast<std::size_t>(j)] = r[static_cast<std::size_t>(k + pole - j)] * sj / factorial(j);
                sj *= s;
            }
            Polynomial p = Polynomial(std::move(poly)).shifted(common_deg - t.degree());
            groups[rate][k] += p;
        }
    }

    UnivariateForm result;
    bool have = false;
    for (const auto& [rate, orders] : groups)
    {
        for (const auto& [k, p] : orders)
            if (k < 0 && !p.is_zero())
                throw ResidualPole("restriction has an uncancelled pole of order " + std::to_string(-k)
                                   + " with exponential rate " + to_string(rate));
        auto it = orders.find(0);
        if (it == orders.end() || it->second.is_zero())
            continue;
        if (have)
            throw MixedExponentialRates("restriction contains more than one exponential rate");
        result = UnivariateForm{it->second, rate, common_deg};
        have = true;
    }
    if (!have)
        return {};
    return result.reduced();
}

Polynomial critical_polynomial(const UnivariateForm& F)
{
    UnivariateForm r = F.reduced();
    if (r.numerator.is_zero())
        return {};
    // d/deta [P e^{c eta} eta^{-m}] = e^{c eta} eta^{-m-1} (eta (P' + c P) - m P)
    Polynomial q = (r.numerator.derivative() + r.numerator * r.exp_rate).shifted(1)
                 - r.numerator * Rational(r.pole_order);
    return q.primitive_part().second;
}

std::string BuiltinSpec::label() const
{
    if (name == "Cn")
        return "C^" + std::to_string(n);
    if (name == "OkPn")
        return "O(-" + std::to_string(k) + ")->P^" + std::to_string(n - 1);
    return name;
}

void validate_builtin(const BuiltinSpec& spec)
{
    if (spec.name == "Cn")
    {
        if (spec.n < 1)
            throw InvalidInput("Cn needs n >= 1");
        return;
    }
    if (spec.name == "OkPn")
    {
        if (spec.n < 2)
            throw InvalidInput("OkPn needs n >= 2");
        if (spec.k <= 0 || spec.k >= spec.n)
            throw InvalidTwist("OkPn needs 0 < k < n (got n=" + std::to_string(spec.n) + ", k="
                               + std::to_string(spec.k) + ")");
        return;
    }
    throw UnsupportedModel("unknown builtin model '" + spec.name + "' (expected Cn or OkPn)");
}

LocalizationProblem builtin_model(const BuiltinSpec& spec)
{
    validate_builtin(spec);
    auto rank = static_cast<std::size_t>(spec.n);
    ConeDescription orthant{rank, {}};
    for (std::size_t i = 0; i < rank; ++i)
        orthant.generators.push_back(Covector::basis(rank, i));

    std::vector<IsolatedFixedPoint> points;
    if (spec.name == "Cn")
    {
        IsolatedFixedPoint p;
        p.moment_value = Covector(std::vector<Rational>(rank, Rational(-1)));
        for (std::size_t i = 0; i < rank; ++i)
            p.weights.push_back(Covector::basis(rank, i));
        points.push_back(std::move(p));
    }
    else
    {
        int n = spec.n;
        int k = spec.k;
        for (std::size_t i = 0; i < rank; ++i)
        {
            IsolatedFixedPoint p;
            Covector ei = Covector::basis(rank, i);
            Covector mu = ei * Rational(k + 1 - n);
            for (std::size_t j = 0; j < rank; ++j)
                if (j != i)
                    mu = mu + Covector::basis(rank, j);
            p.moment_value = -mu;
            p.weights.push_back(ei * Rational(k));
            for (std::size_t j = 0; j < rank; ++j)
                if (j != i)
                    p.weights.push_back(Covector::basis(rank, j) - ei);
            points.push_back(std::move(p));
        }
    }
    return LocalizationProblem(rank, std::move(points), orthant);
}

std::vector<BuiltinSpec> example_builtins()
{
    std::vector<BuiltinSpec> out;
    for (int n = 1; n <= 6; ++n)
        out.push_back({"Cn", n, 0});
    for (int n = 2; n <= 4; ++n)
        for (int k = 1; k < n; ++k)
            out.push_back({"OkPn", n, k});
    return out;
}

}   // namespace soliton
