#include "soliton/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "soliton/errors.hpp"

namespace soliton {

template <typename Real>
Real LaurentSeries<Real>::coefficient(int k) const
{
    if (k < min_order_)
        return 0;
    if (k > max_order())
        throw InvalidInput("requested Laurent coefficient beyond the truncation order");
    return coeffs_[static_cast<std::size_t>(k - min_order_)];
}

template <typename Real>
LaurentSeries<Real> LaurentSeries<Real>::operator+(const LaurentSeries& other) const
{
    if (coeffs_.empty())
        return other;
    if (other.coeffs_.empty())
        return *this;
    int lo = std::min(min_order_, other.min_order_);
    int hi = std::min(max_order(), other.max_order());
    std::vector<Real> out(static_cast<std::size_t>(std::max(0, hi - lo + 1)), Real(0));
    for (int k = lo; k <= hi; ++k)
        out[static_cast<std::size_t>(k - lo)] = coefficient(k) + other.coefficient(k);
    return LaurentSeries(lo, std::move(out));
}

template <typename Real>
LaurentSeries<Real> LaurentSeries<Real>::operator*(const LaurentSeries& other) const
{
    if (coeffs_.empty() || other.coeffs_.empty())
        return {};
    int lo = min_order_ + other.min_order_;
    // The product is only known through the smaller absolute truncation.
    int hi = std::min(max_order() + other.min_order_, other.max_order() + min_order_);
    std::vector<Real> out(static_cast<std::size_t>(std::max(0, hi - lo + 1)), Real(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
        {
            int k = min_order_ + static_cast<int>(i) + other.min_order_ + static_cast<int>(j);
            if (k > hi)
                break;
            out[static_cast<std::size_t>(k - lo)] += coeffs_[i] * other.coeffs_[j];
        }
    return LaurentSeries(lo, std::move(out));
}

namespace {

// Power series of (alpha + beta eps)^{-m} through eps^n.
template <typename Real>
std::vector<Real> inverse_power_series(Real alpha, Real beta, int m, int n)
{
    std::vector<Real> s(static_cast<std::size_t>(n) + 1);
    Real ratio = -beta / alpha;
    Real lead = std::pow(alpha, -m);
    // binom(m+j-1, j) * (-beta/alpha)^j, built incrementally.
    Real c = lead;
    for (int j = 0; j <= n; ++j)
    {
        s[static_cast<std::size_t>(j)] = c;
        c = c * ratio * static_cast<Real>(m + j) / static_cast<Real>(j + 1);
    }
    return s;
}

template <typename Real>
void multiply_into(std::vector<Real>& acc, const std::vector<Real>& factor)
{
    std::vector<Real> out(acc.size(), Real(0));
    for (std::size_t i = 0; i < acc.size(); ++i)
        for (std::size_t j = 0; i + j < acc.size(); ++j)
            out[i + j] += acc[i] * factor[j];
    acc = std::move(out);
}

}   // namespace

template <typename Real>
LaurentSeries<Real> laurent_expand(const ExpRationalSum& sum, std::span<const Real> zeta,
                                   std::span<const Real> delta, int order)
{
    if (zeta.size() != sum.rank() || delta.size() != sum.rank())
        throw InvalidInput("expansion point or direction has wrong length");
    if (order < 0)
        throw InvalidInput("expansion order must be nonnegative");

    struct Piece
    {
        int pole;
        std::vector<Real> regular;   // coefficients of eps^0..eps^{order+pole}
    };
    std::vector<Piece> pieces;
    int max_pole = 0;

    for (const auto& term : sum.terms())
    {
        int pole = 0;
        for (const auto& f : term.denominator)
            if (pairing_vanishes<Real>(f.weight, zeta))
                pole += f.multiplicity;
        int n = order + pole;

        std::vector<Real> series(static_cast<std::size_t>(n) + 1, Real(0));
        // exp(<a,zeta>) * exp(eps <a,delta>)
        Real rate = term.exponent.pair<Real>(delta);
        Real c = to_real<Real>(term.coefficient) * std::exp(term.exponent.pair<Real>(zeta));
        for (int j = 0; j <= n; ++j)
        {
            series[static_cast<std::size_t>(j)] = c;
            c = c * rate / static_cast<Real>(j + 1);
        }
        for (const auto& f : term.denominator)
        {
            Real beta = f.weight.pair<Real>(delta);
            if (pairing_vanishes<Real>(f.weight, zeta))
            {
                if (beta == 0 || pairing_vanishes<Real>(f.weight, delta))
                    throw NonGenericDirection("expansion direction is orthogonal to vanishing weight "
                                              + f.weight.to_string());
                Real scale = std::pow(beta, -f.multiplicity);
                for (auto& v : series)
                    v *= scale;
            }
            else
            {
                Real alpha = f.weight.pair<Real>(zeta);
                multiply_into(series, inverse_power_series(alpha, beta, f.multiplicity, n));
            }
        }
        max_pole = std::max(max_pole, pole);
        pieces.push_back({pole, std::move(series)});
    }

    std::vector<Real> total(static_cast<std::size_t>(order + max_pole + 1), Real(0));
    for (const auto& piece : pieces)
        for (std::size_t j = 0; j < piece.regular.size(); ++j)
        {
            int k = static_cast<int>(j) - piece.pole;   // order of this coefficient
            total[static_cast<std::size_t>(k + max_pole)] += piece.regular[j];
        }
    return LaurentSeries<Real>(-max_pole, std::move(total));
}

template <typename Real>
std::vector<Real> generic_direction(const ExpRationalSum& sum, std::span<const Real> zeta,
                                    std::uint64_t seed, int max_attempts)
{
    std::vector<const Covector*> vanishing;
    for (const auto& t : sum.terms())
        for (const auto& f : t.denominator)
            if (pairing_vanishes<Real>(f.weight, zeta))
                vanishing.push_back(&f.weight);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> numerator(-16, 16);
    std::vector<Real> best;
    Real best_quality = -1;
    for (int attempt = 0; attempt < max_attempts; ++attempt)
    {
        std::vector<Real> delta(sum.rank());
        Real norm = 0;
        for (auto& d : delta)
        {
            d = static_cast<Real>(numerator(rng)) / 16;
            norm = std::max(norm, std::abs(d));
        }
        if (norm == 0)
            continue;
        // Quality: smallest relative size of a vanishing pairing along delta.
        Real quality = 1;
        bool generic = true;
        for (const Covector* w : vanishing)
        {
            Real beta = std::abs(w->pair<Real>(delta));
            Real rel = beta / (static_cast<Real>(w->l1_norm()) * norm);
            if (beta == 0)
            {
                generic = false;
                break;
            }
            quality = std::min(quality, rel);
        }
        if (!generic)
            continue;
        if (quality >= Real(1) / 16)
            return delta;
        if (quality > best_quality)
        {
            best_quality = quality;
            best = delta;
        }
    }
    if (best.empty())
        throw NonGenericDirection("no generic expansion direction found after "
                                  + std::to_string(max_attempts) + " attempts");
    return best;
}

template <typename Real>
void check_pole_cancellation(const LaurentSeries<Real>& series, double pole_tol)
{
    Real scale = 0;
    for (int k = 0; k <= series.max_order(); ++k)
        scale = std::max(scale, std::abs(series.coefficient(k)));
    for (int k = series.min_order(); k < 0; ++k)
    {
        Real c = series.coefficient(k);
        if (!(std::abs(c) <= static_cast<Real>(pole_tol) * (1 + scale)))
        {
            std::ostringstream oss;
            oss << "residual pole of order " << -k << " with coefficient " << static_cast<double>(c);
            throw ResidualPole(oss.str());
        }
    }
}

template <typename Real>
ConfluentExpansion<Real> confluent_expansion(const ExpRationalSum& sum, std::span<const Real> zeta,
                                             const ConfluentOptions& options)
{
    int order = options.order >= 0 ? options.order : sum.max_degree();
    auto delta = generic_direction<Real>(sum, zeta, options.seed, options.max_attempts);
    auto series = laurent_expand<Real>(sum, zeta, delta, order);
    check_pole_cancellation(series, options.pole_tol);
    return {std::move(series), std::move(delta)};
}

template <typename Real>
Real confluent_value(const ExpRationalSum& sum, std::span<const Real> zeta, const ConfluentOptions& options)
{
    if (zeta.size() != sum.rank())
        throw InvalidInput("evaluation point has wrong length");
    auto plan = plan_evaluation<Real>(sum, zeta);
    switch (plan.path)
    {
        case EvaluationPath::Direct:
            return eval_sum<Real>(sum, zeta);
        case EvaluationPath::Contour:
            return static_cast<Real>(contour_value(sum, *plan.circle));
        case EvaluationPath::Laurent:
            break;
    }
    return confluent_expansion<Real>(sum, zeta, options).series.coefficient(0);
}

std::string to_string(EvaluationPath path)
{
    switch (path)
    {
        case EvaluationPath::Direct:
            return "direct";
        case EvaluationPath::Laurent:
            return "laurent";
        case EvaluationPath::Contour:
            return "contour";
    }
    return "unknown";
}

namespace {

template <typename Real>
Real max_abs(std::span<const Real> zeta)
{
    Real scale = 0;
    for (Real z : zeta)
        scale = std::max(scale, std::abs(z));
    return scale;
}

long double pair_ld(const Covector& w, const std::vector<long double>& v)
{
    return w.pair<long double>(std::span<const long double>(v));
}

}   // namespace

template <typename Real>
Real near_confluence_threshold(const ExpRationalSum& sum)
{
    int m = std::max(1, sum.max_degree());
    Real eps = std::numeric_limits<Real>::epsilon();
    return std::min(Real(0.5), std::pow(eps * Real(1e13), Real(1) / Real(m + 2)));
}

template <typename Real>
Real singular_distance(const ExpRationalSum& sum, std::span<const Real> zeta)
{
    Real scale = max_abs(zeta);
    Real best = std::numeric_limits<Real>::infinity();
    for (const auto& t : sum.terms())
        for (const auto& f : t.denominator)
        {
            Real rel = scale == 0 ? Real(0)
                                  : std::abs(f.weight.pair<Real>(zeta)) / (static_cast<Real>(f.weight.l1_norm()) * scale);
            best = std::min(best, rel);
        }
    return best;
}

bool removable_hyperplane(const ExpRationalSum& sum, const Covector& w)
{
    std::size_t s = sum.rank();
    std::vector<long double> wv(s);
    long double norm2 = 0;
    for (std::size_t i = 0; i < s; ++i)
    {
        wv[i] = to_real<long double>(w[i]);
        norm2 += wv[i] * wv[i];
    }
    if (norm2 == 0)
        throw InvalidInput("zero covector has no hyperplane");
    // A fixed generic-looking point, projected onto the hyperplane.
    std::vector<long double> x(s);
    for (std::size_t i = 0; i < s; ++i)
        x[i] = 1 + 0.6180339887498949L * static_cast<long double>(i + 1) - std::floor(0.6180339887498949L * (i + 1))
               + 0.1L / static_cast<long double>(i + 3);
    long double along = 0;
    for (std::size_t i = 0; i < s; ++i)
        along += wv[i] * x[i];
    for (std::size_t i = 0; i < s; ++i)
        x[i] -= along / norm2 * wv[i];
    std::span<const long double> point(x);
    try
    {
        auto delta = generic_direction<long double>(sum, point, 0x7e57ULL);
        auto series = laurent_expand<long double>(sum, point, std::span<const long double>(delta), sum.max_degree());
        check_pole_cancellation(series, 1e-8);
    }
    catch (const ResidualPole&)
    {
        return false;
    }
    return true;
}

std::vector<std::complex<long double>> ContourCircle::node(int j) const
{
    long double theta = 2 * std::numbers::pi_v<long double> * (j + 0.5L) / nodes;
    std::complex<long double> z = std::polar(radius, theta);
    std::vector<std::complex<long double>> out(center.size());
    for (std::size_t i = 0; i < center.size(); ++i)
        out[i] = center[i] + z * direction[i];
    return out;
}

namespace {

struct WeightInfo
{
    const Covector* w;
    long double l1;
    bool inside;
};

// Best circle for one direction, enclosing exactly the weights marked inside.
std::optional<ContourCircle> circle_along(const ExpRationalSum& sum, const std::vector<long double>& center,
                                          long double scale, const std::vector<WeightInfo>& weights,
                                          std::vector<long double> d, int nodes)
{
    long double lo = 0, hi = 0.5L * scale;
    long double rate = 0;
    for (const auto& t : sum.terms())
        rate = std::max(rate, std::abs(pair_ld(t.exponent, d)));
    if (rate > 0)
        hi = std::min(hi, 1 / rate);
    std::vector<long double> poles, slopes;
    for (const auto& info : weights)
    {
        long double wd = pair_ld(*info.w, d);
        if (wd == 0)
            return std::nullopt;
        long double pole = std::abs(pair_ld(*info.w, center) / wd);
        poles.push_back(pole);
        slopes.push_back(std::abs(wd) / (info.l1 * scale));
        if (info.inside)
            lo = std::max(lo, pole);
        else
            hi = std::min(hi, pole);
    }
    if (!(hi > 1.25L * lo))
        return std::nullopt;

    long double half_step = std::numbers::pi_v<long double> / nodes;
    auto clearance = [&](long double r) {
        long double worst = std::numeric_limits<long double>::infinity();
        for (std::size_t i = 0; i < poles.size(); ++i)
        {
            long double p = poles[i];
            long double dist = std::sqrt(std::max(0.0L, r * r + p * p - 2 * r * p * std::cos(half_step)));
            worst = std::min(worst, slopes[i] * dist);
        }
        return worst;
    };
    ContourCircle circle;
    circle.center = center;
    circle.direction = std::move(d);
    circle.nodes = nodes;
    circle.clearance = -1;
    long double low = lo > 0 ? lo : hi * 1e-6L;
    for (int j = 0; j <= 32; ++j)
    {
        long double r = low * std::pow(hi / low, j / 32.0L);
        if (r <= lo || r >= hi)
            continue;
        long double c = clearance(r);
        if (c > circle.clearance)
        {
            circle.clearance = c;
            circle.radius = r;
        }
    }
    if (!(circle.clearance > 0))
        return std::nullopt;
    return circle;
}

}   // namespace

template <typename Real>
EvaluationPlan<Real> plan_evaluation(const ExpRationalSum& sum, std::span<const Real> zeta,
                                     const ContourOptions& options)
{
    if (zeta.size() != sum.rank())
        throw InvalidInput("evaluation point has wrong length");
    if (options.nodes < 8)
        throw InvalidInput("contour needs at least 8 nodes");
    EvaluationPlan<Real> plan;
    Real scale = max_abs(zeta);
    Real threshold = near_confluence_threshold<Real>(sum);
    bool exact = false, near = false;
    Real direct_distance = std::numeric_limits<Real>::infinity();
    std::vector<WeightInfo> weights;
    for (const auto& t : sum.terms())
        for (const auto& f : t.denominator)
        {
            WeightInfo info{&f.weight, static_cast<long double>(f.weight.l1_norm()), false};
            if (pairing_vanishes<Real>(f.weight, zeta))
            {
                exact = true;
                info.inside = true;
            }
            else
            {
                Real rel = std::abs(f.weight.pair<Real>(zeta)) / (static_cast<Real>(info.l1) * scale);
                direct_distance = std::min(direct_distance, rel);
                if (rel < threshold)
                    near = info.inside = true;
            }
            weights.push_back(info);
        }
    plan.path = exact ? EvaluationPath::Laurent : EvaluationPath::Direct;
    if (!near)
        return plan;

    // Only hyperplanes whose poles cancel may lie inside the circle.
    std::vector<const Covector*> checked;
    for (const auto& info : weights)
    {
        if (!info.inside)
            continue;
        bool seen = std::any_of(checked.begin(), checked.end(), [&](const Covector* c) { return *c == *info.w; });
        if (seen)
            continue;
        if (!removable_hyperplane(sum, *info.w))
            return plan;
        checked.push_back(info.w);
    }

    std::vector<long double> center(zeta.begin(), zeta.end());
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<long double> u(-1.0L, 1.0L);
    std::optional<ContourCircle> best;
    for (int attempt = 0; attempt < 24; ++attempt)
    {
        std::vector<long double> d(sum.rank());
        long double norm = 0;
        for (auto& x : d)
        {
            x = u(rng);
            norm = std::max(norm, std::abs(x));
        }
        if (norm == 0)
            continue;
        for (auto& x : d)
            x /= norm;
        auto c = circle_along(sum, center, static_cast<long double>(scale), weights, std::move(d), options.nodes);
        if (c && (!best || c->clearance > best->clearance))
            best = std::move(c);
    }
    // Worth it only if the nodes are clearly farther from the hyperplanes
    // than zeta itself is.
    if (best && best->clearance > 2 * static_cast<long double>(exact ? Real(0) : direct_distance))
    {
        plan.path = EvaluationPath::Contour;
        plan.circle = std::move(best);
    }
    return plan;
}

std::complex<long double> eval_term_complex(const ExpRationalTerm& term, std::span<const std::complex<long double>> z)
{
    auto pair = [&](const Covector& c) {
        std::complex<long double> acc = 0;
        for (std::size_t i = 0; i < c.rank(); ++i)
            if (c[i] != 0)
                acc += to_real<long double>(c[i]) * z[i];
        return acc;
    };
    std::complex<long double> denom = 1;
    for (const auto& f : term.denominator)
    {
        std::complex<long double> p = pair(f.weight);
        for (int m = 0; m < f.multiplicity; ++m)
            denom *= p;
    }
    return to_real<long double>(term.coefficient) * std::exp(pair(term.exponent)) / denom;
}

long double contour_value(const ExpRationalSum& sum, const ContourCircle& circle)
{
    std::complex<long double> total = 0;
    for (int j = 0; j < circle.nodes; ++j)
    {
        auto z = circle.node(j);
        for (const auto& t : sum.terms())
            total += eval_term_complex(t, z);
    }
    return total.real() / circle.nodes;
}

#define SOLITON_INSTANTIATE(Real)                                                                     \
    template class LaurentSeries<Real>;                                                               \
    template LaurentSeries<Real> laurent_expand<Real>(const ExpRationalSum&, std::span<const Real>,   \
                                                      std::span<const Real>, int);                    \
    template std::vector<Real> generic_direction<Real>(const ExpRationalSum&, std::span<const Real>,  \
                                                       std::uint64_t, int);                           \
    template void check_pole_cancellation<Real>(const LaurentSeries<Real>&, double);                  \
    template ConfluentExpansion<Real> confluent_expansion<Real>(const ExpRationalSum&,                \
                                                                std::span<const Real>,                \
                                                                const ConfluentOptions&);             \
    template Real confluent_value<Real>(const ExpRationalSum&, std::span<const Real>,                 \
                                        const ConfluentOptions&);                                     \
    template Real near_confluence_threshold<Real>(const ExpRationalSum&);                             \
    template Real singular_distance<Real>(const ExpRationalSum&, std::span<const Real>);              \
    template EvaluationPlan<Real> plan_evaluation<Real>(const ExpRationalSum&, std::span<const Real>, \
                                                        const ContourOptions&);

SOLITON_INSTANTIATE(double)
SOLITON_INSTANTIATE(long double)

#undef SOLITON_INSTANTIATE

}   // namespace soliton
