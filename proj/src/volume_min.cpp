#include "soliton/volume_min.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "soliton/errors.hpp"
#include "soliton/toric.hpp"

namespace soliton {

void SolverConfig::validate() const
{
    if (!(grad_tol > 0))
        throw InvalidInput("grad_tol must be positive");
    if (max_iter < 1)
        throw InvalidInput("max_iter must be at least 1");
    if (!(fd_step > 0))
        throw InvalidInput("fd_step must be positive");
}

std::string CriticalPointReport::symmetry_description() const
{
    std::ostringstream oss;
    oss << "group of order " << symmetry_group_order << ", orbits ";
    for (std::size_t i = 0; i < symmetry_orbits.size(); ++i)
    {
        oss << (i ? " " : "") << "{";
        for (std::size_t j = 0; j < symmetry_orbits[i].size(); ++j)
            oss << (j ? "," : "") << symmetry_orbits[i][j] + 1;
        oss << "}";
    }
    return oss.str();
}

namespace {

template <typename Real>
Vector<Real> covector_to_vector(const Covector& c)
{
    Vector<Real> v(static_cast<Eigen::Index>(c.rank()));
    for (std::size_t i = 0; i < c.rank(); ++i)
        v[static_cast<Eigen::Index>(i)] = to_real<Real>(c[i]);
    return v;
}

// s generic directions (rows of D) plus the pairwise sums when needed,
// all avoiding the covectors that vanish at zeta.
template <typename Real>
Matrix<Real> generic_basis(const ExpRationalSum& F, std::span<const Real> zeta, std::uint64_t seed, bool pairwise)
{
    std::size_t s = F.rank();
    std::vector<const Covector*> vanishing;
    for (const auto& t : F.terms())
        for (const auto& f : t.denominator)
            if (pairing_vanishes<Real>(f.weight, zeta))
                vanishing.push_back(&f.weight);
    auto generic = [&](const Vector<Real>& d) {
        std::span<const Real> view(d.data(), s);
        return std::none_of(vanishing.begin(), vanishing.end(),
                            [&](const Covector* w) { return w->pair<Real>(view) == 0; });
    };

    for (int attempt = 0; attempt < 32; ++attempt)
    {
        Matrix<Real> D(s, s);
        for (std::size_t k = 0; k < s; ++k)
        {
            auto d = generic_direction<Real>(F, zeta, seed + 7919 * (attempt * s + k) + k);
            for (std::size_t i = 0; i < s; ++i)
                D(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = d[i];
        }
        Eigen::FullPivLU<Matrix<Real>> lu(D);
        Real volume = 1;
        for (Eigen::Index k = 0; k < D.rows(); ++k)
            volume *= D.row(k).norm();
        if (std::abs(lu.determinant()) < Real(0.05) * volume)
            continue;
        bool ok = true;
        if (pairwise)
            for (Eigen::Index i = 0; i < D.rows() && ok; ++i)
                for (Eigen::Index j = i + 1; j < D.rows() && ok; ++j)
                    ok = generic(Vector<Real>(D.row(i) + D.row(j)));
        if (ok)
            return D;
    }
    throw NonGenericDirection("could not find a well-conditioned generic direction basis");
}

template <typename Real>
LaurentSeries<Real> expand_along(const ExpRationalSum& F, std::span<const Real> zeta, const Vector<Real>& d, int order)
{
    auto series = laurent_expand<Real>(F, zeta, std::span<const Real>(d.data(), static_cast<std::size_t>(d.size())),
                                       std::max(order, F.max_degree()));
    check_pole_cancellation(series, 1e-9);
    return series;
}

// Gradient and Hessian as means over the contour circle of the termwise
// analytic derivatives; both are entire like F itself.
template <typename Real>
void contour_derivatives(const ExpRationalSum& F, const ContourCircle& circle, Vector<Real>* grad, Matrix<Real>* hess)
{
    using C = std::complex<long double>;
    using CVector = Eigen::Matrix<C, Eigen::Dynamic, 1>;
    using CMatrix = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
    auto s = static_cast<Eigen::Index>(F.rank());
    CVector g_total = CVector::Zero(s);
    CMatrix h_total = CMatrix::Zero(s, s);
    for (int j = 0; j < circle.nodes; ++j)
    {
        auto z = circle.node(j);
        for (const auto& t : F.terms())
        {
            C value = eval_term_complex(t, z);
            CVector g = covector_to_vector<long double>(t.exponent).template cast<C>();
            CMatrix curvature = CMatrix::Zero(s, s);
            for (const auto& f : t.denominator)
            {
                CVector w = covector_to_vector<long double>(f.weight).template cast<C>();
                C p = 0;
                for (Eigen::Index i = 0; i < s; ++i)
                    p += w[i] * z[static_cast<std::size_t>(i)];
                auto m = static_cast<long double>(f.multiplicity);
                g -= w * (m / p);
                if (hess)
                    curvature += (m / (p * p)) * (w * w.transpose());
            }
            g_total += value * g;
            if (hess)
                h_total += value * (g * g.transpose() + curvature);
        }
    }
    auto n = static_cast<long double>(circle.nodes);
    if (grad)
        *grad = (g_total.real() / n).template cast<Real>();
    if (hess)
    {
        Matrix<Real> H = (h_total.real() / n).template cast<Real>();
        *hess = (H + H.transpose()) / 2;
    }
}

}   // namespace

template <typename Real>
Vector<Real> gradient_F(const ExpRationalSum& F, std::span<const Real> zeta, std::uint64_t seed)
{
    auto s = static_cast<Eigen::Index>(F.rank());
    if (zeta.size() != F.rank())
        throw InvalidInput("gradient point has wrong length");
    Vector<Real> grad = Vector<Real>::Zero(s);
    auto plan = plan_evaluation<Real>(F, zeta);
    EvaluationPath path = plan.path;
    if (path == EvaluationPath::Contour)
    {
        contour_derivatives<Real>(F, *plan.circle, &grad, nullptr);
        return grad;
    }
    if (path == EvaluationPath::Direct)
    {
        for (const auto& t : F.terms())
        {
            Real value = eval_term<Real>(t, zeta);
            Vector<Real> g = covector_to_vector<Real>(t.exponent);
            for (const auto& f : t.denominator)
                g -= covector_to_vector<Real>(f.weight) * (static_cast<Real>(f.multiplicity) / f.weight.pair<Real>(zeta));
            grad += value * g;
        }
        return grad;
    }
    Matrix<Real> D = generic_basis<Real>(F, zeta, seed, false);
    Vector<Real> first(s);
    for (Eigen::Index k = 0; k < s; ++k)
        first[k] = expand_along<Real>(F, zeta, Vector<Real>(D.row(k).transpose()), 1).coefficient(1);
    return D.fullPivLu().solve(first);
}

template <typename Real>
Matrix<Real> hessian_F(const ExpRationalSum& F, std::span<const Real> zeta, std::uint64_t seed)
{
    auto s = static_cast<Eigen::Index>(F.rank());
    if (zeta.size() != F.rank())
        throw InvalidInput("Hessian point has wrong length");
    Matrix<Real> H = Matrix<Real>::Zero(s, s);
    auto plan = plan_evaluation<Real>(F, zeta);
    EvaluationPath path = plan.path;
    if (path == EvaluationPath::Contour)
    {
        contour_derivatives<Real>(F, *plan.circle, nullptr, &H);
        return H;
    }
    if (path == EvaluationPath::Direct)
    {
        for (const auto& t : F.terms())
        {
            Real value = eval_term<Real>(t, zeta);
            Vector<Real> g = covector_to_vector<Real>(t.exponent);
            Matrix<Real> curvature = Matrix<Real>::Zero(s, s);
            for (const auto& f : t.denominator)
            {
                Vector<Real> w = covector_to_vector<Real>(f.weight);
                Real p = f.weight.pair<Real>(zeta);
                g -= w * (static_cast<Real>(f.multiplicity) / p);
                curvature += (static_cast<Real>(f.multiplicity) / (p * p)) * (w * w.transpose());
            }
            H += value * (g * g.transpose() + curvature);
        }
        return (H + H.transpose()) / 2;
    }
    Matrix<Real> D = generic_basis<Real>(F, zeta, seed, true);
    // q(d) = d^T H d = 2 * (eps^2 coefficient along d)
    auto q = [&](const Vector<Real>& d) { return 2 * expand_along<Real>(F, zeta, d, 2).coefficient(2); };
    std::vector<Real> diag(static_cast<std::size_t>(s));
    for (Eigen::Index i = 0; i < s; ++i)
        diag[static_cast<std::size_t>(i)] = q(Vector<Real>(D.row(i).transpose()));
    Matrix<Real> M(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
    {
        M(i, i) = diag[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < s; ++j)
        {
            Real both = q(Vector<Real>((D.row(i) + D.row(j)).transpose()));
            M(i, j) = M(j, i) = (both - diag[static_cast<std::size_t>(i)] - diag[static_cast<std::size_t>(j)]) / 2;
        }
    }
    // M = D H D^T
    Matrix<Real> Dinv = D.fullPivLu().inverse();
    H = Dinv * M * Dinv.transpose();
    return (H + H.transpose()) / 2;
}

template <typename Real>
Vector<Real> finite_difference_gradient(const ExpRationalSum& F, std::span<const Real> zeta, Real rel_step)
{
    std::size_t s = F.rank();
    Vector<Real> grad(static_cast<Eigen::Index>(s));
    std::vector<Real> plus(zeta.begin(), zeta.end());
    std::vector<Real> minus(zeta.begin(), zeta.end());
    for (std::size_t i = 0; i < s; ++i)
    {
        Real h = rel_step * std::max(Real(1), std::abs(zeta[i]));
        plus[i] = zeta[i] + h;
        minus[i] = zeta[i] - h;
        Real fp = confluent_value<Real>(F, plus);
        Real fm = confluent_value<Real>(F, minus);
        grad[static_cast<Eigen::Index>(i)] = (fp - fm) / (plus[i] - minus[i]);
        plus[i] = zeta[i];
        minus[i] = zeta[i];
    }
    return grad;
}

namespace {

using PointKey = std::pair<Covector, std::vector<Covector>>;

std::vector<PointKey> fixed_point_keys(const LocalizationProblem& problem, const Permutation* perm)
{
    std::vector<PointKey> keys;
    for (const auto& p : problem.fixed_points())
    {
        PointKey key;
        key.first = perm ? p.moment_value.permuted(*perm) : p.moment_value;
        for (const auto& w : p.weights)
            key.second.push_back(perm ? w.permuted(*perm) : w);
        std::sort(key.second.begin(), key.second.end());
        keys.push_back(std::move(key));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

}   // namespace

std::vector<Permutation> detect_symmetry(const LocalizationProblem& problem)
{
    std::size_t s = problem.rank();
    Permutation identity(s);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    if (problem.has_line_bundle() || s == 1)
        return {identity};

    auto reference = fixed_point_keys(problem, nullptr);
    auto preserves = [&](const Permutation& perm) {
        if (problem.cone())
        {
            std::vector<Covector> a, b;
            for (const auto& g : problem.cone()->generators)
            {
                a.push_back(g.primitive_part().second);
                b.push_back(g.permuted(perm).primitive_part().second);
            }
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b)
                return false;
        }
        return fixed_point_keys(problem, &perm) == reference;
    };

    std::vector<Permutation> out;
    if (s <= 8)
    {
        Permutation perm = identity;
        do
        {
            if (preserves(perm))
                out.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }
    // Large ranks: identity plus the symmetric transpositions.
    out.push_back(identity);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
        {
            Permutation perm = identity;
            std::swap(perm[i], perm[j]);
            if (preserves(perm))
                out.push_back(perm);
        }
    return out;
}

std::vector<std::vector<std::size_t>> permutation_orbits(std::size_t rank, const std::vector<Permutation>& perms)
{
    std::vector<std::size_t> parent(rank);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& perm : perms)
        for (std::size_t i = 0; i < rank; ++i)
        {
            std::size_t a = find(i);
            std::size_t b = find(perm[i]);
            if (a != b)
                parent[std::max(a, b)] = std::min(a, b);
        }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rank; ++i)
        groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups)
        out.push_back(std::move(members));
    return out;
}

std::vector<double> initial_point(const LocalizationProblem& problem)
{
    std::size_t s = problem.rank();
    ConeDescription cone = asymptotic_cone(problem);
    std::vector<std::vector<double>> candidates;

    ConeDescription dual = dual_cone(cone);
    if (!dual.trivial())
    {
        std::vector<double> sum(s, 0.0);
        for (const auto& g : dual.generators)
        {
            double norm = 0.0;
            for (std::size_t i = 0; i < s; ++i)
                norm = std::max(norm, std::abs(static_cast<double>(g[i])));
            for (std::size_t i = 0; i < s; ++i)
                sum[i] += static_cast<double>(g[i]) / norm;
        }
        double scale = 0.0;
        for (double v : sum)
            scale = std::max(scale, std::abs(v));
        for (double& v : sum)
            v /= scale;
        candidates.push_back(sum);
    }
    if (!cone.trivial())
    {
        std::vector<double> sum(s, 0.0);
        for (const auto& g : cone.generators)
            for (std::size_t i = 0; i < s; ++i)
                sum[i] += static_cast<double>(g[i]);
        candidates.push_back(sum);
    }
    candidates.emplace_back(s, 1.0);

    for (const auto& c : candidates)
        if (lambda_membership<double>(cone, c))
            return c;
    throw EmptyLambda("no starting point in the admissible cone was found");
}

namespace {

template <typename Real>
CriticalPointReport run_newton(const LocalizationProblem& problem, const SolverConfig& config)
{
    std::size_t s = problem.rank();
    ExpRationalSum F = assemble_F(problem);
    ConeDescription cone = asymptotic_cone(problem);

    Permutation identity(s);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    std::vector<Permutation> perms = config.use_symmetry ? detect_symmetry(problem) : std::vector<Permutation>{identity};
    auto orbits = permutation_orbits(s, perms);
    auto r = static_cast<Eigen::Index>(orbits.size());

    // zeta = B t, one column per orbit.
    Matrix<Real> B = Matrix<Real>::Zero(static_cast<Eigen::Index>(s), r);
    for (Eigen::Index o = 0; o < r; ++o)
        for (std::size_t i : orbits[static_cast<std::size_t>(o)])
            B(static_cast<Eigen::Index>(i), o) = 1;

    std::vector<double> start = config.initial_point ? *config.initial_point : initial_point(problem);
    if (start.size() != s)
        throw InvalidInput("initial point has wrong length");
    if (!lambda_membership<double>(cone, start))
        throw EmptyLambda("initial point is not in the admissible cone");

    Vector<Real> t(r);
    for (Eigen::Index o = 0; o < r; ++o)
    {
        Real acc = 0;
        for (std::size_t i : orbits[static_cast<std::size_t>(o)])
            acc += static_cast<Real>(start[i]);
        t[o] = acc / static_cast<Real>(orbits[static_cast<std::size_t>(o)].size());
    }
    auto embed = [&](const Vector<Real>& tt) {
        Vector<Real> z = B * tt;
        return std::vector<Real>(z.data(), z.data() + z.size());
    };
    auto in_lambda = [&](const std::vector<Real>& z) { return lambda_membership<Real>(cone, z); };

    std::vector<Real> zeta = embed(t);
    if (!in_lambda(zeta))
        throw EmptyLambda("symmetrized initial point left the admissible cone");

    Real value = confluent_value<Real>(F, zeta);
    const Real eps = std::numeric_limits<Real>::epsilon();
    int iterations = 0;
    Real scaled = 0;
    while (true)
    {
        Vector<Real> grad = B.transpose() * gradient_F<Real>(F, zeta);
        scaled = grad.template lpNorm<Eigen::Infinity>() / std::max(Real(1), std::abs(value));
        if (scaled <= static_cast<Real>(config.grad_tol))
            break;
        if (iterations >= config.max_iter)
        {
            throw NotConverged(std::vector<double>(zeta.begin(), zeta.end()), static_cast<double>(scaled),
                               "Newton iteration did not converge in " + std::to_string(config.max_iter) + " steps");
        }
        Matrix<Real> H = B.transpose() * hessian_F<Real>(F, zeta) * B;
        Vector<Real> step;
        Eigen::LLT<Matrix<Real>> llt(H);
        if (llt.info() == Eigen::Success)
            step = llt.solve(-grad);
        else
            step = -grad;
        Real slope = grad.dot(step);
        if (!(slope < 0))
        {
            step = -grad;
            slope = -grad.squaredNorm();
        }

        Real alpha = 1;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings, alpha /= 2)
        {
            Vector<Real> trial_t = t + alpha * step;
            std::vector<Real> trial = embed(trial_t);
            if (!in_lambda(trial))
                continue;
            Real trial_value;
            try
            {
                trial_value = confluent_value<Real>(F, trial);
            }
            catch (const SolitonError&)
            {
                continue;
            }
            if (!std::isfinite(static_cast<double>(trial_value)) || trial_value <= 0)
                continue;
            // Armijo with a roundoff allowance so quadratic-regime steps are not rejected.
            if (trial_value <= value + Real(1e-4) * alpha * slope + 16 * eps * std::abs(value))
            {
                t = trial_t;
                zeta = std::move(trial);
                value = trial_value;
                accepted = true;
                break;
            }
        }
        ++iterations;
        if (!accepted)
            throw NotConverged(std::vector<double>(zeta.begin(), zeta.end()), static_cast<double>(scaled),
                               "line search failed to make progress");
    }

    CriticalPointReport report;
    report.zeta_star.assign(zeta.begin(), zeta.end());
    report.value = static_cast<double>(value);
    report.grad_norm = static_cast<double>(scaled);
    report.iterations = iterations;
    report.symmetry_orbits = orbits;
    report.symmetry_group_order = perms.size();
    report.precision = config.precision;
    report.grad_tol = config.grad_tol;
    return report;
}

}   // namespace

CriticalPointReport minimize_F(const LocalizationProblem& problem, const SolverConfig& config)
{
    config.validate();
    if (config.precision == Precision::Extended)
        return run_newton<long double>(problem, config);
    return run_newton<double>(problem, config);
}

double critical_root(const Polynomial& poly)
{
    if (poly.degree() < 1)
        throw NoPositiveRoot("polynomial of degree < 1 has no positive root");
    using LD = long double;
    LD lead = to_real<LD>(poly.leading());
    LD bound = 0;
    for (int k = 0; k < poly.degree(); ++k)
        bound = std::max(bound, std::abs(to_real<LD>(poly.coeff(k)) / lead));
    bound += 1;

    // Sign just to the right of zero: sign of the lowest nonzero coefficient.
    int low = poly.low_order();
    auto sign = [](LD v) { return (v > 0) - (v < 0); };
    int prev_sign = sign(to_real<LD>(poly.coeff(low)));
    LD prev_x = 0;
    const int grid = 8192;
    std::vector<std::pair<LD, LD>> brackets;
    for (int j = 1; j <= grid; ++j)
    {
        LD x = bound * static_cast<LD>(j) / grid;
        LD v = poly.evaluate(x);
        int sg = sign(v);
        if (sg == 0)
        {
            brackets.emplace_back(x, x);
            prev_sign = -prev_sign;
        }
        else if (sg != prev_sign)
        {
            brackets.emplace_back(prev_x, x);
            prev_sign = sg;
        }
        prev_x = x;
    }
    if (brackets.empty())
        throw NoPositiveRoot("no sign change on (0, " + std::to_string(static_cast<double>(bound)) + "]");
    if (brackets.size() > 1)
        throw InvalidInput("polynomial has more than one positive root");

    auto [a, b] = brackets.front();
    LD fa = poly.evaluate(a);
    if (a == 0)
        fa = static_cast<LD>(sign(to_real<LD>(poly.coeff(low))));
    for (int it = 0; it < 200 && b - a > 1e-12L * std::max(LD(1), b); ++it)
    {
        LD mid = (a + b) / 2;
        LD fm = poly.evaluate(mid);
        if (fm == 0)
        {
            a = b = mid;
            break;
        }
        if (sign(fm) == sign(fa))
        {
            a = mid;
            fa = fm;
        }
        else
        {
            b = mid;
        }
    }
    LD x = (a + b) / 2;
    Polynomial dp = poly.derivative();
    for (int it = 0; it < 4; ++it)
    {
        LD d = dp.evaluate(x);
        if (d == 0)
            break;
        LD next = x - poly.evaluate(x) / d;
        if (next < a - 1e-9L || next > b + 1e-9L)
            break;
        x = next;
    }
    return static_cast<double>(x);
}

#define SOLITON_INSTANTIATE(Real)                                                                          \
    template Vector<Real> gradient_F<Real>(const ExpRationalSum&, std::span<const Real>, std::uint64_t);   \
    template Matrix<Real> hessian_F<Real>(const ExpRationalSum&, std::span<const Real>, std::uint64_t);    \
    template Vector<Real> finite_difference_gradient<Real>(const ExpRationalSum&, std::span<const Real>, Real);

SOLITON_INSTANTIATE(double)
SOLITON_INSTANTIATE(long double)

#undef SOLITON_INSTANTIATE

}   // namespace soliton
