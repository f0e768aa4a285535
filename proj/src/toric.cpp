#include "soliton/toric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn)
{
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true)
    {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

Covector primitive(const Covector& c)
{
    return c.primitive_part().second;
}

// Extreme rays of {y : <n_i, y> >= 0}, assuming the cone is pointed.
std::vector<Covector> extreme_rays(std::size_t rank, const std::vector<Covector>& normals)
{
    std::set<Covector> rays;
    if (rank == 0)
        return {};
    for_each_subset(normals.size(), rank - 1, [&](const std::vector<std::size_t>& idx) {
        // Cofactor vector of the (rank-1) x rank matrix spans its kernel when
        // the rows are independent.
        std::vector<Rational> r(rank);
        for (std::size_t col = 0; col < rank; ++col)
        {
            std::vector<Covector> minor;
            for (std::size_t i : idx)
            {
                std::vector<Rational> row;
                for (std::size_t c = 0; c < rank; ++c)
                    if (c != col)
                        row.push_back(normals[i][c]);
                minor.emplace_back(std::move(row));
            }
            Rational det = determinant(minor);
            r[col] = (col % 2 == 0) ? det : Rational(-det);
        }
        Covector ray(std::move(r));
        if (ray.is_zero())
            return;
        bool all_nonneg = true;
        bool all_nonpos = true;
        for (const auto& n : normals)
        {
            Rational v = n.pair(ray);
            if (v < 0)
                all_nonneg = false;
            if (v > 0)
                all_nonpos = false;
        }
        if (all_nonneg)
            rays.insert(primitive(ray));
        if (all_nonpos)
            rays.insert(primitive(-ray));
    });
    return {rays.begin(), rays.end()};
}

}   // namespace

Polyhedron::Polyhedron(std::size_t rank, std::vector<Inequality> inequalities,
                       std::optional<std::vector<Covector>> lattice)
    : rank_(rank), inequalities_(std::move(inequalities)), lattice_(std::move(lattice))
{
    if (rank_ == 0)
        throw InvalidInput("polyhedron rank must be at least 1");
    for (const auto& ineq : inequalities_)
    {
        if (ineq.normal.rank() != rank_)
            throw InvalidInput("facet normal " + ineq.normal.to_string() + " has wrong rank");
        if (ineq.normal.is_zero())
            throw InvalidInput("facet normals must be nonzero");
    }
    if (lattice_)
    {
        if (lattice_->size() != rank_)
            throw InvalidInput("lattice basis needs exactly rank vectors");
        for (const auto& b : *lattice_)
        {
            if (b.rank() != rank_)
                throw InvalidInput("lattice basis vector has wrong rank");
            for (std::size_t i = 0; i < rank_; ++i)
                if (boost::multiprecision::denominator(b[i]) != 1)
                    throw InvalidInput("lattice basis vectors must be integral");
        }
        if (abs_determinant(*lattice_) == 0)
            throw InvalidInput("lattice basis is degenerate");
    }
}

Rational Polyhedron::lattice_covolume() const
{
    return lattice_ ? abs_determinant(*lattice_) : Rational(1);
}

bool Polyhedron::contains(const std::vector<Rational>& y) const
{
    Covector p(y);
    return std::all_of(inequalities_.begin(), inequalities_.end(),
                       [&](const Inequality& ineq) { return ineq.normal.pair(p) >= ineq.offset; });
}

std::vector<VertexCone> enumerate_vertices(const Polyhedron& P)
{
    std::size_t s = P.rank();
    const auto& ineqs = P.inequalities();
    std::set<std::vector<Rational>> vertices;
    for_each_subset(ineqs.size(), s, [&](const std::vector<std::size_t>& idx) {
        std::vector<Covector> rows;
        std::vector<Rational> rhs;
        for (std::size_t i : idx)
        {
            rows.push_back(ineqs[i].normal);
            rhs.push_back(ineqs[i].offset);
        }
        std::vector<Rational> y;
        if (solve_exact(rows, rhs, y) && P.contains(y))
            vertices.insert(y);
    });
    if (vertices.empty())
        throw NoVertex("polyhedron has no vertex (empty, or unbounded in a full line)");

    Rational covol = P.lattice_covolume();
    std::vector<VertexCone> out;
    for (const auto& v : vertices)
    {
        Covector point(v);
        std::vector<Covector> active;
        for (const auto& ineq : ineqs)
            if (ineq.normal.pair(point) == ineq.offset)
                active.push_back(ineq.normal);
        if (active.size() != s)
            throw NotSimple("vertex " + point.to_string() + " lies on " + std::to_string(active.size())
                            + " facets; a simple polyhedron needs exactly " + std::to_string(s));
        VertexCone cone;
        cone.vertex = v;
        // Edge j: the column of active^{-1} that leaves facet j and stays on the others.
        for (std::size_t j = 0; j < s; ++j)
        {
            std::vector<Rational> e(s, Rational(0));
            e[j] = 1;
            std::vector<Rational> g;
            solve_exact(active, e, g);
            cone.generators.push_back(primitive(Covector(std::move(g))));
        }
        cone.det_norm = abs_determinant(cone.generators) / covol;
        out.push_back(std::move(cone));
    }
    return out;
}

ExpRationalSum brion_integral(const Polyhedron& P)
{
    ExpRationalSum sum(P.rank(), {});
    for (const auto& vc : enumerate_vertices(P))
    {
        ExpRationalTerm t;
        t.coefficient = vc.det_norm;
        t.exponent = -Covector(vc.vertex);
        for (const auto& g : vc.generators)
            t.denominator.push_back({g, 1});
        sum.add(std::move(t));
    }
    return sum;
}

ConeDescription recession_cone(const Polyhedron& P)
{
    std::vector<Covector> normals;
    for (const auto& ineq : P.inequalities())
        normals.push_back(ineq.normal);
    return {P.rank(), extreme_rays(P.rank(), normals)};
}

ConeDescription dual_cone(const ConeDescription& C)
{
    if (C.trivial())
        return {C.rank, {}};
    return {C.rank, extreme_rays(C.rank, C.generators)};
}

template <typename Real>
bool lambda_membership(const ConeDescription& C, std::span<const Real> zeta)
{
    if (zeta.size() != C.rank)
        throw InvalidInput("membership point has wrong length");
    return std::all_of(C.generators.begin(), C.generators.end(),
                       [&](const Covector& g) { return g.pair<Real>(zeta) > 0; });
}

template bool lambda_membership<double>(const ConeDescription&, std::span<const double>);
template bool lambda_membership<long double>(const ConeDescription&, std::span<const long double>);

namespace {

// Floating point bounding box of P intersect {<y,zeta> <= cutoff}.
bool cutoff_bounding_box(const Polyhedron& P, std::span<const double> zeta, double cutoff,
                         std::vector<double>& lo, std::vector<double>& hi)
{
    std::size_t s = P.rank();
    std::vector<Eigen::VectorXd> normals;
    std::vector<double> offsets;
    for (const auto& ineq : P.inequalities())
    {
        Eigen::VectorXd n(s);
        for (std::size_t i = 0; i < s; ++i)
            n[static_cast<Eigen::Index>(i)] = static_cast<double>(ineq.normal[i]);
        normals.push_back(n);
        offsets.push_back(static_cast<double>(ineq.offset));
    }
    Eigen::VectorXd z(s);
    for (std::size_t i = 0; i < s; ++i)
        z[static_cast<Eigen::Index>(i)] = -zeta[i];
    normals.push_back(z);
    offsets.push_back(-cutoff);

    lo.assign(s, std::numeric_limits<double>::infinity());
    hi.assign(s, -std::numeric_limits<double>::infinity());
    bool any = false;
    for_each_subset(normals.size(), s, [&](const std::vector<std::size_t>& idx) {
        Eigen::MatrixXd A(s, s);
        Eigen::VectorXd b(s);
        for (std::size_t r = 0; r < s; ++r)
        {
            A.row(static_cast<Eigen::Index>(r)) = normals[idx[r]].transpose();
            b[static_cast<Eigen::Index>(r)] = offsets[idx[r]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible())
            return;
        Eigen::VectorXd y = lu.solve(b);
        for (std::size_t i = 0; i < normals.size(); ++i)
        {
            double slack = normals[i].dot(y) - offsets[i];
            if (slack < -1e-9 * (1.0 + std::abs(offsets[i]) + y.lpNorm<Eigen::Infinity>()))
                return;
        }
        any = true;
        for (std::size_t i = 0; i < s; ++i)
        {
            lo[i] = std::min(lo[i], y[static_cast<Eigen::Index>(i)]);
            hi[i] = std::max(hi[i], y[static_cast<Eigen::Index>(i)]);
        }
    });
    return any;
}

// Integer facet data for the scaled lattice: <N, m> >= bound.
struct ScaledFacet
{
    std::vector<long long> normal;
    long long bound;
};

long long to_ll(const Integer& v)
{
    return v.convert_to<long long>();
}

Integer ceil_div(const Rational& q)
{
    Integer num = boost::multiprecision::numerator(q);
    Integer den = boost::multiprecision::denominator(q);
    Integer fl = num / den;
    if (fl * den != num && num > 0)
        fl += 1;
    return fl;
}

long long floor_div(long long a, long long b)
{
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

long long ceil_div(long long a, long long b)
{
    return -floor_div(-a, b);
}

// sum_{j=0}^{count-1} exp(-z (first + j*stride)), computed stably.
double progression_sum(double z, long long first, long long stride, long long count)
{
    if (count <= 0)
        return 0.0;
    double head = std::exp(-z * static_cast<double>(first));
    double step = z * static_cast<double>(stride);
    if (step == 0.0)
        return head * static_cast<double>(count);
    return head * std::expm1(-step * static_cast<double>(count)) / std::expm1(-step);
}

}   // namespace

double character_sum(const Polyhedron& P, std::span<const double> zeta, int k, const CharacterSumOptions& options)
{
    std::size_t s = P.rank();
    if (zeta.size() != s)
        throw InvalidInput("character_sum point has wrong length");
    if (k < 1)
        throw InvalidInput("character_sum needs a positive scaling k");
    if (!lambda_membership<double>(recession_cone(P), zeta))
        throw NotInLambda("zeta is not in the interior of the dual recession cone");

    std::vector<double> box_lo, box_hi;
    if (!cutoff_bounding_box(P, zeta, options.cutoff, box_lo, box_hi))
        return 0.0;

    std::vector<ScaledFacet> facets;
    for (const auto& ineq : P.inequalities())
    {
        auto [scale, prim] = ineq.normal.primitive_part();
        ScaledFacet f;
        for (std::size_t i = 0; i < s; ++i)
            f.normal.push_back(to_ll(boost::multiprecision::numerator(prim[i])));
        f.bound = to_ll(ceil_div(ineq.offset * Rational(k) / scale));
        facets.push_back(std::move(f));
    }

    // Lattice membership: m in L iff adj(B^T) m = 0 mod |det B|.
    long long period = 1;
    std::vector<std::vector<long long>> adjugate;
    if (P.lattice())
    {
        const auto& basis = *P.lattice();
        Rational det = determinant(basis);
        period = to_ll(boost::multiprecision::numerator(Rational(boost::multiprecision::abs(det))));
        // Columns of M are the basis vectors; rows of N*M^{-1} are integral.
        std::vector<Covector> M;
        for (std::size_t r = 0; r < s; ++r)
        {
            std::vector<Rational> row;
            for (std::size_t c = 0; c < s; ++c)
                row.push_back(basis[c][r]);
            M.emplace_back(std::move(row));
        }
        adjugate.assign(s, std::vector<long long>(s));
        for (std::size_t c = 0; c < s; ++c)
        {
            std::vector<Rational> e(s, Rational(0));
            e[c] = 1;
            std::vector<Rational> col;
            solve_exact(M, e, col);
            for (std::size_t r = 0; r < s; ++r)
                adjugate[r][c] = to_ll(boost::multiprecision::numerator(Rational(col[r] * Rational(period))));
        }
    }
    auto in_lattice = [&](const std::vector<long long>& m) {
        if (period == 1)
            return true;
        for (std::size_t r = 0; r < s; ++r)
        {
            long long acc = 0;
            for (std::size_t c = 0; c < s; ++c)
                acc += adjugate[r][c] * m[c];
            if (acc % period != 0)
                return false;
        }
        return true;
    };

    double kd = static_cast<double>(k);
    double limit = kd * options.cutoff;
    std::size_t inner = s - 1;
    std::vector<long long> outer_lo(inner), outer_hi(inner);
    for (std::size_t t = 0; t < inner; ++t)
    {
        outer_lo[t] = static_cast<long long>(std::floor(box_lo[t] * kd)) - 1;
        outer_hi[t] = static_cast<long long>(std::ceil(box_hi[t] * kd)) + 1;
    }

    // Neumaier compensated summation; rows are visited in a fixed order.
    double total = 0.0;
    double compensation = 0.0;
    auto accumulate = [&](double v) {
        double t = total + v;
        if (std::abs(total) >= std::abs(v))
            compensation += (total - t) + v;
        else
            compensation += (v - t) + total;
        total = t;
    };

    std::vector<long long> m(s, 0);
    for (std::size_t t = 0; t < inner; ++t)
        m[t] = outer_lo[t];
    double z_inner = zeta[inner] / kd;
    while (true)
    {
        long long lo = std::numeric_limits<long long>::min();
        long long hi = std::numeric_limits<long long>::max();
        bool feasible = true;
        for (const auto& f : facets)
        {
            long long rem = f.bound;
            for (std::size_t t = 0; t < inner; ++t)
                rem -= f.normal[t] * m[t];
            long long c = f.normal[inner];
            if (c > 0)
                lo = std::max(lo, ceil_div(rem, c));
            else if (c < 0)
                hi = std::min(hi, floor_div(rem, c));
            else if (rem > 0)
                feasible = false;
        }
        double prefix = 0.0;
        for (std::size_t t = 0; t < inner; ++t)
            prefix += zeta[t] * static_cast<double>(m[t]);
        double room = limit - prefix;
        if (zeta[inner] > 0)
            hi = std::min(hi, static_cast<long long>(std::floor(room / zeta[inner])));
        else if (zeta[inner] < 0)
            lo = std::max(lo, static_cast<long long>(std::ceil(room / zeta[inner])));
        else if (room < 0)
            feasible = false;

        if (feasible && lo <= hi)
        {
            if (lo == std::numeric_limits<long long>::min() || hi == std::numeric_limits<long long>::max())
                throw NotInLambda("lattice row is unbounded; zeta is not admissible for this polyhedron");
            double row_scale = std::exp(-prefix / kd);
            for (long long offset = 0; offset < period && lo + offset <= hi; ++offset)
            {
                m[inner] = lo + offset;
                if (!in_lattice(m))
                    continue;
                long long count = (hi - lo - offset) / period + 1;
                accumulate(row_scale * progression_sum(z_inner, lo + offset, period, count));
            }
        }

        // Odometer over the outer axes.
        std::size_t t = 0;
        while (t < inner)
        {
            if (++m[t] <= outer_hi[t])
                break;
            m[t] = outer_lo[t];
            ++t;
        }
        if (t == inner)
            break;
    }
    return (total + compensation) / std::pow(kd, static_cast<double>(s));
}

Polyhedron builtin_polyhedron(const BuiltinSpec& spec)
{
    validate_builtin(spec);
    auto rank = static_cast<std::size_t>(spec.n);
    std::vector<Inequality> ineqs;
    for (std::size_t i = 0; i < rank; ++i)
        ineqs.push_back({Covector::basis(rank, i), Rational(-1)});
    if (spec.name == "Cn")
        return Polyhedron(rank, std::move(ineqs));

    ineqs.push_back({Covector(std::vector<Rational>(rank, Rational(1))), Rational(-spec.k)});
    if (spec.k == 1)
        return Polyhedron(rank, std::move(ineqs));
    // Characters of the effective torus: {m : sum m = 0 mod k}.
    std::vector<Covector> basis;
    for (std::size_t i = 0; i + 1 < rank; ++i)
        basis.push_back(Covector::basis(rank, i) - Covector::basis(rank, i + 1));
    basis.push_back(Covector::basis(rank, rank - 1) * Rational(spec.k));
    return Polyhedron(rank, std::move(ineqs), std::move(basis));
}

ConeDescription asymptotic_cone(const LocalizationProblem& problem)
{
    if (problem.cone())
        return *problem.cone();
    std::size_t s = problem.rank();
    if (problem.has_line_bundle())
        return {s, {Covector{1}}};

    const auto& points = problem.fixed_points();
    std::set<Covector> gens;
    for (std::size_t p = 0; p < points.size(); ++p)
    {
        for (const auto& w : points[p].weights)
        {
            bool bounded = false;
            for (std::size_t q = 0; q < points.size() && !bounded; ++q)
            {
                if (q == p)
                    continue;
                Covector diff = points[q].moment_value - points[p].moment_value;
                if (diff.is_zero())
                    continue;
                // diff must be a positive multiple of w
                auto [sd, pd] = diff.primitive_part();
                auto [sw, pw] = w.primitive_part();
                if (pd != pw)
                    continue;
                for (const auto& v : points[q].weights)
                    if (v.primitive_part().second == -pw)
                        bounded = true;
            }
            if (!bounded)
                gens.insert(primitive(w));
        }
    }
    return {s, {gens.begin(), gens.end()}};
}

}   // namespace soliton
