#ifndef SOLITON_TORIC_HPP
#define SOLITON_TORIC_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "soliton/exp_rational.hpp"
#include "soliton/localization.hpp"
#include "soliton/rational.hpp"

namespace soliton {

/** <normal, y> >= offset */
struct Inequality
{
    Covector normal;
    Rational offset;
};

/**
 * H-representation of a rational polyhedron in t*, optionally with a
 * character lattice L (rows of an integer basis). L defaults to Z^s; the
 * Duistermaat-Heckman measure is Lebesgue measure divided by covol(L).
 */
class Polyhedron
{
    public:
        Polyhedron(std::size_t rank, std::vector<Inequality> inequalities,
                   std::optional<std::vector<Covector>> lattice = std::nullopt);

        std::size_t rank() const noexcept { return rank_; }
        const std::vector<Inequality>& inequalities() const noexcept { return inequalities_; }
        const std::optional<std::vector<Covector>>& lattice() const noexcept { return lattice_; }
        /** |det| of the lattice basis; 1 for Z^s. */
        Rational lattice_covolume() const;

        bool contains(const std::vector<Rational>& y) const;

    private:
        std::size_t rank_;
        std::vector<Inequality> inequalities_;
        std::optional<std::vector<Covector>> lattice_;
};

/** A vertex with its edge directions, scaled primitive integral. */
struct VertexCone
{
    std::vector<Rational> vertex;
    std::vector<Covector> generators;
    /** |det G| / covol(L). */
    Rational det_norm;
};

/**
 * All vertices of a simple polyhedron with their tangent-cone edge
 * generators. Brute force over s-subsets of facets.
 * Throws NotSimple if more than s facets meet at a vertex and NoVertex if
 * the polyhedron has no vertex (empty, or containing a line).
 */
std::vector<VertexCone> enumerate_vertices(const Polyhedron& P);

/** sum over vertices of det_norm * exp(-<v,zeta>) / prod <g,zeta>. */
ExpRationalSum brion_integral(const Polyhedron& P);

/** Extreme rays of the recession cone {y : <a_i, y> >= 0}, primitive integral. */
ConeDescription recession_cone(const Polyhedron& P);

/**
 * True iff <g, zeta> > 0 for every generator, i.e. zeta lies in the interior
 * of the dual cone. Vacuously true for the trivial cone.
 */
template <typename Real>
bool lambda_membership(const ConeDescription& C, std::span<const Real> zeta);

/**
 * Extreme rays of the dual cone {zeta : <g, zeta> >= 0}. Empty when the dual
 * is not pointed (the input cone is not full-dimensional).
 */
ConeDescription dual_cone(const ConeDescription& C);

struct CharacterSumOptions
{
    double cutoff = 40.0;
};

/**
 * k^{-s} sum over m in P intersect (1/k)L with <m,zeta> <= cutoff of
 * exp(-<m,zeta>). Lattice points are enumerated row by row along the last
 * axis; each row is a union of arithmetic progressions summed in closed form.
 * Throws NotInLambda when zeta is not in the interior of the dual recession cone.
 */
double character_sum(const Polyhedron& P, std::span<const double> zeta, int k,
                     const CharacterSumOptions& options = {});

/** Moment polyhedron of a builtin: {y_i >= -1} and, for O(-k), sum y >= -k. */
Polyhedron builtin_polyhedron(const BuiltinSpec& spec);

/**
 * Asymptotic cone of the moment image of a localization problem: the attached
 * cone if present, (1) for a line-bundle component, and otherwise the cone
 * spanned by the weights that do not pair off with a weight of opposite sign
 * at another fixed point along the same edge.
 */
ConeDescription asymptotic_cone(const LocalizationProblem& problem);

}   // namespace soliton

#endif
