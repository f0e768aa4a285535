#ifndef SOLITON_SURFACE_HPP
#define SOLITON_SURFACE_HPP

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "soliton/rational.hpp"

namespace soliton {

/** The quotient C^2 / mu_p acting with weights (1, q). */
struct CyclicQuotient
{
    long p = 0;
    long q = 0;

    void validate() const;
};

enum class HJOrientation
{
    /** p/q = r1 - 1/(r2 - ...), all r_j >= 2. */
    POverQ,
    /** q/p expanded with the same recursion; r1 = 1 whenever q < p. */
    QOverP,
};

struct HJExpansion
{
    std::vector<long> coefficients;
    HJOrientation orientation = HJOrientation::POverQ;
    /** Set when some coefficient is below 2 (only possible for QOverP). */
    bool flagged = false;
};

HJExpansion hj_expand(const CyclicQuotient& c, HJOrientation orientation = HJOrientation::POverQ);

/** The reduced fraction (d, e) = r1 - 1/(r2 - ...). */
std::pair<Integer, Integer> hj_value(const std::vector<long>& coefficients);

/**
 * Weighted dual graph of a minimal good resolution: a central curve of genus
 * g and self-intersection -b with chains of rational curves attached.
 */
struct StarGraph
{
    long b = 1;
    long genus = 1;
    /** Positive weights b_ij; the curve has self-intersection -b_ij. */
    std::vector<std::vector<long>> branches;

    std::size_t marked_points() const { return branches.size(); }
    std::size_t vertex_count() const;
    void validate() const;
};

/** b - sum e_i/d_i, exactly. */
Rational star_criterion(const StarGraph& g);

/** True iff b - sum e_i/d_i > 0. */
bool is_negative_definite(const StarGraph& g);

/** Central vertex first, then each branch in order. */
std::vector<std::vector<long>> build_intersection_matrix(const StarGraph& g);

/** Leading principal minors of -Q, by fraction-free elimination. */
std::vector<Integer> leading_minors_of_negation(const std::vector<std::vector<long>>& Q);

/** All leading principal minors of -Q positive. */
bool minors_negative_definite(const std::vector<std::vector<long>>& Q);

/** Total space of a negative line bundle of degree -degree over a genus g curve. */
struct NegLineBundleOverCurve
{
    long genus = 1;
    long degree = 1;
};

using SurfaceCone = std::variant<CyclicQuotient, NegLineBundleOverCurve, StarGraph>;

struct CanonicalModelVerdict
{
    bool admits = false;
    std::string witness;
};

CanonicalModelVerdict smooth_canonical_model(const SurfaceCone& cone);

enum class ShrinkingManifold
{
    C2,
    BlowupC2,
    None,
};

std::string to_string(ShrinkingManifold m);

struct ShrinkingVerdict
{
    bool admissible = false;
    ShrinkingManifold manifold = ShrinkingManifold::None;
};

/** Self-intersections of the exceptional curves of an iterated blowup of C^2. */
ShrinkingVerdict shrinking_admissible(const std::vector<long>& self_intersections);

}   // namespace soliton

#endif
