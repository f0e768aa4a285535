#ifndef SOLITON_VOLUME_MIN_HPP
#define SOLITON_VOLUME_MIN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "soliton/exp_rational.hpp"
#include "soliton/laurent.hpp"
#include "soliton/localization.hpp"
#include "soliton/polynomial.hpp"

namespace soliton {

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/** Coordinate permutation: coordinate i is sent to perm[i]. */
using Permutation = std::vector<std::size_t>;

struct SolverConfig
{
    double grad_tol = 1e-10;
    int max_iter = 200;
    /** Relative step for finite-difference checks. */
    double fd_step = 1e-6;
    Precision precision = Precision::Double;
    /** Restrict the search to the subspace fixed by detected symmetries. */
    bool use_symmetry = true;
    /** Optional starting point; must lie in Lambda. */
    std::optional<std::vector<double>> initial_point;

    void validate() const;
};

struct CriticalPointReport
{
    std::vector<double> zeta_star;
    double value = 0.0;
    /** max |reduced gradient| / max(1, F(zeta*)) at the returned point. */
    double grad_norm = 0.0;
    int iterations = 0;
    /** Coordinate orbits of the detected symmetry group. */
    std::vector<std::vector<std::size_t>> symmetry_orbits;
    std::size_t symmetry_group_order = 1;
    Precision precision = Precision::Double;
    double grad_tol = 0.0;

    std::string symmetry_description() const;
};

/**
 * Gradient of F at zeta. Termwise analytic where zeta is nonsingular;
 * otherwise from exact first-order Laurent coefficients along s generic
 * directions.
 */
template <typename Real>
Vector<Real> gradient_F(const ExpRationalSum& F, std::span<const Real> zeta, std::uint64_t seed = 0x9a4d1e5ULL);

/**
 * Symmetrized Hessian of F at zeta. Termwise analytic where nonsingular,
 * otherwise by polarization of second-order Laurent coefficients.
 */
template <typename Real>
Matrix<Real> hessian_F(const ExpRationalSum& F, std::span<const Real> zeta, std::uint64_t seed = 0x9a4d1e5ULL);

/** Central finite-difference gradient of confluent_value (test oracle). */
template <typename Real>
Vector<Real> finite_difference_gradient(const ExpRationalSum& F, std::span<const Real> zeta, Real rel_step);

/** Every coordinate permutation mapping the fixed-point data to itself. */
std::vector<Permutation> detect_symmetry(const LocalizationProblem& problem);

/** Orbits of {0..s-1} under a set of permutations. */
std::vector<std::vector<std::size_t>> permutation_orbits(std::size_t rank, const std::vector<Permutation>& perms);

/**
 * Damped Newton minimization of F over Lambda (restricted to the
 * symmetry-fixed subspace). Throws EmptyLambda if no feasible start is
 * available and NotConverged after max_iter iterations.
 */
CriticalPointReport minimize_F(const LocalizationProblem& problem, const SolverConfig& config = {});

/** A point in the interior of Lambda, built from the dual cone generators. */
std::vector<double> initial_point(const LocalizationProblem& problem);

/**
 * Unique positive real root by sign-change bisection and a Newton polish.
 * Throws NoPositiveRoot.
 */
double critical_root(const Polynomial& poly);

}   // namespace soliton

#endif
