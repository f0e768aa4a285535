#ifndef SOLITON_ERRORS_HPP
#define SOLITON_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace soliton {

/**
 * Coarse classification of failures. The command line tool maps these onto
 * process exit codes (validation 2, non-convergence 3, infeasible 4).
 */
enum class ErrorKind
{
    Validation,
    NonConvergence,
    Infeasible,
};

class SolitonError : public std::runtime_error
{
    public:
        SolitonError(ErrorKind kind, const std::string& what)
            : std::runtime_error(what), kind_(kind) {}
        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
};

#define SOLITON_DEFINE_ERROR(Name, Kind)                                       \
    class Name : public SolitonError                                           \
    {                                                                          \
        public:                                                                \
            explicit Name(const std::string& what = #Name)                     \
                : SolitonError(ErrorKind::Kind, what) {}                       \
    };

/** Malformed input: wrong lengths, broken invariants, bad documents. */
SOLITON_DEFINE_ERROR(InvalidInput, Validation)
/** A localization sum does not cancel its poles where it should. */
SOLITON_DEFINE_ERROR(ResidualPole, Validation)
/** No generic expansion direction was found for a confluent point. */
SOLITON_DEFINE_ERROR(NonGenericDirection, Validation)
SOLITON_DEFINE_ERROR(UnsupportedModel, Validation)
SOLITON_DEFINE_ERROR(InvalidTwist, Validation)
SOLITON_DEFINE_ERROR(UnsupportedComponent, Validation)
SOLITON_DEFINE_ERROR(MixedExponentialRates, Validation)
SOLITON_DEFINE_ERROR(NotSimple, Validation)
SOLITON_DEFINE_ERROR(NoVertex, Validation)
SOLITON_DEFINE_ERROR(InvalidConeData, Validation)
SOLITON_DEFINE_ERROR(NoPositiveRoot, NonConvergence)
SOLITON_DEFINE_ERROR(NotInLambda, Infeasible)
SOLITON_DEFINE_ERROR(EmptyLambda, Infeasible)

#undef SOLITON_DEFINE_ERROR

/** Some denominator covector pairs to zero with the evaluation point. */
class SingularDenominator : public SolitonError
{
    public:
        SingularDenominator(const std::string& covector, const std::string& what)
            : SolitonError(ErrorKind::Infeasible, what), covector_(covector) {}
        const std::string& covector() const noexcept { return covector_; }

    private:
        std::string covector_;
};

/** The minimizer ran out of iterations; carries the best iterate found. */
class NotConverged : public SolitonError
{
    public:
        NotConverged(std::vector<double> best, double grad_norm, const std::string& what)
            : SolitonError(ErrorKind::NonConvergence, what),
              best_(std::move(best)), grad_norm_(grad_norm) {}
        const std::vector<double>& best_iterate() const noexcept { return best_; }
        double grad_norm() const noexcept { return grad_norm_; }

    private:
        std::vector<double> best_;
        double grad_norm_;
};

}   // namespace soliton

#endif
