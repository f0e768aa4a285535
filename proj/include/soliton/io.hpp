#ifndef SOLITON_IO_HPP
#define SOLITON_IO_HPP

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "soliton/exp_rational.hpp"
#include "soliton/localization.hpp"
#include "soliton/surface.hpp"
#include "soliton/toric.hpp"
#include "soliton/volume_min.hpp"

namespace soliton {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

enum class DocumentKind
{
    Localization,
    Builtin,
    Polyhedron,
    CyclicQuotient,
    StarGraph,
    ResolutionCurves,
};

std::string to_string(DocumentKind kind);
DocumentKind parse_document_kind(const std::string& name);

/**
 * {"schema_version": "1", "kind": ..., "payload": {...}, "solver": {...}}
 * The payload is decoded lazily by the accessors below.
 */
struct ProblemDocument
{
    DocumentKind kind = DocumentKind::Builtin;
    Json payload;
    std::optional<Json> solver;

    Json to_json() const;
};

ProblemDocument parse_problem_document(const Json& doc);
ProblemDocument read_problem_document(std::istream& in);

/** "Cn:3" or "OkPn:3:1". */
BuiltinSpec parse_builtin_shortcut(const std::string& text);
ProblemDocument builtin_document(const BuiltinSpec& spec);

BuiltinSpec decode_builtin(const Json& payload);
/** kind localization or builtin. */
LocalizationProblem decode_localization(const ProblemDocument& doc);
/** kind polyhedron or builtin. */
Polyhedron decode_polyhedron(const ProblemDocument& doc);
CyclicQuotient decode_cyclic_quotient(const Json& payload);
HJOrientation decode_orientation(const Json& payload);
StarGraph decode_star_graph(const Json& payload);
std::vector<long> decode_resolution_curves(const Json& payload);
/** Applies the document's solver overrides on top of base. */
SolverConfig decode_solver(const std::optional<Json>& solver, SolverConfig base);

Json encode_rational(const Rational& value);
Rational decode_rational(const Json& value);
Json encode_covector(const Covector& c);
Covector decode_covector(const Json& value, std::size_t rank);

/** Shortest round-trip decimal string. */
std::string format_real(double value);
std::string format_real(long double value);
/** {"value": "<decimal>", "precision": "f64" | "extended"} */
Json encode_real(long double value, Precision precision);
Json encode_real_vector(const std::vector<long double>& values, Precision precision);
/** Parses a decimal or rational literal to long double. */
long double parse_real(const std::string& text);
std::vector<long double> parse_real_list(const std::string& text);

Json encode_sum(const ExpRationalSum& sum);
ExpRationalSum decode_sum(const Json& terms, std::size_t rank);
Json encode_form(const UnivariateForm& form);
Json encode_polynomial(const Polynomial& p);
Json encode_cone(const ConeDescription& cone);
Json encode_problem(const LocalizationProblem& problem);

/**
 * Throws InvalidInput unless the report has schema_version "1", a command,
 * an inputs object carrying a valid problem document (when present), and
 * results/diagnostics objects whose real-valued leaves carry a precision.
 */
void validate_report(const Json& report);

}   // namespace soliton

#endif
