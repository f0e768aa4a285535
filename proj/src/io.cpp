#include "soliton/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key))
        throw InvalidInput(where + ": missing field '" + key + "'");
    return obj.at(key);
}

long require_integer(const Json& obj, const char* key, const std::string& where)
{
    const Json& v = require(obj, key, where);
    if (!v.is_number_integer())
        throw InvalidInput(where + ": field '" + key + "' must be an integer");
    return v.get<long>();
}

const Json& require_array(const Json& obj, const char* key, const std::string& where)
{
    const Json& v = require(obj, key, where);
    if (!v.is_array())
        throw InvalidInput(where + ": field '" + key + "' must be an array");
    return v;
}

std::vector<long> integer_list(const Json& arr, const std::string& where)
{
    std::vector<long> out;
    for (const auto& v : arr)
    {
        if (!v.is_number_integer())
            throw InvalidInput(where + ": expected integers");
        out.push_back(v.get<long>());
    }
    return out;
}

std::optional<ConeDescription> decode_cone(const Json& payload, std::size_t rank)
{
    if (!payload.contains("cone"))
        return std::nullopt;
    const Json& gens = payload.at("cone");
    if (!gens.is_array())
        throw InvalidInput("cone must be an array of generators");
    ConeDescription cone{rank, {}};
    for (const auto& g : gens)
        cone.generators.push_back(decode_covector(g, rank));
    return cone;
}

std::size_t decode_rank(const Json& payload, const std::string& where)
{
    long rank = require_integer(payload, "rank", where);
    if (rank < 1 || rank > 64)
        throw InvalidInput(where + ": rank must be between 1 and 64");
    return static_cast<std::size_t>(rank);
}

}   // namespace

std::string to_string(DocumentKind kind)
{
    switch (kind)
    {
        case DocumentKind::Localization: return "localization";
        case DocumentKind::Builtin: return "builtin";
        case DocumentKind::Polyhedron: return "polyhedron";
        case DocumentKind::CyclicQuotient: return "cyclic_quotient";
        case DocumentKind::StarGraph: return "star_graph";
        case DocumentKind::ResolutionCurves: return "resolution_curves";
    }
    return "builtin";
}

DocumentKind parse_document_kind(const std::string& name)
{
    for (auto kind : {DocumentKind::Localization, DocumentKind::Builtin, DocumentKind::Polyhedron,
                      DocumentKind::CyclicQuotient, DocumentKind::StarGraph, DocumentKind::ResolutionCurves})
        if (to_string(kind) == name)
            return kind;
    throw InvalidInput("unknown document kind '" + name + "'");
}

Json ProblemDocument::to_json() const
{
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = to_string(kind);
    doc["payload"] = payload;
    if (solver)
        doc["solver"] = *solver;
    return doc;
}

ProblemDocument parse_problem_document(const Json& doc)
{
    if (!doc.is_object())
        throw InvalidInput("problem document must be a JSON object");
    const Json& version = require(doc, "schema_version", "document");
    if (!version.is_string() || version.get<std::string>() != kSchemaVersion)
        throw InvalidInput("unsupported schema_version (expected \"1\")");
    const Json& kind = require(doc, "kind", "document");
    if (!kind.is_string())
        throw InvalidInput("document kind must be a string");
    ProblemDocument out;
    out.kind = parse_document_kind(kind.get<std::string>());
    out.payload = require(doc, "payload", "document");
    if (!out.payload.is_object())
        throw InvalidInput("payload must be an object");
    if (doc.contains("solver"))
    {
        if (!doc.at("solver").is_object())
            throw InvalidInput("solver overrides must be an object");
        out.solver = doc.at("solver");
        decode_solver(out.solver, SolverConfig{});
    }
    for (const auto& [key, value] : doc.items())
        if (key != "schema_version" && key != "kind" && key != "payload" && key != "solver")
            throw InvalidInput("unknown document field '" + key + "'");

    // Decode once so that a malformed payload is reported up front.
    switch (out.kind)
    {
        case DocumentKind::Localization:
        case DocumentKind::Builtin: decode_localization(out); break;
        case DocumentKind::Polyhedron: decode_polyhedron(out); break;
        case DocumentKind::CyclicQuotient:
            decode_cyclic_quotient(out.payload);
            decode_orientation(out.payload);
            break;
        case DocumentKind::StarGraph: decode_star_graph(out.payload); break;
        case DocumentKind::ResolutionCurves: decode_resolution_curves(out.payload); break;
    }
    return out;
}

ProblemDocument read_problem_document(std::istream& in)
{
    Json doc;
    try
    {
        doc = Json::parse(in);
    }
    catch (const Json::parse_error& e)
    {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
    return parse_problem_document(doc);
}

BuiltinSpec parse_builtin_shortcut(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':'))
        parts.push_back(part);
    auto to_int = [&](const std::string& s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw InvalidInput("bad builtin shortcut '" + text + "'");
        return v;
    };
    BuiltinSpec spec;
    if (parts.size() == 2)
        spec = {parts[0], to_int(parts[1]), 0};
    else if (parts.size() == 3)
        spec = {parts[0], to_int(parts[1]), to_int(parts[2])};
    else
        throw InvalidInput("builtin shortcut must look like Cn:3 or OkPn:3:1");
    validate_builtin(spec);
    return spec;
}

ProblemDocument builtin_document(const BuiltinSpec& spec)
{
    validate_builtin(spec);
    ProblemDocument doc;
    doc.kind = DocumentKind::Builtin;
    doc.payload["model"] = spec.name;
    doc.payload["n"] = spec.n;
    if (spec.name == "OkPn")
        doc.payload["k"] = spec.k;
    return doc;
}

BuiltinSpec decode_builtin(const Json& payload)
{
    const Json& model = require(payload, "model", "builtin");
    if (!model.is_string())
        throw InvalidInput("builtin model must be a string");
    BuiltinSpec spec;
    spec.name = model.get<std::string>();
    spec.n = static_cast<int>(require_integer(payload, "n", "builtin"));
    if (spec.name == "OkPn")
        spec.k = static_cast<int>(require_integer(payload, "k", "builtin"));
    validate_builtin(spec);
    return spec;
}

LocalizationProblem decode_localization(const ProblemDocument& doc)
{
    if (doc.kind == DocumentKind::Builtin)
        return builtin_model(decode_builtin(doc.payload));
    if (doc.kind != DocumentKind::Localization)
        throw InvalidInput("expected a localization or builtin document, got " + to_string(doc.kind));

    const Json& payload = doc.payload;
    std::size_t rank = decode_rank(payload, "localization");
    auto cone = decode_cone(payload, rank);
    if (payload.contains("line_bundle"))
    {
        const Json& lb = payload.at("line_bundle");
        LineBundleComponent component;
        component.base_dim = static_cast<int>(require_integer(lb, "base_dim", "line_bundle"));
        for (const auto& a : require_array(lb, "chern_integrals", "line_bundle"))
        {
            Rational value = decode_rational(a);
            if (boost::multiprecision::denominator(value) != 1)
                throw InvalidInput("chern_integrals must be integers");
            component.chern_integrals.push_back(boost::multiprecision::numerator(value));
        }
        return LocalizationProblem(rank, std::move(component), cone);
    }
    std::vector<IsolatedFixedPoint> points;
    for (const auto& p : require_array(payload, "fixed_points", "localization"))
    {
        IsolatedFixedPoint point;
        point.moment_value = decode_covector(require(p, "moment", "fixed point"), rank);
        for (const auto& w : require_array(p, "weights", "fixed point"))
            point.weights.push_back(decode_covector(w, rank));
        points.push_back(std::move(point));
    }
    if (points.empty())
        throw InvalidInput("localization document needs at least one fixed point");
    return LocalizationProblem(rank, std::move(points), cone);
}

Polyhedron decode_polyhedron(const ProblemDocument& doc)
{
    if (doc.kind == DocumentKind::Builtin)
        return builtin_polyhedron(decode_builtin(doc.payload));
    if (doc.kind != DocumentKind::Polyhedron)
        throw InvalidInput("expected a polyhedron or builtin document, got " + to_string(doc.kind));
    const Json& payload = doc.payload;
    std::size_t rank = decode_rank(payload, "polyhedron");
    std::vector<Inequality> ineqs;
    for (const auto& ineq : require_array(payload, "inequalities", "polyhedron"))
        ineqs.push_back({decode_covector(require(ineq, "normal", "inequality"), rank),
                         decode_rational(require(ineq, "offset", "inequality"))});
    std::optional<std::vector<Covector>> lattice;
    if (payload.contains("lattice"))
    {
        lattice.emplace();
        for (const auto& row : require_array(payload, "lattice", "polyhedron"))
            lattice->push_back(decode_covector(row, rank));
    }
    return Polyhedron(rank, std::move(ineqs), std::move(lattice));
}

CyclicQuotient decode_cyclic_quotient(const Json& payload)
{
    CyclicQuotient c{require_integer(payload, "p", "cyclic_quotient"), require_integer(payload, "q", "cyclic_quotient")};
    c.validate();
    return c;
}

HJOrientation decode_orientation(const Json& payload)
{
    if (!payload.contains("orientation"))
        return HJOrientation::POverQ;
    const Json& o = payload.at("orientation");
    if (o == "p/q")
        return HJOrientation::POverQ;
    if (o == "q/p")
        return HJOrientation::QOverP;
    throw InvalidInput("orientation must be \"p/q\" or \"q/p\"");
}

StarGraph decode_star_graph(const Json& payload)
{
    StarGraph g;
    g.b = require_integer(payload, "b", "star_graph");
    g.genus = require_integer(payload, "genus", "star_graph");
    if (payload.contains("branches"))
    {
        if (!payload.at("branches").is_array())
            throw InvalidInput("star_graph: branches must be an array");
        for (const auto& chain : payload.at("branches"))
        {
            if (!chain.is_array())
                throw InvalidInput("star_graph: each branch must be an array");
            g.branches.push_back(integer_list(chain, "star_graph"));
        }
    }
    g.validate();
    return g;
}

std::vector<long> decode_resolution_curves(const Json& payload)
{
    auto curves = integer_list(require_array(payload, "self_intersections", "resolution_curves"), "resolution_curves");
    for (long v : curves)
        if (v > -1)
            throw InvalidInput("resolution_curves: self-intersections must be <= -1");
    return curves;
}

SolverConfig decode_solver(const std::optional<Json>& solver, SolverConfig base)
{
    if (!solver)
        return base;
    for (const auto& [key, value] : solver->items())
    {
        if (key == "grad_tol")
            base.grad_tol = static_cast<double>(value.is_string() ? parse_real(value.get<std::string>())
                                                                  : value.get<long double>());
        else if (key == "max_iter" && value.is_number_integer())
            base.max_iter = value.get<int>();
        else if (key == "precision" && value.is_string())
            base.precision = parse_precision(value.get<std::string>());
        else if (key == "use_symmetry" && value.is_boolean())
            base.use_symmetry = value.get<bool>();
        else if (key == "initial_point" && value.is_array())
        {
            std::vector<double> point;
            for (const auto& v : value)
                point.push_back(static_cast<double>(v.is_string() ? parse_real(v.get<std::string>())
                                                                  : v.get<long double>()));
            base.initial_point = point;
        }
        else
            throw InvalidInput("invalid solver override '" + key + "'");
    }
    base.validate();
    return base;
}

Json encode_rational(const Rational& value)
{
    return to_string(value);
}

Rational decode_rational(const Json& value)
{
    if (value.is_number_integer())
        return Rational(value.get<long long>());
    if (value.is_string())
        return parse_rational(value.get<std::string>());
    throw InvalidInput("rational must be a \"p/q\" string or an integer");
}

Json encode_covector(const Covector& c)
{
    Json arr = Json::array();
    for (const auto& v : c.coords())
        arr.push_back(encode_rational(v));
    return arr;
}

Covector decode_covector(const Json& value, std::size_t rank)
{
    if (!value.is_array())
        throw InvalidInput("covector must be an array");
    if (value.size() != rank)
        throw InvalidInput("covector has length " + std::to_string(value.size()) + ", expected "
                           + std::to_string(rank));
    std::vector<Rational> coords;
    for (const auto& v : value)
        coords.push_back(decode_rational(v));
    return Covector(std::move(coords));
}

std::string format_real(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string format_real(long double value)
{
    char buf[96];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

Json encode_real(long double value, Precision precision)
{
    Json out;
    out["value"] = precision == Precision::Extended ? format_real(value) : format_real(static_cast<double>(value));
    out["precision"] = to_string(precision);
    return out;
}

Json encode_real_vector(const std::vector<long double>& values, Precision precision)
{
    Json arr = Json::array();
    for (long double v : values)
        arr.push_back(precision == Precision::Extended ? format_real(v) : format_real(static_cast<double>(v)));
    Json out;
    out["value"] = arr;
    out["precision"] = to_string(precision);
    return out;
}

long double parse_real(const std::string& text)
{
    auto slash = text.find('/');
    if (slash != std::string::npos)
        return parse_real(text.substr(0, slash)) / parse_real(text.substr(slash + 1));
    const char* begin = text.c_str();
    char* end = nullptr;
    long double v = std::strtold(begin, &end);
    if (text.empty() || end != begin + text.size() || !std::isfinite(v))
        throw InvalidInput("not a finite number: '" + text + "'");
    return v;
}

std::vector<long double> parse_real_list(const std::string& text)
{
    std::vector<long double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_real(item));
    if (out.empty())
        throw InvalidInput("empty list of numbers");
    return out;
}

Json encode_sum(const ExpRationalSum& sum)
{
    Json terms = Json::array();
    for (const auto& t : sum.terms())
    {
        Json term;
        term["coefficient"] = encode_rational(t.coefficient);
        term["exponent"] = encode_covector(t.exponent);
        Json den = Json::array();
        for (const auto& f : t.denominator)
            den.push_back({{"covector", encode_covector(f.weight)}, {"multiplicity", f.multiplicity}});
        term["denominator"] = den;
        terms.push_back(term);
    }
    return terms;
}

ExpRationalSum decode_sum(const Json& terms, std::size_t rank)
{
    if (!terms.is_array())
        throw InvalidInput("symbolic sum must be an array of terms");
    ExpRationalSum sum(rank, {});
    for (const auto& t : terms)
    {
        ExpRationalTerm term;
        term.coefficient = decode_rational(require(t, "coefficient", "term"));
        term.exponent = decode_covector(require(t, "exponent", "term"), rank);
        for (const auto& f : require_array(t, "denominator", "term"))
            term.denominator.push_back({decode_covector(require(f, "covector", "factor"), rank),
                                        static_cast<int>(require_integer(f, "multiplicity", "factor"))});
        sum.add(std::move(term));
    }
    return sum;
}

Json encode_polynomial(const Polynomial& p)
{
    Json coeffs = Json::array();
    for (int i = 0; i <= p.degree(); ++i)
        coeffs.push_back(encode_rational(p.coeff(i)));
    return {{"coefficients", coeffs}, {"text", p.to_string()}};
}

Json encode_form(const UnivariateForm& form)
{
    Json out;
    out["numerator"] = encode_polynomial(form.numerator);
    out["exp_rate"] = encode_rational(form.exp_rate);
    out["pole_order"] = form.pole_order;
    out["text"] = form.to_string();
    return out;
}

Json encode_cone(const ConeDescription& cone)
{
    Json gens = Json::array();
    for (const auto& g : cone.generators)
        gens.push_back(encode_covector(g));
    return gens;
}

Json encode_problem(const LocalizationProblem& problem)
{
    Json out;
    out["rank"] = problem.rank();
    if (problem.has_line_bundle())
    {
        Json a = Json::array();
        for (const auto& v : problem.line_bundle().chern_integrals)
            a.push_back(v.str());
        out["line_bundle"] = {{"base_dim", problem.line_bundle().base_dim}, {"chern_integrals", a}};
    }
    else
    {
        Json points = Json::array();
        for (const auto& p : problem.fixed_points())
        {
            Json weights = Json::array();
            for (const auto& w : p.weights)
                weights.push_back(encode_covector(w));
            points.push_back({{"moment", encode_covector(p.moment_value)}, {"weights", weights}});
        }
        out["fixed_points"] = points;
    }
    if (problem.cone())
        out["cone"] = encode_cone(*problem.cone());
    return out;
}

namespace {

void check_leaves(const Json& node, const std::string& path)
{
    if (node.is_number_float())
        throw InvalidInput("report field " + path + " is a bare float; reals must be decimal strings");
    if (node.is_object())
    {
        if (node.contains("value") && node.contains("precision"))
        {
            const Json& p = node.at("precision");
            if (!p.is_string())
                throw InvalidInput("report field " + path + ".precision must be a string");
            std::string precision = p.get<std::string>();
            if (precision != "f64" && precision != "extended" && precision != "exact")
                throw InvalidInput("report field " + path + " has unknown precision '" + precision + "'");
            const Json& v = node.at("value");
            auto check_real = [&](const Json& x) {
                if (!x.is_string())
                    throw InvalidInput("report field " + path + ".value must hold decimal strings");
                parse_real(x.get<std::string>());
            };
            if (v.is_array())
                for (const auto& x : v)
                    check_real(x);
            else
                check_real(v);
        }
        for (const auto& [key, value] : node.items())
            check_leaves(value, path + "." + key);
    }
    else if (node.is_array())
    {
        for (std::size_t i = 0; i < node.size(); ++i)
            check_leaves(node[i], path + "[" + std::to_string(i) + "]");
    }
}

}   // namespace

void validate_report(const Json& report)
{
    if (!report.is_object())
        throw InvalidInput("report must be an object");
    const Json& version = require(report, "schema_version", "report");
    if (version != kSchemaVersion)
        throw InvalidInput("report schema_version must be \"1\"");
    if (!require(report, "command", "report").is_string())
        throw InvalidInput("report command must be a string");
    const Json& inputs = require(report, "inputs", "report");
    if (!inputs.is_object())
        throw InvalidInput("report inputs must be an object");
    if (inputs.contains("document"))
        parse_problem_document(inputs.at("document"));
    for (const char* section : {"results", "diagnostics"})
    {
        const Json& node = require(report, section, "report");
        if (!node.is_object())
            throw InvalidInput(std::string("report ") + section + " must be an object");
        check_leaves(node, section);
    }
    for (const auto& [key, value] : inputs.items())
        if (key != "document")
            check_leaves(value, "inputs." + key);
}

}   // namespace soliton
