// soliton-volume: command line front end.
//
//   soliton-volume volume eval --builtin OkPn:2:1 --zeta 1,1
//   soliton-volume volume minimize problem.json --precision extended
//   soliton-volume surface hj quotient.json --table
//
// Exit codes: 0 ok, 2 validation, 3 non-convergence, 4 infeasible.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "soliton/commands.hpp"
#include "soliton/errors.hpp"

using namespace soliton;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitInfeasible = 4;

struct Flags
{
    std::string input;
    std::string builtin;
    std::string precision;
    std::string tol;
    std::string zeta;
    std::string direction;
    std::string cutoff;
    std::string orientation;
    std::string output;
    long k = 0;
    bool oracle = false;
    bool json = false;
    bool table = false;
};

std::vector<std::string> split(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        auto first = item.find_first_not_of(" \t");
        auto last = item.find_last_not_of(" \t");
        out.push_back(first == std::string::npos ? "" : item.substr(first, last - first + 1));
    }
    return out;
}

Json load_document(const Flags& flags, bool needed)
{
    if (!flags.builtin.empty())
    {
        if (!flags.input.empty())
            throw InvalidInput("give either an input document or --builtin, not both");
        return builtin_document(parse_builtin_shortcut(flags.builtin)).to_json();
    }
    if (flags.input.empty())
    {
        if (needed)
            throw InvalidInput("missing input document (path, '-' for stdin, or --builtin)");
        return nullptr;
    }
    ProblemDocument doc;
    if (flags.input == "-")
    {
        doc = read_problem_document(std::cin);
    }
    else
    {
        std::ifstream in(flags.input);
        if (!in)
            throw InvalidInput("cannot open '" + flags.input + "'");
        doc = read_problem_document(in);
    }
    return doc.to_json();
}

Json build_inputs(const std::string& command, const Flags& flags)
{
    Json inputs = Json::object();
    Json document = load_document(flags, command != "models");
    if (!document.is_null())
        inputs["document"] = document;

    Json options = Json::object();
    options["precision"] = to_string(flags.precision.empty() ? default_precision() : parse_precision(flags.precision));
    if (!flags.zeta.empty())
    {
        Json zeta = Json::array();
        for (const auto& v : split(flags.zeta))
        {
            parse_real(v);
            zeta.push_back(v);
        }
        options["zeta"] = zeta;
    }
    if (!flags.direction.empty())
    {
        Json direction = Json::array();
        for (const auto& v : split(flags.direction))
            direction.push_back(encode_rational(parse_rational(v)));
        options["direction"] = direction;
    }
    if (!flags.tol.empty())
    {
        if (!(parse_real(flags.tol) > 0))
            throw InvalidInput("--tol must be positive");
        options["tol"] = flags.tol;
    }
    if (flags.k != 0)
        options["k"] = flags.k;
    if (!flags.cutoff.empty())
    {
        parse_real(flags.cutoff);
        options["cutoff"] = flags.cutoff;
    }
    if (!flags.orientation.empty())
        options["orientation"] = flags.orientation;
    options["oracle"] = flags.oracle;
    inputs["options"] = options;
    return inputs;
}

std::string scalar_text(const Json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

void print_table(std::ostream& out, const Json& node, const std::string& prefix)
{
    if (node.is_object() && node.contains("value") && node.contains("precision"))
    {
        const Json& v = node.at("value");
        std::string text;
        if (v.is_array())
        {
            for (std::size_t i = 0; i < v.size(); ++i)
                text += (i ? ", " : "") + scalar_text(v[i]);
            text = "(" + text + ")";
        }
        else
        {
            text = scalar_text(v);
        }
        out << prefix << ": " << text << "  [" << node.at("precision").get<std::string>() << "]\n";
        return;
    }
    if (node.is_object())
    {
        for (const auto& [key, value] : node.items())
            print_table(out, value, prefix.empty() ? key : prefix + "." + key);
        return;
    }
    if (node.is_array())
    {
        bool flat = std::all_of(node.begin(), node.end(), [](const Json& x) { return x.is_primitive(); });
        if (flat)
        {
            std::string text;
            for (std::size_t i = 0; i < node.size(); ++i)
                text += (i ? ", " : "") + scalar_text(node[i]);
            out << prefix << ": [" << text << "]\n";
            return;
        }
        for (std::size_t i = 0; i < node.size(); ++i)
            print_table(out, node[i], prefix + "[" + std::to_string(i) + "]");
        return;
    }
    out << prefix << ": " << scalar_text(node) << "\n";
}

int exit_code(ErrorKind kind)
{
    switch (kind)
    {
        case ErrorKind::Validation: return kExitValidation;
        case ErrorKind::NonConvergence: return kExitNonConvergence;
        case ErrorKind::Infeasible: return kExitInfeasible;
    }
    return kExitValidation;
}

std::string kind_name(ErrorKind kind)
{
    switch (kind)
    {
        case ErrorKind::Validation: return "validation";
        case ErrorKind::NonConvergence: return "non_convergence";
        case ErrorKind::Infeasible: return "infeasible";
    }
    return "validation";
}

void report_error(const std::string& kind, const std::string& message, const Json& extra = Json::object())
{
    Json err = {{"schema_version", kSchemaVersion}, {"error", {{"kind", kind}, {"message", message}}}};
    for (const auto& [key, value] : extra.items())
        err["error"][key] = value;
    std::cerr << err.dump(2) << "\n";
}

int run(const std::string& command, const Flags& flags)
{
    try
    {
        Json report = run_command(command, build_inputs(command, flags));
        std::ostringstream text;
        if (flags.table)
        {
            text << command << "\n";
            print_table(text, report.at("results"), "");
            print_table(text, report.at("diagnostics"), "diagnostics");
        }
        else
        {
            text << report.dump(2) << "\n";
        }
        if (flags.output.empty())
        {
            std::cout << text.str();
        }
        else
        {
            std::ofstream out(flags.output);
            if (!out)
                throw InvalidInput("cannot write '" + flags.output + "'");
            out << text.str();
        }
        return 0;
    }
    catch (const NotConverged& e)
    {
        Json best = Json::array();
        for (double v : e.best_iterate())
            best.push_back(format_real(v));
        report_error("non_convergence", e.what(),
                     {{"best_iterate", {{"value", best}, {"precision", "f64"}}},
                      {"grad_norm", {{"value", format_real(e.grad_norm())}, {"precision", "f64"}}}});
        return kExitNonConvergence;
    }
    catch (const SolitonError& e)
    {
        report_error(kind_name(e.kind()), e.what());
        return exit_code(e.kind());
    }
    catch (const nlohmann::json::exception& e)
    {
        report_error("validation", e.what());
        return kExitValidation;
    }
}

}   // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weighted volume functionals, soliton vector fields and surface cone checks"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    app.add_option("--precision", flags.precision, "f64 or extended (default: $SOLITON_VOLUME_PRECISION or f64)");
    app.add_option("--tol", flags.tol, "gradient tolerance for minimize");
    app.add_option("--zeta", flags.zeta, "evaluation point, comma separated");
    app.add_option("--direction", flags.direction, "restriction direction a,b,c (rationals)");
    app.add_option("--k", flags.k, "dilation for character sums");
    app.add_option("--cutoff", flags.cutoff, "exponent cutoff for character sums");
    app.add_option("--builtin", flags.builtin, "builtin model such as Cn:3 or OkPn:3:1");
    app.add_option("--orientation", flags.orientation, "Hirzebruch-Jung orientation p/q or q/p")
        ->check(CLI::IsMember({"p/q", "q/p"}));
    app.add_option("-o,--output", flags.output, "write the report to a file");
    app.add_flag("--oracle", flags.oracle, "attach independent cross-checks");
    auto* json_flag = app.add_flag("--json", flags.json, "JSON report (default)");
    auto* table_flag = app.add_flag("--table", flags.table, "plain key: value output");
    json_flag->excludes(table_flag);

    std::string selected;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& command) {
        auto* sub = parent->add_subcommand(name, help);
        sub->add_option("input", flags.input, "problem document (path or '-')");
        sub->callback([&selected, command] { selected = command; });
        return sub;
    };

    auto* volume = app.add_subcommand("volume", "weighted volume functional");
    volume->require_subcommand(1);
    leaf(volume, "eval", "evaluate F at --zeta", "volume eval");
    leaf(volume, "minimize", "find the critical point of F", "volume minimize");
    leaf(volume, "restrict", "restrict F to a ray and find its critical point", "volume restrict");

    auto* toric = app.add_subcommand("toric", "polyhedral oracles");
    toric->require_subcommand(1);
    leaf(toric, "character", "dilated lattice-point character sum", "toric character");
    leaf(toric, "brion", "vertex-cone integral", "toric brion");

    auto* cone = app.add_subcommand("cone", "admissible cone");
    cone->require_subcommand(1);
    leaf(cone, "lambda", "recession cone, dual generators, membership", "cone lambda");

    auto* surface = app.add_subcommand("surface", "two-dimensional cones");
    surface->require_subcommand(1);
    leaf(surface, "hj", "Hirzebruch-Jung expansion", "surface hj");
    leaf(surface, "stargraph", "negative definiteness of a star graph", "surface stargraph");
    leaf(surface, "canonical", "smooth canonical model verdict", "surface canonical");
    leaf(surface, "shrinking", "shrinking soliton admissibility", "surface shrinking");

    auto* models = app.add_subcommand("models", "list builtin models and their fixed point data");
    models->callback([&selected] { selected = "models"; });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitValidation;
    }
    return run(selected, flags);
}
