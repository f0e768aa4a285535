#include "soliton/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

struct Context
{
    std::string command;
    Json inputs;
    Json options;
    Json results = Json::object();
    Json diagnostics = Json::object();

    bool has(const char* key) const { return options.contains(key); }

    Precision precision() const
    {
        if (!has("precision"))
            return Precision::Double;
        return parse_precision(options.at("precision").get<std::string>());
    }

    bool oracle() const { return has("oracle") && options.at("oracle").get<bool>(); }

    ProblemDocument document() const
    {
        if (!inputs.contains("document"))
            throw InvalidInput(command + " needs a problem document");
        return parse_problem_document(inputs.at("document"));
    }

    std::vector<long double> zeta(std::size_t rank) const
    {
        if (!has("zeta"))
            throw InvalidInput(command + " needs a point zeta");
        std::vector<long double> out;
        for (const auto& v : options.at("zeta"))
            out.push_back(v.is_string() ? parse_real(v.get<std::string>()) : v.get<long double>());
        if (out.size() != rank)
            throw InvalidInput("zeta has length " + std::to_string(out.size()) + ", expected " + std::to_string(rank));
        return out;
    }

    long integer(const char* key, long fallback) const
    {
        if (!has(key))
            return fallback;
        const Json& v = options.at(key);
        if (!v.is_number_integer())
            throw InvalidInput(std::string("option ") + key + " must be an integer");
        return v.get<long>();
    }

    long double real(const char* key, long double fallback) const
    {
        if (!has(key))
            return fallback;
        const Json& v = options.at(key);
        return v.is_string() ? parse_real(v.get<std::string>()) : v.get<long double>();
    }
};

std::string zeta_text(const std::vector<long double>& zeta)
{
    std::string out = "(";
    for (std::size_t i = 0; i < zeta.size(); ++i)
        out += (i ? "," : "") + format_real(static_cast<double>(zeta[i]));
    return out + ")";
}

template <typename Real>
std::vector<Real> narrow(const std::vector<long double>& v)
{
    return std::vector<Real>(v.begin(), v.end());
}

long double evaluate(const ExpRationalSum& F, const std::vector<long double>& zeta, Precision precision)
{
    if (precision == Precision::Extended)
        return confluent_value<long double>(F, zeta);
    auto z = narrow<double>(zeta);
    return confluent_value<double>(F, z);
}

void require_lambda(const ConeDescription& cone, const std::vector<long double>& zeta)
{
    if (!lambda_membership<long double>(cone, zeta))
        throw NotInLambda("zeta = " + zeta_text(zeta) + " is not in the admissible cone");
}

Json tolerance(double value)
{
    return encode_real(value, Precision::Double);
}

std::optional<BuiltinSpec> builtin_of(const ProblemDocument& doc)
{
    if (doc.kind != DocumentKind::Builtin)
        return std::nullopt;
    return decode_builtin(doc.payload);
}

double relative_error(long double a, long double b)
{
    return static_cast<double>(std::abs(a - b) / std::max<long double>(std::abs(b), 1e-300L));
}

// Cheap lattice-point oracle only for small rank.
constexpr std::size_t kCharacterOracleMaxRank = 2;

void cmd_volume_eval(Context& ctx)
{
    auto doc = ctx.document();
    auto problem = decode_localization(doc);
    ExpRationalSum F = assemble_F(problem);
    auto zeta = ctx.zeta(problem.rank());
    require_lambda(asymptotic_cone(problem), zeta);
    Precision precision = ctx.precision();

    long double value = evaluate(F, zeta, precision);
    bool confluent = precision == Precision::Extended ? !is_nonsingular<long double>(F, zeta)
                                                      : !is_nonsingular<double>(F, narrow<double>(zeta));
    auto z64 = narrow<double>(zeta);
    EvaluationPath path = precision == Precision::Extended ? evaluation_path<long double>(F, zeta)
                                                           : evaluation_path<double>(F, std::span<const double>(z64));
    ctx.results["F"] = encode_sum(F);
    ctx.results["value"] = encode_real(value, precision);
    ctx.results["confluent"] = confluent;
    ctx.diagnostics["evaluation_path"] = to_string(path);
    ctx.diagnostics["pole_tolerance"] = tolerance(ConfluentOptions{}.pole_tol);
    ctx.diagnostics["vanish_tolerance"] = tolerance(static_cast<double>(precision == Precision::Extended
                                                                            ? default_vanish_tolerance<long double>()
                                                                            : default_vanish_tolerance<double>()));

    if (!ctx.oracle())
        return;
    Json oracle;
    auto spec = builtin_of(doc);
    if (!spec)
    {
        oracle["available"] = false;
        oracle["reason"] = "polyhedron oracles need a builtin toric model";
    }
    else
    {
        Polyhedron P = builtin_polyhedron(*spec);
        ExpRationalSum brion = brion_integral(P);
        long double brion_value = evaluate(brion, zeta, precision);
        oracle["available"] = true;
        oracle["brion_equivalent"] = brion.equivalent_to(F);
        oracle["brion_value"] = encode_real(brion_value, precision);
        oracle["brion_relative_error"] = tolerance(relative_error(brion_value, value));
        if (problem.rank() <= kCharacterOracleMaxRank)
        {
            long k = ctx.integer("k", 1024);
            CharacterSumOptions opts;
            opts.cutoff = static_cast<double>(ctx.real("cutoff", opts.cutoff));
            double chi = character_sum(P, narrow<double>(zeta), static_cast<int>(k), opts);
            oracle["character_k"] = k;
            oracle["character_value"] = encode_real(chi, Precision::Double);
            oracle["character_relative_error"] = tolerance(relative_error(chi, value));
            oracle["character_cutoff"] = tolerance(opts.cutoff);
        }
    }
    ctx.diagnostics["oracle"] = oracle;
}

SolverConfig solver_config(const Context& ctx, const ProblemDocument& doc)
{
    SolverConfig base;
    base.precision = ctx.precision();
    SolverConfig config = decode_solver(doc.solver, base);
    if (ctx.has("precision"))
        config.precision = ctx.precision();
    if (ctx.has("tol"))
        config.grad_tol = static_cast<double>(ctx.real("tol", config.grad_tol));
    config.validate();
    return config;
}

void cmd_volume_minimize(Context& ctx)
{
    auto doc = ctx.document();
    auto problem = decode_localization(doc);
    SolverConfig config = solver_config(ctx, doc);
    CriticalPointReport report = minimize_F(problem, config);

    std::vector<long double> zeta(report.zeta_star.begin(), report.zeta_star.end());
    ctx.results["zeta_star"] = encode_real_vector(zeta, config.precision);
    ctx.results["value"] = encode_real(report.value, config.precision);
    ctx.results["grad_norm"] = encode_real(report.grad_norm, Precision::Double);
    ctx.results["iterations"] = report.iterations;
    Json orbits = Json::array();
    for (const auto& orbit : report.symmetry_orbits)
        orbits.push_back(orbit);
    ctx.results["symmetry_orbit"] = {{"group_order", report.symmetry_group_order},
                                     {"orbits", orbits},
                                     {"description", report.symmetry_description()}};
    ctx.diagnostics["grad_tol"] = tolerance(config.grad_tol);
    ctx.diagnostics["max_iter"] = config.max_iter;
    ctx.diagnostics["precision"] = to_string(config.precision);
    ctx.diagnostics["in_lambda"] = lambda_membership<double>(asymptotic_cone(problem), report.zeta_star);

    if (!ctx.oracle())
        return;
    ExpRationalSum F = assemble_F(problem);
    std::span<const double> z(report.zeta_star);
    Vector<double> fd = finite_difference_gradient<double>(F, z, config.fd_step);
    Matrix<double> H = hessian_F<double>(F, z);
    Eigen::SelfAdjointEigenSolver<Matrix<double>> eig(H);
    Json oracle;
    oracle["fd_gradient_inf_norm"] = tolerance(fd.lpNorm<Eigen::Infinity>() / std::max(1.0, report.value));
    oracle["fd_step"] = tolerance(config.fd_step);
    oracle["hessian_min_eigenvalue"] = tolerance(eig.eigenvalues().minCoeff());
    auto spec = builtin_of(doc);
    if (spec && spec->name == "OkPn")
    {
        Covector ones(std::vector<Rational>(problem.rank(), Rational(1)));
        double root = critical_root(critical_polynomial(restrict_diagonal(F, ones)));
        double worst = 0.0;
        for (double v : report.zeta_star)
            worst = std::max(worst, std::abs(v - root));
        oracle["diagonal_root"] = tolerance(root);
        oracle["diagonal_root_max_deviation"] = tolerance(worst);
    }
    ctx.diagnostics["oracle"] = oracle;
}

Covector parse_direction(const Context& ctx, std::size_t rank)
{
    if (!ctx.has("direction"))
        return Covector(std::vector<Rational>(rank, Rational(1)));
    std::vector<Rational> coords;
    for (const auto& v : ctx.options.at("direction"))
        coords.push_back(decode_rational(v));
    if (coords.size() != rank)
        throw InvalidInput("direction has length " + std::to_string(coords.size()) + ", expected "
                           + std::to_string(rank));
    return Covector(std::move(coords));
}

// F(k eta) for a form F(eta).
UnivariateForm rescaled(const UnivariateForm& form, const Rational& k)
{
    UnivariateForm out;
    Rational power = 1;
    std::vector<Rational> coeffs;
    for (int i = 0; i <= form.numerator.degree(); ++i, power *= k)
        coeffs.push_back(form.numerator.coeff(i) * power);
    Rational den = 1;
    for (int i = 0; i < form.pole_order; ++i)
        den *= k;
    out.numerator = Polynomial(coeffs) * (1 / den);
    out.exp_rate = form.exp_rate * k;
    out.pole_order = form.pole_order;
    return out.reduced();
}

void cmd_volume_restrict(Context& ctx)
{
    auto doc = ctx.document();
    auto problem = decode_localization(doc);
    ExpRationalSum F = assemble_F(problem);
    Covector direction = parse_direction(ctx, problem.rank());
    std::vector<long double> ray;
    for (const auto& c : direction.coords())
        ray.push_back(to_real<long double>(c));
    require_lambda(asymptotic_cone(problem), ray);

    UnivariateForm form = restrict_diagonal(F, direction);
    auto [scale, canonical] = form.canonical();
    Polynomial Q = critical_polynomial(form);
    double root = critical_root(Q);

    ctx.results["direction"] = encode_covector(direction);
    ctx.results["form"] = encode_form(form);
    ctx.results["canonical"] = {{"scale", encode_rational(scale)}, {"form", encode_form(canonical)}};
    ctx.results["critical_polynomial"] = encode_polynomial(Q);
    ctx.results["critical_root"] = encode_real(root, Precision::Double);
    std::vector<long double> point;
    for (long double c : ray)
        point.push_back(c * root);
    ctx.results["critical_point_on_ray"] = encode_real_vector(point, Precision::Double);
    if (auto spec = builtin_of(doc))
        ctx.results["model"] = spec->label();
    ctx.diagnostics["arithmetic"] = "exact";
    ctx.diagnostics["root_tolerance"] = tolerance(1e-12);

    if (!ctx.oracle())
        return;
    Json oracle;
    auto spec = builtin_of(doc);
    bool diagonal = std::all_of(direction.coords().begin(), direction.coords().end(),
                                [](const Rational& c) { return c == 1; });
    if (spec && spec->name == "OkPn" && diagonal)
    {
        UnivariateForm lb = rescaled(line_bundle_F(projective_line_bundle(spec->n - 1, spec->k)), Rational(spec->k));
        oracle["line_bundle_form"] = encode_form(lb);
        oracle["line_bundle_agrees"] = lb == form;
    }
    else
    {
        oracle["available"] = false;
        oracle["reason"] = "line bundle closed form needs a builtin O(-k) model on the diagonal";
    }
    ctx.diagnostics["oracle"] = oracle;
}

void cmd_toric_character(Context& ctx)
{
    auto doc = ctx.document();
    Polyhedron P = decode_polyhedron(doc);
    auto zeta = ctx.zeta(P.rank());
    long k = ctx.integer("k", 1024);
    if (k < 1)
        throw InvalidInput("k must be positive");
    CharacterSumOptions opts;
    opts.cutoff = static_cast<double>(ctx.real("cutoff", opts.cutoff));
    double value = character_sum(P, narrow<double>(zeta), static_cast<int>(k), opts);
    ctx.results["value"] = encode_real(value, Precision::Double);
    ctx.results["k"] = k;
    ctx.diagnostics["cutoff"] = tolerance(opts.cutoff);
    ctx.diagnostics["truncation_bound"] = tolerance(std::exp(-opts.cutoff));

    if (!ctx.oracle())
        return;
    long double brion = evaluate(brion_integral(P), zeta, Precision::Double);
    ctx.diagnostics["oracle"] = {{"brion_value", encode_real(brion, Precision::Double)},
                                 {"relative_error", tolerance(relative_error(value, brion))}};
}

void cmd_toric_brion(Context& ctx)
{
    auto doc = ctx.document();
    Polyhedron P = decode_polyhedron(doc);
    Json vertices = Json::array();
    for (const auto& vc : enumerate_vertices(P))
    {
        Json v = Json::array();
        for (const auto& c : vc.vertex)
            v.push_back(encode_rational(c));
        Json gens = Json::array();
        for (const auto& g : vc.generators)
            gens.push_back(encode_covector(g));
        vertices.push_back({{"vertex", v}, {"generators", gens}, {"det_norm", encode_rational(vc.det_norm)}});
    }
    ExpRationalSum sum = brion_integral(P);
    ctx.results["vertices"] = vertices;
    ctx.results["F"] = encode_sum(sum);
    ctx.results["lattice_covolume"] = encode_rational(P.lattice_covolume());
    if (ctx.has("zeta"))
    {
        auto zeta = ctx.zeta(P.rank());
        require_lambda(recession_cone(P), zeta);
        ctx.results["value"] = encode_real(evaluate(sum, zeta, ctx.precision()), ctx.precision());
    }
    ctx.diagnostics["arithmetic"] = "exact";
    if (auto spec = builtin_of(doc))
        ctx.diagnostics["localization_equivalent"] = sum.equivalent_to(assemble_F(builtin_model(*spec)));
}

void cmd_cone_lambda(Context& ctx)
{
    auto doc = ctx.document();
    ConeDescription cone;
    if (doc.kind == DocumentKind::Polyhedron)
        cone = recession_cone(decode_polyhedron(doc));
    else
        cone = asymptotic_cone(decode_localization(doc));
    ConeDescription dual = dual_cone(cone);
    ctx.results["recession_generators"] = encode_cone(cone);
    ctx.results["dual_generators"] = encode_cone(dual);
    if (ctx.has("zeta"))
        ctx.results["member"] = lambda_membership<long double>(cone, ctx.zeta(cone.rank));
    ctx.diagnostics["arithmetic"] = "exact";
}

void cmd_surface_hj(Context& ctx)
{
    auto doc = ctx.document();
    if (doc.kind != DocumentKind::CyclicQuotient)
        throw InvalidInput("surface hj needs a cyclic_quotient document");
    CyclicQuotient c = decode_cyclic_quotient(doc.payload);
    HJOrientation orientation = decode_orientation(doc.payload);
    if (ctx.has("orientation"))
        orientation = decode_orientation(Json{{"orientation", ctx.options.at("orientation")}});
    HJExpansion e = hj_expand(c, orientation);
    auto [d, den] = hj_value(e.coefficients);
    ctx.results["coefficients"] = e.coefficients;
    ctx.results["value"] = encode_rational(Rational(d, den));
    ctx.results["orientation"] = orientation == HJOrientation::POverQ ? "p/q" : "q/p";
    ctx.results["flagged"] = e.flagged;
    ctx.diagnostics["arithmetic"] = "exact";
}

Json matrix_json(const std::vector<std::vector<long>>& Q)
{
    Json rows = Json::array();
    for (const auto& row : Q)
        rows.push_back(row);
    return rows;
}

void cmd_surface_stargraph(Context& ctx)
{
    auto doc = ctx.document();
    if (doc.kind != DocumentKind::StarGraph)
        throw InvalidInput("surface stargraph needs a star_graph document");
    StarGraph g = decode_star_graph(doc.payload);
    Rational criterion = star_criterion(g);
    auto Q = build_intersection_matrix(g);
    auto minors = leading_minors_of_negation(Q);
    Json minors_json = Json::array();
    for (const auto& m : minors)
        minors_json.push_back(m.str());
    bool keylargo = criterion > 0;
    bool by_minors = minors_negative_definite(Q);
    Json fractions = Json::array();
    for (const auto& chain : g.branches)
    {
        auto [d, e] = hj_value(chain);
        fractions.push_back(encode_rational(Rational(d, e)));
    }
    ctx.results["criterion"] = encode_rational(criterion);
    ctx.results["branch_fractions"] = fractions;
    ctx.results["negative_definite"] = keylargo;
    ctx.results["intersection_matrix"] = matrix_json(Q);
    ctx.results["leading_minors"] = minors_json;
    ctx.results["minors_negative_definite"] = by_minors;
    ctx.diagnostics["arithmetic"] = "exact";
    ctx.diagnostics["tests_agree"] = keylargo == by_minors;
}

void cmd_surface_canonical(Context& ctx)
{
    auto doc = ctx.document();
    CanonicalModelVerdict verdict;
    if (doc.kind == DocumentKind::CyclicQuotient)
    {
        CyclicQuotient c = decode_cyclic_quotient(doc.payload);
        verdict = smooth_canonical_model(c);
        ctx.results["case"] = "cyclic_quotient";
        ctx.results["expansion"] = hj_expand(c).coefficients;
    }
    else if (doc.kind == DocumentKind::StarGraph)
    {
        StarGraph g = decode_star_graph(doc.payload);
        if (g.branches.empty())
        {
            verdict = smooth_canonical_model(NegLineBundleOverCurve{g.genus, g.b});
            ctx.results["case"] = "line_bundle";
        }
        else
        {
            verdict = smooth_canonical_model(g);
            ctx.results["case"] = "star_graph";
        }
    }
    else
    {
        throw InvalidInput("surface canonical needs a cyclic_quotient or star_graph document");
    }
    ctx.results["admits"] = verdict.admits;
    ctx.results["witness"] = verdict.witness;
    ctx.diagnostics["arithmetic"] = "exact";
}

void cmd_surface_shrinking(Context& ctx)
{
    auto doc = ctx.document();
    if (doc.kind != DocumentKind::ResolutionCurves)
        throw InvalidInput("surface shrinking needs a resolution_curves document");
    ShrinkingVerdict v = shrinking_admissible(decode_resolution_curves(doc.payload));
    ctx.results["admissible"] = v.admissible;
    ctx.results["manifold"] = to_string(v.manifold);
    ctx.diagnostics["arithmetic"] = "exact";
}

void cmd_models(Context& ctx)
{
    Json models = Json::array();
    for (const auto& spec : example_builtins())
    {
        auto problem = builtin_model(spec);
        models.push_back({{"label", spec.label()},
                          {"document", builtin_document(spec).to_json()},
                          {"localization", encode_problem(problem)}});
    }
    ctx.results["models"] = models;
}

using Handler = std::function<void(Context&)>;

const std::map<std::string, Handler>& handlers()
{
    static const std::map<std::string, Handler> table = {
        {"volume eval", cmd_volume_eval},
        {"volume minimize", cmd_volume_minimize},
        {"volume restrict", cmd_volume_restrict},
        {"toric character", cmd_toric_character},
        {"toric brion", cmd_toric_brion},
        {"cone lambda", cmd_cone_lambda},
        {"surface hj", cmd_surface_hj},
        {"surface stargraph", cmd_surface_stargraph},
        {"surface canonical", cmd_surface_canonical},
        {"surface shrinking", cmd_surface_shrinking},
        {"models", cmd_models},
    };
    return table;
}

}   // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, handler] : handlers())
            out.push_back(name);
        return out;
    }();
    return names;
}

Precision default_precision()
{
    const char* env = std::getenv("SOLITON_VOLUME_PRECISION");
    if (!env || !*env)
        return Precision::Double;
    return parse_precision(env);
}

Json run_command(const std::string& command, const Json& inputs)
{
    auto it = handlers().find(command);
    if (it == handlers().end())
        throw InvalidInput("unknown command '" + command + "'");
    if (!inputs.is_object())
        throw InvalidInput("inputs must be an object");
    Context ctx;
    ctx.command = command;
    ctx.inputs = inputs;
    ctx.options = inputs.contains("options") ? inputs.at("options") : Json::object();
    if (!ctx.options.is_object())
        throw InvalidInput("options must be an object");
    try
    {
        it->second(ctx);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InvalidInput(std::string("malformed input: ") + e.what());
    }

    Json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = command;
    report["inputs"] = inputs;
    report["results"] = ctx.results;
    report["diagnostics"] = ctx.diagnostics;
    return report;
}

}   // namespace soliton
