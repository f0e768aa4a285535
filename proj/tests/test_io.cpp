#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "soliton/commands.hpp"
#include "soliton/errors.hpp"
#include "soliton/io.hpp"

using namespace soliton;

namespace {

Json builtin_inputs(const std::string& shortcut, Json options = Json::object())
{
    return {{"document", builtin_document(parse_builtin_shortcut(shortcut)).to_json()}, {"options", options}};
}

Json doc_inputs(const std::string& kind, Json payload, Json options = Json::object())
{
    Json doc = {{"schema_version", "1"}, {"kind", kind}, {"payload", payload}};
    return {{"document", doc}, {"options", options}};
}

long double real_of(const Json& entry)
{
    return parse_real(entry.at("value").get<std::string>());
}

Json checked(const std::string& command, const Json& inputs)
{
    Json r = run_command(command, inputs);
    validate_report(r);
    EXPECT_EQ(run_command(r.at("command").get<std::string>(), r.at("inputs")).dump(), r.dump()) << command;
    EXPECT_EQ(Json::parse(r.dump()), r);
    return r;
}

}   // namespace

TEST(Document, ParsesBuiltinAndShortcut)
{
    auto spec = parse_builtin_shortcut("OkPn:3:2");
    auto doc = parse_problem_document(builtin_document(spec).to_json());
    EXPECT_EQ(doc.kind, DocumentKind::Builtin);
    EXPECT_EQ(decode_builtin(doc.payload).label(), spec.label());
    EXPECT_EQ(parse_builtin_shortcut("Cn:3").label(), "C^3");
    EXPECT_THROW(parse_builtin_shortcut("Cn"), InvalidInput);
    EXPECT_THROW(parse_builtin_shortcut("Cn:x"), InvalidInput);
}

TEST(Document, RejectsMalformed)
{
    Json good = builtin_document({"Cn", 2, 0}).to_json();
    Json bad_version = good;
    bad_version["schema_version"] = "2";
    EXPECT_THROW(parse_problem_document(bad_version), InvalidInput);
    Json bad_kind = good;
    bad_kind["kind"] = "torus";
    EXPECT_THROW(parse_problem_document(bad_kind), InvalidInput);
    Json extra = good;
    extra["unexpected"] = 1;
    EXPECT_THROW(parse_problem_document(extra), InvalidInput);
    EXPECT_THROW(parse_problem_document(Json::array()), InvalidInput);

    std::istringstream truncated("{\"schema_version\": \"1\", ");
    EXPECT_THROW(read_problem_document(truncated), InvalidInput);
}

TEST(Document, LocalizationPayloadRoundTrip)
{
    auto problem = builtin_model({"OkPn", 2, 1});
    Json doc = {{"schema_version", "1"}, {"kind", "localization"}, {"payload", encode_problem(problem)}};
    auto back = decode_localization(parse_problem_document(doc));
    EXPECT_TRUE(assemble_F(back).equivalent_to(assemble_F(problem)));
}

TEST(Document, LocalizationValidationErrors)
{
    Json payload = {{"rank", 2}, {"fixed_points", {{{"moment", {"0", "0"}}, {"weights", {{"1", "0"}}}}}}};
    Json doc = {{"schema_version", "1"}, {"kind", "localization"}, {"payload", payload}};
    EXPECT_THROW(decode_localization(parse_problem_document(doc)), SolitonError);
}

TEST(Encoding, Rationals)
{
    for (const char* s : {"0", "3", "-7/2", "1/18"})
        EXPECT_EQ(encode_rational(decode_rational(s)).get<std::string>(), s);
    EXPECT_EQ(decode_rational(Json(4)), Rational(4));
    EXPECT_EQ(decode_rational(Json("6/4")), Rational(3, 2));
    EXPECT_THROW(decode_rational(Json("1/0")), InvalidInput);
    EXPECT_THROW(decode_rational(Json(0.5)), InvalidInput);
}

TEST(Encoding, RealsRoundTripExactly)
{
    for (double x : {1.0, std::sqrt(2.0), 1e-300, -2.5e17, 0.1})
        EXPECT_EQ(static_cast<double>(parse_real(format_real(x))), x);
    for (long double x : {std::sqrt(2.0L), 1.0L / 3, std::exp(1.0L)})
        EXPECT_EQ(parse_real(format_real(x)), x);
    Json e = encode_real(1.5L, Precision::Extended);
    EXPECT_EQ(e.at("precision"), "extended");
    EXPECT_EQ(real_of(e), 1.5L);
    EXPECT_EQ(parse_real("1/4"), 0.25L);
    EXPECT_THROW(parse_real("1.0x"), InvalidInput);
    EXPECT_THROW(parse_real(""), InvalidInput);
    EXPECT_EQ(parse_real_list("1,2.5,1/2"), (std::vector<long double>{1, 2.5, 0.5}));
}

TEST(Encoding, SumRoundTrip)
{
    for (const auto& spec : example_builtins())
    {
        auto F = assemble_F(builtin_model(spec));
        Json j = encode_sum(F);
        auto back = decode_sum(j, F.rank());
        EXPECT_TRUE(back.equivalent_to(F)) << spec.label();
        EXPECT_EQ(encode_sum(back), j) << spec.label();
    }
}

TEST(Report, ValidatorRejectsBareFloats)
{
    Json r = run_command("surface hj", doc_inputs("cyclic_quotient", {{"p", 8}, {"q", 3}}));
    validate_report(r);
    Json bad = r;
    bad["results"]["extra"] = 0.5;
    EXPECT_THROW(validate_report(bad), InvalidInput);
    Json unknown_precision = r;
    unknown_precision["results"]["extra"] = {{"value", "0.5"}, {"precision", "quad"}};
    EXPECT_THROW(validate_report(unknown_precision), InvalidInput);
    Json not_decimal = r;
    not_decimal["results"]["extra"] = {{"value", {"1", "x"}}, {"precision", "f64"}};
    EXPECT_THROW(validate_report(not_decimal), InvalidInput);
    Json wrong_version = r;
    wrong_version["schema_version"] = "0";
    EXPECT_THROW(validate_report(wrong_version), InvalidInput);
}

TEST(Commands, EveryCommandProducesValidReproducibleReport)
{
    Json poly_payload = {{"rank", 2},
                         {"inequalities",
                          {{{"normal", {"1", "0"}}, {"offset", "-1"}},
                           {{"normal", {"0", "1"}}, {"offset", "-1"}},
                           {{"normal", {"1", "1"}}, {"offset", "-1"}}}}};
    std::vector<std::pair<std::string, Json>> cases = {
        {"volume eval", builtin_inputs("OkPn:2:1", {{"zeta", {"1", "1"}}, {"oracle", true}})},
        {"volume minimize", builtin_inputs("Cn:3", {{"oracle", true}})},
        {"volume restrict", builtin_inputs("OkPn:3:2", {{"oracle", true}})},
        {"toric character", doc_inputs("polyhedron", poly_payload, {{"zeta", {"1", "1"}}, {"k", 64}})},
        {"toric brion", builtin_inputs("OkPn:2:1", {{"zeta", {"1", "2"}}})},
        {"cone lambda", builtin_inputs("OkPn:2:1", {{"zeta", {"1", "2"}}})},
        {"surface hj", doc_inputs("cyclic_quotient", {{"p", 8}, {"q", 3}})},
        {"surface stargraph", doc_inputs("star_graph", {{"b", 2}, {"genus", 1}, {"branches", {{3}, {4}}}})},
        {"surface canonical", doc_inputs("cyclic_quotient", {{"p", 3}, {"q", 1}})},
        {"surface shrinking", doc_inputs("resolution_curves", {{"self_intersections", {-1}}})},
        {"models", Json::object()},
    };
    std::set<std::string> seen;
    for (const auto& [command, inputs] : cases)
    {
        Json r = checked(command, inputs);
        EXPECT_EQ(r.at("schema_version"), "1");
        EXPECT_EQ(r.at("inputs"), inputs);
        seen.insert(command);
    }
    for (const auto& name : command_names())
        EXPECT_TRUE(seen.count(name)) << name;
}

TEST(Commands, UnknownCommandAndBadOptions)
{
    EXPECT_THROW(run_command("volume frobnicate", Json::object()), InvalidInput);
    EXPECT_THROW(run_command("volume eval", builtin_inputs("Cn:2")), InvalidInput);
    EXPECT_THROW(run_command("volume eval", builtin_inputs("Cn:2", {{"zeta", {"1"}}})), InvalidInput);
    EXPECT_THROW(run_command("volume eval", builtin_inputs("Cn:2", {{"zeta", {"1", "1"}}, {"precision", "quad"}})),
                 InvalidInput);
    EXPECT_THROW(run_command("volume eval", Json::array()), InvalidInput);
}

TEST(Commands, MalformedDocumentIsValidationError)
{
    Json inputs = doc_inputs("star_graph", {{"b", "two"}, {"genus", 1}, {"branches", Json::array()}});
    EXPECT_THROW(run_command("surface stargraph", inputs), InvalidInput);
    Json missing = doc_inputs("cyclic_quotient", {{"p", 5}});
    EXPECT_THROW(run_command("surface hj", missing), InvalidInput);
}

TEST(Commands, VolumeEvalValues)
{
    auto cn = checked("volume eval", builtin_inputs("Cn:2", {{"zeta", {"1", "1"}}}));
    EXPECT_NEAR(static_cast<double>(real_of(cn["results"]["value"])), std::exp(2.0), 1e-13);
    EXPECT_FALSE(cn["results"]["confluent"].get<bool>());

    auto blowup = checked("volume eval", builtin_inputs("OkPn:2:1", {{"zeta", {"1", "1"}}, {"oracle", true}}));
    EXPECT_NEAR(static_cast<double>(real_of(blowup["results"]["value"])), 2 * std::exp(1.0), 1e-13);
    EXPECT_TRUE(blowup["results"]["confluent"].get<bool>());
    EXPECT_TRUE(blowup["diagnostics"]["oracle"]["brion_equivalent"].get<bool>());
    EXPECT_LT(real_of(blowup["diagnostics"]["oracle"]["character_relative_error"]), 5e-3L);

    auto ext = checked("volume eval",
                       builtin_inputs("OkPn:2:1", {{"zeta", {"1", "1"}}, {"precision", "extended"}}));
    EXPECT_EQ(ext["results"]["value"]["precision"], "extended");
    EXPECT_NEAR(static_cast<double>(real_of(ext["results"]["value"])), 2 * std::exp(1.0), 1e-15);

    EXPECT_THROW(run_command("volume eval", builtin_inputs("OkPn:2:1", {{"zeta", {"1", "-1"}}})), NotInLambda);
}

TEST(Commands, MinimizeValues)
{
    auto cn = checked("volume minimize", builtin_inputs("Cn:4"));
    EXPECT_EQ(cn["results"]["zeta_star"]["value"].size(), 4u);
    for (const auto& z : cn["results"]["zeta_star"]["value"])
        EXPECT_NEAR(static_cast<double>(parse_real(z.get<std::string>())), 1.0, 1e-9);
    EXPECT_NEAR(static_cast<double>(real_of(cn["results"]["value"])), std::exp(4.0), 1e-9);
    EXPECT_TRUE(cn["diagnostics"]["in_lambda"].get<bool>());

    auto blowup = checked("volume minimize", builtin_inputs("OkPn:2:1", {{"oracle", true}}));
    for (const auto& z : blowup["results"]["zeta_star"]["value"])
        EXPECT_NEAR(static_cast<double>(parse_real(z.get<std::string>())), std::sqrt(2.0), 1e-9);
    EXPECT_GT(real_of(blowup["diagnostics"]["oracle"]["hessian_min_eigenvalue"]), 0);

    Json tight = builtin_inputs("OkPn:2:1", {{"tol", "1e-12"}});
    auto r = checked("volume minimize", tight);
    EXPECT_EQ(r["diagnostics"]["grad_tol"]["value"], "1e-12");
}

TEST(Commands, RestrictTexts)
{
    auto blowup = checked("volume restrict", builtin_inputs("OkPn:2:1", {{"oracle", true}}));
    EXPECT_EQ(blowup["results"]["form"]["text"], "(η+1)e^η/η²");
    EXPECT_EQ(blowup["results"]["critical_polynomial"]["text"], "η²-2");
    EXPECT_NEAR(static_cast<double>(real_of(blowup["results"]["critical_root"])), std::sqrt(2.0), 1e-14);
    EXPECT_TRUE(blowup["diagnostics"]["oracle"]["line_bundle_agrees"].get<bool>());

    auto p3 = checked("volume restrict", builtin_inputs("OkPn:4:3"));
    EXPECT_EQ(p3["results"]["canonical"]["scale"], "1/18");
    EXPECT_EQ(p3["results"]["canonical"]["form"]["text"], "(η³+3η²+6η+6)e^{3η}/η⁴");

    auto line = checked("volume restrict", builtin_inputs("Cn:1"));
    EXPECT_EQ(line["results"]["form"]["text"], "e^η/η");
    EXPECT_EQ(real_of(line["results"]["critical_root"]), 1.0L);
}

TEST(Commands, RestrictAlongDirection)
{
    auto r = checked("volume restrict", builtin_inputs("Cn:2", {{"direction", {"1", "2"}}}));
    EXPECT_EQ(r["results"]["form"]["text"], "1/2·e^{3η}/η²");
    EXPECT_NEAR(static_cast<double>(real_of(r["results"]["critical_root"])), 2.0 / 3, 1e-14);
    EXPECT_THROW(run_command("volume restrict", builtin_inputs("Cn:2", {{"direction", {"1", "-1"}}})), NotInLambda);
}

TEST(Commands, SurfaceValues)
{
    auto hj = checked("surface hj", doc_inputs("cyclic_quotient", {{"p", 8}, {"q", 3}}));
    EXPECT_EQ(hj["results"]["coefficients"], Json({3, 3}));
    EXPECT_EQ(hj["results"]["value"], "8/3");

    auto flipped = checked("surface hj",
                           doc_inputs("cyclic_quotient", {{"p", 5}, {"q", 2}}, {{"orientation", "q/p"}}));
    EXPECT_TRUE(flipped["results"]["flagged"].get<bool>());

    auto star = checked("surface stargraph", doc_inputs("star_graph", {{"b", 1}, {"genus", 1}, {"branches", {{3}, {3}, {3}}}}));
    EXPECT_EQ(star["results"]["criterion"], "0");
    EXPECT_FALSE(star["results"]["negative_definite"].get<bool>());
    EXPECT_TRUE(star["diagnostics"]["tests_agree"].get<bool>());

    auto lb = checked("surface canonical", doc_inputs("star_graph", {{"b", 2}, {"genus", 1}, {"branches", Json::array()}}));
    EXPECT_EQ(lb["results"]["case"], "line_bundle");
    EXPECT_TRUE(lb["results"]["admits"].get<bool>());

    auto a1 = checked("surface canonical", doc_inputs("cyclic_quotient", {{"p", 2}, {"q", 1}}));
    EXPECT_FALSE(a1["results"]["admits"].get<bool>());

    auto sh = checked("surface shrinking", doc_inputs("resolution_curves", {{"self_intersections", {-1, -2}}}));
    EXPECT_FALSE(sh["results"]["admissible"].get<bool>());
    EXPECT_EQ(sh["results"]["manifold"], "None");
    EXPECT_THROW(run_command("surface shrinking", doc_inputs("resolution_curves", {{"self_intersections", {0}}})),
                 InvalidInput);
}

TEST(Commands, ModelsListsEveryBuiltin)
{
    auto r = checked("models", Json::object());
    EXPECT_EQ(r["results"]["models"].size(), example_builtins().size());
    for (const auto& m : r["results"]["models"])
        EXPECT_NO_THROW(parse_problem_document(m.at("document")));
}
