#include "secint/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "secint/manifest.hpp"
#include "secint/moves.hpp"
#include "secint/multi.hpp"

namespace secint {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
    bool unframed = false;
    int int_bound = -1;
    std::string action = "auto";
    bool no_assert = false;
    std::string json_out;
};

/// Failed identity or invariance check.
class AssertionFailure : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw ParseError("cannot write '" + path + "'");
}

Json quotient_json(const QuotientElement& q)
{
    return Json{{"raw", format_element(q.raw)},
                {"canonical", format_element(q.canonical)},
                {"residue", format_element(q.residue)},
                {"certified_zero", q.certified_zero},
                {"definitive", q.definitive},
                {"status", q.status()},
                {"horizon", q.horizon},
                {"relations", q.instances}};
}

WhitneyDiagram load_single(const std::string& path, const Options& o)
{
    const auto text = read_file(path);
    if (is_multi_manifest(text))
        throw ValidationError("'" + path + "' is an n-sphere manifest; use tau-n or triple");
    auto d = parse_manifest(text);
    d.unframed = d.unframed || o.unframed;
    return d;
}

MultiDiagram load_multi(const std::string& path, const Options& o)
{
    const auto text = read_file(path);
    auto d = is_multi_manifest(text) ? parse_multi_manifest(text) : as_multi_diagram(parse_manifest(text));
    d.unframed = d.unframed || o.unframed;
    return d;
}

RelationEngine engine_for(const BasisTerm& t, const GroupPtr& group, bool unframed)
{
    switch (t.kind) {
    case TermKind::Pair: return RelationEngine(group, RelationMode::Pair, unframed);
    case TermKind::Triple: return RelationEngine(group, RelationMode::Triple, unframed);
    case TermKind::Component: return RelationEngine(group, RelationMode::Component, unframed);
    case TermKind::Single: break;
    }
    throw VariantMismatch("group-ring elements carry no relations; give a pair, triple or component term");
}

std::string tau_command(const std::string& path, const Options& o, Json& result)
{
    const auto d = load_single(path, o);
    const auto q = compute_tau(d, o.int_bound);
    result = quotient_json(q);
    return format_reduction_report(q, "tau");
}

std::string mu_command(const std::string& path, const Options& o, Json& result)
{
    const auto d = load_single(path, o);
    const auto mu = self_intersection_mu(d.double_points, d.group);
    const auto report = validate_diagram(d);
    result = Json{{"mu", format_element(mu)}, {"valid", report.ok()}};
    std::string out = "mu = " + format_element(mu) + "\n";
    if (!report.ok())
        throw ValidationError(out + "invalid diagram:\n" + report.text());
    return out + "validation: ok\n";
}

bool use_signed_action(const std::string& action, const GroupPtr& group, std::string& note)
{
    if (action == "signed" || action == "unsigned")
        return action == "signed";
    std::mt19937_64 rng(20240);
    FuzzParams p;
    p.with_pi2 = false;
    p.max_crossings = 0;
    std::vector<WhitneyDiagram> samples;
    for (int i = 0; i < 24; ++i)
        samples.push_back(random_diagram(rng, group, p));
    const auto c = select_action_convention(samples);
    note = "action convention selected on 24 sample diagrams: " + std::string(convention_name(c));
    if (c == ActionConvention::Neither)
        throw AssertionFailure(note + "; no S3 action matches the parallel copies");
    return c != ActionConvention::Unsigned;
}

std::string triple_command(const std::string& path, const Options& o, Json& result)
{
    const auto text = read_file(path);
    std::ostringstream os;
    if (is_multi_manifest(text)) {
        auto d = parse_multi_manifest(text);
        d.unframed = d.unframed || o.unframed;
        const auto q = compute_triple_lambda(d, o.int_bound);
        result = quotient_json(q);
        return format_reduction_report(q, "lambda(f1,f2,f3)");
    }
    auto d = parse_manifest(text);
    d.unframed = d.unframed || o.unframed;
    if (!d.normal_bundle_trivial)
        throw ValidationError("parallel copies need normal_bundle_trivial = true");
    const auto report = validate_diagram(d);
    if (!report.ok())
        throw ValidationError("invalid diagram:\n" + report.text());
    std::string note;
    const bool signed_action = use_signed_action(o.action, d.group, note);
    const auto copies = parallel_copies(d);
    const auto q = compute_triple_lambda(copies, o.int_bound);
    const auto sym = symmetrize_triple(tau_as_triples(d), signed_action);
    const bool holds = component_slice(raw_tau_n(copies), {1, 2, 3}) == sym;
    os << format_reduction_report(q, "lambda(f,f,f)");
    if (!note.empty())
        os << note << '\n';
    os << "sum over S3 of tau (" << (signed_action ? "signed" : "unsigned") << " action): " << format_element(sym)
       << '\n';
    os << "identity lambda(f,f,f) = sum over S3 of tau: " << (holds ? "holds" : "FAILS") << '\n';
    result = quotient_json(q);
    result["action"] = signed_action ? "signed" : "unsigned";
    result["symmetrized_tau"] = format_element(sym);
    result["identity_holds"] = holds;
    if (!holds)
        throw AssertionFailure(os.str() + "parallel-copy identity failed");
    return os.str();
}

std::string tau_n_command(const std::string& path, const Options& o, Json& result)
{
    const auto d = load_multi(path, o);
    const auto q = compute_tau_n(d, o.int_bound);
    result = quotient_json(q);
    result["n"] = d.n;
    return "n = " + std::to_string(d.n) + "\n" + format_reduction_report(q, "tau_n");
}

std::string orbit_command(const std::string& term, const std::string& group_text, const Options& o,
                          Json& result)
{
    const auto group = make_group(parse_group(group_text));
    const auto x = parse_element(term, group);
    if (x.size() != 1)
        throw ParseError("orbit needs exactly one basis term, got '" + term + "'");
    const auto& t = x.terms().begin()->first;
    const auto engine = engine_for(t, group, o.unframed);
    const auto cls = signed_class_closure(t, engine);
    const auto rep = engine.closure(t)->representative;
    std::ostringstream os;
    os << "orbit of " << format_term(t, *group) << " over " << group->describe() << '\n';
    os << "representative: " << format_term(rep, *group) << '\n';
    os << "members: " << cls.members.size() << '\n';
    Json members = Json::array();
    for (const auto& m : cls.members) {
        const auto s = (m.sign > 0 ? "+" : "-") + format_term(m.term, *group);
        os << "  " << s << '\n';
        members.push_back(s);
    }
    os << "torsion2=" << (cls.torsion2 ? "true" : "false") << '\n';
    if (o.unframed)
        os << "zero_class=" << (cls.zero_class ? "true" : "false") << '\n';
    result = Json{{"term", format_term(t, *group)},
                  {"representative", format_term(rep, *group)},
                  {"members", std::move(members)},
                  {"torsion2", cls.torsion2},
                  {"zero_class", cls.zero_class}};
    return os.str();
}

RingElement canonical_tau(const WhitneyDiagram& d)
{
    const auto report = validate_diagram(d);
    if (!report.ok())
        throw AssertionFailure("move produced an invalid diagram:\n" + report.text());
    return tau_engine(d).canonicalize(raw_tau(d));
}

std::string move_command(const std::string& manifest, const std::string& script, const std::string& output,
                         const Options& o, Json& result)
{
    auto d = load_single(manifest, o);
    const auto report = validate_diagram(d);
    if (!report.ok())
        throw ValidationError("invalid diagram:\n" + report.text());
    std::ostringstream os;
    auto before = canonical_tau(d);
    os << "start: tau canonical " << format_element(before) << '\n';
    Json steps = Json::array();
    int index = 0;
    for (const auto& line : split_script(read_file(script))) {
        ++index;
        MoveCommand cmd;
        const auto where = os.str() + "step " + std::to_string(index) + " (" + line + "): ";
        try {
            d = apply_move_command(d, line, &cmd);
        } catch (const ParseError& e) {
            throw ParseError(where + e.what());
        } catch (const MoveError& e) {
            throw MoveError(where + e.what());
        }
        const auto after = canonical_tau(d);
        std::string check = "not asserted";
        if (cmd.assert_invariance && !o.no_assert) {
            if (after == before)
                check = "invariant";
            else if (quotient_equal(tau_engine(d), after, before, d.pi2, o.int_bound))
                check = "invariant modulo intersection relations";
            else
                throw AssertionFailure(os.str() + "step " + std::to_string(index) + " (" + line +
                                       "): tau changed from " + format_element(before) + " to " +
                                       format_element(after));
        }
        os << "step " << index << ": " << line << "  -> " << format_element(after) << "  [" << check << "]\n";
        steps.push_back(Json{{"line", line}, {"canonical", format_element(after)}, {"check", check}});
        before = after;
    }
    const auto q = compute_tau(d, o.int_bound);
    os << format_reduction_report(q, "tau");
    if (!output.empty()) {
        write_file(output, emit_manifest(d));
        os << "final diagram written to " << output << '\n';
    }
    result = quotient_json(q);
    result["steps"] = std::move(steps);
    return os.str();
}

std::string reduce_command(const std::string& element_file, const std::string& pi2_file, const Options& o,
                           Json& result)
{
    const auto e = parse_element_manifest(read_file(element_file));
    const auto pi2 = parse_pi2_manifest(read_file(pi2_file), e.group);
    for (const auto& datum : pi2)
        validate_pi2(datum, *e.group);
    const bool unframed = e.unframed || o.unframed;
    const auto kind = e.element.kind();
    if (!kind) {
        QuotientElement q{e.element, e.element, e.element, true, true, 0, 0, "none needed"};
        result = quotient_json(q);
        return format_reduction_report(q, "element");
    }
    const auto engine = engine_for(e.element.terms().begin()->first, e.group, unframed);
    const int spheres = *kind == TermKind::Triple ? 3 : e.n;
    const auto q = reduce_in_quotient(engine, e.element, pi2, o.int_bound, spheres);
    std::string out = format_reduction_report(q, "element");
    result = quotient_json(q);
    if (*kind == TermKind::Pair) {
        const auto km = km_name(reduce_to_km(q, pi2, unframed));
        out += "  km:         " + std::string(km) + '\n';
        result["km"] = km;
    }
    return out;
}

std::string examples_command(const std::string& name, std::int64_t l, std::int64_t m, std::int64_t n,
                             const std::string& output, const Options& o, Json& result)
{
    if (name != "paper4")
        throw CLI::ValidationError("examples", "unknown example '" + name + "' (available: paper4)");
    auto d = cyclic_family(l, m, n);
    d.unframed = d.unframed || o.unframed;
    const auto manifest = emit_manifest(d);
    const auto q = compute_tau(d, o.int_bound);
    std::ostringstream os;
    os << "cyclic family l=" << l << " m=" << m << " n=" << n << '\n';
    if (output.empty())
        os << "manifest:\n" << manifest;
    else {
        write_file(output, manifest);
        os << "manifest written to " << output << '\n';
    }
    os << format_reduction_report(q, "tau");
    result = quotient_json(q);
    result["manifest"] = Json::parse(manifest);
    return os.str();
}

} // namespace

CliResult run_cli(const std::vector<std::string>& args)
{
    CLI::App app{"Exact secondary intersection invariants from Whitney-disk diagrams", "secint"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    app.add_flag("--unframed", o.unframed, "Work modulo framing terms");
    app.add_option("--int-bound", o.int_bound, "Ball radius for intersection relations (default: automatic)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--action", o.action, "S3 action convention for triple")
        ->check(CLI::IsMember({"signed", "unsigned", "auto"}));
    app.add_flag("--no-assert", o.no_assert, "Skip move invariance checks");
    app.add_option("--json-out", o.json_out, "Write a JSON result envelope to this file");

    std::string manifest, script, term, group_text = "free:a,b", element_file, pi2_file, example, output;
    std::int64_t l = 2, m = 4, n = 3;
    auto* tau = app.add_subcommand("tau", "Single-sphere invariant of a manifest");
    tau->add_option("manifest", manifest)->required();
    auto* mu = app.add_subcommand("mu", "Self-intersection number of a manifest");
    mu->add_option("manifest", manifest)->required();
    auto* triple = app.add_subcommand("triple", "Triple intersection number (n = 3 or parallel copies)");
    triple->add_option("manifest", manifest)->required();
    auto* tau_n = app.add_subcommand("tau-n", "n-sphere invariant of a manifest");
    tau_n->add_option("manifest", manifest)->required();
    auto* orbit = app.add_subcommand("orbit", "Signed closure of one basis term");
    orbit->add_option("term", term)->required();
    orbit->add_option("--group", group_text, "Group, e.g. free:a,b or cyclic:t:6");
    auto* move = app.add_subcommand("move", "Apply a move script, checking invariance");
    move->add_option("manifest", manifest)->required();
    move->add_option("script", script)->required();
    move->add_option("--output", output, "Write the final manifest here");
    auto* reduce = app.add_subcommand("reduce", "Reduce an element modulo pi2 relations");
    reduce->add_option("element", element_file)->required();
    reduce->add_option("pi2", pi2_file)->required();
    auto* examples = app.add_subcommand("examples", "Built-in example families");
    examples->add_option("name", example)->required();
    examples->add_option("--l", l, "Interior point count (signed)");
    examples->add_option("--m", m, "Interior exponent");
    examples->add_option("--n", n, "Disk exponent");
    examples->add_option("--output", output, "Write the manifest here instead of printing it");

    CliResult r;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        r.out = app.help();
        return r;
    } catch (const CLI::ParseError& e) {
        r.exit_code = kExitUsage;
        r.err = std::string("error: ") + e.what() + "\n\n" + app.help();
        return r;
    }

    Json result;
    std::string command = app.get_subcommands().front()->get_name();
    try {
        if (tau->parsed())
            r.out = tau_command(manifest, o, result);
        else if (mu->parsed())
            r.out = mu_command(manifest, o, result);
        else if (triple->parsed())
            r.out = triple_command(manifest, o, result);
        else if (tau_n->parsed())
            r.out = tau_n_command(manifest, o, result);
        else if (orbit->parsed())
            r.out = orbit_command(term, group_text, o, result);
        else if (move->parsed())
            r.out = move_command(manifest, script, output, o, result);
        else if (reduce->parsed())
            r.out = reduce_command(element_file, pi2_file, o, result);
        else
            r.out = examples_command(example, l, m, n, output, o, result);
    } catch (const CLI::ValidationError& e) {
        r.exit_code = kExitUsage;
        r.err = std::string("error: ") + e.what() + "\n\n" + app.help();
    } catch (const AssertionFailure& e) {
        r.exit_code = kExitAssertion;
        r.err = std::string("assertion failed: ") + e.what() + "\n";
    } catch (const Error& e) {
        r.exit_code = kExitInvalid;
        r.err = std::string("error: ") + e.what() + "\n";
    }

    if (!o.json_out.empty()) {
        Json envelope{{"command", command}, {"exit_code", r.exit_code}};
        if (r.exit_code == kExitOk)
            envelope["result"] = std::move(result);
        else
            envelope["error"] = r.err;
        try {
            write_file(o.json_out, envelope.dump(2) + "\n");
        } catch (const Error& e) {
            r.err += std::string("error: ") + e.what() + "\n";
            if (r.exit_code == kExitOk)
                r.exit_code = kExitInvalid;
        }
    }
    return r;
}

} // namespace secint
