#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "secint/cli.hpp"
#include "secint/manifest.hpp"

using namespace secint;

namespace {

std::string data(const std::string& name) { return std::string(SECINT_TEST_DATA) + "/" + name; }

CliResult run(std::vector<std::string> args)
{
    for (auto& a : args)
        if (a.starts_with("@"))
            a = data(a.substr(1));
    return run_cli(args);
}

bool contains(const std::string& text, const std::string& piece) { return text.find(piece) != std::string::npos; }

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("cyclic example reports the raw value and a definitive verdict")
{
    const auto r = run({"examples", "paper4", "--l", "2", "--m", "4", "--n", "3"});
    CHECK(r.exit_code == kExitOk);
    CHECK(contains(r.out, "raw:        2*(t^3,t^4)"));
    CHECK(contains(r.out, "NONZERO (definitive)"));
    CHECK(contains(r.out, "horizon L = "));
}

TEST_CASE("stored cyclic manifest matches the generated one")
{
    const auto tmp = std::filesystem::temp_directory_path() / "secint_cyclic.json";
    const auto r = run({"examples", "paper4", "--output", tmp.string()});
    REQUIRE(r.exit_code == kExitOk);
    CHECK(slurp(tmp) == slurp(data("cyclic_2_4_3.json")));
    CHECK(emit_manifest(parse_manifest(slurp(tmp))) == slurp(tmp));
    std::filesystem::remove(tmp);
}

TEST_CASE("empty manifest is certified zero")
{
    const auto r = run({"tau", "@empty.json"});
    CHECK(r.exit_code == kExitOk);
    CHECK(contains(r.out, "0 (certified)"));
}

TEST_CASE("orbit of a generic pair")
{
    const auto r = run({"orbit", "(a,b)"});
    CHECK(r.exit_code == kExitOk);
    CHECK(contains(r.out, "members: 6"));
    CHECK(contains(r.out, "torsion2=false"));
    CHECK(contains(r.out, "+(a,b)"));
    CHECK(contains(r.out, "-(b,a)"));

    const auto t = run({"orbit", "(t,t)", "--group", "cyclic:t:2"});
    CHECK(t.exit_code == kExitOk);
    CHECK(contains(t.out, "torsion2=true"));
}

TEST_CASE("subcommands on the success corpus")
{
    CHECK(contains(run({"tau", "@crossing.json"}).out, "NONZERO (definitive)"));
    CHECK(contains(run({"mu", "@crossing.json"}).out, "mu = 0"));
    const auto m = run({"move", "@crossing.json", "@moves.script"});
    CHECK(m.exit_code == kExitOk);
    CHECK(contains(m.out, "step 6"));
    CHECK_FALSE(contains(m.out, "not asserted"));
    const auto tube = run({"move", "@tube.json", "@tube.script"});
    CHECK(tube.exit_code == kExitOk);
    CHECK(contains(tube.out, "invariant modulo intersection relations"));
    const auto n = run({"tau-n", "@three_spheres.json"});
    CHECK(contains(n.out, "(s*u^-1,t*u^-1,1)_[1,2,3]"));
    const auto t = run({"triple", "@three_spheres.json"});
    CHECK(contains(t.out, "lambda(f1,f2,f3) = (s*u^-1,t*u^-1,1)"));
    const auto p = run({"triple", "@parallel.json", "--action", "auto"});
    CHECK(p.exit_code == kExitOk);
    CHECK(contains(p.out, "selected on 24 sample diagrams: signed"));
    CHECK(contains(p.out, "holds"));
    CHECK(contains(run({"tau-n", "@crossing.json"}).out, "n = 1"));
}

TEST_CASE("reduce with pi2 data and km values")
{
    CHECK(contains(run({"reduce", "@element_pair.json", "@pi2_none.json"}).out, "0 (certified)"));
    CHECK(contains(run({"reduce", "@element_tubing.json", "@pi2_none.json"}).out, "NONZERO (definitive)"));
    CHECK(contains(run({"reduce", "@element_tubing.json", "@pi2_tubing.json"}).out, "0 (certified)"));
    CHECK(contains(run({"reduce", "@km_element.json", "@pi2_even.json"}).out, "km:         1"));
    CHECK(contains(run({"reduce", "@km_element.json", "@pi2_odd.json"}).out, "km:         collapsed"));
}

TEST_CASE("json envelope")
{
    const auto tmp = std::filesystem::temp_directory_path() / "secint_envelope.json";
    auto r = run({"tau", "@empty.json", "--json-out", tmp.string()});
    CHECK(r.exit_code == kExitOk);
    CHECK(contains(slurp(tmp), "\"certified_zero\": true"));
    r = run({"tau", "@fail/unpaired.json", "--json-out", tmp.string()});
    CHECK(r.exit_code == kExitInvalid);
    CHECK(contains(slurp(tmp), "\"exit_code\": 1"));
    std::filesystem::remove(tmp);
}

TEST_CASE("exit codes on the failure corpus")
{
    struct Case {
        std::vector<std::string> args;
        int code;
    };
    const std::vector<Case> cases{
        {{}, kExitUsage},
        {{"bogus"}, kExitUsage},
        {{"tau"}, kExitUsage},
        {{"tau", "@empty.json", "--colour"}, kExitUsage},
        {{"--action", "sideways", "tau", "@empty.json"}, kExitUsage},
        {{"--int-bound", "-1", "tau", "@empty.json"}, kExitUsage},
        {{"examples", "spiral"}, kExitUsage},
        {{"tau", "@missing.json"}, kExitInvalid},
        {{"tau", "@fail/not_json.json"}, kExitInvalid},
        {{"tau", "@fail/unknown_field.json"}, kExitInvalid},
        {{"tau", "@fail/unpaired.json"}, kExitInvalid},
        {{"mu", "@fail/unpaired.json"}, kExitInvalid},
        {{"tau", "@three_spheres.json"}, kExitInvalid},
        {{"tau-n", "@fail/multi_crossing.json"}, kExitInvalid},
        {{"triple", "@crossing.json"}, kExitInvalid},
        {{"move", "@crossing.json", "@fail/cancel_dirty.script"}, kExitInvalid},
        {{"move", "@crossing.json", "@fail/unknown_move.script"}, kExitInvalid},
        {{"orbit", "(a,b)+(b,b)"}, kExitInvalid},
        {{"orbit", "a"}, kExitInvalid},
        {{"--int-bound", "0", "move", "@tube.json", "@tube.script"}, kExitAssertion},
        {{"--action", "unsigned", "triple", "@parallel.json"}, kExitAssertion},
        {{"--no-assert", "--int-bound", "0", "move", "@tube.json", "@tube.script"}, kExitOk},
    };
    for (const auto& c : cases) {
        const auto r = run(c.args);
        std::string joined;
        for (const auto& a : c.args)
            joined += a + " ";
        INFO(joined);
        CHECK(r.exit_code == c.code);
        if (c.code != kExitOk)
            CHECK_FALSE(r.err.empty());
        if (c.code == kExitUsage)
            CHECK(contains(r.err, "Usage:"));
    }
}
