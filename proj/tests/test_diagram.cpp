#include <doctest.h>

#include <algorithm>
#include <random>

#include "secint/diagram.hpp"
#include "secint/moves.hpp"

using namespace secint;

namespace {

GroupPtr free2() { return make_group(GroupSpec::free({"a", "b"})); }

Word w(const GroupPtr& g, std::string_view s) { return parse_word(s, *g); }
RingElement el(const GroupPtr& g, std::string_view s) { return parse_element(s, g); }

bool has_violation(const ValidationReport& r, std::string_view code)
{
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const auto& v) { return v.rfind(code, 0) == 0; });
}

WhitneyDiagram one_disk(const GroupPtr& g, std::string_view elem,
                        std::vector<InteriorPoint> interior = {})
{
    WhitneyDiagram d(g);
    d.double_points = {{"p+", 1, w(g, elem)}, {"p-", -1, w(g, elem)}};
    d.disks.push_back({"W", "p+", "p-", w(g, elem), 0, std::move(interior)});
    return d;
}

WhitneyDiagram two_disks(const GroupPtr& g, std::string_view ga, std::string_view gb)
{
    WhitneyDiagram d(g);
    d.double_points = {{"A+", 1, w(g, ga)}, {"A-", -1, w(g, ga)},
                       {"B+", 1, w(g, gb)}, {"B-", -1, w(g, gb)}};
    d.disks.push_back({"A", "A+", "A-", w(g, ga), 0, {}});
    d.disks.push_back({"B", "B+", "B-", w(g, gb), 0, {}});
    return d;
}

WhitneyDiagram relabel_and_shuffle(const WhitneyDiagram& d, std::mt19937_64& rng)
{
    WhitneyDiagram out = d;
    auto rename = [](const std::string& s) { return "x_" + s + "_y"; };
    for (auto& p : out.double_points)
        p.id = rename(p.id);
    for (auto& disk : out.disks) {
        disk.id = rename(disk.id);
        disk.positive = rename(disk.positive);
        disk.negative = rename(disk.negative);
        std::shuffle(disk.interior.begin(), disk.interior.end(), rng);
    }
    for (auto& c : out.crossings) {
        c.a.disk = rename(c.a.disk);
        c.b.disk = rename(c.b.disk);
    }
    std::shuffle(out.double_points.begin(), out.double_points.end(), rng);
    std::shuffle(out.disks.begin(), out.disks.end(), rng);
    std::shuffle(out.crossings.begin(), out.crossings.end(), rng);
    std::shuffle(out.pi2.begin(), out.pi2.end(), rng);
    return out;
}

} // namespace

TEST_CASE("validation")
{
    CHECK(validate_diagram(cyclic_family(2, 4, 3)).ok());
    CHECK(validate_diagram(WhitneyDiagram()).ok());

    auto g = free2();
    auto d = one_disk(g, "a");
    d.double_points.push_back({"q", 1, w(g, "b")});
    auto r = validate_diagram(d);
    CHECK(has_violation(r, "unpaired"));
    CHECK(r.text().find("violation: unpaired") != std::string::npos);

    d = one_disk(g, "a");
    d.disks[0].framing = 1;
    CHECK(has_violation(validate_diagram(d), "unframed disk"));
    d.unframed = true;
    CHECK(validate_diagram(d).ok());

    d = one_disk(g, "a");
    std::swap(d.disks[0].positive, d.disks[0].negative);
    CHECK(has_violation(validate_diagram(d), "sign"));

    d = one_disk(g, "a");
    d.disks[0].negative = "zz";
    CHECK(has_violation(validate_diagram(d), "dangling"));

    d = one_disk(g, "a");
    d.double_points[0].g = w(g, "b");
    CHECK(has_violation(validate_diagram(d), "group element"));

    d = two_disks(g, "a", "a");
    d.disks[1].negative = "A-";
    auto r2 = validate_diagram(d);
    CHECK(has_violation(r2, "paired twice"));
    CHECK(has_violation(r2, "unpaired"));

    d = one_disk(g, "a");
    d.crossings.push_back({{"W", Arc::Positive}, {"W", Arc::Positive}, true});
    CHECK(has_violation(validate_diagram(d), "self crossing"));
    d.crossings = {{{"W", Arc::Positive}, {"V", Arc::Negative}, true}};
    CHECK(has_violation(validate_diagram(d), "dangling"));

    d = two_disks(g, "a", "b");
    d.disks[1].id = "A";
    CHECK(has_violation(validate_diagram(d), "duplicate id"));

    d = one_disk(g, "a");
    Pi2ClassDatum rp;
    rp.name = "P";
    rp.kind = Pi2ClassDatum::Kind::RP2;
    rp.element = w(g, "a");
    d.pi2.push_back(rp);
    CHECK(has_violation(validate_diagram(d), "pi2"));
}

TEST_CASE("self-intersection number")
{
    auto g = free2();
    const Word a = w(g, "a*b"), inv = w(g, "b^-1*a^-1");
    CHECK(self_intersection_mu({{"1", 1, a}, {"2", -1, a}}, g).is_zero());
    CHECK(self_intersection_mu({{"1", 1, a}, {"2", -1, inv}}, g).is_zero());
    auto one = self_intersection_mu({{"1", 1, a}}, g);
    CHECK(one == RingElement::of(g, BasisTerm::single(std::min(a, inv)), 1));
    CHECK(self_intersection_mu({{"1", 1, Word::identity()}}, g).is_zero());

    auto c2 = make_group(GroupSpec::cyclic(2));
    CHECK(self_intersection_mu({{"1", 1, w(c2, "t")}}, c2).size() == 1);
}

TEST_CASE("disk contribution")
{
    auto z = make_group(GroupSpec::cyclic(0));
    WhitneyDisk d{"W", "p+", "p-", w(z, "t^3"), 0, {{1, w(z, "t^4")}, {1, w(z, "t^4")}}};
    CHECK(disk_contribution_I(d, z) == el(z, "2*(t^3,t^4)"));
    d.interior.clear();
    CHECK(disk_contribution_I(d, z).is_zero());

    auto g = free2();
    WhitneyDisk e{"W", "p+", "p-", w(g, "a"), 0, {{1, Word::identity()}, {1, w(g, "a")}}};
    CHECK(disk_contribution_I(e, g) == el(g, "(a,1) + (a,a)"));
    e.framing = 2;
    CHECK_THROWS_AS(disk_contribution_I(e, g), ValidationError);
    CHECK(disk_contribution_I(e, g, true) == el(g, "(a,1) + (a,a)"));
}

TEST_CASE("crossing contribution")
{
    auto g = free2();
    auto d = two_disks(g, "a", "b");
    BoundaryCrossing y{{"A", Arc::Positive}, {"B", Arc::Positive}, true};
    CHECK(crossing_contribution_J(y, d) == el(g, "(a,b)"));
    y.b.arc = Arc::Negative;
    CHECK(crossing_contribution_J(y, d) == el(g, "-(a,b^-1)"));
    y = {{"A", Arc::Positive}, {"B", Arc::Positive}, false};
    CHECK(crossing_contribution_J(y, d) == el(g, "(b,a)"));
    y = {{"A", Arc::Negative}, {"B", Arc::Negative}, true};
    CHECK(crossing_contribution_J(y, d) == el(g, "(a^-1,b^-1)"));
    y = {{"A", Arc::Negative}, {"B", Arc::Positive}, false};
    CHECK(crossing_contribution_J(y, d) == el(g, "-(b,a^-1)"));
    y = {{"A", Arc::Positive}, {"A", Arc::Negative}, true};
    CHECK(crossing_contribution_J(y, d) == el(g, "-(a,a^-1)"));
    y = {{"A", Arc::Positive}, {"C", Arc::Positive}, true};
    CHECK_THROWS_AS(crossing_contribution_J(y, d), ValidationError);
}

TEST_CASE("tau of the cyclic family")
{
    auto d = cyclic_family(2, 4, 3);
    auto q = compute_tau(d);
    CHECK(format_element(q.raw) == "2*(t^3,t^4)");
    CHECK_FALSE(q.certified_zero);
    CHECK(q.definitive);
    CHECK(q.status() == "NONZERO (definitive)");
    CHECK(q.residue == q.canonical);

    for (std::int64_t l : {-3, -1, 1, 2, 5})
        for (std::int64_t m : {-2, 1, 4})
            for (std::int64_t n : {1, 3}) {
                auto qq = compute_tau(cyclic_family(l, m, n));
                auto z = qq.raw.group();
                CHECK(qq.raw == RingElement::of(z, BasisTerm::pair(group_power(w(z, "t"), n, *z),
                                                                   group_power(w(z, "t"), m, *z)),
                                                l));
            }
    CHECK(compute_tau(cyclic_family(0, 4, 3)).certified_zero);
}

TEST_CASE("tau examples")
{
    CHECK(compute_tau(WhitneyDiagram()).certified_zero);
    auto g = free2();
    auto d = one_disk(g, "a", {{1, w(g, "b")}, {-1, w(g, "b")}});
    auto q = compute_tau(d);
    CHECK(q.raw.is_zero());
    CHECK(q.certified_zero);

    // (a,1) + (a,a) = 2(a,1) = 0
    CHECK(compute_tau(one_disk(g, "a", {{1, Word::identity()}, {1, w(g, "a")}})).certified_zero);
    // (a,b) + (b,a) = 0 via a crossing and an interior point
    auto e = two_disks(g, "a", "b");
    e.disks[1].interior.push_back({1, w(g, "a")});
    e.crossings.push_back({{"A", Arc::Positive}, {"B", Arc::Positive}, true});
    CHECK(compute_tau(e).certified_zero);

    auto bad = one_disk(g, "a");
    bad.double_points[1].g = w(g, "b");
    bad.disks[0].g = w(g, "a");
    CHECK_THROWS_AS(compute_tau(bad), ValidationError);

    WhitneyDiagram mu(g);
    mu.double_points = {{"p+", 1, w(g, "a")}, {"p-", -1, w(g, "a")}, {"q+", 1, w(g, "b")},
                        {"q-", -1, w(g, "b")}};
    mu.disks = {{"W", "p+", "q-", w(g, "a"), 0, {}}, {"V", "q+", "p-", w(g, "b"), 0, {}}};
    CHECK_THROWS_AS(compute_tau(mu), ValidationError);

    RelationEngine unframed(g, RelationMode::Pair, true);
    CHECK_THROWS_AS(compute_tau(d, unframed), VariantMismatch);
}

TEST_CASE("tau is invariant under relabeling and reordering")
{
    std::mt19937_64 rng(11);
    auto g = free2();
    for (int trial = 0; trial < 150; ++trial) {
        auto d = random_diagram(rng, g, {});
        auto x = compute_tau(d);
        auto y = compute_tau(relabel_and_shuffle(d, rng));
        CHECK(x.canonical == y.canonical);
        CHECK(x.residue == y.residue);
        CHECK(x.certified_zero == y.certified_zero);
    }
}

TEST_CASE("free groups without pi2 data reduce to the canonical form")
{
    std::mt19937_64 rng(12);
    auto g = free2();
    FuzzParams p;
    p.with_pi2 = false;
    RelationEngine eng(g, RelationMode::Pair);
    for (int trial = 0; trial < 150; ++trial) {
        auto d = random_diagram(rng, g, p);
        REQUIRE(validate_diagram(d).ok());
        auto q = compute_tau(d, eng);
        CHECK(q.canonical == eng.canonicalize(raw_tau(d)));
        CHECK(q.residue == q.canonical);
        CHECK(q.certified_zero == q.canonical.is_zero());
        CHECK((q.certified_zero || q.definitive));
    }
}

TEST_CASE("same_diagram ignores order")
{
    std::mt19937_64 rng(13);
    auto g = free2();
    auto d = random_diagram(rng, g, {});
    auto e = d;
    std::reverse(e.disks.begin(), e.disks.end());
    std::reverse(e.double_points.begin(), e.double_points.end());
    CHECK(same_diagram(d, e));
    e.unframed = !e.unframed;
    CHECK_FALSE(same_diagram(d, e));
}
