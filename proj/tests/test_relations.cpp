#include <doctest.h>

#include <random>
#include <thread>

#include "closure_oracle.hpp"
#include "lattice_oracle.hpp"
#include "secint/relations.hpp"
#include "test_support.hpp"

using namespace secint;

namespace {

GroupPtr free2() { return make_group(GroupSpec::free({"a", "b"})); }
GroupPtr z_group() { return make_group(GroupSpec::cyclic(0)); }

Word w(const GroupPtr& g, std::string_view s) { return parse_word(s, *g); }
RingElement el(const GroupPtr& g, std::string_view s) { return parse_element(s, g); }

Pi2ClassDatum sphere(const GroupPtr& g, std::string_view lambda, bool omega2)
{
    Pi2ClassDatum d;
    d.name = "A";
    d.lambda.emplace(1, el(g, lambda));
    d.omega2 = omega2;
    return d;
}

} // namespace

TEST_CASE("closure examples")
{
    auto g = free2();
    RelationEngine eng(g, RelationMode::Pair);
    auto one = signed_class_closure(BasisTerm::pair({}, {}), eng);
    CHECK(one.torsion2);
    CHECK(one.members.size() == 2);
    CHECK(one.distinct_terms() == 1);

    auto a1 = signed_class_closure(BasisTerm::pair(w(g, "a"), {}), eng);
    CHECK(a1.torsion2);
    bool has_aa = false;
    for (const auto& m : a1.members)
        has_aa = has_aa || m.term == BasisTerm::pair(w(g, "a"), w(g, "a"));
    CHECK(has_aa);

    auto ab = signed_class_closure(BasisTerm::pair(w(g, "a"), w(g, "b")), eng);
    CHECK_FALSE(ab.torsion2);
    CHECK(ab.members.size() == 6);
    std::set<SignedMember> expect;
    auto add = [&](int s, std::string_view x, std::string_view y) {
        expect.insert({s, BasisTerm::pair(w(g, x), w(g, y))});
    };
    // Hand-applied BC and SC images of (a,b).
    add(1, "a", "b");
    add(-1, "b", "a");
    add(-1, "a^-1", "b*a^-1");
    add(1, "b*a^-1", "a^-1");
    add(-1, "a*b^-1", "b^-1");
    add(1, "b^-1", "a*b^-1");
    CHECK(std::set<SignedMember>(ab.members.begin(), ab.members.end()) == expect);
    CHECK(ab.representative == BasisTerm::pair(w(g, "a^-1"), w(g, "b*a^-1")));
    CHECK(eng.sign_to_representative(BasisTerm::pair(w(g, "a"), w(g, "b"))) == -1);
}

TEST_CASE("closure matches an independent oracle")
{
    auto g = free2();
    const auto& s = *g;
    for (bool unframed : {false, true}) {
        RelationEngine eng(g, RelationMode::Pair, unframed);
        std::mt19937_64 rng(unframed ? 41 : 43);
        for (int i = 0; i < 300; ++i) {
            auto x = test::random_short_word(rng, s, 3);
            auto y = i % 5 == 0 ? Word{} : i % 7 == 0 ? x : test::random_short_word(rng, s, 3);
            auto t = BasisTerm::pair(x, y);
            auto cls = signed_class_closure(t, eng);
            auto oracle = test::pair_closure_oracle({x, y}, s, !unframed);
            CHECK(cls.torsion2 == oracle.torsion2);
            std::set<std::pair<int, test::PairWords>> got;
            for (const auto& m : cls.members)
                got.insert({m.sign, {m.term.coords[0], m.term.coords[1]}});
            if (!oracle.torsion2) {
                CHECK(got == oracle.members);
            } else {
                std::set<test::PairWords> a, b;
                for (const auto& m : got)
                    a.insert(m.second);
                for (const auto& m : oracle.members)
                    b.insert(m.second);
                CHECK(a == b);
            }
        }
    }
}

TEST_CASE("generic closures realize the signed S3 action on triples")
{
    auto g = free2();
    const auto& s = *g;
    RelationEngine eng(g, RelationMode::Pair);
    std::mt19937_64 rng(47);
    int generic = 0;
    for (int i = 0; i < 300; ++i) {
        auto x = test::random_short_word(rng, s, 3), y = test::random_short_word(rng, s, 3);
        auto cls = signed_class_closure(BasisTerm::pair(x, y), eng);
        if (cls.torsion2 || cls.distinct_terms() != 6)
            continue;
        ++generic;
        const auto seed = RingElement::of(g, BasisTerm::triple({}, x, y, s));
        std::set<SignedMember> images;
        for (const auto& p : Permutation3::all()) {
            const auto image = triple_to_pair(permute_triple(seed, p, true));
            for (const auto& [t, c] : image.terms())
                images.insert({static_cast<int>(c), t});
        }
        CHECK(images == std::set<SignedMember>(cls.members.begin(), cls.members.end()));
    }
    CHECK(generic > 100);
}

TEST_CASE("canonicalize examples")
{
    auto g = free2();
    RelationEngine eng(g, RelationMode::Pair);
    CHECK(eng.canonicalize(el(g, "2*(a,1)")).is_zero());
    CHECK(eng.canonicalize(el(g, "(a,b) + (b,a)")).is_zero());
    CHECK(eng.canonicalize(el(g, "(a,1) - (a,a)")).is_zero());
    CHECK(eng.canonicalize(el(g, "3*(1,1)")) == el(g, "(1,1)"));
    // The class of (a,b) is represented by its minimal member (a^-1, b a^-1) = -(a,b).
    CHECK(eng.canonicalize(el(g, "(a,b)")) == el(g, "-(a^-1,b*a^-1)"));
    CHECK(eng.canonicalize(el(g, "(b,a)")) == el(g, "(a^-1,b*a^-1)"));
    CHECK(eng.canonicalize(el(g, "(a,b) - (a^-1,b*a^-1)")) == el(g, "-2*(a^-1,b*a^-1)"));
    CHECK_THROWS_AS(eng.canonicalize(el(g, "(a,b,1)")), VariantMismatch);
    CHECK_THROWS_AS(eng.canonicalize(el(z_group(), "(t,t)")), SpecMismatch);

    RelationEngine unframed(g, RelationMode::Pair, true);
    CHECK(unframed.canonicalize(el(g, "(a,1) + (a,a) + (1,a)")).is_zero());
    CHECK(unframed.canonicalize(el(g, "(a,b)")) == el(g, "-(a^-1,b*a^-1)"));
}

TEST_CASE("canonicalize is sound and idempotent on random input")
{
    auto g = free2();
    const auto& s = *g;
    RelationEngine eng(g, RelationMode::Pair);
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int i = 0; i < 500; ++i) {
        auto a = test::random_word(rng, s, 4), b = test::random_word(rng, s, 4);
        auto g1 = [&](const Word& x, const Word& y) { return RingElement::of(g, BasisTerm::pair(x, y)); };
        CHECK(eng.canonicalize(g1(a, b) + g1(b, a)).is_zero());
        CHECK(eng.canonicalize(g1(a, b) + g1(group_inverse(a, s), group_multiply(b, a, true, s)))
                  .is_zero());
        CHECK(eng.canonicalize(g1(a, {}) - g1(a, a)).is_zero());

        RingElement x(g);
        for (int k = 0; k < 4; ++k)
            x.add(BasisTerm::pair(test::random_word(rng, s, 3), test::random_word(rng, s, 3)),
                  coef(rng));
        auto c = eng.canonicalize(x);
        CHECK(eng.canonicalize(c) == c);
        for (const auto& [t, v] : c.terms()) {
            auto cls = eng.closure(t);
            CHECK(cls->representative == t);
            if (cls->torsion2)
                CHECK(v == 1);
        }
    }
}

TEST_CASE("component mode local relations")
{
    auto g = free2();
    const auto& s = *g;
    auto a = w(g, "a"), b = w(g, "b"), one = Word::identity();
    auto comp = [&](std::array<int, 3> sp, const Word& x, const Word& y, const Word& z) {
        return RingElement::of(g, BasisTerm::component(sp, x, y, z, s));
    };
    RelationEngine eng(g, RelationMode::Component);
    CHECK(eng.canonicalize(comp({1, 1, 2}, a, b, one) + comp({1, 1, 2}, b, a, one)).is_zero());
    CHECK(eng.canonicalize(comp({1, 2, 2}, a, b, one) + comp({1, 2, 2}, a, one, b)).is_zero());
    CHECK(eng.canonicalize(comp({1, 1, 2}, a, a, b) - comp({1, 2, 2}, a, b, b)).is_zero());
    CHECK(eng.canonicalize(comp({1, 2, 3}, a, b, one)) == comp({1, 2, 3}, a, b, one));
    CHECK(eng.canonicalize(comp({1, 2, 3}, a, b, one) + comp({1, 2, 3}, b, a, one)) ==
          comp({1, 2, 3}, a, b, one) + comp({1, 2, 3}, b, a, one));
    // iii: the three-way swap group acts; (x,y,z) = -(y,x,z) = -(x,z,y).
    auto t = comp({2, 2, 2}, a, b, one);
    CHECK(eng.canonicalize(t + comp({2, 2, 2}, one, b, a)).is_zero());

    RelationEngine unframed(g, RelationMode::Component, true);
    CHECK(unframed.canonicalize(comp({1, 1, 2}, a, a, b)).is_zero());
    CHECK(unframed.canonicalize(comp({1, 2, 2}, a, b, b)).is_zero());
    CHECK_FALSE(unframed.canonicalize(comp({1, 1, 2}, a, b, one)).is_zero());

    RelationEngine triple(g, RelationMode::Triple);
    auto x = el(g, "(a,b,1) + (b,a,1)");
    CHECK(triple.canonicalize(x) == x);
}

TEST_CASE("build_relation_instances examples")
{
    auto g = z_group();
    RelationEngine eng(g, RelationMode::Pair);
    auto none = build_relation_instances(eng, {}, 3);
    CHECK(none.generators.empty());
    CHECK(none.trivial);

    std::vector<Pi2ClassDatum> omega{sphere(g, "0", true)};
    auto inst = build_relation_instances(eng, omega, 2);
    CHECK(inst.enumerated == 5);
    CHECK_FALSE(inst.trivial);
    for (const auto& r : inst.generators) {
        REQUIRE(r.size() == 1);
        const auto& [t, c] = *r.terms().begin();
        CHECK(c == 1);
        CHECK(eng.closure(t)->torsion2);
    }
    // (1,1) is the only a in the ball with (a,1) = (1,1); all five are nonzero.
    CHECK(inst.generators.size() == 5);

    std::vector<Pi2ClassDatum> trivial{sphere(g, "0", false)};
    auto t4 = build_relation_instances(eng, trivial, 4);
    CHECK(t4.generators.empty());
    CHECK(t4.trivial);

    std::vector<Pi2ClassDatum> even{sphere(g, "2*1", false)};
    CHECK(build_relation_instances(eng, even, 2).trivial);
    std::vector<Pi2ClassDatum> odd{sphere(g, "1", true)};
    CHECK(build_relation_instances(eng, odd, 2).trivial);
    std::vector<Pi2ClassDatum> moving{sphere(g, "t", false)};
    CHECK_FALSE(build_relation_instances(eng, moving, 2).trivial);
}

TEST_CASE("rp2 data must carry an order-two element")
{
    auto c2 = make_group(GroupSpec::cyclic(2));
    RelationEngine eng(c2, RelationMode::Pair);
    Pi2ClassDatum d;
    d.name = "P";
    d.kind = Pi2ClassDatum::Kind::RP2;
    d.element = {};
    std::vector<Pi2ClassDatum> bad{d};
    CHECK_THROWS_AS(build_relation_instances(eng, bad, 1), ValidationError);
    bad[0].element = w(c2, "t");
    bad[0].lambda.emplace(1, el(c2, "1"));
    auto inst = build_relation_instances(eng, bad, 3);
    CHECK(inst.enumerated == 1);

    auto free = free2();
    RelationEngine feng(free, RelationMode::Pair);
    Pi2ClassDatum f;
    f.kind = Pi2ClassDatum::Kind::RP2;
    f.element = w(free, "a");
    std::vector<Pi2ClassDatum> fv{f};
    CHECK_THROWS_AS(build_relation_instances(feng, fv, 1), ValidationError);
    std::vector<Pi2ClassDatum> pair_lambda{sphere(free, "0", false)};
    pair_lambda[0].lambda.at(1) = el(free, "(a,b)");
    CHECK_THROWS_AS(build_relation_instances(feng, pair_lambda, 1), ValidationError);
}

TEST_CASE("lattice_reduce examples")
{
    auto g = z_group();
    RelationEngine eng(g, RelationMode::Pair);
    std::vector<Pi2ClassDatum> omega{sphere(g, "t", false)};
    auto inst = build_relation_instances(eng, omega, 3);
    REQUIRE_FALSE(inst.generators.empty());
    CHECK(lattice_reduce(eng, RingElement(g), inst).certified_zero);
    CHECK(lattice_reduce(eng, inst.generators.front(), inst).certified_zero);

    auto q = reduce_in_quotient(eng, el(g, "2*(t^3,t^4)"), {});
    CHECK_FALSE(q.certified_zero);
    CHECK(q.definitive);
    CHECK(q.residue == eng.canonicalize(el(g, "2*(t^3,t^4)")));
    CHECK(q.residue == el(g, "-2*(t^-1,t^-4)"));
    CHECK(q.status() == "NONZERO (definitive)");
    auto rep = eng.closure(BasisTerm::pair(w(g, "t^3"), w(g, "t^4")))->representative;
    CHECK(rep == BasisTerm::pair(w(g, "t^-1"), w(g, "t^-4")));
    CHECK(eng.sign_to_representative(BasisTerm::pair(w(g, "t^3"), w(g, "t^4"))) == -1);

    // Torsion classes reduce by doubling.
    CHECK(reduce_in_quotient(eng, el(g, "2*(t,1)"), {}).certified_zero);
    CHECK(reduce_in_quotient(eng, el(g, "(t,1)"), {}).residue == el(g, "(1,t^-1)"));
}

TEST_CASE("intersection relations are certified zero against themselves")
{
    auto g = free2();
    RelationEngine eng(g, RelationMode::Pair);
    std::vector<Pi2ClassDatum> data{sphere(g, "a - b + 1", true), sphere(g, "2*b^-1", false)};
    auto inst = build_relation_instances(eng, data, 2);
    REQUIRE(inst.generators.size() > 5);
    for (const auto& r : inst.generators)
        CHECK(lattice_reduce(eng, r, inst).certified_zero);
    // Sums of generators too.
    CHECK(lattice_reduce(eng, inst.generators[0] + inst.generators[3] - inst.generators[5], inst)
              .certified_zero);
}

TEST_CASE("lattice_reduce agrees with bounded search on relation supports")
{
    auto g = z_group();
    const auto& s = *g;
    RelationEngine eng(g, RelationMode::Pair);
    std::mt19937_64 rng(59);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto lc = test::random_lattice_case(rng, 6);
        // Basis: non-torsion representatives (t^i, t^j) with 0 < i < j.
        std::vector<BasisTerm> basis;
        for (int i = 1; basis.size() < lc.target.size(); ++i)
            basis.push_back(BasisTerm::pair(
                group_power(parse_word("t", s), i, s), group_power(parse_word("t", s), i + 7, s)));
        auto to_elem = [&](const lattice::Vector& v) {
            RingElement r(g);
            for (std::size_t k = 0; k < v.size(); ++k)
                r.add(basis[k], v[k]);
            return r;
        };
        RelationInstances inst;
        for (const auto& row : lc.rows) {
            auto r = to_elem(row);
            if (!r.is_zero())
                inst.generators.push_back(eng.canonicalize(r));
        }
        inst.trivial = false;
        const bool oracle = test::bounded_member(lc.rows, lc.target, 3);
        CHECK(lattice_reduce(eng, to_elem(lc.target), inst).certified_zero == oracle);
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("km reduction")
{
    auto g = free2();
    RelationEngine eng(g, RelationMode::Pair);
    std::vector<Pi2ClassDatum> characteristic{sphere(g, "a + b", false)};
    auto q1 = reduce_in_quotient(eng, el(g, "(a,b)"), characteristic);
    CHECK(reduce_to_km(q1, characteristic) == KmValue::One);
    auto q2 = reduce_in_quotient(eng, el(g, "2*(a,b)"), characteristic);
    CHECK(reduce_to_km(q2, characteristic) == KmValue::Zero);
    std::vector<Pi2ClassDatum> odd{sphere(g, "a", false)};
    CHECK(reduce_to_km(reduce_in_quotient(eng, el(g, "(a,b)"), odd), odd) == KmValue::Collapsed);
    std::vector<Pi2ClassDatum> odd_w{sphere(g, "0", true)};
    CHECK(reduce_to_km(reduce_in_quotient(eng, el(g, "(a,b)"), odd_w), odd_w) ==
          KmValue::Collapsed);
    CHECK(km_name(KmValue::Collapsed) == "collapsed");
}

TEST_CASE("closure cache is safe under concurrent readers")
{
    auto g = free2();
    const auto& s = *g;
    RelationEngine shared(g, RelationMode::Pair);
    std::vector<RingElement> inputs;
    std::mt19937_64 rng(61);
    for (int i = 0; i < 200; ++i) {
        RingElement x(g);
        for (int k = 0; k < 3; ++k)
            x.add(BasisTerm::pair(test::random_word(rng, s, 3), test::random_word(rng, s, 3)),
                  static_cast<int>(rng() % 5) - 2);
        inputs.push_back(x);
    }
    std::vector<RingElement> expect;
    {
        RelationEngine fresh(g, RelationMode::Pair);
        for (const auto& x : inputs)
            expect.push_back(fresh.canonicalize(x));
    }
    std::vector<int> mismatches(4, 0);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                std::size_t j = (i * 7 + static_cast<std::size_t>(t) * 31) % inputs.size();
                if (!(shared.canonicalize(inputs[j]) == expect[j]))
                    ++mismatches[static_cast<std::size_t>(t)];
            }
        });
    for (auto& th : pool)
        th.join();
    for (int m : mismatches)
        CHECK(m == 0);
}

TEST_CASE("reduction report")
{
    auto g = z_group();
    RelationEngine eng(g, RelationMode::Pair);
    auto q = reduce_in_quotient(eng, el(g, "2*(t^3,t^4)"), {});
    auto text = format_reduction_report(q, "tau");
    CHECK(text.find("tau = -2*(t^-1,t^-4)  [NONZERO (definitive)]") == 0);
    CHECK(text.find("horizon L = 6") != std::string::npos);
}
