#include "secint/diagram.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace secint {

WhitneyDiagram::WhitneyDiagram(GroupPtr g) : group(std::move(g))
{
    if (!group)
        throw SpecMismatch("diagram needs a group");
}

const WhitneyDisk* WhitneyDiagram::find_disk(std::string_view id) const
{
    for (const auto& w : disks)
        if (w.id == id)
            return &w;
    return nullptr;
}

const WhitneyDisk& WhitneyDiagram::disk(std::string_view id) const
{
    if (const auto* w = find_disk(id))
        return *w;
    throw MoveError("no Whitney disk '" + std::string(id) + "'");
}

WhitneyDisk& WhitneyDiagram::disk(std::string_view id)
{
    return const_cast<WhitneyDisk&>(std::as_const(*this).disk(id));
}

const DoublePoint* WhitneyDiagram::find_point(std::string_view id) const
{
    for (const auto& p : double_points)
        if (p.id == id)
            return &p;
    return nullptr;
}

DoublePoint& WhitneyDiagram::point(std::string_view id)
{
    if (const auto* p = find_point(id))
        return const_cast<DoublePoint&>(*p);
    throw MoveError("no double point '" + std::string(id) + "'");
}

const Pi2ClassDatum& WhitneyDiagram::pi2_class(std::string_view name) const
{
    for (const auto& c : pi2)
        if (c.name == name)
            return c;
    throw MoveError("no pi2 class '" + std::string(name) + "'");
}

namespace {

auto interior_key(const InteriorPoint& x) { return std::tie(x.sign, x.h); }

auto crossing_key(const BoundaryCrossing& c)
{
    return std::make_tuple(c.a.disk, c.a.arc, c.b.disk, c.b.arc, c.agree);
}

WhitneyDiagram sorted_copy(WhitneyDiagram d)
{
    std::sort(d.double_points.begin(), d.double_points.end(),
              [](const auto& x, const auto& y) { return x.id < y.id; });
    for (auto& w : d.disks)
        std::sort(w.interior.begin(), w.interior.end(),
                  [](const auto& x, const auto& y) { return interior_key(x) < interior_key(y); });
    std::sort(d.disks.begin(), d.disks.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    std::sort(d.crossings.begin(), d.crossings.end(),
              [](const auto& x, const auto& y) { return crossing_key(x) < crossing_key(y); });
    std::sort(d.pi2.begin(), d.pi2.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
    return d;
}

bool same_pi2(const Pi2ClassDatum& x, const Pi2ClassDatum& y)
{
    return x.name == y.name && x.kind == y.kind && x.element == y.element &&
           x.omega2 == y.omega2 && x.lambda == y.lambda;
}

bool word_ok(const Word& w, const GroupSpec& spec)
{
    try {
        check_word(w, spec);
        return true;
    } catch (const SpecMismatch&) {
        return false;
    }
}

} // namespace

bool same_diagram(const WhitneyDiagram& x, const WhitneyDiagram& y)
{
    if (!(*x.group == *y.group) || x.unframed != y.unframed ||
        x.normal_bundle_trivial != y.normal_bundle_trivial)
        return false;
    auto a = sorted_copy(x);
    auto b = sorted_copy(y);
    if (a.pi2.size() != b.pi2.size())
        return false;
    for (std::size_t i = 0; i < a.pi2.size(); ++i)
        if (!same_pi2(a.pi2[i], b.pi2[i]))
            return false;
    return a.double_points == b.double_points && a.disks == b.disks && a.crossings == b.crossings;
}

std::string ValidationReport::text() const
{
    if (violations.empty())
        return "valid\n";
    std::ostringstream os;
    for (const auto& v : violations)
        os << "violation: " << v << '\n';
    return os.str();
}

ValidationReport validate_diagram(const WhitneyDiagram& d)
{
    ValidationReport r;
    const auto& spec = *d.group;
    auto bad = [&](std::string s) { r.violations.push_back(std::move(s)); };

    std::map<std::string, const DoublePoint*> points;
    for (const auto& p : d.double_points) {
        if (!points.emplace(p.id, &p).second)
            bad("duplicate id: double point '" + p.id + "'");
        if (p.sign != 1 && p.sign != -1)
            bad("sign: double point '" + p.id + "' has sign " + std::to_string(p.sign));
        if (!word_ok(p.g, spec))
            bad("word: double point '" + p.id + "' element is not a normal form of " + spec.describe());
    }

    std::map<std::string, int> uses;
    std::set<std::string> disk_ids;
    for (const auto& w : d.disks) {
        if (!disk_ids.insert(w.id).second)
            bad("duplicate id: Whitney disk '" + w.id + "'");
        if (!word_ok(w.g, spec))
            bad("word: disk '" + w.id + "' element is not a normal form");
        for (const auto& x : w.interior) {
            if (x.sign != 1 && x.sign != -1)
                bad("sign: interior point on '" + w.id + "' has sign " + std::to_string(x.sign));
            if (!word_ok(x.h, spec))
                bad("word: interior point on '" + w.id + "' is not a normal form");
        }
        if (w.framing != 0 && !d.unframed)
            bad("unframed disk: '" + w.id + "' has framing " + std::to_string(w.framing));
        for (auto [pid, want] : {std::pair{&w.positive, 1}, std::pair{&w.negative, -1}}) {
            auto it = points.find(*pid);
            if (it == points.end()) {
                bad("dangling: disk '" + w.id + "' references missing double point '" + *pid + "'");
                continue;
            }
            ++uses[*pid];
            if (it->second->sign != want)
                bad("sign: disk '" + w.id + "' pairs '" + *pid + "' as its " +
                    (want > 0 ? "positive" : "negative") + " point");
            if (word_ok(it->second->g, spec) && word_ok(w.g, spec) && !(it->second->g == w.g))
                bad("group element: double point '" + *pid + "' carries " +
                    format_word(it->second->g, spec) + " but disk '" + w.id + "' carries " +
                    format_word(w.g, spec));
        }
    }
    for (const auto& p : d.double_points) {
        auto n = uses[p.id];
        if (n == 0)
            bad("unpaired: double point '" + p.id + "'");
        else if (n > 1)
            bad("paired twice: double point '" + p.id + "'");
    }

    for (std::size_t i = 0; i < d.crossings.size(); ++i) {
        const auto& c = d.crossings[i];
        for (const auto* ref : {&c.a, &c.b})
            if (!disk_ids.count(ref->disk))
                bad("dangling: crossing " + std::to_string(i) + " references missing disk '" +
                    ref->disk + "'");
        if (c.a == c.b)
            bad("self crossing: crossing " + std::to_string(i) + " pairs an arc with itself");
    }

    std::set<std::string> names;
    for (const auto& c : d.pi2) {
        if (!names.insert(c.name).second)
            bad("duplicate id: pi2 class '" + c.name + "'");
        try {
            validate_pi2(c, spec);
        } catch (const Error& e) {
            bad(std::string("pi2: ") + e.what());
        }
    }
    return r;
}

RingElement self_intersection_mu(const std::vector<DoublePoint>& points, const GroupPtr& group)
{
    RingElement mu(group);
    for (const auto& p : points) {
        if (p.g.is_identity())
            continue;
        const Word inv = group_inverse(p.g, *group);
        mu.add(BasisTerm::single(std::min(p.g, inv)), p.sign);
    }
    return mu;
}

RingElement disk_contribution_I(const WhitneyDisk& w, const GroupPtr& group, bool unframed)
{
    if (w.framing != 0 && !unframed)
        throw ValidationError("disk '" + w.id + "' is not framed (framing " +
                              std::to_string(w.framing) + ")");
    RingElement r(group);
    for (const auto& x : w.interior)
        r.add(BasisTerm::pair(w.g, x.h), x.sign);
    return r;
}

RingElement crossing_contribution_J(const BoundaryCrossing& y, const WhitneyDiagram& d)
{
    const auto* wa = d.find_disk(y.a.disk);
    const auto* wb = d.find_disk(y.b.disk);
    if (!wa || !wb)
        throw ValidationError("crossing references a missing disk");
    const auto& spec = *d.group;
    ArcRef first = y.a, second = y.b;
    const WhitneyDisk* w1 = wa;
    const WhitneyDisk* w2 = wb;
    if (!y.agree) {
        std::swap(first, second);
        std::swap(w1, w2);
    }
    const int e1 = arc_sign(first.arc), e2 = arc_sign(second.arc);
    return RingElement::of(
        d.group, BasisTerm::pair(group_power(w1->g, e1, spec), group_power(w2->g, e2, spec)),
        e1 * e2);
}

RingElement raw_tau(const WhitneyDiagram& d)
{
    RingElement r(d.group);
    for (const auto& w : d.disks)
        r += disk_contribution_I(w, d.group, true);
    for (const auto& y : d.crossings)
        r += crossing_contribution_J(y, d);
    return r;
}

RelationEngine tau_engine(const WhitneyDiagram& d)
{
    return RelationEngine(d.group, RelationMode::Pair, d.unframed);
}

QuotientElement compute_tau(const WhitneyDiagram& d, const RelationEngine& engine, int radius)
{
    auto report = validate_diagram(d);
    if (!report.ok())
        throw ValidationError("invalid diagram:\n" + report.text());
    auto mu = self_intersection_mu(d.double_points, d.group);
    if (!mu.is_zero())
        throw ValidationError("self-intersection number is nonzero: " + format_element(mu));
    require_same_group(*engine.group(), *d.group);
    if (engine.mode() != RelationMode::Pair || engine.unframed() != d.unframed)
        throw VariantMismatch("relation engine does not match the diagram's framing mode");
    return reduce_in_quotient(engine, raw_tau(d), d.pi2, radius);
}

QuotientElement compute_tau(const WhitneyDiagram& d, int radius)
{
    auto engine = tau_engine(d);
    return compute_tau(d, engine, radius);
}

WhitneyDiagram cyclic_family(std::int64_t l, std::int64_t m, std::int64_t n)
{
    auto group = make_group(GroupSpec::cyclic(0));
    const auto& spec = *group;
    const Word t = parse_word("t", spec);
    WhitneyDiagram d(group);
    const Word gn = group_power(t, n, spec);
    d.double_points = {{"p+", 1, gn}, {"p-", -1, gn}};
    WhitneyDisk w{"W", "p+", "p-", gn, 0, {}};
    const int s = l < 0 ? -1 : 1;
    for (std::int64_t j = 0; j < (l < 0 ? -l : l); ++j)
        w.interior.push_back({s, group_power(t, m, spec)});
    d.disks.push_back(std::move(w));
    Pi2ClassDatum f;
    f.name = "f";
    f.lambda.emplace(1, RingElement(group));
    d.pi2.push_back(std::move(f));
    return d;
}

} // namespace secint
