#include "secint/multi.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "secint/moves.hpp"

namespace secint {

MultiDiagram::MultiDiagram(GroupPtr g, int spheres) : group(std::move(g)), n(spheres)
{
    if (!group)
        throw SpecMismatch("diagram needs a group");
}

const MultiDisk& MultiDiagram::disk(std::string_view id) const
{
    for (const auto& w : disks)
        if (w.id == id)
            return w;
    throw MoveError("no Whitney disk '" + std::string(id) + "'");
}

namespace {

bool word_ok(const Word& w, const GroupSpec& spec)
{
    try {
        check_word(w, spec);
        return true;
    } catch (const SpecMismatch&) {
        return false;
    }
}

bool sphere_pair_ok(const std::array<int, 2>& s, int n)
{
    return 1 <= s[0] && s[0] <= s[1] && s[1] <= n;
}

std::string pair_text(const std::array<int, 2>& s)
{
    return "[" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "]";
}

MultiDiagram sorted_copy(MultiDiagram d)
{
    std::sort(d.double_points.begin(), d.double_points.end(),
              [](const auto& x, const auto& y) { return x.id < y.id; });
    for (auto& w : d.disks)
        std::sort(w.interior.begin(), w.interior.end(), [](const auto& x, const auto& y) {
            return std::tie(x.sign, x.sheet, x.h) < std::tie(y.sign, y.sheet, y.h);
        });
    std::sort(d.disks.begin(), d.disks.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    std::sort(d.pi2.begin(), d.pi2.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
    return d;
}

WhitneyDiagram without_crossings(WhitneyDiagram d)
{
    while (!d.crossings.empty())
        d = resolve_crossing(d, 0, ResolveOnto::First);
    return d;
}

Word random_word(std::mt19937_64& rng, const GroupSpec& spec, int max_len)
{
    RawWord raw;
    if (spec.rank() == 0)
        return {};
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> gen(0, static_cast<int>(spec.rank()) - 1);
    for (int i = len(rng); i > 0; --i)
        raw.push_back({gen(rng), rng() % 2 ? 1 : -1});
    return normalize_word(raw, spec);
}

} // namespace

bool same_multi_diagram(const MultiDiagram& x, const MultiDiagram& y)
{
    if (!(*x.group == *y.group) || x.n != y.n || x.unframed != y.unframed ||
        x.normal_bundle_trivial != y.normal_bundle_trivial)
        return false;
    auto a = sorted_copy(x);
    auto b = sorted_copy(y);
    if (a.pi2.size() != b.pi2.size())
        return false;
    for (std::size_t i = 0; i < a.pi2.size(); ++i) {
        const auto& p = a.pi2[i];
        const auto& q = b.pi2[i];
        if (p.name != q.name || p.kind != q.kind || !(p.element == q.element) ||
            p.omega2 != q.omega2 || !(p.lambda == q.lambda))
            return false;
    }
    return a.double_points == b.double_points && a.disks == b.disks;
}

ValidationReport validate_multi(const MultiDiagram& d)
{
    ValidationReport r;
    const auto& spec = *d.group;
    auto bad = [&](std::string s) { r.violations.push_back(std::move(s)); };
    if (d.n < 1)
        bad("spheres: sphere count must be at least 1");
    if (!d.normal_bundle_trivial.empty() &&
        d.normal_bundle_trivial.size() != static_cast<std::size_t>(d.n))
        bad("flags: normal bundle flags must be empty or one per sphere");

    std::map<std::string, const MultiDoublePoint*> points;
    for (const auto& p : d.double_points) {
        if (!points.emplace(p.id, &p).second)
            bad("duplicate id: double point '" + p.id + "'");
        if (p.sign != 1 && p.sign != -1)
            bad("sign: double point '" + p.id + "' has sign " + std::to_string(p.sign));
        if (!sphere_pair_ok(p.spheres, d.n))
            bad("spheres: double point '" + p.id + "' has spheres " + pair_text(p.spheres));
    }
    std::map<std::string, int> uses;
    std::set<std::string> ids;
    for (const auto& w : d.disks) {
        if (!ids.insert(w.id).second)
            bad("duplicate id: Whitney disk '" + w.id + "'");
        if (!sphere_pair_ok(w.spheres, d.n))
            bad("spheres: disk '" + w.id + "' has spheres " + pair_text(w.spheres));
        if (!word_ok(w.g_pos, spec) || !word_ok(w.g_neg, spec))
            bad("word: disk '" + w.id + "' element is not a normal form");
        if (w.framing != 0 && !d.unframed)
            bad("unframed disk: '" + w.id + "' has framing " + std::to_string(w.framing));
        for (const auto& x : w.interior) {
            if (x.sign != 1 && x.sign != -1)
                bad("sign: interior point on '" + w.id + "' has sign " + std::to_string(x.sign));
            if (x.sheet < 1 || x.sheet > d.n)
                bad("sheet: interior point on '" + w.id + "' lies on sphere " +
                    std::to_string(x.sheet));
            if (!word_ok(x.h, spec))
                bad("word: interior point on '" + w.id + "' is not a normal form");
        }
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
            if (it->second->spheres != w.spheres)
                bad("spheres: double point '" + *pid + "' lies on " + pair_text(it->second->spheres) +
                    " but disk '" + w.id + "' pairs " + pair_text(w.spheres));
        }
    }
    for (const auto& p : d.double_points) {
        auto k = uses[p.id];
        if (k == 0)
            bad("unpaired: double point '" + p.id + "'");
        else if (k > 1)
            bad("paired twice: double point '" + p.id + "'");
    }
    std::set<std::string> names;
    for (const auto& c : d.pi2) {
        if (!names.insert(c.name).second)
            bad("duplicate id: pi2 class '" + c.name + "'");
        try {
            validate_pi2(c, spec);
            for (const auto& [k, l] : c.lambda)
                if (k > d.n)
                    throw ValidationError("pi2 class '" + c.name + "': lambda for sphere " +
                                          std::to_string(k) + " exceeds the sphere count");
        } catch (const Error& e) {
            bad(std::string("pi2: ") + e.what());
        }
    }
    return r;
}

RingElement route_point(const MultiDisk& w, const SheetPoint& x, const GroupPtr& group)
{
    struct Entry {
        int sphere;
        int role;
        const Word* g;
    };
    std::array<Entry, 3> e{{{w.spheres[0], 0, &w.g_pos}, {w.spheres[1], 1, &w.g_neg}, {x.sheet, 2, &x.h}}};
    int sign = x.sign;
    // insertion sort, counting transpositions
    for (int i = 1; i < 3; ++i)
        for (int j = i; j > 0 && std::tie(e[j].sphere, e[j].role) < std::tie(e[j - 1].sphere, e[j - 1].role); --j) {
            std::swap(e[j], e[j - 1]);
            sign = -sign;
        }
    return RingElement::of(group,
                           BasisTerm::component({e[0].sphere, e[1].sphere, e[2].sphere}, *e[0].g,
                                                *e[1].g, *e[2].g, *group),
                           sign);
}

RingElement raw_tau_n(const MultiDiagram& d)
{
    RingElement r(d.group);
    for (const auto& w : d.disks)
        for (const auto& x : w.interior)
            r += route_point(w, x, d.group);
    return r;
}

RelationEngine tau_n_engine(const MultiDiagram& d)
{
    return RelationEngine(d.group, RelationMode::Component, d.unframed);
}

QuotientElement compute_tau_n(const MultiDiagram& d, int radius)
{
    auto report = validate_multi(d);
    if (!report.ok())
        throw ValidationError("invalid diagram:\n" + report.text());
    auto engine = tau_n_engine(d);
    return reduce_in_quotient(engine, raw_tau_n(d), d.pi2, radius, d.n);
}

RingElement component_slice(const RingElement& x, const std::array<int, 3>& spheres)
{
    RingElement r(x.group());
    for (const auto& [t, c] : x.terms())
        if (t.kind == TermKind::Component && t.spheres == spheres)
            r.add(BasisTerm::triple(t.coords[0], t.coords[1], t.coords[2], x.spec()), c);
    return r;
}

QuotientElement compute_triple_lambda(const MultiDiagram& d, int radius)
{
    if (d.n != 3)
        throw ValidationError("triple intersection number needs exactly 3 spheres");
    auto report = validate_multi(d);
    if (!report.ok())
        throw ValidationError("invalid diagram:\n" + report.text());
    for (const auto& w : d.disks)
        if (w.spheres[0] == w.spheres[1])
            throw ValidationError("triple intersection number: disk '" + w.id +
                                  "' pairs self-intersections");
    RelationEngine engine(d.group, RelationMode::Triple, d.unframed);
    return reduce_in_quotient(engine, component_slice(raw_tau_n(d), {1, 2, 3}), d.pi2, radius, 3);
}

MultiDiagram translate_sphere(const MultiDiagram& d, int sphere, const Word& a)
{
    if (sphere < 1 || sphere > d.n)
        throw ValidationError("translate: sphere index " + std::to_string(sphere) + " out of range");
    const auto& spec = *d.group;
    check_word(a, spec);
    MultiDiagram out = d;
    for (auto& w : out.disks) {
        if (w.spheres[0] == sphere)
            w.g_pos = group_multiply(a, w.g_pos, spec);
        if (w.spheres[1] == sphere)
            w.g_neg = group_multiply(a, w.g_neg, spec);
        for (auto& x : w.interior)
            if (x.sheet == sphere)
                x.h = group_multiply(a, x.h, spec);
    }
    for (auto& c : out.pi2) {
        auto it = c.lambda.find(sphere);
        if (it != c.lambda.end()) {
            const std::array<Word, 1> m{a};
            it->second = left_translate(it->second, m);
        }
    }
    return out;
}

MultiDiagram permute_spheres(const MultiDiagram& d, const std::vector<int>& sigma)
{
    if (sigma.size() != static_cast<std::size_t>(d.n))
        throw ValidationError("permute: permutation size differs from the sphere count");
    std::vector<int> seen = sigma;
    std::sort(seen.begin(), seen.end());
    for (int k = 0; k < d.n; ++k)
        if (seen[static_cast<std::size_t>(k)] != k + 1)
            throw ValidationError("permute: not a permutation of 1..n");
    auto image = [&](int k) { return sigma[static_cast<std::size_t>(k - 1)]; };
    MultiDiagram out = d;
    for (auto& p : out.double_points) {
        std::array<int, 2> s{image(p.spheres[0]), image(p.spheres[1])};
        std::sort(s.begin(), s.end());
        p.spheres = s;
    }
    for (auto& w : out.disks) {
        const int i = image(w.spheres[0]), j = image(w.spheres[1]);
        for (auto& x : w.interior)
            x.sheet = image(x.sheet);
        if (i > j) {
            std::swap(w.g_pos, w.g_neg);
            for (auto& x : w.interior)
                x.sign = -x.sign;
            w.spheres = {j, i};
        } else {
            w.spheres = {i, j};
        }
    }
    for (auto& c : out.pi2) {
        std::map<int, RingElement> l;
        for (auto& [k, v] : c.lambda)
            l.emplace(image(k), std::move(v));
        c.lambda = std::move(l);
    }
    if (!d.normal_bundle_trivial.empty())
        for (int k = 1; k <= d.n; ++k)
            out.normal_bundle_trivial[static_cast<std::size_t>(image(k) - 1)] =
                d.normal_bundle_trivial[static_cast<std::size_t>(k - 1)];
    return out;
}

MultiDiagram as_multi_diagram(const WhitneyDiagram& source)
{
    const auto d = without_crossings(source);
    MultiDiagram out(d.group, 1);
    out.unframed = d.unframed;
    out.pi2 = d.pi2;
    out.normal_bundle_trivial = {d.normal_bundle_trivial};
    for (const auto& p : d.double_points)
        out.double_points.push_back({p.id, p.sign, {1, 1}});
    for (const auto& w : d.disks) {
        MultiDisk m{w.id, {1, 1}, w.positive, w.negative, Word::identity(), w.g, w.framing, {}};
        for (const auto& x : w.interior)
            m.interior.push_back({x.sign, 1, x.h});
        out.disks.push_back(std::move(m));
    }
    return out;
}

MultiDiagram parallel_copies(const WhitneyDiagram& source)
{
    if (!source.normal_bundle_trivial)
        throw ValidationError("parallel copies need a sphere with trivial normal bundle");
    const auto d = without_crossings(source);
    MultiDiagram out(d.group, 3);
    out.unframed = d.unframed;
    out.normal_bundle_trivial = {true, true, true};
    for (const auto& w : d.disks) {
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                if (i == j)
                    continue;
                const int k = 6 - i - j;
                const std::string tag = "_" + std::to_string(i) + std::to_string(j);
                const std::array<int, 2> s{std::min(i, j), std::max(i, j)};
                MultiDisk m{w.id + tag, s, w.positive + tag, w.negative + tag, Word::identity(),
                            w.g, w.framing, {}};
                const int flip = i < j ? 1 : -1;
                if (flip < 0)
                    std::swap(m.g_pos, m.g_neg);
                for (const auto& x : w.interior)
                    m.interior.push_back({flip * x.sign, k, x.h});
                out.double_points.push_back({m.positive, 1, s});
                out.double_points.push_back({m.negative, -1, s});
                out.disks.push_back(std::move(m));
            }
        }
    }
    return out;
}

RingElement tau_as_triples(const WhitneyDiagram& d)
{
    return pair_to_triple(raw_tau(d));
}

std::string_view convention_name(ActionConvention c)
{
    switch (c) {
    case ActionConvention::Signed: return "signed";
    case ActionConvention::Unsigned: return "unsigned";
    case ActionConvention::Both: return "both";
    case ActionConvention::Neither: return "neither";
    }
    return "neither";
}

ActionConvention select_action_convention(const std::vector<WhitneyDiagram>& samples)
{
    bool signed_ok = true, unsigned_ok = true;
    for (auto d : samples) {
        d.normal_bundle_trivial = true;
        const auto lambda = component_slice(raw_tau_n(parallel_copies(d)), {1, 2, 3});
        const auto tau = tau_as_triples(d);
        signed_ok = signed_ok && lambda == symmetrize_triple(tau, true);
        unsigned_ok = unsigned_ok && lambda == symmetrize_triple(tau, false);
    }
    if (signed_ok && unsigned_ok)
        return ActionConvention::Both;
    if (signed_ok)
        return ActionConvention::Signed;
    if (unsigned_ok)
        return ActionConvention::Unsigned;
    return ActionConvention::Neither;
}

MultiDiagram random_multi_diagram(std::mt19937_64& rng, const GroupPtr& group, int n,
                                  const MultiFuzzParams& p)
{
    const auto& spec = *group;
    MultiDiagram d(group, n);
    const bool self = p.self_disks || n < 2;
    const int disks = static_cast<int>(rng() % static_cast<unsigned>(p.max_disks + 1));
    std::uniform_int_distribution<int> sphere(1, n);
    for (int r = 1; r <= disks; ++r) {
        int i = sphere(rng), j = sphere(rng);
        while (!self && i == j)
            j = sphere(rng);
        if (i > j)
            std::swap(i, j);
        const std::string id = "W" + std::to_string(r);
        MultiDisk w{id, {i, j}, id + "+", id + "-", random_word(rng, spec, p.word_length),
                    random_word(rng, spec, p.word_length), 0, {}};
        const int k = static_cast<int>(rng() % static_cast<unsigned>(p.max_interior + 1));
        for (int m = 0; m < k; ++m)
            w.interior.push_back({rng() % 2 ? 1 : -1, sphere(rng), random_word(rng, spec, p.word_length)});
        d.double_points.push_back({w.positive, 1, w.spheres});
        d.double_points.push_back({w.negative, -1, w.spheres});
        d.disks.push_back(std::move(w));
    }
    return d;
}

} // namespace secint
