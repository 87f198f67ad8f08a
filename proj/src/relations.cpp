#include "secint/relations.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <set>
#include <tuple>
#include <sstream>

namespace secint {

std::size_t SignedClass::distinct_terms() const
{
    std::set<BasisTerm> terms;
    for (const auto& m : members)
        terms.insert(m.term);
    return terms.size();
}

RingElement Pi2ClassDatum::lambda_for(int sphere, const GroupPtr& group) const
{
    auto it = lambda.find(sphere);
    return it == lambda.end() ? RingElement(group) : it->second;
}

void validate_pi2(const Pi2ClassDatum& datum, const GroupSpec& spec)
{
    for (const auto& [k, l] : datum.lambda) {
        if (k < 1)
            throw ValidationError("pi2 class '" + datum.name + "': sphere index must be >= 1");
        require_same_group(l.spec(), spec);
        if (auto kind = l.kind(); kind && *kind != TermKind::Single)
            throw ValidationError("pi2 class '" + datum.name + "': lambda must be in Z[pi]");
    }
    if (datum.kind == Pi2ClassDatum::Kind::RP2) {
        check_word(datum.element, spec);
        if (!is_order_two(datum.element, spec))
            throw ValidationError("pi2 class '" + datum.name + "': RP2 element " +
                                  format_word(datum.element, spec) + " is not of order two");
    }
}

RelationEngine::RelationEngine(GroupPtr group, RelationMode mode, bool unframed)
    : group_(std::move(group)), mode_(mode), unframed_(unframed)
{
    if (!group_)
        throw SpecMismatch("relation engine needs a group");
}

void RelationEngine::check_kind(const BasisTerm& t) const
{
    const TermKind want = mode_ == RelationMode::Pair        ? TermKind::Pair
                          : mode_ == RelationMode::Component ? TermKind::Component
                                                             : TermKind::Triple;
    if (t.kind != want)
        throw VariantMismatch("basis term kind does not match relation mode");
}

bool RelationEngine::framing_term(const BasisTerm& t) const
{
    switch (mode_) {
    case RelationMode::Pair: return t.coords[1].is_identity();
    case RelationMode::Component:
        return (t.spheres[0] == t.spheres[1] && t.coords[0] == t.coords[1]) ||
               (t.spheres[1] == t.spheres[2] && t.coords[1] == t.coords[2]);
    case RelationMode::Triple: return false;
    }
    return false;
}

std::vector<std::pair<int, BasisTerm>> RelationEngine::moves(const BasisTerm& t) const
{
    const auto& g = *group_;
    std::vector<std::pair<int, BasisTerm>> out;
    if (mode_ == RelationMode::Pair) {
        const auto& a = t.coords[0];
        const auto& b = t.coords[1];
        out.emplace_back(-1, BasisTerm::pair(b, a));
        out.emplace_back(-1, BasisTerm::pair(group_inverse(a, g), group_multiply(b, a, true, g)));
        if (!unframed_) {
            if (b.is_identity())
                out.emplace_back(1, BasisTerm::pair(a, a));
            if (b == a)
                out.emplace_back(1, BasisTerm::pair(a, Word::identity()));
        }
        return out;
    }
    if (mode_ == RelationMode::Component) {
        const auto& s = t.spheres;
        const auto& x = t.coords[0];
        const auto& y = t.coords[1];
        const auto& z = t.coords[2];
        if (s[0] == s[1])
            out.emplace_back(-1, BasisTerm::component(s, y, x, z, g));
        if (s[1] == s[2])
            out.emplace_back(-1, BasisTerm::component(s, x, z, y, g));
        if (!unframed_) {
            if (s[0] == s[1] && x == y)
                out.emplace_back(1, BasisTerm::component({s[0], s[2], s[2]}, x, z, z, g));
            if (s[1] == s[2] && y == z)
                out.emplace_back(1, BasisTerm::component({s[0], s[0], s[1]}, x, x, y, g));
        }
    }
    return out;
}

std::shared_ptr<const SignedClass> RelationEngine::closure(const BasisTerm& t) const
{
    check_kind(t);
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(t); it != cache_.end())
            return it->second.cls;
    }

    // sign[u] = s means u = s * t.
    std::map<BasisTerm, int> sign{{t, 1}};
    std::set<SignedMember> reached{{1, t}};
    std::deque<BasisTerm> queue{t};
    bool torsion = false;
    bool zero = false;
    while (!queue.empty()) {
        BasisTerm u = std::move(queue.front());
        queue.pop_front();
        const int su = sign.at(u);
        if (unframed_ && framing_term(u))
            zero = true;
        for (auto& [e, v] : moves(u)) {
            const int sv = e * su;
            reached.insert({sv, v});
            auto [it, inserted] = sign.try_emplace(v, sv);
            if (inserted)
                queue.push_back(std::move(v));
            else if (it->second != sv)
                torsion = true;
        }
    }

    auto cls = std::make_shared<SignedClass>();
    cls->representative = sign.begin()->first;
    const int srep = sign.begin()->second;
    cls->torsion2 = torsion;
    cls->zero_class = zero;
    for (const auto& m : reached)
        cls->members.push_back({m.sign * srep, m.term});
    std::sort(cls->members.begin(), cls->members.end());

    std::unique_lock lock(mutex_);
    if (auto it = cache_.find(t); it != cache_.end())
        return it->second.cls;
    std::shared_ptr<const SignedClass> shared = cls;
    for (const auto& [u, s] : sign)
        cache_.try_emplace(u, Entry{shared, s * srep});
    return shared;
}

int RelationEngine::sign_to_representative(const BasisTerm& t) const
{
    closure(t);
    std::shared_lock lock(mutex_);
    return cache_.at(t).sign;
}

RingElement RelationEngine::canonicalize(const RingElement& x) const
{
    require_same_group(x.spec(), *group_);
    std::map<BasisTerm, std::pair<Integer, bool>> acc;
    for (const auto& [t, c] : x.terms()) {
        auto cls = closure(t);
        if (cls->zero_class)
            continue;
        auto& slot = acc[cls->representative];
        slot.second = cls->torsion2;
        slot.first += cls->torsion2 ? c : Integer(sign_to_representative(t) * c);
    }
    RingElement out(group_);
    for (auto& [rep, v] : acc) {
        Integer c = v.first;
        if (v.second) {
            c %= 2;
            if (c < 0)
                c += 2;
        }
        out.add(rep, c);
    }
    return out;
}

std::size_t RelationEngine::cached_terms() const
{
    std::shared_lock lock(mutex_);
    return cache_.size();
}

SignedClass signed_class_closure(const BasisTerm& t, const RelationEngine& engine)
{
    auto cls = engine.closure(t);
    const int s = engine.sign_to_representative(t);
    SignedClass out = *cls;
    for (auto& m : out.members)
        m.sign *= s; // member = m.sign * rep = m.sign * s * t
    std::sort(out.members.begin(), out.members.end());
    return out;
}

namespace {

bool datum_trivial(const Pi2ClassDatum& d, const RelationEngine& engine, int sphere_count)
{
    const auto& group = engine.group();
    if (engine.mode() == RelationMode::Pair) {
        RingElement l = d.lambda_for(1, group);
        if (!engine.unframed() && d.omega2)
            l.add(BasisTerm::single(Word::identity()), -1);
        for (const auto& [t, c] : l.terms()) {
            if (!t.coords[0].is_identity())
                return false;
            if (!engine.unframed() && c % 2 != 0)
                return false;
        }
        return true;
    }
    for (int k = 1; k <= sphere_count; ++k)
        if (!d.lambda_for(k, group).is_zero())
            return false;
    return engine.unframed() || !d.omega2;
}

void add_shifted(RingElement& out, const RingElement& lambda, const Integer& sign,
                 const std::function<BasisTerm(const Word&)>& place)
{
    for (const auto& [t, c] : lambda.terms())
        out.add(place(t.coords[0]), sign * c);
}

// Triple-mode instance: family 3 is (a,b,lambda_3), 2 is (a,lambda_2,b),
// 1 is (lambda_1,a,b).
RingElement triple_instance(const Pi2ClassDatum& d, int family, const Word& a, const Word& b,
                            const GroupPtr& group)
{
    const auto& g = *group;
    RingElement r(group);
    const RingElement l = d.lambda_for(family, group);
    switch (family) {
    case 3: add_shifted(r, l, 1, [&](const Word& w) { return BasisTerm::triple(a, b, w, g); }); break;
    case 2: add_shifted(r, l, 1, [&](const Word& w) { return BasisTerm::triple(a, w, b, g); }); break;
    default: add_shifted(r, l, 1, [&](const Word& w) { return BasisTerm::triple(w, a, b, g); }); break;
    }
    return r;
}

// Component-mode tubing instance for the sphere pair i <= j at (a, b).
RingElement component_instance(const Pi2ClassDatum& d, int i, int j, const Word& a, const Word& b,
                               int sphere_count, bool unframed, const GroupPtr& group)
{
    const auto& g = *group;
    RingElement r(group);
    for (int k = 1; k <= sphere_count; ++k) {
        const RingElement l = d.lambda_for(k, group);
        if (k < i || (k == i && i < j)) {
            add_shifted(r, l, 1, [&](const Word& w) { return BasisTerm::component({k, i, j}, w, a, b, g); });
        } else if (i < k && k < j) {
            add_shifted(r, l, -1, [&](const Word& w) { return BasisTerm::component({i, k, j}, a, w, b, g); });
        } else if (k == j) {
            add_shifted(r, l, 1, [&](const Word& w) { return BasisTerm::component({i, j, j}, a, b, w, g); });
        } else if (k > j) {
            add_shifted(r, l, 1, [&](const Word& w) { return BasisTerm::component({i, j, k}, a, b, w, g); });
        }
    }
    if (d.omega2 && !unframed)
        r.add(BasisTerm::component({i, j, j}, a, b, b, g), 1);
    return r;
}

std::string describe_instances(std::size_t classes, const std::string& scope,
                               const RelationInstances& out)
{
    std::ostringstream os;
    os << classes << " pi2 class(es), " << scope << ", " << out.enumerated
       << " instances enumerated, " << out.generators.size() << " nonzero"
       << (out.trivial ? ", all provably trivial" : "");
    return os.str();
}

} // namespace

RelationInstances build_relation_instances(const RelationEngine& engine,
                                           std::span<const Pi2ClassDatum> pi2, int radius,
                                           int sphere_count)
{
    const auto& group = engine.group();
    const auto& g = *group;
    RelationInstances out;
    out.horizon = radius;
    for (const auto& d : pi2) {
        validate_pi2(d, g);
        if (!datum_trivial(d, engine, sphere_count))
            out.trivial = false;
    }
    if (pi2.empty()) {
        out.description = "no pi2 data";
        return out;
    }

    const auto ball = enumerate_ball(g, radius);
    const Word one = Word::identity();
    auto emit = [&](RingElement r) {
        ++out.enumerated;
        r = engine.canonicalize(r);
        if (!r.is_zero())
            out.generators.push_back(std::move(r));
    };

    switch (engine.mode()) {
    case RelationMode::Pair:
        for (const auto& d : pi2) {
            const RingElement lambda = d.lambda_for(1, group);
            std::vector<Word> firsts;
            if (d.kind == Pi2ClassDatum::Kind::RP2)
                firsts = {d.element};
            else
                firsts = ball;
            for (const auto& a : firsts) {
                RingElement r(group);
                add_shifted(r, lambda, 1, [&](const Word& w) { return BasisTerm::pair(a, w); });
                if (d.omega2 && !engine.unframed())
                    r.add(BasisTerm::pair(a, one), -1);
                emit(std::move(r));
            }
        }
        break;

    case RelationMode::Triple:
        for (const auto& d : pi2) {
            if (d.kind == Pi2ClassDatum::Kind::RP2)
                continue; // only for coincident sphere indices
            for (const auto& a : ball)
                for (const auto& b : ball)
                    for (int family : {3, 2, 1})
                        emit(triple_instance(d, family, a, b, group));
        }
        break;

    case RelationMode::Component:
        for (const auto& d : pi2) {
            for (int i = 1; i <= sphere_count; ++i) {
                for (int j = i; j <= sphere_count; ++j) {
                    if (d.kind == Pi2ClassDatum::Kind::RP2 && i != j)
                        continue;
                    for (const auto& b : ball) {
                        std::vector<Word> as;
                        if (d.kind == Pi2ClassDatum::Kind::RP2)
                            as = {group_multiply(d.element, b, g)}; // a b^-1 = element
                        else
                            as = ball;
                        for (const auto& a : as)
                            emit(component_instance(d, i, j, a, b, sphere_count, engine.unframed(), group));
                    }
                }
            }
        }
        break;
    }

    out.description = describe_instances(pi2.size(), std::to_string(ball.size()) +
                                             " ball words at radius " + std::to_string(radius), out);
    return out;
}

RelationInstances build_relation_instances_near(const RelationEngine& engine,
                                                std::span<const Pi2ClassDatum> pi2, int radius,
                                                const RingElement& target, int sphere_count)
{
    constexpr std::size_t kNearInstanceCap = 1500;
    if (engine.mode() == RelationMode::Pair)
        return build_relation_instances(engine, pi2, radius, sphere_count);
    const auto& group = engine.group();
    const auto& g = *group;
    RelationInstances out;
    out.horizon = radius;
    for (const auto& d : pi2) {
        validate_pi2(d, g);
        if (!datum_trivial(d, engine, sphere_count))
            out.trivial = false;
    }
    if (pi2.empty()) {
        out.description = "no pi2 data";
        return out;
    }

    const auto ball = enumerate_ball(g, radius);
    auto in_ball = [&](const Word& w) { return word_length(w, g) <= radius; };
    std::set<BasisTerm> visited;
    std::deque<BasisTerm> work;
    std::set<std::tuple<std::size_t, int, int, Word, Word>> tried;
    std::set<std::string> kept;
    bool truncated = false;
    const RingElement canonical = engine.canonicalize(target);
    for (const auto& [t, c] : canonical.terms())
        if (visited.insert(t).second)
            work.push_back(t);

    auto consider = [&](std::size_t di, int i, int j, const Word& a, const Word& b) {
        const auto& d = pi2[di];
        if (d.kind == Pi2ClassDatum::Kind::RP2) {
            if (i != j || !in_ball(b) || !(group_multiply(a, b, true, g) == d.element))
                return;
        } else if (!in_ball(a) || !in_ball(b)) {
            return;
        }
        if (out.enumerated >= kNearInstanceCap) {
            truncated = true;
            return;
        }
        if (!tried.emplace(di, i, j, a, b).second)
            return;
        ++out.enumerated;
        RingElement r = engine.mode() == RelationMode::Triple
                            ? triple_instance(d, i, a, b, group)
                            : component_instance(d, i, j, a, b, sphere_count, engine.unframed(), group);
        r = engine.canonicalize(r);
        if (r.is_zero() || !kept.insert(format_element(r)).second)
            return;
        for (const auto& [t, c] : r.terms())
            if (visited.insert(t).second)
                work.push_back(t);
        out.generators.push_back(std::move(r));
    };

    // (w, a, b) = (m0 c, m1 c, m2 c) up to the diagonal action, so each
    // lambda word w fixes c and hence (a, b).
    while (!work.empty() && !truncated) {
        const BasisTerm t = std::move(work.front());
        work.pop_front();
        const auto cls = engine.closure(t);
        for (const auto& member : cls->members) {
            const auto& m = member.term.coords;
            auto solve = [&](int slot, const Word& w, int first, int second) {
                const Word c = group_multiply(group_inverse(m[static_cast<std::size_t>(slot)], g), w, g);
                return std::pair{group_multiply(m[static_cast<std::size_t>(first)], c, g),
                                 group_multiply(m[static_cast<std::size_t>(second)], c, g)};
            };
            for (std::size_t di = 0; di < pi2.size(); ++di) {
                const auto& d = pi2[di];
                auto each_word = [&](int k, auto&& f) {
                    const RingElement l = d.lambda_for(k, group);
                    for (const auto& [u, c] : l.terms())
                        f(u.coords[0]);
                };
                if (engine.mode() == RelationMode::Triple) {
                    if (d.kind == Pi2ClassDatum::Kind::RP2)
                        continue;
                    each_word(1, [&](const Word& w) { auto [a, b] = solve(0, w, 1, 2); consider(di, 1, 0, a, b); });
                    each_word(2, [&](const Word& w) { auto [a, b] = solve(1, w, 0, 2); consider(di, 2, 0, a, b); });
                    each_word(3, [&](const Word& w) { auto [a, b] = solve(2, w, 0, 1); consider(di, 3, 0, a, b); });
                    continue;
                }
                const auto [p, q, r] = member.term.spheres;
                if (p < q || (p == q && q < r))
                    each_word(p, [&](const Word& w) { auto [a, b] = solve(0, w, 1, 2); consider(di, q, r, a, b); });
                if (p < q && q < r)
                    each_word(q, [&](const Word& w) { auto [a, b] = solve(1, w, 0, 2); consider(di, p, r, a, b); });
                each_word(r, [&](const Word& w) { auto [a, b] = solve(2, w, 0, 1); consider(di, p, q, a, b); });
                if (d.omega2 && !engine.unframed() && q == r && m[1] == m[2]) {
                    const Word shift = group_multiply(m[0], m[1], true, g);
                    for (const auto& b : ball)
                        consider(di, p, q, group_multiply(shift, b, g), b);
                }
            }
        }
    }
    if (truncated)
        out.trivial = false;
    out.description = describe_instances(
        pi2.size(),
        "connected to the target within radius " + std::to_string(radius) +
            (truncated ? " (truncated at " + std::to_string(kNearInstanceCap) + " instances)" : ""),
        out);
    return out;
}

std::string QuotientElement::status() const
{
    if (certified_zero)
        return "0 (certified)";
    if (definitive)
        return "NONZERO (definitive)";
    return "NONZERO (modulo relations enumerated to horizon " + std::to_string(horizon) + ")";
}

QuotientElement lattice_reduce(const RelationEngine& engine, const RingElement& target,
                               const RelationInstances& instances)
{
    const auto& group = engine.group();
    QuotientElement q{target, engine.canonicalize(target), RingElement(group), false, false, 0, 0, {}};
    q.horizon = instances.horizon;
    q.instances = instances.description;
    q.definitive = instances.trivial;
    for (const auto& gen : instances.generators)
        require_same_group(gen.spec(), *group);

    if (q.canonical.is_zero()) {
        q.certified_zero = true;
        return q;
    }

    // Generators sharing a column with the target, transitively.
    std::map<BasisTerm, std::vector<std::size_t>> by_column;
    for (std::size_t i = 0; i < instances.generators.size(); ++i)
        for (const auto& [t, c] : instances.generators[i].terms())
            by_column[t].push_back(i);

    std::set<BasisTerm> columns;
    std::set<std::size_t> used;
    std::deque<BasisTerm> work;
    for (const auto& [t, c] : q.canonical.terms())
        if (columns.insert(t).second)
            work.push_back(t);
    while (!work.empty()) {
        BasisTerm t = std::move(work.front());
        work.pop_front();
        auto it = by_column.find(t);
        if (it == by_column.end())
            continue;
        for (auto gi : it->second) {
            if (!used.insert(gi).second)
                continue;
            for (const auto& [u, c] : instances.generators[gi].terms())
                if (columns.insert(u).second)
                    work.push_back(u);
        }
    }

    std::map<BasisTerm, std::size_t> index;
    std::vector<BasisTerm> basis(columns.begin(), columns.end());
    for (std::size_t i = 0; i < basis.size(); ++i)
        index[basis[i]] = i;

    lattice::Matrix rows;
    for (auto gi : used) {
        lattice::Vector v(basis.size(), 0);
        for (const auto& [t, c] : instances.generators[gi].terms())
            v[index.at(t)] = c;
        rows.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (engine.closure(basis[i])->torsion2) {
            lattice::Vector v(basis.size(), 0);
            v[i] = 2;
            rows.push_back(std::move(v));
        }
    }
    q.generator_count = rows.size();

    lattice::Vector tv(basis.size(), 0);
    for (const auto& [t, c] : q.canonical.terms())
        tv[index.at(t)] = c;
    auto m = lattice::solve_membership(rows, tv);
    q.certified_zero = m.member;
    for (std::size_t i = 0; i < basis.size(); ++i)
        q.residue.add(basis[i], m.residue[i]);
    return q;
}

int default_horizon(const RingElement& target, std::span<const Pi2ClassDatum> pi2)
{
    std::int64_t lam = 0;
    for (const auto& d : pi2) {
        for (const auto& [k, l] : d.lambda)
            lam = std::max(lam, max_word_length(l));
        if (d.kind == Pi2ClassDatum::Kind::RP2)
            lam = std::max(lam, word_length(d.element, target.spec()));
    }
    return static_cast<int>(max_word_length(target) + lam + 2);
}

QuotientElement reduce_in_quotient(const RelationEngine& engine, const RingElement& target,
                                   std::span<const Pi2ClassDatum> pi2, int radius,
                                   int sphere_count)
{
    RingElement canonical = engine.canonicalize(target);
    const int L = radius < 0 ? default_horizon(canonical, pi2) : radius;
    if (canonical.is_zero()) {
        // Zero before any intersection relation; no enumeration needed.
        RelationInstances none;
        none.horizon = L;
        none.description = "not needed (zero modulo local relations)";
        for (const auto& d : pi2)
            validate_pi2(d, *engine.group());
        auto q = lattice_reduce(engine, target, none);
        return q;
    }
    auto inst = build_relation_instances_near(engine, pi2, L, canonical, sphere_count);
    return lattice_reduce(engine, target, inst);
}

bool quotient_equal(const RelationEngine& engine, const RingElement& x, const RingElement& y,
                    std::span<const Pi2ClassDatum> pi2, int radius, int sphere_count)
{
    return reduce_in_quotient(engine, x - y, pi2, radius, sphere_count).certified_zero;
}

std::string_view km_name(KmValue v)
{
    switch (v) {
    case KmValue::Zero: return "0";
    case KmValue::One: return "1";
    case KmValue::Collapsed: return "collapsed";
    }
    return "?";
}

KmValue reduce_to_km(const QuotientElement& x, std::span<const Pi2ClassDatum> pi2, bool unframed)
{
    if (auto k = x.canonical.kind(); k && *k != TermKind::Pair)
        throw VariantMismatch("km reduction needs pair terms");
    // Unframed: (1,1) is itself a framing term, so the quotient is 0.
    if (unframed)
        return KmValue::Collapsed;
    for (const auto& d : pi2) {
        Integer s = d.lambda_for(1, x.raw.group()).augmentation() + (d.omega2 ? 1 : 0);
        if (s % 2 != 0)
            return KmValue::Collapsed;
    }
    Integer total = x.canonical.augmentation();
    return total % 2 != 0 ? KmValue::One : KmValue::Zero;
}

std::string format_reduction_report(const QuotientElement& q, std::string_view label)
{
    std::ostringstream os;
    os << label << " = " << (q.certified_zero ? std::string("0") : format_element(q.residue))
       << "  [" << q.status() << "]\n";
    os << "  raw:        " << format_element(q.raw) << '\n';
    os << "  canonical:  " << format_element(q.canonical) << '\n';
    os << "  residue:    " << format_element(q.residue) << '\n';
    os << "  relations:  " << q.instances << '\n';
    os << "  generators: " << q.generator_count << " used, horizon L = " << q.horizon << '\n';
    os << "  status:     " << q.status() << '\n';
    return os.str();
}

} // namespace secint
