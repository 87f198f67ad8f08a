#include "secint/moves.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace secint {

namespace {

bool touches(const BoundaryCrossing& c, std::string_view disk)
{
    return c.a.disk == disk || c.b.disk == disk;
}

std::string fresh_prefix(const WhitneyDiagram& d, std::string_view stem)
{
    for (int k = 1;; ++k) {
        std::string id = std::string(stem) + std::to_string(k);
        if (!d.find_disk(id) && !d.find_point(id + "+") && !d.find_point(id + "-"))
            return id;
    }
}

void append_pair(WhitneyDiagram& d, const std::string& id, const Word& g,
                 std::vector<InteriorPoint> interior)
{
    d.double_points.push_back({id + "+", 1, g});
    d.double_points.push_back({id + "-", -1, g});
    d.disks.push_back({id, id + "+", id + "-", g, 0, std::move(interior)});
}

struct Resolution {
    std::string disk;
    InteriorPoint point;
};

// The interior point whose I contribution equals the crossing's
// contribution, read onto the chosen disk.
Resolution resolution_point(const WhitneyDiagram& d, const BoundaryCrossing& y, ResolveOnto onto)
{
    const auto& spec = *d.group;
    const ArcRef& first = y.agree ? y.a : y.b;
    const ArcRef& second = y.agree ? y.b : y.a;
    const ArcRef& on = onto == ResolveOnto::First ? first : second;
    const ArcRef& other = onto == ResolveOnto::First ? second : first;
    const int eps = arc_sign(y.a.arc) * arc_sign(y.b.arc);
    const int sigma = onto == ResolveOnto::First ? eps : -eps;
    const auto& wd = d.disk(on.disk);
    const auto& wo = d.disk(other.disk);
    Word h = group_power(wo.g, arc_sign(other.arc), spec);
    if (on.arc == Arc::Positive)
        return {on.disk, {sigma, h}};
    return {on.disk, {-sigma, group_multiply(h, wd.g, spec)}};
}

} // namespace

WhitneyDiagram sheet_change(const WhitneyDiagram& d, std::string_view disk)
{
    WhitneyDiagram out = d;
    auto& w = out.disk(disk);
    const auto& spec = *d.group;
    const Word old = w.g;
    w.g = group_inverse(old, spec);
    for (auto& x : w.interior) {
        x.sign = -x.sign;
        x.h = group_multiply(x.h, old, true, spec);
    }
    for (const auto* pid : {&w.positive, &w.negative})
        if (const auto* p = out.find_point(*pid))
            out.point(p->id).g = w.g;
    for (auto& c : out.crossings) {
        for (auto* ref : {&c.a, &c.b}) {
            if (ref->disk == disk) {
                ref->arc = flip(ref->arc);
                c.agree = !c.agree;
            }
        }
    }
    return out;
}

WhitneyDiagram reframe(const WhitneyDiagram& d, std::string_view disk, std::int64_t n,
                       std::int64_t m, std::int64_t interior_twists)
{
    if (n + m + 2 * interior_twists != 0)
        throw MoveError("reframe: n + m + 2k must vanish to restore the framing");
    WhitneyDiagram out = d;
    auto& w = out.disk(disk);
    for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i)
        w.interior.push_back({n < 0 ? -1 : 1, Word::identity()});
    for (std::int64_t i = 0; i < (m < 0 ? -m : m); ++i)
        w.interior.push_back({m < 0 ? -1 : 1, w.g});
    return out;
}

WhitneyDiagram tube_into_class(const WhitneyDiagram& d, std::string_view disk,
                               std::string_view class_name)
{
    WhitneyDiagram out = d;
    auto& w = out.disk(disk);
    const auto& c = d.pi2_class(class_name);
    if (c.kind == Pi2ClassDatum::Kind::RP2 && !(c.element == w.g))
        throw MoveError("tube: RP2 class '" + c.name + "' represents " +
                        format_word(c.element, *d.group) + " but disk '" + w.id + "' carries " +
                        format_word(w.g, *d.group));
    const RingElement lambda = c.lambda_for(1, d.group);
    for (const auto& [t, coef] : lambda.terms()) {
        const int s = coef < 0 ? -1 : 1;
        for (Integer i = 0; i < (coef < 0 ? Integer(-coef) : coef); ++i)
            w.interior.push_back({s, t.coords[0]});
    }
    if (c.omega2)
        w.interior.push_back({1, Word::identity()});
    return out;
}

WhitneyDiagram resolve_crossing(const WhitneyDiagram& d, std::size_t crossing, ResolveOnto onto)
{
    if (crossing >= d.crossings.size())
        throw MoveError("resolve: no crossing " + std::to_string(crossing));
    auto r = resolution_point(d, d.crossings[crossing], onto);
    WhitneyDiagram out = d;
    out.crossings.erase(out.crossings.begin() + static_cast<std::ptrdiff_t>(crossing));
    out.disk(r.disk).interior.push_back(r.point);
    return out;
}

WhitneyDiagram push_across_double_point(const WhitneyDiagram& d, std::string_view disk_i,
                                        std::string_view disk_j, PushCase c)
{
    d.disk(disk_i);
    d.disk(disk_j);
    BoundaryCrossing y{{std::string(disk_i), c.arc_i}, {std::string(disk_j), c.arc_j}, c.agree};
    if (y.a == y.b)
        throw MoveError("push: an arc cannot cross itself");
    auto r = resolution_point(d, y, c.agree ? ResolveOnto::First : ResolveOnto::Second);
    WhitneyDiagram out = d;
    out.crossings.push_back(std::move(y));
    out.disk(disk_i).interior.push_back({-r.point.sign, r.point.h});
    return out;
}

WhitneyDiagram finger_move(const WhitneyDiagram& d, const Word& a)
{
    check_word(a, *d.group);
    WhitneyDiagram out = d;
    append_pair(out, fresh_prefix(d, "F"), a, {});
    return out;
}

WhitneyDiagram whitney_move(const WhitneyDiagram& d, std::string_view disk,
                            const std::vector<Transfer>& transfers)
{
    const auto& w = d.disk(disk);
    if (!w.interior.empty() ||
        std::any_of(d.crossings.begin(), d.crossings.end(),
                    [&](const auto& c) { return touches(c, disk); }))
        throw MoveError("whitney: disk '" + w.id + "' is not clean");
    WhitneyDiagram out = d;
    const std::string pos = w.positive, neg = w.negative, id = w.id;
    std::erase_if(out.disks, [&](const auto& x) { return x.id == id; });
    std::erase_if(out.double_points, [&](const auto& p) { return p.id == pos || p.id == neg; });
    for (const auto& t : transfers) {
        check_word(t.h, *d.group);
        auto& target = out.disk(t.disk);
        target.interior.push_back({1, t.h});
        target.interior.push_back({-1, t.h});
    }
    return out;
}

WhitneyDiagram cancel_pair(const WhitneyDiagram& d, std::string_view disk, const Word& h)
{
    WhitneyDiagram out = d;
    auto& in = out.disk(disk).interior;
    auto plus = std::find(in.begin(), in.end(), InteriorPoint{1, h});
    auto minus = std::find(in.begin(), in.end(), InteriorPoint{-1, h});
    if (plus == in.end() || minus == in.end())
        throw MoveError("cancel: disk '" + std::string(disk) + "' has no pair (+," +
                        format_word(h, *d.group) + "), (-," + format_word(h, *d.group) + ")");
    auto first = std::max(plus, minus);
    auto second = std::min(plus, minus);
    in.erase(first);
    in.erase(second);
    return out;
}

WhitneyDiagram repair_swap(const WhitneyDiagram& d, std::string_view disk_i,
                           std::string_view disk_j, const Redistribution& r)
{
    const auto& wi = d.disk(disk_i);
    const auto& wj = d.disk(disk_j);
    if (wi.id == wj.id)
        throw MoveError("repair: needs two distinct disks");
    if (!(wi.g == wj.g))
        throw MoveError("repair: disks '" + wi.id + "' and '" + wj.id +
                        "' carry different group elements");
    for (const auto& c : d.crossings)
        if (touches(c, wi.id) || touches(c, wj.id))
            throw MoveError("repair: disks must not touch boundary crossings");
    std::vector<InteriorPoint> pool = wi.interior;
    pool.insert(pool.end(), wj.interior.begin(), wj.interior.end());
    for (const auto& x : r.extra) {
        check_word(x.h, *d.group);
        pool.push_back(x);
    }
    for (const auto& x : r.extra)
        pool.push_back({-x.sign, x.h});
    if (r.to_first.size() != pool.size())
        throw MoveError("repair: redistribution covers " + std::to_string(r.to_first.size()) +
                        " points, expected " + std::to_string(pool.size()));
    WhitneyDiagram out = d;
    auto& ni = out.disk(disk_i);
    auto& nj = out.disk(disk_j);
    std::swap(ni.negative, nj.negative);
    ni.interior.clear();
    nj.interior.clear();
    for (std::size_t k = 0; k < pool.size(); ++k)
        (r.to_first[k] ? ni : nj).interior.push_back(pool[k]);
    return out;
}

WhitneyDiagram trade_intersection(const WhitneyDiagram& d, std::string_view source,
                                  std::string_view target, std::size_t point, Arc through)
{
    const auto& spec = *d.group;
    const auto& ws = d.disk(source);
    const auto& wt = d.disk(target);
    if (ws.id == wt.id)
        throw MoveError("trade: source and target must differ");
    if (point >= ws.interior.size())
        throw MoveError("trade: disk '" + ws.id + "' has no interior point " + std::to_string(point));
    InteriorPoint x = ws.interior[point];
    if (through == Arc::Positive) {
        if (!(wt.g == ws.g))
            throw MoveError("trade: positive arc needs equal group elements");
    } else {
        if (!(wt.g == group_inverse(ws.g, spec)))
            throw MoveError("trade: negative arc needs inverse group elements");
        x = {-x.sign, group_multiply(x.h, wt.g, spec)};
    }
    WhitneyDiagram out = d;
    auto& src = out.disk(source).interior;
    src.erase(src.begin() + static_cast<std::ptrdiff_t>(point));
    out.disk(target).interior.push_back(x);
    const Word a = wt.g;
    append_pair(out, fresh_prefix(d, "T"), x.h, {{1, a}, {-1, a}});
    return out;
}

// Scripts.

namespace {

std::vector<std::string> tokens(std::string_view line)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(line)};
    std::string t;
    while (is >> t)
        out.push_back(t);
    return out;
}

std::int64_t parse_int(const std::string& s)
{
    std::int64_t v = 0;
    const char* b = s.data();
    if (!s.empty() && s[0] == '+')
        ++b;
    auto [p, ec] = std::from_chars(b, s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError("expected an integer, got '" + s + "'");
    return v;
}

Arc parse_arc(const std::string& s)
{
    if (s == "+" || s == "positive")
        return Arc::Positive;
    if (s == "-" || s == "negative")
        return Arc::Negative;
    throw ParseError("expected an arc (+, -, positive, negative), got '" + s + "'");
}

InteriorPoint parse_signed_word(const std::string& s, const GroupSpec& spec)
{
    if (s.size() < 2 || (s[0] != '+' && s[0] != '-'))
        throw ParseError("expected a signed word like +a or -1, got '" + s + "'");
    return {s[0] == '+' ? 1 : -1, parse_word(std::string_view(s).substr(1), spec)};
}

void want(const std::vector<std::string>& t, std::size_t lo, std::size_t hi, std::string_view usage)
{
    if (t.size() < lo || t.size() > hi)
        throw ParseError("usage: move " + std::string(usage));
}

} // namespace

std::vector<std::string> split_script(std::string_view script)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(script)};
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (tokens(line).empty())
            continue;
        out.push_back(line);
    }
    return out;
}

std::string move_name(std::string_view line)
{
    auto t = tokens(line);
    return t.size() >= 2 ? t[1] : std::string();
}

WhitneyDiagram apply_move_command(const WhitneyDiagram& d, std::string_view line,
                                  MoveCommand* parsed)
{
    auto t = tokens(line);
    bool assert_inv = true;
    if (!t.empty() && t.back() == "noassert") {
        assert_inv = false;
        t.pop_back();
    }
    if (parsed)
        *parsed = {std::string(line), assert_inv};
    if (t.size() < 2 || t[0] != "move")
        throw ParseError("expected 'move <name> <args>', got '" + std::string(line) + "'");
    const auto& spec = *d.group;
    const std::string& name = t[1];
    if (name == "sheet_change") {
        want(t, 3, 3, "sheet_change <disk>");
        return sheet_change(d, t[2]);
    }
    if (name == "reframe") {
        want(t, 6, 6, "reframe <disk> <n> <m> <interior-twists>");
        return reframe(d, t[2], parse_int(t[3]), parse_int(t[4]), parse_int(t[5]));
    }
    if (name == "tube") {
        want(t, 4, 4, "tube <disk> <class>");
        return tube_into_class(d, t[2], t[3]);
    }
    if (name == "resolve") {
        want(t, 4, 4, "resolve <crossing-index> first|second");
        const auto idx = parse_int(t[2]);
        if (idx < 0)
            throw ParseError("crossing index must be nonnegative");
        if (t[3] != "first" && t[3] != "second")
            throw ParseError("resolve: expected first or second, got '" + t[3] + "'");
        return resolve_crossing(d, static_cast<std::size_t>(idx),
                                t[3] == "first" ? ResolveOnto::First : ResolveOnto::Second);
    }
    if (name == "push") {
        want(t, 7, 7, "push <disk-i> <disk-j> +|- +|- agree|disagree");
        if (t[6] != "agree" && t[6] != "disagree")
            throw ParseError("push: expected agree or disagree, got '" + t[6] + "'");
        return push_across_double_point(d, t[2], t[3],
                                        {parse_arc(t[4]), parse_arc(t[5]), t[6] == "agree"});
    }
    if (name == "finger") {
        want(t, 3, 3, "finger <word>");
        return finger_move(d, parse_word(t[2], spec));
    }
    if (name == "whitney") {
        want(t, 3, 64, "whitney <disk> [disk=word ...]");
        std::vector<Transfer> tr;
        for (std::size_t i = 3; i < t.size(); ++i) {
            auto eq = t[i].find('=');
            if (eq == std::string::npos)
                throw ParseError("whitney: expected disk=word, got '" + t[i] + "'");
            tr.push_back({t[i].substr(0, eq), parse_word(std::string_view(t[i]).substr(eq + 1), spec)});
        }
        return whitney_move(d, t[2], tr);
    }
    if (name == "cancel") {
        want(t, 4, 4, "cancel <disk> <word>");
        return cancel_pair(d, t[2], parse_word(t[3], spec));
    }
    if (name == "repair") {
        want(t, 5, 64, "repair <disk-i> <disk-j> <mask|.> [+word|-word ...]");
        Redistribution r;
        if (t[4] != ".") {
            for (char c : t[4]) {
                if (c != '0' && c != '1')
                    throw ParseError("repair: mask must be a string of 0 and 1");
                r.to_first.push_back(c == '1');
            }
        }
        for (std::size_t i = 5; i < t.size(); ++i)
            r.extra.push_back(parse_signed_word(t[i], spec));
        return repair_swap(d, t[2], t[3], r);
    }
    if (name == "trade") {
        want(t, 6, 6, "trade <source> <target> <point-index> positive|negative");
        const auto idx = parse_int(t[4]);
        if (idx < 0)
            throw ParseError("point index must be nonnegative");
        return trade_intersection(d, t[2], t[3], static_cast<std::size_t>(idx), parse_arc(t[5]));
    }
    throw ParseError("unknown move '" + name + "'");
}

// Fuzzing.

namespace {

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

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v)
{
    return v[rng() % v.size()];
}

std::string signed_text(const InteriorPoint& x, const GroupSpec& spec)
{
    return (x.sign > 0 ? "+" : "-") + format_word(x.h, spec);
}

} // namespace

WhitneyDiagram random_diagram(std::mt19937_64& rng, const GroupPtr& group, const FuzzParams& p)
{
    const auto& spec = *group;
    WhitneyDiagram d(group);
    // A small pool of disk elements makes equal and inverse pairs common.
    std::vector<Word> pool;
    for (int i = 0; i < 3; ++i)
        pool.push_back(random_word(rng, spec, p.word_length));
    const int disks = static_cast<int>(rng() % static_cast<unsigned>(p.max_disks + 1));
    for (int k = 1; k <= disks; ++k) {
        Word g = pick(rng, pool);
        if (rng() % 3 == 0)
            g = group_inverse(g, spec);
        std::vector<InteriorPoint> in;
        const int n = static_cast<int>(rng() % static_cast<unsigned>(p.max_interior + 1));
        for (int i = 0; i < n; ++i)
            in.push_back({rng() % 2 ? 1 : -1, random_word(rng, spec, p.word_length)});
        append_pair(d, "W" + std::to_string(k), g, std::move(in));
    }
    if (disks > 0) {
        const int crossings = static_cast<int>(rng() % static_cast<unsigned>(p.max_crossings + 1));
        for (int i = 0; i < crossings; ++i) {
            BoundaryCrossing c{{pick(rng, d.disks).id, rng() % 2 ? Arc::Positive : Arc::Negative},
                               {pick(rng, d.disks).id, rng() % 2 ? Arc::Positive : Arc::Negative},
                               rng() % 2 == 0};
            if (!(c.a == c.b))
                d.crossings.push_back(std::move(c));
        }
    }
    if (p.with_pi2) {
        // lambda + omega2 1 supported on 1 with even total: tubing is zero
        // modulo the local relations.
        const int classes = static_cast<int>(rng() % 3);
        for (int i = 0; i < classes; ++i) {
            Pi2ClassDatum c;
            c.name = "A" + std::to_string(i + 1);
            c.omega2 = rng() % 2 == 0;
            int coef = 2 * static_cast<int>(rng() % 3) - 2 + (c.omega2 ? 1 : 0);
            RingElement l(group);
            l.add(BasisTerm::single(Word::identity()), coef);
            c.lambda.emplace(1, std::move(l));
            d.pi2.push_back(std::move(c));
        }
    }
    return d;
}

std::string random_move_command(std::mt19937_64& rng, const WhitneyDiagram& d, const FuzzParams& p)
{
    const auto& spec = *d.group;
    std::vector<std::string> options;
    auto clean = [&](const WhitneyDisk& w) {
        return w.interior.empty() &&
               std::none_of(d.crossings.begin(), d.crossings.end(),
                            [&](const auto& c) { return touches(c, w.id); });
    };
    auto crossing_free = [&](const WhitneyDisk& w) {
        return std::none_of(d.crossings.begin(), d.crossings.end(),
                            [&](const auto& c) { return touches(c, w.id); });
    };

    options.push_back("move finger " + format_word(random_word(rng, spec, p.word_length), spec));
    if (!d.disks.empty()) {
        const auto& w = pick(rng, d.disks);
        options.push_back("move sheet_change " + w.id);
        const std::int64_t n = static_cast<std::int64_t>(rng() % 5) - 2;
        std::int64_t m = static_cast<std::int64_t>(rng() % 5) - 2;
        if ((n - m) % 2 != 0)
            m += m < 0 ? 1 : -1;
        options.push_back("move reframe " + w.id + " " + std::to_string(n) + " " +
                          std::to_string(m) + " " + std::to_string(-(n + m) / 2));
        if (!d.pi2.empty())
            options.push_back("move tube " + w.id + " " + pick(rng, d.pi2).name);
        const auto& wj = pick(rng, d.disks);
        const char* ai = rng() % 2 ? "+" : "-";
        const char* aj = rng() % 2 ? "+" : "-";
        if (w.id != wj.id || std::string(ai) != aj)
            options.push_back("move push " + w.id + " " + wj.id + " " + ai + " " + aj + " " +
                              (rng() % 2 ? "agree" : "disagree"));
        for (const auto& x : w.interior)
            if (std::count(w.interior.begin(), w.interior.end(), InteriorPoint{-x.sign, x.h}) > 0) {
                options.push_back("move cancel " + w.id + " " + format_word(x.h, spec));
                break;
            }
    }
    if (!d.crossings.empty())
        options.push_back("move resolve " + std::to_string(rng() % d.crossings.size()) + " " +
                          (rng() % 2 ? "first" : "second"));
    for (const auto& w : d.disks) {
        if (!clean(w))
            continue;
        std::string cmd = "move whitney " + w.id;
        for (const auto& o : d.disks)
            if (o.id != w.id && rng() % 3 == 0)
                cmd += " " + o.id + "=" + format_word(random_word(rng, spec, p.word_length), spec);
        options.push_back(cmd);
        break;
    }
    // Re-pairing and trading need matching group elements.
    std::vector<std::pair<const WhitneyDisk*, const WhitneyDisk*>> equal, inverse;
    for (const auto& x : d.disks)
        for (const auto& y : d.disks) {
            if (x.id == y.id)
                continue;
            if (x.g == y.g)
                equal.push_back({&x, &y});
            if (x.g == group_inverse(y.g, spec))
                inverse.push_back({&x, &y});
        }
    for (const auto& [x, y] : equal) {
        if (!crossing_free(*x) || !crossing_free(*y))
            continue;
        std::vector<InteriorPoint> extra;
        if (rng() % 2)
            extra.push_back({rng() % 2 ? 1 : -1, random_word(rng, spec, p.word_length)});
        const std::size_t total = x->interior.size() + y->interior.size() + 2 * extra.size();
        std::string mask;
        for (std::size_t k = 0; k < total; ++k)
            mask += rng() % 2 ? '1' : '0';
        std::string cmd = "move repair " + x->id + " " + y->id + " " + (mask.empty() ? "." : mask);
        for (const auto& e : extra)
            cmd += " " + signed_text(e, spec);
        options.push_back(cmd);
        break;
    }
    if (!equal.empty()) {
        const auto& [x, y] = pick(rng, equal);
        if (!x->interior.empty())
            options.push_back("move trade " + x->id + " " + y->id + " " +
                              std::to_string(rng() % x->interior.size()) + " positive");
    }
    if (!inverse.empty()) {
        const auto& [x, y] = pick(rng, inverse);
        if (!x->interior.empty())
            options.push_back("move trade " + x->id + " " + y->id + " " +
                              std::to_string(rng() % x->interior.size()) + " negative");
    }
    return pick(rng, options);
}

} // namespace secint
