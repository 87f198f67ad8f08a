#include "secint/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace secint {

namespace {

bool valid_identifier(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::int64_t parse_int(std::string_view s, std::string_view context)
{
    s = trim(s);
    std::int64_t v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last)
        throw ParseError("expected integer in '" + std::string(context) + "', got '" +
                         std::string(s) + "'");
    return v;
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

bool is_abelian(const GroupSpec& spec) { return spec.cls != GroupClass::Free; }

} // namespace

GroupSpec GroupSpec::free(std::vector<std::string> names)
{
    GroupSpec s{GroupClass::Free, std::move(names), 0};
    s.check();
    return s;
}

GroupSpec GroupSpec::free_abelian(std::vector<std::string> names)
{
    GroupSpec s{GroupClass::FreeAbelian, std::move(names), 0};
    s.check();
    return s;
}

GroupSpec GroupSpec::cyclic(std::int64_t modulus, std::string name)
{
    GroupSpec s{GroupClass::Cyclic, {std::move(name)}, modulus};
    s.check();
    return s;
}

void GroupSpec::check() const
{
    std::set<std::string> seen;
    for (const auto& g : generators) {
        if (!valid_identifier(g))
            throw ParseError("invalid generator name '" + g + "'");
        if (!seen.insert(g).second)
            throw ParseError("duplicate generator name '" + g + "'");
    }
    if (cls == GroupClass::Cyclic) {
        if (generators.size() != 1)
            throw ParseError("cyclic group needs exactly one generator");
        if (modulus < 0)
            throw ParseError("cyclic modulus must be >= 0");
    } else if (modulus != 0) {
        throw ParseError("modulus only applies to cyclic groups");
    }
}

int GroupSpec::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < generators.size(); ++i)
        if (generators[i] == name)
            return static_cast<int>(i);
    return -1;
}

std::string GroupSpec::describe() const
{
    std::ostringstream os;
    switch (cls) {
    case GroupClass::Free: os << "free:"; break;
    case GroupClass::FreeAbelian: os << "abelian:"; break;
    case GroupClass::Cyclic: os << "cyclic:" << generators.front() << ':' << modulus; return os.str();
    }
    for (std::size_t i = 0; i < generators.size(); ++i)
        os << (i ? "," : "") << generators[i];
    return os.str();
}

GroupPtr make_group(GroupSpec spec)
{
    spec.check();
    return std::make_shared<const GroupSpec>(std::move(spec));
}

GroupSpec parse_group(std::string_view text)
{
    text = trim(text);
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("group must look like free:a,b | abelian:a,b | cyclic:t:m");
    auto kind = trim(text.substr(0, colon));
    auto rest = trim(text.substr(colon + 1));
    auto names = [&] {
        std::vector<std::string> out;
        if (rest.empty())
            return out;
        for (auto n : split(rest, ','))
            out.emplace_back(n);
        return out;
    };
    if (kind == "free")
        return GroupSpec::free(names());
    if (kind == "abelian" || kind == "free-abelian")
        return GroupSpec::free_abelian(names());
    if (kind == "cyclic") {
        auto parts = split(rest, ':');
        if (parts.size() == 1)
            return GroupSpec::cyclic(parse_int(parts[0], text));
        if (parts.size() == 2)
            return GroupSpec::cyclic(parse_int(parts[1], text), std::string(parts[0]));
        throw ParseError("cyclic group must look like cyclic:t:m");
    }
    throw ParseError("unknown group class '" + std::string(kind) + "'");
}

std::int64_t Word::length() const
{
    std::int64_t n = 0;
    for (const auto& s : syllables_)
        n += s.exp < 0 ? -s.exp : s.exp;
    return n;
}

std::strong_ordering Word::operator<=>(const Word& other) const
{
    if (auto c = length() <=> other.length(); c != 0)
        return c;
    const auto& a = syllables_;
    const auto& b = other.syllables_;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (auto c = a[i].gen <=> b[i].gen; c != 0)
            return c;
        if (auto c = a[i].exp <=> b[i].exp; c != 0)
            return c;
    }
    return a.size() <=> b.size();
}

Word normalize_word(const RawWord& raw, const GroupSpec& spec)
{
    for (const auto& s : raw)
        if (s.gen < 0 || static_cast<std::size_t>(s.gen) >= spec.rank())
            throw ParseError("generator index " + std::to_string(s.gen) + " not in " +
                             spec.describe());

    std::vector<Syllable> out;
    if (!is_abelian(spec)) {
        for (const auto& s : raw) {
            if (s.exp == 0)
                continue;
            if (!out.empty() && out.back().gen == s.gen) {
                out.back().exp += s.exp;
                if (out.back().exp == 0)
                    out.pop_back();
            } else {
                out.push_back(s);
            }
        }
        return Word::from_normal_form(std::move(out));
    }

    std::vector<std::int64_t> exps(spec.rank(), 0);
    for (const auto& s : raw)
        exps[static_cast<std::size_t>(s.gen)] += s.exp;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        std::int64_t e = exps[i];
        if (spec.cls == GroupClass::Cyclic && spec.modulus > 0)
            e = mod_floor(e, spec.modulus);
        if (e != 0)
            out.push_back({static_cast<int>(i), e});
    }
    return Word::from_normal_form(std::move(out));
}

void check_word(const Word& w, const GroupSpec& spec)
{
    RawWord raw(w.syllables().begin(), w.syllables().end());
    bool ok = true;
    for (const auto& s : raw)
        if (s.gen < 0 || static_cast<std::size_t>(s.gen) >= spec.rank())
            ok = false;
    if (ok && !(normalize_word(raw, spec) == w))
        ok = false;
    if (!ok)
        throw SpecMismatch("word is not a normal form of " + spec.describe());
}

Word group_inverse(const Word& x, const GroupSpec& spec)
{
    RawWord raw;
    raw.reserve(x.syllables().size());
    for (auto it = x.syllables().rbegin(); it != x.syllables().rend(); ++it)
        raw.push_back({it->gen, -it->exp});
    return normalize_word(raw, spec);
}

Word group_multiply(const Word& x, const Word& y, bool invert_y, const GroupSpec& spec)
{
    check_word(x, spec);
    check_word(y, spec);
    RawWord raw(x.syllables().begin(), x.syllables().end());
    if (invert_y) {
        for (auto it = y.syllables().rbegin(); it != y.syllables().rend(); ++it)
            raw.push_back({it->gen, -it->exp});
    } else {
        raw.insert(raw.end(), y.syllables().begin(), y.syllables().end());
    }
    return normalize_word(raw, spec);
}

Word group_power(const Word& x, std::int64_t e, const GroupSpec& spec)
{
    Word base = e < 0 ? group_inverse(x, spec) : x;
    Word out;
    for (std::int64_t i = 0; i < (e < 0 ? -e : e); ++i)
        out = group_multiply(out, base, spec);
    return out;
}

bool is_order_two(const Word& x, const GroupSpec& spec)
{
    return !x.is_identity() && group_multiply(x, x, spec).is_identity();
}

std::int64_t word_length(const Word& w, const GroupSpec& spec)
{
    if (spec.cls == GroupClass::Cyclic && spec.modulus > 0 && !w.is_identity()) {
        std::int64_t e = w.syllables().front().exp;
        return std::min(e, spec.modulus - e);
    }
    return w.length();
}

std::vector<Word> enumerate_ball(const GroupSpec& spec, int radius)
{
    std::set<Word> ball{Word::identity()};
    if (radius <= 0)
        return {ball.begin(), ball.end()};

    if (spec.cls == GroupClass::Free) {
        std::vector<Word> frontier{Word::identity()};
        for (int len = 1; len <= radius; ++len) {
            std::vector<Word> next;
            for (const auto& w : frontier) {
                for (std::size_t g = 0; g < spec.rank(); ++g) {
                    for (int e : {1, -1}) {
                        const auto& syl = w.syllables();
                        if (!syl.empty() && syl.back().gen == static_cast<int>(g) &&
                            (syl.back().exp > 0) != (e > 0))
                            continue; // would cancel
                        Word v = normalize_word(
                            [&] {
                                RawWord r(syl.begin(), syl.end());
                                r.push_back({static_cast<int>(g), e});
                                return r;
                            }(),
                            spec);
                        next.push_back(v);
                    }
                }
            }
            ball.insert(next.begin(), next.end());
            frontier = std::move(next);
        }
        return {ball.begin(), ball.end()};
    }

    // Abelian and cyclic: all exponent vectors with sum |e_i| <= radius.
    std::vector<std::int64_t> e(spec.rank(), 0);
    auto recurse = [&](auto&& self, std::size_t i, std::int64_t budget) -> void {
        if (i == e.size()) {
            RawWord raw;
            for (std::size_t k = 0; k < e.size(); ++k)
                raw.push_back({static_cast<int>(k), e[k]});
            ball.insert(normalize_word(raw, spec));
            return;
        }
        for (std::int64_t v = -budget; v <= budget; ++v) {
            e[i] = v;
            self(self, i + 1, budget - (v < 0 ? -v : v));
        }
        e[i] = 0;
    };
    recurse(recurse, 0, radius);
    return {ball.begin(), ball.end()};
}

Word parse_word(std::string_view text, const GroupSpec& spec)
{
    text = trim(text);
    if (text.empty())
        throw ParseError("empty word");
    RawWord raw;
    for (auto factor : split(text, '*')) {
        if (factor.empty())
            throw ParseError("empty factor in word '" + std::string(text) + "'");
        if (factor == "1")
            continue;
        auto caret = factor.find('^');
        auto name = trim(factor.substr(0, caret));
        std::int64_t exp = 1;
        if (caret != std::string_view::npos)
            exp = parse_int(factor.substr(caret + 1), text);
        int idx = spec.index_of(name);
        if (idx < 0)
            throw ParseError("unknown generator '" + std::string(name) + "' in " +
                             spec.describe());
        raw.push_back({idx, exp});
    }
    return normalize_word(raw, spec);
}

std::string format_word(const Word& w, const GroupSpec& spec)
{
    if (w.is_identity())
        return "1";
    std::string out;
    for (const auto& s : w.syllables()) {
        if (!out.empty())
            out += '*';
        out += spec.generators.at(static_cast<std::size_t>(s.gen));
        if (s.exp != 1)
            out += '^' + std::to_string(s.exp);
    }
    return out;
}

} // namespace secint
