#include "secint/ring.hpp"

#include <algorithm>
#include <cctype>

namespace secint {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s)
{
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::size_t expected_arity(TermKind k)
{
    switch (k) {
    case TermKind::Single: return 1;
    case TermKind::Pair: return 2;
    default: return 3;
    }
}

} // namespace

ComponentSort component_sort(const std::array<int, 3>& s)
{
    if (s[0] == s[1] && s[1] == s[2])
        return ComponentSort::III;
    if (s[0] == s[1])
        return ComponentSort::IIJ;
    if (s[1] == s[2])
        return ComponentSort::IJJ;
    return ComponentSort::IJK;
}

std::string_view sort_name(ComponentSort s)
{
    switch (s) {
    case ComponentSort::III: return "iii";
    case ComponentSort::IIJ: return "iij";
    case ComponentSort::IJJ: return "ijj";
    case ComponentSort::IJK: return "ijk";
    }
    return "?";
}

BasisTerm BasisTerm::single(Word w)
{
    return {TermKind::Single, {0, 0, 0}, {std::move(w)}};
}

BasisTerm BasisTerm::pair(Word a, Word b)
{
    return {TermKind::Pair, {0, 0, 0}, {std::move(a), std::move(b)}};
}

BasisTerm delta_canonicalize(const Word& a, const Word& b, const Word& c, const GroupSpec& spec)
{
    return {TermKind::Triple,
            {0, 0, 0},
            {group_multiply(a, c, true, spec), group_multiply(b, c, true, spec), Word::identity()}};
}

BasisTerm BasisTerm::triple(const Word& a, const Word& b, const Word& c, const GroupSpec& spec)
{
    return delta_canonicalize(a, b, c, spec);
}

BasisTerm BasisTerm::component(const std::array<int, 3>& spheres, const Word& a, const Word& b,
                               const Word& c, const GroupSpec& spec)
{
    if (!(spheres[0] >= 1 && spheres[0] <= spheres[1] && spheres[1] <= spheres[2]))
        throw VariantMismatch("component sphere indices must be 1-based and sorted");
    BasisTerm t = delta_canonicalize(a, b, c, spec);
    t.kind = TermKind::Component;
    t.spheres = spheres;
    return t;
}

void require_same_group(const GroupSpec& a, const GroupSpec& b)
{
    if (!(a == b))
        throw SpecMismatch("group mismatch: " + a.describe() + " vs " + b.describe());
}

RingElement::RingElement(GroupPtr group) : group_(std::move(group))
{
    if (!group_)
        throw SpecMismatch("ring element needs a group");
}

RingElement RingElement::of(GroupPtr group, const BasisTerm& t, const Integer& coef)
{
    RingElement r(std::move(group));
    r.add(t, coef);
    return r;
}

std::optional<TermKind> RingElement::kind() const
{
    if (terms_.empty())
        return std::nullopt;
    return terms_.begin()->first.kind;
}

Integer RingElement::coefficient(const BasisTerm& t) const
{
    auto it = terms_.find(t);
    return it == terms_.end() ? Integer(0) : it->second;
}

void RingElement::add(const BasisTerm& t, const Integer& c)
{
    if (t.coords.size() != expected_arity(t.kind))
        throw VariantMismatch("basis term has wrong arity");
    if (auto k = kind(); k && *k != t.kind)
        throw VariantMismatch("cannot mix basis term kinds in one element");
    if (c == 0)
        return;
    for (const auto& w : t.coords)
        check_word(w, *group_);
    auto [it, inserted] = terms_.try_emplace(t, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

RingElement& RingElement::operator+=(const RingElement& y)
{
    require_same_group(*group_, *y.group_);
    for (const auto& [t, c] : y.terms_)
        add(t, c);
    return *this;
}

RingElement& RingElement::operator-=(const RingElement& y)
{
    require_same_group(*group_, *y.group_);
    for (const auto& [t, c] : y.terms_)
        add(t, -c);
    return *this;
}

RingElement& RingElement::operator*=(const Integer& s)
{
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [t, c] : terms_)
        c *= s;
    return *this;
}

bool RingElement::operator==(const RingElement& y) const
{
    return *group_ == *y.group_ && terms_ == y.terms_;
}

Integer RingElement::augmentation() const
{
    Integer s = 0;
    for (const auto& [t, c] : terms_)
        s += c;
    return s;
}

RingElement ring_combine(const RingElement& x, const RingElement& y, const Integer& scalar)
{
    require_same_group(x.spec(), y.spec());
    RingElement r = x;
    for (const auto& [t, c] : y.terms())
        r.add(t, scalar * c);
    return r;
}

RingElement triple_to_pair(const RingElement& x)
{
    if (auto k = x.kind(); k && *k != TermKind::Triple)
        throw VariantMismatch("triple_to_pair needs triple-coset terms");
    const auto& g = x.spec();
    RingElement r(x.group());
    for (const auto& [t, c] : x.terms()) {
        const auto& a = t.coords[0];
        r.add(BasisTerm::pair(group_multiply(t.coords[1], a, true, g),
                              group_multiply(t.coords[2], a, true, g)),
              c);
    }
    return r;
}

RingElement pair_to_triple(const RingElement& x)
{
    if (auto k = x.kind(); k && *k != TermKind::Pair)
        throw VariantMismatch("pair_to_triple needs pair terms");
    RingElement r(x.group());
    for (const auto& [t, c] : x.terms())
        r.add(BasisTerm::triple(Word::identity(), t.coords[0], t.coords[1], x.spec()), c);
    return r;
}

Permutation3 Permutation3::transposition(int i, int j)
{
    Permutation3 p;
    std::swap(p.image[static_cast<std::size_t>(i)], p.image[static_cast<std::size_t>(j)]);
    return p;
}

const std::array<Permutation3, 6>& Permutation3::all()
{
    static const std::array<Permutation3, 6> perms{
        Permutation3{{0, 1, 2}}, Permutation3{{1, 0, 2}}, Permutation3{{0, 2, 1}},
        Permutation3{{2, 1, 0}}, Permutation3{{1, 2, 0}}, Permutation3{{2, 0, 1}}};
    return perms;
}

int Permutation3::sign() const
{
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (image[static_cast<std::size_t>(i)] > image[static_cast<std::size_t>(j)])
                ++inversions;
    return inversions % 2 ? -1 : 1;
}

Permutation3 Permutation3::inverse() const
{
    Permutation3 p;
    for (int i = 0; i < 3; ++i)
        p.image[static_cast<std::size_t>(image[static_cast<std::size_t>(i)])] = i;
    return p;
}

Permutation3 Permutation3::compose(const Permutation3& other) const
{
    Permutation3 p;
    for (std::size_t i = 0; i < 3; ++i)
        p.image[i] = image[static_cast<std::size_t>(other.image[i])];
    return p;
}

RingElement permute_triple(const RingElement& x, const Permutation3& sigma, bool signed_action)
{
    if (auto k = x.kind(); k && *k != TermKind::Triple)
        throw VariantMismatch("permute_triple needs triple-coset terms");
    RingElement r(x.group());
    const int s = signed_action ? sigma.sign() : 1;
    for (const auto& [t, c] : x.terms()) {
        std::array<Word, 3> moved;
        for (std::size_t i = 0; i < 3; ++i)
            moved[static_cast<std::size_t>(sigma.image[i])] = t.coords[i];
        r.add(BasisTerm::triple(moved[0], moved[1], moved[2], x.spec()), s * c);
    }
    return r;
}

RingElement symmetrize_triple(const RingElement& x, bool signed_action)
{
    RingElement r(x.group());
    for (const auto& sigma : Permutation3::all())
        r += permute_triple(x, sigma, signed_action);
    return r;
}

RingElement left_translate(const RingElement& x, std::span<const Word> multipliers)
{
    RingElement r(x.group());
    const auto& g = x.spec();
    for (const auto& [t, c] : x.terms()) {
        if (multipliers.size() != t.arity())
            throw VariantMismatch("left_translate: multiplier count does not match arity");
        std::vector<Word> w;
        for (std::size_t i = 0; i < t.arity(); ++i)
            w.push_back(group_multiply(multipliers[i], t.coords[i], g));
        switch (t.kind) {
        case TermKind::Single: r.add(BasisTerm::single(w[0]), c); break;
        case TermKind::Pair: r.add(BasisTerm::pair(w[0], w[1]), c); break;
        case TermKind::Triple: r.add(BasisTerm::triple(w[0], w[1], w[2], g), c); break;
        case TermKind::Component:
            r.add(BasisTerm::component(t.spheres, w[0], w[1], w[2], g), c);
            break;
        }
    }
    return r;
}

namespace {

BasisTerm parse_atom(std::string_view atom, const GroupSpec& spec)
{
    atom = trim(atom);
    if (atom.empty())
        throw ParseError("empty term");
    if (atom.front() != '(')
        return BasisTerm::single(parse_word(atom, spec));

    auto close = atom.find(')');
    if (close == std::string_view::npos)
        throw ParseError("unbalanced parenthesis in '" + std::string(atom) + "'");
    std::vector<Word> words;
    std::string_view inner = atom.substr(1, close - 1);
    std::size_t start = 0;
    for (;;) {
        auto comma = inner.find(',', start);
        words.push_back(parse_word(inner.substr(start, comma - start), spec));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    auto suffix = trim(atom.substr(close + 1));

    if (!suffix.empty()) {
        if (words.size() != 3 || suffix.size() < 4 || suffix.substr(0, 2) != "_[" ||
            suffix.back() != ']')
            throw ParseError("bad component suffix '" + std::string(suffix) + "'");
        std::array<int, 3> idx{};
        std::string_view body = suffix.substr(2, suffix.size() - 3);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            auto comma = body.find(',', pos);
            auto tok = trim(body.substr(pos, comma - pos));
            if (!all_digits(tok) || (i < 2) == (comma == std::string_view::npos))
                throw ParseError("bad component indices '" + std::string(suffix) + "'");
            idx[i] = std::stoi(std::string(tok));
            pos = comma + 1;
        }
        return BasisTerm::component(idx, words[0], words[1], words[2], spec);
    }
    switch (words.size()) {
    case 1: return BasisTerm::single(words[0]);
    case 2: return BasisTerm::pair(words[0], words[1]);
    case 3: return BasisTerm::triple(words[0], words[1], words[2], spec);
    default: throw ParseError("tuples have 1, 2 or 3 entries");
    }
}

} // namespace

RingElement parse_element(std::string_view text, GroupPtr group)
{
    RingElement r(group);
    text = trim(text);
    if (text.empty())
        throw ParseError("empty element");

    // Split at top-level '+'/'-' that are not exponent signs.
    std::vector<std::pair<int, std::string_view>> chunks;
    int depth = 0;
    int sign = 1;
    std::size_t start = 0;
    char prev = '\0';
    bool leading = true;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '(' || ch == '[')
            ++depth;
        else if (ch == ')' || ch == ']')
            --depth;
        else if ((ch == '+' || ch == '-') && depth == 0 && prev != '^') {
            auto chunk = trim(text.substr(start, i - start));
            if (!chunk.empty())
                chunks.emplace_back(sign, chunk);
            else if (!leading)
                throw ParseError("dangling operator in '" + std::string(text) + "'");
            sign = ch == '-' ? -1 : 1;
            start = i + 1;
        }
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            prev = ch;
            leading = false;
        }
    }
    auto last = trim(text.substr(start));
    if (last.empty())
        throw ParseError("dangling operator in '" + std::string(text) + "'");
    chunks.emplace_back(sign, last);

    for (auto [s, chunk] : chunks) {
        Integer coef = s;
        std::string_view atom = chunk;
        std::size_t digits = 0;
        while (digits < chunk.size() && std::isdigit(static_cast<unsigned char>(chunk[digits])))
            ++digits;
        if (digits == chunk.size()) {
            Integer n{std::string(chunk)};
            if (n != 0)
                r.add(BasisTerm::single(Word::identity()), coef * n);
            continue;
        }
        if (digits > 0) {
            auto rest = trim(chunk.substr(digits));
            if (!rest.empty() && rest.front() == '*') {
                coef *= Integer(std::string(chunk.substr(0, digits)));
                atom = rest.substr(1);
            }
        }
        r.add(parse_atom(atom, *group), coef);
    }
    return r;
}

std::string format_term(const BasisTerm& t, const GroupSpec& spec)
{
    if (t.kind == TermKind::Single)
        return format_word(t.coords[0], spec);
    std::string out = "(";
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i)
            out += ',';
        out += format_word(t.coords[i], spec);
    }
    out += ')';
    if (t.kind == TermKind::Component) {
        out += "_[" + std::to_string(t.spheres[0]) + ',' + std::to_string(t.spheres[1]) + ',' +
               std::to_string(t.spheres[2]) + ']';
    }
    return out;
}

std::string format_element(const RingElement& x)
{
    if (x.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [t, c] : x.terms()) {
        Integer mag = c < 0 ? Integer(-c) : c;
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (mag != 1)
            out += mag.str() + '*';
        out += format_term(t, x.spec());
        first = false;
    }
    return out;
}

std::int64_t max_word_length(const RingElement& x)
{
    std::int64_t m = 0;
    for (const auto& [t, c] : x.terms())
        for (const auto& w : t.coords)
            m = std::max(m, word_length(w, x.spec()));
    return m;
}

} // namespace secint
