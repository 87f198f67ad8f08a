#pragma once

// Fundamental-group elements for presentations with decidable word problem:
// free groups, free abelian groups and cyclic groups.

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "secint/error.hpp"

namespace secint {

enum class GroupClass { Free, FreeAbelian, Cyclic };

struct GroupSpec {
    GroupClass cls = GroupClass::Free;
    std::vector<std::string> generators;
    // Cyclic only; 0 encodes the infinite cyclic group.
    std::int64_t modulus = 0;

    bool operator==(const GroupSpec&) const = default;

    static GroupSpec free(std::vector<std::string> names);
    static GroupSpec free_abelian(std::vector<std::string> names);
    static GroupSpec cyclic(std::int64_t modulus, std::string name = "t");

    /// Throws ParseError on duplicate or malformed names, negative modulus.
    void check() const;
    std::size_t rank() const { return generators.size(); }
    int index_of(std::string_view name) const; // -1 if absent
    std::string describe() const;
};

using GroupPtr = std::shared_ptr<const GroupSpec>;

GroupPtr make_group(GroupSpec spec);

/// Parses `free:a,b`, `abelian:a,b`, `cyclic:t:6` (or `cyclic:6`).
GroupSpec parse_group(std::string_view text);

struct Syllable {
    int gen = 0;
    std::int64_t exp = 0;
    bool operator==(const Syllable&) const = default;
};

/// A group element in normal form.
///
/// Free groups store freely reduced syllables with adjacent generators
/// distinct. Free abelian and cyclic groups store the nonzero entries of the
/// exponent vector sorted by generator; cyclic exponents live in [0, m).
/// The empty word is the identity.
class Word {
public:
    Word() = default;

    static Word identity() { return {}; }
    /// Caller guarantees `s` is already in normal form.
    static Word from_normal_form(std::vector<Syllable> s)
    {
        Word w;
        w.syllables_ = std::move(s);
        return w;
    }

    bool is_identity() const { return syllables_.empty(); }
    const std::vector<Syllable>& syllables() const { return syllables_; }

    /// Sum of absolute exponents of the stored form.
    std::int64_t length() const;

    bool operator==(const Word&) const = default;
    /// Length first, then lexicographic on (generator, exponent).
    std::strong_ordering operator<=>(const Word& other) const;

private:
    std::vector<Syllable> syllables_;
};

/// Unreduced symbol sequence; generator index and (possibly zero) exponent.
using RawWord = std::vector<Syllable>;

Word normalize_word(const RawWord& raw, const GroupSpec& spec);

/// Throws SpecMismatch if `w` is not a normal-form word of `spec`.
void check_word(const Word& w, const GroupSpec& spec);

Word group_multiply(const Word& x, const Word& y, bool invert_y, const GroupSpec& spec);
inline Word group_multiply(const Word& x, const Word& y, const GroupSpec& spec)
{
    return group_multiply(x, y, false, spec);
}
Word group_inverse(const Word& x, const GroupSpec& spec);
Word group_power(const Word& x, std::int64_t e, const GroupSpec& spec);

/// x != 1 and x^2 = 1.
bool is_order_two(const Word& x, const GroupSpec& spec);

/// Word length used for ball enumeration: reduced length for free groups,
/// sum of |exponents| for free abelian groups, distance to 0 mod m for
/// cyclic groups.
std::int64_t word_length(const Word& w, const GroupSpec& spec);

/// All distinct elements of length <= radius, sorted by Word order.
std::vector<Word> enumerate_ball(const GroupSpec& spec, int radius);

Word parse_word(std::string_view text, const GroupSpec& spec);
std::string format_word(const Word& w, const GroupSpec& spec);

} // namespace secint
