#pragma once

// Finite integer combinations over pi, pi x pi, (pi x pi x pi)/Delta(pi) and
// the sphere-indexed copies of the latter used by the n-sphere invariant.

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "secint/group.hpp"

namespace secint {

using Integer = boost::multiprecision::cpp_int;

enum class TermKind : std::uint8_t { Single, Pair, Triple, Component };

/// Sort of a component index triple p <= q <= r.
enum class ComponentSort : std::uint8_t { III, IIJ, IJJ, IJK };

ComponentSort component_sort(const std::array<int, 3>& spheres);
std::string_view sort_name(ComponentSort s);

struct BasisTerm {
    TermKind kind = TermKind::Pair;
    // Component terms only: sorted sphere indices (1-based). Zero otherwise.
    std::array<int, 3> spheres{0, 0, 0};
    // Single: 1 word, Pair: 2, Triple/Component: 3 in Delta-canonical form
    // (third coordinate is the identity).
    std::vector<Word> coords;

    auto operator<=>(const BasisTerm&) const = default;
    bool operator==(const BasisTerm&) const = default;

    static BasisTerm single(Word w);
    static BasisTerm pair(Word a, Word b);
    static BasisTerm triple(const Word& a, const Word& b, const Word& c, const GroupSpec& spec);
    /// `spheres` must be sorted; throws VariantMismatch otherwise.
    static BasisTerm component(const std::array<int, 3>& spheres, const Word& a, const Word& b,
                               const Word& c, const GroupSpec& spec);

    std::size_t arity() const { return coords.size(); }
};

/// Representative (a c^-1, b c^-1, 1) of the right Delta-coset of (a, b, c).
BasisTerm delta_canonicalize(const Word& a, const Word& b, const Word& c, const GroupSpec& spec);

/// Finite map BasisTerm -> nonzero Integer over one group.
class RingElement {
public:
    explicit RingElement(GroupPtr group);

    static RingElement of(GroupPtr group, const BasisTerm& t, const Integer& coef = 1);

    const GroupPtr& group() const { return group_; }
    const GroupSpec& spec() const { return *group_; }
    const std::map<BasisTerm, Integer>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    std::optional<TermKind> kind() const;
    std::size_t size() const { return terms_.size(); }
    Integer coefficient(const BasisTerm& t) const;

    /// Adds c*t, pruning zeros. Throws VariantMismatch if t's kind differs.
    void add(const BasisTerm& t, const Integer& c);

    RingElement& operator+=(const RingElement& y);
    RingElement& operator-=(const RingElement& y);
    RingElement& operator*=(const Integer& s);

    friend RingElement operator+(RingElement x, const RingElement& y) { return x += y; }
    friend RingElement operator-(RingElement x, const RingElement& y) { return x -= y; }
    friend RingElement operator*(const Integer& s, RingElement x) { return x *= s; }
    RingElement operator-() const
    {
        RingElement r = *this;
        r *= -1;
        return r;
    }

    /// Same group presentation and same terms.
    bool operator==(const RingElement& y) const;

    /// Sum of all coefficients (augmentation pi -> 1).
    Integer augmentation() const;

private:
    GroupPtr group_;
    std::map<BasisTerm, Integer> terms_;
};

/// Throws SpecMismatch when the presentations differ.
void require_same_group(const GroupSpec& a, const GroupSpec& b);

/// x + scalar * y.
RingElement ring_combine(const RingElement& x, const RingElement& y, const Integer& scalar);

/// Term-wise (a, b, c) -> (b a^-1, c a^-1).
RingElement triple_to_pair(const RingElement& x);

/// Pair (a, b) -> Delta-coset of (1, a, b); inverse of triple_to_pair.
RingElement pair_to_triple(const RingElement& x);

/// Permutation of {0, 1, 2}; image[i] is where position i goes.
struct Permutation3 {
    std::array<int, 3> image{0, 1, 2};

    static Permutation3 identity() { return {}; }
    static Permutation3 transposition(int i, int j);
    static const std::array<Permutation3, 6>& all();

    int sign() const;
    Permutation3 inverse() const;
    /// (this * other)(i) = this(other(i)).
    Permutation3 compose(const Permutation3& other) const;
    bool operator==(const Permutation3&) const = default;
};

/// Moves coordinate i to position sigma(i) and Delta-recanonicalizes; with
/// `signed_action` the coefficient is multiplied by sign(sigma).
RingElement permute_triple(const RingElement& x, const Permutation3& sigma, bool signed_action);

/// Sum over S3 of permute_triple(x, sigma, signed_action).
RingElement symmetrize_triple(const RingElement& x, bool signed_action);

/// Left-multiplies coordinate i of every term by multipliers[i]. On pair
/// terms coming from triples, (a, a, a) acts as conjugation w -> a w a^-1.
RingElement left_translate(const RingElement& x, std::span<const Word> multipliers);

/// Element text: `2*(t^3,t^4) - (1,t)`, singles as bare words `t - 2*1`,
/// triples `(a,b,c)`, components `(a,b,c)_[1,1,2]`, zero as `0`.
RingElement parse_element(std::string_view text, GroupPtr group);
std::string format_term(const BasisTerm& t, const GroupSpec& spec);
std::string format_element(const RingElement& x);

/// Longest word appearing in any term (by word_length).
std::int64_t max_word_length(const RingElement& x);

} // namespace secint
