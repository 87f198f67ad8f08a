#pragma once

// Canonical forms modulo the local relations (boundary crossing, sheet change,
// framing) via signed orbit closure, and reduction modulo enumerated
// intersection relations via integer lattice membership.

#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "secint/lattice.hpp"
#include "secint/ring.hpp"

namespace secint {

/// Which basis and local relation set an engine works over.
///   Pair:      pi x pi with (a,b) = -(b,a), (a,b) = -(a^-1, b a^-1), (a,1) = (a,a)
///   Component: sphere-indexed Delta-cosets with the iij/ijj swaps and
///              (a,a,b)_iij = (a,b,b)_ijj
///   Triple:    Delta-cosets for three distinct spheres, no local relations
enum class RelationMode { Pair, Component, Triple };

struct SignedMember {
    int sign = 1; // member = sign * (closure root)
    BasisTerm term;
    auto operator<=>(const SignedMember&) const = default;
};

struct SignedClass {
    BasisTerm representative;
    /// Every (sign, term) reached from the representative; a term listed with
    /// both signs makes the class 2-torsion.
    std::vector<SignedMember> members;
    bool torsion2 = false;
    /// Unframed mode only: the class contains a framing term and is zero.
    bool zero_class = false;

    std::size_t distinct_terms() const;
};

/// Generated by a datum A in pi_2: an immersed sphere or, for an order-two
/// element, an immersed RP^2 representing that element.
struct Pi2ClassDatum {
    enum class Kind { Sphere, RP2 };

    std::string name;
    Kind kind = Kind::Sphere;
    Word element;                        // RP2 only
    std::map<int, RingElement> lambda;   // sphere index (1-based) -> lambda(f_k, A)
    bool omega2 = false;

    /// lambda(f_k, A), zero when absent.
    RingElement lambda_for(int sphere, const GroupPtr& group) const;
};

/// Throws ValidationError: rp2 element not of order two, lambda not single-word.
void validate_pi2(const Pi2ClassDatum& datum, const GroupSpec& spec);

class RelationEngine {
public:
    RelationEngine(GroupPtr group, RelationMode mode, bool unframed = false);

    const GroupPtr& group() const { return group_; }
    RelationMode mode() const { return mode_; }
    bool unframed() const { return unframed_; }

    /// Orbit of t under the generating relations, cached per class. Member
    /// signs are relative to the representative.
    std::shared_ptr<const SignedClass> closure(const BasisTerm& t) const;

    /// Sign s with t = s * representative (meaningless for torsion2 classes).
    int sign_to_representative(const BasisTerm& t) const;

    /// Replaces each term by sign * representative; torsion2 coefficients
    /// are reduced into {0, 1}; unframed zero classes are dropped.
    RingElement canonicalize(const RingElement& x) const;

    std::size_t cached_terms() const;

private:
    std::vector<std::pair<int, BasisTerm>> moves(const BasisTerm& t) const;
    bool framing_term(const BasisTerm& t) const;
    void check_kind(const BasisTerm& t) const;

    GroupPtr group_;
    RelationMode mode_;
    bool unframed_;

    struct Entry {
        std::shared_ptr<const SignedClass> cls;
        int sign;
    };
    mutable std::shared_mutex mutex_;
    mutable std::map<BasisTerm, Entry> cache_;
};

/// Closure with member signs relative to `t` itself, as a standalone value.
SignedClass signed_class_closure(const BasisTerm& t, const RelationEngine& engine);

struct RelationInstances {
    std::vector<RingElement> generators; // canonicalized, nonzero
    std::size_t enumerated = 0;          // instances before zero-pruning
    int horizon = 0;
    /// Every enumerated datum is provably trivial for all group elements, so
    /// reduction is exact.
    bool trivial = true;
    std::string description;
};

/// Enumerates intersection relations for the engine's mode with free
/// coordinates drawn from enumerate_ball(radius). Pair mode: (a, lambda(f,A))
/// - omega2(A) (a,1). Triple mode: (a,b,lambda_3), (a,lambda_2,b),
/// (lambda_1,a,b). Component mode: the global tubing family for every
/// i <= j <= sphere_count. Doubling vectors for 2-torsion classes are added
/// against the support at reduction time.
RelationInstances build_relation_instances(const RelationEngine& engine,
                                           std::span<const Pi2ClassDatum> pi2, int radius,
                                           int sphere_count = 1);

/// The instances of build_relation_instances that are connected to the
/// target's canonical support through shared terms (Triple and Component
/// modes; Pair mode enumerates fully). Reduction against either set gives
/// the same verdict. Exploration stops after a fixed number of instances;
/// a truncated set still certifies zero soundly but is never definitive.
RelationInstances build_relation_instances_near(const RelationEngine& engine,
                                                std::span<const Pi2ClassDatum> pi2, int radius,
                                                const RingElement& target, int sphere_count = 1);

struct QuotientElement {
    RingElement raw;
    RingElement canonical; // local-relation canonical form
    RingElement residue;   // canonical reduced modulo the enumerated instances
    bool certified_zero = false;
    bool definitive = false; // a nonzero verdict is conclusive
    std::size_t generator_count = 0;
    int horizon = 0;
    std::string instances;

    std::string status() const;
};

/// Decides whether canonicalize(target) lies in the integer span of the
/// instances plus doubling vectors; only the part of the relation lattice
/// connected to the target's support is assembled.
QuotientElement lattice_reduce(const RelationEngine& engine, const RingElement& target,
                               const RelationInstances& instances);

/// Max word length in the target plus max lambda word length plus 2.
int default_horizon(const RingElement& target, std::span<const Pi2ClassDatum> pi2);

/// Canonicalize, enumerate with the given (or default, when < 0) horizon,
/// and reduce.
QuotientElement reduce_in_quotient(const RelationEngine& engine, const RingElement& target,
                                   std::span<const Pi2ClassDatum> pi2, int radius = -1,
                                   int sphere_count = 1);

/// x - y certified zero in the quotient.
bool quotient_equal(const RelationEngine& engine, const RingElement& x, const RingElement& y,
                    std::span<const Pi2ClassDatum> pi2, int radius = -1, int sphere_count = 1);

enum class KmValue { Zero, One, Collapsed };
std::string_view km_name(KmValue v);

/// Pushes every word to 1 and reads the (1,1) coefficient mod 2; Collapsed
/// when some datum has odd augmented lambda + omega2 (the quotient is 0).
KmValue reduce_to_km(const QuotientElement& x, std::span<const Pi2ClassDatum> pi2,
                     bool unframed = false);

std::string format_reduction_report(const QuotientElement& q, std::string_view label);

} // namespace secint
