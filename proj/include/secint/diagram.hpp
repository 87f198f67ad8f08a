#pragma once

// Single-sphere Whitney-disk diagrams: signed double points, framed Whitney
// disks with group elements, interior intersections, boundary crossings and
// pi2-class data.

#include <string>
#include <vector>

#include "secint/relations.hpp"

namespace secint {

enum class Arc { Positive, Negative };

inline int arc_sign(Arc a) { return a == Arc::Positive ? 1 : -1; }
inline Arc flip(Arc a) { return a == Arc::Positive ? Arc::Negative : Arc::Positive; }

struct DoublePoint {
    std::string id;
    int sign = 1;
    Word g; // loop from the negative sheet to the positive sheet
    bool operator==(const DoublePoint&) const = default;
};

struct InteriorPoint {
    int sign = 1;
    Word h;
    bool operator==(const InteriorPoint&) const = default;
};

struct WhitneyDisk {
    std::string id;
    std::string positive; // id of the +1 double point
    std::string negative; // id of the -1 double point
    Word g;
    std::int64_t framing = 0;
    std::vector<InteriorPoint> interior;
    bool operator==(const WhitneyDisk&) const = default;
};

struct ArcRef {
    std::string disk;
    Arc arc = Arc::Positive;
    bool operator==(const ArcRef&) const = default;
};

/// y in the arc of disk a meets the arc of disk b; `agree` is true iff the
/// ordered basis (direction of a, direction of b) agrees with the orientation
/// of the sphere at y.
struct BoundaryCrossing {
    ArcRef a;
    ArcRef b;
    bool agree = true;
    bool operator==(const BoundaryCrossing&) const = default;
};

struct WhitneyDiagram {
    GroupPtr group;
    std::vector<DoublePoint> double_points;
    std::vector<WhitneyDisk> disks;
    std::vector<BoundaryCrossing> crossings;
    std::vector<Pi2ClassDatum> pi2;
    bool unframed = false;
    bool normal_bundle_trivial = false;

    explicit WhitneyDiagram(GroupPtr g = make_group(GroupSpec::free({})));

    const WhitneyDisk& disk(std::string_view id) const;
    WhitneyDisk& disk(std::string_view id);
    const WhitneyDisk* find_disk(std::string_view id) const;
    const DoublePoint* find_point(std::string_view id) const;
    DoublePoint& point(std::string_view id);
    const Pi2ClassDatum& pi2_class(std::string_view name) const;
};

/// Same content up to the order of the stored sequences.
bool same_diagram(const WhitneyDiagram& x, const WhitneyDiagram& y);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string text() const;
};

/// Pairing completeness, sign opposition, framing, group element agreement,
/// crossing references, pi2 data. Violations are prefixed by a short code:
/// `unpaired`, `paired twice`, `sign`, `unframed disk`, `dangling`,
/// `self crossing`, `group element`, `duplicate id`, `pi2`, `word`.
ValidationReport validate_diagram(const WhitneyDiagram& d);

/// Sum of sign(p) [g_p] in Z[pi] with g and g^-1 merged onto the smaller
/// and the identity coefficient dropped.
RingElement self_intersection_mu(const std::vector<DoublePoint>& points, const GroupPtr& group);

/// (g, sum sign(x) h_x). Throws ValidationError on nonzero framing unless
/// `unframed`.
RingElement disk_contribution_I(const WhitneyDisk& w, const GroupPtr& group, bool unframed = false);

/// eps_a eps_b (g_a^eps_a, g_b^eps_b) with the roles swapped when the
/// stored order disagrees with the orientation. Throws ValidationError on a
/// dangling disk reference.
RingElement crossing_contribution_J(const BoundaryCrossing& y, const WhitneyDiagram& d);

/// Sum of all I and J contributions, no validation beyond references.
RingElement raw_tau(const WhitneyDiagram& d);

/// Validates, checks mu = 0, canonicalizes and reduces against the diagram's
/// pi2 data at the given horizon (default when negative).
QuotientElement compute_tau(const WhitneyDiagram& d, int radius = -1);
QuotientElement compute_tau(const WhitneyDiagram& d, const RelationEngine& engine, int radius = -1);

/// Pair-mode engine matching the diagram's framing mode.
RelationEngine tau_engine(const WhitneyDiagram& d);

/// The example family: pi = <t>, one disk with group element t^n pairing
/// (+, t^n), (-, t^n), and l interior points (sign(l), t^m); pi2 = {f} with
/// lambda(f,f) = 0 and omega2 = 0.
WhitneyDiagram cyclic_family(std::int64_t l, std::int64_t m, std::int64_t n);

} // namespace secint
