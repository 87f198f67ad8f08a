#pragma once

// Diagrams for n immersed spheres with based Whitney disks and embedded
// boundaries; the n-sphere invariant and the triple intersection number.

#include <array>
#include <random>
#include <string>
#include <vector>

#include "secint/diagram.hpp"

namespace secint {

struct MultiDoublePoint {
    std::string id;
    int sign = 1;
    std::array<int, 2> spheres{1, 1}; // i <= j
    bool operator==(const MultiDoublePoint&) const = default;
};

/// Interior intersection with sphere `sheet`.
struct SheetPoint {
    int sign = 1;
    int sheet = 1;
    Word h;
    bool operator==(const SheetPoint&) const = default;
};

/// Based disk pairing f_i and f_j (i <= j) with positive arc on f_i.
struct MultiDisk {
    std::string id;
    std::array<int, 2> spheres{1, 1};
    std::string positive;
    std::string negative;
    Word g_pos;
    Word g_neg;
    std::int64_t framing = 0;
    std::vector<SheetPoint> interior;
    bool operator==(const MultiDisk&) const = default;
};

struct MultiDiagram {
    GroupPtr group;
    int n = 1;
    std::vector<MultiDoublePoint> double_points;
    std::vector<MultiDisk> disks;
    std::vector<Pi2ClassDatum> pi2; // lambda keyed by sphere index
    std::vector<bool> normal_bundle_trivial; // empty or one flag per sphere
    bool unframed = false;

    explicit MultiDiagram(GroupPtr g = make_group(GroupSpec::free({})), int spheres = 1);

    const MultiDisk& disk(std::string_view id) const;
};

bool same_multi_diagram(const MultiDiagram& x, const MultiDiagram& y);

/// Codes: `spheres`, `unpaired`, `paired twice`, `sign`, `unframed disk`,
/// `dangling`, `sheet`, `duplicate id`, `pi2`, `word`, `flags`.
ValidationReport validate_multi(const MultiDiagram& d);

/// Signed component term of one interior point: the three (sphere, element)
/// entries ordered by sphere index, ties positive < negative < interior, with
/// the sign of that reordering.
RingElement route_point(const MultiDisk& w, const SheetPoint& x, const GroupPtr& group);

/// Sum of routed points, no validation.
RingElement raw_tau_n(const MultiDiagram& d);

RelationEngine tau_n_engine(const MultiDiagram& d);

/// Validates, canonicalizes by the component local relations and reduces
/// against the global tubing family.
QuotientElement compute_tau_n(const MultiDiagram& d, int radius = -1);

/// Terms of the given sorted sphere triple as plain triples.
RingElement component_slice(const RingElement& x, const std::array<int, 3>& spheres);

/// Distinct-index part for n = 3 reduced modulo the triple tubing family.
/// Throws ValidationError when the diagram pairs self-intersections.
QuotientElement compute_triple_lambda(const MultiDiagram& d, int radius = -1);

/// Left-multiplies every element whose loop runs through sphere i (positive
/// element when the positive sheet is f_i, negative likewise, interior when
/// the point lies on f_i) and lambda(f_i, A) by a.
MultiDiagram translate_sphere(const MultiDiagram& d, int sphere, const Word& a);

/// Relabels sphere k as sigma[k-1]. Disks whose order flips move their
/// positive arc to the new first sphere: elements swap and interior signs
/// change.
MultiDiagram permute_spheres(const MultiDiagram& d, const std::vector<int>& sigma);

/// Single-sphere diagram as n = 1 based diagram: crossings resolved onto the
/// first disk, positive element 1, negative element g.
MultiDiagram as_multi_diagram(const WhitneyDiagram& d);

/// Three parallel copies of a sphere with trivial normal bundle: every disk
/// gives six disks over the ordered sphere pairs, each interior point lands
/// on the remaining copy. Throws ValidationError when the flag is unset.
MultiDiagram parallel_copies(const WhitneyDiagram& d);

/// Pair-form tau as triples (1, g, h): the input of the S3 action.
RingElement tau_as_triples(const WhitneyDiagram& d);

enum class ActionConvention { Signed, Unsigned, Both, Neither };
std::string_view convention_name(ActionConvention c);

/// Compares the parallel-copy triple number of each sample with the S3
/// symmetrization of its tau under both sign modes.
ActionConvention select_action_convention(const std::vector<WhitneyDiagram>& samples);

struct MultiFuzzParams {
    int max_disks = 4;
    int max_interior = 3;
    int word_length = 2;
    bool self_disks = true;
};

/// A valid diagram over the group with n spheres and no pi2 data.
MultiDiagram random_multi_diagram(std::mt19937_64& rng, const GroupPtr& group, int n,
                                  const MultiFuzzParams& p);

} // namespace secint
