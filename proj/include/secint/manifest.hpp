#pragma once

// JSON manifests for diagrams, elements and pi2 data.
//
// Single sphere:
//   {"group": "free:a,b",
//    "double_points": [{"id": "p+", "sign": 1, "g": "a"}, ...],
//    "disks": [{"id": "W", "positive": "p+", "negative": "p-", "g": "a",
//               "framing": 0, "interior": [{"sign": 1, "h": "b"}]}],
//    "crossings": [{"a": {"disk": "W", "arc": "+"}, "b": {"disk": "V", "arc": "-"},
//                   "agree": true}],
//    "pi2": [{"name": "A", "kind": "sphere", "element": "1",
//             "lambda": {"1": "2*1 - b"}, "omega2": false}],
//    "unframed": false, "normal_bundle_trivial": false}
//
// n spheres: "n" is present; double points carry "spheres": [i, j] instead
// of "g"; disks carry "spheres", "g_pos", "g_neg" and interior points a
// "sheet"; "crossings" must be empty; "normal_bundle_trivial" is a list of
// flags (empty or one per sphere).
//
// Only "group" is required; other fields default to empty, zero or false.
// Unknown fields are rejected. Emission writes every field in the order
// above, so emit(parse(emit(d))) == emit(d) byte for byte.

#include <string>
#include <string_view>
#include <vector>

#include "secint/diagram.hpp"
#include "secint/multi.hpp"

namespace secint {

/// True when the manifest has an "n" field.
bool is_multi_manifest(std::string_view text);

WhitneyDiagram parse_manifest(std::string_view text);
std::string emit_manifest(const WhitneyDiagram& d);

MultiDiagram parse_multi_manifest(std::string_view text);
std::string emit_multi_manifest(const MultiDiagram& d);

/// {"group": ..., "element": "2*(t^3,t^4)", "unframed": false, "n": 1}.
/// Pair elements reduce in the single-sphere quotient, triples in the
/// triple quotient and component terms in the n-sphere quotient.
struct ElementManifest {
    GroupPtr group;
    RingElement element;
    bool unframed = false;
    int n = 1;
};
ElementManifest parse_element_manifest(std::string_view text);
std::string emit_element_manifest(const ElementManifest& e);

/// {"pi2": [...]} over a known group.
std::vector<Pi2ClassDatum> parse_pi2_manifest(std::string_view text, const GroupPtr& group);
std::string emit_pi2_manifest(const std::vector<Pi2ClassDatum>& pi2, const GroupSpec& spec);

} // namespace secint
