#pragma once

// Diagram rewrites. Each returns a new diagram and leaves canonical tau
// unchanged (tube_into_class up to the intersection relation it realizes).

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "secint/diagram.hpp"

namespace secint {

/// Change of positive arc: g -> g^-1, interior (s,h) -> (-s, h g^-1), the
/// paired double points carry g^-1, and every touching crossing has that
/// arc label flipped and its orientation flag flipped once per touching arc.
WhitneyDiagram sheet_change(const WhitneyDiagram& d, std::string_view disk);

/// n boundary twists on the positive arc, m on the negative arc and
/// `interior_twists` interior twists; requires n + m + 2 interior_twists = 0.
/// Adds |n| points (sign n, 1) and |m| points (sign m, g).
WhitneyDiagram reframe(const WhitneyDiagram& d, std::string_view disk, std::int64_t n,
                       std::int64_t m, std::int64_t interior_twists);

/// Tubes the disk into a pi2 class: adds points realizing
/// (g, lambda(f,A) + omega2(A) 1). An RP2 class needs g equal to its element.
WhitneyDiagram tube_into_class(const WhitneyDiagram& d, std::string_view disk,
                               std::string_view class_name);

/// Which disk of a crossing absorbs it, in the order (first, second) that
/// agrees with the orientation of the sphere.
enum class ResolveOnto { First, Second };

/// Removes the crossing and adds one interior point on the chosen disk. Onto
/// the first disk the contribution is J(y) itself (exactly when that arc is
/// positive, via the sheet-change relation otherwise); onto the second it
/// is the boundary-crossing mirror of J(y).
WhitneyDiagram resolve_crossing(const WhitneyDiagram& d, std::size_t crossing, ResolveOnto onto);

struct PushCase {
    Arc arc_i = Arc::Positive; // arc of the pushed disk
    Arc arc_j = Arc::Positive; // arc of the disk owning the double point
    bool agree = true;         // (dW_i, dW_j) agrees with the orientation
};

/// Pushes the arc of disk i across a double point of disk j: adds the
/// crossing {(i, arc_i), (j, arc_j), agree} and an interior point on disk i
/// cancelling its J contribution.
WhitneyDiagram push_across_double_point(const WhitneyDiagram& d, std::string_view disk_i,
                                        std::string_view disk_j, PushCase c);

/// Finger move guided by a: a new pair (+,a), (-,a) with a clean disk,
/// appended last.
WhitneyDiagram finger_move(const WhitneyDiagram& d, const Word& a);

struct Transfer {
    std::string disk;
    Word h;
};

/// Whitney move on a clean disk: removes it and its double points and adds a
/// cancelling interior pair (+,h), (-,h) on the named disk per transfer.
WhitneyDiagram whitney_move(const WhitneyDiagram& d, std::string_view disk,
                            const std::vector<Transfer>& transfers);

/// Removes one (+,h) and one (-,h) from the disk's interior.
WhitneyDiagram cancel_pair(const WhitneyDiagram& d, std::string_view disk, const Word& h);

/// Points of interior_i ++ interior_j ++ extra ++ (-extra), each sent to the
/// first new disk when its flag is set and to the second otherwise.
struct Redistribution {
    std::vector<InteriorPoint> extra;
    std::vector<bool> to_first;
};

/// Re-pairs (p_i+, p_i-), (p_j+, p_j-) with g_i = g_j as disk i := (p_i+, p_j-)
/// and disk j := (p_j+, p_i-). Neither disk may touch a crossing.
WhitneyDiagram repair_swap(const WhitneyDiagram& d, std::string_view disk_i,
                           std::string_view disk_j, const Redistribution& r);

/// Moves interior point `point` of the source disk to the target disk. Through
/// the positive arc (g_target = g_source) the point is unchanged; through the
/// negative arc (g_target = g_source^-1) (s,h) becomes (-s, h g_target). A new
/// cancelling double-point pair with element b (the moved h) and a disk with
/// interior {(+,a), (-,a)}, a = g_target, are appended.
WhitneyDiagram trade_intersection(const WhitneyDiagram& d, std::string_view source,
                                  std::string_view target, std::size_t point, Arc through);

// Move scripts: one command per line,
//   move sheet_change W
//   move reframe W n m k
//   move tube W A
//   move resolve <crossing-index> first|second
//   move push Wi Wj +|- +|- agree|disagree
//   move finger <word>
//   move whitney W [disk=word ...]
//   move cancel W <word>
//   move repair Wi Wj <mask|.> [+word|-word ...]
//   move trade Ws Wt <point-index> positive|negative
// with an optional trailing `noassert`. Blank lines and `#` comments are
// skipped.

struct MoveCommand {
    std::string line;
    bool assert_invariance = true;
};

/// Applies one command; throws ParseError on malformed text and MoveError
/// when the move's preconditions fail.
WhitneyDiagram apply_move_command(const WhitneyDiagram& d, std::string_view line,
                                  MoveCommand* parsed = nullptr);

std::vector<std::string> split_script(std::string_view script);

// Randomized diagrams and moves for invariance testing.

struct FuzzParams {
    int max_disks = 5;
    int max_interior = 4;
    int max_crossings = 3;
    int word_length = 2;
    bool with_pi2 = true; // adds classes whose tubing is trivial in the quotient
};

/// A valid diagram over the given group with mu = 0.
WhitneyDiagram random_diagram(std::mt19937_64& rng, const GroupPtr& group, const FuzzParams& p);

/// A random applicable move as a script line, weighted over all move kinds.
std::string random_move_command(std::mt19937_64& rng, const WhitneyDiagram& d, const FuzzParams& p);

/// The command's move name (`sheet_change`, `reframe`, ...).
std::string move_name(std::string_view line);

} // namespace secint
