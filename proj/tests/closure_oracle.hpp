#pragma once

// Independent signed closure of a pair term under the three local relations,
// written directly against the group operations.

#include <deque>
#include <map>
#include <set>
#include <utility>

#include "secint/group.hpp"

namespace secint::test {

using PairWords = std::pair<Word, Word>;

struct PairClosure {
    std::set<std::pair<int, PairWords>> members; // (sign relative to the seed, term)
    bool torsion2 = false;
};

inline PairClosure pair_closure_oracle(const PairWords& seed, const GroupSpec& g, bool framed)
{
    PairClosure out;
    std::map<PairWords, int> seen{{seed, 1}};
    std::deque<PairWords> queue{seed};
    out.members.insert({1, seed});
    while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop_front();
        const int s = seen.at({a, b});
        std::vector<std::pair<int, PairWords>> next;
        next.push_back({-s, {b, a}});
        next.push_back({-s, {group_inverse(a, g), group_multiply(b, group_inverse(a, g), g)}});
        if (framed && b.is_identity())
            next.push_back({s, {a, a}});
        if (framed && a == b)
            next.push_back({s, {a, Word{}}});
        for (auto& [sv, v] : next) {
            out.members.insert({sv, v});
            auto [it, fresh] = seen.try_emplace(v, sv);
            if (fresh)
                queue.push_back(v);
            else if (it->second != sv)
                out.torsion2 = true;
        }
    }
    return out;
}

} // namespace secint::test
