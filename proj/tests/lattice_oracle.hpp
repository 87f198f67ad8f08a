#pragma once

// Brute-force span membership over bounded coefficients, and random instances
// for which a bounded search is conclusive.

#include <random>

#include "secint/lattice.hpp"

namespace secint::test {

/// Rank over Q by fraction-free elimination.
inline std::size_t rational_rank(lattice::Matrix m)
{
    std::size_t rank = 0;
    const std::size_t width = m.empty() ? 0 : m[0].size();
    for (std::size_t col = 0; col < width && rank < m.size(); ++col) {
        std::size_t p = rank;
        while (p < m.size() && m[p][col] == 0)
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[p], m[rank]);
        for (std::size_t i = rank + 1; i < m.size(); ++i) {
            Integer f = m[i][col];
            if (f == 0)
                continue;
            for (std::size_t k = 0; k < width; ++k)
                m[i][k] = m[i][k] * m[rank][col] - f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

/// Searches all coefficient vectors in [-bound, bound]^rows.
inline bool bounded_member(const lattice::Matrix& rows, const lattice::Vector& target, int bound)
{
    const std::size_t n = rows.size();
    std::vector<int> c(n, -bound);
    while (true) {
        bool ok = true;
        for (std::size_t k = 0; k < target.size() && ok; ++k) {
            Integer s = 0;
            for (std::size_t i = 0; i < n; ++i)
                s += c[i] * rows[i][k];
            ok = s == target[k];
        }
        if (ok)
            return true;
        std::size_t i = 0;
        while (i < n && c[i] == bound)
            c[i++] = -bound;
        if (i == n)
            return false;
        ++c[i];
    }
}

struct LatticeCase {
    lattice::Matrix rows;
    lattice::Vector target;
    bool member = false; // known by construction
};

/// Independent rows and one of: an integral combination with coefficients in
/// [-3, 3] (member); an integral vector whose unique rational coordinates are
/// half-integral (non-member); a vector with a coordinate outside the rows'
/// support (non-member). A search over [-3, 3] is conclusive on all three.
inline LatticeCase random_lattice_case(std::mt19937_64& rng, std::size_t max_width = 6)
{
    std::uniform_int_distribution<std::size_t> wd(1, max_width);
    std::uniform_int_distribution<int> entry(-3, 3);
    std::uniform_int_distribution<int> small(-3, 3);
    std::uniform_int_distribution<int> kind(0, 2);
    while (true) {
        LatticeCase lc;
        const std::size_t width = wd(rng);
        std::uniform_int_distribution<std::size_t> nr(0, std::min<std::size_t>(width, 4));
        const std::size_t n = nr(rng);
        const int k = kind(rng);
        if (k == 2 && n == width)
            continue;
        const std::size_t dead = k == 2 ? rng() % width : width;
        do {
            lc.rows.assign(n, lattice::Vector(width, 0));
            for (auto& r : lc.rows)
                for (std::size_t j = 0; j < width; ++j)
                    r[j] = j == dead ? 0 : entry(rng);
        } while (rational_rank(lc.rows) != n);

        lattice::Vector sum(width, 0);
        bool odd = false;
        for (std::size_t i = 0; i < n; ++i) {
            int c = k == 1 ? 2 * small(rng) + (rng() % 2 ? 1 : 0) : small(rng);
            odd = odd || c % 2 != 0;
            for (std::size_t j = 0; j < width; ++j)
                sum[j] += c * lc.rows[i][j];
        }
        if (k == 1) {
            bool even = true;
            for (const auto& v : sum)
                even = even && v % 2 == 0;
            if (!odd || !even)
                continue;
            for (auto& v : sum)
                v /= 2;
        }
        lc.target = std::move(sum);
        lc.member = k == 0;
        if (k == 2)
            lc.target[dead] += 1 + static_cast<int>(rng() % 3);
        return lc;
    }
}

} // namespace secint::test
