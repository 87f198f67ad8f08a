#pragma once

// Integer lattices: Hermite normal form and span membership over Z.

#include <cstddef>
#include <vector>

#include "secint/ring.hpp"

namespace secint::lattice {

using Vector = std::vector<Integer>;
using Matrix = std::vector<Vector>;

/// Row-style Hermite normal form of `rows` (all of equal width).
struct HermiteForm {
    Matrix h;                       // nonzero rows only, echelon, positive pivots
    std::vector<std::size_t> pivot; // pivot column of each row of h
    Matrix transform;               // h[k] = sum_i transform[k][i] * rows[i]
};

HermiteForm hermite_normal_form(const Matrix& rows, std::size_t width);

struct Membership {
    bool member = false;
    /// Target reduced modulo the lattice; entries at pivot columns lie in
    /// [0, pivot). Unique per coset.
    Vector residue;
    /// When member: coefficients over the input rows reproducing the target.
    Vector witness;
};

Membership reduce(const HermiteForm& form, const Vector& target, std::size_t input_rows);

Membership solve_membership(const Matrix& rows, const Vector& target);

} // namespace secint::lattice
