#include "secint/lattice.hpp"

#include <utility>

namespace secint::lattice {

namespace {

// g = s*a + t*b with g = gcd(a, b) >= 0.
void extended_gcd(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t)
{
    Integer old_r = a, r = b, old_s = 1, ss = 0, old_t = 0, tt = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * ss;
        old_s = ss;
        ss = tmp;
        tmp = old_t - q * tt;
        old_t = tt;
        tt = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    g = old_r;
    s = old_s;
    t = old_t;
}

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q = a / b; // truncates toward zero
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

void axpy(Vector& y, const Integer& a, const Vector& x)
{
    for (std::size_t i = 0; i < y.size(); ++i)
        if (x[i] != 0)
            y[i] += a * x[i];
}

} // namespace

HermiteForm hermite_normal_form(const Matrix& rows, std::size_t width)
{
    const std::size_t m = rows.size();
    Matrix a = rows;
    for (auto& r : a)
        r.resize(width, 0);
    Matrix u(m, Vector(m, 0));
    for (std::size_t i = 0; i < m; ++i)
        u[i][i] = 1;

    HermiteForm out;
    std::size_t r = 0;
    for (std::size_t col = 0; col < width && r < m; ++col) {
        for (std::size_t i = r + 1; i < m; ++i) {
            if (a[i][col] == 0)
                continue;
            if (a[r][col] == 0) {
                std::swap(a[r], a[i]);
                std::swap(u[r], u[i]);
                continue;
            }
            Integer g, s, t;
            extended_gcd(a[r][col], a[i][col], g, s, t);
            Integer p = a[r][col] / g;
            Integer q = a[i][col] / g;
            // [s t; -q p] has determinant s*p + t*q = 1.
            Vector nr(width), ni(width), ur(m), ui(m);
            for (std::size_t k = 0; k < width; ++k) {
                nr[k] = s * a[r][k] + t * a[i][k];
                ni[k] = p * a[i][k] - q * a[r][k];
            }
            for (std::size_t k = 0; k < m; ++k) {
                ur[k] = s * u[r][k] + t * u[i][k];
                ui[k] = p * u[i][k] - q * u[r][k];
            }
            a[r] = std::move(nr);
            a[i] = std::move(ni);
            u[r] = std::move(ur);
            u[i] = std::move(ui);
        }
        if (a[r][col] == 0)
            continue;
        if (a[r][col] < 0) {
            for (auto& v : a[r])
                v = -v;
            for (auto& v : u[r])
                v = -v;
        }
        for (std::size_t k = 0; k < r; ++k) {
            Integer q = floor_div(a[k][col], a[r][col]);
            if (q != 0) {
                axpy(a[k], -q, a[r]);
                axpy(u[k], -q, u[r]);
            }
        }
        out.pivot.push_back(col);
        ++r;
    }
    a.resize(r);
    u.resize(r);
    out.h = std::move(a);
    out.transform = std::move(u);
    return out;
}

Membership reduce(const HermiteForm& form, const Vector& target, std::size_t input_rows)
{
    Membership res;
    res.residue = target;
    Vector coeff(form.h.size(), 0);
    for (std::size_t k = 0; k < form.h.size(); ++k) {
        const auto c = form.pivot[k];
        Integer q = floor_div(res.residue[c], form.h[k][c]);
        if (q != 0) {
            axpy(res.residue, -q, form.h[k]);
            coeff[k] = q;
        }
    }
    res.member = true;
    for (const auto& v : res.residue)
        if (v != 0)
            res.member = false;
    if (res.member) {
        res.witness.assign(input_rows, 0);
        for (std::size_t k = 0; k < coeff.size(); ++k)
            if (coeff[k] != 0)
                axpy(res.witness, coeff[k], form.transform[k]);
    }
    return res;
}

Membership solve_membership(const Matrix& rows, const Vector& target)
{
    auto form = hermite_normal_form(rows, target.size());
    return reduce(form, target, rows.size());
}

} // namespace secint::lattice
