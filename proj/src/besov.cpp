#include "ac2d/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>
#include <span>
#include <stdexcept>

#include "ac2d/errors.hpp"
#include "ac2d/kernels.hpp"
#include "fft.hpp"
#include "transform.hpp"

namespace ac2d {

namespace {

double smooth_step(double x)
{
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

// chi = 1 on [0, 3/4], 0 on [4/3, inf).
double chi(double r)
{
    constexpr double lo = 0.75;
    constexpr double hi = 4.0 / 3.0;
    return 1.0 - smooth_step((r - lo) / (hi - lo));
}

}  // namespace

int DyadicPartition::top_block(int cutoff)
{
    if (cutoff <= 0)
        return -1;
    int j = 0;
    while ((1 << j) < cutoff)
        ++j;
    return j;
}

int sharp_block_of(int norm2)
{
    if (norm2 == 0)
        return -1;
    // smallest j with |m|^2 <= 4^j
    int j = 0;
    long bound = 1;
    while (norm2 > bound) {
        bound *= 4;
        ++j;
    }
    return j;
}

double DyadicPartition::multiplier(int j, int norm2) const
{
    if (kind == Kind::sharp)
        return sharp_block_of(norm2) == j ? 1.0 : 0.0;
    const double r = std::sqrt(static_cast<double>(norm2));
    if (j == -1)
        return chi(r);
    return chi(std::ldexp(r, -(j + 1))) - chi(std::ldexp(r, -j));
}

double DyadicPartition::outer_radius(int j) const
{
    if (kind == Kind::sharp)
        return j < 0 ? 0.0 : std::ldexp(1.0, j);
    return j < 0 ? 4.0 / 3.0 : std::ldexp(8.0 / 3.0, j);
}

SpectralField lp_block(const SpectralField& u, int j, DyadicPartition part)
{
    if (j < -1)
        throw std::invalid_argument("lp_block: block index must be >= -1");
    SpectralField out(u.cutoff());
    const int n = u.cutoff();
    for (int m1 = -n; m1 <= n; ++m1)
        for (int m2 = -n; m2 <= n; ++m2) {
            if (!u.in_ball(m1, m2))
                continue;
            const double w = part.multiplier(j, m1 * m1 + m2 * m2);
            if (w == 1.0)
                out.at(m1, m2) = u.at(m1, m2);
            else if (w != 0.0)
                out.at(m1, m2) = w * u.at(m1, m2);
        }
    return out;
}

namespace {

// Trigonometric polynomial of one block, u(x) = Re sum_k w_k exp(2 pi i m_k.x)
// over the half lattice (w doubled off the zero mode).
struct BlockPolynomial {
    std::vector<int> m1, m2;
    std::vector<cplx> w;
    int reach = 0;

    struct Jet {
        double v, g1, g2, h11, h12, h22;
    };

    Jet at(double x1, double x2) const
    {
        const double tp = 2.0 * std::numbers::pi;
        std::vector<cplx> e1(2 * reach + 1), e2(reach + 1);
        for (int m = -reach; m <= reach; ++m)
            e1[m + reach] = std::polar(1.0, tp * m * x1);
        for (int m = 0; m <= reach; ++m)
            e2[m] = std::polar(1.0, tp * m * x2);
        cplx s0{}, s1{}, s2{}, s11{}, s12{}, s22{};
        for (std::size_t k = 0; k < w.size(); ++k) {
            const cplx t = w[k] * e1[m1[k] + reach] * e2[m2[k]];
            const double a = m1[k], b = m2[k];
            s0 += t;
            s1 += a * t;
            s2 += b * t;
            s11 += (a * a) * t;
            s12 += (a * b) * t;
            s22 += (b * b) * t;
        }
        // d/dx multiplies by 2 pi i m; Re(i z) = -Im z
        return {s0.real(),       -tp * s1.imag(),        -tp * s2.imag(),
                -tp * tp * s11.real(), -tp * tp * s12.real(), -tp * tp * s22.real()};
    }
};

// Newton ascent of sign * u from a grid point, steps clipped to one grid
// spacing. Returns the largest |u| seen; every value is an exact evaluation.
double polish(const BlockPolynomial& poly, double x1, double x2, double h)
{
    BlockPolynomial::Jet j = poly.at(x1, x2);
    const double sign = j.v >= 0.0 ? 1.0 : -1.0;
    double best = std::abs(j.v);
    for (int it = 0; it < 12; ++it) {
        const double g1 = sign * j.g1, g2 = sign * j.g2;
        const double a = sign * j.h11, b = sign * j.h12, c = sign * j.h22;
        const double det = a * c - b * b;
        double d1, d2;
        if (a < 0.0 && det > 0.0) {
            d1 = -(c * g1 - b * g2) / det;
            d2 = -(a * g2 - b * g1) / det;
        } else {
            const double gn = std::hypot(g1, g2);
            if (gn == 0.0)
                break;
            d1 = 0.25 * h * g1 / gn;
            d2 = 0.25 * h * g2 / gn;
        }
        const double len = std::hypot(d1, d2);
        if (len > h) {
            d1 *= h / len;
            d2 *= h / len;
        }
        bool moved = false;
        for (int halve = 0; halve < 6 && !moved; ++halve) {
            const BlockPolynomial::Jet n = poly.at(x1 + d1, x2 + d2);
            if (sign * n.v > sign * j.v) {
                x1 += d1;
                x2 += d2;
                j = n;
                moved = true;
            } else {
                d1 *= 0.5;
                d2 *= 0.5;
            }
        }
        best = std::max(best, std::abs(j.v));
        if (!moved || std::hypot(d1, d2) < 1e-13)
            break;
    }
    return best;
}

double block_sup(const SpectralField& u, int j, DyadicPartition part, int oversample, bool refine)
{
    const int n = u.cutoff();
    const int reach = std::min(n, static_cast<int>(std::floor(part.outer_radius(j))));

    BlockPolynomial poly;
    poly.reach = reach;
    for (int m2 = 0; m2 <= reach; ++m2)
        for (int m1 = -reach; m1 <= reach; ++m1) {
            if (!u.in_ball(m1, m2) || (m2 == 0 && m1 < 0))
                continue;
            const double w = part.multiplier(j, m1 * m1 + m2 * m2);
            const cplx c = u.at(m1, m2);
            if (w == 0.0 || c == cplx{})
                continue;
            poly.m1.push_back(m1);
            poly.m2.push_back(m2);
            poly.w.push_back((m1 == 0 && m2 == 0 ? 1.0 : 2.0) * w * c);
        }
    if (poly.w.empty())
        return 0.0;

    const int g = oversample * fast_grid_size(2 * reach + 1);
    if (g > max_grid_size())
        throw CapacityError("besov_norm: oversampled grid exceeds cap");
    auto& ws = detail::workspace(g);
    detail::scatter_half(u, ws, [&](int m1, int m2) {
        if (std::abs(m1) > reach || m2 > reach)
            return 0.0;
        return part.multiplier(j, m1 * m1 + m2 * m2);
    });
    detail::execute_c2r(ws);
    const std::span<const double> v(ws.real, static_cast<std::size_t>(g) * g);
    const double grid_max = kernels::omp::max_abs(v);
    if (!refine || grid_max == 0.0)
        return grid_max;

    // Local maxima of |u| on the grid near the top, largest first.
    std::vector<std::pair<double, std::size_t>> cand;
    for (int i = 0; i < g; ++i)
        for (int k = 0; k < g; ++k) {
            const double a = std::abs(v[static_cast<std::size_t>(i) * g + k]);
            if (a < 0.8 * grid_max)
                continue;
            bool local = true;
            for (int di = -1; di <= 1 && local; ++di)
                for (int dk = -1; dk <= 1; ++dk) {
                    const int ii = (i + di + g) % g, kk = (k + dk + g) % g;
                    if (std::abs(v[static_cast<std::size_t>(ii) * g + kk]) > a) {
                        local = false;
                        break;
                    }
                }
            if (local)
                cand.emplace_back(a, static_cast<std::size_t>(i) * g + k);
        }
    std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    double best = grid_max;
    const double h = 1.0 / g;
    for (std::size_t c = 0; c < std::min<std::size_t>(cand.size(), 4); ++c) {
        const double x1 = static_cast<double>(cand[c].second / g) * h;
        const double x2 = static_cast<double>(cand[c].second % g) * h;
        best = std::max(best, polish(poly, x1, x2, h));
    }
    return best;
}

}  // namespace

BesovNormResult besov_norm(const SpectralField& u, double s, DyadicPartition part, int oversample, bool refine)
{
    if (oversample < 2)
        throw std::invalid_argument("besov_norm: oversample must be >= 2");
    BesovNormResult res;
    res.s = s;
    const int top = DyadicPartition::top_block(u.cutoff());
    for (int j = -1; j <= top; ++j) {
        const double sup = block_sup(u, j, part, oversample, refine);
        const double c = std::exp2(j * s) * sup;
        res.block_sup.push_back(sup);
        res.contributions.push_back(c);
        res.value = std::max(res.value, c);
    }
    return res;
}

double weighted_error_norm(const SpectralField& a, const SpectralField& b, double s, double t, double gamma,
                           DyadicPartition part, int oversample, bool refine)
{
    if (t < 0.0)
        throw std::invalid_argument("weighted_error_norm: negative time");
    const double weight = gamma == 0.0 ? 1.0 : std::pow(t, gamma);
    if (weight == 0.0)
        return 0.0;
    const int n = std::max(a.cutoff(), b.cutoff());
    SpectralField diff = project(a, n);
    diff -= project(b, n);
    return weight * besov_norm(diff, s, part, oversample, refine).value;
}

}  // namespace ac2d
