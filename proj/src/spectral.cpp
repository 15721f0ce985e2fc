#include "ac2d/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ac2d/errors.hpp"
#include "fft.hpp"
#include "transform.hpp"

namespace ac2d {

SpectralField::SpectralField(int cutoff) : cutoff_(cutoff)
{
    if (cutoff < 0)
        throw std::invalid_argument("SpectralField: negative cutoff");
    coeffs_.assign(static_cast<std::size_t>(width()) * static_cast<std::size_t>(width()), cplx{});
}

SpectralField SpectralField::constant(double value, int cutoff)
{
    SpectralField f(cutoff);
    f.at(0, 0) = value;
    return f;
}

cplx SpectralField::coefficient(int m1, int m2) const
{
    if (std::abs(m1) > cutoff_ || std::abs(m2) > cutoff_)
        return {};
    return at(m1, m2);
}

void SpectralField::set_pair(int m1, int m2, cplx value)
{
    if (m1 == 0 && m2 == 0) {
        at(0, 0) = cplx(value.real(), 0.0);
        return;
    }
    at(m1, m2) = value;
    at(-m1, -m2) = std::conj(value);
}

bool SpectralField::is_hermitian(double tol) const
{
    for (int m1 = -cutoff_; m1 <= cutoff_; ++m1)
        for (int m2 = -cutoff_; m2 <= cutoff_; ++m2)
            if (std::abs(at(m1, m2) - std::conj(at(-m1, -m2))) > tol)
                return false;
    return true;
}

bool SpectralField::ball_supported() const
{
    for (int m1 = -cutoff_; m1 <= cutoff_; ++m1)
        for (int m2 = -cutoff_; m2 <= cutoff_; ++m2)
            if (!in_ball(m1, m2) && at(m1, m2) != cplx{})
                return false;
    return true;
}

bool SpectralField::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
}

bool SpectralField::all_finite() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double SpectralField::max_abs() const
{
    double m = 0.0;
    for (auto c : coeffs_)
        m = std::max(m, std::abs(c));
    return m;
}

double SpectralField::l2_norm2() const
{
    double s = 0.0;
    for (auto c : coeffs_)
        s += std::norm(c);
    return s;
}

double SpectralField::evaluate(double x1, double x2) const
{
    cplx sum{};
    for (int m1 = -cutoff_; m1 <= cutoff_; ++m1)
        for (int m2 = -cutoff_; m2 <= cutoff_; ++m2) {
            const cplx c = at(m1, m2);
            if (c == cplx{})
                continue;
            const double phase = 2.0 * std::numbers::pi * (m1 * x1 + m2 * x2);
            sum += c * cplx(std::cos(phase), std::sin(phase));
        }
    return sum.real();
}

SpectralField& SpectralField::operator+=(const SpectralField& other)
{
    if (other.cutoff_ != cutoff_)
        throw std::invalid_argument("SpectralField +=: cutoff mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other)
{
    if (other.cutoff_ != cutoff_)
        throw std::invalid_argument("SpectralField -=: cutoff mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double scale)
{
    for (auto& c : coeffs_)
        c *= scale;
    return *this;
}

SpectralField project(const SpectralField& f, int new_cutoff)
{
    if (new_cutoff < 0)
        throw std::invalid_argument("project: negative cutoff");
    SpectralField out(new_cutoff);
    const int n = std::min(new_cutoff, f.cutoff());
    for (int m1 = -n; m1 <= n; ++m1)
        for (int m2 = -n; m2 <= n; ++m2)
            if (out.in_ball(m1, m2))
                out.at(m1, m2) = f.at(m1, m2);
    return out;
}

SpectralField semigroup(const SpectralField& f, double t)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("semigroup: t must be non-negative");
    SpectralField out = f;
    if (t == 0.0)
        return out;
    const int n = f.cutoff();
    for (int m1 = -n; m1 <= n; ++m1)
        for (int m2 = -n; m2 <= n; ++m2)
            out.at(m1, m2) *= std::exp(-t * mode_eigenvalue(m1 * m1 + m2 * m2));
    return out;
}

double integrated_semigroup_factor(double eigenvalue, double tau)
{
    if (!(tau > 0.0))
        throw std::invalid_argument("integrated_semigroup_factor: tau must be positive");
    const double x = tau * eigenvalue;
    if (x < 1e-4) {
        // (1 - e^{-x}) / x = 1 - x/2 + x^2/6 - x^3/24 + O(x^4)
        return tau * (1.0 - x / 2.0 * (1.0 - x / 3.0 * (1.0 - x / 4.0)));
    }
    return -std::expm1(-x) / eigenvalue;
}

int fast_grid_size(int lower_bound)
{
    for (int n = std::max(lower_bound, 1);; ++n) {
        int r = n;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return n;
    }
}

namespace {
std::atomic<int> grid_cap{8192};
}

int max_grid_size() { return grid_cap.load(); }
void set_max_grid_size(int g) { grid_cap.store(g); }

int dealias_grid(int degree, int n_in, int n_out)
{
    const int g = fast_grid_size(degree * n_in + n_out + 1);
    if (g > max_grid_size())
        throw CapacityError("dealiasing grid " + std::to_string(g) + " exceeds cap "
                            + std::to_string(max_grid_size()));
    return g;
}

PhysicalField to_physical(const SpectralField& f, int grid_size)
{
    if (grid_size < 2 * f.cutoff() + 1)
        throw std::invalid_argument("to_physical: grid " + std::to_string(grid_size)
                                    + " too small for cutoff " + std::to_string(f.cutoff()));
    if (grid_size > max_grid_size())
        throw CapacityError("to_physical: grid exceeds cap");
    auto& ws = detail::workspace(grid_size);
    detail::scatter_half(f, ws);
    detail::execute_c2r(ws);
    PhysicalField p(grid_size);
    std::copy(ws.real, ws.real + p.values.size(), p.values.begin());
    return p;
}

SpectralField to_spectral(const PhysicalField& p, int cutoff)
{
    if (cutoff < 0 || 2 * cutoff + 1 > p.grid_size)
        throw std::invalid_argument("to_spectral: cutoff " + std::to_string(cutoff)
                                    + " not representable on grid " + std::to_string(p.grid_size));
    auto& ws = detail::workspace(p.grid_size);
    std::copy(p.values.begin(), p.values.end(), ws.real);
    detail::execute_r2c(ws);
    return detail::gather_half(ws, cutoff);
}

SpectralField dealiased_power(const SpectralField& f, int k, int n_out)
{
    if (k < 1 || k > 3)
        throw std::invalid_argument("dealiased_power: k must be 1, 2 or 3");
    if (n_out < 0)
        throw std::invalid_argument("dealiased_power: negative output cutoff");
    if (k == 1)
        return project(f, n_out);
    const int g = dealias_grid(k, f.cutoff(), n_out);
    PhysicalField p = to_physical(f, g);
    for (double& v : p.values)
        v = k == 2 ? v * v : v * v * v;
    return to_spectral(p, n_out);
}

}  // namespace ac2d
