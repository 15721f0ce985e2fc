#include "ac2d/wick.hpp"

#include <cmath>
#include <stdexcept>

namespace ac2d {

namespace {

// Pairwise (cascade) summation keeps the rounding error O(log n) ulps.
double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace

RenormConstant renorm_constant(int cutoff)
{
    if (cutoff < 0)
        throw std::invalid_argument("renorm_constant: negative cutoff");
    // Every nonzero mode is one of four rotations of a mode with m1 >= 1,
    // m2 >= 0, so sum that quadrant and weight it by 4.
    std::vector<double> terms;
    const long r2 = static_cast<long>(cutoff) * cutoff;
    for (long m1 = 1; m1 <= cutoff; ++m1)
        for (long m2 = 0; m1 * m1 + m2 * m2 <= r2; ++m2)
            terms.push_back(0.5 / mode_eigenvalue(static_cast<int>(m1 * m1 + m2 * m2)));
    const double quadrant = pairwise_sum(terms.data(), terms.size());
    return {cutoff, 0.5 + 4.0 * quadrant};
}

std::pair<SpectralField, SpectralField> wick_powers_pointwise(const SpectralField& f, const RenormConstant& r,
                                                              int n_out)
{
    if (r.cutoff != f.cutoff())
        throw std::invalid_argument("wick_powers_pointwise: renormalization cutoff differs from field cutoff");
    if (n_out < 0)
        n_out = f.cutoff();
    const int g = dealias_grid(3, f.cutoff(), n_out);
    PhysicalField p = to_physical(f, g);
    PhysicalField sq(g), cube(g);
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const double v = p.values[i];
        sq.values[i] = v * v - r.value;
        cube.values[i] = v * v * v - 3.0 * r.value * v;
    }
    return {to_spectral(sq, n_out), to_spectral(cube, n_out)};
}

InitialCondition InitialCondition::zero() { return {Kind::zero, SpectralField(0)}; }

InitialCondition InitialCondition::from_field(SpectralField field)
{
    if (!field.is_hermitian() || !field.ball_supported())
        throw std::invalid_argument("InitialCondition: mode list must be Hermitian and inside its ball");
    return {Kind::modes, std::move(field)};
}

InitialCondition InitialCondition::rough(double alpha_prime, int cutoff, std::uint64_t seed)
{
    ModeTable modes(cutoff);
    const PhiloxKey key = derived_key(seed, 1);
    std::vector<cplx> values(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double var = std::pow(1.0 + modes.norm2(i), -(1.0 - alpha_prime));
        const auto [g0, g1] = gaussian_pair(
            {static_cast<std::uint32_t>(modes.m1()[i]), static_cast<std::uint32_t>(modes.m2()[i]), 0, 0xFFFFFFFFu},
            key);
        if (modes.norm2(i) == 0)
            values[i] = {std::sqrt(var) * g0, 0.0};
        else
            values[i] = std::sqrt(var / 2.0) * cplx(g0, g1);
    }
    return {Kind::rough, modes.to_field(values, cutoff)};
}

SpectralField InitialCondition::evolved(double t, int n_out) const
{
    if (kind_ == Kind::zero)
        return SpectralField(n_out);
    return semigroup(project(field_, n_out), t);
}

WickTriple wick_triple(const SpectralField& zbar, const RenormConstant& r, double time)
{
    auto [z2, z3] = wick_powers_pointwise(zbar, r);
    return {time, zbar, std::move(z2), std::move(z3)};
}

WickTriple zero_initial_wick(const NoisePath& path, int k, const RenormConstant& r)
{
    if (r.cutoff > path.cutoff())
        throw std::invalid_argument("zero_initial_wick: path cutoff below renormalization cutoff");
    return wick_triple(path.zero_initial_value(k, r.cutoff), r, path.time(k));
}

WickTriple wick_with_initial(const NoisePath& path, int k, const RenormConstant& r, const InitialCondition& x0)
{
    if (r.cutoff > path.cutoff())
        throw std::invalid_argument("wick_with_initial: path cutoff below renormalization cutoff");
    if (k == 0 && x0.is_rough())
        throw std::domain_error("wick_with_initial: Wick powers of rough initial data are undefined at t = 0");
    const double t = path.time(k);
    SpectralField zbar = x0.evolved(t, r.cutoff) + path.zero_initial_value(k, r.cutoff);
    return wick_triple(zbar, r, t);
}

}  // namespace ac2d
