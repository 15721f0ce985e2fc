#include "ac2d/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ac2d/errors.hpp"
#include "ac2d/kernels.hpp"

namespace ac2d {

ModeTable::ModeTable(int cutoff) : cutoff_(cutoff)
{
    if (cutoff < 0)
        throw std::invalid_argument("ModeTable: negative cutoff");
    const int r2 = cutoff * cutoff;
    for (int m2 = 0; m2 <= cutoff; ++m2) {
        for (int m1 = -cutoff; m1 <= cutoff; ++m1) {
            if (m2 == 0 && m1 < 0)
                continue;
            if (m1 * m1 + m2 * m2 > r2)
                continue;
            m1_.push_back(m1);
            m2_.push_back(m2);
            eigen_.push_back(mode_eigenvalue(m1 * m1 + m2 * m2));
        }
    }
}

SpectralField ModeTable::to_field(std::span<const cplx> values, int n_out) const
{
    SpectralField f(n_out);
    const int r2 = n_out * n_out;
    for (std::size_t i = 0; i < size(); ++i)
        if (norm2(i) <= r2)
            f.set_pair(m1_[i], m2_[i], values[i]);
    return f;
}

void ou_advance(std::span<cplx> state, std::span<const double> eigenvalues, double tau,
                std::span<const cplx> increments)
{
    if (!(tau > 0.0))
        throw std::invalid_argument("ou_advance: tau must be positive");
    for (std::size_t i = 0; i < state.size(); ++i)
        state[i] = std::exp(-tau * eigenvalues[i]) * state[i] + increments[i];
}

namespace {

// Per-mode (re, im) standard deviations for a complex Gaussian of total
// variance v; the zero mode is real with variance v.
void split_scales(const ModeTable& modes, std::span<const double> variance, std::vector<double>& re,
                  std::vector<double>& im)
{
    re.resize(modes.size());
    im.resize(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes.norm2(i) == 0) {
            re[i] = std::sqrt(variance[i]);
            im[i] = 0.0;
        } else {
            re[i] = im[i] = std::sqrt(variance[i] / 2.0);
        }
    }
}

kernels::ModeDraws draws(const ModeTable& modes, const std::vector<double>& re, const std::vector<double>& im)
{
    return {modes.m1(), modes.m2(), re, im};
}

}  // namespace

std::vector<cplx> sample_stationary_initial(const ModeTable& modes, SeedSpec seed)
{
    std::vector<double> var(modes.size()), re, im;
    for (std::size_t i = 0; i < modes.size(); ++i)
        var[i] = 0.5 / modes.eigenvalues()[i];
    split_scales(modes, var, re, im);
    std::vector<cplx> out(modes.size());
    kernels::serial::ou_sample(draws(modes, re, im), out, seed.key(), seed.sample_index, 0);
    return out;
}

NoiseStream::NoiseStream(int cutoff, int base_steps, double horizon, SeedSpec seed, bool parallel)
    : modes_(cutoff), base_steps_(base_steps), horizon_(horizon), seed_(seed), parallel_(parallel)
{
    if (base_steps < 1)
        throw std::invalid_argument("NoiseStream: base_steps must be >= 1");
    if (!(horizon > 0.0))
        throw std::invalid_argument("NoiseStream: horizon must be positive");
    const double tau = horizon / base_steps;
    const auto n = modes_.size();
    decay_.resize(n);
    std::vector<double> inc_var(n), init_var(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = modes_.eigenvalues()[i];
        decay_[i] = std::exp(-tau * lam);
        inc_var[i] = -std::expm1(-2.0 * tau * lam) / (2.0 * lam);
        init_var[i] = 0.5 / lam;
    }
    split_scales(modes_, inc_var, inc_re_, inc_im_);

    std::vector<double> re, im;
    split_scales(modes_, init_var, re, im);
    initial_.resize(n);
    if (parallel_)
        kernels::omp::ou_sample(draws(modes_, re, im), initial_, seed_.key(), seed_.sample_index, 0);
    else
        kernels::serial::ou_sample(draws(modes_, re, im), initial_, seed_.key(), seed_.sample_index, 0);
    state_ = initial_;
}

void NoiseStream::advance()
{
    if (step_ >= base_steps_)
        throw std::out_of_range("NoiseStream::advance past the horizon");
    const auto word = static_cast<std::uint32_t>(step_ + 1);
    const auto d = draws(modes_, inc_re_, inc_im_);
    if (parallel_)
        kernels::omp::ou_advance(d, decay_, state_, seed_.key(), seed_.sample_index, word);
    else
        kernels::serial::ou_advance(d, decay_, state_, seed_.key(), seed_.sample_index, word);
    ++step_;
}

SpectralField NoiseStream::stationary_field(int n_out) const
{
    return modes_.to_field(state_, n_out);
}

namespace {

std::vector<cplx> zero_initial_values(const ModeTable& modes, std::span<const cplx> now,
                                      std::span<const cplx> initial, double t, int n_out)
{
    std::vector<cplx> v(modes.size());
    const int r2 = n_out * n_out;
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes.norm2(i) <= r2)
            v[i] = now[i] - std::exp(-t * modes.eigenvalues()[i]) * initial[i];
    return v;
}

}  // namespace

SpectralField NoiseStream::zero_initial_field(int n_out) const
{
    return modes_.to_field(zero_initial_values(modes_, state_, initial_, time(), n_out), n_out);
}

NoisePath::NoisePath(PathSpec spec, ModeTable modes, std::vector<cplx> values)
    : spec_(spec), modes_(std::move(modes)), values_(std::move(values))
{
}

NoisePath NoisePath::generate(const PathSpec& spec, SeedSpec seed, bool parallel)
{
    if (spec.steps < 1 || spec.base_steps % spec.steps != 0)
        throw std::invalid_argument("NoisePath: steps must divide base_steps");
    NoiseStream stream(spec.cutoff, spec.base_steps, spec.horizon, seed, parallel);
    const std::size_t n = stream.modes().size();
    const double bytes = static_cast<double>(spec.steps + 1) * n * sizeof(cplx);
    if (bytes > 4.0e9)
        throw CapacityError("NoisePath: " + std::to_string(bytes / 1e9)
                            + " GB exceeds the in-memory limit; use NoiseStream");
    std::vector<cplx> values;
    values.reserve((spec.steps + 1) * n);
    const int stride = spec.base_steps / spec.steps;
    auto keep = [&] {
        auto s = stream.state();
        values.insert(values.end(), s.begin(), s.end());
    };
    keep();
    for (int k = 1; k <= spec.steps; ++k) {
        for (int j = 0; j < stride; ++j)
            stream.advance();
        keep();
    }
    return NoisePath(spec, ModeTable(spec.cutoff), std::move(values));
}

NoisePath NoisePath::zeros(const PathSpec& spec)
{
    if (spec.steps < 1 || spec.base_steps % spec.steps != 0)
        throw std::invalid_argument("NoisePath: steps must divide base_steps");
    ModeTable modes(spec.cutoff);
    std::vector<cplx> values((spec.steps + 1) * modes.size());
    return NoisePath(spec, std::move(modes), std::move(values));
}

double NoisePath::time(int k) const
{
    return base_grid_time(static_cast<long>(k) * (spec_.base_steps / spec_.steps), spec_.base_steps,
                          spec_.horizon);
}

std::span<const cplx> NoisePath::slice(int k) const
{
    if (k < 0 || k > spec_.steps)
        throw std::out_of_range("NoisePath::slice: grid index out of range");
    const std::size_t n = modes_.size();
    return std::span<const cplx>(values_).subspan(static_cast<std::size_t>(k) * n, n);
}

SpectralField NoisePath::stationary(int k, int n_out) const
{
    if (n_out < 0)
        n_out = cutoff();
    return modes_.to_field(slice(k), n_out);
}

SpectralField NoisePath::zero_initial_value(int k, int n_out) const
{
    if (n_out < 0)
        n_out = cutoff();
    return modes_.to_field(zero_initial_values(modes_, slice(k), slice(0), time(k), n_out), n_out);
}

NoisePath restrict_modes(const NoisePath& path, int new_cutoff)
{
    if (new_cutoff < 0 || new_cutoff > path.cutoff())
        throw std::invalid_argument("restrict_modes: new cutoff must lie in [0, cutoff]");
    ModeTable modes(new_cutoff);
    const auto& src = path.modes();
    const int r2 = new_cutoff * new_cutoff;
    std::vector<cplx> values;
    values.reserve((path.steps() + 1) * modes.size());
    for (int k = 0; k <= path.steps(); ++k) {
        auto s = path.slice(k);
        for (std::size_t i = 0; i < src.size(); ++i)
            if (src.norm2(i) <= r2)
                values.push_back(s[i]);
    }
    PathSpec spec = path.spec();
    spec.cutoff = new_cutoff;
    return NoisePath(spec, std::move(modes), std::move(values));
}

NoisePath subsample_times(const NoisePath& path, int new_steps)
{
    if (new_steps < 1 || path.steps() % new_steps != 0)
        throw std::invalid_argument("subsample_times: new step count must divide " + std::to_string(path.steps()));
    const int stride = path.steps() / new_steps;
    std::vector<cplx> values;
    values.reserve((new_steps + 1) * path.modes().size());
    for (int k = 0; k <= new_steps; ++k) {
        auto s = path.slice(k * stride);
        values.insert(values.end(), s.begin(), s.end());
    }
    PathSpec spec = path.spec();
    spec.steps = new_steps;
    return NoisePath(spec, path.modes(), std::move(values));
}

}  // namespace ac2d
