#pragma once

// Exact-in-law sampling of the stationary stochastic convolution Z_{-inf,t}
// of dZ = (Delta - I) Z dt + dW on T^2. Each Fourier mode is an independent
// complex Ornstein-Uhlenbeck process with rate I_m and stationary variance
// 1/(2 I_m); modes m and -m are conjugate.
//
// Coupling: every path of a family is generated on a common base grid of
// `base_steps` steps over [0, horizon]. A path with fewer steps keeps every
// (base_steps / steps)-th slice, and a path with a smaller cutoff keeps the
// modes inside its ball, so coarse paths are bit-identical to restrictions
// of fine ones.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ac2d/rng.hpp"
#include "ac2d/spectral.hpp"

namespace ac2d {

/// Canonical half lattice {m = 0} u {m2 > 0} u {m2 = 0, m1 > 0} inside the
/// ball |m| <= cutoff, ordered by (m2, m1). The order of two modes does not
/// depend on the cutoff, so restriction is a stable filter.
class ModeTable {
public:
    explicit ModeTable(int cutoff);

    int cutoff() const { return cutoff_; }
    std::size_t size() const { return m1_.size(); }
    std::span<const int> m1() const { return m1_; }
    std::span<const int> m2() const { return m2_; }
    std::span<const double> eigenvalues() const { return eigen_; }
    int norm2(std::size_t i) const { return m1_[i] * m1_[i] + m2_[i] * m2_[i]; }

    /// Expands canonical values into a Hermitian SpectralField of cutoff
    /// n_out; modes with |m| > n_out are dropped.
    SpectralField to_field(std::span<const cplx> values, int n_out) const;

private:
    int cutoff_;
    std::vector<int> m1_, m2_;
    std::vector<double> eigen_;
};

/// Exact OU transition new = exp(-tau I) old + increment, per mode.
void ou_advance(std::span<cplx> state, std::span<const double> eigenvalues, double tau,
                std::span<const cplx> increments);

/// Centered complex Gaussians with E|v|^2 = 1/(2 I_m); mode 0 is real.
std::vector<cplx> sample_stationary_initial(const ModeTable& modes, SeedSpec seed);

/// Time of base-grid index k. Every component computes grid times this way.
inline double base_grid_time(long k, int base_steps, double horizon)
{
    return static_cast<double>(k) * (horizon / static_cast<double>(base_steps));
}

/// Streaming generator: holds one time slice and advances one base step at
/// a time, so memory stays O(modes) regardless of the number of steps.
class NoiseStream {
public:
    NoiseStream(int cutoff, int base_steps, double horizon, SeedSpec seed, bool parallel = true);

    int cutoff() const { return modes_.cutoff(); }
    int base_steps() const { return base_steps_; }
    double horizon() const { return horizon_; }
    long step() const { return step_; }
    double time() const { return base_grid_time(step_, base_steps_, horizon_); }
    const ModeTable& modes() const { return modes_; }

    std::span<const cplx> state() const { return state_; }
    std::span<const cplx> initial_state() const { return initial_; }

    void advance();

    /// Z_{-inf,t} at the current time, projected to n_out <= cutoff.
    SpectralField stationary_field(int n_out) const;
    /// Z_t = Z_{-inf,t} - S_t Z_{-inf,0}, the zero-initial solution.
    SpectralField zero_initial_field(int n_out) const;

private:
    ModeTable modes_;
    int base_steps_;
    double horizon_;
    SeedSpec seed_;
    bool parallel_;
    std::vector<double> decay_, inc_re_, inc_im_;
    std::vector<cplx> initial_, state_;
    long step_ = 0;
};

struct PathSpec {
    int cutoff = 0;
    int steps = 1;       // stored grid: times k * horizon / steps, k = 0..steps
    int base_steps = 1;  // coupling grid; must be a multiple of steps
    double horizon = 1.0;
};

/// A stored noise trajectory at the grid times of `steps`.
class NoisePath {
public:
    static NoisePath generate(const PathSpec& spec, SeedSpec seed, bool parallel = true);
    /// Deterministic all-zero path (for smoke tests of the scheme).
    static NoisePath zeros(const PathSpec& spec);

    int cutoff() const { return modes_.cutoff(); }
    int steps() const { return spec_.steps; }
    int base_steps() const { return spec_.base_steps; }
    double horizon() const { return spec_.horizon; }
    double tau() const { return spec_.horizon / spec_.steps; }
    double time(int k) const;
    const PathSpec& spec() const { return spec_; }
    const ModeTable& modes() const { return modes_; }

    /// Canonical-mode values at grid index k (k = 0 is Z_{-inf,0}).
    std::span<const cplx> slice(int k) const;
    /// All slices, contiguous: (steps + 1) x modes().size().
    std::span<const cplx> data() const { return values_; }

    /// Z_{-inf,t_k} as a field of cutoff n_out (default: the path cutoff).
    SpectralField stationary(int k, int n_out = -1) const;
    /// Z_{t_k} = Z_{-inf,t_k} - S_{t_k} Z_{-inf,0}.
    SpectralField zero_initial_value(int k, int n_out = -1) const;

private:
    friend NoisePath restrict_modes(const NoisePath& path, int new_cutoff);
    friend NoisePath subsample_times(const NoisePath& path, int new_steps);

    NoisePath(PathSpec spec, ModeTable modes, std::vector<cplx> values);

    PathSpec spec_;
    ModeTable modes_;
    std::vector<cplx> values_;
};

/// Keeps modes with |m| <= new_cutoff (new_cutoff <= cutoff).
NoisePath restrict_modes(const NoisePath& path, int new_cutoff);
/// Keeps the slices at times k * horizon / new_steps; new_steps must divide steps.
NoisePath subsample_times(const NoisePath& path, int new_steps);

}  // namespace ac2d
