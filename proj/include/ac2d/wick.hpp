#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ac2d/noise.hpp"
#include "ac2d/spectral.hpp"

namespace ac2d {

/// R^N = sum_{|m| <= N} 1/(2 I_m): the pointwise variance of the truncated
/// stationary field. Grows like log(N) / (2 pi).
struct RenormConstant {
    int cutoff = 0;
    double value = 0.0;
};

RenormConstant renorm_constant(int cutoff);

/// Renormalized powers (z, z^{:2:}, z^{:3:}) at one time, sharing a cutoff.
struct WickTriple {
    double time = 0.0;
    SpectralField z1, z2, z3;
};

/// (f^2 - R, f^3 - 3 R f), products evaluated without aliasing and
/// projected to n_out (default: the cutoff of f). n_out = 3 * cutoff keeps
/// every mode, i.e. gives the exact pointwise Wick powers.
std::pair<SpectralField, SpectralField> wick_powers_pointwise(const SpectralField& f, const RenormConstant& r,
                                                              int n_out = -1);

/// X_0, either a fixed finite mode list or one draw of a rough Gaussian field.
class InitialCondition {
public:
    enum class Kind { zero, modes, rough };

    static InitialCondition zero();
    /// Field must be Hermitian and supported in its ball.
    static InitialCondition from_field(SpectralField field);
    /// Independent modes with E|c_m|^2 = (1 + |m|^2)^{-(1 - alpha_prime)},
    /// truncated at `cutoff`, drawn from a stream keyed by `seed`. A concrete
    /// representative of C^{-alpha} data for alpha > alpha_prime.
    static InitialCondition rough(double alpha_prime, int cutoff, std::uint64_t seed);

    Kind kind() const { return kind_; }
    bool is_rough() const { return kind_ == Kind::rough; }
    const SpectralField& field() const { return field_; }

    /// P_N S_t X_0.
    SpectralField evolved(double t, int n_out) const;

private:
    InitialCondition(Kind kind, SpectralField field) : kind_(kind), field_(std::move(field)) {}
    Kind kind_;
    SpectralField field_;
};

/// Wick powers of the zero-initial field Z^N_t at grid index k of `path`,
/// in closed form (Z_t, Z_t^2 - R, Z_t^3 - 3 R Z_t), projected to R.cutoff.
WickTriple zero_initial_wick(const NoisePath& path, int k, const RenormConstant& r);

/// Wick powers of Zbar^N_t = P_N S_t X_0 + Z^N_t. Rejects t = 0 for rough X_0,
/// where the second and third powers are undefined.
WickTriple wick_with_initial(const NoisePath& path, int k, const RenormConstant& r, const InitialCondition& x0);

/// Closed-form triple of an already assembled linear part.
WickTriple wick_triple(const SpectralField& zbar, const RenormConstant& r, double time);

}  // namespace ac2d
