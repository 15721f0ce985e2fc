#pragma once

// Space-time full discretization of the renormalized Allen-Cahn equation
//   dX = (Delta - I) X dt + :F(X): dt + dW,  F(v) = a0 + a1 v + a2 v^2 + a3 v^3,
// via the splitting X = Y + Zbar. Zbar^N is sampled exactly; Y^{N,M} follows
// the tamed exponential Euler recursion
//   Y_{k+1} = S_tau Y_k + int_0^tau S_r dr P_N Psi_k / (1 + tau ||Psi_k||_{-alpha}),
//   Psi_k = Psi(Y_k, Zbar_k),
// with Y = 0 on [0, tau].

#include <array>
#include <string>
#include <vector>

#include "ac2d/besov.hpp"
#include "ac2d/noise.hpp"
#include "ac2d/rng.hpp"
#include "ac2d/spectral.hpp"
#include "ac2d/wick.hpp"

namespace ac2d {

/// Coefficients a0..a3 of F(v) = sum_j a_j v^j.
using Polynomial = std::array<double, 4>;

struct SchemeParams {
    int N = 16;
    int M = 64;
    double T = 1.0;
    double alpha = 0.3;
    double beta = 0.31;
    double gamma = 0.65;
    Polynomial a{0.0, 0.0, 0.0, -1.0};
    InitialCondition x0 = InitialCondition::zero();
    SeedSpec seed{};
    /// Partition and grid oversampling for the -alpha norm in the taming divisor.
    DyadicPartition partition{};
    int taming_oversample = 2;

    double tau() const { return T / M; }

    /// Throws ConfigError on hard violations (a3 < 0, alpha in (0, 1),
    /// beta > alpha, positive sizes). Returns warnings for parameter regimes
    /// outside the convergence theory.
    std::vector<std::string> validate() const;
};

struct TimeGrid {
    double T = 1.0;
    int M = 1;

    double tau() const { return T / M; }
    double time(int k) const { return k * tau(); }
    /// Index k with t_k <= s < t_{k+1}; M for s = T.
    int floor_index(double s) const;
    /// Largest grid time t_k <= s, for s in [0, T].
    double floor_tau(double s) const { return time(floor_index(s)); }
};

/// Psi(y, z) = sum_j a_j sum_k C(j, k) y^k z^{:j-k:} with z^{:0:} = 1, all
/// products dealiased and projected to the common cutoff.
SpectralField psi(const SpectralField& y, const WickTriple& z, const Polynomial& a);

/// Psi(y, Zbar) for the exact (unprojected) Wick powers of Zbar, which by
/// the binomial identity equals P_N :F:(y + Zbar) with
/// :u^2: = u^2 - R and :u^3: = u^3 - 3 R u. One dealiased transform pair.
SpectralField psi_fused(const SpectralField& y, const SpectralField& zbar, const RenormConstant& r,
                        const Polynomial& a);

/// Per-mode multipliers exp(-tau I_m) and (1 - exp(-tau I_m)) / I_m.
class StepOperator {
public:
    StepOperator(int cutoff, double tau);
    int cutoff() const { return cutoff_; }
    double tau() const { return tau_; }
    std::span<const double> decay() const { return decay_; }
    std::span<const double> factor() const { return factor_; }

private:
    int cutoff_;
    double tau_;
    std::vector<double> decay_, factor_;
};

struct StepDiagnostics {
    double psi_norm = 0.0;  // ||Psi_k||_{-alpha}
    double divisor = 1.0;   // 1 + tau ||Psi_k||_{-alpha}
};

/// One tamed exponential Euler step from a precomputed drift.
/// Throws NumericalAbort if the drift is not finite.
SpectralField tamed_step(const SpectralField& y, const SpectralField& drift, const StepOperator& op, double alpha,
                         DyadicPartition part, int oversample, StepDiagnostics* diag = nullptr);

/// One step with drift psi(y, z).
SpectralField tamed_step(const SpectralField& y, const WickTriple& z, const SchemeParams& params,
                         StepDiagnostics* diag = nullptr);

/// Incremental driver for Y^{N,M}: the caller supplies Zbar^N at the current
/// grid time and the runner moves Y to the next grid time.
class SchemeRunner {
public:
    SchemeRunner(const SchemeParams& params, RenormConstant renorm);

    int index() const { return k_; }
    const SpectralField& y() const { return y_; }
    const SchemeParams& params() const { return params_; }

    /// Advances from t_k to t_{k+1} using Zbar^N_{t_k}. Y stays zero for k = 0.
    StepDiagnostics advance(const SpectralField& zbar_k);

private:
    SchemeParams params_;
    RenormConstant renorm_;
    StepOperator op_;
    SpectralField y_;
    int k_ = 0;
    bool drift_free_;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<SpectralField> y, zbar, x;
    /// diagnostics[k] describes the step t_k -> t_{k+1}; the step from t_0 is
    /// the dead interval and records psi_norm = 0, divisor = 1.
    std::vector<StepDiagnostics> diagnostics;
};

/// Zbar^N at grid index k of `path`: P_N S_t X_0 + P_N Z_t.
SpectralField linear_part(const NoisePath& path, int k, const InitialCondition& x0, int cutoff);

/// Full trajectory on the grid of params.M. The path must have cutoff >= N
/// and a step count divisible by M.
TrajectoryRecord run(const SchemeParams& params, const NoisePath& path);

}  // namespace ac2d
