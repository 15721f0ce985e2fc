#include "ac2d/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ac2d/errors.hpp"

namespace ac2d {

std::vector<std::string> SchemeParams::validate() const
{
    if (N < 0)
        throw ConfigError("N >= 0", "spatial cutoff N must be non-negative");
    if (M < 1)
        throw ConfigError("M >= 1", "step count M must be at least 1");
    if (!(T > 0.0))
        throw ConfigError("T > 0", "horizon T must be positive");
    // a = 0 is the linear (drift-free) equation and is accepted for closed-loop checks.
    const bool drift_free = a == Polynomial{0.0, 0.0, 0.0, 0.0};
    if (!drift_free && !(a[3] < 0.0))
        throw ConfigError("a3 < 0", "leading coefficient must satisfy a3 < 0 (got " + std::to_string(a[3]) + ")");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("0 < alpha < 1", "alpha must lie in (0, 1)");
    if (!(beta > alpha))
        throw ConfigError("beta > alpha", "beta must exceed alpha");
    if (!(gamma >= 0.0))
        throw ConfigError("gamma >= 0", "time weight gamma must be non-negative");
    if (taming_oversample < 2)
        throw ConfigError("taming_oversample >= 2", "taming oversample must be at least 2");

    std::vector<std::string> warnings;
    if (drift_free)
        warnings.push_back("a = 0: drift-free run, X^{N,M} reduces to the linear part");
    if (alpha >= 1.0 / 3.0)
        warnings.push_back("alpha >= 1/3: outside the range covered by the convergence theory");
    if ((5.0 * alpha + beta) / 2.0 >= 1.0) {
        std::ostringstream os;
        os << "(5 alpha + beta)/2 = " << (5.0 * alpha + beta) / 2.0 << " >= 1: a priori bound regime violated";
        warnings.push_back(os.str());
    }
    if (gamma <= 1.0 - 3.0 * alpha) {
        std::ostringstream os;
        os << "gamma = " << gamma << " <= 1 - 3 alpha = " << 1.0 - 3.0 * alpha << ": weighted rate not covered";
        warnings.push_back(os.str());
    }
    return warnings;
}

int TimeGrid::floor_index(double s) const
{
    if (!(s >= 0.0 && s <= T))
        throw std::invalid_argument("floor_tau: s must lie in [0, T]");
    int k = static_cast<int>(std::floor(s / tau()));
    k = std::clamp(k, 0, M);
    // guard against s / tau rounding either way across a grid point
    while (k < M && time(k + 1) <= s)
        ++k;
    while (k > 0 && time(k) > s)
        --k;
    return k;
}

namespace {

int degree_of(const Polynomial& a)
{
    for (int j = 3; j >= 0; --j)
        if (a[j] != 0.0)
            return j;
    return -1;
}

}  // namespace

SpectralField psi(const SpectralField& y, const WickTriple& z, const Polynomial& a)
{
    const int n = y.cutoff();
    if (z.z1.cutoff() != n || z.z2.cutoff() != n || z.z3.cutoff() != n)
        throw std::invalid_argument("psi: y and the Wick triple must share a cutoff");
    const int deg = degree_of(a);
    if (deg < 0)
        return SpectralField(n);
    const int g = dealias_grid(std::max(deg, 1), n, n);
    const PhysicalField yp = to_physical(y, g);
    const PhysicalField w1 = to_physical(z.z1, g);
    const PhysicalField w2 = to_physical(z.z2, g);
    const PhysicalField w3 = to_physical(z.z3, g);
    PhysicalField out(g);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double yv = yp.values[i];
        const double zk[4] = {1.0, w1.values[i], w2.values[i], w3.values[i]};
        const double yk[4] = {1.0, yv, yv * yv, yv * yv * yv};
        static constexpr double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
        double acc = 0.0;
        for (int j = 0; j <= deg; ++j) {
            if (a[j] == 0.0)
                continue;
            double inner = 0.0;
            for (int k = 0; k <= j; ++k)
                inner += binom[j][k] * yk[k] * zk[j - k];
            acc += a[j] * inner;
        }
        out.values[i] = acc;
    }
    return to_spectral(out, n);
}

SpectralField psi_fused(const SpectralField& y, const SpectralField& zbar, const RenormConstant& r,
                        const Polynomial& a)
{
    const int n = y.cutoff();
    if (zbar.cutoff() != n)
        throw std::invalid_argument("psi_fused: y and zbar must share a cutoff");
    const int deg = degree_of(a);
    if (deg < 0)
        return SpectralField(n);
    SpectralField u = y + zbar;
    if (deg <= 1) {
        SpectralField out = u * a[1];
        out.at(0, 0) += a[0];
        return out;
    }
    const double R = r.value;
    const int g = dealias_grid(deg, n, n);
    PhysicalField p = to_physical(u, g);
    for (double& v : p.values) {
        const double v2 = v * v;
        v = a[0] + a[1] * v + a[2] * (v2 - R) + a[3] * (v2 * v - 3.0 * R * v);
    }
    return to_spectral(p, n);
}

StepOperator::StepOperator(int cutoff, double tau) : cutoff_(cutoff), tau_(tau)
{
    const int w = 2 * cutoff + 1;
    decay_.assign(static_cast<std::size_t>(w) * w, 0.0);
    factor_.assign(static_cast<std::size_t>(w) * w, 0.0);
    for (int m1 = -cutoff; m1 <= cutoff; ++m1)
        for (int m2 = -cutoff; m2 <= cutoff; ++m2) {
            const int r2 = m1 * m1 + m2 * m2;
            if (r2 > cutoff * cutoff)
                continue;
            const std::size_t i = static_cast<std::size_t>(m1 + cutoff) * w + (m2 + cutoff);
            const double lam = mode_eigenvalue(r2);
            decay_[i] = std::exp(-tau * lam);
            factor_[i] = integrated_semigroup_factor(lam, tau);
        }
}

SpectralField tamed_step(const SpectralField& y, const SpectralField& drift, const StepOperator& op, double alpha,
                         DyadicPartition part, int oversample, StepDiagnostics* diag)
{
    if (y.cutoff() != op.cutoff() || drift.cutoff() != op.cutoff())
        throw std::invalid_argument("tamed_step: cutoff mismatch");
    if (!drift.all_finite())
        throw NumericalAbort("tamed_step: non-finite drift");
    StepDiagnostics d;
    // grid max only: the divisor is evaluated every step
    d.psi_norm = drift.is_zero() ? 0.0 : besov_norm(drift, -alpha, part, oversample, false).value;
    d.divisor = 1.0 + op.tau() * d.psi_norm;
    if (!std::isfinite(d.divisor))
        throw NumericalAbort("tamed_step: non-finite taming divisor");

    SpectralField out(y.cutoff());
    auto src = y.coeffs();
    auto drv = drift.coeffs();
    auto dst = out.coeffs();
    const double inv = 1.0 / d.divisor;
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = op.decay()[i] * src[i] + (op.factor()[i] * inv) * drv[i];
    if (diag)
        *diag = d;
    return out;
}

SpectralField tamed_step(const SpectralField& y, const WickTriple& z, const SchemeParams& params,
                         StepDiagnostics* diag)
{
    const StepOperator op(y.cutoff(), params.tau());
    return tamed_step(y, psi(y, z, params.a), op, params.alpha, params.partition, params.taming_oversample, diag);
}

SchemeRunner::SchemeRunner(const SchemeParams& params, RenormConstant renorm)
    : params_(params),
      renorm_(renorm),
      op_(params.N, params.tau()),
      y_(params.N),
      drift_free_(degree_of(params.a) < 0)
{
    if (renorm_.cutoff != params.N)
        throw std::invalid_argument("SchemeRunner: renormalization cutoff must equal N");
}

StepDiagnostics SchemeRunner::advance(const SpectralField& zbar_k)
{
    if (k_ >= params_.M)
        throw std::out_of_range("SchemeRunner: already at the final time");
    StepDiagnostics d;
    if (k_ >= 1) {
        if (drift_free_) {
            y_ = tamed_step(y_, SpectralField(params_.N), op_, params_.alpha, params_.partition,
                            params_.taming_oversample, &d);
        } else {
            const SpectralField drift = psi_fused(y_, zbar_k, renorm_, params_.a);
            y_ = tamed_step(y_, drift, op_, params_.alpha, params_.partition, params_.taming_oversample, &d);
        }
    }
    ++k_;
    return d;
}

SpectralField linear_part(const NoisePath& path, int k, const InitialCondition& x0, int cutoff)
{
    return x0.evolved(path.time(k), cutoff) + path.zero_initial_value(k, cutoff);
}

TrajectoryRecord run(const SchemeParams& params, const NoisePath& path)
{
    if (path.cutoff() < params.N)
        throw std::invalid_argument("run: noise path cutoff below N");
    if (path.steps() % params.M != 0)
        throw std::invalid_argument("run: path step count must be divisible by M");
    if (std::abs(path.horizon() - params.T) > 1e-12 * params.T)
        throw std::invalid_argument("run: path horizon differs from T");
    const int stride = path.steps() / params.M;

    TrajectoryRecord rec;
    SchemeRunner runner(params, renorm_constant(params.N));
    for (int k = 0; k <= params.M; ++k) {
        SpectralField zbar = linear_part(path, k * stride, params.x0, params.N);
        rec.times.push_back(path.time(k * stride));
        rec.y.push_back(runner.y());
        rec.x.push_back(runner.y() + zbar);
        if (k < params.M) {
            try {
                rec.diagnostics.push_back(runner.advance(zbar));
            } catch (const NumericalAbort& e) {
                throw NumericalAbort(std::string(e.what()) + " at step " + std::to_string(k));
            }
        }
        rec.zbar.push_back(std::move(zbar));
    }
    return rec;
}

}  // namespace ac2d
