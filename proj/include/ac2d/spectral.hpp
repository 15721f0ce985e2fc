#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace ac2d {

using cplx = std::complex<double>;

/// Fourier wavenumber on the 2D torus.
struct ModeIndex {
    int m1 = 0;
    int m2 = 0;

    constexpr int norm2() const { return m1 * m1 + m2 * m2; }
    /// I_m = 1 + 4 pi^2 |m|^2, the eigenvalue of I - Laplacian on e_m.
    double eigenvalue() const;

    friend constexpr bool operator==(ModeIndex, ModeIndex) = default;
};

inline double mode_eigenvalue(int norm2)
{
    return 1.0 + 4.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(norm2);
}

inline double ModeIndex::eigenvalue() const { return mode_eigenvalue(norm2()); }

/// Fourier coefficients of a real field on T^2, band-limited to the
/// Euclidean ball |m| <= cutoff.
///
/// Coefficients are stored densely on the square [-N, N]^2 (row index m1,
/// column index m2); entries outside the ball are kept at zero. Every
/// operation in this library preserves Hermitian symmetry
/// coeff(-m) = conj(coeff(m)).
class SpectralField {
public:
    SpectralField() : SpectralField(0) {}
    explicit SpectralField(int cutoff);

    static SpectralField constant(double value, int cutoff = 0);

    int cutoff() const { return cutoff_; }
    int width() const { return 2 * cutoff_ + 1; }

    bool in_ball(int m1, int m2) const { return m1 * m1 + m2 * m2 <= cutoff_ * cutoff_; }

    /// Unchecked access; requires |m1|, |m2| <= cutoff.
    cplx& at(int m1, int m2) { return coeffs_[index(m1, m2)]; }
    const cplx& at(int m1, int m2) const { return coeffs_[index(m1, m2)]; }

    /// Zero for modes outside the stored square.
    cplx coefficient(int m1, int m2) const;

    /// Sets coeff(m) and coeff(-m) so that the pair stays Hermitian.
    void set_pair(int m1, int m2, cplx value);

    std::span<cplx> coeffs() { return coeffs_; }
    std::span<const cplx> coeffs() const { return coeffs_; }

    bool is_hermitian(double tol = 0.0) const;
    bool ball_supported() const;
    bool is_zero() const;
    bool all_finite() const;
    double max_abs() const;
    /// Sum of |coeff|^2, i.e. the mean square of the physical field.
    double l2_norm2() const;
    /// Field value at x = (x1, x2), summed directly over the modes.
    double evaluate(double x1, double x2) const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double scale);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    friend bool operator==(const SpectralField&, const SpectralField&) = default;

private:
    std::size_t index(int m1, int m2) const
    {
        return static_cast<std::size_t>(m1 + cutoff_) * static_cast<std::size_t>(width())
            + static_cast<std::size_t>(m2 + cutoff_);
    }

    int cutoff_;
    std::vector<cplx> coeffs_;
};

/// Real samples on the uniform G x G grid x = (i/G, j/G), row-major in i.
struct PhysicalField {
    int grid_size = 0;
    std::vector<double> values;

    PhysicalField() = default;
    explicit PhysicalField(int g)
        : grid_size(g), values(static_cast<std::size_t>(g) * static_cast<std::size_t>(g), 0.0)
    {
    }

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * grid_size + j]; }
    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * grid_size + j]; }
};

/// P_N: keeps the modes with |m| <= new_cutoff. Larger cutoffs zero-pad.
SpectralField project(const SpectralField& f, int new_cutoff);

/// S_t = e^{t(Delta - I)}: multiplies coeff(m) by exp(-t I_m). Throws on t < 0.
SpectralField semigroup(const SpectralField& f, double t);

/// (1 - exp(-tau I)) / I, the exact integral of exp(-s I) over [0, tau].
double integrated_semigroup_factor(double eigenvalue, double tau);
inline double integrated_semigroup_factor(ModeIndex m, double tau)
{
    return integrated_semigroup_factor(m.eigenvalue(), tau);
}

/// Smallest n >= lower_bound of the form 2^a 3^b 5^c 7^d.
int fast_grid_size(int lower_bound);

/// Upper bound on grid points per axis accepted by the FFT-backed operations.
int max_grid_size();
void set_max_grid_size(int g);

/// Grid needed to evaluate a degree-k product of cutoff-n_in fields and
/// recover the modes up to n_out without aliasing: G >= k*n_in + n_out + 1.
int dealias_grid(int degree, int n_in, int n_out);

PhysicalField to_physical(const SpectralField& f, int grid_size);
SpectralField to_spectral(const PhysicalField& p, int cutoff);

/// P_{n_out}(f^k), evaluated exactly on an enlarged collocation grid.
SpectralField dealiased_power(const SpectralField& f, int k, int n_out);

}  // namespace ac2d
