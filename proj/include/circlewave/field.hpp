#ifndef CIRCLEWAVE_FIELD_HPP
#define CIRCLEWAVE_FIELD_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace circlewave {

/// Real-valued profile on the N equispaced nodes x_j = 2*pi*j/N of the
/// circle.  N must be a power of two >= 16 and all values finite; both are
/// enforced at construction.  Value-semantic and immutable in spirit: all
/// operations return new fields.
class GridField {
public:
    explicit GridField(std::vector<double> values);

    static GridField zeros(int n);
    static GridField constant(int n, double c);
    static GridField from_function(int n, const std::function<double(double)>& f);

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& raw() const { return values_; }

    /// Node coordinate x_j.
    double node(int j) const;

private:
    std::vector<double> values_;
};

/// Half-complex Fourier coefficients of a GridField (unnormalized FFTW
/// convention, size N/2+1).  Mostly an implementation vehicle for the
/// operations below, but exposed for the linear-algebra modules.
struct Spectrum {
    std::vector<std::complex<double>> c; // c[k], k = 0..N/2
    int n = 0;                           // grid size
};

Spectrum analyze(const GridField& u);
GridField synthesize(const Spectrum& s);

/// Fourier-multiplier derivative, order 1 or 2.  The Nyquist mode is zeroed
/// for odd orders.
GridField spectral_derivative(const GridField& u, int order);

/// The circle action: (shift(u,a))(x) = u(x + a).  Exact for band-limited
/// data; a need not be a grid multiple.  shift(u, 0) returns u unchanged.
GridField shift(const GridField& u, double a);

/// Discrete L2 norm of u - v: sqrt((2*pi/N) sum (u_j - v_j)^2).
double distance(const GridField& u, const GridField& v);

/// ||u - v||_2 + ||u_x - v_x||_2, the classification metric.
double c1_distance(const GridField& u, const GridField& v);

double l2_norm(const GridField& u);
double max_norm(const GridField& u);
double mean(const GridField& u);

/// Mean squared deviation from the spatial mean.
double spatial_variance(const GridField& u);

/// Spectral (trigonometric) interpolation at one point.  For repeated
/// evaluation construct a TrigInterpolant instead.
double evaluate_at(const GridField& u, double x);

GridField operator+(const GridField& u, const GridField& v);
GridField operator-(const GridField& u, const GridField& v);
GridField operator*(double s, const GridField& u);

/// Trigonometric interpolant of a grid field; evaluation is O(N) per point
/// with no further transforms.
class TrigInterpolant {
public:
    explicit TrigInterpolant(const GridField& u);

    double operator()(double x) const;
    double derivative(double x) const;
    int grid_size() const { return n_; }

private:
    int n_;
    // a[k], b[k] so that u(x) = a0 + sum_k (a_k cos kx + b_k sin kx)
    //                        + a_{N/2} cos((N/2) x)
    std::vector<double> cos_coef_;
    std::vector<double> sin_coef_;
};

} // namespace circlewave

#endif
