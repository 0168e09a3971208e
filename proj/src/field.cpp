#include "circlewave/field.hpp"

#include "circlewave/errors.hpp"
#include "fft.hpp"

#include <cmath>
#include <numbers>

namespace circlewave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_same_size(const GridField& u, const GridField& v) {
    if (u.size() != v.size())
        throw FieldError("grid size mismatch: " + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()));
}

} // namespace

GridField::GridField(std::vector<double> values) : values_(std::move(values)) {
    const int n = static_cast<int>(values_.size());
    if (n < 16 || !power_of_two(n))
        throw FieldError("grid size must be a power of two >= 16, got " +
                         std::to_string(n));
    for (double v : values_)
        if (!std::isfinite(v)) throw FieldError("non-finite value in grid field");
}

GridField GridField::zeros(int n) { return GridField(std::vector<double>(static_cast<std::size_t>(n), 0.0)); }

GridField GridField::constant(int n, double c) {
    return GridField(std::vector<double>(static_cast<std::size_t>(n), c));
}

GridField GridField::from_function(int n, const std::function<double(double)>& f) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = f(two_pi * j / n);
    return GridField(std::move(v));
}

double GridField::node(int j) const { return two_pi * j / size(); }

Spectrum analyze(const GridField& u) {
    Spectrum s;
    s.n = u.size();
    s.c.resize(static_cast<std::size_t>(s.n / 2 + 1));
    detail::forward_fft(u.values(), s.c);
    return s;
}

GridField synthesize(const Spectrum& s) {
    std::vector<double> out(static_cast<std::size_t>(s.n));
    detail::backward_fft(s.c, out);
    return GridField(std::move(out));
}

GridField spectral_derivative(const GridField& u, int order) {
    if (order != 1 && order != 2)
        throw FieldError("derivative order must be 1 or 2");
    Spectrum s = analyze(u);
    const int half = s.n / 2;
    if (order == 1) {
        for (int k = 0; k <= half; ++k)
            s.c[static_cast<std::size_t>(k)] *= std::complex<double>(0.0, k);
        s.c[static_cast<std::size_t>(half)] = 0.0; // Nyquist zeroed for odd orders
    } else {
        for (int k = 0; k <= half; ++k)
            s.c[static_cast<std::size_t>(k)] *= -static_cast<double>(k) * k;
    }
    return synthesize(s);
}

GridField shift(const GridField& u, double a) {
    double r = std::fmod(a, two_pi);
    if (r < 0) r += two_pi;
    if (r == 0.0) return u;
    Spectrum s = analyze(u);
    const int half = s.n / 2;
    for (int k = 0; k < half; ++k)
        s.c[static_cast<std::size_t>(k)] *=
            std::complex<double>(std::cos(k * r), std::sin(k * r));
    // Nyquist: the real interpolant carries cos((N/2)x); shifting maps it to
    // cos((N/2)(x+a)) whose sin part is unrepresentable, keep the cos part.
    s.c[static_cast<std::size_t>(half)] *= std::cos(half * r);
    return synthesize(s);
}

double distance(const GridField& u, const GridField& v) {
    check_same_size(u, v);
    double acc = 0.0;
    for (int j = 0; j < u.size(); ++j) {
        const double d = u[j] - v[j];
        acc += d * d;
    }
    return std::sqrt(acc * two_pi / u.size());
}

double c1_distance(const GridField& u, const GridField& v) {
    return distance(u, v) +
           distance(spectral_derivative(u, 1), spectral_derivative(v, 1));
}

double l2_norm(const GridField& u) {
    double acc = 0.0;
    for (int j = 0; j < u.size(); ++j) acc += u[j] * u[j];
    return std::sqrt(acc * two_pi / u.size());
}

double max_norm(const GridField& u) {
    double m = 0.0;
    for (int j = 0; j < u.size(); ++j) m = std::max(m, std::abs(u[j]));
    return m;
}

double mean(const GridField& u) {
    double acc = 0.0;
    for (int j = 0; j < u.size(); ++j) acc += u[j];
    return acc / u.size();
}

double spatial_variance(const GridField& u) {
    const double m = mean(u);
    double acc = 0.0;
    for (int j = 0; j < u.size(); ++j) {
        const double d = u[j] - m;
        acc += d * d;
    }
    return acc / u.size();
}

double evaluate_at(const GridField& u, double x) { return TrigInterpolant(u)(x); }

GridField operator+(const GridField& u, const GridField& v) {
    check_same_size(u, v);
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (int j = 0; j < u.size(); ++j) w[static_cast<std::size_t>(j)] = u[j] + v[j];
    return GridField(std::move(w));
}

GridField operator-(const GridField& u, const GridField& v) {
    check_same_size(u, v);
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (int j = 0; j < u.size(); ++j) w[static_cast<std::size_t>(j)] = u[j] - v[j];
    return GridField(std::move(w));
}

GridField operator*(double s, const GridField& u) {
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (int j = 0; j < u.size(); ++j) w[static_cast<std::size_t>(j)] = s * u[j];
    return GridField(std::move(w));
}

TrigInterpolant::TrigInterpolant(const GridField& u) : n_(u.size()) {
    const Spectrum s = analyze(u);
    const int half = n_ / 2;
    cos_coef_.resize(static_cast<std::size_t>(half + 1));
    sin_coef_.resize(static_cast<std::size_t>(half + 1));
    const double inv_n = 1.0 / n_;
    cos_coef_[0] = s.c[0].real() * inv_n;
    sin_coef_[0] = 0.0;
    for (int k = 1; k < half; ++k) {
        cos_coef_[static_cast<std::size_t>(k)] = 2.0 * s.c[static_cast<std::size_t>(k)].real() * inv_n;
        sin_coef_[static_cast<std::size_t>(k)] = -2.0 * s.c[static_cast<std::size_t>(k)].imag() * inv_n;
    }
    cos_coef_[static_cast<std::size_t>(half)] = s.c[static_cast<std::size_t>(half)].real() * inv_n;
    sin_coef_[static_cast<std::size_t>(half)] = 0.0;
}

double TrigInterpolant::operator()(double x) const {
    const int half = n_ / 2;
    double acc = cos_coef_[0];
    for (int k = 1; k <= half; ++k)
        acc += cos_coef_[static_cast<std::size_t>(k)] * std::cos(k * x) +
               sin_coef_[static_cast<std::size_t>(k)] * std::sin(k * x);
    return acc;
}

double TrigInterpolant::derivative(double x) const {
    const int half = n_ / 2;
    double acc = 0.0;
    // Nyquist omitted, matching the odd-order derivative convention.
    for (int k = 1; k < half; ++k)
        acc += k * (sin_coef_[static_cast<std::size_t>(k)] * std::cos(k * x) -
                    cos_coef_[static_cast<std::size_t>(k)] * std::sin(k * x));
    return acc;
}

} // namespace circlewave
