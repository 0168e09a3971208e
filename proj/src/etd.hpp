#ifndef CIRCLEWAVE_SRC_ETD_HPP
#define CIRCLEWAVE_SRC_ETD_HPP

#include "circlewave/errors.hpp"
#include "fft.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace circlewave::detail {

// Second-order exponential time differencing (ETD2RK) for
//   u_t = u_xx + N(t, u, u_x)
// with the heat factor exact per mode and N evaluated pointwise by a caller
// functor rhs(t, u[], ux[], out[]).  One instance carries the per-(n,dt)
// multiplier tables plus scratch, so steppers are cheap to advance and safe
// to use from one thread at a time.
class EtdStepper {
public:
    EtdStepper(int n, double dt, bool dealias, double blowup_threshold)
        : n_(n), dt_(dt), blowup_(blowup_threshold),
          dealias_cut_(dealias ? n / 3 : n / 2) {
        const int half = n_ / 2;
        decay_.resize(static_cast<std::size_t>(half + 1));
        phi1dt_.resize(static_cast<std::size_t>(half + 1));
        phi2dt_.resize(static_cast<std::size_t>(half + 1));
        for (int k = 0; k <= half; ++k) {
            const double z = -static_cast<double>(k) * k * dt_;
            decay_[static_cast<std::size_t>(k)] = std::exp(z);
            if (std::abs(z) < 1e-8) {
                phi1dt_[static_cast<std::size_t>(k)] = dt_ * (1.0 + z / 2.0 + z * z / 6.0);
                phi2dt_[static_cast<std::size_t>(k)] = dt_ * (0.5 + z / 6.0 + z * z / 24.0);
            } else {
                phi1dt_[static_cast<std::size_t>(k)] = dt_ * std::expm1(z) / z;
                phi2dt_[static_cast<std::size_t>(k)] = dt_ * (std::expm1(z) - z) / (z * z);
            }
        }
        uhat_.resize(static_cast<std::size_t>(half + 1));
        ahat_.resize(static_cast<std::size_t>(half + 1));
        nhat_.resize(static_cast<std::size_t>(half + 1));
        nahat_.resize(static_cast<std::size_t>(half + 1));
        dhat_.resize(static_cast<std::size_t>(half + 1));
        u_.resize(static_cast<std::size_t>(n_));
        ux_.resize(static_cast<std::size_t>(n_));
        nl_.resize(static_cast<std::size_t>(n_));
    }

    void set_state(const std::vector<double>& u) {
        forward_fft(u, uhat_);
        physical_current_ = false;
    }

    int size() const { return n_; }
    double dt() const { return dt_; }

    // Physical-space state; refreshed lazily after steps.
    const std::vector<double>& state() {
        if (!physical_current_) {
            backward_fft(uhat_, u_);
            physical_current_ = true;
        }
        return u_;
    }

    // Blow-up / NaN check of the current state (stepping checks the stage-1
    // state, which misses the final step's output).
    void ensure_valid(double t) { check_state(state(), t); }

    // Advance one step from time t.  Throws BlowupError / NumericalError.
    template <typename Rhs>
    void step(double t, Rhs&& rhs) {
        const int half = n_ / 2;
        // stage 1 at t
        backward_fft(uhat_, u_);
        derivative_into(uhat_, ux_);
        check_state(u_, t);
        rhs(t, u_.data(), ux_.data(), nl_.data());
        forward_fft(nl_, nhat_);
        dealias(nhat_);
        for (int k = 0; k <= half; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            ahat_[ku] = decay_[ku] * uhat_[ku] + phi1dt_[ku] * nhat_[ku];
        }
        // stage 2 at t+dt
        backward_fft(ahat_, u_);
        derivative_into(ahat_, ux_);
        rhs(t + dt_, u_.data(), ux_.data(), nl_.data());
        forward_fft(nl_, nahat_);
        dealias(nahat_);
        for (int k = 0; k <= half; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            uhat_[ku] = ahat_[ku] + phi2dt_[ku] * (nahat_[ku] - nhat_[ku]);
        }
        physical_current_ = false;
    }

private:
    void derivative_into(const std::vector<std::complex<double>>& hat,
                         std::vector<double>& out) {
        const int half = n_ / 2;
        for (int k = 0; k < half; ++k)
            dhat_[static_cast<std::size_t>(k)] =
                std::complex<double>(0.0, k) * hat[static_cast<std::size_t>(k)];
        dhat_[static_cast<std::size_t>(half)] = 0.0;
        backward_fft(dhat_, out);
    }

    void dealias(std::vector<std::complex<double>>& hat) const {
        const int half = n_ / 2;
        for (int k = dealias_cut_ + 1; k <= half; ++k)
            hat[static_cast<std::size_t>(k)] = 0.0;
    }

    void check_state(const std::vector<double>& u, double t) const {
        double m = 0.0;
        for (double v : u) {
            if (std::isnan(v)) throw NumericalError("NaN detected at t = " + std::to_string(t));
            m = std::max(m, std::abs(v));
        }
        if (m > blowup_)
            throw BlowupError("max-norm " + std::to_string(m) +
                                  " exceeded blow-up threshold at t = " + std::to_string(t),
                              t);
    }

    int n_;
    double dt_;
    double blowup_;
    int dealias_cut_;
    bool physical_current_ = false;
    std::vector<double> decay_, phi1dt_, phi2dt_;
    std::vector<std::complex<double>> uhat_, ahat_, nhat_, nahat_, dhat_;
    std::vector<double> u_, ux_, nl_;
};

} // namespace circlewave::detail

#endif
