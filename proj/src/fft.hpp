#ifndef CIRCLEWAVE_SRC_FFT_HPP
#define CIRCLEWAVE_SRC_FFT_HPP

#include <complex>
#include <span>

namespace circlewave::detail {

// Thin thread-safe wrapper around FFTW r2c/c2r transforms.  Plans are cached
// per thread and per size; the FFTW planner itself is serialized behind a
// global mutex.  Buffers are owned by the cache entry, so callers pass plain
// spans and the wrapper copies through aligned storage.

// out has size n/2+1, unnormalized forward transform.
void forward_fft(std::span<const double> in, std::span<std::complex<double>> out);

// in has size n/2+1; output is normalized by 1/n so that
// backward_fft(forward_fft(u)) == u.
void backward_fft(std::span<const std::complex<double>> in, std::span<double> out);

} // namespace circlewave::detail

#endif
