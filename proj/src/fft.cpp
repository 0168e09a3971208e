#include "fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <cstring>
#include <map>
#include <mutex>

namespace circlewave::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanEntry {
    int n = 0;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit PlanEntry(int n_) : n(n_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        real = fftw_alloc_real(static_cast<std::size_t>(n));
        cplx = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
        fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
    }
    ~PlanEntry() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(cplx);
    }
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;
};

PlanEntry& entry_for(int n) {
    thread_local std::map<int, PlanEntry> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.try_emplace(n, n).first;
    return it->second;
}

} // namespace

void forward_fft(std::span<const double> in, std::span<std::complex<double>> out) {
    const int n = static_cast<int>(in.size());
    assert(out.size() == static_cast<std::size_t>(n / 2 + 1));
    PlanEntry& e = entry_for(n);
    std::memcpy(e.real, in.data(), sizeof(double) * in.size());
    fftw_execute(e.fwd);
    // std::complex<double> is layout-compatible with fftw_complex
    std::memcpy(reinterpret_cast<double*>(out.data()), e.cplx,
                sizeof(fftw_complex) * out.size());
}

void backward_fft(std::span<const std::complex<double>> in, std::span<double> out) {
    const int n = static_cast<int>(out.size());
    assert(in.size() == static_cast<std::size_t>(n / 2 + 1));
    PlanEntry& e = entry_for(n);
    std::memcpy(e.cplx, reinterpret_cast<const double*>(in.data()),
                sizeof(fftw_complex) * in.size());
    fftw_execute(e.bwd);
    const double scale = 1.0 / n;
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = e.real[j] * scale;
}

} // namespace circlewave::detail
