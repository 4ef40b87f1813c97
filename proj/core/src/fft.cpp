#include "rotkp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace rotkp {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft2::Fft2(int nx, int ny) : nx_(nx), ny_(ny) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // Planning buffer only; FFTW_ESTIMATE does not read it. FFTW_UNALIGNED keeps the
    // plan independent of buffer addresses, so repeated runs are bit-identical.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(nx) * ny);
    plan_fwd_ = fftw_plan_dft_2d(ny, nx, buf, buf, FFTW_FORWARD, flags);
    plan_bwd_ = fftw_plan_dft_2d(ny, nx, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
}

Fft2::~Fft2() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft2::forward(std::complex<double>* data) const {
    fftw_complex* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), d, d);
}

void Fft2::inverse(std::complex<double>* data) const {
    fftw_complex* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), d, d);
    const double scale = 1.0 / (static_cast<double>(nx_) * static_cast<double>(ny_));
    const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
    for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
}

std::shared_ptr<const Fft2> fft_for(const Grid& grid) {
    static std::mutex cache_mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const Fft2>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(grid.nx, grid.ny);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto fft = std::make_shared<const Fft2>(grid.nx, grid.ny);
    cache.emplace(key, fft);
    return fft;
}

Spectrum to_spectrum(const ScalarField& f) {
    Spectrum s(f.grid);
    for (std::size_t i = 0; i < f.v.size(); ++i) s.c[i] = f.v[i];
    fft_for(f.grid)->forward(s.c.data());
    return s;
}

ScalarField to_field(const Spectrum& s, bool zero_x_mean) {
    std::vector<std::complex<double>> work = s.c;
    fft_for(s.grid)->inverse(work.data());
    ScalarField f(s.grid);
    for (std::size_t i = 0; i < work.size(); ++i) f.v[i] = work[i].real();
    f.zero_x_mean = zero_x_mean;
    return f;
}

}  // namespace rotkp
