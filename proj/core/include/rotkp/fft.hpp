#pragma once

#include <complex>
#include <memory>

#include "rotkp/grid.hpp"

namespace rotkp {

/// 2D complex-to-complex transform pair for one grid size.
///
/// Convention (used everywhere in this library): the forward transform is
/// unnormalized, F(k) = sum_x f(x) exp(-i k.x); the inverse applies the
/// 1/(nx*ny) factor, f(x) = (1/(nx*ny)) sum_k F(k) exp(+i k.x).
///
/// Plans are created with FFTW_ESTIMATE so planning is deterministic and does
/// not touch the caller's data. execute() is safe to call concurrently from
/// several threads on distinct buffers.
class Fft2 {
  public:
    Fft2(int nx, int ny);
    ~Fft2();
    Fft2(const Fft2&) = delete;
    Fft2& operator=(const Fft2&) = delete;

    void forward(std::complex<double>* data) const;
    void inverse(std::complex<double>* data) const;  // includes the 1/(nx*ny) scale

    int nx() const { return nx_; }
    int ny() const { return ny_; }

  private:
    int nx_, ny_;
    void* plan_fwd_;  // fftw_plan
    void* plan_bwd_;
};

/// Shared plan for a grid size, cached process-wide (plan creation is locked;
/// execution is per-call on caller buffers).
std::shared_ptr<const Fft2> fft_for(const Grid& grid);

/// Forward transform of a real field.
Spectrum to_spectrum(const ScalarField& f);

/// Inverse transform; imaginary residue (roundoff for spectra of real fields) is dropped.
ScalarField to_field(const Spectrum& s, bool zero_x_mean = false);

}  // namespace rotkp
