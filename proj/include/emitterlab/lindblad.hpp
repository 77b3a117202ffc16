// lindblad.hpp — numerical master-equation integration and regression-theorem
// spectrum computation for the incoherently pumped two-level emitter.
//
// The generator is assembled from explicit operator algebra (jump operators
// acting by matrix products), so this module is an independent oracle for the
// closed forms in tls_model.
#pragma once

#include <array>
#include <complex>
#include <vector>

#include "emitterlab/spectrum.hpp"
#include "emitterlab/tls_model.hpp"

namespace eml {

struct LindbladConfig {
    double p12{0.0};       // pump rate ground -> excited, rad/s
    double p21{0.0};       // decay rate excited -> ground, rad/s
    double gamma_dp{0.0};  // pure dephasing rate, rad/s
    double omega_x{0.0};   // transition angular frequency, rad/s
    double dt_ns{1e-3};    // integration step, ns
    double t_max_ns{1.0};  // horizon, ns

    void validate() const;  // throws UsageError / StabilityError
};

struct Trajectory {
    std::vector<double> times_ns;
    std::vector<DensityMatrixState> states;
};

// Fixed-step classical 4th-order integration of the master equation from
// `init` to t_max. Trace is preserved to 1e-9 along the way.
Trajectory integrate_master(const LindbladConfig& config,
                            const DensityMatrixState& init);

// <sigma_eg(t->inf) sigma_ge(t+tau)> for tau in `tau_grid_ns` (nonnegative,
// increasing): the two-time operator Lambda(0) = rho_ss * sigma_eg is evolved
// under the same equations of motion, with rho_ss itself obtained by long
// integration. Equals rho_ee_ss * exp(-(i omega_x + Gamma2) tau) analytically.
std::vector<std::complex<double>> two_time_correlation(
    const LindbladConfig& config, const std::vector<double>& tau_grid_ns);

// S(omega) = (Gamma_rad/pi) * Re Int_0^inf e^{i omega tau} <sigma_eg sigma_ge(tau)> dtau
// by discrete quadrature with `n_points` samples over a tau horizon of
// config.t_max_ns, computed in a frame rotating at omega_x. Requires the
// horizon to cover at least 20/Gamma2 (truncation guard).
Spectrum spectrum_numeric(const LindbladConfig& config,
                          const std::vector<double>& omega_grid,
                          std::size_t n_points = 16384);

// Full width at half maximum of sampled data by linear interpolation of the
// outermost half-maximum crossings (above-baseline heights; baseline taken as
// the smaller of the two endpoint values).
double fwhm_from_samples(const std::vector<double>& x,
                         const std::vector<double>& y);

}  // namespace eml
