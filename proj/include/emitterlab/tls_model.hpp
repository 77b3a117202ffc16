// tls_model.hpp — closed-form solutions for an incoherently pumped two-level
// emitter: populations, coherence, Lorentzian emission spectrum, saturation
// intensity, power-broadened linewidth, dephasing extraction and zero-power
// extrapolation.
#pragma once

#include <complex>
#include <vector>

#include "emitterlab/spectrum.hpp"
#include "emitterlab/value.hpp"

namespace eml {

struct EmitterParams {
    double t1_ns{1.0};        // radiative lifetime, ns
    double gamma_dp{0.0};     // pure dephasing rate, rad/s
    double p_sat_uw{1.0};     // saturation power, uW
    double n_exp{1.0};        // saturation power-law exponent
    double mu{1.0};           // collection efficiency factor, (0, 1]
    double omega_x{0.0};      // transition angular frequency, rad/s

    double gamma_rad() const { return 1.0 / (t1_ns * 1e-9); }  // rad/s
    void validate() const;    // throws UsageError on invariant violation
};

struct PumpSetting {
    double power_uw{0.0};
    void validate() const;
};

struct DensityMatrixState {
    double rho_ee{0.0};
    double rho_gg{1.0};
    std::complex<double> rho_eg{0.0, 0.0};
    void validate(double tol = 1e-12) const;
};

struct LinewidthValue {
    double fwhm_mhz{0.0};     // FWHM, linear frequency, MHz
    double sigma_mhz{0.0};    // one-standard-deviation uncertainty, MHz
};

struct PumpRates {
    double p12{0.0};          // ground -> excited, rad/s
    double p21{0.0};          // excited -> ground, rad/s
};

// Result of the dephasing subtraction; `clamped` marks a negative raw result
// that was clipped to zero.
struct DephasingResult {
    LinewidthValue value;     // Gamma_dp / 2pi, MHz
    bool clamped{false};
};

// 1/(2*pi*t1) in MHz. With sigma_t1_ns > 0, first-order propagation.
LinewidthValue transform_limit(double t1_ns, double sigma_t1_ns = 0.0);

// P_x = (Gamma_rad/2) * (P/P_sat)^n, rad/s.
double effective_pump_rate(const EmitterParams& params, const PumpSetting& pump);

// P12 = P_x, P21 = Gamma_rad + P_x.
PumpRates pump_rates(const EmitterParams& params, const PumpSetting& pump);

// rho_ee = P12/(P12+P21), coherence zero.
DensityMatrixState steady_state(double p12, double p21);

// Populations relax exponentially toward steady state at rate P12+P21; the
// returned coherence is attenuated at (P12+P21)/2 (the coherence decay rate
// for zero pure dephasing in a frame rotating at the transition frequency).
DensityMatrixState evolve_populations(const DensityMatrixState& init,
                                      double p12, double p21, double t_ns);

// Gamma2 = (Gamma_rad + 2 P_x + Gamma_dp)/2, rad/s: coherence decay rate and
// angular HWHM of the emission line.
double gamma2(const EmitterParams& params, const PumpSetting& pump);

// rho_eg(t) = rho_eg(0) * exp(-(i omega_x + Gamma2) t).
std::complex<double> evolve_coherence(const DensityMatrixState& init,
                                      const EmitterParams& params,
                                      const PumpSetting& pump, double t_ns);

// F(omega) = (mu Gamma_rad / pi) * rho_ee_ss * Gamma2 / (Gamma2^2 + (omega-omega_x)^2)
// evaluated on `omega_grid` (rad/s, strictly increasing).
Spectrum emission_spectrum(const EmitterParams& params, const PumpSetting& pump,
                           const std::vector<double>& omega_grid);

// I(P) = I_sat * P^n / (P_sat^n + P^n), I_sat = mu*Gamma_rad/2 (arbitrary units).
double intensity(const EmitterParams& params, const PumpSetting& pump);

// Gamma_meas(P) = (1/(2 pi t1)) * [1 + c*(P/P_sat)^n] + Gamma_dp/2pi, MHz FWHM.
// The broadening coefficient c defaults to 1; c = 2 is selectable.
LinewidthValue measured_linewidth(const EmitterParams& params,
                                  const PumpSetting& pump, double coefficient = 1.0);

// Gamma_dp/2pi = (meas - irf) - (1/(2 pi t1)) * [1 + c*(P/P_sat)^n].
// `params` supplies t1, p_sat and n; its gamma_dp is ignored.
// Negative results clamp to zero with the flag set; meas <= irf throws
// InfeasibleError.
DephasingResult dephasing_from_measurement(double meas_fwhm_mhz,
                                           double irf_fwhm_mhz,
                                           const EmitterParams& params,
                                           const PumpSetting& pump,
                                           double coefficient = 1.0);

// 1/(2 pi t1) + Gamma_dp/2pi, MHz.
LinewidthValue zero_power_linewidth(double t1_ns, double gamma_dp_over_2pi_mhz);

// linewidth / transform_limit(t1). Sigma by first-order propagation (exact
// for this product form); pipelines may replace it with Monte Carlo.
ValueSigma tl_ratio(const LinewidthValue& linewidth, double t1_ns,
                    double sigma_t1_ns = 0.0);

}  // namespace eml
