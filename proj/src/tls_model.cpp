#include "emitterlab/tls_model.hpp"

#include <cmath>

#include "emitterlab/errors.hpp"
#include "emitterlab/units.hpp"

namespace eml {

void EmitterParams::validate() const {
    if (!(t1_ns > 0.0)) throw UsageError("EmitterParams: t1 must be > 0 ns");
    if (!(p_sat_uw > 0.0)) throw UsageError("EmitterParams: p_sat must be > 0 uW");
    if (!(n_exp > 0.0)) throw UsageError("EmitterParams: n_exp must be > 0");
    if (!(gamma_dp >= 0.0)) throw UsageError("EmitterParams: gamma_dp must be >= 0");
    if (!(mu > 0.0 && mu <= 1.0)) throw UsageError("EmitterParams: mu must be in (0, 1]");
    if (!std::isfinite(omega_x)) throw UsageError("EmitterParams: omega_x must be finite");
}

void PumpSetting::validate() const {
    if (!(power_uw >= 0.0)) throw UsageError("PumpSetting: power must be >= 0 uW");
}

void DensityMatrixState::validate(double tol) const {
    if (std::abs(rho_ee + rho_gg - 1.0) > tol)
        throw UsageError("DensityMatrixState: populations must sum to 1");
    if (rho_ee < -tol || rho_ee > 1.0 + tol)
        throw UsageError("DensityMatrixState: rho_ee out of [0, 1]");
    if (std::norm(rho_eg) > rho_ee * rho_gg + tol)
        throw UsageError("DensityMatrixState: |rho_eg|^2 exceeds rho_ee*rho_gg");
}

LinewidthValue transform_limit(double t1_ns, double sigma_t1_ns) {
    if (!(t1_ns > 0.0)) throw UsageError("transform_limit: t1 must be > 0 ns");
    const double fwhm = 1.0 / (2.0 * kPi * t1_ns * 1e-9) / 1e6;  // MHz
    const double sigma = sigma_t1_ns > 0.0 ? fwhm * sigma_t1_ns / t1_ns : 0.0;
    return {fwhm, sigma};
}

double effective_pump_rate(const EmitterParams& params, const PumpSetting& pump) {
    params.validate();
    pump.validate();
    if (pump.power_uw == 0.0) return 0.0;
    return 0.5 * params.gamma_rad() *
           std::pow(pump.power_uw / params.p_sat_uw, params.n_exp);
}

PumpRates pump_rates(const EmitterParams& params, const PumpSetting& pump) {
    const double px = effective_pump_rate(params, pump);
    return {px, params.gamma_rad() + px};
}

DensityMatrixState steady_state(double p12, double p21) {
    if (p12 < 0.0 || p21 < 0.0)
        throw UsageError("steady_state: rates must be >= 0");
    if (p12 + p21 <= 0.0)
        throw UsageError("steady_state: degenerate rates (P12 = P21 = 0)");
    DensityMatrixState s;
    s.rho_ee = p12 / (p12 + p21);
    s.rho_gg = p21 / (p12 + p21);
    s.rho_eg = {0.0, 0.0};
    return s;
}

DensityMatrixState evolve_populations(const DensityMatrixState& init,
                                      double p12, double p21, double t_ns) {
    if (t_ns < 0.0) throw UsageError("evolve_populations: t must be >= 0");
    const double total = p12 + p21;
    DensityMatrixState out;
    if (total <= 0.0) {
        out = init;
        return out;
    }
    const double t_s = t_ns * 1e-9;
    const double rho_ss = p12 / total;
    const double decay = std::exp(-total * t_s);
    out.rho_ee = rho_ss + (init.rho_ee - rho_ss) * decay;
    out.rho_gg = 1.0 - out.rho_ee;
    out.rho_eg = init.rho_eg * std::exp(-0.5 * total * t_s);
    return out;
}

double gamma2(const EmitterParams& params, const PumpSetting& pump) {
    const double px = effective_pump_rate(params, pump);
    return 0.5 * (params.gamma_rad() + 2.0 * px + params.gamma_dp);
}

std::complex<double> evolve_coherence(const DensityMatrixState& init,
                                      const EmitterParams& params,
                                      const PumpSetting& pump, double t_ns) {
    if (t_ns < 0.0) throw UsageError("evolve_coherence: t must be >= 0");
    const double t_s = t_ns * 1e-9;
    const std::complex<double> rate(gamma2(params, pump), params.omega_x);
    return init.rho_eg * std::exp(-rate * t_s);
}

Spectrum emission_spectrum(const EmitterParams& params, const PumpSetting& pump,
                           const std::vector<double>& omega_grid) {
    if (omega_grid.empty())
        throw UsageError("emission_spectrum: empty frequency grid");
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (!(omega_grid[i] > omega_grid[i - 1]))
            throw UsageError("emission_spectrum: grid must be strictly increasing");

    const PumpRates rates = pump_rates(params, pump);
    const double rho_ss = steady_state(rates.p12, rates.p21).rho_ee;
    const double g2 = gamma2(params, pump);
    const double amp = params.mu * params.gamma_rad() * rho_ss / kPi;

    Spectrum spec;
    spec.x_unit = "angular_rad_s";
    spec.x = omega_grid;
    spec.y.resize(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        const double d = omega_grid[i] - params.omega_x;
        spec.y[i] = amp * g2 / (g2 * g2 + d * d);
    }
    return spec;
}

double intensity(const EmitterParams& params, const PumpSetting& pump) {
    params.validate();
    pump.validate();
    if (pump.power_uw == 0.0) return 0.0;
    const double i_sat = 0.5 * params.mu * params.gamma_rad();
    const double pn = std::pow(pump.power_uw, params.n_exp);
    const double psn = std::pow(params.p_sat_uw, params.n_exp);
    return i_sat * pn / (psn + pn);
}

LinewidthValue measured_linewidth(const EmitterParams& params,
                                  const PumpSetting& pump, double coefficient) {
    params.validate();
    pump.validate();
    const double tl = transform_limit(params.t1_ns).fwhm_mhz;
    const double ratio = pump.power_uw > 0.0
                             ? std::pow(pump.power_uw / params.p_sat_uw, params.n_exp)
                             : 0.0;
    const double dp_mhz = linear_mhz_from_angular(params.gamma_dp);
    return {tl * (1.0 + coefficient * ratio) + dp_mhz, 0.0};
}

DephasingResult dephasing_from_measurement(double meas_fwhm_mhz,
                                           double irf_fwhm_mhz,
                                           const EmitterParams& params,
                                           const PumpSetting& pump,
                                           double coefficient) {
    params.validate();
    pump.validate();
    if (!(meas_fwhm_mhz > irf_fwhm_mhz))
        throw InfeasibleError(
            "dephasing_from_measurement: measured width must exceed the "
            "instrument width");
    const double tl = transform_limit(params.t1_ns).fwhm_mhz;
    const double ratio = pump.power_uw > 0.0
                             ? std::pow(pump.power_uw / params.p_sat_uw, params.n_exp)
                             : 0.0;
    double dp = (meas_fwhm_mhz - irf_fwhm_mhz) - tl * (1.0 + coefficient * ratio);
    DephasingResult res;
    if (dp < 0.0) {
        dp = 0.0;
        res.clamped = true;
    }
    res.value = {dp, 0.0};
    return res;
}

LinewidthValue zero_power_linewidth(double t1_ns, double gamma_dp_over_2pi_mhz) {
    if (!(std::isfinite(t1_ns) && std::isfinite(gamma_dp_over_2pi_mhz)))
        throw UsageError("zero_power_linewidth: inputs must be finite");
    if (gamma_dp_over_2pi_mhz < 0.0)
        throw UsageError("zero_power_linewidth: dephasing must be >= 0");
    return {transform_limit(t1_ns).fwhm_mhz + gamma_dp_over_2pi_mhz, 0.0};
}

ValueSigma tl_ratio(const LinewidthValue& linewidth, double t1_ns,
                    double sigma_t1_ns) {
    if (!(linewidth.fwhm_mhz > 0.0) || !(t1_ns > 0.0))
        throw UsageError("tl_ratio: inputs must be positive");
    const double tl = transform_limit(t1_ns).fwhm_mhz;
    const double ratio = linewidth.fwhm_mhz / tl;
    // ratio = fwhm * 2*pi*t1*1e-3, so relative errors add in quadrature.
    const double rel_lw =
        linewidth.fwhm_mhz > 0.0 ? linewidth.sigma_mhz / linewidth.fwhm_mhz : 0.0;
    const double rel_t1 = t1_ns > 0.0 ? sigma_t1_ns / t1_ns : 0.0;
    return {ratio, ratio * std::sqrt(rel_lw * rel_lw + rel_t1 * rel_t1)};
}

double energy_wavelength_convert(double value, double at_wavelength_nm,
                                 ConvertDirection direction) {
    if (!(at_wavelength_nm > 0.0))
        throw UsageError("energy_wavelength_convert: wavelength must be > 0");
    const double lam2 = at_wavelength_nm * at_wavelength_nm;
    if (direction == ConvertDirection::wavelength_to_energy)
        return 1e6 * kHcEvNm * value / lam2;   // nm -> ueV
    return value * lam2 / (1e6 * kHcEvNm);     // ueV -> nm
}

}  // namespace eml
