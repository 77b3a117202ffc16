// units.hpp — unit conventions and conversions used throughout.
//
// Convention: rates are stored as angular frequencies in rad/s; user-facing
// linewidths are linear-frequency FWHM in MHz. For a Lorentzian line whose
// coherence decays at Gamma2 (rad/s), the linear FWHM is Gamma2/pi.
// Times in simulation APIs are nanoseconds unless the name says otherwise.
#pragma once

#include <cmath>

namespace eml {

inline constexpr double kPi = 3.14159265358979323846;

// hc in eV*nm, used for wavelength <-> energy conversion.
inline constexpr double kHcEvNm = 1239.84198;

inline constexpr double kSecPerNs = 1e-9;

// A rate quoted as "X MHz" in linear frequency (e.g. Gamma_dp/2pi) has
// angular value 2*pi*1e6*X rad/s.
inline constexpr double angular_from_linear_mhz(double mhz) {
    return 2.0 * kPi * 1e6 * mhz;
}

inline constexpr double linear_mhz_from_angular(double rad_per_s) {
    return rad_per_s / (2.0 * kPi * 1e6);
}

// Lorentzian FWHM (linear MHz) from the coherence decay rate Gamma2 (rad/s).
inline constexpr double fwhm_mhz_from_gamma2(double gamma2_rad_s) {
    return gamma2_rad_s / (kPi * 1e6);
}

inline constexpr double gamma2_from_fwhm_mhz(double fwhm_mhz) {
    return fwhm_mhz * kPi * 1e6;
}

enum class ConvertDirection { wavelength_to_energy, energy_to_wavelength };

// Small-interval conversion between a wavelength separation (nm) and an
// energy separation (micro-eV) at carrier wavelength `at_wavelength_nm`:
//   dE[ueV] = 1e6 * hc * dLambda / lambda^2.
double energy_wavelength_convert(double value, double at_wavelength_nm,
                                 ConvertDirection direction);

}  // namespace eml
