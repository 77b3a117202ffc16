// spectrum.hpp — ordered axis with counts and optional per-bin uncertainty.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace eml {

struct Spectrum {
    std::vector<double> x;      // strictly increasing axis values
    std::vector<double> y;      // counts (arbitrary units, >= 0 for data files)
    std::vector<double> sigma;  // optional per-bin std dev; empty if absent

    // Axis meaning, e.g. "wavelength_nm", "detuning_mhz", "time_ns".
    std::string x_unit{"wavelength_nm"};

    // Ordered key=value metadata carried through file round-trips.
    std::vector<std::pair<std::string, std::string>> metadata;

    bool has_sigma() const { return !sigma.empty(); }
    std::size_t size() const { return x.size(); }

    // First metadata value for `key`, or empty string.
    std::string meta(const std::string& key) const {
        for (const auto& [k, v] : metadata)
            if (k == key) return v;
        return {};
    }
};

}  // namespace eml
