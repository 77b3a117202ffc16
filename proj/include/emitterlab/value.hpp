// value.hpp — a measured/derived scalar with one-standard-deviation error.
#pragma once

namespace eml {

struct ValueSigma {
    double value{0.0};
    double sigma{0.0};
};

}  // namespace eml
