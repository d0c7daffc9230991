#pragma once

#include <cstddef>

#include "lipreach/verify/radius.hpp"

namespace lipreach::verify {

struct AdversarialExample {
    Vector input;
    /// ||input - anchor||_inf
    double distortion = 0.0;
    /// Radius of the probe that produced the witness.
    double theta = 0.0;
    std::size_t original_label = 0;
    std::size_t adversarial_label = 0;
    double original_confidence = 0.0;
    double adversarial_confidence = 0.0;
    Vector output;
};

/// Witness of the smallest unsafe probe in the report. Needs nothing but the
/// report. Throws NotFoundError when no probe was unsafe.
AdversarialExample ground_truth_adversarial(const RadiusReport& report);

}  // namespace lipreach::verify
