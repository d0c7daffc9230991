#include "lipreach/nnkit/activation.hpp"

#include <algorithm>
#include <cmath>

#include "lipreach/error.hpp"

namespace lipreach::nnkit {

namespace {

double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

double apply(Activation act, double x) noexcept {
    switch (act) {
        case Activation::Identity: return x;
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::Sigmoid: return sigmoid(x);
        case Activation::Tanh: return std::tanh(x);
    }
    return x;
}

void apply_inplace(Activation act, std::span<double> xs) noexcept {
    if (act == Activation::Identity) return;
    for (double& x : xs) x = apply(act, x);
}

std::string_view to_string(Activation act) noexcept {
    switch (act) {
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
    }
    return "identity";
}

Activation parse_activation(std::string_view name) {
    if (name == "identity" || name == "linear") return Activation::Identity;
    if (name == "relu") return Activation::Relu;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh") return Activation::Tanh;
    throw ContractError("unsupported activation '" + std::string(name) + "'");
}

void softmax_inplace(std::span<double> xs) noexcept {
    if (xs.empty()) return;
    const double peak = *std::max_element(xs.begin(), xs.end());
    double total = 0.0;
    for (double& x : xs) {
        x = std::exp(x - peak);
        total += x;
    }
    for (double& x : xs) x /= total;
}

}  // namespace lipreach::nnkit
