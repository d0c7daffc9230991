#pragma once

#include <span>
#include <string>
#include <string_view>

namespace lipreach::nnkit {

enum class Activation { Identity, Relu, Sigmoid, Tanh };

double apply(Activation act, double x) noexcept;
void apply_inplace(Activation act, std::span<double> xs) noexcept;

std::string_view to_string(Activation act) noexcept;
/// Accepts "identity", "relu", "sigmoid", "tanh". Throws ContractError otherwise.
Activation parse_activation(std::string_view name);

/// Numerically stable softmax; the result sums to 1 within a few ulps.
void softmax_inplace(std::span<double> xs) noexcept;

}  // namespace lipreach::nnkit
