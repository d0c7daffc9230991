#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "lipreach/nnkit/activation.hpp"
#include "lipreach/nnkit/matrix.hpp"

namespace lipreach::nnkit {

/// y = act(W x + b)
struct DenseLayer {
    Matrix weights;
    Vector bias;
    Activation activation = Activation::Identity;

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Elementwise activation. A single entry is broadcast over the whole input;
/// otherwise there is one activation per unit (mixed-activation layer).
struct ActivationLayer {
    std::vector<Activation> activations;

    bool broadcast() const noexcept { return activations.size() == 1; }
    friend bool operator==(const ActivationLayer&, const ActivationLayer&) = default;
};

struct SoftmaxLayer {
    friend bool operator==(const SoftmaxLayer&, const SoftmaxLayer&) = default;
};

/// Vanilla recurrent cell, h_t = act(W_x x_t + W_h h_{t-1} + b), h_0 = 0.
/// The layer input is the frame-major flattening of `sequence_length` frames.
struct RecurrentLayer {
    Matrix input_weights;   // hidden x frame
    Matrix hidden_weights;  // hidden x hidden
    Vector bias;            // hidden
    Activation activation = Activation::Tanh;
    bool return_sequences = false;

    std::size_t hidden() const noexcept { return bias.size(); }
    friend bool operator==(const RecurrentLayer&, const RecurrentLayer&) = default;
};

/// Standard four-gate LSTM cell with sigmoid gates and tanh squashing:
///   i = s(W_i x + U_i h + b_i)    f = s(W_f x + U_f h + b_f)
///   o = s(W_o x + U_o h + b_o)    g = tanh(W_c x + U_c h + b_c)
///   c' = f*c + i*g                h' = o*tanh(c')
struct LstmLayer {
    struct Gate {
        Matrix input_weights;
        Matrix hidden_weights;
        Vector bias;
        friend bool operator==(const Gate&, const Gate&) = default;
    };
    Gate input;
    Gate forget;
    Gate output;
    Gate cell;
    bool return_sequences = false;

    std::size_t hidden() const noexcept { return input.bias.size(); }
    friend bool operator==(const LstmLayer&, const LstmLayer&) = default;
};

/// out[j] = prod_{i in factors[j]} in[i]. A single factor copies, an empty
/// list yields 1. Used by unrolled LSTM cells for the gating products.
struct ProductLayer {
    std::vector<std::vector<std::size_t>> factors;

    friend bool operator==(const ProductLayer&, const ProductLayer&) = default;
};

using Layer = std::variant<DenseLayer, ActivationLayer, SoftmaxLayer, RecurrentLayer,
                           LstmLayer, ProductLayer>;

std::string_view kind_name(const Layer& layer) noexcept;
bool is_recurrent(const Layer& layer) noexcept;

}  // namespace lipreach::nnkit
