#pragma once

#include <cstddef>

#include "lipreach/nnkit/model.hpp"

namespace lipreach::nnkit {

struct UnrollResult {
    Model model;
    /// Set when the input had no recurrent layer and was returned unchanged.
    bool already_feedforward = false;
};

/// Rewrites every recurrent and LSTM layer as a chain of feedforward layers,
/// one group per time step. Frames not yet consumed and hidden states already
/// emitted travel through each step on dummy nodes (identity weights,
/// identity activation). LSTM steps additionally use mixed-activation layers
/// and product layers for the gates.
///
/// `sequence_length` must equal the model's declared sequence length.
UnrollResult unroll_rnn(const Model& model, std::size_t sequence_length);

}  // namespace lipreach::nnkit
