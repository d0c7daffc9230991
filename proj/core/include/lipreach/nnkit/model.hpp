#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lipreach/nnkit/layer.hpp"

namespace lipreach::nnkit {

/// An immutable layered network f: R^n -> R^m.
///
/// Construction validates the whole composition: every layer's dimensions
/// must agree with the width produced by its predecessor, every weight must
/// be finite and the final width must equal the number of labels. A failure
/// throws ValidationError carrying the offending layer index.
///
/// Sequence models take frame-major flattened inputs: input_arity equals
/// frame width times sequence_length.
class Model {
public:
    Model(std::size_t input_arity, std::size_t sequence_length, std::vector<std::string> labels,
          std::vector<Layer> layers);

    std::size_t input_arity() const noexcept { return input_arity_; }
    std::size_t output_arity() const noexcept { return labels_.size(); }
    std::size_t sequence_length() const noexcept { return sequence_length_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<Layer>& layers() const noexcept { return layers_; }

    /// Width produced by layer `i` (input width of layer i+1).
    std::size_t layer_output_width(std::size_t i) const { return widths_.at(i + 1); }
    std::size_t layer_input_width(std::size_t i) const { return widths_.at(i); }

    bool is_recurrent() const noexcept;
    bool ends_with_softmax() const noexcept;

    /// Confidence vector c(x) = f(x). Throws ContractError on arity mismatch
    /// or non-finite input.
    Vector forward(std::span<const double> input) const;

    /// Output of the network with a trailing softmax layer removed. Equals
    /// forward() for models without one.
    Vector logits(std::span<const double> input) const;

    /// Throws ContractError naming the label when unknown.
    std::size_t label_index(std::string_view name) const;

private:
    Vector run(std::span<const double> input, std::size_t layer_count) const;

    std::size_t input_arity_;
    std::size_t sequence_length_;
    std::vector<std::string> labels_;
    std::vector<Layer> layers_;
    std::vector<std::size_t> widths_;
};

/// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

/// True when the maximum is attained by exactly one entry.
bool unique_argmax(std::span<const double> values);

}  // namespace lipreach::nnkit
