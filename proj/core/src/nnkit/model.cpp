#include "lipreach/nnkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "lipreach/error.hpp"

namespace lipreach::nnkit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, std::size_t layer, const std::string& what) {
    if (!ok) throw ValidationError(layer, what);
}

std::string dims(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_weights(const Matrix& w, const Vector& b, std::size_t rows, std::size_t cols,
                   std::size_t layer, const char* name) {
    require(w.rows() == rows && w.cols() == cols, layer,
            std::string(name) + " has shape " + dims(w) + ", expected " + std::to_string(rows) +
                "x" + std::to_string(cols));
    require(w.all_finite(), layer, std::string(name) + " contains a non-finite entry");
    (void)b;
}

void check_bias(const Vector& b, std::size_t size, std::size_t layer, const char* name) {
    require(b.size() == size, layer,
            std::string(name) + " has length " + std::to_string(b.size()) + ", expected " +
                std::to_string(size));
    require(all_finite(b), layer, std::string(name) + " contains a non-finite entry");
}

std::size_t frame_width(std::size_t in, std::size_t seq_len, std::size_t layer) {
    require(seq_len > 0 && in % seq_len == 0, layer,
            "input width " + std::to_string(in) + " is not a multiple of sequence length " +
                std::to_string(seq_len));
    return in / seq_len;
}

// Output width of `layer` for input width `in`; throws on inconsistency.
std::size_t validate_layer(const Layer& layer, std::size_t in, std::size_t seq_len,
                           std::size_t idx) {
    return std::visit(
        Overloaded{
            [&](const DenseLayer& d) {
                check_weights(d.weights, d.bias, d.weights.rows(), in, idx, "W");
                require(d.weights.rows() > 0, idx, "W has no rows");
                check_bias(d.bias, d.weights.rows(), idx, "b");
                return d.weights.rows();
            },
            [&](const ActivationLayer& a) {
                require(!a.activations.empty(), idx, "activation list is empty");
                require(a.broadcast() || a.activations.size() == in, idx,
                        "per-unit activation list has " + std::to_string(a.activations.size()) +
                            " entries for width " + std::to_string(in));
                return in;
            },
            [&](const SoftmaxLayer&) { return in; },
            [&](const RecurrentLayer& r) {
                const std::size_t frame = frame_width(in, seq_len, idx);
                const std::size_t h = r.hidden();
                require(h > 0, idx, "recurrent cell has no hidden units");
                check_weights(r.input_weights, r.bias, h, frame, idx, "W_x");
                check_weights(r.hidden_weights, r.bias, h, h, idx, "W_h");
                check_bias(r.bias, h, idx, "b");
                return r.return_sequences ? h * seq_len : h;
            },
            [&](const LstmLayer& l) {
                const std::size_t frame = frame_width(in, seq_len, idx);
                const std::size_t h = l.hidden();
                require(h > 0, idx, "lstm cell has no hidden units");
                const std::pair<const LstmLayer::Gate*, const char*> gates[] = {
                    {&l.input, "i"}, {&l.forget, "f"}, {&l.output, "o"}, {&l.cell, "c"}};
                for (const auto& [g, tag] : gates) {
                    const std::string w = std::string("W_") + tag;
                    const std::string u = std::string("U_") + tag;
                    const std::string b = std::string("b_") + tag;
                    check_weights(g->input_weights, g->bias, h, frame, idx, w.c_str());
                    check_weights(g->hidden_weights, g->bias, h, h, idx, u.c_str());
                    check_bias(g->bias, h, idx, b.c_str());
                }
                return l.return_sequences ? h * seq_len : h;
            },
            [&](const ProductLayer& p) {
                require(!p.factors.empty(), idx, "product layer has no outputs");
                for (const auto& f : p.factors) {
                    for (std::size_t i : f) {
                        require(i < in, idx,
                                "product factor index " + std::to_string(i) +
                                    " out of range for width " + std::to_string(in));
                    }
                }
                return p.factors.size();
            },
        },
        layer);
}

void add_bias(std::span<double> out, const Vector& bias) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bias[i];
}

Vector run_recurrent(const RecurrentLayer& r, const Vector& in, std::size_t seq_len) {
    const std::size_t frame = in.size() / seq_len;
    const std::size_t h = r.hidden();
    Vector hidden(h, 0.0);
    Vector pre(h);
    Vector out;
    out.reserve(r.return_sequences ? h * seq_len : h);
    for (std::size_t t = 0; t < seq_len; ++t) {
        std::fill(pre.begin(), pre.end(), 0.0);
        r.input_weights.accumulate(std::span(in).subspan(t * frame, frame), pre);
        if (t > 0) r.hidden_weights.accumulate(hidden, pre);
        add_bias(pre, r.bias);
        apply_inplace(r.activation, pre);
        hidden = pre;
        if (r.return_sequences) out.insert(out.end(), hidden.begin(), hidden.end());
    }
    if (!r.return_sequences) out = hidden;
    return out;
}

void gate_preactivation(const LstmLayer::Gate& g, std::span<const double> x,
                        const Vector& hidden, bool has_hidden, Vector& pre) {
    std::fill(pre.begin(), pre.end(), 0.0);
    g.input_weights.accumulate(x, pre);
    if (has_hidden) g.hidden_weights.accumulate(hidden, pre);
    add_bias(pre, g.bias);
}

Vector run_lstm(const LstmLayer& l, const Vector& in, std::size_t seq_len) {
    const std::size_t frame = in.size() / seq_len;
    const std::size_t h = l.hidden();
    Vector hidden(h, 0.0), cell(h, 0.0);
    Vector i(h), f(h), o(h), g(h);
    Vector out;
    out.reserve(l.return_sequences ? h * seq_len : h);
    for (std::size_t t = 0; t < seq_len; ++t) {
        const auto x = std::span(in).subspan(t * frame, frame);
        const bool has_hidden = t > 0;
        gate_preactivation(l.input, x, hidden, has_hidden, i);
        gate_preactivation(l.forget, x, hidden, has_hidden, f);
        gate_preactivation(l.output, x, hidden, has_hidden, o);
        gate_preactivation(l.cell, x, hidden, has_hidden, g);
        apply_inplace(Activation::Sigmoid, i);
        apply_inplace(Activation::Sigmoid, f);
        apply_inplace(Activation::Sigmoid, o);
        apply_inplace(Activation::Tanh, g);
        for (std::size_t k = 0; k < h; ++k) {
            const double carried = has_hidden ? f[k] * cell[k] : 0.0;
            cell[k] = has_hidden ? carried + i[k] * g[k] : i[k] * g[k];
            hidden[k] = o[k] * std::tanh(cell[k]);
        }
        if (l.return_sequences) out.insert(out.end(), hidden.begin(), hidden.end());
    }
    if (!l.return_sequences) out = hidden;
    return out;
}

}  // namespace

std::string_view kind_name(const Layer& layer) noexcept {
    return std::visit(Overloaded{
                          [](const DenseLayer&) { return std::string_view("dense"); },
                          [](const ActivationLayer&) { return std::string_view("activation"); },
                          [](const SoftmaxLayer&) { return std::string_view("softmax"); },
                          [](const RecurrentLayer&) { return std::string_view("recurrent"); },
                          [](const LstmLayer&) { return std::string_view("lstm"); },
                          [](const ProductLayer&) { return std::string_view("product"); },
                      },
                      layer);
}

bool is_recurrent(const Layer& layer) noexcept {
    return std::holds_alternative<RecurrentLayer>(layer) || std::holds_alternative<LstmLayer>(layer);
}

Model::Model(std::size_t input_arity, std::size_t sequence_length, std::vector<std::string> labels,
             std::vector<Layer> layers)
    : input_arity_(input_arity),
      sequence_length_(sequence_length),
      labels_(std::move(labels)),
      layers_(std::move(layers)) {
    constexpr auto top = ValidationError::kModelLevel;
    require(input_arity_ > 0, top, "input_arity must be positive");
    require(sequence_length_ > 0, top, "sequence_length must be positive");
    require(!labels_.empty(), top, "model has no labels");
    require(!layers_.empty(), top, "model has no layers");
    widths_.reserve(layers_.size() + 1);
    widths_.push_back(input_arity_);
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        widths_.push_back(validate_layer(layers_[i], widths_.back(), sequence_length_, i));
    }
    require(widths_.back() == labels_.size(), layers_.size() - 1,
            "output width " + std::to_string(widths_.back()) + " does not match " +
                std::to_string(labels_.size()) + " labels");
}

bool Model::is_recurrent() const noexcept {
    return std::any_of(layers_.begin(), layers_.end(),
                       [](const Layer& l) { return nnkit::is_recurrent(l); });
}

bool Model::ends_with_softmax() const noexcept {
    return std::holds_alternative<SoftmaxLayer>(layers_.back());
}

Vector Model::forward(std::span<const double> input) const { return run(input, layers_.size()); }

Vector Model::logits(std::span<const double> input) const {
    return run(input, ends_with_softmax() ? layers_.size() - 1 : layers_.size());
}

Vector Model::run(std::span<const double> input, std::size_t layer_count) const {
    if (input.size() != input_arity_) {
        throw ContractError("input has " + std::to_string(input.size()) +
                            " elements, model expects " + std::to_string(input_arity_));
    }
    if (!all_finite(input)) throw ContractError("input contains a non-finite element");

    Vector state(input.begin(), input.end());
    for (std::size_t li = 0; li < layer_count; ++li) {
        state = std::visit(
            Overloaded{
                [&](const DenseLayer& d) {
                    Vector out(d.weights.rows(), 0.0);
                    d.weights.accumulate(state, out);
                    add_bias(out, d.bias);
                    apply_inplace(d.activation, out);
                    return out;
                },
                [&](const ActivationLayer& a) {
                    if (a.broadcast()) {
                        apply_inplace(a.activations.front(), state);
                    } else {
                        for (std::size_t k = 0; k < state.size(); ++k) {
                            state[k] = apply(a.activations[k], state[k]);
                        }
                    }
                    return std::move(state);
                },
                [&](const SoftmaxLayer&) {
                    softmax_inplace(state);
                    return std::move(state);
                },
                [&](const RecurrentLayer& r) { return run_recurrent(r, state, sequence_length_); },
                [&](const LstmLayer& l) { return run_lstm(l, state, sequence_length_); },
                [&](const ProductLayer& p) {
                    Vector out(p.factors.size());
                    for (std::size_t j = 0; j < p.factors.size(); ++j) {
                        const auto& f = p.factors[j];
                        if (f.empty()) {
                            out[j] = 1.0;
                            continue;
                        }
                        double v = state[f.front()];
                        for (std::size_t k = 1; k < f.size(); ++k) v *= state[f[k]];
                        out[j] = v;
                    }
                    return out;
                },
            },
            layers_[li]);
    }
    return state;
}

std::size_t Model::label_index(std::string_view name) const {
    const auto it = std::find(labels_.begin(), labels_.end(), name);
    if (it == labels_.end()) throw ContractError("unknown label '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t argmax(std::span<const double> values) {
    if (values.empty()) throw ContractError("argmax of an empty vector");
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                    values.begin());
}

bool unique_argmax(std::span<const double> values) {
    const std::size_t best = argmax(values);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != best && values[i] == values[best]) return false;
    }
    return true;
}

}  // namespace lipreach::nnkit
