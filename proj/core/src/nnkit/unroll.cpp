#include "lipreach/nnkit/unroll.hpp"

#include <variant>

#include "lipreach/error.hpp"

namespace lipreach::nnkit {

namespace {

// Dense layer with identity activation; rows are filled by the caller.
DenseLayer linear(std::size_t out, std::size_t in) {
    return DenseLayer{Matrix(out, in), Vector(out, 0.0), Activation::Identity};
}

// Row `row` copies input column `col` (a dummy pass-through node).
void copy_rows(DenseLayer& d, std::size_t row, std::size_t col, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) d.weights(row + k, col + k) = 1.0;
}

void copy_factors(ProductLayer& p, std::size_t col, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) p.factors.push_back({col + k});
}

ActivationLayer mixed(std::size_t passthrough, std::initializer_list<std::pair<Activation, std::size_t>> tail) {
    ActivationLayer a;
    a.activations.assign(passthrough, Activation::Identity);
    for (const auto& [act, n] : tail) a.activations.insert(a.activations.end(), n, act);
    return a;
}

// Frame-major layout of the state entering step t:
//   [ frames t..L-1 | carried hidden states | cell state (lstm, t > 0) ]
struct StepLayout {
    std::size_t frame, steps, hidden, t;
    bool sequences;

    std::size_t frames_in() const { return (steps - t) * frame; }
    std::size_t frames_out() const { return (steps - t - 1) * frame; }
    std::size_t carried_in() const {
        if (sequences) return t * hidden;
        return t > 0 ? hidden : 0;
    }
    // Hidden states that survive this step untouched.
    std::size_t kept() const { return sequences ? t * hidden : 0; }
    // Column of h_{t-1} in the incoming state.
    std::size_t previous_hidden() const { return frames_in() + carried_in() - hidden; }
    std::size_t width_in(bool with_cell) const {
        return frames_in() + carried_in() + (with_cell && t > 0 ? hidden : 0);
    }
    bool last() const { return t + 1 == steps; }
};

void fill_gate_rows(DenseLayer& d, std::size_t row, const Matrix& input_w, const Matrix& hidden_w,
                    const Vector& bias, const StepLayout& s) {
    for (std::size_t k = 0; k < s.hidden; ++k) {
        for (std::size_t j = 0; j < s.frame; ++j) d.weights(row + k, j) = input_w(k, j);
        if (s.t > 0) {
            for (std::size_t m = 0; m < s.hidden; ++m) {
                d.weights(row + k, s.previous_hidden() + m) = hidden_w(k, m);
            }
        }
        d.bias[row + k] = bias[k];
    }
}

void unroll_recurrent(const RecurrentLayer& r, std::size_t width, std::size_t steps,
                      std::vector<Layer>& out) {
    const std::size_t h = r.hidden();
    for (std::size_t t = 0; t < steps; ++t) {
        const StepLayout s{width / steps, steps, h, t, r.return_sequences};
        const std::size_t pass = s.frames_out() + s.kept();
        DenseLayer d = linear(pass + h, s.width_in(false));
        copy_rows(d, 0, s.frame, s.frames_out());
        copy_rows(d, s.frames_out(), s.frames_in(), s.kept());
        fill_gate_rows(d, pass, r.input_weights, r.hidden_weights, r.bias, s);
        out.emplace_back(std::move(d));
        out.emplace_back(mixed(pass, {{r.activation, h}}));
    }
}

void unroll_lstm(const LstmLayer& l, std::size_t width, std::size_t steps, std::vector<Layer>& out) {
    const std::size_t h = l.hidden();
    for (std::size_t t = 0; t < steps; ++t) {
        const StepLayout s{width / steps, steps, h, t, l.return_sequences};
        const std::size_t cell_in = t > 0 ? h : 0;
        const std::size_t pass = s.frames_out() + s.kept();

        // [X' | S' | c_{t-1} | pre_i | pre_f | pre_o | pre_g]
        const std::size_t gates_at = pass + cell_in;
        DenseLayer pre = linear(gates_at + 4 * h, s.width_in(true));
        copy_rows(pre, 0, s.frame, s.frames_out());
        copy_rows(pre, s.frames_out(), s.frames_in(), s.kept());
        copy_rows(pre, pass, s.frames_in() + s.carried_in(), cell_in);
        fill_gate_rows(pre, gates_at, l.input.input_weights, l.input.hidden_weights, l.input.bias, s);
        fill_gate_rows(pre, gates_at + h, l.forget.input_weights, l.forget.hidden_weights,
                       l.forget.bias, s);
        fill_gate_rows(pre, gates_at + 2 * h, l.output.input_weights, l.output.hidden_weights,
                       l.output.bias, s);
        fill_gate_rows(pre, gates_at + 3 * h, l.cell.input_weights, l.cell.hidden_weights,
                       l.cell.bias, s);
        out.emplace_back(std::move(pre));
        out.emplace_back(mixed(gates_at, {{Activation::Sigmoid, 3 * h}, {Activation::Tanh, h}}));

        // [X' | S' | o | f*c | i*g]
        const std::size_t i_at = gates_at, f_at = gates_at + h, o_at = gates_at + 2 * h,
                          g_at = gates_at + 3 * h;
        ProductLayer gating;
        copy_factors(gating, 0, pass);
        copy_factors(gating, o_at, h);
        for (std::size_t k = 0; k < cell_in; ++k) gating.factors.push_back({f_at + k, pass + k});
        for (std::size_t k = 0; k < h; ++k) gating.factors.push_back({i_at + k, g_at + k});
        out.emplace_back(std::move(gating));

        // [X' | S' | o | c_t | c_t]
        const std::size_t fc_at = pass + h;
        const std::size_t ig_at = fc_at + cell_in;
        DenseLayer cell = linear(pass + 3 * h, pass + 2 * h + cell_in);
        copy_rows(cell, 0, 0, pass + h);
        for (std::size_t k = 0; k < h; ++k) {
            for (std::size_t copy = 0; copy < 2; ++copy) {
                const std::size_t row = pass + h + copy * h + k;
                if (cell_in > 0) cell.weights(row, fc_at + k) = 1.0;
                cell.weights(row, ig_at + k) = 1.0;
            }
        }
        out.emplace_back(std::move(cell));
        out.emplace_back(mixed(pass + 2 * h, {{Activation::Tanh, h}}));

        // [X' | S' | h_t | c_t]
        ProductLayer emit;
        copy_factors(emit, 0, pass);
        for (std::size_t k = 0; k < h; ++k) emit.factors.push_back({pass + k, pass + 2 * h + k});
        if (!s.last()) copy_factors(emit, pass + h, h);
        out.emplace_back(std::move(emit));
    }
}

}  // namespace

UnrollResult unroll_rnn(const Model& model, std::size_t sequence_length) {
    if (!model.is_recurrent()) return {model, true};
    if (sequence_length != model.sequence_length()) {
        throw ContractError("unroll length " + std::to_string(sequence_length) +
                            " does not match the model's sequence length " +
                            std::to_string(model.sequence_length()));
    }

    std::vector<Layer> layers;
    for (std::size_t i = 0; i < model.layers().size(); ++i) {
        const Layer& layer = model.layers()[i];
        const std::size_t width = model.layer_input_width(i);
        if (const auto* r = std::get_if<RecurrentLayer>(&layer)) {
            unroll_recurrent(*r, width, sequence_length, layers);
        } else if (const auto* l = std::get_if<LstmLayer>(&layer)) {
            unroll_lstm(*l, width, sequence_length, layers);
        } else {
            layers.push_back(layer);
        }
    }
    return {Model(model.input_arity(), model.sequence_length(), model.labels(), std::move(layers)),
            false};
}

}  // namespace lipreach::nnkit
