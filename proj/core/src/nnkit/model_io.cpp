#include "lipreach/nnkit/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lipreach/error.hpp"

namespace lipreach::nnkit {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "." + key, "missing field");
    return *it;
}

std::size_t read_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ParseError(path, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

double read_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path, "expected a number");
    return v.get<double>();
}

Vector read_vector(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path, "expected a 1-D array of numbers");
    Vector out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(read_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Matrix read_matrix(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path, "expected a 2-D array of numbers");
    std::vector<std::vector<double>> rows;
    rows.reserve(v.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
        rows.push_back(read_vector(v[r], path + "[" + std::to_string(r) + "]"));
        if (rows[r].size() != rows.front().size()) {
            throw ParseError(path + "[" + std::to_string(r) + "]", "ragged matrix row");
        }
    }
    return Matrix::from_rows(rows);
}

Activation read_activation(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path, "expected an activation name");
    try {
        return parse_activation(v.get<std::string>());
    } catch (const ContractError& e) {
        throw ParseError(path, e.what());
    }
}

bool read_flag(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) return false;
    if (!it->is_boolean()) throw ParseError(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

LstmLayer::Gate read_gate(const json& obj, char tag, const std::string& path) {
    const std::string w = std::string("W_") + tag;
    const std::string u = std::string("U_") + tag;
    const std::string b = std::string("b_") + tag;
    return {read_matrix(field(obj, w, path), path + "." + w),
            read_matrix(field(obj, u, path), path + "." + u),
            read_vector(field(obj, b, path), path + "." + b)};
}

Layer read_layer(const json& obj, const std::string& path) {
    const json& kind_v = field(obj, "kind", path);
    if (!kind_v.is_string()) throw ParseError(path + ".kind", "expected a string");
    const std::string kind = kind_v.get<std::string>();

    if (kind == "dense") {
        DenseLayer d;
        d.weights = read_matrix(field(obj, "W", path), path + ".W");
        d.bias = read_vector(field(obj, "b", path), path + ".b");
        if (obj.contains("activation")) {
            d.activation = read_activation(obj["activation"], path + ".activation");
        }
        return d;
    }
    if (kind == "activation") {
        ActivationLayer a;
        if (obj.contains("activations")) {
            const json& list = obj["activations"];
            if (!list.is_array()) throw ParseError(path + ".activations", "expected an array");
            for (std::size_t i = 0; i < list.size(); ++i) {
                a.activations.push_back(
                    read_activation(list[i], path + ".activations[" + std::to_string(i) + "]"));
            }
        } else {
            a.activations.push_back(
                read_activation(field(obj, "activation", path), path + ".activation"));
        }
        return a;
    }
    if (kind == "softmax") return SoftmaxLayer{};
    if (kind == "recurrent") {
        RecurrentLayer r;
        r.input_weights = read_matrix(field(obj, "W_x", path), path + ".W_x");
        r.hidden_weights = read_matrix(field(obj, "W_h", path), path + ".W_h");
        r.bias = read_vector(field(obj, "b", path), path + ".b");
        if (obj.contains("activation")) {
            r.activation = read_activation(obj["activation"], path + ".activation");
        }
        r.return_sequences = read_flag(obj, "return_sequences", path);
        return r;
    }
    if (kind == "lstm") {
        LstmLayer l;
        l.input = read_gate(obj, 'i', path);
        l.forget = read_gate(obj, 'f', path);
        l.output = read_gate(obj, 'o', path);
        l.cell = read_gate(obj, 'c', path);
        l.return_sequences = read_flag(obj, "return_sequences", path);
        return l;
    }
    if (kind == "product") {
        ProductLayer p;
        const json& list = field(obj, "factors", path);
        if (!list.is_array()) throw ParseError(path + ".factors", "expected an array");
        for (std::size_t j = 0; j < list.size(); ++j) {
            const std::string fp = path + ".factors[" + std::to_string(j) + "]";
            if (!list[j].is_array()) throw ParseError(fp, "expected an array of indices");
            std::vector<std::size_t> f;
            for (std::size_t k = 0; k < list[j].size(); ++k) {
                f.push_back(read_count(list[j][k], fp + "[" + std::to_string(k) + "]"));
            }
            p.factors.push_back(std::move(f));
        }
        return p;
    }
    throw ParseError(path + ".kind", "unsupported layer kind '" + kind + "'");
}

ordered_json matrix_json(const Matrix& m) { return m.to_rows(); }

ordered_json layer_json(const Layer& layer) {
    ordered_json out;
    out["kind"] = std::string(kind_name(layer));
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
        out["activation"] = std::string(to_string(d->activation));
        out["W"] = matrix_json(d->weights);
        out["b"] = d->bias;
    } else if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
        if (a->broadcast()) {
            out["activation"] = std::string(to_string(a->activations.front()));
        } else {
            ordered_json list = ordered_json::array();
            for (Activation act : a->activations) list.push_back(std::string(to_string(act)));
            out["activations"] = std::move(list);
        }
    } else if (const auto* r = std::get_if<RecurrentLayer>(&layer)) {
        out["activation"] = std::string(to_string(r->activation));
        out["return_sequences"] = r->return_sequences;
        out["W_x"] = matrix_json(r->input_weights);
        out["W_h"] = matrix_json(r->hidden_weights);
        out["b"] = r->bias;
    } else if (const auto* l = std::get_if<LstmLayer>(&layer)) {
        out["return_sequences"] = l->return_sequences;
        const std::pair<const LstmLayer::Gate*, char> gates[] = {
            {&l->input, 'i'}, {&l->forget, 'f'}, {&l->output, 'o'}, {&l->cell, 'c'}};
        for (const auto& [g, tag] : gates) {
            out[std::string("W_") + tag] = matrix_json(g->input_weights);
            out[std::string("U_") + tag] = matrix_json(g->hidden_weights);
            out[std::string("b_") + tag] = g->bias;
        }
    } else if (const auto* p = std::get_if<ProductLayer>(&layer)) {
        out["factors"] = p->factors;
    }
    return out;
}

void append_number(double v, std::string& out) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    const std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));
    out += text;
    if (text.find_first_of(".e") == std::string_view::npos) out += ".0";
}

// Same layout as ordered_json::dump, but floats are printed in their
// shortest round-trip form.
void write(const ordered_json& j, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    const char* colon = indent < 0 ? ":" : ": ";
    if (j.is_number_float()) {
        append_number(j.get<double>(), out);
    } else if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += ordered_json(key).dump();
            out += colon;
            write(value, indent, depth + 1, out);
        }
        newline(depth);
        out += '}';
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ',';
            newline(depth + 1);
            write(j[i], indent, depth + 1, out);
        }
        newline(depth);
        out += ']';
    } else {
        out += j.dump();
    }
}

}  // namespace

Model parse_model(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("<document>", e.what());
    }
    const std::string root = "$";
    const json& version = field(doc, "format_version", root);
    if (!version.is_number_integer() || version.get<int>() != kWeightFormatVersion) {
        throw ParseError("$.format_version",
                         "unsupported format version (expected " +
                             std::to_string(kWeightFormatVersion) + ")");
    }
    const std::size_t arity = read_count(field(doc, "input_arity", root), "$.input_arity");
    const std::size_t seq = read_count(field(doc, "sequence_length", root), "$.sequence_length");

    const json& labels_v = field(doc, "labels", root);
    if (!labels_v.is_array()) throw ParseError("$.labels", "expected an array of strings");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < labels_v.size(); ++i) {
        if (!labels_v[i].is_string()) {
            throw ParseError("$.labels[" + std::to_string(i) + "]", "expected a string");
        }
        labels.push_back(labels_v[i].get<std::string>());
    }

    const json& layers_v = field(doc, "layers", root);
    if (!layers_v.is_array()) throw ParseError("$.layers", "expected an array");
    std::vector<Layer> layers;
    for (std::size_t i = 0; i < layers_v.size(); ++i) {
        layers.push_back(read_layer(layers_v[i], "$.layers[" + std::to_string(i) + "]"));
    }
    return Model(arity, seq, std::move(labels), std::move(layers));
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open weight file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

std::string serialize_model(const Model& model, int indent) {
    ordered_json doc;
    doc["format_version"] = kWeightFormatVersion;
    doc["input_arity"] = model.input_arity();
    doc["sequence_length"] = model.sequence_length();
    doc["labels"] = model.labels();
    ordered_json layers = ordered_json::array();
    for (const Layer& l : model.layers()) layers.push_back(layer_json(l));
    doc["layers"] = std::move(layers);
    std::string out;
    write(doc, indent, 0, out);
    return out + "\n";
}

void save_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write weight file " + path.string());
    out << serialize_model(model);
}

}  // namespace lipreach::nnkit
