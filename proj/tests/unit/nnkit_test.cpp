#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lipreach/error.hpp"
#include "lipreach/nnkit/activation.hpp"
#include "lipreach/nnkit/matrix.hpp"
#include "lipreach/nnkit/model.hpp"
#include "lipreach/nnkit/model_io.hpp"
#include "lipreach/nnkit/unroll.hpp"
#include "support/test_models.hpp"

namespace lipreach::nnkit {
namespace {

using testing::data_dir;

Vector uniform(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Vector v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

double max_gap(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::string strip_whitespace(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    }
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(Matrix, RaggedRowsRejected) {
    EXPECT_THROW(Matrix::from_rows({{1.0, 2.0}, {3.0}}), ContractError);
}

TEST(Matrix, AccumulateAddsRowProducts) {
    const Matrix m = Matrix::from_rows({{1.0, 2.0}, {-1.0, 0.5}});
    Vector out{10.0, 0.0};
    m.accumulate(Vector{3.0, 4.0}, out);
    EXPECT_EQ(out[0], 21.0);
    EXPECT_EQ(out[1], -1.0);
}

TEST(Activation, PointValues) {
    EXPECT_EQ(apply(Activation::Relu, -2.0), 0.0);
    EXPECT_EQ(apply(Activation::Relu, 2.0), 2.0);
    EXPECT_EQ(apply(Activation::Sigmoid, 0.0), 0.5);
    EXPECT_EQ(apply(Activation::Tanh, 0.0), 0.0);
    EXPECT_EQ(apply(Activation::Identity, -3.5), -3.5);
    EXPECT_TRUE(std::isfinite(apply(Activation::Sigmoid, -1000.0)));
    EXPECT_NEAR(apply(Activation::Sigmoid, 1000.0), 1.0, 1e-15);
}

TEST(Activation, ParseNames) {
    EXPECT_EQ(parse_activation("linear"), Activation::Identity);
    EXPECT_EQ(parse_activation("tanh"), Activation::Tanh);
    EXPECT_THROW(parse_activation("swish"), ContractError);
}

TEST(Activation, SoftmaxIsADistribution) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> dist(0.0, 30.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vector v(7);
        for (double& x : v) x = dist(rng);
        softmax_inplace(v);
        double sum = 0.0;
        for (double x : v) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 1.0);
            sum += x;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    Vector moderate{0.1, -0.3, 0.7};
    softmax_inplace(moderate);
    for (double x : moderate) {
        EXPECT_GT(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(Model, WidthMismatchNamesTheLayer) {
    DenseLayer a{Matrix(3, 2), Vector(3, 0.0), Activation::Tanh};
    DenseLayer b{Matrix(2, 4), Vector(2, 0.0), Activation::Identity};
    try {
        Model m(2, 1, testing::label_names(2), {a, b});
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.layer(), 1u);
    }
}

TEST(Model, NonFiniteWeightRejected) {
    DenseLayer a{Matrix::from_rows({{std::nan("")}}), {0.0}, Activation::Identity};
    EXPECT_THROW(Model(1, 1, testing::label_names(1), {a}), ValidationError);
}

TEST(Model, OutputWidthMustMatchLabels) {
    DenseLayer a{Matrix(2, 1), Vector(2, 0.0), Activation::Identity};
    EXPECT_THROW(Model(1, 1, testing::label_names(3), {a}), ValidationError);
}

TEST(Model, ForwardIsDeterministic) {
    const auto m = testing::random_fnn(5, 4, 16, 3, Activation::Tanh);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const Vector x = uniform(rng, 4);
        EXPECT_EQ(m->forward(x), m->forward(x));
    }
}

TEST(Model, ForwardChecksItsInput) {
    const auto m = testing::flip_model();
    EXPECT_THROW(m->forward(Vector{0.1, 0.2}), ContractError);
    EXPECT_THROW(m->forward(Vector{std::nan("")}), ContractError);
    EXPECT_EQ(m->forward(Vector{0.2}), (Vector{0.8, 0.2}));
}

TEST(Model, LogitsStripTrailingSoftmax) {
    const auto m = testing::load_fixture("rnn_4x3_h8.json");
    ASSERT_TRUE(m->ends_with_softmax());
    const Vector x(12, 0.25);
    Vector logits = m->logits(x);
    softmax_inplace(logits);
    EXPECT_LT(max_gap(logits, m->forward(x)), 1e-15);
}

TEST(Model, UnknownLabelIsNamed) {
    const auto m = testing::flip_model();
    EXPECT_EQ(m->label_index("right"), 1u);
    try {
        m->label_index("up");
        FAIL();
    } catch (const ContractError& e) {
        EXPECT_NE(std::string(e.what()).find("up"), std::string::npos);
    }
}

TEST(Model, ArgmaxPrefersLowestIndexOnTies) {
    EXPECT_EQ(argmax(Vector{0.2, 0.5, 0.5}), 1u);
    EXPECT_FALSE(unique_argmax(Vector{0.2, 0.5, 0.5}));
    EXPECT_TRUE(unique_argmax(Vector{0.2, 0.5, 0.4}));
}

TEST(ModelIo, GoldenOutputsMatchIndependentForward) {
    for (const char* name : {"tanh_2_8_2", "rnn_4x3_h8", "lstm_8x8_h8"}) {
        const auto golden = nlohmann::json::parse(read_file(data_dir() / (std::string(name) + ".golden.json")));
        const Model m = load_model(data_dir() / golden["model"].get<std::string>());
        const auto inputs = golden["inputs"].get<std::vector<Vector>>();
        const auto outputs = golden["outputs"].get<std::vector<Vector>>();
        ASSERT_GE(inputs.size(), 10u);
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            EXPECT_LE(max_gap(m.forward(inputs[i]), outputs[i]), 1e-5) << name << " sample " << i;
        }
    }
}

TEST(ModelIo, SaveOfLoadReproducesTheFile) {
    for (const char* name : {"tanh_2_8_2.json", "rnn_4x3_h8.json", "lstm_8x8_h8.json"}) {
        const std::string original = read_file(data_dir() / name);
        const std::string again = serialize_model(load_model(data_dir() / name));
        const std::string a = strip_whitespace(again);
        const std::string b = strip_whitespace(original);
        const auto diff = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
        EXPECT_TRUE(diff.first == a.end() && diff.second == b.end())
            << name << " differs at offset " << (diff.first - a.begin()) << ": "
            << std::string(diff.first, std::min(diff.first + 40, a.end()));
    }
}

TEST(ModelIo, RoundTripIsExact) {
    const auto m = testing::random_sequence_model(4, true, 3, 2, 3, 2, true);
    const Model back = parse_model(serialize_model(*m));
    EXPECT_EQ(back.layers(), m->layers());
    EXPECT_EQ(serialize_model(back), serialize_model(*m));
}

TEST(ModelIo, ParseErrorNamesTheField) {
    const char* doc = R"({"format_version":1,"input_arity":1,"sequence_length":1,"labels":["a"],
        "layers":[{"kind":"dense","b":[0]}]})";
    try {
        parse_model(doc);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "$.layers[0].W");
    }
}

TEST(ModelIo, WrongVersionRejected) {
    const char* doc = R"({"format_version":2,"input_arity":1,"sequence_length":1,"labels":["a"],"layers":[]})";
    EXPECT_THROW(parse_model(doc), ParseError);
}

TEST(ModelIo, InconsistentDimensionsAreValidationErrors) {
    const char* doc = R"({"format_version":1,"input_arity":2,"sequence_length":1,"labels":["a"],
        "layers":[{"kind":"dense","activation":"identity","W":[[1]],"b":[0]}]})";
    EXPECT_THROW(parse_model(doc), ValidationError);
}

TEST(Unroll, VanillaSingleUnit) {
    std::mt19937_64 rng(17);
    nnkit::RecurrentLayer r = testing::random_recurrent(rng, 1, 1, false);
    const Model m(3, 3, testing::label_names(1), {r});
    const UnrollResult u = unroll_rnn(m, 3);
    EXPECT_FALSE(u.already_feedforward);
    EXPECT_FALSE(u.model.is_recurrent());
    EXPECT_EQ(u.model.layers().size(), 6u);
    for (int i = 0; i < 100; ++i) {
        const Vector x = uniform(rng, 3);
        EXPECT_LE(max_gap(m.forward(x), u.model.forward(x)), 1e-9);
    }
}

TEST(Unroll, ZeroWeightCellIsConstant) {
    nnkit::RecurrentLayer r;
    r.input_weights = Matrix(1, 1);
    r.hidden_weights = Matrix(1, 1);
    r.bias = {0.5};
    const Model m(2, 2, testing::label_names(1), {r});
    const Model u = unroll_rnn(m, 2).model;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(u.forward(uniform(rng, 2))[0], std::tanh(0.5));
}

TEST(Unroll, RandomLstmMatches) {
    const auto m = testing::random_sequence_model(21, true, 4, 1, 2, 2);
    const Model u = unroll_rnn(*m, 4).model;
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const Vector x = uniform(rng, 4);
        EXPECT_LE(max_gap(m->forward(x), u.forward(x)), 1e-9);
    }
}

TEST(Unroll, StackedSequenceLayers) {
    std::mt19937_64 rng(8);
    std::vector<Layer> layers;
    layers.push_back(testing::random_recurrent(rng, 2, 3, true));
    layers.push_back(testing::random_lstm_layer(rng, 3, 4, false));
    layers.push_back(DenseLayer{testing::random_matrix(rng, 2, 4, 1.0), Vector(2, 0.0), Activation::Identity});
    layers.push_back(SoftmaxLayer{});
    const Model m(10, 5, testing::label_names(2), layers);
    const Model u = unroll_rnn(m, 5).model;
    EXPECT_FALSE(u.is_recurrent());
    for (int i = 0; i < 50; ++i) {
        const Vector x = uniform(rng, 10);
        EXPECT_LE(max_gap(m.forward(x), u.forward(x)), 1e-9);
    }
}

TEST(Unroll, FixtureLstmMatches) {
    const auto m = testing::load_fixture("lstm_8x8_h8.json");
    const Model u = unroll_rnn(*m, 8).model;
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const Vector x = uniform(rng, 64);
        EXPECT_LE(max_gap(m->forward(x), u.forward(x)), 1e-9);
    }
}

TEST(Unroll, UnrolledModelSurvivesSerialization) {
    const auto m = testing::random_sequence_model(6, true, 3, 2, 3, 2);
    const Model u = unroll_rnn(*m, 3).model;
    const Model back = parse_model(serialize_model(u));
    const Vector x(6, 0.3);
    EXPECT_EQ(back.forward(x), u.forward(x));
}

TEST(Unroll, FeedforwardModelIsReturnedUnchanged) {
    const auto m = testing::flip_model();
    const UnrollResult u = unroll_rnn(*m, 1);
    EXPECT_TRUE(u.already_feedforward);
    EXPECT_EQ(u.model.layers(), m->layers());
}

TEST(Unroll, SequenceLengthMustMatch) {
    const auto m = testing::random_sequence_model(1, false, 4, 1, 2, 2);
    EXPECT_THROW(unroll_rnn(*m, 3), ContractError);
}

}  // namespace
}  // namespace lipreach::nnkit
