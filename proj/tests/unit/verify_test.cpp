#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "lipreach/error.hpp"
#include "lipreach/oracle/grid.hpp"
#include "lipreach/verify/adversarial.hpp"
#include "lipreach/verify/radius.hpp"
#include "lipreach/verify/reach.hpp"
#include "lipreach/verify/safety.hpp"
#include "support/test_models.hpp"

namespace lipreach::verify {
namespace {

using perturb::Objective;
using perturb::PerturbationSpec;

PerturbationSpec spec(std::vector<double> anchor, std::vector<std::size_t> dims, double theta) {
    PerturbationSpec s;
    s.anchor = std::move(anchor);
    s.dims = std::move(dims);
    s.theta = theta;
    return s;
}

lipopt::SolverConfig eps(double e) {
    lipopt::SolverConfig c;
    c.epsilon = e;
    return c;
}

/// Crafted net with c_0 = x + y + 0.1 and c_1 = x + y: label 0 always wins,
/// yet min c_0 over a ball is below max c_1.
std::shared_ptr<const nnkit::Model> offset_model() {
    nnkit::DenseLayer d{nnkit::Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}), {0.1, 0.0},
                        nnkit::Activation::Identity};
    return std::make_shared<const nnkit::Model>(2, 1, testing::label_names(2), std::vector<nnkit::Layer>{d});
}

bool grid_has_flip(const nnkit::Model& m, const PerturbationSpec& s, std::size_t original, double step) {
    const auto box = s.box();
    const BoxFunction probe(box, [&](std::span<const double> free) {
        const auto out = m.forward(perturb::embed(s, box, free));
        return oracle::flips(out, original) ? 1.0 : 0.0;
    });
    return oracle::grid_extrema(probe, {step}).max_value > 0.0;
}

TEST(Reach, IdentityBox) {
    const auto r = reach(testing::identity_model(2), spec({0.4, 0.6}, {0}, 0.1), Objective::logit(0), eps(1e-3));
    EXPECT_NEAR(r.interval.lower, 0.3, 1e-3);
    EXPECT_NEAR(r.interval.upper, 0.5, 1e-3);
    EXPECT_TRUE(r.interval.converged());
    EXPECT_EQ(r.interval.diameter(), r.interval.upper - r.interval.lower);
    EXPECT_GT(r.interval.evaluations, 0u);
    EXPECT_FALSE(r.min_trace.negated);
    EXPECT_TRUE(r.max_trace.negated);
}

TEST(Reach, ZeroRadiusIsAPoint) {
    const auto m = testing::flip_model();
    const auto r = reach(m, spec({0.2}, {0}, 0.0), Objective::confidence(1), eps(1e-3));
    EXPECT_EQ(r.interval.lower, 0.2);
    EXPECT_EQ(r.interval.upper, 0.2);
    EXPECT_EQ(r.interval.diameter(), 0.0);
    EXPECT_EQ(r.interval.argmin, (nnkit::Vector{0.2}));
}

TEST(Reach, TanhFixtureAgainstGridOracle) {
    const auto m = testing::load_fixture("tanh_2_8_2.json");
    const PerturbationSpec s = spec({0.5, 0.5}, {0, 1}, 0.05);
    const auto cfg = eps(1e-3);
    const auto r = reach(m, s, Objective::logit(1), cfg).interval;
    ASSERT_TRUE(r.converged());
    const auto e = oracle::grid_extrema(perturb::make_box_function(m, s, Objective::logit(1)), {1e-3});
    EXPECT_LE(r.lower - r.tolerance, e.min_value);
    EXPECT_GE(r.upper + r.tolerance, e.max_value);
    // Oracle error: K * step / 2 per dimension with K bounded by the attained slope scale.
    const double oracle_error = 2.0 * 1e-3;
    EXPECT_LE(std::abs(r.diameter() - (e.max_value - e.min_value)), 2.0 * cfg.epsilon + oracle_error);
    EXPECT_EQ(m->logits(r.argmin)[1], r.attained_min);
    EXPECT_EQ(m->logits(r.argmax)[1], r.attained_max);
}

TEST(Reach, BudgetLeavesSidesUnconverged) {
    const auto m = testing::load_fixture("tanh_2_8_2.json");
    auto cfg = eps(1e-6);
    cfg.max_evals = 10;
    const auto r = reach(m, spec({0.5, 0.5}, {0, 1}, 0.1), Objective::logit(0), cfg).interval;
    EXPECT_FALSE(r.lower_converged);
    EXPECT_FALSE(r.upper_converged);
    EXPECT_EQ(r.evaluations, 20u);
}

TEST(Safety, IntervalModeSafeExample) {
    const auto v = check_safety(testing::flip_model(), spec({0.2}, {0}, 0.2), eps(1e-3), SafetyMode::Interval);
    EXPECT_EQ(v.verdict, Verdict::Safe);
    ASSERT_TRUE(v.original);
    EXPECT_NEAR(v.original->lower, 0.6, 1e-3);
    EXPECT_NEAR(v.targets.at(0).bound.upper, 0.4, 1e-3);
    EXPECT_FALSE(v.witness);
}

TEST(Safety, DifferenceModeUnsafeExample) {
    const auto m = testing::flip_model();
    const auto v = check_safety(m, spec({0.2}, {0}, 0.4), eps(1e-3), SafetyMode::Difference);
    EXPECT_EQ(v.verdict, Verdict::Unsafe);
    ASSERT_TRUE(v.witness);
    EXPECT_NEAR((*v.witness)[0], 0.6, 1e-12);
    EXPECT_NEAR(v.targets.at(0).bound.attained_min, -0.2, 1e-12);
    EXPECT_TRUE(oracle::flips(m->forward(*v.witness), 0));
    EXPECT_EQ(v.flipped_to, std::optional<std::size_t>(1));
}

TEST(Safety, OverlapWithoutFlipSeparatesTheModes) {
    const auto m = offset_model();
    const PerturbationSpec s = spec({0.5, 0.5}, {0, 1}, 0.2);
    ASSERT_FALSE(grid_has_flip(*m, s, 0, 1e-2));
    const auto interval = check_safety(m, s, eps(1e-3), SafetyMode::Interval);
    const auto difference = check_safety(m, s, eps(1e-3), SafetyMode::Difference);
    EXPECT_NE(interval.verdict, Verdict::Safe);
    EXPECT_LT(interval.margin, 0.0);
    EXPECT_EQ(difference.verdict, Verdict::Safe);
}

TEST(Safety, TiedAnchorIsAPreconditionError) {
    EXPECT_THROW(check_safety(testing::flip_model(), spec({0.5}, {0}, 0.1), eps(1e-3), SafetyMode::Difference),
                 ContractError);
}

TEST(Safety, ModeNamesRoundTrip) {
    EXPECT_EQ(parse_safety_mode(to_string(SafetyMode::Interval)), SafetyMode::Interval);
    EXPECT_EQ(parse_safety_mode(to_string(SafetyMode::Difference)), SafetyMode::Difference);
    EXPECT_THROW(parse_safety_mode("box"), ContractError);
}

TEST(Safety, DifferenceVerdictsAreSoundOnRandomNets) {
    int safe = 0, unsafe = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto m = testing::random_fnn(100 + seed, 2, 8, 3, seed % 2 ? nnkit::Activation::Tanh
                                                                       : nnkit::Activation::Relu);
        const PerturbationSpec s = spec({0.5, 0.4}, {0, 1}, 0.02 + 0.003 * static_cast<double>(seed));
        const auto out = m->forward(s.anchor);
        if (!nnkit::unique_argmax(out)) continue;
        const std::size_t orig = nnkit::argmax(out);
        const auto v = check_safety(m, s, eps(1e-3), SafetyMode::Difference);
        if (v.verdict == Verdict::Safe) {
            ++safe;
            EXPECT_FALSE(grid_has_flip(*m, s, orig, 2e-3)) << "seed " << seed;
        } else if (v.verdict == Verdict::Unsafe) {
            ++unsafe;
            ASSERT_TRUE(v.witness);
            EXPECT_TRUE(oracle::flips(m->forward(*v.witness), orig)) << "seed " << seed;
        }
        const auto iv = check_safety(m, s, eps(1e-3), SafetyMode::Interval);
        if (iv.verdict == Verdict::Safe) {
            EXPECT_EQ(v.verdict, Verdict::Safe) << "seed " << seed;
        }
        if (iv.verdict == Verdict::Unsafe) {
            EXPECT_TRUE(oracle::flips(m->forward(*iv.witness), orig)) << "seed " << seed;
        }
    }
    EXPECT_GT(safe, 0);
    EXPECT_GT(unsafe, 0);
}

void expect_report_invariants(const RadiusReport& r) {
    for (const auto& s : r.searches) {
        double max_safe = -1.0, min_unsafe = 2.0;
        for (const auto& p : s.history) {
            if (p.verdict == Verdict::Safe) max_safe = std::max(max_safe, p.theta);
            if (p.verdict == Verdict::Unsafe) min_unsafe = std::min(min_unsafe, p.theta);
        }
        EXPECT_LT(max_safe, min_unsafe);
        if (max_safe >= 0.0) {
            EXPECT_GE(s.r, max_safe);
        }
        if (min_unsafe <= 1.0) {
            EXPECT_LE(s.r, min_unsafe);
        }
    }
}

TEST(Radius, AnalyticFlipBothModes) {
    for (SafetyMode mode : {SafetyMode::Difference, SafetyMode::Interval}) {
        RadiusOptions opt;
        opt.mode = mode;
        const double e = mode == SafetyMode::Interval ? 1e-4 : 1e-3;
        const auto r = max_safe_radius(testing::flip_model(), spec({0.2}, {0}, 0.0), eps(e), opt);
        EXPECT_NEAR(r.r, 0.3, 1e-3) << to_string(mode);
        EXPECT_LE(r.iterations(), 30u);
        EXPECT_EQ(r.original_label, 0u);
        EXPECT_EQ(r.determining_target, 1u);
        expect_report_invariants(r);
    }
}

TEST(Radius, ConstantModelIsNeverUnsafe) {
    const auto r = max_safe_radius(testing::constant_model(1, {0.3, 0.7}), spec({0.5}, {0}, 0.0), eps(1e-3));
    EXPECT_EQ(r.r, 1.0);
    EXPECT_EQ(r.searches.at(0).stop, StopReason::NeverUnsafe);
    EXPECT_FALSE(r.notes.empty());
    EXPECT_THROW(ground_truth_adversarial(r), NotFoundError);
}

TEST(Radius, TanhFixtureAgainstOracle) {
    const auto m = testing::load_fixture("tanh_2_8_2.json");
    const PerturbationSpec s = spec({0.5, 0.5}, {0}, 0.0);
    const auto oracle_r = oracle::grid_flip_radius(*m, s, {1e-4}, 1e-4);
    ASSERT_TRUE(oracle_r);
    const auto r = max_safe_radius(m, s, eps(1e-4));
    EXPECT_NEAR(r.r, oracle_r->theta, 2e-3);
    expect_report_invariants(r);
    const auto adv = ground_truth_adversarial(r);
    const auto out = m->forward(adv.input);
    EXPECT_GE(out[adv.adversarial_label], out[r.original_label]);
    EXPECT_TRUE(oracle::flips(out, r.original_label));
    EXPECT_EQ(adv.distortion, perturb::linf_distance(adv.input, s.anchor));
}

TEST(Radius, TighterToleranceNeverCertifiesLess) {
    const double e1 = 1e-2, e2 = 1e-3;
    const auto m = testing::flip_model();
    for (SafetyMode mode : {SafetyMode::Difference, SafetyMode::Interval}) {
        RadiusOptions opt;
        opt.mode = mode;
        const auto r1 = max_safe_radius(m, spec({0.2}, {0}, 0.0), eps(e1), opt);
        const auto r2 = max_safe_radius(m, spec({0.2}, {0}, 0.0), eps(e2), opt);
        EXPECT_GE(r2.r, r1.r - e1);
    }
}

TEST(Radius, AllTargetsTakeTheSmallest) {
    const auto m = testing::random_fnn(31, 2, 8, 3, nnkit::Activation::Tanh);
    const PerturbationSpec s = spec({0.5, 0.5}, {0, 1}, 0.0);
    const std::size_t orig = anchor_label(*m, s.anchor);
    RadiusOptions opt;
    opt.max_iters = 12;
    const auto all = max_safe_radius(m, s, eps(1e-3), opt);
    ASSERT_EQ(all.searches.size(), 2u);
    for (const auto& search : all.searches) {
        EXPECT_NE(search.target, orig);
        EXPECT_GE(search.r, all.r);
    }
    for (const auto& search : all.searches) {
        if (search.target == all.determining_target) {
            EXPECT_EQ(search.r, all.r);
        }
    }
}

TEST(Radius, DeclaredLabelMismatchOnlyNotes) {
    RadiusOptions opt;
    opt.declared_label = 1;
    const auto r = max_safe_radius(testing::flip_model(), spec({0.2}, {0}, 0.0), eps(1e-3), opt);
    ASSERT_FALSE(r.notes.empty());
    EXPECT_EQ(r.original_label, 0u);
    EXPECT_NEAR(r.r, 0.3, 1e-3);
}

TEST(Radius, OptionsValidated) {
    RadiusOptions opt;
    opt.max_iters = 0;
    EXPECT_THROW(max_safe_radius(testing::flip_model(), spec({0.2}, {0}, 0.0), eps(1e-3), opt), ContractError);
    opt = RadiusOptions{};
    opt.target = 0;
    EXPECT_THROW(max_safe_radius(testing::flip_model(), spec({0.2}, {0}, 0.0), eps(1e-3), opt), ContractError);
}

TEST(Radius, UnderestimatedLipschitzGivesFalseRadius) {
    RadiusOptions opt;
    opt.mode = SafetyMode::Interval;
    const auto m = testing::flip_model();
    const auto bad = max_safe_radius(m, spec({0.2}, {0}, 0.0), lipopt::SolverConfig::fixed_lipschitz(0.1, 1e-4), opt);
    EXPECT_GT(bad.r, 0.3 + 1e-3);
    for (double k : {1.0, 2.0, 5.0}) {
        const auto good = max_safe_radius(m, spec({0.2}, {0}, 0.0), lipopt::SolverConfig::fixed_lipschitz(k, 1e-4), opt);
        EXPECT_NEAR(good.r, 0.3, 1e-3) << "K=" << k;
    }
}

TEST(Adversarial, AnalyticWitness) {
    const auto r = max_safe_radius(testing::flip_model(), spec({0.2}, {0}, 0.0), eps(1e-3));
    const auto adv = ground_truth_adversarial(r);
    EXPECT_NEAR(adv.input[0], 0.5, 2e-3);
    EXPECT_NEAR(adv.distortion, 0.3, 2e-3);
    EXPECT_EQ(adv.distortion, perturb::linf_distance(adv.input, r.anchor));
    EXPECT_EQ(adv.original_label, 0u);
    EXPECT_EQ(adv.adversarial_label, 1u);
    EXPECT_GT(adv.adversarial_confidence, adv.original_confidence);
    EXPECT_EQ(adv.output, testing::flip_model()->forward(adv.input));
}

}  // namespace
}  // namespace lipreach::verify
