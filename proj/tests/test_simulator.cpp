#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "relaynet/metrics.hpp"
#include "relaynet/simulator.hpp"
#include "support.hpp"

using namespace relaynet;
using relaynet::fixtures::rel_diff;

namespace {

constexpr InterferenceMode IC = InterferenceMode::Correlated;
constexpr InterferenceMode IU = InterferenceMode::Uncorrelated;

SimConfig quick(std::size_t trials, double radius = 20.0, std::uint64_t seed = 3) {
    SimConfig s;
    s.trials = trials;
    s.sim_radius = radius;
    s.seed = seed;
    return s;
}

} // namespace

TEST(Simulator, EmptyProcessConsumesNoRandomness) {
    RngStream a(1, 2), b(1, 2);
    EXPECT_TRUE(sample_ppp(0.0, 30.0, a).empty());
    EXPECT_EQ(a(), b());
    EXPECT_THROW(sample_ppp(-1.0, 30.0, a), DomainError);
}

TEST(Simulator, PoissonCountAndUniformRadius) {
    const double lambda = 0.1, radius = 30.0;
    const int draws = 10'000;
    double n = 0, n2 = 0, r2 = 0, r4 = 0, points = 0;
    for (int i = 0; i < draws; ++i) {
        RngStream rng(17, static_cast<std::uint32_t>(i));
        const auto pts = sample_ppp(lambda, radius, rng);
        n += pts.size();
        n2 += double(pts.size()) * pts.size();
        for (const Point2& x : pts) {
            const double s = x.norm_squared();
            ASSERT_LT(s, radius * radius);
            r2 += s;
            r4 += s * s;
            ++points;
        }
    }
    const double mean = n / draws, se = std::sqrt((n2 / draws - mean * mean) / draws);
    EXPECT_NEAR(mean, lambda * std::numbers::pi * radius * radius, 3 * se);
    const double mr2 = r2 / points, se2 = std::sqrt((r4 / points - mr2 * mr2) / points);
    EXPECT_NEAR(mr2, radius * radius / 2, 3 * se2);
}

TEST(Simulator, NestedSamplesAgreeInsideSmallerDisk) {
    const auto small = sample_nested_ppp(0.2, 12.0, 5, 7, detail::kRelayFieldLane);
    const auto large = sample_nested_ppp(0.2, 25.5, 5, 7, detail::kRelayFieldLane);
    std::vector<Point2> inner;
    for (const Point2& x : large)
        if (x.norm() < 12.0)
            inner.push_back(x);
    ASSERT_EQ(inner.size(), small.size());
    for (std::size_t i = 0; i < small.size(); ++i)
        EXPECT_TRUE(inner[i] == small[i]);
}

TEST(Simulator, TwoInterfererConditionalProducts) {
    const RelayScenario sc = reference_scenario();
    const DerivedParams d = derive_params(sc);
    InterfererField f;
    f.points = {{0.5, 0.8}, {-3.0, 2.0}};
    const double p = 0.35;
    double ic = p * std::exp(-d.noise_term_b), iu = ic;
    for (const Point2& x : f.points) {
        const double A = std::pow(distance(x, sc.relay), -4.0);  // a = b = 1
        const double B = std::pow(distance(x, sc.destination), -4.0);
        ic *= p / ((1 + A) * (1 + B)) + 1 - p;
        iu *= (p / (1 + A) + 1 - p) * (p / (1 + B) + 1 - p);
    }
    EXPECT_LT(rel_diff(conditional_success(f, sc, d, p, IC), ic), 1e-12);
    EXPECT_LT(rel_diff(conditional_success(f, sc, d, p, IU), iu), 1e-12);

    InterfererField split;
    split.independent = true;
    split.points = {f.points[0]};
    split.destination_points = {f.points[1]};
    const double A = std::pow(distance(f.points[0], sc.relay), -4.0);
    const double B = std::pow(distance(f.points[1], sc.destination), -4.0);
    const double want = p * std::exp(-d.noise_term_b) * (p / (1 + A) + 1 - p) * (p / (1 + B) + 1 - p);
    EXPECT_LT(rel_diff(conditional_success(split, sc, d, p, IU), want), 1e-12);
    EXPECT_THROW(conditional_success(split, sc, d, p, IC), DomainError);
}

TEST(Simulator, NoiseFreeNoInterferersAlwaysSucceeds) {
    RelayScenario sc = reference_scenario();
    sc.noise_psd = 0.0;
    const DerivedParams d = derive_params(sc);
    InterfererField empty;
    for (std::uint32_t k = 0; k < 200; ++k) {
        RngStream rng(1, 0, k);
        const SlotOutcome o = slot_success(empty, sc, d, 0.5, IC, rng);
        EXPECT_TRUE(o.sr_ok && o.rd_ok);
    }
}

TEST(Simulator, NoInterferersFullAccessMatchesNoiseOutage) {
    const RelayScenario sc = reference_scenario();
    const DerivedParams d = derive_params(sc);
    InterfererField empty;
    const int n = 100'000;
    int hits = 0;
    for (int k = 0; k < n; ++k) {
        RngStream rng(77, 0, static_cast<std::uint32_t>(k));
        hits += slot_success(empty, sc, d, 1.0, IC, rng).success();
    }
    const double q = fixtures::kExpMinusB;
    EXPECT_NEAR(hits / double(n), q, 3 * std::sqrt(q * (1 - q) / n));
}

TEST(Simulator, ModesIdenticalWithoutInterferers) {
    const RelayScenario sc = reference_scenario();
    const auto a = estimate_slots(sc, MacModel{0.5, 0.0, IC}, quick(300));
    const auto b = estimate_slots(sc, MacModel{0.5, 0.0, IU}, quick(300));
    EXPECT_EQ(a.end_to_end.mean, b.end_to_end.mean);
    EXPECT_EQ(a.link_sr.mean, b.link_sr.mean);
    EXPECT_EQ(a.link_rd.mean, b.link_rd.mean);
}

TEST(Simulator, NoInterferersSuccessAndDelay) {
    const RelayScenario sc = reference_scenario();
    const MacModel mac{0.5, 0.0, IC};
    const SimEstimate s = estimate_success(sc, mac, quick(10'000));
    EXPECT_NEAR(s.mean, fixtures::kSuccessNoInterference, 3 * s.std_error);
    const SimEstimate d = estimate_delay(sc, mac, quick(200));
    EXPECT_LT(rel_diff(d.mean, fixtures::kDelayNoInterference), 1e-13);
    EXPECT_EQ(d.std_error, 0.0);
}

TEST(Simulator, EmpiricalDelayIsGeometricOnFixedField) {
    const RelayScenario sc = reference_scenario();
    const DerivedParams d = derive_params(sc);
    InterfererField f;
    f.points = sample_nested_ppp(0.1, 15.0, 8, 0, detail::kRelayFieldLane);
    const double p = 0.5;
    const double want = 1.0 / conditional_success(f, sc, d, p, IC);
    const int reps = 100'000;
    double s = 0, s2 = 0;
    for (int i = 0; i < reps; ++i) {
        const double n = static_cast<double>(
            empirical_delay_sample(f, sc, d, p, IC, 123, static_cast<std::uint32_t>(i), 100'000));
        s += n;
        s2 += n * n;
    }
    const double mean = s / reps, se = std::sqrt((s2 / reps - mean * mean) / reps);
    EXPECT_NEAR(mean, want, 3 * se);
}

TEST(Simulator, EmpiricalAndSemiAnalyticDelayAgree) {
    const RelayScenario sc = reference_scenario();
    const MacModel mac{0.7, 0.05, IC};
    SimConfig semi = quick(4000);
    SimConfig emp = semi;
    emp.delay_estimator = DelayEstimator::Empirical;
    const auto a = estimate_delay(sc, mac, semi);
    const auto b = estimate_delay(sc, mac, emp);
    EXPECT_EQ(b.censored, 0u);
    EXPECT_NEAR(a.mean, b.mean, 3 * std::hypot(a.std_error, b.std_error));
}

TEST(Simulator, MatchesAnalyticAtReferencePoint) {
    const RelayScenario sc = reference_scenario();
    for (InterferenceMode mode : {IC, IU}) {
        const MacModel mac{0.5, 0.1, mode};
        const auto rep = evaluate_metrics(sc, mac, {}, SrLinkFormula::AlohaThinned);
        const auto s = estimate_slots(sc, mac, quick(4000, 20.0, 9));
        const auto d = estimate_delay(sc, mac, quick(4000, 20.0, 9));
        EXPECT_NEAR(s.end_to_end.mean, rep.success_prob, 3 * s.end_to_end.std_error) << to_string(mode);
        EXPECT_NEAR(s.link_sr.mean, rep.link_success_sr, 3 * s.link_sr.std_error) << to_string(mode);
        EXPECT_NEAR(s.link_rd.mean, rep.link_success_rd, 3 * s.link_rd.std_error) << to_string(mode);
        EXPECT_NEAR(d.mean, rep.mean_local_delay.slots(), 3 * d.std_error) << to_string(mode);
    }
}

TEST(Simulator, CorrelatedAtLeastUncorrelated) {
    const RelayScenario sc = reference_scenario();
    const auto ic = estimate_success(sc, MacModel{0.5, 0.1, IC}, quick(10'000));
    const auto iu = estimate_success(sc, MacModel{0.5, 0.1, IU}, quick(10'000));
    EXPECT_GE(ic.mean, iu.mean);
}

TEST(Simulator, SharedFieldUncorrelatedSitsBetweenTheModes) {
    // One field with independent per-receiver activity: correlated through
    // positions only, so it lands between the two analytic values.
    const RelayScenario sc = reference_scenario();
    SimConfig sim = quick(6000);
    sim.uncorrelated_sampling = UncorrelatedSampling::SharedField;
    const auto shared = estimate_success(sc, MacModel{0.5, 0.1, IU}, sim);
    const double ic = evaluate_metrics(sc, MacModel{0.5, 0.1, IC}).success_prob;
    const double iu = evaluate_metrics(sc, MacModel{0.5, 0.1, IU}).success_prob;
    EXPECT_GT(shared.mean, iu - 3 * shared.std_error);
    EXPECT_LT(shared.mean, ic + 3 * shared.std_error);
}

TEST(Simulator, RadiusDoublingWithinOneStandardError) {
    const RelayScenario sc = reference_scenario();
    const MacModel mac{0.5, 0.1, IC};
    const auto a = estimate_success(sc, mac, quick(2000, 30.0));
    const auto b = estimate_success(sc, mac, quick(2000, 60.0));
    EXPECT_LT(std::abs(a.mean - b.mean), a.std_error);
}

TEST(Simulator, DeterministicAcrossThreadCounts) {
    const RelayScenario sc = reference_scenario();
    for (InterferenceMode mode : {IC, IU}) {
        SimConfig s = quick(500);
        s.threads = 1;
        const auto a = estimate_slots(sc, MacModel{0.6, 0.1, mode}, s);
        const auto ad = estimate_delay(sc, MacModel{0.6, 0.1, mode}, s);
        s.threads = 3;
        const auto b = estimate_slots(sc, MacModel{0.6, 0.1, mode}, s);
        const auto bd = estimate_delay(sc, MacModel{0.6, 0.1, mode}, s);
        EXPECT_EQ(a.end_to_end.mean, b.end_to_end.mean);
        EXPECT_EQ(a.end_to_end.std_error, b.end_to_end.std_error);
        EXPECT_EQ(a.link_sr.mean, b.link_sr.mean);
        EXPECT_EQ(ad.mean, bd.mean);
        EXPECT_EQ(ad.std_error, bd.std_error);
    }
}

TEST(Simulator, ConfigValidation) {
    const RelayScenario sc = reference_scenario();
    EXPECT_THROW(quick(50).validate(sc), DomainError);
    EXPECT_THROW(quick(500, 5.0).validate(sc), DomainError);
    EXPECT_NO_THROW(quick(500, 6.0).validate(sc));
    EXPECT_THROW(estimate_delay(sc, MacModel{1.0, 0.1, IC}, quick(500)), DomainError);
    EXPECT_THROW(estimate_delay(sc, MacModel{0.0, 0.1, IC}, quick(500)), DomainError);
}
