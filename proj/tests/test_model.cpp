#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "relaynet/model.hpp"
#include "support.hpp"

using namespace relaynet;

TEST(Model, ReferenceDerivedParams) {
    const DerivedParams d = derive_params(reference_scenario());
    EXPECT_DOUBLE_EQ(d.p_hat_s, 1.0);
    EXPECT_DOUBLE_EQ(d.p_hat_r, 1.0);
    EXPECT_NEAR(d.n_hat, std::pow(10.0, -0.5), 1e-16);
    EXPECT_DOUBLE_EQ(d.theta_sr, 1.0);
    EXPECT_DOUBLE_EQ(d.theta_rd, 1.0);
    EXPECT_NEAR(d.noise_term_b, fixtures::kB, 1e-15);
    EXPECT_DOUBLE_EQ(d.delta, 0.5);
    EXPECT_NEAR(d.c_delta, std::numbers::pi / 2, 1e-15);
}

TEST(Model, ThetaScalesWithDistancePowers) {
    RelayScenario s = reference_scenario(0.5);
    s.sinr_threshold = 2.0;
    const DerivedParams d = derive_params(s);
    EXPECT_NEAR(d.theta_sr, 2.0 * std::pow(1.5, 4), 1e-13);
    EXPECT_NEAR(d.theta_rd, 2.0 * std::pow(0.5, 4), 1e-15);
}

TEST(Model, NoiseTermSymmetricUnderRelayMirror) {
    // With equal powers the two hops swap under r_x -> 2 - r_x.
    for (double x : {0.2, 0.6, 0.9}) {
        const double b1 = derive_params(reference_scenario(x)).noise_term_b;
        const double b2 = derive_params(reference_scenario(2.0 - x)).noise_term_b;
        EXPECT_NEAR(b1, b2, 1e-14 * b1);
    }
}

TEST(Model, InverseSinc) {
    EXPECT_NEAR(inverse_sinc(0.5), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(inverse_sinc(1e-8), 1.0, 1e-12);
    EXPECT_THROW(inverse_sinc(0.0), DomainError);
    EXPECT_THROW(inverse_sinc(1.0), DomainError);
}

TEST(Model, PathLoss) {
    EXPECT_DOUBLE_EQ(path_loss({0, 0}, {2, 0}, 4.0), 1.0 / 16.0);
    EXPECT_THROW(path_loss({1, 1}, {1, 1}, 4.0), DomainError);
    EXPECT_THROW(path_loss({0, 0}, {1, 0}, 2.0), DomainError);
}

TEST(Model, ScenarioValidation) {
    RelayScenario s = reference_scenario();
    s.relay = s.destination;
    EXPECT_THROW(s.validate(), DomainError);
    s = reference_scenario();
    s.relay = s.source;
    EXPECT_THROW(s.validate(), DomainError);
    s = reference_scenario();
    s.path_loss_exp = 2.0;
    EXPECT_THROW(s.validate(), DomainError);
    s = reference_scenario();
    s.sinr_threshold = 0.0;
    EXPECT_THROW(s.validate(), DomainError);
    s = reference_scenario();
    s.power_interferer = -1.0;
    EXPECT_THROW(s.validate(), DomainError);
    s = reference_scenario();
    s.noise_psd = 0.0;
    EXPECT_NO_THROW(s.validate());
}

TEST(Model, MacValidation) {
    EXPECT_THROW((MacModel{0.0, 0.1}.validate()), DomainError);
    EXPECT_THROW((MacModel{1.5, 0.1}.validate()), DomainError);
    EXPECT_THROW((MacModel{0.5, -0.1}.validate()), DomainError);
    EXPECT_NO_THROW((MacModel{1.0, 0.0}.validate()));
}

TEST(Model, ModeNames) {
    EXPECT_STREQ(to_string(InterferenceMode::Correlated), "IC");
    EXPECT_STREQ(to_string(InterferenceMode::Uncorrelated), "IU");
}
