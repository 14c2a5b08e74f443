// Analytic measures at the reference relay placement, a quick Monte Carlo
// check of the correlated success probability, and the optimal p.

#include <cstdio>

#include "relaynet/relaynet.hpp"

int main() {
    using namespace relaynet;
    const RelayScenario scenario = reference_scenario();
    const double density = 0.1;

    for (InterferenceMode mode : {InterferenceMode::Correlated, InterferenceMode::Uncorrelated}) {
        const MetricReport r = evaluate_metrics(scenario, MacModel{0.5, density, mode});
        std::printf("%s  P(C)=%.5f  D=%.4f slots  U=%.5f\n", to_string(mode), r.success_prob,
                    r.mean_local_delay.slots(), r.utility);
    }

    SimConfig sim;
    sim.trials = 2000;
    const SimEstimate est =
        estimate_success(scenario, MacModel{0.5, density, InterferenceMode::Correlated}, sim);
    std::printf("simulated IC P(C)=%.5f +- %.5f\n", est.mean, est.std_error);

    OptimizerConfig config;
    for (Objective obj : {Objective::MinDelay, Objective::MaxUtility}) {
        config.objective = obj;
        const OptimizerTrace t = optimize(config, scenario, density);
        std::printf("%s: p* = %.6f (%s)\n", to_string(obj), t.p_star, to_string(t.status));
    }
}
