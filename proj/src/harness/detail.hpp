// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "skt/harness/harness.hpp"

namespace skt::harness::detail {

// Everything the adaptation phase needs for one benchmark seed. Built once
// per seed, then shared read-only across grid cells.
struct SeedSetup {
    ModelSpec spec;
    NamedParamSet base;
    Dataset e_train;
    Dataset g_eval;
    Dataset e_eval;
    TrainConfig adapt_cfg;
    double base_g_accuracy = 0.0;
    double base_e_accuracy = 0.0;
};

SeedSetup prepare_seed(const ForgettingBenchmark& bench, uint64_t seed);

NamedParamSet adapt(const ForgettingBenchmark& bench, const SeedSetup& s,
                    Method method, uint64_t seed, double alpha,
                    const Periodicity& period);

}  // namespace skt::harness::detail
