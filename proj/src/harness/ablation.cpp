// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <exception>
#include <thread>

#include "detail.hpp"
#include "skt/common/errors.hpp"

namespace skt::harness {

void AblationGrid::validate() const {
    if (methods.empty()) throw DomainError("ablation grid: empty method list");
    if (alphas.empty()) throw DomainError("ablation grid: empty alpha list");
    if (periods.empty()) throw DomainError("ablation grid: empty period list");
    if (seeds.empty()) throw DomainError("ablation grid: empty seed list");
    if (workers == 0) throw DomainError("ablation grid: workers must be positive");
}

size_t AblationGrid::cells() const {
    return methods.size() * alphas.size() * periods.size() * seeds.size();
}

AblationReport run_ablation(const ForgettingBenchmark& bench,
                            const AblationGrid& grid) {
    grid.validate();

    // Bases are trained serially (one per seed) and shared read-only.
    std::vector<detail::SeedSetup> setups;
    setups.reserve(grid.seeds.size());
    for (uint64_t seed : grid.seeds) {
        setups.push_back(detail::prepare_seed(bench, seed));
    }

    struct Cell {
        size_t mi, ai, pi, si;
    };
    std::vector<Cell> cells;
    cells.reserve(grid.cells());
    for (size_t mi = 0; mi < grid.methods.size(); ++mi)
        for (size_t ai = 0; ai < grid.alphas.size(); ++ai)
            for (size_t pi = 0; pi < grid.periods.size(); ++pi)
                for (size_t si = 0; si < grid.seeds.size(); ++si)
                    cells.push_back({mi, ai, pi, si});

    AblationReport report;
    report.rows.resize(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<size_t> next{0};

    auto work = [&]() {
        while (true) {
            const size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const Cell& c = cells[idx];
            try {
                const Method method = grid.methods[c.mi];
                const double alpha = grid.alphas[c.ai];
                const Periodicity& period = grid.periods[c.pi];
                const detail::SeedSetup& s = setups[c.si];
                const NamedParamSet adapted = detail::adapt(
                    bench, s, method, grid.seeds[c.si], alpha, period);
                AblationRow row;
                row.method = std::string(to_string(method));
                row.alpha = alpha;
                row.period = period.to_string();
                row.seed = grid.seeds[c.si];
                row.g_retention = evaluate_accuracy(s.spec, adapted, s.g_eval);
                row.e_accuracy = evaluate_accuracy(s.spec, adapted, s.e_eval);
                row.l0_to_base = l0_distance(adapted, s.base);
                report.rows[idx] = std::move(row);
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };

    const size_t nthreads = std::min(grid.workers, cells.size());
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return report;
}

}  // namespace skt::harness
