// SPDX-License-Identifier: Apache-2.0
#include "skt/baselines/baselines.hpp"
#include "skt/paramvec/io.hpp"

namespace skt {

NamedParamSet ties_run(const NamedParamSet& base,
                       const std::vector<NamedParamSet>& tuned,
                       const MergeConfig& cfg) {
    return ties_merge(base, tuned, cfg);
}

NamedParamSet ties_run_files(const std::filesystem::path& base_path,
                             const std::vector<std::filesystem::path>& tuned_paths,
                             const MergeConfig& cfg) {
    const NamedParamSet base = load_nps1(base_path);
    std::vector<NamedParamSet> tuned;
    tuned.reserve(tuned_paths.size());
    for (const auto& p : tuned_paths) tuned.push_back(load_nps1(p));
    return ties_run(base, tuned, cfg);
}

}  // namespace skt
