// SPDX-License-Identifier: Apache-2.0
// Experiment workbench CLI: fine-tuning runs, dataset generation,
// decontamination scans, and benchmark reports.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skt/baselines/baselines.hpp"
#include "skt/common/errors.hpp"
#include "skt/datagen/emit.hpp"
#include "skt/datagen/pipeline.hpp"
#include "skt/datagen/seed_filter.hpp"
#include "skt/decontam/decontam.hpp"
#include "skt/harness/harness.hpp"
#include "skt/kernels/kernels.hpp"
#include "skt/paramvec/io.hpp"
#include "skt/selekt/selekt.hpp"

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw skt::DomainError("cannot open for writing: " + path.string());
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw skt::DomainError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Flags shared by every command that runs the training loop.
struct TrainFlags {
    std::string base;
    std::string data;
    std::string out;
    std::string log;
    std::string activation = "tanh";
    size_t epochs = 1;
    size_t batch_size = 8;
    double lr = 1e-3;
    double weight_decay = 0.0;
    double warmup_ratio = 0.0;
    uint64_t shuffle_seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--base", base, "base checkpoint (nps1)")->required();
        cmd->add_option("--data", data, "training data (jsonl)")->required();
        cmd->add_option("--out", out, "output checkpoint (nps1)")->required();
        cmd->add_option("--log", log, "run log (json)");
        cmd->add_option("--activation", activation, "tanh|relu");
        cmd->add_option("--epochs", epochs, "training epochs");
        cmd->add_option("--batch-size", batch_size, "minibatch size");
        cmd->add_option("--lr", lr, "learning rate");
        cmd->add_option("--weight-decay", weight_decay, "decoupled weight decay");
        cmd->add_option("--warmup-ratio", warmup_ratio, "linear warmup fraction");
        cmd->add_option("--shuffle-seed", shuffle_seed, "epoch shuffle seed");
    }

    skt::TrainConfig train_config() const {
        skt::TrainConfig cfg;
        cfg.optimizer.lr = lr;
        cfg.optimizer.weight_decay = weight_decay;
        cfg.optimizer.warmup_ratio = warmup_ratio;
        cfg.epochs = epochs;
        cfg.batch_size = batch_size;
        cfg.shuffle_seed = shuffle_seed;
        return cfg;
    }

    skt::NamedParamSet load_base() const { return skt::load_nps1(base); }

    skt::ModelSpec spec_for(const skt::NamedParamSet& params) const {
        return skt::infer_spec(params, skt::activation_from_string(activation));
    }

    skt::Dataset load_data() const { return skt::load_dataset_jsonl(data); }
};

std::string train_log_json(const skt::TrainResult& result) {
    nlohmann::json j;
    j["total_steps"] = result.total_steps;
    j["final_loss"] = result.step_losses.empty() ? 0.0 : result.step_losses.back();
    j["step_losses"] = result.step_losses;
    return j.dump(2);
}

std::string language_for_extension(const fs::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".py") return "python";
    if (ext == ".c" || ext == ".h") return "c";
    if (ext == ".cpp" || ext == ".cc" || ext == ".cxx" || ext == ".hpp") return "cpp";
    if (ext == ".java") return "java";
    if (ext == ".js" || ext == ".mjs") return "javascript";
    if (ext == ".rs") return "rust";
    if (ext == ".go") return "go";
    if (ext == ".kt" || ext == ".kts") return "kotlin";
    return {};
}

std::vector<skt::harness::Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<skt::harness::Method> out;
    out.reserve(names.size());
    for (const auto& name : names) out.push_back(skt::harness::method_from_string(name));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"selektbench: sparse-projection fine-tuning workbench"};
    app.require_subcommand(1);

    // ---- selekt train -------------------------------------------------
    auto* selekt_cmd = app.add_subcommand("selekt", "sparse-projection fine-tuning");
    selekt_cmd->require_subcommand(1);
    auto* selekt_train = selekt_cmd->add_subcommand("train", "train with periodic projections");
    {
        auto flags = std::make_shared<TrainFlags>();
        auto alpha = std::make_shared<double>(0.05);
        auto period = std::make_shared<std::string>("1epoch");
        auto base_mode = std::make_shared<std::string>("fix");
        auto scope = std::make_shared<std::string>("per-layer");
        auto no_final = std::make_shared<bool>(false);
        flags->attach(selekt_train);
        selekt_train->add_option("--alpha", *alpha, "fraction of coordinates kept");
        selekt_train->add_option("--period", *period, "steps | <f>epoch | at-end");
        selekt_train->add_option("--base-mode", *base_mode, "fix|update");
        selekt_train->add_option("--scope", *scope, "global|per-layer");
        selekt_train->add_flag("--no-final-projection", *no_final,
                               "skip the terminal projection");
        selekt_train->callback([=]() {
            const auto base = flags->load_base();
            const auto spec = flags->spec_for(base);
            skt::SelektConfig cfg;
            cfg.alpha = *alpha;
            cfg.period = skt::Periodicity::parse(*period);
            cfg.train = flags->train_config();
            cfg.base_mode = skt::base_mode_from_string(*base_mode);
            cfg.scope = skt::mask_scope_from_string(*scope);
            cfg.final_projection = !*no_final;
            const auto result = skt::selekt_run(spec, base, flags->load_data(), cfg);
            skt::save_nps1(flags->out, result.params);
            if (!flags->log.empty()) write_text(flags->log, result.log.to_json());
            std::cout << "selekt: steps=" << result.log.total_steps
                      << " projections=" << result.log.projections.size()
                      << " l0_to_base=" << result.log.final_l0_to_base
                      << " final_loss=" << result.log.final_loss << "\n";
        });
    }

    // ---- sft ----------------------------------------------------------
    auto* sft_cmd = app.add_subcommand("sft", "dense fine-tuning");
    {
        auto flags = std::make_shared<TrainFlags>();
        flags->attach(sft_cmd);
        sft_cmd->callback([=]() {
            const auto base = flags->load_base();
            const auto spec = flags->spec_for(base);
            const auto result =
                skt::sft_run(spec, base, flags->load_data(), flags->train_config());
            skt::save_nps1(flags->out, result.params);
            if (!flags->log.empty()) write_text(flags->log, train_log_json(result));
            std::cout << "sft: steps=" << result.total_steps << " final_loss="
                      << (result.step_losses.empty() ? 0.0 : result.step_losses.back())
                      << "\n";
        });
    }

    // ---- sparse-apriori -------------------------------------------------
    auto* apriori_cmd = app.add_subcommand("sparse-apriori", "fixed-mask sparse fine-tuning");
    {
        auto flags = std::make_shared<TrainFlags>();
        auto alpha = std::make_shared<double>(0.05);
        auto scope = std::make_shared<std::string>("per-layer");
        auto probe = std::make_shared<size_t>(0);
        flags->attach(apriori_cmd);
        apriori_cmd->add_option("--alpha", *alpha, "fraction of coordinates trained");
        apriori_cmd->add_option("--scope", *scope, "global|per-layer");
        apriori_cmd->add_option("--probe-steps", *probe, "probe length (0 = one epoch)");
        apriori_cmd->callback([=]() {
            const auto base = flags->load_base();
            const auto spec = flags->spec_for(base);
            skt::AprioriConfig cfg;
            cfg.alpha = *alpha;
            cfg.scope = skt::mask_scope_from_string(*scope);
            cfg.probe_steps = *probe;
            cfg.train = flags->train_config();
            const auto result = skt::apriori_sparse_run(spec, base, flags->load_data(), cfg);
            skt::save_nps1(flags->out, result.params);
            if (!flags->log.empty()) {
                nlohmann::json j;
                j["mask_popcount"] = result.mask.popcount();
                j["mask_total_length"] = result.mask.total_length();
                write_text(flags->log, j.dump(2));
            }
            std::cout << "sparse-apriori: mask=" << result.mask.popcount() << "/"
                      << result.mask.total_length() << "\n";
        });
    }

    // ---- lora -----------------------------------------------------------
    auto* lora_cmd = app.add_subcommand("lora", "low-rank adapter fine-tuning");
    {
        auto flags = std::make_shared<TrainFlags>();
        auto rank = std::make_shared<size_t>(4);
        auto scale = std::make_shared<double>(4.0);
        auto dropout = std::make_shared<double>(0.0);
        auto init_seed = std::make_shared<uint64_t>(1);
        auto targets = std::make_shared<std::vector<std::string>>();
        auto adapters_out = std::make_shared<std::string>();
        flags->attach(lora_cmd);
        lora_cmd->add_option("--rank", *rank, "adapter rank");
        lora_cmd->add_option("--scale", *scale, "multiplier on B.A");
        lora_cmd->add_option("--dropout", *dropout, "adapter input dropout");
        lora_cmd->add_option("--init-seed", *init_seed, "adapter init seed");
        lora_cmd->add_option("--targets", *targets, "targeted W matrices")->delimiter(',');
        lora_cmd->add_option("--adapters-out", *adapters_out, "save raw adapters (nps1)");
        lora_cmd->callback([=]() {
            const auto base = flags->load_base();
            const auto spec = flags->spec_for(base);
            skt::LoraSpec lora;
            lora.rank = *rank;
            lora.scale = *scale;
            lora.dropout = *dropout;
            lora.init_seed = *init_seed;
            lora.targets = *targets;
            const auto result =
                skt::lora_run(spec, base, flags->load_data(), flags->train_config(), lora);
            skt::save_nps1(flags->out, result.merged);
            if (!adapters_out->empty()) skt::save_nps1(*adapters_out, result.adapters);
            if (!flags->log.empty()) {
                nlohmann::json j;
                j["total_steps"] = result.step_losses.size();
                j["final_loss"] =
                    result.step_losses.empty() ? 0.0 : result.step_losses.back();
                j["step_losses"] = result.step_losses;
                write_text(flags->log, j.dump(2));
            }
            std::cout << "lora: steps=" << result.step_losses.size() << " final_loss="
                      << (result.step_losses.empty() ? 0.0 : result.step_losses.back())
                      << "\n";
        });
    }

    // ---- ties-merge -------------------------------------------------------
    auto* ties_cmd = app.add_subcommand("ties-merge", "trim/elect-sign/merge checkpoints");
    {
        auto base = std::make_shared<std::string>();
        auto tuned = std::make_shared<std::vector<std::string>>();
        auto density = std::make_shared<double>(0.5);
        auto weight = std::make_shared<double>(0.5);
        auto out = std::make_shared<std::string>();
        ties_cmd->add_option("--base", *base, "base checkpoint (nps1)")->required();
        ties_cmd->add_option("--tuned", *tuned, "fine-tuned checkpoints (nps1)")
            ->required()
            ->delimiter(',');
        ties_cmd->add_option("--density", *density, "fraction of task-vector kept");
        ties_cmd->add_option("--weight", *weight, "scale applied to the merged vector");
        ties_cmd->add_option("--out", *out, "output checkpoint (nps1)")->required();
        ties_cmd->callback([=]() {
            std::vector<fs::path> paths(tuned->begin(), tuned->end());
            const auto merged =
                skt::ties_run_files(*base, paths, skt::MergeConfig{*density, *weight});
            skt::save_nps1(*out, merged);
            std::cout << "ties-merge: inputs=" << paths.size() << "\n";
        });
    }

    // ---- datagen run -------------------------------------------------------
    auto* datagen_cmd = app.add_subcommand("datagen", "synthetic editing-data pipeline");
    datagen_cmd->require_subcommand(1);
    auto* datagen_run = datagen_cmd->add_subcommand("run", "run all four stages and emit jsonl");
    {
        auto seeds_dir = std::make_shared<std::string>();
        auto languages = std::make_shared<std::vector<std::string>>();
        auto formats = std::make_shared<std::vector<std::string>>(
            std::vector<std::string>{"concise", "detailed", "human", "conversational"});
        auto endpoint_spec = std::make_shared<std::string>("mock");
        auto out = std::make_shared<std::string>();
        auto store_dir = std::make_shared<std::string>();
        auto modularity = std::make_shared<std::string>("function");
        auto aspects = std::make_shared<std::vector<std::string>>(
            std::vector<std::string>{"general improvement"});
        auto temperature = std::make_shared<double>(0.6);
        auto max_in_flight = std::make_shared<size_t>(4);
        auto stats_path = std::make_shared<std::string>();
        auto include_rejected = std::make_shared<bool>(false);
        datagen_run->add_option("--seeds", *seeds_dir, "directory of seed source files")
            ->required();
        datagen_run->add_option("--languages", *languages, "only these languages")
            ->delimiter(',');
        datagen_run->add_option("--formats", *formats, "instruction formats")->delimiter(',');
        datagen_run->add_option("--endpoint", *endpoint_spec,
                                "mock | mock:fail=N | http(s)://host:port[/path]");
        datagen_run->add_option("--out", *out, "emitted dataset (jsonl)")->required();
        datagen_run->add_option("--store", *store_dir,
                                "instance store for resumption (default <out>.store)");
        datagen_run->add_option("--modularity", *modularity, "function|class|file");
        datagen_run->add_option("--aspects", *aspects, "improvement aspects")->delimiter(',');
        datagen_run->add_option("--temperature", *temperature, "sampling temperature");
        datagen_run->add_option("--max-in-flight", *max_in_flight, "concurrent instances");
        datagen_run->add_option("--stats", *stats_path, "write per-language stats (markdown)");
        datagen_run->add_flag("--include-rejected", *include_rejected,
                              "emit rejected instances too");
        datagen_run->callback([=]() {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(*seeds_dir)) {
                if (entry.is_regular_file()) files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            std::vector<skt::datagen::SeedSample> seeds;
            size_t skipped = 0;
            for (const auto& path : files) {
                const std::string language = language_for_extension(path);
                if (language.empty()) {
                    ++skipped;
                    continue;
                }
                if (!languages->empty() &&
                    std::find(languages->begin(), languages->end(), language) ==
                        languages->end()) {
                    ++skipped;
                    continue;
                }
                auto sample = skt::datagen::make_seed_sample(
                    path.stem().string(), language, read_text(path));
                if (!skt::datagen::filter_seed(sample)) {
                    ++skipped;
                    continue;
                }
                seeds.push_back(std::move(sample));
            }

            skt::datagen::PipelineConfig config;
            config.spec.modularity = skt::datagen::modularity_from_string(*modularity);
            config.spec.aspects = *aspects;
            config.spec.temperature = *temperature;
            config.stage_options.formats.clear();
            for (const auto& f : *formats) {
                config.stage_options.formats.push_back(
                    skt::datagen::instruction_format_from_string(f));
            }
            config.max_in_flight = *max_in_flight;

            const auto endpoint = skt::datagen::make_endpoint(*endpoint_spec);
            skt::datagen::InstanceStore store(
                store_dir->empty() ? fs::path(*out + ".store") : fs::path(*store_dir));
            const auto result =
                skt::datagen::run_pipeline(seeds, config, *endpoint, store);

            skt::datagen::EmitOptions emit;
            emit.formats = config.stage_options.formats;
            emit.include_rejected = *include_rejected;
            emit.endpoint_name = *endpoint_spec;
            const size_t records = skt::datagen::emit_dataset(result.instances, *out, emit);
            if (!stats_path->empty()) {
                write_text(*stats_path, skt::datagen::dataset_stats(*out).to_markdown());
            }
            std::cout << "datagen: seeds=" << seeds.size() << " skipped=" << skipped
                      << " accepted=" << result.accepted << " rejected=" << result.rejected
                      << " failed=" << result.failed << " records=" << records << "\n";
        });
    }

    // ---- decontam ---------------------------------------------------------
    auto* decontam_cmd = app.add_subcommand("decontam", "near-duplicate scan vs benchmarks");
    {
        auto train = std::make_shared<std::string>();
        auto benchmarks = std::make_shared<std::string>();
        auto threshold = std::make_shared<double>(0.8);
        auto report_path = std::make_shared<std::string>();
        auto num_hashes = std::make_shared<size_t>(128);
        auto shingle_k = std::make_shared<size_t>(5);
        auto seed = std::make_shared<uint64_t>(0);
        auto bands = std::make_shared<size_t>(16);
        auto rows = std::make_shared<size_t>(8);
        decontam_cmd->add_option("--train", *train, "training data (jsonl)")->required();
        decontam_cmd->add_option("--benchmarks", *benchmarks, "benchmark documents dir")
            ->required();
        decontam_cmd->add_option("--threshold", *threshold, "flagging threshold");
        decontam_cmd->add_option("--report", *report_path, "report output (json)")
            ->required();
        decontam_cmd->add_option("--num-hashes", *num_hashes, "signature length");
        decontam_cmd->add_option("--shingle-k", *shingle_k, "words per shingle");
        decontam_cmd->add_option("--seed", *seed, "hash seed");
        decontam_cmd->add_option("--bands", *bands, "lsh bands");
        decontam_cmd->add_option("--rows", *rows, "lsh rows per band");
        decontam_cmd->callback([=]() {
            skt::decontam::MinHashParams mh;
            mh.num_hashes = *num_hashes;
            mh.shingle_k = *shingle_k;
            mh.seed = *seed;
            skt::decontam::LshParams lsh;
            lsh.bands = *bands;
            lsh.rows = *rows;
            const auto report =
                skt::decontam::scan_files(*train, *benchmarks, *threshold, mh, lsh);
            write_text(*report_path, report.to_json());
            std::cout << "decontam: train=" << report.train_records
                      << " benchmarks=" << report.benchmark_docs
                      << " flagged=" << report.flagged.size() << "\n";
        });
    }

    // ---- bench --------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "desk-scale benchmark runs");
    bench_cmd->require_subcommand(1);
    auto* bench_forgetting = bench_cmd->add_subcommand("forgetting", "adapt-vs-retain runs");
    {
        auto methods = std::make_shared<std::vector<std::string>>(
            std::vector<std::string>{"sft", "selekt", "lora", "sparse-apriori", "ties",
                                     "posthoc"});
        auto seeds = std::make_shared<std::vector<uint64_t>>(
            std::vector<uint64_t>{1, 2, 3, 4, 5});
        auto alpha = std::make_shared<double>(0.05);
        auto period = std::make_shared<std::string>("1epoch");
        auto hidden = std::make_shared<size_t>(96);
        auto adapt_epochs = std::make_shared<size_t>(10);
        auto adapt_lr = std::make_shared<double>(1e-2);
        auto label_noise = std::make_shared<double>(0.05);
        auto cross_noise = std::make_shared<double>(0.8);
        auto out = std::make_shared<std::string>();
        auto format = std::make_shared<std::string>("markdown");
        bench_forgetting->add_option("--methods", *methods, "adaptation methods")
            ->delimiter(',');
        bench_forgetting->add_option("--seeds", *seeds, "benchmark seeds")->delimiter(',');
        bench_forgetting->add_option("--alpha", *alpha, "selekt/sparse budget");
        bench_forgetting->add_option("--period", *period, "selekt projection period");
        bench_forgetting->add_option("--hidden", *hidden, "hidden width");
        bench_forgetting->add_option("--adapt-epochs", *adapt_epochs, "adaptation epochs");
        bench_forgetting->add_option("--adapt-lr", *adapt_lr, "adaptation learning rate");
        bench_forgetting->add_option("--label-noise", *label_noise,
                                     "flipped-label fraction in the edit train set");
        bench_forgetting->add_option("--cross-noise", *cross_noise,
                                     "edit-task noise amplitude on the retain dims");
        bench_forgetting->add_option("--out", *out, "write report (json)");
        bench_forgetting->add_option("--format", *format, "markdown|json (stdout)");
        bench_forgetting->callback([=]() {
            skt::harness::ForgettingBenchmark bench;
            bench.alpha = *alpha;
            bench.period = skt::Periodicity::parse(*period);
            bench.hidden = *hidden;
            bench.adapt_epochs = *adapt_epochs;
            bench.adapt_lr = *adapt_lr;
            bench.e_label_noise = *label_noise;
            bench.e_cross_noise = *cross_noise;
            const auto report =
                skt::harness::run_forgetting(bench, parse_methods(*methods), *seeds);
            if (!out->empty()) {
                write_text(*out, skt::harness::render_forgetting(
                                     report, skt::harness::ReportFormat::Json));
            }
            std::cout << skt::harness::render_forgetting(
                report, skt::harness::report_format_from_string(*format));
        });
    }
    auto* bench_ablation = bench_cmd->add_subcommand("ablation", "alpha/period grid");
    {
        auto methods = std::make_shared<std::vector<std::string>>(
            std::vector<std::string>{"selekt"});
        auto alphas = std::make_shared<std::vector<double>>(
            std::vector<double>{0.05, 0.2, 0.5});
        auto periods = std::make_shared<std::vector<std::string>>(
            std::vector<std::string>{"0.1epoch", "0.5epoch", "1epoch", "at-end"});
        auto seeds =
            std::make_shared<std::vector<uint64_t>>(std::vector<uint64_t>{1, 2, 3});
        auto workers = std::make_shared<size_t>(4);
        auto out = std::make_shared<std::string>();
        auto format = std::make_shared<std::string>("markdown");
        bench_ablation->add_option("--methods", *methods, "methods")->delimiter(',');
        bench_ablation->add_option("--alphas", *alphas, "sparsity grid")->delimiter(',');
        bench_ablation->add_option("--periods", *periods, "projection period grid")
            ->delimiter(',');
        bench_ablation->add_option("--seeds", *seeds, "benchmark seeds")->delimiter(',');
        bench_ablation->add_option("--workers", *workers, "concurrent cells");
        bench_ablation->add_option("--out", *out, "write report (json)");
        bench_ablation->add_option("--format", *format, "markdown|json (stdout)");
        bench_ablation->callback([=]() {
            skt::harness::AblationGrid grid;
            grid.methods = parse_methods(*methods);
            grid.alphas = *alphas;
            grid.periods.clear();
            for (const auto& p : *periods) {
                grid.periods.push_back(skt::Periodicity::parse(p));
            }
            grid.seeds = *seeds;
            grid.workers = *workers;
            const skt::harness::ForgettingBenchmark bench;
            const auto report = skt::harness::run_ablation(bench, grid);
            if (report.rows.size() != grid.cells()) {
                throw skt::DomainError("ablation row count does not match the grid");
            }
            if (!out->empty()) {
                write_text(*out, skt::harness::render_report(
                                     report, skt::harness::ReportFormat::Json));
            }
            std::cout << skt::harness::render_report(
                report, skt::harness::report_format_from_string(*format));
        });
    }

    // ---- report ---------------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "render a stored report");
    {
        auto in = std::make_shared<std::string>();
        auto kind = std::make_shared<std::string>("ablation");
        auto format = std::make_shared<std::string>("markdown");
        auto out = std::make_shared<std::string>();
        report_cmd->add_option("--in", *in, "report json file")->required();
        report_cmd->add_option("--kind", *kind, "ablation|forgetting");
        report_cmd->add_option("--format", *format, "markdown|json");
        report_cmd->add_option("--out", *out, "output file (default stdout)");
        report_cmd->callback([=]() {
            const std::string text = read_text(*in);
            const auto fmt = skt::harness::report_format_from_string(*format);
            std::string rendered;
            if (*kind == "ablation") {
                rendered =
                    skt::harness::render_report(skt::harness::ablation_report_from_json(text), fmt);
            } else if (*kind == "forgetting") {
                rendered = skt::harness::render_forgetting(
                    skt::harness::forgetting_report_from_json(text), fmt);
            } else {
                throw skt::DomainError("unknown report kind: " + *kind);
            }
            if (out->empty()) {
                std::cout << rendered;
            } else {
                write_text(*out, rendered);
            }
        });
    }

    // ---- model init --------------------------------------------------------------
    auto* model_cmd = app.add_subcommand("model", "toy model utilities");
    model_cmd->require_subcommand(1);
    auto* model_init = model_cmd->add_subcommand("init", "initialize a checkpoint");
    {
        auto layers = std::make_shared<std::vector<size_t>>();
        auto activation = std::make_shared<std::string>("tanh");
        auto seed = std::make_shared<uint64_t>(0);
        auto out = std::make_shared<std::string>();
        model_init->add_option("--layers", *layers, "layer sizes, input..vocab")
            ->required()
            ->delimiter(',');
        model_init->add_option("--activation", *activation, "tanh|relu");
        model_init->add_option("--seed", *seed, "init seed");
        model_init->add_option("--out", *out, "output checkpoint (nps1)")->required();
        model_init->callback([=]() {
            skt::ModelSpec spec;
            spec.layer_sizes = *layers;
            spec.activation = skt::activation_from_string(*activation);
            spec.init_seed = *seed;
            const auto params = skt::init_model(spec);
            skt::save_nps1(*out, params);
            std::cout << "model init: entries=" << params.size()
                      << " total=" << params.total_length() << "\n";
        });
    }

    // ---- data synth -----------------------------------------------------------------
    auto* data_cmd = app.add_subcommand("data", "toy dataset utilities");
    data_cmd->require_subcommand(1);
    auto* data_synth = data_cmd->add_subcommand("synth", "generate a benchmark task dataset");
    {
        auto task = std::make_shared<std::string>();
        auto n = std::make_shared<size_t>(256);
        auto seed = std::make_shared<uint64_t>(1);
        auto noise = std::make_shared<double>(0.1);
        auto out = std::make_shared<std::string>();
        data_synth->add_option("--task", *task, "g (parity) | e (substitution)")->required();
        data_synth->add_option("--n", *n, "sample count");
        data_synth->add_option("--seed", *seed, "sampling seed");
        data_synth->add_option("--noise", *noise, "input noise amplitude");
        data_synth->add_option("--out", *out, "output dataset (jsonl)")->required();
        data_synth->callback([=]() {
            skt::harness::ForgettingBenchmark bench;
            bench.noise = *noise;
            skt::Dataset data;
            if (*task == "g") {
                data = skt::harness::make_task_g(bench, *n, *seed);
            } else if (*task == "e") {
                data = skt::harness::make_task_e(bench, *n, *seed);
            } else {
                throw skt::DomainError("unknown task: " + *task);
            }
            std::string text;
            for (size_t i = 0; i < data.size(); ++i) {
                nlohmann::json row;
                row["x"] = data.xs[i];
                row["y"] = data.ys[i];
                text += row.dump();
                text.push_back('\n');
            }
            write_text(*out, text);
            std::cout << "data synth: task=" << *task << " n=" << data.size() << "\n";
        });
    }

    // ---- kernels -----------------------------------------------------------------------
    auto* kernels_cmd = app.add_subcommand("kernels", "show the active kernel backend");
    kernels_cmd->callback([]() {
        std::cout << "active: " << skt::kernels::active().name << "\navailable:";
        for (const auto* ops : skt::kernels::available_backends()) {
            std::cout << ' ' << ops->name;
        }
        std::cout << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
