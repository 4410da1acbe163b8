// Batch command-line front end: train / eval / gradcheck / bench / presets.
// All outputs land in the chosen --out directory as CSV, checkpoint and
// summary files; there is no interactive mode.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "dll/data/synth.hpp"
#include "dll/train/experiment.hpp"
#include "dll/train/gradcheck.hpp"

namespace {

struct CommonArgs {
    std::string preset_name;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::size_t seeds = 1;
};

dll::ExperimentConfig resolve_config(const CommonArgs& args) {
    if (!args.preset_name.empty() && !args.config_path.empty()) {
        throw dll::ConfigError("give either --preset or --config, not both");
    }
    dll::ExperimentConfig config;
    if (!args.preset_name.empty()) {
        config = dll::preset(args.preset_name);
    } else if (!args.config_path.empty()) {
        config = dll::load_config_file(args.config_path);
    } else {
        throw dll::ConfigError("one of --preset or --config is required");
    }
    for (const std::string& kv : args.overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) throw dll::ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    config.validate();
    return config;
}

void echo_config(std::ostream& out, const dll::ExperimentConfig& config) {
    for (const auto& [k, v] : config.echo()) out << "  " << k << " = " << v << "\n";
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--preset", args.preset_name, "named preset (see `dll presets`)");
    cmd->add_option("--config", args.config_path, "key=value config file");
    cmd->add_option("--set", args.overrides, "override KEY=VALUE (repeatable)");
    cmd->add_option("--out", args.out_dir, "output directory");
}

int cmd_train(const CommonArgs& args) {
    dll::ExperimentConfig config = resolve_config(args);
    if (args.seeds <= 1) {
        const dll::RunResult result = dll::run_experiment(config);
        std::cout << "run " << config.name << " finished\n";
        for (const auto& [k, v] : result.final_metrics) std::cout << "  " << k << " = " << v << "\n";
        std::cout << "  csv        " << result.csv_path << "\n"
                  << "  checkpoint " << result.checkpoint_path << "\n"
                  << "  summary    " << result.summary_path << "\n";
    } else {
        const dll::MultiSeedResult agg = dll::run_multi_seed(config, args.seeds);
        std::cout << "run " << config.name << " over " << args.seeds << " seeds\n";
        for (const auto& [k, v] : agg.mean) {
            std::cout << "  " << k << " = " << v << " +- " << agg.stddev.at(k) << "\n";
        }
        std::cout << "  summary    " << agg.summary_path << "\n";
    }
    return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& checkpoint) {
    dll::ExperimentConfig config = resolve_config(args);
    const auto metrics = dll::evaluate_checkpoint(config, checkpoint);
    for (const auto& [k, v] : metrics) std::cout << k << " = " << v << "\n";
    return 0;
}

int cmd_gradcheck(const CommonArgs& args, double tolerance) {
    dll::ExperimentConfig config = resolve_config(args);
    if (config.arch.rfind("mlp:", 0) != 0 || config.dataset != "synth_blobs") {
        throw dll::ConfigError("gradcheck runs on small mlp presets over synth_blobs (e.g. tiny_mlp_tied)");
    }
    auto [train, test] = dll::make_synth_blobs(config.batch_size, 1, config.synth_dim, config.synth_classes,
                                               config.synth_noise, config.seed);
    dll::Network net = dll::build_network_for(config, train.feature_size(), train.class_count);
    const dll::TrainerKind kind = dll::trainer_kind_from_string(config.algorithm);
    if (kind == dll::TrainerKind::FA) dll::install_feedback_matrices(net, config.seed ^ 0xfeedbac);

    dll::Tensor x({train.count(), train.feature_size()});
    std::copy(train.images.data(), train.images.data() + train.images.size(), x.data());
    dll::Tensor t({train.count(), train.class_count});
    for (std::size_t i = 0; i < train.count(); ++i) {
        t.at(i, static_cast<std::size_t>(train.labels[i])) = 1;
    }

    const auto report = dll::gradcheck_network(kind, net, x, t);
    for (const auto& entry : report.per_param) {
        std::cout << entry.name << " max_rel_err = " << entry.max_rel_err << "\n";
    }
    std::cout << "max_rel_err = " << report.max_rel_err << " (tolerance " << tolerance << ")\n";
    return report.max_rel_err <= tolerance ? 0 : 1;
}

int cmd_bench(const CommonArgs& args, const std::string& suite) {
    std::vector<std::string> names;
    if (suite == "mnist") {
        names = {"mnist_mlp_bp", "mnist_mlp_fa", "mnist_mlp_dll", "mnist_mlp_dllfa", "mnist_cnn_dll"};
    } else if (suite == "scalability") {
        names = {"scal_mlp_3", "scal_mlp_4", "scal_mlp_5"};
    } else if (suite == "synth") {
        names = {"synth_mlp_bp", "synth_mlp_fa", "synth_mlp_dll", "synth_mlp_dllfa"};
    } else {
        throw dll::ConfigError("unknown bench suite '" + suite + "' (mnist|scalability|synth)");
    }

    const std::string out_dir = args.out_dir.empty() ? "out" : args.out_dir;
    std::filesystem::create_directories(out_dir);
    const std::string md_path = out_dir + "/bench_" + suite + ".md";
    const std::string csv_path = out_dir + "/bench_" + suite + ".csv";
    std::ofstream md(md_path, std::ios::trunc);
    std::ofstream csv(csv_path, std::ios::trunc);
    md << "| preset | algorithm | arch | metric | value |\n|---|---|---|---|---|\n";
    csv << "preset,algorithm,arch,metric,value\n";

    for (const std::string& name : names) {
        CommonArgs run_args = args;
        run_args.preset_name = name;
        run_args.config_path.clear();
        dll::ExperimentConfig config = resolve_config(run_args);
        std::cout << "bench: running " << name << "...\n";
        dll::RunResult result = dll::run_experiment(config);
        const std::string metric = result.final_metrics.count("accuracy") ? "accuracy" : "mse";
        md << "| " << name << " | " << config.algorithm << " | " << config.arch << " | " << metric << " | "
           << result.final_metrics.at(metric) << " |\n";
        csv << name << "," << config.algorithm << "," << config.arch << "," << metric << ","
            << result.final_metrics.at(metric) << "\n";
    }
    std::cout << "bench tables: " << md_path << ", " << csv_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local-learning training engine (dendritic localized learning, with BP/FA baselines)"};
    app.require_subcommand(1);

    CommonArgs train_args, eval_args, grad_args, bench_args;
    std::string checkpoint_path, bench_suite = "synth";
    double grad_tolerance = 1e-5;

    CLI::App* train = app.add_subcommand("train", "train per config/preset and write CSV + checkpoint");
    add_common(train, train_args);
    train->add_option("--seeds", train_args.seeds, "run N consecutive seeds and aggregate");

    CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on the configured test split");
    add_common(eval, eval_args);
    eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();

    CLI::App* grad = app.add_subcommand("gradcheck", "finite-difference check of the update rules");
    add_common(grad, grad_args);
    grad->add_option("--tolerance", grad_tolerance, "max relative error to accept");

    CLI::App* bench = app.add_subcommand("bench", "run a preset suite and emit a comparison table");
    add_common(bench, bench_args);
    bench->add_option("--suite", bench_suite, "mnist | scalability | synth");

    CLI::App* presets = app.add_subcommand("presets", "list available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) return cmd_train(train_args);
        if (eval->parsed()) return cmd_eval(eval_args, checkpoint_path);
        if (grad->parsed()) return cmd_gradcheck(grad_args, grad_tolerance);
        if (bench->parsed()) return cmd_bench(bench_args, bench_suite);
        if (presets->parsed()) {
            for (const std::string& name : dll::preset_names()) std::cout << name << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        const CommonArgs* args = train->parsed()   ? &train_args
                                 : eval->parsed()  ? &eval_args
                                 : grad->parsed()  ? &grad_args
                                 : bench->parsed() ? &bench_args
                                                   : nullptr;
        if (args && (!args->preset_name.empty() || !args->config_path.empty())) {
            try {
                std::cerr << "config was:\n";
                echo_config(std::cerr, resolve_config(*args));
            } catch (...) {
            }
        }
        return 1;
    }
    return 2;
}
