#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dll/data/char_corpus.hpp"
#include "dll/data/dataset.hpp"
#include "dll/data/timeseries.hpp"
#include "dll/nn/network.hpp"
#include "dll/nn/rnn.hpp"
#include "dll/train/baselines.hpp"
#include "dll/train/schedule.hpp"

namespace dll {

/// Everything that determines a run. Parsed from flat key=value files or a
/// named preset plus overrides; echoed verbatim into the summary so results
/// are auditable.
struct ExperimentConfig {
    std::string name = "run";
    std::string algorithm = "dll";            // bp | fa | dll | dll_fa
    std::string arch = "mlp:784,1024,512,256,10";  // mlp:<sizes> | cnn:<mnist|fashion|cifar10> | rnn
    std::string dataset = "mnist";            // mnist | fashion | cifar10 | chars | timeseries | synth_blobs | synth_chars | synth_ts
    std::string data_dir = "data";
    std::string corpus_path;
    std::string csv_path;
    std::size_t hidden_size = 128;            // rnn
    std::size_t window_len = 40;              // chars
    std::size_t window_stride = 0;            // chars; 0 = window_len (non-overlapping)
    std::size_t input_len = 24;               // timeseries
    std::size_t horizon = 1;                  // timeseries
    double lr_w = 1e-3;
    double lr_theta = 0;                      // 0 = same as lr_w
    std::size_t batch_size = 128;
    std::size_t epochs = 30;
    std::size_t stop_epoch = 0;               // pause after this many epochs (0 = run to `epochs`);
                                              // the schedule stays pinned to `epochs`
    std::uint64_t seed = 1;
    std::string schedule = "linear";          // linear | cosine | constant
    bool relaxation = false;
    std::size_t relax_steps = 10;
    double lr_x = 1.0;
    std::string optimizer = "adam";           // adam | sgd
    std::string out_dir = "out";
    std::string resume;                       // checkpoint path to continue from
    std::size_t limit_train = 0;              // 0 = no cap (deterministic subset otherwise)
    std::size_t limit_test = 0;
    std::size_t eval_batch = 256;
    // synthetic dataset knobs
    std::size_t synth_train = 4096;
    std::size_t synth_test = 1024;
    std::size_t synth_dim = 16;
    std::size_t synth_classes = 4;
    double synth_noise = 0.08;
    std::size_t synth_text_bytes = 1 << 20;
    std::size_t synth_rows = 3000;
    std::size_t synth_cols = 6;

    void set(const std::string& key, const std::string& value);  // unknown key -> ConfigError
    void validate() const;
    std::vector<std::pair<std::string, std::string>> echo() const;  // ordered key/value dump

    double effective_lr_theta() const { return lr_theta > 0 ? lr_theta : lr_w; }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// --- presets ---------------------------------------------------------------

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

// --- results ---------------------------------------------------------------

struct EpochRow {
    std::size_t epoch;
    double train_loss;
    std::string metric_name;
    double metric_value;
    double lr_w;
    double lr_theta;
    double seconds;
};

struct RunResult {
    ExperimentConfig config;
    std::vector<EpochRow> rows;
    std::map<std::string, double> final_metrics;
    std::string csv_path;
    std::string checkpoint_path;
    std::string summary_path;
};

using Clock = std::function<double()>;  // seconds; injectable for determinism tests

/// Trains per config, evaluates test metrics each epoch, appends one CSV row
/// per epoch, writes the final checkpoint and a summary record.
RunResult run_experiment(const ExperimentConfig& config, Clock clock = {});

/// Independent seeds config.seed .. config.seed+n-1; writes per-seed files
/// plus an aggregate summary with mean and standard deviation per metric.
struct MultiSeedResult {
    std::vector<RunResult> runs;
    std::map<std::string, double> mean;
    std::map<std::string, double> stddev;
    std::string summary_path;
};
MultiSeedResult run_multi_seed(const ExperimentConfig& config, std::size_t seeds, Clock clock = {});

/// Loads a checkpoint into a freshly built model and reports test metrics.
std::map<std::string, double> evaluate_checkpoint(const ExperimentConfig& config,
                                                  const std::string& checkpoint_path);

// Model construction shared with the CLI and tests.
Network build_network_for(const ExperimentConfig& config, std::size_t input_features, std::size_t classes);
Network build_cnn(const std::string& which, std::uint64_t seed);

}  // namespace dll
