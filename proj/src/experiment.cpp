#include "dll/train/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dll/data/batching.hpp"
#include "dll/data/cifar10.hpp"
#include "dll/data/idx.hpp"
#include "dll/data/synth.hpp"
#include "dll/nn/conv.hpp"
#include "dll/nn/pool.hpp"
#include "dll/train/checkpoint.hpp"
#include "dll/train/metrics.hpp"

namespace fs = std::filesystem;

namespace dll {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Clock default_clock() {
    return [] {
        const auto now = std::chrono::steady_clock::now().time_since_epoch();
        return std::chrono::duration<double>(now).count();
    };
}

std::string find_data_file(const std::string& dir, const std::string& base) {
    // Accept the hyphenated distribution names and the dot-extension rename
    // some mirrors use (train-images.idx3-ubyte), gzipped or not.
    std::string dotted = base;
    const std::size_t idx = dotted.rfind("-idx");
    if (idx != std::string::npos) dotted[idx] = '.';
    for (const std::string& name : {base, dotted}) {
        for (const std::string candidate : {dir + "/" + name, dir + "/" + name + ".gz"}) {
            if (fs::exists(candidate)) return candidate;
        }
    }
    throw InputError("dataset file not found: " + dir + "/" + base + "[.gz]");
}

// ---------------------------------------------------------------- datasets

struct ClassificationData {
    LabeledImageSet train;
    LabeledImageSet test;
};

struct CharData {
    SequenceCorpus corpus;
    std::size_t train_chars = 0;               // corpus positions below this train
    std::vector<std::size_t> train_starts;
    std::vector<std::size_t> test_starts;      // non-overlapping eval windows
};

struct TsData {
    TimeSeriesSet set;
    std::vector<std::size_t> train_windows;
    std::vector<std::size_t> test_windows;
};

struct LoadedData {
    std::optional<ClassificationData> cls;
    std::optional<CharData> chars;
    std::optional<TsData> ts;
};

ClassificationData load_classification(const ExperimentConfig& c) {
    ClassificationData data;
    if (c.dataset == "mnist" || c.dataset == "fashion") {
        const std::string sub = c.dataset == "mnist" ? "/mnist" : "/fashion-mnist";
        const std::string dir = c.data_dir + sub;
        data.train = load_idx_image_set(find_data_file(dir, "train-images-idx3-ubyte"),
                                        find_data_file(dir, "train-labels-idx1-ubyte"), 10);
        data.test = load_idx_image_set(find_data_file(dir, "t10k-images-idx3-ubyte"),
                                       find_data_file(dir, "t10k-labels-idx1-ubyte"), 10);
    } else if (c.dataset == "cifar10") {
        const std::string dir = c.data_dir + "/cifar-10";
        std::vector<std::string> train_paths;
        for (int i = 1; i <= 5; ++i) {
            train_paths.push_back(find_data_file(dir, "data_batch_" + std::to_string(i) + ".bin"));
        }
        data.train = load_cifar10(train_paths);
        data.test = load_cifar10({find_data_file(dir, "test_batch.bin")});
    } else if (c.dataset == "synth_blobs") {
        auto [train, test] = make_synth_blobs(c.synth_train, c.synth_test, c.synth_dim, c.synth_classes,
                                              c.synth_noise, c.seed ^ 0xb10b5);
        data.train = std::move(train);
        data.test = std::move(test);
    } else {
        throw ConfigError("dataset '" + c.dataset + "' is not a classification set");
    }
    return data;
}

CharData load_chars(const ExperimentConfig& c) {
    CharData data;
    std::string text;
    if (c.dataset == "chars") {
        const auto bytes = read_file_bytes(c.corpus_path);
        text.assign(bytes.begin(), bytes.end());
    } else {
        text = make_synth_text(c.synth_text_bytes, c.seed ^ 0x7e47);
    }
    data.corpus = build_char_corpus(text, c.window_len);

    const std::size_t n = data.corpus.encoded.size();
    data.train_chars = (n * 9) / 10;
    if (data.train_chars <= c.window_len + 1 || n - data.train_chars <= c.window_len + 1) {
        throw InputError("corpus too short for the requested window");
    }
    const std::size_t stride = c.window_stride ? c.window_stride : c.window_len;
    for (std::size_t p = 0; p + c.window_len < data.train_chars; p += stride) {
        data.train_starts.push_back(p);
    }
    for (std::size_t p = data.train_chars; p + c.window_len < n; p += c.window_len) {
        data.test_starts.push_back(p);
    }
    if (c.limit_train && data.train_starts.size() > c.limit_train) data.train_starts.resize(c.limit_train);
    if (c.limit_test && data.test_starts.size() > c.limit_test) data.test_starts.resize(c.limit_test);
    return data;
}

TsData load_ts(const ExperimentConfig& c) {
    TsData data;
    std::string csv;
    if (c.dataset == "timeseries") {
        const auto bytes = read_file_bytes(c.csv_path);
        csv.assign(bytes.begin(), bytes.end());
    } else {
        csv = make_synth_series_csv(c.synth_rows, c.synth_cols, c.seed ^ 0x5e21e5);
    }
    data.set = build_timeseries(csv, c.input_len, c.horizon);
    data.train_windows = data.set.windows_of_split("train");
    data.test_windows = data.set.windows_of_split("test");
    if (c.limit_train && data.train_windows.size() > c.limit_train) data.train_windows.resize(c.limit_train);
    if (c.limit_test && data.test_windows.size() > c.limit_test) data.test_windows.resize(c.limit_test);
    return data;
}

// ------------------------------------------------------------ batch assembly

Tensor gather_inputs(const LabeledImageSet& set, const std::vector<std::size_t>& ids, bool flatten) {
    const std::size_t f = set.feature_size();
    Tensor x = flatten ? Tensor({ids.size(), f})
                       : Tensor({ids.size(), set.images.dim(1), set.images.dim(2), set.images.dim(3)});
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const scalar* src = set.images.data() + ids[i] * f;
        std::copy(src, src + f, x.data() + i * f);
    }
    return x;
}

Tensor gather_onehot(const LabeledImageSet& set, const std::vector<std::size_t>& ids) {
    Tensor t({ids.size(), set.class_count});
    for (std::size_t i = 0; i < ids.size(); ++i) t.at(i, static_cast<std::size_t>(set.labels[ids[i]])) = 1;
    return t;
}

std::vector<std::vector<std::uint16_t>> gather_ids(const SequenceCorpus& corpus,
                                                   const std::vector<std::size_t>& starts, bool inputs) {
    std::vector<std::vector<std::uint16_t>> out;
    out.reserve(starts.size());
    for (std::size_t p : starts) out.push_back(inputs ? corpus.input_ids(p) : corpus.target_ids(p));
    return out;
}

// Timestep-major batch of rows [w+offset, w+offset+len) per window.
std::vector<Tensor> gather_rows(const TimeSeriesSet& set, const std::vector<std::size_t>& windows,
                                std::size_t offset, std::size_t len) {
    const std::size_t d = set.cols();
    std::vector<Tensor> steps(len, Tensor({windows.size(), d}));
    for (std::size_t b = 0; b < windows.size(); ++b) {
        for (std::size_t t = 0; t < len; ++t) {
            const scalar* src = set.values.data() + (windows[b] + offset + t) * d;
            std::copy(src, src + d, steps[t].data() + b * d);
        }
    }
    return steps;
}

// ------------------------------------------------------------------- models

struct Model {
    std::optional<Network> net;
    std::optional<RnnCell> cell;
    std::unique_ptr<NetworkTrainer> net_trainer;
    std::unique_ptr<RnnTrainer> rnn_trainer;

    std::vector<ParamRef> params() { return net ? net->params() : cell->params(); }
    std::vector<std::pair<std::string, AdamState>>& states() {
        return net ? net_trainer->optimizer_states() : rnn_trainer->optimizer_states();
    }
};

std::vector<std::size_t> parse_mlp_sizes(const std::string& arch) {
    std::vector<std::size_t> sizes;
    std::istringstream in(arch.substr(4));
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            sizes.push_back(std::stoull(part));
        } catch (const std::exception&) {
            throw ConfigError("bad mlp size '" + part + "' in arch '" + arch + "'");
        }
    }
    if (sizes.size() < 2) throw ConfigError("mlp arch needs at least 2 sizes");
    return sizes;
}

}  // namespace

Network build_cnn(const std::string& which, std::uint64_t seed) {
    SeededRng rng(seed);
    Network net;
    std::size_t li = 0;
    auto conv = [&](std::size_t c_in, std::size_t c_out, std::size_t k, std::size_t pad) {
        SeededRng r = rng.derive(li++);
        net.add(std::make_unique<ConvLayer>(c_in, c_out, k, 1, pad, Activation::Tanh, r));
    };
    auto dense = [&](std::size_t n_in, std::size_t n_out, Activation act) {
        SeededRng r = rng.derive(li++);
        net.add(std::make_unique<DenseLayer>(n_in, n_out, act, r));
    };

    if (which == "mnist") {
        conv(1, 32, 5, 0);                                        // 28 -> 24
        net.add(std::make_unique<PoolLayer>(PoolKind::Max, 2));   // -> 12
        conv(32, 64, 3, 0);                                       // -> 10
        net.add(std::make_unique<PoolLayer>(PoolKind::Max, 2));   // -> 5
        conv(64, 16, 3, 0);                                       // -> 3
        net.add(std::make_unique<FlattenLayer>());                // 16*3*3 = 144
        dense(144, 200, Activation::Tanh);                        // projection
        dense(200, 10, Activation::Linear);
    } else if (which == "fashion") {
        conv(1, 64, 5, 0);                                        // 28 -> 24
        net.add(std::make_unique<PoolLayer>(PoolKind::Max, 2));   // -> 12
        conv(64, 128, 3, 0);                                      // -> 10
        net.add(std::make_unique<PoolLayer>(PoolKind::Avg, 2));   // -> 5
        conv(128, 64, 3, 0);                                      // -> 3
        net.add(std::make_unique<FlattenLayer>());                // 64*3*3 = 576
        dense(576, 128, Activation::Tanh);
        dense(128, 10, Activation::Linear);
    } else if (which == "cifar10") {
        conv(3, 64, 3, 1);                                        // 32 -> 32
        net.add(std::make_unique<PoolLayer>(PoolKind::Max, 2));   // -> 16
        conv(64, 128, 3, 1);                                      // -> 16
        net.add(std::make_unique<PoolLayer>(PoolKind::Max, 2));   // -> 8
        conv(128, 64, 3, 1);                                      // -> 8
        net.add(std::make_unique<PoolLayer>(PoolKind::Avg, 2));   // -> 4
        net.add(std::make_unique<FlattenLayer>());                // 64*4*4 = 1024
        dense(1024, 256, Activation::Tanh);
        dense(256, 10, Activation::Linear);
    } else {
        throw ConfigError("unknown cnn architecture '" + which + "'");
    }
    return net;
}

Network build_network_for(const ExperimentConfig& config, std::size_t input_features, std::size_t classes) {
    if (config.arch.rfind("mlp:", 0) == 0) {
        auto sizes = parse_mlp_sizes(config.arch);
        if (sizes.front() != input_features) {
            throw ConfigError("mlp input size " + std::to_string(sizes.front()) +
                              " does not match dataset features " + std::to_string(input_features));
        }
        if (sizes.back() != classes) {
            throw ConfigError("mlp output size " + std::to_string(sizes.back()) +
                              " does not match class count " + std::to_string(classes));
        }
        return build_mlp(sizes, config.seed);
    }
    if (config.arch.rfind("cnn:", 0) == 0) return build_cnn(config.arch.substr(4), config.seed);
    throw ConfigError("arch '" + config.arch + "' is not a feedforward stack");
}

namespace {

Model build_model(const ExperimentConfig& config, const LoadedData& data) {
    Model model;
    const TrainerKind kind = trainer_kind_from_string(config.algorithm);
    DllHyper hyper;
    hyper.lr_w = static_cast<scalar>(config.lr_w);
    hyper.lr_theta = static_cast<scalar>(config.effective_lr_theta());
    hyper.relaxation = config.relaxation;
    hyper.relax_steps = config.relax_steps;
    hyper.lr_x = static_cast<scalar>(config.lr_x);
    const bool adam = config.optimizer == "adam";

    if (data.cls) {
        const std::size_t classes = data.cls->train.class_count;
        const std::size_t features = data.cls->train.feature_size();
        model.net = build_network_for(config, features, classes);
        model.net_trainer = make_trainer(*model.net, kind, hyper, adam, config.seed ^ 0xfeedbac);
    } else if (data.chars) {
        const std::size_t k = data.chars->corpus.vocab_size();
        model.cell = build_rnn_cell(k, config.hidden_size, k, config.seed);
        model.rnn_trainer = make_trainer(*model.cell, kind, hyper, adam);
    } else {
        const std::size_t d = data.ts->set.cols();
        model.cell = build_rnn_cell(d, config.hidden_size, d, config.seed);
        model.rnn_trainer = make_trainer(*model.cell, kind, hyper, adam);
    }
    return model;
}

void restore_model(Model& model, const Checkpoint& ckpt) {
    auto params = model.params();
    if (ckpt.params.size() != params.size()) {
        throw FormatError("checkpoint parameter table does not match the model");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& [name, value] = ckpt.params[i];
        if (name != params[i].name || !value.same_shape(*params[i].value)) {
            throw FormatError("checkpoint parameter '" + name + "' does not match the model");
        }
        *params[i].value = value;
    }
    auto& states = model.states();
    if (ckpt.optimizer.size() != states.size()) throw FormatError("checkpoint optimizer table mismatch");
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (ckpt.optimizer[i].first != states[i].first) throw FormatError("checkpoint optimizer name mismatch");
        states[i].second = ckpt.optimizer[i].second;
    }
}

// ----------------------------------------------------------------- evaluate

double evaluate_classification(Model& model, const ClassificationData& data, const ExperimentConfig& c) {
    const bool flatten = c.arch.rfind("mlp:", 0) == 0;
    const std::size_t n = c.limit_test ? std::min(c.limit_test, data.test.count()) : data.test.count();
    std::size_t hits = 0;
    for (std::size_t at = 0; at < n; at += c.eval_batch) {
        const std::size_t stop = std::min(n, at + c.eval_batch);
        std::vector<std::size_t> ids(stop - at);
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = at + i;
        const Tensor out = model.net->forward(gather_inputs(data.test, ids, flatten));
        const auto pred = predict_classes(out);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            hits += pred[i] == data.test.labels[ids[i]] ? 1 : 0;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

double evaluate_chars(Model& model, const CharData& data, const ExperimentConfig& c) {
    const std::size_t k = data.corpus.vocab_size();
    std::size_t hits = 0, total = 0;
    const std::size_t batch = std::max<std::size_t>(1, c.batch_size);
    for (std::size_t at = 0; at < data.test_starts.size(); at += batch) {
        const std::size_t stop = std::min(data.test_starts.size(), at + batch);
        const std::vector<std::size_t> starts(data.test_starts.begin() + at, data.test_starts.begin() + stop);
        const auto inputs = one_hot_batch(gather_ids(data.corpus, starts, true), k);
        const auto target_ids = gather_ids(data.corpus, starts, false);
        const Tensor h0({starts.size(), model.cell->hidden_size()});
        const UnrolledPass pass = rnn_forward(*model.cell, inputs, h0);
        for (std::size_t t = 0; t < pass.steps(); ++t) {
            const auto pred = predict_classes(pass.y[t]);
            for (std::size_t b = 0; b < starts.size(); ++b) {
                hits += pred[b] == static_cast<int>(target_ids[b][t]) ? 1 : 0;
                ++total;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

struct TsEval {
    double mse, mae, persistence_mse, persistence_mae;
};

TsEval evaluate_ts(Model& model, const TsData& data, const ExperimentConfig& c) {
    const std::size_t d = data.set.cols();
    double se = 0, ae = 0, pse = 0, pae = 0;
    std::size_t count = 0;
    const std::size_t batch = std::max<std::size_t>(1, c.batch_size);
    for (std::size_t at = 0; at < data.test_windows.size(); at += batch) {
        const std::size_t stop = std::min(data.test_windows.size(), at + batch);
        const std::vector<std::size_t> ws(data.test_windows.begin() + at, data.test_windows.begin() + stop);
        auto inputs = gather_rows(data.set, ws, 0, c.input_len);
        const Tensor h0({ws.size(), model.cell->hidden_size()});
        UnrolledPass pass = rnn_forward(*model.cell, inputs, h0);

        // Autoregressive rollout over the horizon; step 1 is the final output.
        std::vector<Tensor> forecast;
        forecast.push_back(pass.y.back());
        Tensor h_prev = pass.h.back();
        for (std::size_t step = 1; step < c.horizon; ++step) {
            const Tensor z = add(matmul_nt(h_prev, model.cell->w_h), matmul_nt(forecast.back(), model.cell->w_x));
            auto [h, fp] = apply_activation(z, Activation::Tanh);
            forecast.push_back(matmul_nt(h, model.cell->w_y));
            h_prev = h;
        }

        const auto targets = gather_rows(data.set, ws, c.input_len, c.horizon);
        const auto last_seen = gather_rows(data.set, ws, c.input_len - 1, 1);
        for (std::size_t step = 0; step < c.horizon; ++step) {
            for (std::size_t i = 0; i < targets[step].size(); ++i) {
                const double err = static_cast<double>(forecast[step][i]) - static_cast<double>(targets[step][i]);
                const double perr = static_cast<double>(last_seen[0][i]) - static_cast<double>(targets[step][i]);
                se += err * err;
                ae += std::abs(err);
                pse += perr * perr;
                pae += std::abs(perr);
                ++count;
            }
        }
    }
    return {se / count, ae / count, pse / count, pae / count};
}

std::map<std::string, double> evaluate(Model& model, const LoadedData& data, const ExperimentConfig& c) {
    std::map<std::string, double> out;
    if (data.cls) {
        out["accuracy"] = evaluate_classification(model, *data.cls, c);
    } else if (data.chars) {
        out["accuracy"] = evaluate_chars(model, *data.chars, c);
        const std::size_t n = data.chars->corpus.encoded.size();
        out["modal_accuracy"] =
            modal_successor_accuracy(data.chars->corpus, data.chars->train_chars, data.chars->train_chars, n);
    } else {
        const TsEval e = evaluate_ts(model, *data.ts, c);
        out["mse"] = e.mse;
        out["mae"] = e.mae;
        out["persistence_mse"] = e.persistence_mse;
        out["persistence_mae"] = e.persistence_mae;
    }
    return out;
}

// ------------------------------------------------------------------- epochs

double train_one_epoch(Model& model, const LoadedData& data, const ExperimentConfig& c, std::size_t epoch,
                       double lr_w, double lr_theta) {
    const std::uint64_t plan_seed = SeededRng(c.seed).derive(0xe90c + epoch).seed();
    double loss_sum = 0;
    std::size_t samples = 0;

    if (data.cls) {
        const bool flatten = c.arch.rfind("mlp:", 0) == 0;
        const std::size_t n =
            c.limit_train ? std::min(c.limit_train, data.cls->train.count()) : data.cls->train.count();
        const BatchPlan plan = BatchPlan::make(n, c.batch_size, plan_seed);
        for (std::size_t k = 0; k < plan.batch_count(); ++k) {
            const auto ids = plan.batch(k);
            const Tensor x = gather_inputs(data.cls->train, ids, flatten);
            const Tensor t = gather_onehot(data.cls->train, ids);
            const double loss = model.net_trainer->step(x, t, static_cast<scalar>(lr_w),
                                                        static_cast<scalar>(lr_theta));
            loss_sum += loss * static_cast<double>(ids.size());
            samples += ids.size();
        }
    } else if (data.chars) {
        const std::size_t k = data.chars->corpus.vocab_size();
        const BatchPlan plan = BatchPlan::make(data.chars->train_starts.size(), c.batch_size, plan_seed);
        for (std::size_t b = 0; b < plan.batch_count(); ++b) {
            std::vector<std::size_t> starts;
            for (std::size_t idx : plan.batch(b)) starts.push_back(data.chars->train_starts[idx]);
            const auto inputs = one_hot_batch(gather_ids(data.chars->corpus, starts, true), k);
            const auto targets = one_hot_batch(gather_ids(data.chars->corpus, starts, false), k);
            const double loss = model.rnn_trainer->step(inputs, targets, static_cast<scalar>(lr_w),
                                                        static_cast<scalar>(lr_theta));
            loss_sum += loss * static_cast<double>(starts.size());
            samples += starts.size();
        }
    } else {
        const BatchPlan plan = BatchPlan::make(data.ts->train_windows.size(), c.batch_size, plan_seed);
        for (std::size_t b = 0; b < plan.batch_count(); ++b) {
            std::vector<std::size_t> ws;
            for (std::size_t idx : plan.batch(b)) ws.push_back(data.ts->train_windows[idx]);
            // Next-row targets at every timestep.
            const auto inputs = gather_rows(data.ts->set, ws, 0, c.input_len);
            const auto targets = gather_rows(data.ts->set, ws, 1, c.input_len);
            const double loss = model.rnn_trainer->step(inputs, targets, static_cast<scalar>(lr_w),
                                                        static_cast<scalar>(lr_theta));
            loss_sum += loss * static_cast<double>(ws.size());
            samples += ws.size();
        }
    }
    return loss_sum / static_cast<double>(samples);
}

std::string primary_metric(const LoadedData& data) { return data.ts ? "mse" : "accuracy"; }

void write_summary(const std::string& path, const ExperimentConfig& config,
                   const std::map<std::string, double>& metrics, std::uint64_t epochs_run) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot write summary: " + path);
    for (const auto& [k, v] : config.echo()) out << k << " = " << v << "\n";
    out << "epochs_run = " << epochs_run << "\n";
    for (const auto& [k, v] : metrics) out << "final_" << k << " = " << fmt(v) << "\n";
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config_in, Clock clock) {
    ExperimentConfig config = config_in;
    config.validate();
    if (!clock) clock = default_clock();
    fs::create_directories(config.out_dir);

    LoadedData data;
    if (config.dataset == "chars" || config.dataset == "synth_chars") {
        data.chars = load_chars(config);
    } else if (config.dataset == "timeseries" || config.dataset == "synth_ts") {
        data.ts = load_ts(config);
    } else {
        data.cls = load_classification(config);
    }

    Model model = build_model(config, data);
    SeededRng master_rng(config.seed);
    std::size_t start_epoch = 0;
    if (!config.resume.empty()) {
        const Checkpoint ckpt = load_checkpoint(config.resume);
        restore_model(model, ckpt);
        master_rng.set_state(ckpt.rng_cursor);
        start_epoch = ckpt.epoch;
        if (start_epoch > config.epochs) throw ConfigError("resume checkpoint is past the configured epochs");
    }

    RunResult result;
    result.config = config;
    result.csv_path = config.out_dir + "/" + config.name + ".csv";
    result.checkpoint_path = config.out_dir + "/" + config.name + ".ckpt";
    result.summary_path = config.out_dir + "/" + config.name + ".summary";

    std::ofstream csv(result.csv_path, std::ios::trunc);
    if (!csv) throw InputError("cannot write metrics csv: " + result.csv_path);
    csv << "epoch,train_loss,metric_name,metric_value,lr_w,lr_theta,seconds\n";
    csv.flush();

    Schedule sched_w{schedule_from_string(config.schedule), config.lr_w, config.epochs};
    Schedule sched_th{schedule_from_string(config.schedule), config.effective_lr_theta(), config.epochs};
    const std::string metric_name = primary_metric(data);

    const std::size_t end_epoch = config.stop_epoch ? config.stop_epoch : config.epochs;
    const double t_start = clock();
    for (std::size_t epoch = start_epoch; epoch < end_epoch; ++epoch) {
        const double lr_w = schedule_rate(sched_w, epoch);
        const double lr_th = schedule_rate(sched_th, epoch);
        const double loss = train_one_epoch(model, data, config, epoch, lr_w, lr_th);
        const auto metrics = evaluate(model, data, config);
        const double elapsed = clock() - t_start;

        EpochRow row{epoch, loss, metric_name, metrics.at(metric_name), lr_w, lr_th, elapsed};
        result.rows.push_back(row);
        csv << row.epoch << "," << fmt(row.train_loss) << "," << row.metric_name << ","
            << fmt(row.metric_value) << "," << fmt(row.lr_w) << "," << fmt(row.lr_theta) << ","
            << fmt(row.seconds) << "\n";
        csv.flush();
        result.final_metrics = metrics;
    }
    if (result.rows.empty()) result.final_metrics = evaluate(model, data, config);

    Checkpoint ckpt;
    for (const ParamRef& p : model.params()) ckpt.params.emplace_back(p.name, *p.value);
    ckpt.optimizer = model.states();
    ckpt.rng_cursor = master_rng.state();
    ckpt.epoch = end_epoch;
    save_checkpoint(ckpt, result.checkpoint_path);

    write_summary(result.summary_path, config, result.final_metrics, end_epoch);
    return result;
}

MultiSeedResult run_multi_seed(const ExperimentConfig& config, std::size_t seeds, Clock clock) {
    if (seeds == 0) throw ConfigError("need at least one seed");
    MultiSeedResult agg;
    for (std::size_t i = 0; i < seeds; ++i) {
        ExperimentConfig c = config;
        c.seed = config.seed + i;
        c.name = config.name + "_seed" + std::to_string(c.seed);
        agg.runs.push_back(run_experiment(c, clock));
    }
    for (const auto& [k, v] : agg.runs.front().final_metrics) {
        double mean = 0;
        for (const auto& run : agg.runs) mean += run.final_metrics.at(k);
        mean /= static_cast<double>(seeds);
        double var = 0;
        for (const auto& run : agg.runs) {
            const double d = run.final_metrics.at(k) - mean;
            var += d * d;
        }
        agg.mean[k] = mean;
        agg.stddev[k] = seeds > 1 ? std::sqrt(var / static_cast<double>(seeds - 1)) : 0.0;
    }

    agg.summary_path = config.out_dir + "/" + config.name + ".multiseed.summary";
    fs::create_directories(config.out_dir);
    std::ofstream out(agg.summary_path, std::ios::trunc);
    out << "name = " << config.name << "\nseeds = " << seeds << "\n";
    for (const auto& [k, v] : agg.mean) {
        out << "mean_" << k << " = " << fmt(v) << "\nstd_" << k << " = " << fmt(agg.stddev.at(k)) << "\n";
    }
    return agg;
}

std::map<std::string, double> evaluate_checkpoint(const ExperimentConfig& config_in,
                                                  const std::string& checkpoint_path) {
    ExperimentConfig config = config_in;
    config.validate();
    LoadedData data;
    if (config.dataset == "chars" || config.dataset == "synth_chars") {
        data.chars = load_chars(config);
    } else if (config.dataset == "timeseries" || config.dataset == "synth_ts") {
        data.ts = load_ts(config);
    } else {
        data.cls = load_classification(config);
    }
    Model model = build_model(config, data);
    restore_model(model, load_checkpoint(checkpoint_path));
    return evaluate(model, data, config);
}

}  // namespace dll
