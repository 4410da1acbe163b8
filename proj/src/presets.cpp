#include <map>

#include "dll/errors.hpp"
#include "dll/train/experiment.hpp"

namespace dll {

namespace {

ExperimentConfig mnist_mlp(const std::string& algorithm) {
    ExperimentConfig c;
    c.name = "mnist_mlp_" + algorithm;
    c.algorithm = algorithm;
    c.arch = "mlp:784,1024,512,256,10";
    c.dataset = "mnist";
    c.lr_w = 1e-3;
    c.batch_size = 128;
    c.epochs = 30;
    c.schedule = "linear";
    return c;
}

ExperimentConfig synth_mlp(const std::string& algorithm) {
    ExperimentConfig c;
    c.name = "synth_mlp_" + algorithm;
    c.algorithm = algorithm;
    c.arch = "mlp:16,64,32,4";
    c.dataset = "synth_blobs";
    c.lr_w = 2e-3;
    c.batch_size = 64;
    c.epochs = 12;
    c.schedule = "linear";
    return c;
}

using PresetFn = ExperimentConfig (*)();

const std::map<std::string, PresetFn>& registry() {
    static const std::map<std::string, PresetFn> presets = {
        {"mnist_mlp_dll", [] { return mnist_mlp("dll"); }},
        {"mnist_mlp_bp", [] { return mnist_mlp("bp"); }},
        {"mnist_mlp_fa", [] { return mnist_mlp("fa"); }},
        {"mnist_mlp_dllfa", [] { return mnist_mlp("dll_fa"); }},
        {"mnist_cnn_dll",
         [] {
             ExperimentConfig c;
             c.name = "mnist_cnn_dll";
             c.algorithm = "dll";
             c.arch = "cnn:mnist";
             c.dataset = "mnist";
             c.lr_w = 5e-5;
             c.batch_size = 64;
             c.epochs = 50;
             c.schedule = "linear";
             return c;
         }},
        {"fashion_mlp_dll",
         [] {
             ExperimentConfig c = mnist_mlp("dll");
             c.name = "fashion_mlp_dll";
             c.dataset = "fashion";
             c.lr_w = 5e-4;
             c.batch_size = 64;
             return c;
         }},
        {"fashion_cnn_dll",
         [] {
             ExperimentConfig c;
             c.name = "fashion_cnn_dll";
             c.algorithm = "dll";
             c.arch = "cnn:fashion";
             c.dataset = "fashion";
             c.lr_w = 5e-5;
             c.batch_size = 64;
             c.epochs = 50;
             c.schedule = "linear";
             return c;
         }},
        {"cifar10_mlp_dll",
         [] {
             ExperimentConfig c;
             c.name = "cifar10_mlp_dll";
             c.algorithm = "dll";
             c.arch = "mlp:3072,4096,2048,1024,256,10";
             c.dataset = "cifar10";
             c.lr_w = 8e-5;
             c.batch_size = 64;
             c.epochs = 30;
             c.schedule = "linear";
             return c;
         }},
        {"cifar10_cnn_dll",
         [] {
             ExperimentConfig c;
             c.name = "cifar10_cnn_dll";
             c.algorithm = "dll";
             c.arch = "cnn:cifar10";
             c.dataset = "cifar10";
             c.lr_w = 5e-5;
             c.batch_size = 64;
             c.epochs = 50;
             c.schedule = "linear";
             return c;
         }},
        // Depth ladder under the full matched training budget.
        {"scal_mlp_3",
         [] {
             ExperimentConfig c = mnist_mlp("dll");
             c.name = "scal_mlp_3";
             c.arch = "mlp:784,1024,10";
             return c;
         }},
        {"scal_mlp_4",
         [] {
             ExperimentConfig c = mnist_mlp("dll");
             c.name = "scal_mlp_4";
             c.arch = "mlp:784,1024,512,10";
             return c;
         }},
        {"scal_mlp_5",
         [] {
             ExperimentConfig c = mnist_mlp("dll");
             c.name = "scal_mlp_5";
             c.arch = "mlp:784,1024,512,256,10";
             return c;
         }},
        {"char_rnn_dll",
         [] {
             ExperimentConfig c;
             c.name = "char_rnn_dll";
             c.algorithm = "dll";
             c.arch = "rnn";
             c.dataset = "chars";
             c.corpus_path = "data/corpus.txt";
             c.hidden_size = 324;
             c.window_len = 50;
             c.lr_w = 1e-4;
             c.batch_size = 32;
             c.epochs = 50;
             c.schedule = "cosine";
             return c;
         }},
        {"ts_rnn_dll",
         [] {
             ExperimentConfig c;
             c.name = "ts_rnn_dll";
             c.algorithm = "dll";
             c.arch = "rnn";
             c.dataset = "timeseries";
             c.csv_path = "data/series.csv";
             c.hidden_size = 300;
             c.input_len = 24;
             c.horizon = 1;
             c.lr_w = 5e-5;
             c.batch_size = 32;
             c.epochs = 50;
             c.schedule = "cosine";
             return c;
         }},
        {"synth_mlp_dll", [] { return synth_mlp("dll"); }},
        {"synth_mlp_bp", [] { return synth_mlp("bp"); }},
        {"synth_mlp_fa", [] { return synth_mlp("fa"); }},
        {"synth_mlp_dllfa", [] { return synth_mlp("dll_fa"); }},
        {"synth_char_rnn_dll",
         [] {
             ExperimentConfig c;
             c.name = "synth_char_rnn_dll";
             c.algorithm = "dll";
             c.arch = "rnn";
             c.dataset = "synth_chars";
             c.hidden_size = 128;
             c.window_len = 40;
             c.lr_w = 2e-3;
             c.batch_size = 32;
             c.epochs = 3;
             c.schedule = "cosine";
             c.limit_train = 3000;
             c.limit_test = 400;
             return c;
         }},
        {"synth_ts_rnn_dll",
         [] {
             ExperimentConfig c;
             c.name = "synth_ts_rnn_dll";
             c.algorithm = "dll";
             c.arch = "rnn";
             c.dataset = "synth_ts";
             c.hidden_size = 64;
             c.input_len = 24;
             c.horizon = 1;
             c.lr_w = 2e-3;
             c.batch_size = 32;
             c.epochs = 8;
             c.schedule = "cosine";
             c.limit_train = 1500;
             c.limit_test = 300;
             return c;
         }},
        // Tiny tied-backward-weights network for the gradient-check gate.
        {"tiny_mlp_tied",
         [] {
             ExperimentConfig c;
             c.name = "tiny_mlp_tied";
             c.algorithm = "dll";
             c.arch = "mlp:6,5,4,3";
             c.dataset = "synth_blobs";
             c.synth_dim = 6;
             c.synth_classes = 3;
             c.synth_train = 32;
             c.synth_test = 32;
             c.batch_size = 8;
             c.epochs = 1;
             c.schedule = "constant";
             return c;
         }},
    };
    return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

ExperimentConfig preset(const std::string& name) {
    std::string key = name;
    for (char& ch : key) {
        if (ch == '-') ch = '_';
    }
    const auto it = registry().find(key);
    if (it == registry().end()) throw ConfigError("unknown preset '" + name + "'");
    ExperimentConfig c = it->second();
    c.validate();
    return c;
}

}  // namespace dll
