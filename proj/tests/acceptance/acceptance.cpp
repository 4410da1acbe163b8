// Acceptance suite: one line per criterion, [PASS]/[FAIL]/[SKIP], exit 0 iff
// nothing failed. Property criteria always run. The quantitative MNIST /
// FashionMNIST reproductions need the standard dataset files under
// $DLL_DATA_DIR (default ./data) and are skipped with a message when the
// files are absent; every threshold is pinned here regardless.
//
// Optional environment:
//   DLL_DATA_DIR     dataset root (mnist/, fashion-mnist/ subdirectories)
//   DLL_CHAR_CORPUS  >=1MB plain-text corpus for the character-model floor
//   DLL_TS_CSV       timestamp+numeric-columns CSV for the forecasting floor
//   DLL_ACCEPT_FAST  "1" trims the property-suite trial counts (debugging)

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <vector>

#include "dll/data/batching.hpp"
#include "dll/data/synth.hpp"
#include "dll/nn/conv.hpp"
#include "dll/nn/network.hpp"
#include "dll/nn/pool.hpp"
#include "dll/nn/rnn.hpp"
#include "dll/train/baselines.hpp"
#include "dll/train/checkpoint.hpp"
#include "dll/train/experiment.hpp"
#include "dll/train/gradcheck.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace dll;

namespace {

int failures = 0;
int skips = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ": " << detail << std::endl;
    if (!pass) ++failures;
}

void skip(const std::string& id, const std::string& why) {
    std::cout << "[SKIP] " << id << ": " << why << std::endl;
    ++skips;
}

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string data_dir() {
    const char* env = std::getenv("DLL_DATA_DIR");
    return env && *env ? env : "data";
}

bool fast_mode() {
    const char* env = std::getenv("DLL_ACCEPT_FAST");
    return env && std::string(env) == "1";
}

bool mnist_present() {
    const std::string dir = data_dir() + "/mnist";
    for (const char* base : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                             "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"}) {
        if (!fs::exists(dir + "/" + base) && !fs::exists(dir + "/" + std::string(base) + ".gz")) {
            return false;
        }
    }
    return true;
}

bool fashion_present() {
    const std::string dir = data_dir() + "/fashion-mnist";
    for (const char* base : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                             "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"}) {
        if (!fs::exists(dir + "/" + base) && !fs::exists(dir + "/" + std::string(base) + ".gz")) {
            return false;
        }
    }
    return true;
}

std::string out_dir() {
    const std::string dir = (fs::temp_directory_path() / "dll_acceptance").string();
    fs::create_directories(dir);
    return dir;
}

std::string pct(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v * 100 << "%";
    return s.str();
}

// ---------------------------------------------------------------- criteria

void criterion_1_tied_mlp() {
    const int trials = fast_mode() ? 2 : 6;
    double worst = 0;
    SeededRng sizes_rng(0xACC1);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<std::size_t> sizes;
        const std::size_t depth = 2 + sizes_rng.below(3);  // 2..4 weighted layers
        for (std::size_t i = 0; i <= depth; ++i) sizes.push_back(1 + sizes_rng.below(8));
        Network net = build_mlp(sizes, 9000 + trial);
        SeededRng rng(100 + trial);
        const Tensor x = oracles::random_tensor({3, sizes.front()}, rng);
        const Tensor t = oracles::random_tensor({3, sizes.back()}, rng);
        worst = std::max(worst, gradcheck_network(TrainerKind::DLL, net, x, t).max_rel_err);
    }
    std::ostringstream d;
    d << "tied-weight MLP vs finite differences, max rel err " << worst << " (<= 1e-5)";
    report("criterion 1", worst <= 1e-5, d.str());
}

void criterion_2_tied_conv() {
    SeededRng rng(0xACC2);
    Network net;
    {
        SeededRng r1 = rng.derive(1), r2 = rng.derive(2);
        net.add(std::make_unique<ConvLayer>(1, 2, 2, 1, 0, Activation::Tanh, r1));
        net.add(std::make_unique<PoolLayer>(PoolKind::Max, 2));
        net.add(std::make_unique<FlattenLayer>());
        net.add(std::make_unique<DenseLayer>(10, 3, Activation::Linear, r2));
    }
    SeededRng data_rng(0xACC2 + 1);
    const Tensor x = oracles::random_tensor({2, 1, 11, 3}, data_rng);
    const Tensor t = oracles::random_tensor({2, 3}, data_rng);
    const double err = gradcheck_network(TrainerKind::DLL, net, x, t).max_rel_err;
    std::ostringstream d;
    d << "tied-weight conv->maxpool->dense(10->3) vs finite differences, max rel err " << err
      << " (<= 1e-5)";
    report("criterion 2", err <= 1e-5, d.str());
}

void criterion_3_tied_rnn() {
    double worst = 0;
    for (const auto& [d_in, hidden, d_out, n] :
         std::vector<std::array<std::size_t, 4>>{{1, 1, 1, 3}, {2, 4, 2, 5}, {2, 6, 3, 4}}) {
        RnnCell cell = build_rnn_cell(d_in, hidden, d_out, 7000 + n);
        SeededRng rng(200 + n);
        std::vector<Tensor> xs, ts;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(oracles::random_tensor({2, d_in}, rng));
            ts.push_back(oracles::random_tensor({2, d_out}, rng));
        }
        worst = std::max(worst, gradcheck_rnn(cell, xs, ts).max_rel_err);
    }
    std::ostringstream d;
    d << "tied-weight RNN updates vs BPTT finite differences, max rel err " << worst << " (<= 1e-5)";
    report("criterion 3", worst <= 1e-5, d.str());
}

void criterion_4_fixed_point() {
    // Dense: assigned errors must zero the relaxation direction exactly.
    Network net = build_mlp({5, 7, 6, 3}, 0xACC4);
    SeededRng rng(300);
    net.forward(oracles::random_tensor({3, 5}, rng));
    const Tensor target = oracles::random_tensor({3, 3}, rng);
    const auto xi = net.assign_errors(net.output_error(target), ErrorRoute::BackwardWeights);
    double worst_dx = 0;
    for (std::size_t i = 1; i < net.layer_count(); ++i) {
        auto* d = dynamic_cast<DenseLayer*>(&net.layer(i));
        const Tensor gated = hadamard(xi[i + 1], d->cached_fprime());
        worst_dx = std::max(worst_dx,
                            static_cast<double>(max_abs(sub(matmul(gated, d->backward_weights()), xi[i]))));
    }

    // RNN: relaxation must land on the direct assignment.
    RnnCell cell = build_rnn_cell(2, 4, 2, 0xACC4);
    std::vector<Tensor> xs, ts;
    for (int i = 0; i < 4; ++i) {
        xs.push_back(oracles::random_tensor({2, 2}, rng));
        ts.push_back(oracles::random_tensor({2, 2}, rng));
    }
    UnrolledPass direct = rnn_forward(cell, xs, Tensor::zeros({2, 4}));
    rnn_errors(cell, direct, ts);
    UnrolledPass relaxed = direct;
    rnn_relax_hidden(cell, relaxed, ts, 50, 0.5);
    double worst_rnn = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        worst_rnn = std::max(worst_rnn, oracles::max_abs_diff(direct.xi_h[i], relaxed.xi_h[i]));
    }

    std::ostringstream d;
    d << "direct assignment zeroes the relaxation direction (max " << worst_dx
      << " <= 1e-12); rnn relaxation converges to the assignment (max " << worst_rnn << " <= 1e-6)";
    report("criterion 4", worst_dx <= 1e-12 && worst_rnn <= 1e-6, d.str());
}

void criterion_5_module_properties() {
    bool ok = true;
    std::ostringstream d;

    // Zero-error absorption.
    {
        Network net = build_mlp({4, 6, 3}, 0xACC5);
        NetworkTrainer trainer(net, TrainerKind::DLL, DllHyper{}, true);
        SeededRng rng(500);
        const Tensor x = oracles::random_tensor({3, 4}, rng);
        const Tensor t = net.forward(x);
        std::vector<Tensor> before;
        for (const ParamRef& p : net.params()) before.push_back(*p.value);
        trainer.step(x, t, 1e-3, 1e-3);
        std::size_t at = 0;
        bool frozen = true;
        for (const ParamRef& p : net.params()) frozen = frozen && *p.value == before[at++];
        ok = ok && frozen;
        d << "zero-error absorption " << (frozen ? "ok" : "VIOLATED");
    }

    // Determinism.
    {
        auto run = [] {
            Network net = build_mlp({4, 5, 3}, 0xACC5 + 1);
            NetworkTrainer trainer(net, TrainerKind::DLL, DllHyper{}, true);
            SeededRng rng(501);
            for (int i = 0; i < 4; ++i) {
                trainer.step(oracles::random_tensor({2, 4}, rng), oracles::random_tensor({2, 3}, rng),
                             1e-3, 1e-3);
            }
            return dynamic_cast<DenseLayer&>(net.layer(0)).weights();
        };
        const bool det = run() == run();
        ok = ok && det;
        d << "; determinism " << (det ? "ok" : "VIOLATED");
    }

    // Batch-mean consistency.
    {
        Network net = build_mlp({3, 4, 2}, 0xACC5 + 2);
        SeededRng rng(502);
        const Tensor x = oracles::random_tensor({2, 3}, rng);
        const Tensor t = oracles::random_tensor({2, 2}, rng);
        net.forward(x);
        net.compute_local_updates(net.assign_errors(net.output_error(t), ErrorRoute::BackwardWeights),
                                  true);
        std::vector<Tensor> batch;
        for (const ParamRef& p : net.params()) batch.push_back(*p.delta);
        std::vector<Tensor> mean;
        for (std::size_t s = 0; s < 2; ++s) {
            Tensor xs({1, 3}), ts({1, 2});
            for (std::size_t j = 0; j < 3; ++j) xs.at(0, j) = x.at(s, j);
            for (std::size_t j = 0; j < 2; ++j) ts.at(0, j) = t.at(s, j);
            net.forward(xs);
            net.compute_local_updates(net.assign_errors(net.output_error(ts), ErrorRoute::BackwardWeights),
                                      true);
            std::size_t at = 0;
            for (const ParamRef& p : net.params()) {
                if (mean.size() <= at) mean.push_back(Tensor(p.delta->shape()));
                add_scaled(mean[at], *p.delta, 0.5);
                ++at;
            }
        }
        double worst = 0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            worst = std::max(worst, oracles::max_abs_diff(batch[i], mean[i]));
        }
        ok = ok && worst <= 1e-12;
        d << "; batch-mean max dev " << worst << (worst <= 1e-12 ? " ok" : " VIOLATED");
    }

    // Pooling error conservation.
    {
        SeededRng rng(503);
        double worst = 0;
        for (PoolKind kind : {PoolKind::Max, PoolKind::Avg}) {
            PoolLayer pool(kind, 2);
            const Tensor in = oracles::random_tensor({2, 2, 6, 6}, rng);
            const Tensor out = pool.forward(in);
            const Tensor err = oracles::random_tensor(out.shape(), rng);
            pool.gate_error(err);
            worst = std::max(worst, oracles::rel_err(sum(pool.propagate_error(ErrorRoute::ForwardWeights)),
                                                     sum(err)));
        }
        ok = ok && worst <= 1e-12;
        d << "; pooling conservation " << (worst <= 1e-12 ? "ok" : "VIOLATED");
    }

    // im2col adjointness.
    {
        SeededRng rng(504);
        double worst = 0;
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t c = 1 + rng.below(2), h = 3 + rng.below(4), w = 3 + rng.below(4);
            const std::size_t k = 1 + rng.below(3), stride = 1 + rng.below(2), pad = rng.below(2);
            if (h + 2 * pad < k || w + 2 * pad < k) continue;
            const ConvGeom g{c, h, w, k, stride, pad};
            const Tensor b = oracles::random_tensor({c, h, w}, rng);
            const Tensor a = oracles::random_tensor({g.patch(), g.positions()}, rng);
            worst = std::max(worst,
                             oracles::rel_err(dot(col2im(a, g), b), dot(a, im2col(b, k, stride, pad))));
        }
        ok = ok && worst <= 1e-10;
        d << "; im2col adjointness max rel " << worst << (worst <= 1e-10 ? " ok" : " VIOLATED");
    }

    report("criterion 5", ok, d.str());
}

void criterion_6_dllfa_freeze() {
    const bool real = mnist_present();
    ExperimentConfig c;
    if (real) {
        c = preset("mnist_mlp_dllfa");
        c.data_dir = data_dir();
        c.epochs = 1;
    } else {
        c = preset("synth_mlp_dllfa");
        c.epochs = 1;
        c.synth_train = 4096;
    }

    // Drive one full epoch through the trainer and compare the backward
    // weights bit for bit.
    auto [train, test] = make_synth_blobs(c.dataset == "synth_blobs" ? c.synth_train : 1, 1, c.synth_dim,
                                          c.synth_classes, c.synth_noise, c.seed ^ 0xb10b5);
    Network net = real ? build_mlp({784, 1024, 512, 256, 10}, c.seed)
                       : build_network_for(c, train.feature_size(), train.class_count);
    auto trainer = make_trainer(net, TrainerKind::DLL_FA, DllHyper{}, true);

    std::vector<Tensor> theta_before;
    for (const ParamRef& p : net.params()) {
        if (p.backward_weight) theta_before.push_back(*p.value);
    }

    if (real) {
        c.out_dir = out_dir();
        c.name = "accept_dllfa_freeze";
        const RunResult r = run_experiment(c);
        // Reload the trained checkpoint and compare its backward weights to a
        // fresh build with the same seed.
        Network fresh = build_mlp({784, 1024, 512, 256, 10}, c.seed);
        const Checkpoint ckpt = load_checkpoint(r.checkpoint_path);
        bool frozen = true;
        auto fresh_params = fresh.params();
        for (std::size_t i = 0; i < ckpt.params.size(); ++i) {
            if (!fresh_params[i].backward_weight) continue;
            frozen = frozen && ckpt.params[i].second == *fresh_params[i].value;
        }
        report("criterion 6", frozen,
               "DLL-FA backward weights bit-identical across a full MNIST epoch");
        return;
    }

    SeededRng rng(600);
    const BatchPlan plan = BatchPlan::make(train.count(), 64, 600);
    for (std::size_t k = 0; k < plan.batch_count(); ++k) {
        const auto ids = plan.batch(k);
        Tensor xb(Shape{ids.size(), train.feature_size()});
        Tensor tb(Shape{ids.size(), train.class_count});
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const scalar* src = train.images.data() + ids[i] * train.feature_size();
            std::copy(src, src + train.feature_size(), xb.data() + i * train.feature_size());
            tb.at(i, static_cast<std::size_t>(train.labels[ids[i]])) = 1;
        }
        trainer->step(xb, tb, 2e-3, 2e-3);
    }
    bool frozen = true;
    std::size_t at = 0;
    for (const ParamRef& p : net.params()) {
        if (p.backward_weight) frozen = frozen && *p.value == theta_before[at++];
    }
    report("criterion 6", frozen,
           "DLL-FA backward weights bit-identical across a full epoch "
           "(synthetic stand-in: MNIST files not found under " +
               data_dir() + "/mnist)");
}

struct MnistRuns {
    std::map<std::string, RunResult> results;
};

const RunResult* run_mnist_preset(MnistRuns& cache, const std::string& name, std::size_t epochs = 0) {
    if (cache.results.count(name)) return &cache.results.at(name);
    ExperimentConfig c = preset(name);
    c.data_dir = data_dir();
    c.out_dir = out_dir();
    if (epochs) c.epochs = epochs;
    std::cout << "       running " << name << " (" << c.epochs << " epochs)..." << std::endl;
    cache.results[name] = run_experiment(c);
    return &cache.results.at(name);
}

void criterion_7_mnist_dll(MnistRuns& cache) {
    if (!mnist_present()) {
        skip("criterion 7", "MNIST files not found under " + data_dir() + "/mnist");
        return;
    }
    const double t0 = now_seconds();
    const RunResult* r = run_mnist_preset(cache, "mnist_mlp_dll");
    const double minutes = (now_seconds() - t0) / 60.0;
    const double acc = r->final_metrics.at("accuracy");
    const bool time_ok = minutes <= 45.0;
    std::ostringstream d;
    d << "MNIST MLP (local rule) accuracy " << pct(acc) << " (>= 96.5%), " << r->rows.size()
      << " epochs (<= 30), " << minutes << " min (<= 45)";
    report("criterion 7", acc >= 0.965 && r->rows.size() <= 30 && time_ok, d.str());

    // Harness invariant: window-smoothed training loss non-increasing
    // epoch-over-epoch after epoch 2.
    bool non_increasing = true;
    for (std::size_t e = 3; e < r->rows.size(); ++e) {
        if (r->rows[e].train_loss > r->rows[e - 1].train_loss * 1.0001) non_increasing = false;
    }
    report("criterion 7b", non_increasing, "training loss non-increasing epoch-over-epoch after epoch 2");
}

void criterion_8_mnist_bp(MnistRuns& cache) {
    if (!mnist_present()) {
        skip("criterion 8", "MNIST files not found under " + data_dir() + "/mnist");
        return;
    }
    const RunResult* r = run_mnist_preset(cache, "mnist_mlp_bp");
    const double acc = r->final_metrics.at("accuracy");
    report("criterion 8", acc >= 0.98, "MNIST MLP backprop accuracy " + pct(acc) + " (>= 98.0%)");
}

void criterion_9_mnist_fa(MnistRuns& cache) {
    if (!mnist_present()) {
        skip("criterion 9", "MNIST files not found under " + data_dir() + "/mnist");
        return;
    }
    const RunResult* r = run_mnist_preset(cache, "mnist_mlp_fa");
    const double acc = r->final_metrics.at("accuracy");
    report("criterion 9", acc >= 0.90, "MNIST MLP feedback alignment accuracy " + pct(acc) + " (>= 90.0%)");
}

void criterion_10_mnist_dllfa(MnistRuns& cache) {
    if (!mnist_present()) {
        skip("criterion 10", "MNIST files not found under " + data_dir() + "/mnist");
        return;
    }
    const RunResult* dll = run_mnist_preset(cache, "mnist_mlp_dll");
    const RunResult* dllfa = run_mnist_preset(cache, "mnist_mlp_dllfa");
    const double a = dll->final_metrics.at("accuracy");
    const double b = dllfa->final_metrics.at("accuracy");
    std::ostringstream d;
    d << "frozen backward weights " << pct(b) << " vs trained " << pct(a) << " (within 1.5 points)";
    report("criterion 10", b >= a - 0.015, d.str());
}

void criterion_11_mnist_cnn(MnistRuns& cache) {
    if (!mnist_present()) {
        skip("criterion 11", "MNIST files not found under " + data_dir() + "/mnist");
        return;
    }
    const double t0 = now_seconds();
    const RunResult* r = run_mnist_preset(cache, "mnist_cnn_dll");
    const double hours = (now_seconds() - t0) / 3600.0;
    const double acc = r->final_metrics.at("accuracy");
    std::ostringstream d;
    d << "MNIST CNN (local rule) accuracy " << pct(acc) << " (>= 98.0%), " << r->rows.size()
      << " epochs (<= 50), " << hours << " h (<= 3)";
    report("criterion 11", acc >= 0.98 && r->rows.size() <= 50 && hours <= 3.0, d.str());
}

void criterion_12_scalability(MnistRuns& cache) {
    if (!mnist_present()) {
        skip("criterion 12", "MNIST files not found under " + data_dir() + "/mnist");
        return;
    }
    const double a3 = run_mnist_preset(cache, "scal_mlp_3")->final_metrics.at("accuracy");
    const double a4 = run_mnist_preset(cache, "scal_mlp_4")->final_metrics.at("accuracy");
    const double a5 = run_mnist_preset(cache, "scal_mlp_5")->final_metrics.at("accuracy");
    std::ostringstream d;
    d << "matched-budget depth ladder " << pct(a3) << " < " << pct(a4) << " < " << pct(a5);
    report("criterion 12", a3 < a4 && a4 < a5, d.str());
}

void criterion_13_fashion(MnistRuns& cache) {
    if (!fashion_present()) {
        skip("criterion 13", "FashionMNIST files not found under " + data_dir() + "/fashion-mnist");
        return;
    }
    const RunResult* r = run_mnist_preset(cache, "fashion_mlp_dll");
    const double acc = r->final_metrics.at("accuracy");
    report("criterion 13", acc >= 0.855, "FashionMNIST MLP accuracy " + pct(acc) + " (>= 85.5%)");
}

void substitute_char_floor() {
    const char* corpus_env = std::getenv("DLL_CHAR_CORPUS");
    ExperimentConfig c = preset("synth_char_rnn_dll");
    c.out_dir = out_dir();
    std::string source = "built-in synthetic corpus";
    if (corpus_env && *corpus_env) {
        if (!fs::exists(corpus_env) || fs::file_size(corpus_env) < (1 << 20)) {
            skip("substitute char-rnn", std::string("DLL_CHAR_CORPUS=") + corpus_env +
                                            " missing or smaller than 1 MB");
            return;
        }
        c.dataset = "chars";
        c.corpus_path = corpus_env;
        c.name = "accept_char_rnn";
        source = corpus_env;
    }
    const RunResult r = run_experiment(c);
    const double acc = r.final_metrics.at("accuracy");
    const double modal = r.final_metrics.at("modal_accuracy");
    std::ostringstream d;
    d << "next-character accuracy " << pct(acc) << " vs most-frequent-successor baseline " << pct(modal)
      << " (margin >= 5 points; corpus: " << source << ")";
    report("substitute char-rnn", acc >= modal + 0.05, d.str());
}

void substitute_ts_floor() {
    const char* csv_env = std::getenv("DLL_TS_CSV");
    ExperimentConfig c = preset("synth_ts_rnn_dll");
    c.out_dir = out_dir();
    std::string source = "built-in synthetic series";
    if (csv_env && *csv_env) {
        if (!fs::exists(csv_env)) {
            skip("substitute ts-rnn", std::string("DLL_TS_CSV=") + csv_env + " not found");
            return;
        }
        c.dataset = "timeseries";
        c.csv_path = csv_env;
        c.name = "accept_ts_rnn";
        c.hidden_size = 300;
        c.epochs = 3;
        c.limit_train = 1500;
        c.limit_test = 500;
        source = csv_env;
    }
    const RunResult r = run_experiment(c);
    const double mse = r.final_metrics.at("mse");
    const double mae = r.final_metrics.at("mae");
    const double persistence = r.final_metrics.at("persistence_mse");
    std::ostringstream d;
    d << "normalized forecast MSE " << mse << " vs persistence " << persistence
      << " (must be lower; series: " << source << ")";
    report("substitute ts-rnn", mse < persistence, d.str());
    if (csv_env && *csv_env) {
        std::cout << "       reported without a gate: MSE " << mse << " / MAE " << mae
                  << " (reference RNN results on Electricity-class benchmarks: ~0.172 / ~0.321)"
                  << std::endl;
    }
}

}  // namespace

int main() {
    std::cout << "acceptance suite (dataset root: " << data_dir() << ")" << std::endl;

    criterion_1_tied_mlp();
    criterion_2_tied_conv();
    criterion_3_tied_rnn();
    criterion_4_fixed_point();
    criterion_5_module_properties();
    criterion_6_dllfa_freeze();

    MnistRuns cache;
    criterion_7_mnist_dll(cache);
    criterion_8_mnist_bp(cache);
    criterion_9_mnist_fa(cache);
    criterion_10_mnist_dllfa(cache);
    criterion_11_mnist_cnn(cache);
    criterion_12_scalability(cache);
    criterion_13_fashion(cache);

    substitute_char_floor();
    substitute_ts_floor();

    std::cout << "acceptance summary: " << failures << " failed, " << skips << " skipped" << std::endl;
    return failures == 0 ? 0 : 1;
}
