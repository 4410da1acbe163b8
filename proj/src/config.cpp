#include <fstream>
#include <sstream>

#include "dll/errors.hpp"
#include "dll/train/experiment.hpp"
#include "dll/train/metrics.hpp"

namespace dll {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::size_t parse_size(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long n = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "': expected on|off, got '" + v + "'");
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "name") name = value;
    else if (key == "algorithm") algorithm = value;
    else if (key == "arch") arch = value;
    else if (key == "dataset") dataset = value;
    else if (key == "data_dir") data_dir = value;
    else if (key == "corpus_path") corpus_path = value;
    else if (key == "csv_path") csv_path = value;
    else if (key == "hidden_size") hidden_size = parse_size(key, value);
    else if (key == "window_len") window_len = parse_size(key, value);
    else if (key == "window_stride") window_stride = parse_size(key, value);
    else if (key == "input_len") input_len = parse_size(key, value);
    else if (key == "horizon") horizon = parse_size(key, value);
    else if (key == "lr_w") lr_w = parse_double(key, value);
    else if (key == "lr_theta") lr_theta = parse_double(key, value);
    else if (key == "batch_size") batch_size = parse_size(key, value);
    else if (key == "epochs") epochs = parse_size(key, value);
    else if (key == "stop_epoch") stop_epoch = parse_size(key, value);
    else if (key == "seed") seed = parse_size(key, value);
    else if (key == "schedule") schedule = value;
    else if (key == "relaxation") relaxation = parse_bool(key, value);
    else if (key == "relax_steps") relax_steps = parse_size(key, value);
    else if (key == "lr_x") lr_x = parse_double(key, value);
    else if (key == "optimizer") optimizer = value;
    else if (key == "out_dir") out_dir = value;
    else if (key == "resume") resume = value;
    else if (key == "limit_train") limit_train = parse_size(key, value);
    else if (key == "limit_test") limit_test = parse_size(key, value);
    else if (key == "eval_batch") eval_batch = parse_size(key, value);
    else if (key == "synth_train") synth_train = parse_size(key, value);
    else if (key == "synth_test") synth_test = parse_size(key, value);
    else if (key == "synth_dim") synth_dim = parse_size(key, value);
    else if (key == "synth_classes") synth_classes = parse_size(key, value);
    else if (key == "synth_noise") synth_noise = parse_double(key, value);
    else if (key == "synth_text_bytes") synth_text_bytes = parse_size(key, value);
    else if (key == "synth_rows") synth_rows = parse_size(key, value);
    else if (key == "synth_cols") synth_cols = parse_size(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
    trainer_kind_from_string(algorithm);
    schedule_from_string(schedule);
    if (optimizer != "adam" && optimizer != "sgd") {
        throw ConfigError("optimizer must be adam or sgd, got '" + optimizer + "'");
    }
    if (lr_w <= 0) throw ConfigError("lr_w must be positive");
    if (lr_theta < 0) throw ConfigError("lr_theta must be >= 0 (0 means: same as lr_w)");
    if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
    if (relaxation && relax_steps == 0) throw ConfigError("relax_steps must be >= 1 in relaxation mode");
    if (stop_epoch > epochs) throw ConfigError("stop_epoch must not exceed epochs");
    if (relaxation && lr_x <= 0) throw ConfigError("lr_x must be positive in relaxation mode");

    const bool is_mlp = arch.rfind("mlp:", 0) == 0;
    const bool is_cnn = arch.rfind("cnn:", 0) == 0;
    const bool is_rnn = arch == "rnn";
    if (!is_mlp && !is_cnn && !is_rnn) {
        throw ConfigError("arch must be mlp:<sizes>, cnn:<name> or rnn, got '" + arch + "'");
    }
    const bool seq_data = dataset == "chars" || dataset == "synth_chars" || dataset == "timeseries" ||
                          dataset == "synth_ts";
    if (is_rnn != seq_data) {
        throw ConfigError("arch '" + arch + "' does not fit dataset '" + dataset + "'");
    }
    if (dataset == "chars" && corpus_path.empty()) throw ConfigError("dataset=chars needs corpus_path");
    if (dataset == "timeseries" && csv_path.empty()) throw ConfigError("dataset=timeseries needs csv_path");
    if (is_rnn && hidden_size == 0) throw ConfigError("hidden_size must be positive");
    if ((dataset == "chars" || dataset == "synth_chars") && window_len == 0) {
        throw ConfigError("window_len must be positive");
    }
    if ((dataset == "timeseries" || dataset == "synth_ts") && (input_len == 0 || horizon == 0)) {
        throw ConfigError("input_len and horizon must be positive");
    }
    const TrainerKind kind = trainer_kind_from_string(algorithm);
    if (kind == TrainerKind::FA && is_rnn) {
        throw ConfigError("feedback alignment is not supported for RNNs");
    }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("name", name);
    kv.emplace_back("algorithm", algorithm);
    kv.emplace_back("arch", arch);
    kv.emplace_back("dataset", dataset);
    kv.emplace_back("data_dir", data_dir);
    if (!corpus_path.empty()) kv.emplace_back("corpus_path", corpus_path);
    if (!csv_path.empty()) kv.emplace_back("csv_path", csv_path);
    kv.emplace_back("hidden_size", std::to_string(hidden_size));
    kv.emplace_back("window_len", std::to_string(window_len));
    kv.emplace_back("window_stride", std::to_string(window_stride));
    kv.emplace_back("input_len", std::to_string(input_len));
    kv.emplace_back("horizon", std::to_string(horizon));
    kv.emplace_back("lr_w", num(lr_w));
    kv.emplace_back("lr_theta", num(effective_lr_theta()));
    kv.emplace_back("batch_size", std::to_string(batch_size));
    kv.emplace_back("epochs", std::to_string(epochs));
    if (stop_epoch) kv.emplace_back("stop_epoch", std::to_string(stop_epoch));
    kv.emplace_back("seed", std::to_string(seed));
    kv.emplace_back("schedule", schedule);
    kv.emplace_back("relaxation", relaxation ? "on" : "off");
    kv.emplace_back("relax_steps", std::to_string(relax_steps));
    kv.emplace_back("lr_x", num(lr_x));
    kv.emplace_back("optimizer", optimizer);
    kv.emplace_back("out_dir", out_dir);
    if (!resume.empty()) kv.emplace_back("resume", resume);
    kv.emplace_back("limit_train", std::to_string(limit_train));
    kv.emplace_back("limit_test", std::to_string(limit_test));
    kv.emplace_back("eval_batch", std::to_string(eval_batch));
    if (dataset == "synth_blobs") {
        kv.emplace_back("synth_train", std::to_string(synth_train));
        kv.emplace_back("synth_test", std::to_string(synth_test));
        kv.emplace_back("synth_dim", std::to_string(synth_dim));
        kv.emplace_back("synth_classes", std::to_string(synth_classes));
        kv.emplace_back("synth_noise", num(synth_noise));
    }
    if (dataset == "synth_chars") kv.emplace_back("synth_text_bytes", std::to_string(synth_text_bytes));
    if (dataset == "synth_ts") {
        kv.emplace_back("synth_rows", std::to_string(synth_rows));
        kv.emplace_back("synth_cols", std::to_string(synth_cols));
    }
    return kv;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        config.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace dll
