#include "dll/data/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dll/errors.hpp"

namespace dll {

namespace {

double gaussian(SeededRng& rng) {
    // Box-Muller; both uniforms strictly inside (0,1].
    const double u1 = 1.0 - rng.uniform(0.0, 1.0);
    const double u2 = rng.uniform(0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

LabeledImageSet blobs(std::size_t n, std::size_t dim, std::size_t classes, double noise,
                      const std::vector<double>& centers, SeededRng& rng) {
    LabeledImageSet set;
    set.class_count = classes;
    set.images = Tensor({n, 1, 1, dim});
    set.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cls = static_cast<std::size_t>(rng.below(classes));
        set.labels[i] = static_cast<int>(cls);
        scalar* row = set.images.data() + i * dim;
        for (std::size_t d = 0; d < dim; ++d) {
            double v = centers[cls * dim + d] + noise * gaussian(rng);
            v = std::min(1.0, std::max(0.0, v));
            row[d] = static_cast<scalar>(v);
        }
    }
    return set;
}

}  // namespace

std::pair<LabeledImageSet, LabeledImageSet> make_synth_blobs(std::size_t train_n, std::size_t test_n,
                                                             std::size_t dim, std::size_t classes,
                                                             double noise, std::uint64_t seed) {
    if (classes < 2 || dim == 0 || train_n == 0 || test_n == 0) {
        throw ConfigError("synth blobs: need >=2 classes and positive sizes");
    }
    SeededRng center_rng = SeededRng(seed).derive(1);
    std::vector<double> centers(classes * dim);
    for (auto& c : centers) c = center_rng.uniform(0.15, 0.85);

    SeededRng train_rng = SeededRng(seed).derive(2);
    SeededRng test_rng = SeededRng(seed).derive(3);
    return {blobs(train_n, dim, classes, noise, centers, train_rng),
            blobs(test_n, dim, classes, noise, centers, test_rng)};
}

std::string make_synth_text(std::size_t bytes, std::uint64_t seed) {
    if (bytes < 64) throw ConfigError("synth text: too few bytes requested");
    static const char* kSyllables[] = {"ba", "ke", "li", "mo", "nu", "pra", "sto", "vin",
                                       "zor", "tha", "qui", "fen", "gla", "dro", "cys", "wex"};
    constexpr std::size_t kSyllableCount = sizeof(kSyllables) / sizeof(kSyllables[0]);
    constexpr std::size_t kWords = 48;

    SeededRng rng(seed);
    SeededRng word_rng = rng.derive(11);
    std::vector<std::string> words(kWords);
    for (auto& w : words) {
        const std::size_t parts = 2 + word_rng.below(3);
        for (std::size_t p = 0; p < parts; ++p) w += kSyllables[word_rng.below(kSyllableCount)];
    }

    // Low-entropy word chain: from each word, three likely successors.
    SeededRng chain_rng = rng.derive(12);
    std::vector<std::array<std::size_t, 3>> successors(kWords);
    for (auto& s : successors) {
        for (auto& v : s) v = chain_rng.below(kWords);
    }

    SeededRng walk_rng = rng.derive(13);
    std::string text;
    text.reserve(bytes + 32);
    std::size_t word = walk_rng.below(kWords);
    std::size_t sentence_len = 0;
    while (text.size() < bytes) {
        text += words[word];
        ++sentence_len;
        if (sentence_len >= 6 + walk_rng.below(7)) {
            text += ".\n";
            sentence_len = 0;
        } else {
            text += ' ';
        }
        const std::uint64_t roll = walk_rng.below(10);
        word = roll < 9 ? successors[word][roll % 3] : walk_rng.below(kWords);
    }
    text.resize(bytes);
    return text;
}

std::string make_synth_series_csv(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows < 8 || cols == 0) throw ConfigError("synth series: too small");
    SeededRng rng(seed);
    std::vector<double> slow_period(cols), fast_period(cols), phase(cols), level(cols), amp(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        slow_period[c] = 40.0 + rng.uniform(0.0, 60.0);
        fast_period[c] = 4.0 + rng.uniform(0.0, 3.0);
        phase[c] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        level[c] = rng.uniform(-2.0, 2.0);
        amp[c] = rng.uniform(0.5, 1.5);
    }
    SeededRng noise_rng = rng.derive(7);
    std::ostringstream out;
    out << "timestamp";
    for (std::size_t c = 0; c < cols; ++c) out << ",s" << c;
    out << "\n";
    out.precision(10);
    for (std::size_t r = 0; r < rows; ++r) {
        out << "t" << r;
        for (std::size_t c = 0; c < cols; ++c) {
            const double t = static_cast<double>(r);
            const double v = level[c] + amp[c] * std::sin(2.0 * std::numbers::pi * t / slow_period[c] + phase[c]) +
                             0.8 * amp[c] * std::sin(2.0 * std::numbers::pi * t / fast_period[c]) +
                             0.03 * gaussian(noise_rng);
            out << "," << v;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace dll
