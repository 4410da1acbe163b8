#include "dll/data/char_corpus.hpp"

#include <algorithm>
#include <array>

#include "dll/errors.hpp"

namespace dll {

std::vector<std::uint16_t> SequenceCorpus::input_ids(std::size_t p) const {
    if (p >= example_count()) throw InputError("window start out of range");
    return {encoded.begin() + p, encoded.begin() + p + window_len};
}

std::vector<std::uint16_t> SequenceCorpus::target_ids(std::size_t p) const {
    if (p >= example_count()) throw InputError("window start out of range");
    return {encoded.begin() + p + 1, encoded.begin() + p + 1 + window_len};
}

SequenceCorpus build_char_corpus(const std::string& text, std::size_t window_len) {
    if (window_len == 0) throw InputError("window_len must be positive");
    if (text.size() <= window_len) {
        throw InputError("corpus length " + std::to_string(text.size()) + " must exceed window_len " +
                         std::to_string(window_len));
    }

    std::array<bool, 256> seen{};
    for (unsigned char c : text) seen[c] = true;

    SequenceCorpus corpus;
    corpus.window_len = window_len;
    std::array<std::uint16_t, 256> id_of{};
    for (std::size_t c = 0; c < 256; ++c) {
        if (seen[c]) {
            id_of[c] = static_cast<std::uint16_t>(corpus.vocab.size());
            corpus.vocab.push_back(static_cast<unsigned char>(c));
        }
    }
    corpus.encoded.reserve(text.size());
    for (unsigned char c : text) corpus.encoded.push_back(id_of[c]);
    return corpus;
}

Tensor one_hot(std::size_t id, std::size_t k) {
    if (id >= k) throw InputError("one_hot: id out of range");
    Tensor t({k});
    t[id] = 1;
    return t;
}

std::vector<Tensor> one_hot_batch(const std::vector<std::vector<std::uint16_t>>& sequences, std::size_t k) {
    if (sequences.empty()) throw InputError("one_hot_batch: empty batch");
    const std::size_t n = sequences.front().size();
    for (const auto& s : sequences) {
        if (s.size() != n) throw InputError("one_hot_batch: ragged batch");
    }
    std::vector<Tensor> steps;
    steps.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        Tensor step({sequences.size(), k});
        for (std::size_t b = 0; b < sequences.size(); ++b) {
            if (sequences[b][t] >= k) throw InputError("one_hot_batch: id out of range");
            step.at(b, sequences[b][t]) = 1;
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

double modal_successor_accuracy(const SequenceCorpus& corpus, std::size_t train_end, std::size_t eval_begin,
                                std::size_t eval_end) {
    const std::size_t k = corpus.vocab_size();
    if (train_end > corpus.encoded.size() || eval_end > corpus.encoded.size() || eval_begin + 1 >= eval_end) {
        throw InputError("modal_successor_accuracy: bad ranges");
    }
    std::vector<std::size_t> counts(k * k, 0);
    for (std::size_t i = 0; i + 1 < train_end; ++i) {
        counts[corpus.encoded[i] * k + corpus.encoded[i + 1]]++;
    }
    std::vector<std::uint16_t> modal(k, 0);
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t best = 0;
        for (std::size_t s = 0; s < k; ++s) {
            if (counts[c * k + s] > best) {
                best = counts[c * k + s];
                modal[c] = static_cast<std::uint16_t>(s);
            }
        }
    }
    std::size_t hits = 0, total = 0;
    for (std::size_t i = eval_begin; i + 1 < eval_end; ++i) {
        hits += modal[corpus.encoded[i]] == corpus.encoded[i + 1] ? 1 : 0;
        ++total;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace dll
