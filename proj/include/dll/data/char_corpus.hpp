#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dll/tensor.hpp"

namespace dll {

/// Byte-level character corpus for next-character prediction. The vocabulary
/// is the sorted set of distinct bytes; an example at position p is the id
/// window [p, p+window_len) with the window shifted by one as targets.
struct SequenceCorpus {
    std::vector<unsigned char> vocab;      // sorted, unique
    std::vector<std::uint16_t> encoded;    // ids into vocab
    std::size_t window_len = 0;

    std::size_t vocab_size() const { return vocab.size(); }
    // Stride-1 example count: one per window start.
    std::size_t example_count() const { return encoded.size() - window_len; }

    // Input ids [p, p+window_len), target ids [p+1, p+window_len].
    std::vector<std::uint16_t> input_ids(std::size_t p) const;
    std::vector<std::uint16_t> target_ids(std::size_t p) const;
};

SequenceCorpus build_char_corpus(const std::string& text, std::size_t window_len);

Tensor one_hot(std::size_t id, std::size_t k);

/// Assembles a timestep-major batch: result[t] is [batch x vocab] with the
/// one-hot encoding of each sequence's t-th id.
std::vector<Tensor> one_hot_batch(const std::vector<std::vector<std::uint16_t>>& sequences, std::size_t k);

/// Accuracy floor used by the benchmark harness: predict, for every context
/// character, the most frequent successor seen in the training range.
double modal_successor_accuracy(const SequenceCorpus& corpus, std::size_t train_end, std::size_t eval_begin,
                                std::size_t eval_end);

}  // namespace dll
