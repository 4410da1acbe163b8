#pragma once

#include <string>
#include <utility>

#include "dll/data/dataset.hpp"
#include "dll/rng.hpp"

namespace dll {

/// Deterministic Gaussian-blob classification task: class centers in feature
/// space, samples jittered around them. Images come out [N x 1 x 1 x dim] so
/// the same loaders serve MLP smoke tests and demos.
std::pair<LabeledImageSet, LabeledImageSet> make_synth_blobs(std::size_t train_n, std::size_t test_n,
                                                             std::size_t dim, std::size_t classes,
                                                             double noise, std::uint64_t seed);

/// Deterministic pseudo-language: syllable words chained by a low-entropy
/// word-level transition table. Successor statistics beyond one character
/// carry most of the predictability, which is what a recurrent model can
/// exploit and a bigram baseline cannot.
std::string make_synth_text(std::size_t bytes, std::uint64_t seed);

/// Deterministic multivariate series in the CSV layout the parser expects
/// (header, timestamp column, numeric columns). Mixes slow and fast periodic
/// components plus noise, so repeating the last value is a weak forecast.
std::string make_synth_series_csv(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace dll
