#pragma once

#include <string>
#include <vector>

#include "dll/nn/network.hpp"
#include "dll/nn/rnn.hpp"
#include "dll/train/baselines.hpp"

namespace dll {

/// Central-finite-difference comparison between an algorithm's forward-weight
/// update directions and the true loss gradient. This is the independent
/// oracle behind the equivalence suites: under tied backward weights the
/// local rule must reproduce backpropagation, which in turn must match the
/// finite differences.
struct GradcheckReport {
    struct Entry {
        std::string name;
        double max_rel_err;
    };
    std::vector<Entry> per_param;
    double max_rel_err = 0;
};

constexpr std::size_t kGradcheckParamLimit = 5000;

/// tie_backward copies W into Theta before checking (the mode in which the
/// local rule coincides with backpropagation). With independent backward
/// weights the report is informational; large errors are expected there.
GradcheckReport gradcheck_network(TrainerKind kind, Network& net, const Tensor& inputs,
                                  const Tensor& targets, double eps = 1e-5, bool tie_backward = true);

GradcheckReport gradcheck_rnn(RnnCell& cell, const std::vector<Tensor>& inputs,
                              const std::vector<Tensor>& targets, double eps = 1e-5,
                              bool tie_backward = true);

}  // namespace dll
