#pragma once

#include <cstdint>
#include <string>

#include "dll/tensor.hpp"

namespace dll {

enum class ScheduleKind { Linear, Cosine, Constant };

std::string to_string(ScheduleKind k);
ScheduleKind schedule_from_string(const std::string& s);

/// Per-epoch learning-rate schedule. Emits the base rate at epoch 0 and
/// stays in (0, base] for every epoch below the total.
struct Schedule {
    ScheduleKind kind = ScheduleKind::Constant;
    double base = 1e-3;
    std::size_t total_epochs = 1;
};

double schedule_rate(const Schedule& s, std::size_t epoch);

}  // namespace dll
