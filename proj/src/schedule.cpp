#include "dll/train/schedule.hpp"

#include <cmath>
#include <numbers>

#include "dll/errors.hpp"

namespace dll {

std::string to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::Linear: return "linear";
        case ScheduleKind::Cosine: return "cosine";
        case ScheduleKind::Constant: return "constant";
    }
    return "?";
}

ScheduleKind schedule_from_string(const std::string& s) {
    if (s == "linear") return ScheduleKind::Linear;
    if (s == "cosine") return ScheduleKind::Cosine;
    if (s == "constant") return ScheduleKind::Constant;
    throw ConfigError("unknown schedule '" + s + "' (expected linear|cosine|constant)");
}

double schedule_rate(const Schedule& s, std::size_t epoch) {
    if (s.base <= 0) throw ConfigError("schedule base rate must be positive");
    if (epoch >= s.total_epochs) {
        throw ConfigError("epoch " + std::to_string(epoch) + " outside schedule of " +
                          std::to_string(s.total_epochs));
    }
    const double frac = static_cast<double>(epoch) / static_cast<double>(s.total_epochs);
    switch (s.kind) {
        case ScheduleKind::Linear: return s.base * (1.0 - frac);
        case ScheduleKind::Cosine: return s.base * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
        case ScheduleKind::Constant: return s.base;
    }
    throw ConfigError("unreachable");
}

}  // namespace dll
