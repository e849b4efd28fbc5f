#pragma once

#include <spdlog/logger.h>

namespace rigidflock::detail {

/// Library logger on stderr. Level comes from RIGIDFLOCK_LOG
/// (trace, debug, info, warn, error, off); default warn.
spdlog::logger& logger();

}  // namespace rigidflock::detail
