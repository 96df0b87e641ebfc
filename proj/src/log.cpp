#include "biosim/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/spdlog.h>

namespace biosim {

void init_logging() {
    spdlog::set_level(spdlog::level::warn);
    const char* env = std::getenv("BIOSIM_LOG");
    if (!env) return;
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept a literal "off".
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
}

}  // namespace biosim
