#include "valproj/logging.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace valproj {

void init_logging() {
    auto logger = spdlog::stderr_color_mt("valproj");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("VALPROJ_LOG"); env && *env)
        spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace valproj
