#pragma once

namespace valproj {

/// Configures the default spdlog logger from VALPROJ_LOG
/// (trace, debug, info, warn, error, off; default warn).
void init_logging();

}  // namespace valproj
