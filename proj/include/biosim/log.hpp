#pragma once

namespace biosim {

/// Set the spdlog level from BIOSIM_LOG (trace, debug, info, warn, error, off).
/// Unset or unrecognised values leave the level at `warn`.
void init_logging();

}  // namespace biosim
