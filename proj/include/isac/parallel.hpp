#pragma once

#include <optional>

namespace isac {

/// Environment variable consulted for the default worker count.
inline constexpr const char* kThreadsEnv = "ISAC_DEPLOY_THREADS";

/// Parses ISAC_DEPLOY_THREADS; empty when unset. Throws InvalidArgument on a
/// malformed or non-positive value.
std::optional<int> threads_from_env();

/// Sets the OpenMP worker count used by the parallel kernels.
void set_threads(int threads);

int max_threads();

}  // namespace isac
