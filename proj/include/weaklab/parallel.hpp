#pragma once

namespace weaklab {

/// Worker count for OpenMP regions: WEAKLAB_THREADS when set to a positive
/// integer, otherwise the OpenMP default. Read on every call so tests can
/// change it between runs.
int configured_threads();

}  // namespace weaklab
