#pragma once

namespace cascade {

// Thread count for parallel loops: `requested` if positive, otherwise the
// OpenMP default capped by the CASCADE_FPE_THREADS environment variable.
// Always 1 when built without OpenMP.
int resolve_threads(int requested = 0);

}  // namespace cascade
