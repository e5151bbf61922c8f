#pragma once

namespace qclust {

// Full command-line entry point (subcommands: cluster, blobs, anchors, eval).
// Returns the process exit code: 0 success, 2 configuration error, 3
// ingestion/IO error, 4 numeric error.
int run_cli(int argc, const char* const* argv);

}  // namespace qclust
