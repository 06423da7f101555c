#pragma once

#include <cstdint>
#include <functional>

namespace shsbm {

// SHSBM_JOBS environment variable, else hardware concurrency, else 1.
int default_jobs();

// Splits [begin, end) into exactly `jobs` contiguous chunks (empty ones
// skipped) and runs body(chunk_begin, chunk_end, chunk_index) on worker
// threads.  Chunk boundaries depend only on (begin, end, jobs), so callers
// that write per-index slots or reduce chunk results in chunk order get
// scheduling-independent output.
void run_chunked(std::uint64_t begin, std::uint64_t end, int jobs,
                 const std::function<void(std::uint64_t, std::uint64_t, int)>& body);

}  // namespace shsbm
