#include "shsbm/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "shsbm/errors.hpp"

namespace shsbm {

int default_jobs() {
    if (const char* env = std::getenv("SHSBM_JOBS")) {
        try {
            const int jobs = std::stoi(env);
            if (jobs >= 1) return jobs;
        } catch (const std::exception&) {
        }
        fail("invalid_argument", "SHSBM_JOBS must be a positive integer");
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_chunked(std::uint64_t begin, std::uint64_t end, int jobs,
                 const std::function<void(std::uint64_t, std::uint64_t, int)>& body) {
    if (jobs < 1) fail("invalid_argument", "jobs must be >= 1");
    if (begin >= end) return;
    const std::uint64_t total = end - begin;
    const std::uint64_t chunk = total / jobs;
    const std::uint64_t rem = total % jobs;

    struct Range {
        std::uint64_t begin;
        std::uint64_t end;
        int index;
    };
    std::vector<Range> ranges;
    std::uint64_t cursor = begin;
    for (int i = 0; i < jobs; ++i) {
        const std::uint64_t size = chunk + (static_cast<std::uint64_t>(i) < rem ? 1 : 0);
        if (size == 0) continue;
        ranges.push_back({cursor, cursor + size, i});
        cursor += size;
    }

    if (ranges.size() == 1) {
        body(ranges[0].begin, ranges[0].end, ranges[0].index);
        return;
    }

    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(ranges.size());
    workers.reserve(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        workers.emplace_back([&, i] {
            try {
                body(ranges[i].begin, ranges[i].end, ranges[i].index);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
}

}  // namespace shsbm
