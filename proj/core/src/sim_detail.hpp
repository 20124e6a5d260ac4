#pragma once

#include "queuetail/estimate.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace queuetail::detail {

/// Calls fn(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown is rethrown after all workers join.
template <class Fn>
void run_indexed(std::int64_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::int64_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

/// Batch values of one scalar quantity, appended replication by replication.
using BatchSeries = std::vector<double>;

inline std::map<double, SimEstimate> estimates_by_key(const std::vector<double>& keys,
                                                      const std::vector<BatchSeries>& series,
                                                      bool probability, double effective_samples) {
    std::map<double, SimEstimate> out;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        out[keys[k]] = probability ? batch_means_probability(series[k], effective_samples)
                                   : batch_means_estimate(series[k]);
    }
    return out;
}

}  // namespace queuetail::detail
