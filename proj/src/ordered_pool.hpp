#pragma once

// Runs work(i) for i in [first, last) on a small worker pool and hands the
// results to consume(i, result) strictly in index order on the calling
// thread.  consume returns false to stop early.  Exceptions thrown by a
// worker are rethrown on the calling thread.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace gpfsum::detail {

template <class Work, class Consume>
void ordered_parallel(std::uint64_t first, std::uint64_t last, unsigned threads, Work&& work,
                      Consume&& consume) {
    using Result = decltype(work(first));
    if (first >= last) return;
    if (threads <= 1) {
        for (std::uint64_t i = first; i < last; ++i) {
            if (!consume(i, work(i))) return;
        }
        return;
    }

    std::mutex mutex;
    std::condition_variable ready_cv;
    std::map<std::uint64_t, Result> ready;
    std::atomic<std::uint64_t> next{first};
    std::atomic<bool> stop{false};
    std::exception_ptr error;

    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            while (!stop.load(std::memory_order_relaxed)) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= last) break;
                try {
                    Result r = work(i);
                    std::lock_guard lock(mutex);
                    ready.emplace(i, std::move(r));
                } catch (...) {
                    std::lock_guard lock(mutex);
                    if (!error) error = std::current_exception();
                    stop = true;
                }
                ready_cv.notify_all();
            }
        });
    }

    // Destroyed before `workers`, so an exception from consume() still stops
    // the pool before it is joined.
    struct StopOnExit {
        std::atomic<bool>& flag;
        ~StopOnExit() { flag = true; }
    } stop_on_exit{stop};

    for (std::uint64_t i = first; i < last; ++i) {
        std::unique_lock lock(mutex);
        ready_cv.wait(lock, [&] { return ready.count(i) != 0 || error; });
        if (error) break;
        Result r = std::move(ready.at(i));
        ready.erase(i);
        lock.unlock();
        if (!consume(i, r)) break;
    }
    stop = true;
    workers.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace gpfsum::detail
