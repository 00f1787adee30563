#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fieldforge {

// Worker count: FIELDFORGE_THREADS caps it, otherwise hardware concurrency.
inline int configured_thread_count() {
    if (const char* env = std::getenv("FIELDFORGE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Persistent pool running indexed jobs. Work is always split into the same
// fixed-size blocks regardless of worker count, so any arithmetic done per
// block is identical whether 1 or N threads execute it; results are
// bitwise reproducible at any thread count.
class ThreadPool {
public:
    static ThreadPool& instance() {
        static ThreadPool pool(configured_thread_count());
        return pool;
    }

    int workers() const { return static_cast<int>(threads_.size()) + 1; }

    // Runs fn(i) for i in [0, n). fn must only write to disjoint state per i.
    // Reentrant and safe from any thread: if the pool is already busy the
    // caller just runs the blocks inline, which computes the same result.
    void run(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
        if (n <= 0) return;
        std::unique_lock<std::mutex> entry(entry_mu_, std::try_to_lock);
        if (n == 1 || workers() == 1 || !entry.owns_lock()) {
            for (std::int64_t i = 0; i < n; ++i) fn(i);
            return;
        }
        std::unique_lock<std::mutex> lk(mu_);
        job_ = &fn;
        job_count_ = n;
        next_.store(0, std::memory_order_relaxed);
        pending_ = static_cast<int>(threads_.size());
        ++generation_;
        lk.unlock();
        cv_start_.notify_all();

        drain();  // caller participates

        lk.lock();
        cv_done_.wait(lk, [&] { return pending_ == 0; });
        job_ = nullptr;
    }

    ~ThreadPool() {
        {
            std::lock_guard<std::mutex> lk(mu_);
            stop_ = true;
            ++generation_;
        }
        cv_start_.notify_all();
        for (auto& t : threads_) t.join();
    }

private:
    explicit ThreadPool(int n_workers) {
        for (int i = 1; i < n_workers; ++i)
            threads_.emplace_back([this] { worker_loop(); });
    }

    void drain() {
        const auto* job = job_;
        const std::int64_t n = job_count_;
        std::int64_t i;
        while ((i = next_.fetch_add(1, std::memory_order_relaxed)) < n) (*job)(i);
    }

    void worker_loop() {
        std::uint64_t seen = 0;
        for (;;) {
            std::unique_lock<std::mutex> lk(mu_);
            cv_start_.wait(lk, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            lk.unlock();

            drain();

            lk.lock();
            if (--pending_ == 0) {
                lk.unlock();
                cv_done_.notify_one();
            }
        }
    }

    std::vector<std::thread> threads_;
    std::mutex entry_mu_;  // one fan-out at a time; losers run inline
    std::mutex mu_;
    std::condition_variable cv_start_, cv_done_;
    const std::function<void(std::int64_t)>* job_ = nullptr;
    std::int64_t job_count_ = 0;
    std::atomic<std::int64_t> next_{0};
    int pending_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
};

// Splits [0, n) into fixed blocks of `block` and runs body(lo, hi) per block.
// Block size never depends on thread count.
inline void parallel_blocks(std::int64_t n, std::int64_t block,
                            const std::function<void(std::int64_t, std::int64_t)>& body) {
    if (n <= 0) return;
    const std::int64_t nblocks = (n + block - 1) / block;
    if (nblocks == 1) {
        body(0, n);
        return;
    }
    ThreadPool::instance().run(nblocks, [&](std::int64_t b) {
        const std::int64_t lo = b * block;
        const std::int64_t hi = lo + block < n ? lo + block : n;
        body(lo, hi);
    });
}

}  // namespace fieldforge
