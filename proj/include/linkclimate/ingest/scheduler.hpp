#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <stop_token>

#include "linkclimate/util/date.hpp"
#include "linkclimate/util/log.hpp"

namespace linkclimate::ingest {

using TimePoint = std::chrono::system_clock::time_point;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimePoint now() const = 0;
  // Returns early when stop is requested.
  virtual void sleep_until(TimePoint deadline, std::stop_token stop) = 0;
};

class SystemClock : public Clock {
 public:
  TimePoint now() const override { return std::chrono::system_clock::now(); }

  void sleep_until(TimePoint deadline, std::stop_token stop) override {
    std::unique_lock lock(mutex_);
    cv_.wait_until(lock, stop, deadline, [] { return false; });
  }

 private:
  std::mutex mutex_;
  std::condition_variable_any cv_;
};

/// Manually advanced clock. Sleepers wake when advance() reaches their
/// deadline or stop is requested.
class FakeClock : public Clock {
 public:
  explicit FakeClock(TimePoint start = TimePoint{}) : now_(start) {}

  TimePoint now() const override {
    std::lock_guard lock(mutex_);
    return now_;
  }

  void advance(std::chrono::system_clock::duration d) {
    {
      std::lock_guard lock(mutex_);
      now_ += d;
    }
    cv_.notify_all();
  }

  void sleep_until(TimePoint deadline, std::stop_token stop) override {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, stop, [&] { return now_ >= deadline; });
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable_any cv_;
  TimePoint now_;
};

/// Runs a job at startup and then at every interval tick (start + k*interval).
///
/// The job runs on the scheduler's thread, so runs never overlap. A tick
/// that falls inside a run (or that was already past when the run began)
/// is skipped and logged rather than queued.
class Scheduler {
 public:
  using Job = std::function<void()>;

  Scheduler(Job job, Clock& clock, std::chrono::system_clock::duration interval, LogSink log = {},
            std::chrono::milliseconds poll = std::chrono::seconds(1))
      : job_(std::move(job)), clock_(clock), interval_(interval), log_(std::move(log)), poll_(poll) {}

  /// Blocks until stop is requested. A run in progress is finished first.
  void run(std::stop_token stop) {
    if (stop.stop_requested()) return;
    next_tick_ = clock_.now();
    while (!stop.stop_requested()) {
      TimePoint now = clock_.now();
      if (now >= next_tick_) {
        run_once(next_tick_);
        continue;
      }
      TimePoint wake = next_tick_;
      if (poll_.count() > 0 && now + poll_ < wake) wake = now + poll_;
      clock_.sleep_until(wake, stop);
    }
    if (log_) log_(LogLevel::info, "scheduler stopped after " + std::to_string(runs()) + " run(s)");
  }

  std::size_t runs() const noexcept { return runs_.load(); }
  std::size_t skipped() const noexcept { return skipped_.load(); }

 private:
  void run_once(TimePoint tick) {
    TimePoint started = clock_.now();
    try {
      job_();
    } catch (const std::exception& e) {
      if (log_) log_(LogLevel::error, std::string("scheduled run failed: ") + e.what());
    }
    TimePoint finished = clock_.now();
    next_tick_ = tick + interval_;
    while (next_tick_ <= finished) {
      ++skipped_;
      if (log_)
        log_(LogLevel::warning, "skipped tick at " + format_timestamp(next_tick_) +
                                    (next_tick_ > started ? ": previous run still in progress" : ": tick already past"));
      next_tick_ += interval_;
    }
    ++runs_;
  }

  Job job_;
  Clock& clock_;
  std::chrono::system_clock::duration interval_;
  LogSink log_;
  std::chrono::milliseconds poll_;
  TimePoint next_tick_{};
  std::atomic<std::size_t> runs_{0};
  std::atomic<std::size_t> skipped_{0};
};

}  // namespace linkclimate::ingest
