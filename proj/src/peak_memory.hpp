#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace rulekit {

// Process-level peak-RSS readings. All of this is coarse, documented as
// approximate, and used only for relative comparisons between runs.

// Current peak RSS in bytes: VmHWM from /proc/self/status when present,
// otherwise getrusage(RUSAGE_SELF). nullopt when neither source works.
std::optional<std::uint64_t> current_peak_rss();

// Resets the kernel's peak-RSS watermark via /proc/self/clear_refs; returns
// false where that file is absent or not writable.
bool reset_peak_rss();

// Peak RSS high-water mark around `run`. Prefers an in-process
// reset-then-read; where the watermark cannot be reset the closure executes
// in a forked child instead and the child's peak is reported - side effects
// are then confined to the child, which is fine for the measurement-only
// use this has. nullopt on platforms without the needed counters; the run
// itself still happens.
std::optional<std::uint64_t> measure_peak_memory(const std::function<void()>& run);

struct MeasuredChildRun {
  std::optional<std::uint64_t> peak_rss_bytes;
  std::string payload;  // whatever the closure returned, piped out of the child
};

// Runs `work` in a forked child, captures the string it returns through a
// pipe and the child's peak RSS from wait4. Used to compare the memory
// behavior of two runs without one run's allocator state polluting the
// other's watermark. Throws DataError when the child fails.
MeasuredChildRun run_in_child_measured(const std::function<std::string()>& work);

}  // namespace rulekit
