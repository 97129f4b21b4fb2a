#include "peak_memory.hpp"

#include <fcntl.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <exception>

#include "errors.hpp"

namespace rulekit {

namespace {

std::optional<std::uint64_t> read_vm_hwm() {
  FILE* f = std::fopen("/proc/self/status", "r");
  if (!f) {
    return std::nullopt;
  }
  char line[256];
  std::optional<std::uint64_t> result;
  while (std::fgets(line, sizeof line, f)) {
    if (std::strncmp(line, "VmHWM:", 6) == 0) {
      unsigned long long kib = 0;
      if (std::sscanf(line + 6, " %llu", &kib) == 1) {
        result = static_cast<std::uint64_t>(kib) * 1024;
      }
      break;
    }
  }
  std::fclose(f);
  return result;
}

std::optional<std::uint64_t> rusage_peak(int who) {
  struct rusage ru{};
  if (getrusage(who, &ru) != 0 || ru.ru_maxrss <= 0) {
    return std::nullopt;
  }
  return static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;  // ru_maxrss is in KiB on Linux
}

}  // namespace

std::optional<std::uint64_t> current_peak_rss() {
  if (auto hwm = read_vm_hwm()) {
    return hwm;
  }
  return rusage_peak(RUSAGE_SELF);
}

bool reset_peak_rss() {
  int fd = open("/proc/self/clear_refs", O_WRONLY);
  if (fd < 0) {
    return false;
  }
  const bool ok = write(fd, "5", 1) == 1;
  close(fd);
  return ok && read_vm_hwm().has_value();
}

MeasuredChildRun run_in_child_measured(const std::function<std::string()>& work) {
  int fds[2];
  if (pipe(fds) != 0) {
    throw DataError("pipe() failed for measured run");
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw DataError("fork() failed for measured run");
  }
  if (pid == 0) {
    close(fds[0]);
    int exit_code = 0;
    try {
      const std::string payload = work();
      std::size_t written = 0;
      while (written < payload.size()) {
        const ssize_t n = write(fds[1], payload.data() + written, payload.size() - written);
        if (n <= 0) {
          exit_code = 1;
          break;
        }
        written += static_cast<std::size_t>(n);
      }
    } catch (...) {
      exit_code = 1;
    }
    close(fds[1]);
    _exit(exit_code);
  }

  close(fds[1]);
  MeasuredChildRun result;
  char buf[1 << 16];
  ssize_t n;
  while ((n = read(fds[0], buf, sizeof buf)) > 0) {
    result.payload.append(buf, static_cast<std::size_t>(n));
  }
  close(fds[0]);

  int status = 0;
  struct rusage ru{};
  if (wait4(pid, &status, 0, &ru) == pid && ru.ru_maxrss > 0) {
    result.peak_rss_bytes = static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw DataError("measured child run failed");
  }
  return result;
}

std::optional<std::uint64_t> measure_peak_memory(const std::function<void()>& run) {
  if (reset_peak_rss()) {
    run();
    return read_vm_hwm();
  }
  try {
    MeasuredChildRun child = run_in_child_measured([&run]() {
      run();
      return std::string();
    });
    return child.peak_rss_bytes;
  } catch (const Error&) {
    run();  // measurement failed; the run still has to happen
    return std::nullopt;
  }
}

}  // namespace rulekit
