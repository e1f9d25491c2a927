#pragma once

#include <functional>
#include <string_view>

namespace sumoviz::log {

enum class Level { debug, info, warn, error };

using Sink = std::function<void(Level, std::string_view)>;

/// Replaces the process-wide sink and returns the previous one. The default
/// sink writes warnings and errors to stderr.
Sink set_sink(Sink sink);

void set_min_level(Level level);

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::debug, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void warn(std::string_view m) { write(Level::warn, m); }
inline void error(std::string_view m) { write(Level::error, m); }

/// Captures messages for the lifetime of the object (tests use this to
/// assert on warnings).
class ScopedCapture {
public:
  explicit ScopedCapture(std::function<void(Level, std::string_view)> on_message);
  ~ScopedCapture();
  ScopedCapture(const ScopedCapture&) = delete;
  ScopedCapture& operator=(const ScopedCapture&) = delete;

private:
  Sink previous_;
};

}  // namespace sumoviz::log
