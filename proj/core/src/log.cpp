#include "sumoviz/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace sumoviz::log {
namespace {

std::mutex g_mutex;
std::atomic<Level> g_min_level{Level::warn};

const char* level_name(Level level) {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warning";
    case Level::error: return "error";
  }
  return "?";
}

Sink& sink_slot() {
  static Sink sink = [](Level level, std::string_view message) {
    std::cerr << "sumoviz: " << level_name(level) << ": " << message << '\n';
  };
  return sink;
}

}  // namespace

Sink set_sink(Sink sink) {
  std::lock_guard lock(g_mutex);
  Sink previous = std::move(sink_slot());
  sink_slot() = std::move(sink);
  return previous;
}

void set_min_level(Level level) { g_min_level = level; }

void write(Level level, std::string_view message) {
  if (level < g_min_level.load()) return;
  std::lock_guard lock(g_mutex);
  if (sink_slot()) sink_slot()(level, message);
}

ScopedCapture::ScopedCapture(std::function<void(Level, std::string_view)> on_message)
    : previous_(set_sink(std::move(on_message))) {}

ScopedCapture::~ScopedCapture() { set_sink(std::move(previous_)); }

}  // namespace sumoviz::log
