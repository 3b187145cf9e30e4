#include "core/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

#include "core/text.hpp"

namespace vespa::log {

namespace {

Level from_env() {
  const char* env = std::getenv("VESPA_LOG");
  if (!env) return Level::Warn;
  const auto v = text::to_lower(env);
  if (v == "error") return Level::Error;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}

std::atomic<int>& level_slot() {
  static std::atomic<int> slot{static_cast<int>(from_env())};
  return slot;
}

constexpr const char* kNames[] = {"error", "warn", "info", "debug"};

}  // namespace

Level threshold() { return static_cast<Level>(level_slot().load()); }
void set_threshold(Level level) { level_slot().store(static_cast<int>(level)); }

void write(Level level, std::string_view message) {
  if (static_cast<int>(level) > level_slot().load()) return;
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << "[vespa:" << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace vespa::log
