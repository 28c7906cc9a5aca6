// Copyright 2026 The logorec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "common/log.hpp"

#include <cstdio>
#include <mutex>
#include <string>

namespace logorec {
namespace {

std::mutex g_sink_mutex;

void stderr_sink(LogLevel level, std::string_view message) {
  const char* tag = level == LogLevel::kWarning ? "warning: " : "";
  std::fprintf(stderr, "%s%.*s\n", tag, static_cast<int>(message.size()), message.data());
}

LogSink& sink() {
  static LogSink s = stderr_sink;
  return s;
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(g_sink_mutex);
  sink() = s ? std::move(s) : LogSink(stderr_sink);
}

void log_message(LogLevel level, std::string_view message) {
  std::lock_guard lock(g_sink_mutex);
  sink()(level, message);
}

}  // namespace logorec
