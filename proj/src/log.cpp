#include "lmlp/log.hpp"

#include <iostream>
#include <mutex>

namespace lmlp {

namespace {

std::mutex g_log_mutex;
LogSink g_sink;
LogLevel g_min_level = LogLevel::Warn;

const char* level_name(LogLevel l) {
    switch (l) {
        case LogLevel::Debug: return "debug";
        case LogLevel::Info: return "info";
        case LogLevel::Warn: return "warn";
        case LogLevel::Error: return "error";
    }
    return "?";
}

}  // namespace

void set_log_sink(LogSink sink) {
    std::lock_guard lock(g_log_mutex);
    g_sink = std::move(sink);
}

void set_log_level(LogLevel min_level) {
    std::lock_guard lock(g_log_mutex);
    g_min_level = min_level;
}

void log(LogLevel level, const std::string& message) {
    std::lock_guard lock(g_log_mutex);
    if (level < g_min_level) return;
    if (g_sink) {
        g_sink(level, message);
    } else {
        std::cerr << "[" << level_name(level) << "] " << message << "\n";
    }
}

}  // namespace lmlp
