#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pledge/time.hpp"

namespace pledge {

/// One record of the run event log. Empty fields are omitted on output.
struct Event {
    std::uint64_t seq = 0;
    Time t = 0;
    std::string kind;
    std::string agent;
    std::string goal;
    std::string label;
    std::string action;
    std::string resource;
    std::string detail;
    std::optional<bool> promise_dependent;
    std::vector<std::string> sources;
    std::vector<std::string> adds;
    std::vector<std::string> dels;

    // run-start header only
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<bool> promises;
    std::vector<std::string> agents;
    std::vector<std::string> init;
    std::vector<std::string> objective;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Single-line JSON object, keys in a fixed order.
std::string to_jsonl(const Event& event);
/// Throws ParseError on malformed lines.
Event parse_event(std::string_view line, std::size_t line_number = 1);

std::string write_events(std::span<const Event> events);
std::vector<Event> read_events(std::string_view text);
void save_events(const std::filesystem::path& path, std::span<const Event> events);
std::vector<Event> load_events(const std::filesystem::path& path);

} // namespace pledge
