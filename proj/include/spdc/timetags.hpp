#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace spdc {

enum class Channel : std::uint8_t { signal = 0, idler = 1 };

// Detector click times at 1 ps resolution, sorted, within [0, duration].
struct TimeTagStream {
  Channel channel = Channel::signal;
  double duration_s = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> tags_ps;

  void validate() const;  // throws std::invalid_argument
};

// Binary file: u32 little-endian header length, UTF-8 JSON header block
// (duration, seed, config hash, ...), then packed little-endian records of
// (channel: u8, time_ps: u64) merged in time order.
void write_timetags(const std::string& path, const TimeTagStream& signal,
                    const TimeTagStream& idler, const nlohmann::json& header_extra);

struct TimeTagFile {
  nlohmann::json header;
  TimeTagStream signal;
  TimeTagStream idler;
};

TimeTagFile read_timetags(const std::string& path);

}  // namespace spdc
