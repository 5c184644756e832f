#include "spdc/timetags.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace spdc {

void TimeTagStream::validate() const {
  const auto limit = static_cast<std::uint64_t>(duration_s * 1e12);
  std::uint64_t prev = 0;
  for (size_t i = 0; i < tags_ps.size(); ++i) {
    if (i > 0 && tags_ps[i] < prev)
      throw std::invalid_argument("time tags must be sorted");
    if (tags_ps[i] > limit)
      throw std::invalid_argument("time tag beyond stream duration");
    prev = tags_ps[i];
  }
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void put_record(std::ostream& out, std::uint8_t channel, std::uint64_t t) {
  char b[9];
  b[0] = static_cast<char>(channel);
  for (int i = 0; i < 8; ++i) b[1 + i] = static_cast<char>((t >> (8 * i)) & 0xFF);
  out.write(b, 9);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("truncated time-tag file header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_timetags(const std::string& path, const TimeTagStream& signal,
                    const TimeTagStream& idler, const nlohmann::json& header_extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  nlohmann::json header = header_extra;
  header["format"] = "spdc-timetags";
  header["version"] = 1;
  header["duration_s"] = signal.duration_s;
  header["seed"] = signal.seed;
  header["counts"] = {{"signal", signal.tags_ps.size()}, {"idler", idler.tags_ps.size()}};
  const std::string head = header.dump();
  put_u32(out, static_cast<std::uint32_t>(head.size()));
  out.write(head.data(), static_cast<std::streamsize>(head.size()));

  // merge by time; signal wins ties so readers see the trigger first
  size_t i = 0, j = 0;
  while (i < signal.tags_ps.size() || j < idler.tags_ps.size()) {
    const bool take_signal =
        j >= idler.tags_ps.size() ||
        (i < signal.tags_ps.size() && signal.tags_ps[i] <= idler.tags_ps[j]);
    if (take_signal) {
      put_record(out, 0, signal.tags_ps[i++]);
    } else {
      put_record(out, 1, idler.tags_ps[j++]);
    }
  }
}

TimeTagFile read_timetags(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open time-tag file: " + path);
  const std::uint32_t head_len = get_u32(in);
  std::string head(head_len, '\0');
  in.read(head.data(), head_len);
  if (!in) throw std::runtime_error("truncated time-tag header");
  TimeTagFile file;
  file.header = nlohmann::json::parse(head);
  file.signal.channel = Channel::signal;
  file.idler.channel = Channel::idler;
  file.signal.duration_s = file.idler.duration_s = file.header.value("duration_s", 0.0);
  file.signal.seed = file.idler.seed = file.header.value("seed", 0ULL);
  char rec[9];
  while (in.read(rec, 9)) {
    std::uint64_t t = 0;
    for (int k = 0; k < 8; ++k)
      t |= static_cast<std::uint64_t>(static_cast<unsigned char>(rec[1 + k])) << (8 * k);
    if (rec[0] == 0)
      file.signal.tags_ps.push_back(t);
    else
      file.idler.tags_ps.push_back(t);
  }
  return file;
}

}  // namespace spdc
