#include "nrlimit/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "nrlimit/format.hpp"

namespace nrlimit {
namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return r;
  }
}

}  // namespace

void write_snapshot_raw(const std::filesystem::path& path, const SnapshotHeader& header,
                        const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  // Key order and number formatting are fixed so files are byte-reproducible.
  out << "{\"grid_n\":" << header.grid_n << ",\"period\":" << format_double(header.period)
      << ",\"components\":" << header.components << ",\"dtype\":\"" << header.dtype
      << "\",\"time\":" << format_double(header.time) << "}\n";
  std::vector<std::uint64_t> words(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint64_t w;
    std::memcpy(&w, &data[i], sizeof w);
    words[i] = to_le(w);
  }
  out.write(reinterpret_cast<const char*>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

RawSnapshot read_snapshot_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  RawSnapshot snap;
  try {
    const auto j = nlohmann::json::parse(line);
    snap.header.grid_n = j.at("grid_n").get<int>();
    snap.header.period = j.at("period").get<double>();
    snap.header.components = j.at("components").get<int>();
    snap.header.dtype = j.at("dtype").get<std::string>();
    snap.header.time = j.at("time").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": bad snapshot header: " + e.what());
  }
  const auto& h = snap.header;
  if (h.dtype != "float64" && h.dtype != "complex128") {
    throw std::runtime_error(path.string() + ": unknown dtype " + h.dtype);
  }
  const std::size_t count = static_cast<std::size_t>(h.grid_n) * h.grid_n * h.grid_n *
                            h.components * (h.dtype == "complex128" ? 2 : 1);
  std::vector<std::uint64_t> words(count);
  in.read(reinterpret_cast<char*>(words.data()),
          static_cast<std::streamsize>(count * sizeof(std::uint64_t)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(std::uint64_t)) {
    throw std::runtime_error(path.string() + ": truncated snapshot data");
  }
  snap.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t w = to_le(words[i]);
    std::memcpy(&snap.data[i], &w, sizeof w);
  }
  return snap;
}

}  // namespace nrlimit
