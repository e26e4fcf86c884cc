#include "meshxfer/restart.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "meshxfer/errors.hpp"

namespace mxf {

// Container layout (all integers little-endian, reals IEEE-754 binary64):
//   "LXRS" | version u32 | entry count u32
//   per entry: name length u32 | name bytes | kind u8 |
//              payload length u64 | payload
//   CRC32 u32 over everything before it
// Payloads: ScalarReal f64; ScalarInt i64; Vector raw f64 array;
// TimeHistory u32 order | u64 vector length | order * f64 arrays |
//             f64 time | f64 dt | u64 step_index.

namespace {

constexpr char kMagic[4] = {'L', 'X', 'R', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string &out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string &out, double v) {
  static_assert(sizeof(double) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

class Reader {
public:
  Reader(const char *data, std::size_t size) : data_(data), size_(size) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s(data_ + pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return size_ - pos_; }

private:
  void need(std::size_t n) {
    if (pos_ + n > size_)
      throw SchemaError("checkpoint: declared lengths exceed file size");
  }
  const char *data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

const char *kind_name(int kind) {
  switch (kind) {
  case 0:
    return "scalar-real";
  case 1:
    return "scalar-int";
  case 2:
    return "vector";
  case 3:
    return "time-history";
  default:
    return "unknown";
  }
}

} // namespace

std::uint32_t crc32(const void *data, std::size_t size, std::uint32_t seed) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = seed ^ 0xFFFFFFFFu;
  const auto *p = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < size; ++i)
    crc = table[(crc ^ p[i]) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

TimeHistory TimeHistory::make(int order, std::size_t vector_size, double t0,
                              double dt) {
  if (order < 1)
    throw ContractError("TimeHistory: order must be >= 1");
  TimeHistory h;
  h.order = order;
  h.solutions.assign(order, std::vector<double>(vector_size, 0.0));
  h.time = t0;
  h.dt = dt;
  h.step_index = 0;
  return h;
}

void TimeHistory::advance(std::vector<double> newest) {
  if (!solutions.empty() && newest.size() != solutions.front().size())
    throw ContractError("TimeHistory::advance: vector size changed");
  solutions.insert(solutions.begin(), std::move(newest));
  solutions.resize(order);
  time += dt;
  ++step_index;
}

void RestartRegistry::attach(const std::string &name, Kind kind, void *ref) {
  if (name.empty())
    throw ContractError("RestartRegistry: entry name must not be empty");
  if (!ref)
    throw ContractError("RestartRegistry: null reference for '" + name + "'");
  for (const Entry &e : entries_)
    if (e.name == name)
      throw ContractError("RestartRegistry: name '" + name +
                          "' already attached");
  entries_.push_back(Entry{name, kind, ref});
}

void RestartRegistry::attach_scalar(const std::string &name, double *ref) {
  attach(name, Kind::ScalarReal, ref);
}

void RestartRegistry::attach_scalar(const std::string &name,
                                    std::int64_t *ref) {
  attach(name, Kind::ScalarInt, ref);
}

void RestartRegistry::attach_vector(const std::string &name,
                                    std::vector<double> *ref) {
  attach(name, Kind::Vector, ref);
}

void RestartRegistry::attach_time_history(const std::string &name,
                                          TimeHistory *ref) {
  attach(name, Kind::TimeHistory, ref);
}

std::string RestartRegistry::checkpoint_path(const std::string &basename,
                                             std::uint64_t step_index) {
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "_%06llu.lxrs",
                static_cast<unsigned long long>(step_index));
  return basename + suffix;
}

std::string RestartRegistry::serialize(const std::string &basename,
                                       std::uint64_t step_index) const {
  if (entries_.empty())
    throw ContractError("RestartRegistry::serialize: registry is empty");

  std::string buf;
  buf.append(kMagic, 4);
  put_u32(buf, kVersion);
  put_u32(buf, static_cast<std::uint32_t>(entries_.size()));

  for (const Entry &e : entries_) {
    put_u32(buf, static_cast<std::uint32_t>(e.name.size()));
    buf += e.name;
    buf.push_back(static_cast<char>(e.kind));

    std::string payload;
    switch (e.kind) {
    case Kind::ScalarReal:
      put_f64(payload, *static_cast<const double *>(e.ref));
      break;
    case Kind::ScalarInt:
      put_u64(payload, static_cast<std::uint64_t>(
                           *static_cast<const std::int64_t *>(e.ref)));
      break;
    case Kind::Vector: {
      const auto &vec = *static_cast<const std::vector<double> *>(e.ref);
      for (double v : vec)
        put_f64(payload, v);
      break;
    }
    case Kind::TimeHistory: {
      const auto &h = *static_cast<const TimeHistory *>(e.ref);
      if (static_cast<int>(h.solutions.size()) != h.order)
        throw ContractError("RestartRegistry: time history '" + e.name +
                            "' does not hold `order` vectors");
      put_u32(payload, static_cast<std::uint32_t>(h.order));
      const std::uint64_t len =
          h.solutions.empty() ? 0 : h.solutions.front().size();
      put_u64(payload, len);
      for (const auto &vec : h.solutions) {
        if (vec.size() != len)
          throw ContractError("RestartRegistry: time history '" + e.name +
                              "' has vectors of differing lengths");
        for (double v : vec)
          put_f64(payload, v);
      }
      put_f64(payload, h.time);
      put_f64(payload, h.dt);
      put_u64(payload, h.step_index);
      break;
    }
    }
    put_u64(buf, payload.size());
    buf += payload;
  }
  put_u32(buf, crc32(buf.data(), buf.size()));

  const std::string path = checkpoint_path(basename, step_index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out)
    throw IoError("error while writing '" + path + "'");
  return path;
}

RestartRegistry::RestartInfo
RestartRegistry::restart(const std::string &basename,
                         std::uint64_t step_index) {
  const std::string path = checkpoint_path(basename, step_index);
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open checkpoint '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (in.bad())
    throw IoError("error while reading '" + path + "'");

  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw CorruptionError("checkpoint '" + path +
                          "': missing LXRS magic or truncated file");

  // Integrity first: a failed CRC is reported as corruption no matter how
  // the damage would otherwise surface.
  {
    Reader tail(buf.data() + buf.size() - 4, 4);
    const std::uint32_t file_crc = tail.u32();
    const std::uint32_t computed = crc32(buf.data(), buf.size() - 4);
    if (file_crc != computed)
      throw CorruptionError("checkpoint '" + path +
                            "': CRC mismatch (file corrupted)");
  }

  Reader r(buf.data(), buf.size() - 4);
  r.bytes(4); // magic
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw SchemaError("checkpoint '" + path + "': unsupported version " +
                      std::to_string(version));
  const std::uint32_t count = r.u32();
  if (count != entries_.size())
    throw SchemaError("checkpoint '" + path + "': file has " +
                      std::to_string(count) + " entries, registry has " +
                      std::to_string(entries_.size()));

  RestartInfo info;
  info.step_index = step_index;

  for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
    Entry &e = entries_[idx];
    const std::uint32_t name_len = r.u32();
    const std::string name = r.bytes(name_len);
    const std::uint8_t kind = r.u8();
    const std::uint64_t payload_len = r.u64();

    if (name != e.name || kind != static_cast<std::uint8_t>(e.kind))
      throw SchemaError("checkpoint '" + path + "': entry " +
                        std::to_string(idx) + " is '" + name + "' (" +
                        kind_name(kind) + "), registry expects '" + e.name +
                        "' (" + kind_name(static_cast<int>(e.kind)) + ")");

    const std::size_t payload_end = r.position() + payload_len;
    switch (e.kind) {
    case Kind::ScalarReal:
      if (payload_len != 8)
        throw SchemaError("checkpoint: scalar '" + name + "' has bad size");
      *static_cast<double *>(e.ref) = r.f64();
      break;
    case Kind::ScalarInt:
      if (payload_len != 8)
        throw SchemaError("checkpoint: scalar '" + name + "' has bad size");
      *static_cast<std::int64_t *>(e.ref) =
          static_cast<std::int64_t>(r.u64());
      break;
    case Kind::Vector: {
      auto &vec = *static_cast<std::vector<double> *>(e.ref);
      if (payload_len != vec.size() * 8)
        throw SchemaError("checkpoint: vector '" + name + "' holds " +
                          std::to_string(payload_len / 8) +
                          " values, registry reference holds " +
                          std::to_string(vec.size()));
      for (double &v : vec)
        v = r.f64();
      break;
    }
    case Kind::TimeHistory: {
      auto &h = *static_cast<TimeHistory *>(e.ref);
      const std::uint32_t order = r.u32();
      const std::uint64_t len = r.u64();
      if (static_cast<int>(order) != h.order)
        throw SchemaError("checkpoint: time history '" + name +
                          "' has order " + std::to_string(order) +
                          ", registry expects " + std::to_string(h.order));
      if (!h.solutions.empty() && len != h.solutions.front().size())
        throw SchemaError("checkpoint: time history '" + name +
                          "' vector length " + std::to_string(len) +
                          " does not match the registry reference");
      h.solutions.assign(order, std::vector<double>(len));
      for (auto &vec : h.solutions)
        for (double &v : vec)
          v = r.f64();
      h.time = r.f64();
      h.dt = r.f64();
      h.step_index = r.u64();
      if (!info.time.has_value())
        info.time = h.time;
      break;
    }
    }
    if (r.position() != payload_end)
      throw SchemaError("checkpoint: entry '" + name +
                        "' payload length mismatch");
  }
  if (r.remaining() != 0)
    throw SchemaError("checkpoint '" + path + "': trailing bytes");
  return info;
}

bool checkpoint_policy(std::int64_t every_n, std::int64_t step) {
  if (every_n < 1)
    throw ContractError("checkpoint_policy: every_n must be >= 1, got " +
                        std::to_string(every_n));
  return step > 0 && step % every_n == 0;
}

} // namespace mxf
