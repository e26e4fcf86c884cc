#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mxf {

/// Window of the most recent solution vectors for a time stepper of order k
/// (solutions.front() is the newest), plus the clock it needs to resume.
struct TimeHistory {
  int order = 1;
  std::vector<std::vector<double>> solutions; // size == order
  double time = 0.0;
  double dt = 1.0;
  std::uint64_t step_index = 0;

  static TimeHistory make(int order, std::size_t vector_size, double t0,
                          double dt);

  /// Pushes the newest solution in front, drops the oldest, advances the
  /// clock by one step.
  void advance(std::vector<double> newest);
};

/// Ordered set of named references to live data that serialize/restart read
/// and write through. Names are unique; registration order is preserved and
/// is part of the container schema.
class RestartRegistry {
public:
  void attach_scalar(const std::string &name, double *ref);
  void attach_scalar(const std::string &name, std::int64_t *ref);
  void attach_vector(const std::string &name, std::vector<double> *ref);
  void attach_time_history(const std::string &name, TimeHistory *ref);

  std::size_t size() const { return entries_.size(); }

  /// Writes `<basename>_<step padded to 6 digits>.lxrs` and returns the
  /// path. Byte-identical output for identical registry contents.
  std::string serialize(const std::string &basename,
                        std::uint64_t step_index) const;

  struct RestartInfo {
    std::uint64_t step_index = 0;
    std::optional<double> time; // from the first TimeHistory, when present
  };

  /// Overwrites all referenced data from the file written for step_index.
  /// The registry must list the same names and kinds in the same order.
  RestartInfo restart(const std::string &basename, std::uint64_t step_index);

  static std::string checkpoint_path(const std::string &basename,
                                     std::uint64_t step_index);

private:
  enum class Kind : std::uint8_t {
    ScalarReal = 0,
    ScalarInt = 1,
    Vector = 2,
    TimeHistory = 3,
  };
  struct Entry {
    std::string name;
    Kind kind;
    void *ref;
  };
  std::vector<Entry> entries_;

  void attach(const std::string &name, Kind kind, void *ref);
};

/// True when a checkpoint is due: every_n divides step and step > 0.
bool checkpoint_policy(std::int64_t every_n, std::int64_t step);

/// CRC-32 (IEEE 802.3, reflected 0xEDB88320) used by the container.
std::uint32_t crc32(const void *data, std::size_t size,
                    std::uint32_t seed = 0);

} // namespace mxf
