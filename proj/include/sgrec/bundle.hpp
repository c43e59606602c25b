#ifndef SGREC_BUNDLE_HPP
#define SGREC_BUNDLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgrec/data.hpp"

namespace sgrec {

struct DatasetStats {
  std::size_t users = 0;
  std::size_t pois = 0;
  std::size_t cats = 0;
  std::size_t checkins = 0;  // surviving check-ins after filtering
  std::size_t sequences = 0;
  std::size_t relations = 0;  // distinct observed pairs, UNK excluded
};

// The self-describing dataset artifact produced by `preprocess` and
// consumed by everything downstream. On disk: a `SGRD1` magic line
// followed by one canonical JSON document.
struct DatasetBundle {
  DatasetConfig config;
  Vocabulary vocab;
  std::vector<CheckInSequence> sequences;
  std::size_t filtered_checkin_count = 0;

  DatasetStats stats() const;
  std::vector<const CheckInSequence*> split(Split s) const;

  void save(const std::string& path) const;
  static DatasetBundle load(const std::string& path);
};

// Full preprocessing pass over already-parsed records.
DatasetBundle preprocess(const std::vector<CheckIn>& checkins,
                         const DatasetConfig& cfg);

std::uint64_t file_checksum(const std::string& path);

}  // namespace sgrec

#endif  // SGREC_BUNDLE_HPP
