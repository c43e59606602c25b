#ifndef SGREC_DATA_HPP
#define SGREC_DATA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sgrec/common.hpp"

namespace sgrec {

struct CheckIn {
  std::string user_id;
  std::string poi_id;
  std::string category_id;
  std::int64_t timestamp = 0;  // epoch seconds UTC
};

enum class Split { train, valid, test };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct SeqEntry {
  int poi = -1;
  int cat = -1;
  std::int64_t ts = 0;
};

// One session: a user's chronologically ordered check-ins, already indexed
// against the vocabulary and tagged with its split.
struct CheckInSequence {
  int user = -1;
  Split split = Split::train;
  std::vector<SeqEntry> entries;
};

struct Vocabulary {
  std::vector<std::string> users;  // index -> external id
  std::vector<std::string> pois;
  std::vector<std::string> cats;
  std::unordered_map<std::string, int> user_ids;
  std::unordered_map<std::string, int> poi_ids;
  std::unordered_map<std::string, int> cat_ids;
  std::vector<int> poi_category;  // poi index -> category index

  // Ordered category pairs seen on consecutive training check-ins.
  // Relation index 0 is reserved for unseen pairs (UNK); observed pairs
  // get indices 1..n in first-appearance order.
  static constexpr int kUnkRelation = 0;
  std::vector<std::pair<int, int>> relation_pairs;
  std::map<std::pair<int, int>, int> relation_ids;

  int relation(int cat_from, int cat_to) const {
    auto it = relation_ids.find({cat_from, cat_to});
    return it == relation_ids.end() ? kUnkRelation : it->second;
  }
  std::size_t num_relations() const { return relation_pairs.size(); }
  std::size_t relation_table_rows() const { return relation_pairs.size() + 1; }

  std::uint64_t fingerprint() const;
};

struct DatasetConfig {
  int min_user_checkins = 10;
  int min_poi_users = 10;
  int session_gap_hours = 24;  // 24h Gowalla, 72h Foursquare
  int min_seq_len = 10;
  int max_seq_len = 20;
  double train_ratio = 0.8;
  double valid_ratio = 0.1;
  double test_ratio = 0.1;
  std::uint64_t seed = 42;

  void validate() const;
};

enum class CheckinFormat { canonical, raw };

struct ParseReport {
  std::size_t data_lines = 0;
  std::size_t parsed = 0;
  std::size_t malformed = 0;
};

// Reads a check-in log. `canonical` is the CSV described in the README;
// `raw` is the tab-separated Foursquare global check-in layout.
std::vector<CheckIn> parse_checkins(const std::string& path, CheckinFormat format,
                                    ParseReport* report = nullptr);

// "Tue Apr 03 18:00:09 +0000 2012" -> epoch seconds. Throws FormatError.
std::int64_t parse_checkin_time(const std::string& text);

// Iteratively removes users below min_user_checkins and POIs visited by
// fewer than min_poi_users distinct users, until a fixed point. Keeps the
// input order of the surviving records.
std::vector<CheckIn> filter_dataset(std::vector<CheckIn> checkins,
                                    const DatasetConfig& cfg);

// A session after gap-splitting, still in the string-id domain.
struct RawSession {
  std::string user_id;
  Split split = Split::train;
  std::vector<CheckIn> entries;
};

// Sorts each user's check-ins by time, cuts sessions at gaps longer than
// the window, drops short sessions, keeps the most recent max_seq_len
// check-ins of long ones, and assigns splits per user from cfg.seed.
std::vector<RawSession> split_sequences(const std::vector<CheckIn>& checkins,
                                        const DatasetConfig& cfg);

struct IndexedDataset {
  Vocabulary vocab;
  std::vector<CheckInSequence> sequences;
};

// Builds dense vocabularies over the given sessions and indexes them.
// Users left with no training sequence are dropped together with their
// sessions (their embedding would never receive a gradient).
IndexedDataset build_vocabs(const std::vector<RawSession>& sessions);

}  // namespace sgrec

#endif  // SGREC_DATA_HPP
