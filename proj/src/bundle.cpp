#include "sgrec/bundle.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sgrec {

using nlohmann::json;

namespace {
constexpr const char* kMagic = "SGRD1";

json config_to_json(const DatasetConfig& c) {
  return json{{"min_user_checkins", c.min_user_checkins},
              {"min_poi_users", c.min_poi_users},
              {"session_gap_hours", c.session_gap_hours},
              {"min_seq_len", c.min_seq_len},
              {"max_seq_len", c.max_seq_len},
              {"train_ratio", c.train_ratio},
              {"valid_ratio", c.valid_ratio},
              {"test_ratio", c.test_ratio},
              {"seed", c.seed}};
}

DatasetConfig config_from_json(const json& j) {
  DatasetConfig c;
  c.min_user_checkins = j.at("min_user_checkins").get<int>();
  c.min_poi_users = j.at("min_poi_users").get<int>();
  c.session_gap_hours = j.at("session_gap_hours").get<int>();
  c.min_seq_len = j.at("min_seq_len").get<int>();
  c.max_seq_len = j.at("max_seq_len").get<int>();
  c.train_ratio = j.at("train_ratio").get<double>();
  c.valid_ratio = j.at("valid_ratio").get<double>();
  c.test_ratio = j.at("test_ratio").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}
}  // namespace

DatasetStats DatasetBundle::stats() const {
  DatasetStats s;
  s.users = vocab.users.size();
  s.pois = vocab.pois.size();
  s.cats = vocab.cats.size();
  s.checkins = filtered_checkin_count;
  s.sequences = sequences.size();
  s.relations = vocab.num_relations();
  return s;
}

std::vector<const CheckInSequence*> DatasetBundle::split(Split s) const {
  std::vector<const CheckInSequence*> out;
  for (const auto& seq : sequences)
    if (seq.split == s) out.push_back(&seq);
  return out;
}

void DatasetBundle::save(const std::string& path) const {
  json j;
  j["config"] = config_to_json(config);
  j["checkin_count"] = filtered_checkin_count;
  json v;
  v["users"] = vocab.users;
  v["pois"] = vocab.pois;
  v["cats"] = vocab.cats;
  v["poi_category"] = vocab.poi_category;
  json rels = json::array();
  for (const auto& [a, b] : vocab.relation_pairs) rels.push_back(json::array({a, b}));
  v["relations"] = rels;
  j["vocab"] = v;
  json seqs = json::array();
  for (const auto& s : sequences) {
    json e = json::array();
    for (const auto& en : s.entries) e.push_back(json::array({en.poi, en.cat, en.ts}));
    seqs.push_back(json{{"user", s.user}, {"split", split_name(s.split)}, {"entries", e}});
  }
  j["sequences"] = seqs;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write bundle: " + path);
  out << kMagic << "\n" << j.dump() << "\n";
  if (!out) throw IoError("write failure on bundle: " + path);
}

DatasetBundle DatasetBundle::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open bundle: " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic)
    throw FormatError("not a SGRD1 dataset bundle: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("corrupt bundle " + path + ": " + e.what());
  }
  DatasetBundle b;
  try {
    b.config = config_from_json(j.at("config"));
    b.filtered_checkin_count = j.at("checkin_count").get<std::size_t>();
    const auto& v = j.at("vocab");
    b.vocab.users = v.at("users").get<std::vector<std::string>>();
    b.vocab.pois = v.at("pois").get<std::vector<std::string>>();
    b.vocab.cats = v.at("cats").get<std::vector<std::string>>();
    b.vocab.poi_category = v.at("poi_category").get<std::vector<int>>();
    for (const auto& r : v.at("relations")) {
      std::pair<int, int> key{r.at(0).get<int>(), r.at(1).get<int>()};
      b.vocab.relation_ids[key] = static_cast<int>(b.vocab.relation_pairs.size()) + 1;
      b.vocab.relation_pairs.push_back(key);
    }
    for (std::size_t i = 0; i < b.vocab.users.size(); ++i)
      b.vocab.user_ids[b.vocab.users[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < b.vocab.pois.size(); ++i)
      b.vocab.poi_ids[b.vocab.pois[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < b.vocab.cats.size(); ++i)
      b.vocab.cat_ids[b.vocab.cats[i]] = static_cast<int>(i);
    for (const auto& s : j.at("sequences")) {
      CheckInSequence seq;
      seq.user = s.at("user").get<int>();
      seq.split = split_from_name(s.at("split").get<std::string>());
      for (const auto& e : s.at("entries"))
        seq.entries.push_back(
            {e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<std::int64_t>()});
      b.sequences.push_back(std::move(seq));
    }
  } catch (const json::exception& e) {
    throw FormatError("corrupt bundle " + path + ": " + e.what());
  }
  return b;
}

DatasetBundle preprocess(const std::vector<CheckIn>& checkins,
                         const DatasetConfig& cfg) {
  cfg.validate();
  auto filtered = filter_dataset(checkins, cfg);
  DatasetBundle b;
  b.config = cfg;
  b.filtered_checkin_count = filtered.size();
  if (filtered.empty()) {
    // Downstream callers treat an empty bundle as "empty result".
    return b;
  }
  auto sessions = split_sequences(filtered, cfg);
  if (sessions.empty()) return b;
  auto ds = build_vocabs(sessions);
  b.vocab = std::move(ds.vocab);
  b.sequences = std::move(ds.sequences);
  return b;
}

std::uint64_t file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for checksum: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  return fnv1a64(bytes.data(), bytes.size());
}

}  // namespace sgrec
