#include "sgrec/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace sgrec {

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "?";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "valid") return Split::valid;
  if (name == "test") return Split::test;
  throw ValueError("unknown split tag: " + name);
}

void DatasetConfig::validate() const {
  if (min_user_checkins <= 0 || min_poi_users <= 0 || session_gap_hours <= 0 ||
      min_seq_len <= 0 || max_seq_len <= 0)
    throw ValueError("dataset config thresholds must be positive");
  if (min_seq_len > max_seq_len)
    throw ValueError("min_seq_len exceeds max_seq_len");
  const double s = train_ratio + valid_ratio + test_ratio;
  if (train_ratio < 0 || valid_ratio < 0 || test_ratio < 0 || std::abs(s - 1.0) > 1e-9)
    throw ValueError("split ratios must be nonnegative and sum to 1");
}

std::uint64_t Vocabulary::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto fold = [&h](const std::string& s) {
    h = fnv1a64(s.data(), s.size(), h);
    h = fnv1a64("\x1f", 1, h);
  };
  for (const auto& u : users) fold(u);
  fold("|pois");
  for (const auto& p : pois) fold(p);
  fold("|cats");
  for (const auto& c : cats) fold(c);
  fold("|pc");
  for (int c : poi_category) h = fnv1a64(&c, sizeof(c), h);
  fold("|rel");
  for (const auto& [a, b] : relation_pairs) {
    h = fnv1a64(&a, sizeof(a), h);
    h = fnv1a64(&b, sizeof(b), h);
  }
  return h;
}

namespace {

const std::array<const char*, 12> kMonths = {"Jan", "Feb", "Mar", "Apr",
                                             "May", "Jun", "Jul", "Aug",
                                             "Sep", "Oct", "Nov", "Dec"};

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_int(const std::string& s, std::int64_t* out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stoll(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

bool parse_canonical_line(const std::string& line, CheckIn* out) {
  auto fields = split(line, ',');
  if (fields.size() != 4) return false;
  for (auto& f : fields) f = trim(f);
  if (fields[0].empty() || fields[1].empty() || fields[2].empty()) return false;
  std::int64_t ts = 0;
  if (!parse_int(fields[3], &ts) || ts <= 0) return false;
  out->user_id = fields[0];
  out->poi_id = fields[1];
  out->category_id = fields[2];
  out->timestamp = ts;
  return true;
}

// user \t venue \t category_id \t category_name \t lat \t lon \t tz_offset_min \t utc_time
bool parse_raw_line(const std::string& line, CheckIn* out) {
  auto fields = split(line, '\t');
  if (fields.size() != 8) return false;
  if (fields[0].empty() || fields[1].empty() || fields[2].empty()) return false;
  double lat = 0, lon = 0;
  if (!parse_double(trim(fields[4]), &lat) || !parse_double(trim(fields[5]), &lon))
    return false;  // position parsed for validity, not consumed by the model
  std::int64_t tz = 0;
  if (!parse_int(trim(fields[6]), &tz)) return false;
  std::int64_t ts = 0;
  try {
    ts = parse_checkin_time(trim(fields[7]));
  } catch (const FormatError&) {
    return false;
  }
  out->user_id = trim(fields[0]);
  out->poi_id = trim(fields[1]);
  out->category_id = trim(fields[2]);
  out->timestamp = ts;
  return true;
}

}  // namespace

std::int64_t parse_checkin_time(const std::string& text) {
  // e.g. "Tue Apr 03 18:00:09 +0000 2012"
  std::istringstream is(text);
  std::string wday, mon, clock, zone;
  int day = 0, year = 0;
  if (!(is >> wday >> mon >> day >> clock >> zone >> year))
    throw FormatError("unparseable check-in time: " + text);
  int month = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i)
    if (mon == kMonths[i]) month = static_cast<int>(i) + 1;
  if (month == 0 || day < 1 || day > 31)
    throw FormatError("unparseable check-in time: " + text);
  int hh = 0, mm = 0, ss = 0;
  if (std::sscanf(clock.c_str(), "%d:%d:%d", &hh, &mm, &ss) != 3 || hh > 23 ||
      mm > 59 || ss > 60 || hh < 0 || mm < 0 || ss < 0)
    throw FormatError("unparseable check-in time: " + text);
  if (zone.size() != 5 || (zone[0] != '+' && zone[0] != '-'))
    throw FormatError("unparseable time zone: " + text);
  const int zh = (zone[1] - '0') * 10 + (zone[2] - '0');
  const int zm = (zone[3] - '0') * 10 + (zone[4] - '0');
  std::int64_t offset = (zh * 3600 + zm * 60) * (zone[0] == '-' ? -1 : 1);
  return days_from_civil(year, static_cast<unsigned>(month),
                         static_cast<unsigned>(day)) *
             86400 +
         hh * 3600 + mm * 60 + ss - offset;
}

std::vector<CheckIn> parse_checkins(const std::string& path, CheckinFormat format,
                                    ParseReport* report) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open check-in file: " + path);
  std::vector<CheckIn> out;
  ParseReport rep;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (format == CheckinFormat::canonical && first) {
      first = false;
      if (trim(line) != "user_id,poi_id,category_id,timestamp")
        throw FormatError("missing canonical header in " + path);
      continue;
    }
    first = false;
    if (trim(line).empty()) continue;
    rep.data_lines += 1;
    CheckIn ci;
    const bool ok = format == CheckinFormat::canonical
                        ? parse_canonical_line(line, &ci)
                        : parse_raw_line(line, &ci);
    if (ok) {
      out.push_back(std::move(ci));
      rep.parsed += 1;
    } else {
      rep.malformed += 1;
    }
  }
  if (in.bad()) throw IoError("read failure on " + path);
  if (rep.data_lines > 0 &&
      static_cast<double>(rep.malformed) > 0.01 * static_cast<double>(rep.data_lines))
    throw FormatError("more than 1% malformed lines in " + path + " (" +
                      std::to_string(rep.malformed) + " of " +
                      std::to_string(rep.data_lines) + ")");
  if (report) *report = rep;
  return out;
}

std::vector<CheckIn> filter_dataset(std::vector<CheckIn> checkins,
                                    const DatasetConfig& cfg) {
  cfg.validate();
  bool changed = true;
  while (changed) {
    changed = false;
    std::unordered_map<std::string, int> per_user;
    for (const auto& c : checkins) per_user[c.user_id] += 1;
    std::size_t kept = 0;
    for (auto& c : checkins)
      if (per_user[c.user_id] >= cfg.min_user_checkins) checkins[kept++] = std::move(c);
    if (kept != checkins.size()) {
      checkins.resize(kept);
      changed = true;
    }

    std::unordered_map<std::string, std::set<std::string>> poi_users;
    for (const auto& c : checkins) poi_users[c.poi_id].insert(c.user_id);
    kept = 0;
    for (auto& c : checkins)
      if (static_cast<int>(poi_users[c.poi_id].size()) >= cfg.min_poi_users)
        checkins[kept++] = std::move(c);
    if (kept != checkins.size()) {
      checkins.resize(kept);
      changed = true;
    }
  }
  return checkins;
}

std::vector<RawSession> split_sequences(const std::vector<CheckIn>& checkins,
                                        const DatasetConfig& cfg) {
  cfg.validate();
  // Group per user, keeping first-appearance user order for determinism.
  std::vector<std::string> user_order;
  std::unordered_map<std::string, std::vector<CheckIn>> by_user;
  for (const auto& c : checkins) {
    auto [it, inserted] = by_user.try_emplace(c.user_id);
    if (inserted) user_order.push_back(c.user_id);
    it->second.push_back(c);
  }

  const std::int64_t gap_limit = std::int64_t(cfg.session_gap_hours) * 3600;
  std::vector<RawSession> out;
  for (const auto& uid : user_order) {
    auto& recs = by_user[uid];
    std::stable_sort(recs.begin(), recs.end(),
                     [](const CheckIn& a, const CheckIn& b) {
                       return a.timestamp < b.timestamp;
                     });
    std::vector<std::vector<CheckIn>> sessions;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (sessions.empty() ||
          recs[i].timestamp - sessions.back().back().timestamp > gap_limit)
        sessions.emplace_back();
      sessions.back().push_back(recs[i]);
    }

    Rng rng(mix_seed(cfg.seed, fnv1a64(uid)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& sess : sessions) {
      if (static_cast<int>(sess.size()) < cfg.min_seq_len) continue;
      if (static_cast<int>(sess.size()) > cfg.max_seq_len)
        sess.erase(sess.begin(), sess.end() - cfg.max_seq_len);  // keep most recent
      RawSession rs;
      rs.user_id = uid;
      const double u = unit(rng);
      rs.split = u < cfg.train_ratio                    ? Split::train
                 : u < cfg.train_ratio + cfg.valid_ratio ? Split::valid
                                                         : Split::test;
      rs.entries = std::move(sess);
      out.push_back(std::move(rs));
    }
  }
  return out;
}

IndexedDataset build_vocabs(const std::vector<RawSession>& sessions) {
  if (sessions.empty()) throw ValueError("build_vocabs: no sessions");

  // Users keeping at least one training session stay in the vocabulary.
  std::set<std::string> users_with_train;
  for (const auto& s : sessions)
    if (s.split == Split::train) users_with_train.insert(s.user_id);

  IndexedDataset ds;
  Vocabulary& v = ds.vocab;
  std::unordered_map<std::string, std::string> poi_cat_seen;
  std::set<std::string> conflicts;

  auto user_idx = [&v](const std::string& id) {
    auto [it, inserted] = v.user_ids.try_emplace(id, static_cast<int>(v.users.size()));
    if (inserted) v.users.push_back(id);
    return it->second;
  };
  auto cat_idx = [&v](const std::string& id) {
    auto [it, inserted] = v.cat_ids.try_emplace(id, static_cast<int>(v.cats.size()));
    if (inserted) v.cats.push_back(id);
    return it->second;
  };
  auto poi_idx = [&v](const std::string& id, int cat) {
    auto [it, inserted] = v.poi_ids.try_emplace(id, static_cast<int>(v.pois.size()));
    if (inserted) {
      v.pois.push_back(id);
      v.poi_category.push_back(cat);
    }
    return it->second;
  };

  for (const auto& s : sessions) {
    if (!users_with_train.count(s.user_id)) continue;
    CheckInSequence seq;
    seq.user = user_idx(s.user_id);
    seq.split = s.split;
    for (const auto& c : s.entries) {
      auto [it, inserted] = poi_cat_seen.try_emplace(c.poi_id, c.category_id);
      if (!inserted && it->second != c.category_id) conflicts.insert(c.poi_id);
      const int cat = cat_idx(c.category_id);
      seq.entries.push_back({poi_idx(c.poi_id, cat), cat, c.timestamp});
    }
    ds.sequences.push_back(std::move(seq));
  }

  if (!conflicts.empty()) {
    std::string msg = "POIs with more than one category:";
    for (const auto& p : conflicts) msg += " " + p;
    throw DataIntegrityError(msg);
  }

  // Relations come from consecutive training transitions only.
  for (const auto& seq : ds.sequences) {
    if (seq.split != Split::train) continue;
    for (std::size_t i = 0; i + 1 < seq.entries.size(); ++i) {
      std::pair<int, int> key{seq.entries[i].cat, seq.entries[i + 1].cat};
      auto [it, inserted] = v.relation_ids.try_emplace(
          key, static_cast<int>(v.relation_pairs.size()) + 1);
      if (inserted) v.relation_pairs.push_back(key);
    }
  }
  return ds;
}

}  // namespace sgrec
