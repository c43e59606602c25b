#include "sgrec/seq2graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace sgrec {

const char* scope_name(NeighborScope s) {
  return s == NeighborScope::per_user ? "per-user" : "global";
}

NeighborScope scope_from_name(const std::string& name) {
  if (name == "per-user" || name == "per_user") return NeighborScope::per_user;
  if (name == "global") return NeighborScope::global;
  throw ValueError("unknown neighbour scope: " + name);
}

std::span<const std::pair<int, int>> TransitionIndex::neighbors(int user,
                                                                int poi) const {
  auto it = edges_.find(key(user, poi));
  if (it == edges_.end()) return {};
  return {it->second.data(), it->second.size()};
}

std::size_t TransitionIndex::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : edges_) n += v.size();
  return n;
}

void TransitionIndex::dump_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write index dump: " + path);
  out << "target_poi,source_poi,relation\n";
  std::set<std::tuple<int, int, int>> rows;
  for (const auto& [k, nbrs] : edges_) {
    const int poi = static_cast<int>(k & 0xffffffffULL);
    for (const auto& [src, rel] : nbrs) rows.insert({poi, src, rel});
  }
  for (const auto& [tgt, src, rel] : rows)
    out << tgt << "," << src << "," << rel << "\n";
}

TransitionIndex build_transition_index(
    const std::vector<const CheckInSequence*>& train_sequences,
    const Vocabulary& vocab, NeighborScope scope) {
  TransitionIndex idx;
  idx.scope_ = scope;
  std::unordered_map<std::uint64_t, std::set<std::pair<int, int>>> acc;
  for (const auto* seq : train_sequences) {
    if (seq->split != Split::train)
      throw ValueError("transition index must be built from training sequences only");
    for (std::size_t i = 0; i + 1 < seq->entries.size(); ++i) {
      const auto& from = seq->entries[i];
      const auto& to = seq->entries[i + 1];
      const int rel = vocab.relation(from.cat, to.cat);
      acc[idx.key(seq->user, to.poi)].insert({from.poi, rel});
    }
  }
  for (auto& [k, s] : acc)
    idx.edges_.emplace(k, std::vector<std::pair<int, int>>(s.begin(), s.end()));
  return idx;
}

std::vector<std::pair<int, int>> sample_neighbors(const TransitionIndex& index,
                                                  int user, int poi, double gamma,
                                                  Rng& rng, int exclude_poi) {
  if (gamma < 0.0 || gamma > 1.0) throw ValueError("gamma must lie in [0, 1]");
  if (gamma == 0.0) return {};
  auto all = index.neighbors(user, poi);
  std::vector<std::pair<int, int>> candidates;
  candidates.reserve(all.size());
  for (const auto& nb : all)
    if (nb.first != poi && nb.first != exclude_poi) candidates.push_back(nb);
  if (candidates.empty()) return {};
  std::size_t k = static_cast<std::size_t>(
      std::llround(gamma * static_cast<double>(candidates.size())));
  k = std::max<std::size_t>(1, std::min(k, candidates.size()));
  std::vector<std::pair<int, int>> picked;
  picked.reserve(k);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(picked), k, rng);
  return picked;
}

AugmentedSequence augment_sequence(int user, std::span<const SeqEntry> entries,
                                   const TransitionIndex& index,
                                   const Vocabulary& vocab, double gamma, Rng& rng,
                                   int exclude_source_poi) {
  AugmentedSequence g;
  std::unordered_map<int, int> node_of_poi;
  std::set<std::pair<int, int>> edge_set;

  auto intern_node = [&](int poi, int cat, bool base) {
    auto [it, inserted] = node_of_poi.try_emplace(poi, static_cast<int>(g.nodes.size()));
    if (inserted) g.nodes.push_back({poi, cat, base});
    if (base) g.nodes[it->second].base = true;
    return it->second;
  };
  auto add_edge = [&](int src, int dst, int rel) {
    if (edge_set.insert({src, dst}).second) g.edges.push_back({src, dst, rel});
  };

  for (const auto& e : entries)
    g.position_nodes.push_back(intern_node(e.poi, e.cat, true));

  const std::size_t n_base = g.nodes.size();

  // Self-loops on every base node, then the consecutive path.
  for (std::size_t v = 0; v < n_base; ++v) {
    const int c = g.nodes[v].cat;
    add_edge(static_cast<int>(v), static_cast<int>(v), vocab.relation(c, c));
  }
  for (std::size_t i = 0; i + 1 < g.position_nodes.size(); ++i) {
    const int a = g.position_nodes[i];
    const int b = g.position_nodes[i + 1];
    add_edge(a, b, vocab.relation(g.nodes[a].cat, g.nodes[b].cat));
  }

  if (gamma > 0.0) {
    for (std::size_t v = 0; v < n_base; ++v) {
      auto picked = sample_neighbors(index, user, g.nodes[v].poi, gamma, rng,
                                     exclude_source_poi);
      for (const auto& [src_poi, rel] : picked) {
        const int src = intern_node(src_poi, vocab.poi_category.at(src_poi), false);
        add_edge(src, static_cast<int>(v), rel);
      }
    }
  }
  return g;
}

}  // namespace sgrec
