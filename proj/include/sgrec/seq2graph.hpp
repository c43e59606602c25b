#ifndef SGREC_SEQ2GRAPH_HPP
#define SGREC_SEQ2GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgrec/data.hpp"

namespace sgrec {

enum class NeighborScope { per_user, global };

const char* scope_name(NeighborScope s);
NeighborScope scope_from_name(const std::string& name);

// Incoming-transition neighbours per POI: for each target p, the set of
// (source q, relation c_q->c_p) pairs observed on consecutive training
// check-ins. Immutable once built; shared read-only by the trainer.
class TransitionIndex {
 public:
  TransitionIndex() = default;

  NeighborScope scope() const { return scope_; }

  // Neighbours of `poi` (user is ignored under global scope). Sorted by
  // source index; empty when the POI was never a transition target.
  std::span<const std::pair<int, int>> neighbors(int user, int poi) const;

  std::size_t edge_count() const;
  void dump_csv(const std::string& path) const;

  friend TransitionIndex build_transition_index(
      const std::vector<const CheckInSequence*>& train_sequences,
      const Vocabulary& vocab, NeighborScope scope);

 private:
  std::uint64_t key(int user, int poi) const {
    return scope_ == NeighborScope::per_user
               ? (std::uint64_t(std::uint32_t(user)) << 32) | std::uint32_t(poi)
               : std::uint64_t(std::uint32_t(poi));
  }
  NeighborScope scope_ = NeighborScope::per_user;
  std::unordered_map<std::uint64_t, std::vector<std::pair<int, int>>> edges_;
};

// Builds the index from training sequences only; passing any sequence
// tagged valid/test is a contract violation and throws.
TransitionIndex build_transition_index(
    const std::vector<const CheckInSequence*>& train_sequences,
    const Vocabulary& vocab, NeighborScope scope);

// Uniform sample without replacement of max(1, round(gamma*|N|)) sources
// from N(poi), excluding the POI itself (its self-loop is unconditional)
// and, when given, `exclude_poi` (the training label, to keep the target
// out of the augmentation sources).
std::vector<std::pair<int, int>> sample_neighbors(const TransitionIndex& index,
                                                  int user, int poi, double gamma,
                                                  Rng& rng, int exclude_poi = -1);

struct AugNode {
  int poi = -1;
  int cat = -1;
  bool base = false;  // appears at some sequence position
};

struct AugEdge {
  int src = -1;  // node indices
  int dst = -1;
  int relation = Vocabulary::kUnkRelation;
};

// A sequence turned into its graph: one node per distinct POI plus the
// sampled neighbour sources, edges = self-loops on base nodes, the
// consecutive-transition path, and sampled incoming edges.
struct AugmentedSequence {
  std::vector<AugNode> nodes;
  std::vector<int> position_nodes;  // sequence position -> node index
  std::vector<AugEdge> edges;

  std::size_t base_node_count() const {
    std::size_t n = 0;
    for (const auto& v : nodes) n += v.base ? 1 : 0;
    return n;
  }
};

AugmentedSequence augment_sequence(int user, std::span<const SeqEntry> entries,
                                   const TransitionIndex& index,
                                   const Vocabulary& vocab, double gamma, Rng& rng,
                                   int exclude_source_poi = -1);

}  // namespace sgrec

#endif  // SGREC_SEQ2GRAPH_HPP
