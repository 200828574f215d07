#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "mcg/coord/factored_q.hpp"
#include "mcg/graph/adjacency.hpp"
#include "mcg/numerics/matrix.hpp"
#include "mcg/numerics/parameter.hpp"

namespace mcg {

// One full episode. obs[t] is the joint observation the agents acted on at
// step t; only the last step is terminal.
struct EpisodeRecord {
  std::vector<Matrix> obs;
  std::vector<JointAction> actions;
  std::vector<double> rewards;
  std::vector<bool> terminated;
  std::vector<AdjacencyTensor> graphs;  // empty unless the env supplies graphs
  std::uint64_t id = 0;                 // insertion order, assigned by the buffer

  std::size_t length() const { return actions.size(); }
  double total_reward() const;
  // Throws StateError if parallel arrays disagree or termination is not
  // exactly the final step.
  void validate() const;
};

// Ring buffer of whole episodes with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void add(EpisodeRecord episode);
  // Uniform with replacement over the stored episodes.
  std::vector<const EpisodeRecord*> sample(std::size_t count, Rng& rng) const;

  std::size_t size() const { return episodes_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t total_added() const { return next_id_; }
  bool contains(std::uint64_t id) const;

 private:
  std::size_t capacity_;
  std::deque<EpisodeRecord> episodes_;
  std::uint64_t next_id_ = 0;
};

}  // namespace mcg
