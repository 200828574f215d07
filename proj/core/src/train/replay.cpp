#include "mcg/train/replay.hpp"

#include "mcg/errors.hpp"

namespace mcg {

double EpisodeRecord::total_reward() const {
  double total = 0.0;
  for (double r : rewards) total += r;
  return total;
}

void EpisodeRecord::validate() const {
  const std::size_t len = actions.size();
  if (len == 0) throw StateError("EpisodeRecord: empty episode");
  if (obs.size() != len || rewards.size() != len || terminated.size() != len ||
      (!graphs.empty() && graphs.size() != len)) {
    throw StateError("EpisodeRecord: parallel arrays have different lengths");
  }
  for (std::size_t t = 0; t + 1 < len; ++t) {
    if (terminated[t]) throw StateError("EpisodeRecord: terminal step before the end");
  }
  if (!terminated.back()) throw StateError("EpisodeRecord: last step is not terminal");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ArgumentError("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::add(EpisodeRecord episode) {
  episode.validate();
  episode.id = next_id_++;
  if (episodes_.size() == capacity_) episodes_.pop_front();
  episodes_.push_back(std::move(episode));
}

std::vector<const EpisodeRecord*> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  if (episodes_.empty()) throw StateError("ReplayBuffer: sampling from an empty buffer");
  std::uniform_int_distribution<std::size_t> pick(0, episodes_.size() - 1);
  std::vector<const EpisodeRecord*> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(&episodes_[pick(rng)]);
  return out;
}

bool ReplayBuffer::contains(std::uint64_t id) const {
  if (episodes_.empty()) return false;
  return id >= episodes_.front().id && id <= episodes_.back().id;
}

}  // namespace mcg
