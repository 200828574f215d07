#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mcg/graph/adjacency.hpp"
#include "mcg/graph/metapath.hpp"
#include "mcg/numerics/layers.hpp"
#include "mcg/numerics/parameter.hpp"

namespace mcg {

// Graph-side state of one generator pass: soft-selected hops, composed
// meta-graphs, their normalized forms and the extracted edge set. Gradients
// w.r.t. the normalized matrices accumulate in d_normalized until
// McgGenerator::graph_backward() pushes them into the selection weights.
struct McgGraph {
  AdjacencyTensor input;
  std::vector<std::vector<Matrix>> selected;  // [channel][slot]
  std::vector<Matrix> channels;               // A_M per channel
  std::vector<Matrix> normalized;             // D̃⁻¹(A_M + I) per channel
  std::vector<Matrix> d_normalized;
  EdgeSet edges;
  bool bypass = false;
};

struct McgOutput {
  std::vector<Matrix> channels;
  EdgeSet edges;
  Matrix z;  // n × (channels · d), or n × d in bypass mode
};

// Meta coordination graph generator: soft selection over typed adjacency
// layers, meta-path composition, and one graph convolution per channel
// sharing the weight W:
//   Z = ‖_c σ(D̃_c⁻¹ (A_M^(c) + I) X W)
class McgGenerator {
 public:
  McgGenerator() = default;
  McgGenerator(MetaPathConfig cfg, std::size_t edge_types, std::size_t feature_dim,
               Activation activation, bool bypass, Rng& rng);

  const MetaPathConfig& config() const { return cfg_; }
  bool bypass() const { return bypass_; }
  std::size_t feature_dim() const { return gcn_weight_.value.rows(); }
  std::size_t output_dim() const { return bypass_ ? feature_dim() : cfg_.channels * feature_dim(); }
  Activation activation() const { return activation_; }

  SelectionWeights& selection() { return sel_; }
  const SelectionWeights& selection() const { return sel_; }
  Parameter& gcn_weight() { return gcn_weight_; }
  ParameterList parameters() { return {&sel_.w_phi(), &gcn_weight_}; }

  // `a` must already contain the identity layer.
  std::shared_ptr<McgGraph> build_graph(const AdjacencyTensor& a) const;

  // x stacks graphs.size() blocks of n rows; block b is convolved over
  // graphs[b]. Graphs may repeat (shared static structure).
  Matrix convolve(std::span<const std::shared_ptr<McgGraph>> graphs, const Matrix& x);
  // Pops the newest convolve cache. Accumulates dW and the graphs'
  // d_normalized; returns dL/dx.
  Matrix convolve_backward(const Matrix& dz);
  // Backpropagates and clears graph.d_normalized into w_phi.
  void graph_backward(McgGraph& graph);

  // Single-instance convenience pair: build_graph + convolve, then
  // convolve_backward + graph_backward.
  McgOutput generate(const AdjacencyTensor& a, const Matrix& x);
  Matrix generate_backward(const Matrix& dz);

  void set_recording(bool on) { recording_ = on; }
  void clear_cache() {
    cache_.clear();
    pending_.clear();
  }
  std::size_t cached() const { return cache_.size(); }

 private:
  struct ConvCache {
    std::vector<std::shared_ptr<McgGraph>> graphs;
    Matrix x;
    Matrix xw;
    std::vector<Matrix> outputs;  // σ(...) per channel, stacked over blocks
  };

  MetaPathConfig cfg_;
  Activation activation_ = Activation::kRelu;
  bool bypass_ = false;
  SelectionWeights sel_;
  Parameter gcn_weight_;
  std::vector<ConvCache> cache_;
  std::vector<std::shared_ptr<McgGraph>> pending_;
  bool recording_ = true;
};

}  // namespace mcg
