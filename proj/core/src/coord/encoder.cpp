#include "mcg/coord/encoder.hpp"

#include <algorithm>
#include <string>

#include "mcg/errors.hpp"

namespace mcg {

AgentEncoder::AgentEncoder(EncoderConfig cfg, Rng& rng)
    : cfg_(cfg),
      embed_("encoder.embed", cfg.input_dim(), cfg.embed_dim, rng),
      gru_("encoder.gru", cfg.embed_dim, cfg.hidden_dim, rng) {
  if (cfg.n_agents == 0 || cfg.n_actions == 0 || cfg.obs_dim == 0 || cfg.hidden_dim == 0 ||
      cfg.embed_dim == 0) {
    throw ArgumentError("AgentEncoder: all dimensions must be positive");
  }
}

void AgentEncoder::begin_episode(std::size_t batch) {
  if (batch == 0) throw ArgumentError("AgentEncoder::begin_episode: empty batch");
  batch_ = batch;
  h_ = Matrix(batch * cfg_.n_agents, cfg_.hidden_dim);
  carry_ = Matrix(batch * cfg_.n_agents, cfg_.hidden_dim);
}

Matrix AgentEncoder::build_inputs(const Matrix& obs, std::span<const std::size_t> prev_actions) const {
  const std::size_t rows = batch_ * cfg_.n_agents;
  if (obs.rows() != rows || obs.cols() != cfg_.obs_dim) {
    throw ArgumentError("AgentEncoder: expected observations " + std::to_string(rows) + "x" +
                        std::to_string(cfg_.obs_dim) + ", got " + obs.shape_string());
  }
  if (prev_actions.size() != rows) {
    throw ArgumentError("AgentEncoder: expected " + std::to_string(rows) +
                        " previous actions, got " + std::to_string(prev_actions.size()));
  }
  Matrix in(rows, cfg_.input_dim());
  for (std::size_t r = 0; r < rows; ++r) {
    auto dst = in.row(r);
    const auto src = obs.row(r);
    std::copy(src.begin(), src.end(), dst.begin());
    if (prev_actions[r] != kNoAction) {
      if (prev_actions[r] >= cfg_.n_actions) {
        throw ArgumentError("AgentEncoder: previous action out of range");
      }
      dst[cfg_.obs_dim + prev_actions[r]] = 1.0;
    }
    dst[cfg_.obs_dim + cfg_.n_actions + r % cfg_.n_agents] = 1.0;
  }
  return in;
}

Matrix AgentEncoder::encode_step(const Matrix& obs, std::span<const std::size_t> prev_actions) {
  if (!in_episode()) throw StateError("AgentEncoder::encode_step before begin_episode");
  Matrix e = activate(Activation::kRelu, embed_.forward(build_inputs(obs, prev_actions)));
  h_ = gru_.forward(e, h_);
  if (recording_) embed_out_.push_back(std::move(e));
  return h_;
}

void AgentEncoder::backward_step(const Matrix& dx) {
  if (embed_out_.empty()) throw StateError("AgentEncoder::backward_step without a cached step");
  if (!dx.same_shape(carry_)) {
    throw DimensionError("AgentEncoder::backward_step: upstream " + dx.shape_string());
  }
  const Matrix dh = dx + carry_;
  auto grads = gru_.backward(dh);
  carry_ = std::move(grads.dh_prev);
  const Matrix e = std::move(embed_out_.back());
  embed_out_.pop_back();
  embed_.backward(activate_backward(Activation::kRelu, e, grads.dx));
}

void AgentEncoder::end_backward() { carry_.set_zero(); }

ParameterList AgentEncoder::parameters() {
  ParameterList out = embed_.parameters();
  for (auto* p : gru_.parameters()) out.push_back(p);
  return out;
}

void AgentEncoder::set_recording(bool on) {
  recording_ = on;
  embed_.set_recording(on);
  gru_.set_recording(on);
}

void AgentEncoder::clear_cache() {
  embed_.clear_cache();
  gru_.clear_cache();
  embed_out_.clear();
}

// ---------------------------------------------------------------------------

UtilityHead::UtilityHead(std::size_t input_dim, std::size_t n_actions, Rng& rng)
    : linear_("utility", input_dim, n_actions, rng) {}

PayoffHead::PayoffHead(std::size_t input_dim, std::size_t hidden_dim, std::size_t n_actions,
                       Rng& rng)
    : n_actions_(n_actions),
      hidden_("payoff.hidden", 2 * input_dim, hidden_dim, rng),
      out_("payoff.out", hidden_dim, n_actions * n_actions, rng) {}

Matrix PayoffHead::forward(const Matrix& z, std::span<const NodePair> pairs) {
  const std::size_t d = z.cols();
  Parameter& w = hidden_.weight();
  if (w.value.rows() != 2 * d) {
    throw DimensionError("PayoffHead: features " + z.shape_string() + " for hidden weight " +
                         w.value.shape_string());
  }
  const Matrix top = matmul(z, row_block(w.value, 0, d));
  const Matrix bottom = matmul(z, row_block(w.value, d, d));
  const auto bias = hidden_.bias().value.row(0);
  const std::size_t hd = w.value.cols();
  Matrix h(pairs.size(), hd);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto [i, j] = pairs[r];
    if (i >= z.rows() || j >= z.rows()) throw ArgumentError("PayoffHead: pair index out of range");
    const auto ti = top.row(i);
    const auto bj = bottom.row(j);
    auto hr = h.row(r);
    for (std::size_t c = 0; c < hd; ++c) hr[c] = std::max(0.0, ti[c] + bj[c] + bias[c]);
  }
  Matrix out = out_.forward(h);
  if (recording_) cache_.push_back({z, std::vector<NodePair>(pairs.begin(), pairs.end()), std::move(h)});
  return out;
}

Matrix PayoffHead::backward(const Matrix& upstream) {
  if (cache_.empty()) throw StateError("PayoffHead::backward without a cached forward");
  const Cache c = std::move(cache_.back());
  cache_.pop_back();
  const Matrix dh = activate_backward(Activation::kRelu, c.hidden, out_.backward(upstream));
  const std::size_t d = c.z.cols();
  const std::size_t hd = dh.cols();
  Matrix dtop(c.z.rows(), hd);
  Matrix dbottom(c.z.rows(), hd);
  for (std::size_t r = 0; r < c.pairs.size(); ++r) {
    const auto [i, j] = c.pairs[r];
    const auto g = dh.row(r);
    auto ti = dtop.row(i);
    auto bj = dbottom.row(j);
    for (std::size_t k = 0; k < hd; ++k) {
      ti[k] += g[k];
      bj[k] += g[k];
    }
  }
  Parameter& w = hidden_.weight();
  Matrix gtop = matmul_tn(c.z, dtop);
  Matrix gbottom = matmul_tn(c.z, dbottom);
  add_row_block(w.grad, 0, gtop);
  add_row_block(w.grad, d, gbottom);
  hidden_.bias().grad += column_sums(dh);
  Matrix dz = matmul_nt(dtop, row_block(w.value, 0, d));
  dz += matmul_nt(dbottom, row_block(w.value, d, d));
  return dz;
}

ParameterList PayoffHead::parameters() {
  ParameterList out = hidden_.parameters();
  for (auto* p : out_.parameters()) out.push_back(p);
  return out;
}

void PayoffHead::set_recording(bool on) {
  recording_ = on;
  out_.set_recording(on);
}

void PayoffHead::clear_cache() {
  out_.clear_cache();
  cache_.clear();
}

}  // namespace mcg
