#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "psc/head.hpp"

namespace psc {

/// Activations kept by forward() for the backward pass.
struct ForwardCache {
  std::vector<std::vector<double>> inputs;          // input to each layer
  std::vector<std::vector<double>> pre_activation;  // W a + b of each layer
  std::vector<double> output;
};

/// Fully connected network: input -> hidden... -> output, rectifier on hidden
/// layers. PSC heads squash the last layer into (-1, 1); the naive head is linear.
///
/// Parameters live in one flat vector, layer by layer, each as a row-major
/// (out x in) weight block followed by the bias, so an optimizer or a
/// finite-difference probe can treat them uniformly.
class Regressor {
 public:
  Regressor() = default;

  /// He-initialized weights and zero biases, drawn from `seed`.
  Regressor(int input_dim, std::vector<int> hidden, Head head, int n_step, std::uint64_t seed);

  /// All parameters zero. Output is squash(0) = 0 (coded heads) or 0 (naive).
  static Regressor zeros(int input_dim, std::vector<int> hidden, Head head, int n_step);

  [[nodiscard]] Head head() const { return head_; }
  [[nodiscard]] int n_step() const { return n_step_; }
  [[nodiscard]] int input_dim() const { return sizes_.front(); }
  [[nodiscard]] int output_dim() const { return sizes_.back(); }
  [[nodiscard]] std::span<const int> layer_sizes() const { return sizes_; }

  [[nodiscard]] std::span<const double> parameters() const { return params_; }
  [[nodiscard]] std::span<double> parameters() { return params_; }

  void forward(std::span<const double> features, ForwardCache& cache) const;
  [[nodiscard]] std::vector<double> predict(std::span<const double> features) const;

  /// Accumulates d loss / d params into `grad` (same layout as parameters())
  /// given d loss / d output for the cached pass.
  void backward(const ForwardCache& cache, std::span<const double> grad_output,
                std::span<double> grad) const;

  /// Plain-text snapshot; see README for the format.
  void save(std::ostream& out) const;
  static Regressor load(std::istream& in);

  friend bool operator==(const Regressor&, const Regressor&) = default;

 private:
  Regressor(std::vector<int> sizes, Head head, int n_step);

  [[nodiscard]] std::size_t layer_offset(std::size_t layer) const { return offsets_[layer]; }
  [[nodiscard]] bool squashes_output() const { return head_ != Head::naive; }

  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
  Head head_ = Head::psc;
  int n_step_ = 3;
};

}  // namespace psc
