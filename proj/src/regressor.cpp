#include "psc/regressor.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "psc/regression_head.hpp"

namespace psc {
namespace {

constexpr int kSnapshotVersion = 1;

std::vector<int> full_sizes(int input_dim, const std::vector<int>& hidden, Head head, int n_step) {
  if (input_dim <= 0) {
    throw std::invalid_argument("Regressor: input dimension must be positive");
  }
  std::vector<int> sizes{input_dim};
  for (int h : hidden) {
    if (h <= 0) {
      throw std::invalid_argument("Regressor: hidden sizes must be positive");
    }
    sizes.push_back(h);
  }
  sizes.push_back(output_dim(head, n_step));
  return sizes;
}

}  // namespace

Regressor::Regressor(std::vector<int> sizes, Head head, int n_step)
    : sizes_(std::move(sizes)), head_(head), n_step_(n_step) {
  if (head != Head::naive && n_step < 3) {
    throw std::invalid_argument("Regressor: n_step must be >= 3");
  }
  if (sizes_.size() < 2 || sizes_.back() != psc::output_dim(head, n_step)) {
    throw std::invalid_argument("Regressor: output size does not match head");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    total += out * in + out;
  }
  params_.assign(total, 0.0);
}

Regressor::Regressor(int input_dim, std::vector<int> hidden, Head head, int n_step,
                     std::uint64_t seed)
    : Regressor(full_sizes(input_dim, hidden, head, n_step), head, n_step) {
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    std::normal_distribution<double> init(0.0, std::sqrt(2.0 / static_cast<double>(in)));
    double* weights = params_.data() + offsets_[l];
    for (std::size_t i = 0; i < out * in; ++i) {
      weights[i] = init(rng);
    }
  }
}

Regressor Regressor::zeros(int input_dim, std::vector<int> hidden, Head head, int n_step) {
  return Regressor(full_sizes(input_dim, hidden, head, n_step), head, n_step);
}

void Regressor::forward(std::span<const double> features, ForwardCache& cache) const {
  if (features.size() != static_cast<std::size_t>(input_dim())) {
    throw std::invalid_argument("Regressor::forward: expected " + std::to_string(input_dim()) +
                                " features, got " + std::to_string(features.size()));
  }
  const std::size_t layers = sizes_.size() - 1;
  cache.inputs.resize(layers);
  cache.pre_activation.resize(layers);
  cache.inputs[0].assign(features.begin(), features.end());

  for (std::size_t l = 0; l < layers; ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double* weights = params_.data() + offsets_[l];
    const double* bias = weights + out * in;
    const std::vector<double>& a = cache.inputs[l];
    std::vector<double>& z = cache.pre_activation[l];
    z.resize(out);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = bias[o];
      const double* row = weights + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        acc += row[i] * a[i];
      }
      z[o] = acc;
    }
    if (l + 1 < layers) {
      std::vector<double>& next = cache.inputs[l + 1];
      next.resize(out);
      for (std::size_t o = 0; o < out; ++o) {
        next[o] = z[o] > 0.0 ? z[o] : 0.0;
      }
    }
  }
  cache.output = cache.pre_activation.back();
  if (squashes_output()) {
    squash_inplace(cache.output);
  }
}

std::vector<double> Regressor::predict(std::span<const double> features) const {
  ForwardCache cache;
  forward(features, cache);
  return std::move(cache.output);
}

void Regressor::backward(const ForwardCache& cache, std::span<const double> grad_output,
                         std::span<double> grad) const {
  if (grad.size() != params_.size()) {
    throw std::invalid_argument("Regressor::backward: gradient buffer size mismatch");
  }
  if (grad_output.size() != static_cast<std::size_t>(output_dim())) {
    throw std::invalid_argument("Regressor::backward: output gradient size mismatch");
  }
  const std::size_t layers = sizes_.size() - 1;
  std::vector<double> delta(grad_output.begin(), grad_output.end());
  if (squashes_output()) {
    const auto& z = cache.pre_activation.back();
    for (std::size_t o = 0; o < delta.size(); ++o) {
      delta[o] *= squash_grad(z[o]);
    }
  }
  std::vector<double> upstream;
  for (std::size_t l = layers; l-- > 0;) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double* weights = params_.data() + offsets_[l];
    double* grad_weights = grad.data() + offsets_[l];
    double* grad_bias = grad_weights + out * in;
    const std::vector<double>& a = cache.inputs[l];
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      grad_bias[o] += d;
      double* row = grad_weights + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        row[i] += d * a[i];
      }
    }
    if (l == 0) {
      break;
    }
    upstream.assign(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      const double* row = weights + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        upstream[i] += row[i] * d;
      }
    }
    // Rectifier derivative, taken as 0 at the kink.
    const auto& z_prev = cache.pre_activation[l - 1];
    for (std::size_t i = 0; i < in; ++i) {
      upstream[i] = z_prev[i] > 0.0 ? upstream[i] : 0.0;
    }
    delta.swap(upstream);
  }
}

void Regressor::save(std::ostream& out) const {
  out << "psc-regressor " << kSnapshotVersion << '\n';
  out << "head " << to_string(head_) << '\n';
  out << "n_step " << n_step_ << '\n';
  out << "layers " << sizes_.size();
  for (int s : sizes_) {
    out << ' ' << s;
  }
  out << '\n';
  out << "params " << params_.size() << '\n';
  char buf[32];
  for (double p : params_) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << buf << '\n';
  }
}

Regressor Regressor::load(std::istream& in) {
  auto expect = [&](const char* key) {
    std::string word;
    if (!(in >> word) || word != key) {
      throw std::runtime_error(std::string("model snapshot: expected '") + key + "'");
    }
  };
  expect("psc-regressor");
  int version = 0;
  in >> version;
  if (version != kSnapshotVersion) {
    throw std::runtime_error("model snapshot: unsupported version " + std::to_string(version));
  }
  expect("head");
  std::string head_name;
  in >> head_name;
  expect("n_step");
  int n_step = 0;
  in >> n_step;
  expect("layers");
  std::size_t count = 0;
  in >> count;
  std::vector<int> sizes(count);
  for (int& s : sizes) {
    in >> s;
  }
  expect("params");
  std::size_t n_params = 0;
  in >> n_params;
  if (!in) {
    throw std::runtime_error("model snapshot: truncated header");
  }
  Regressor model(std::move(sizes), parse_head(head_name), n_step);
  if (n_params != model.params_.size()) {
    throw std::runtime_error("model snapshot: parameter count does not match layer sizes");
  }
  for (double& p : model.params_) {
    if (!(in >> p)) {
      throw std::runtime_error("model snapshot: truncated parameters");
    }
  }
  return model;
}

}  // namespace psc
