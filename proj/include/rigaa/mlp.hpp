// mlp.hpp — small dense networks in Eigen: tanh hidden layers, linear
// output, explicit backward pass, Adam updates with global-norm clipping.
// Double precision throughout so gradients can be checked against finite
// differences.
#ifndef RIGAA_MLP_HPP_
#define RIGAA_MLP_HPP_

#include <Eigen/Core>

#include <vector>

#include "rigaa/rng.hpp"

namespace rigaa::nn {

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  void resize_like(const Gradients& other);
  void set_zero();
  double squared_norm() const;
  void scale(double factor);
};

// Layers: tanh after every layer except the last (linear output).
// Orthogonal weight init; per-layer gain, biases zero.
class Mlp {
 public:
  struct Cache {
    // activations[0] is the input, activations[k] the post-tanh output of
    // layer k-1; the final linear output is not cached.
    std::vector<Eigen::MatrixXd> activations;
  };

  Mlp() = default;
  Mlp(const std::vector<Eigen::Index>& sizes, Rng& rng, double hidden_gain,
      double out_gain);

  // x: (in, batch) -> (out, batch)
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache* cache = nullptr) const;
  // dout: gradient of the loss w.r.t. the output; accumulates into grads.
  void backward(const Cache& cache, const Eigen::MatrixXd& dout,
                Gradients& grads) const;

  Gradients zero_gradients() const;

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }
  Eigen::Index input_size() const { return weights_.front().cols(); }
  Eigen::Index output_size() const { return weights_.back().rows(); }

 private:
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

// First-order adaptive-moment optimizer (Adam) state for one network.
class Adam {
 public:
  Adam() = default;
  explicit Adam(const Mlp& net, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);
  void step(Mlp& net, const Gradients& grads);

 private:
  double lr_ = 3e-4;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  Gradients m_;
  Gradients v_;
};

// Scales gradient sets so their joint L2 norm is at most max_norm.
void clip_global_norm(std::vector<Gradients*> grads, double max_norm);

}  // namespace rigaa::nn

#endif  // RIGAA_MLP_HPP_
