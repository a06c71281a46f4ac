#include "rigaa/mlp.hpp"

#include <Eigen/QR>

#include <cmath>

namespace rigaa::nn {
namespace {

// Semi-orthogonal (rows x cols) matrix from a QR of a Gaussian draw, sign
// corrected so the factorization is unique.
Eigen::MatrixXd orthogonal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const Eigen::Index big = std::max(rows, cols);
  Eigen::MatrixXd gauss(big, std::min(rows, cols));
  for (Eigen::Index i = 0; i < gauss.rows(); ++i)
    for (Eigen::Index j = 0; j < gauss.cols(); ++j) gauss(i, j) = rng.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(big, std::min(rows, cols));
  const Eigen::MatrixXd r = qr.matrixQR()
                                .topLeftCorner(std::min(rows, cols),
                                               std::min(rows, cols))
                                .triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  if (rows < cols) return q.transpose();
  return q;
}

}  // namespace

void Gradients::resize_like(const Gradients& other) {
  weights.resize(other.weights.size());
  biases.resize(other.biases.size());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    weights[k].setZero(other.weights[k].rows(), other.weights[k].cols());
    biases[k].setZero(other.biases[k].size());
  }
}

void Gradients::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

double Gradients::squared_norm() const {
  double sum = 0.0;
  for (const auto& w : weights) sum += w.squaredNorm();
  for (const auto& b : biases) sum += b.squaredNorm();
  return sum;
}

void Gradients::scale(double factor) {
  for (auto& w : weights) w *= factor;
  for (auto& b : biases) b *= factor;
}

Mlp::Mlp(const std::vector<Eigen::Index>& sizes, Rng& rng, double hidden_gain,
         double out_gain) {
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    const bool last = (k + 2 == sizes.size());
    weights_.push_back(orthogonal(sizes[k + 1], sizes[k], rng) *
                       (last ? out_gain : hidden_gain));
    biases_.push_back(Eigen::VectorXd::Zero(sizes[k + 1]));
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache* cache) const {
  if (cache != nullptr) {
    cache->activations.clear();
    cache->activations.push_back(x);
  }
  Eigen::MatrixXd a = x;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    Eigen::MatrixXd z = (weights_[k] * a).colwise() + biases_[k];
    if (k + 1 < weights_.size()) {
      a = z.array().tanh();
      if (cache != nullptr) cache->activations.push_back(a);
    } else {
      a = std::move(z);
    }
  }
  return a;
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& dout,
                   Gradients& grads) const {
  Eigen::MatrixXd delta = dout;
  for (std::size_t k = weights_.size(); k-- > 0;) {
    grads.weights[k] += delta * cache.activations[k].transpose();
    grads.biases[k] += delta.rowwise().sum();
    if (k > 0) {
      delta = weights_[k].transpose() * delta;
      delta.array() *= 1.0 - cache.activations[k].array().square();
    }
  }
}

Gradients Mlp::zero_gradients() const {
  Gradients g;
  g.weights.resize(weights_.size());
  g.biases.resize(biases_.size());
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    g.weights[k].setZero(weights_[k].rows(), weights_[k].cols());
    g.biases[k].setZero(biases_[k].size());
  }
  return g;
}

Adam::Adam(const Mlp& net, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_ = net.zero_gradients();
  v_ = net.zero_gradients();
}

void Adam::step(Mlp& net, const Gradients& grads) {
  ++t_;
  const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < net.weights().size(); ++k) {
    m_.weights[k] = beta1_ * m_.weights[k] + (1.0 - beta1_) * grads.weights[k];
    v_.weights[k].array() =
        beta2_ * v_.weights[k].array() +
        (1.0 - beta2_) * grads.weights[k].array().square();
    net.weights()[k].array() -=
        lr_ * (m_.weights[k].array() / correction1) /
        ((v_.weights[k].array() / correction2).sqrt() + eps_);

    m_.biases[k] = beta1_ * m_.biases[k] + (1.0 - beta1_) * grads.biases[k];
    v_.biases[k].array() = beta2_ * v_.biases[k].array() +
                           (1.0 - beta2_) * grads.biases[k].array().square();
    net.biases()[k].array() -=
        lr_ * (m_.biases[k].array() / correction1) /
        ((v_.biases[k].array() / correction2).sqrt() + eps_);
  }
}

void clip_global_norm(std::vector<Gradients*> grads, double max_norm) {
  double squared = 0.0;
  for (const Gradients* g : grads) squared += g->squared_norm();
  const double norm = std::sqrt(squared);
  if (norm > max_norm && norm > 0.0) {
    const double factor = max_norm / norm;
    for (Gradients* g : grads) g->scale(factor);
  }
}

}  // namespace rigaa::nn
