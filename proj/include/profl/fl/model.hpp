#pragma once

// Multinomial logistic regression. Parameters are one flat vector: the
// class-major weight matrix (classes x dim) followed by the bias.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "profl/fl/dataset.hpp"

namespace profl::fl {

using Vector = Eigen::VectorXd;

struct ModelShape {
  std::size_t dimension = 0;
  int classes = 0;

  std::size_t parameters() const { return dimension * static_cast<std::size_t>(classes) + classes; }
};

struct GlobalModel {
  ModelShape shape;
  Vector weights;  // shape.parameters() entries
  std::uint32_t round = 0;
  double lr = 0.05;
};

GlobalModel zero_model(ModelShape shape, double lr);

/// Class scores for each row of `x`.
Eigen::MatrixXd logits(const Vector& params, ModelShape shape, const Eigen::MatrixXd& x);

/// Mean cross-entropy over the rows of `x`.
double loss(const Vector& params, ModelShape shape, const Eigen::MatrixXd& x, std::span<const int> labels);

/// Gradient of `loss` with respect to `params`.
Vector gradient(const Vector& params, ModelShape shape, const Eigen::MatrixXd& x, std::span<const int> labels);

double accuracy(const Vector& params, ModelShape shape, const Dataset& data);

/// Accuracy restricted to samples labelled `label`; 0 when there are none.
double class_accuracy(const Vector& params, ModelShape shape, const Dataset& data, int label);

}  // namespace profl::fl
