#include "profl/fl/model.hpp"

#include <cmath>
#include <stdexcept>

namespace profl::fl {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> weight_view(const Vector& params, ModelShape shape) {
  return {params.data(), shape.classes, static_cast<Eigen::Index>(shape.dimension)};
}

void check(const Vector& params, ModelShape shape, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(params.size()) != shape.parameters())
    throw std::invalid_argument("model: parameter count does not match shape");
  if (static_cast<std::size_t>(x.cols()) != shape.dimension) throw std::invalid_argument("model: feature width");
}

// Row-wise softmax in place, stabilised by the row maximum.
void softmax_rows(Eigen::MatrixXd& z) {
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    z.row(r).array() -= z.row(r).maxCoeff();
    z.row(r) = z.row(r).array().exp();
    z.row(r) /= z.row(r).sum();
  }
}

}  // namespace

GlobalModel zero_model(ModelShape shape, double lr) {
  return GlobalModel{shape, Vector::Zero(static_cast<Eigen::Index>(shape.parameters())), 0, lr};
}

Eigen::MatrixXd logits(const Vector& params, ModelShape shape, const Eigen::MatrixXd& x) {
  check(params, shape, x);
  const auto bias = params.tail(shape.classes);
  Eigen::MatrixXd z = x * weight_view(params, shape).transpose();
  z.rowwise() += bias.transpose();
  return z;
}

double loss(const Vector& params, ModelShape shape, const Eigen::MatrixXd& x, std::span<const int> labels) {
  Eigen::MatrixXd p = logits(params, shape, x);
  double total = 0;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    const double top = p.row(r).maxCoeff();
    const double lse = top + std::log((p.row(r).array() - top).exp().sum());
    total += lse - p(r, labels[static_cast<std::size_t>(r)]);
  }
  return total / static_cast<double>(p.rows());
}

Vector gradient(const Vector& params, ModelShape shape, const Eigen::MatrixXd& x, std::span<const int> labels) {
  if (x.rows() == 0) throw std::invalid_argument("gradient: empty batch");
  Eigen::MatrixXd p = logits(params, shape, x);
  softmax_rows(p);
  for (Eigen::Index r = 0; r < p.rows(); ++r) p(r, labels[static_cast<std::size_t>(r)]) -= 1.0;
  p /= static_cast<double>(x.rows());

  Vector out(static_cast<Eigen::Index>(shape.parameters()));
  Eigen::Map<RowMajor> gw(out.data(), shape.classes, static_cast<Eigen::Index>(shape.dimension));
  gw.noalias() = p.transpose() * x;
  out.tail(shape.classes) = p.colwise().sum().transpose();
  return out;
}

namespace {

template <class Keep>
double accuracy_where(const Vector& params, ModelShape shape, const Dataset& data, Keep keep) {
  const Eigen::MatrixXd z = logits(params, shape, data.features);
  std::size_t hits = 0;
  std::size_t seen = 0;
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const int label = data.labels[static_cast<std::size_t>(r)];
    if (!keep(label)) continue;
    Eigen::Index best = 0;
    z.row(r).maxCoeff(&best);
    hits += best == label;
    ++seen;
  }
  return seen ? static_cast<double>(hits) / static_cast<double>(seen) : 0.0;
}

}  // namespace

double accuracy(const Vector& params, ModelShape shape, const Dataset& data) {
  return accuracy_where(params, shape, data, [](int) { return true; });
}

double class_accuracy(const Vector& params, ModelShape shape, const Dataset& data, int label) {
  return accuracy_where(params, shape, data, [label](int l) { return l == label; });
}

}  // namespace profl::fl
