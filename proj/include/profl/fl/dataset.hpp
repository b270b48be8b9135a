#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "profl/common/random.hpp"

namespace profl::fl {

/// Rows are samples. Pixel data is scaled to [0, 1].
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(features.cols()); }
};

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads an IDX image file and its label file. Plain and gzip-compressed
/// files are both accepted.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

struct TrainTest {
  Dataset train;
  Dataset test;
};

/// Standard MNIST file names under `dir`, with or without a .gz suffix.
TrainTest load_mnist_layout(const std::filesystem::path& dir);

struct BlobOptions {
  std::size_t samples = 600;
  std::size_t dimension = 3;
  int classes = 5;
  double spread = 0.6;  // within-class standard deviation
};

/// Gaussian clusters with unit-normal class centres scaled by 2.
Dataset make_blobs(const BlobOptions& options, Rng& rng);

/// Rows `indices` of `data`, in order.
Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices);

}  // namespace profl::fl
