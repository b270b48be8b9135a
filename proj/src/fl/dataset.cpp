#include "profl/fl/dataset.hpp"

#include <array>

#include <zlib.h>

namespace profl::fl {
namespace {

class GzFile {
 public:
  explicit GzFile(const std::filesystem::path& path) : file_(gzopen(path.c_str(), "rb")) {
    if (!file_) throw DatasetError("cannot open " + path.string());
    name_ = path.string();
  }
  ~GzFile() { gzclose(file_); }
  GzFile(const GzFile&) = delete;
  GzFile& operator=(const GzFile&) = delete;

  void read(void* dst, std::size_t count) {
    auto* out = static_cast<unsigned char*>(dst);
    while (count > 0) {
      const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(count, 1u << 30));
      const int got = gzread(file_, out, chunk);
      if (got <= 0) throw DatasetError("truncated IDX file " + name_);
      out += got;
      count -= static_cast<std::size_t>(got);
    }
  }

  std::uint32_t be32() {
    std::array<unsigned char, 4> b{};
    read(b.data(), 4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
  }

 private:
  gzFile file_;
  std::string name_;
};

std::filesystem::path find_file(const std::filesystem::path& dir, const std::string& stem) {
  for (const auto& candidate : {dir / (stem + ".gz"), dir / stem}) {
    if (std::filesystem::exists(candidate)) return candidate;
  }
  throw DatasetError("missing dataset file " + (dir / stem).string() + "[.gz]");
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  GzFile img(images);
  if (img.be32() != 0x00000803) throw DatasetError("bad image magic in " + images.string());
  const std::uint32_t count = img.be32();
  const std::uint32_t rows = img.be32();
  const std::uint32_t cols = img.be32();

  GzFile lab(labels);
  if (lab.be32() != 0x00000801) throw DatasetError("bad label magic in " + labels.string());
  if (lab.be32() != count) throw DatasetError("image and label counts differ");

  Dataset out;
  const std::size_t dim = std::size_t{rows} * cols;
  std::vector<unsigned char> pixels(std::size_t{count} * dim);
  img.read(pixels.data(), pixels.size());
  out.features.resize(count, static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pixels[i * dim + j] / 255.0;

  std::vector<unsigned char> raw(count);
  lab.read(raw.data(), raw.size());
  out.labels.assign(raw.begin(), raw.end());
  for (int label : out.labels) out.num_classes = std::max(out.num_classes, label + 1);
  return out;
}

TrainTest load_mnist_layout(const std::filesystem::path& dir) {
  const auto train_images = find_file(dir, "train-images-idx3-ubyte");
  const auto train_labels = find_file(dir, "train-labels-idx1-ubyte");
  const auto test_images = find_file(dir, "t10k-images-idx3-ubyte");
  const auto test_labels = find_file(dir, "t10k-labels-idx1-ubyte");
  return TrainTest{load_idx(train_images, train_labels), load_idx(test_images, test_labels)};
}

Dataset make_blobs(const BlobOptions& options, Rng& rng) {
  if (options.classes < 2 || options.dimension == 0) throw std::invalid_argument("make_blobs: degenerate shape");
  const auto dim = static_cast<Eigen::Index>(options.dimension);
  Eigen::MatrixXd centres(options.classes, dim);
  for (Eigen::Index c = 0; c < centres.rows(); ++c)
    for (Eigen::Index j = 0; j < dim; ++j) centres(c, j) = 2.0 * rng.normal();

  Dataset out;
  out.num_classes = options.classes;
  out.features.resize(static_cast<Eigen::Index>(options.samples), dim);
  out.labels.resize(options.samples);
  for (std::size_t i = 0; i < options.samples; ++i) {
    const int label = static_cast<int>(i % static_cast<std::size_t>(options.classes));
    out.labels[i] = label;
    for (Eigen::Index j = 0; j < dim; ++j)
      out.features(static_cast<Eigen::Index>(i), j) = centres(label, j) + options.spread * rng.normal();
  }
  return out;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.num_classes = data.num_classes;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), data.features.cols());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.features.row(static_cast<Eigen::Index>(r)) = data.features.row(static_cast<Eigen::Index>(indices[r]));
    out.labels.push_back(data.labels[indices[r]]);
  }
  return out;
}

}  // namespace profl::fl
