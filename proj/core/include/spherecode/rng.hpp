#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace spherecode {

/// Counter-based Philox4x32-10 generator with a Box-Muller Gaussian layer.
///
/// Streams keyed by (seed, stream) are statistically independent, which lets
/// parallel restarts draw their own initial iterates without sharing state.
/// The generator produces identical sequences on every platform; the standard
/// library distributions do not guarantee that, so they are avoided here.
class SplitRng {
 public:
  SplitRng(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform draw from [0, 1).
  double next_double();

  /// Standard normal draw via Box-Muller; pairs are cached internally.
  double next_gaussian();

  /// Matrix with i.i.d. standard normal entries, filled column-major.
  Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols);

  /// Gaussian matrix with every column normalized to unit length.
  Eigen::MatrixXd unit_columns(Eigen::Index rows, Eigen::Index cols);

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t counter_[4];
  std::uint32_t buffer_[4];
  int buffer_pos_ = 4;
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spherecode
