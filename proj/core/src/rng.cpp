#include "spherecode/rng.hpp"

#include <cmath>

#include "spherecode/errors.hpp"

namespace spherecode {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

SplitRng::SplitRng(std::uint64_t seed, std::uint64_t stream) {
  key_[0] = static_cast<std::uint32_t>(seed);
  key_[1] = static_cast<std::uint32_t>(seed >> 32);
  // Lanes 2 and 3 hold the stream id; lanes 0 and 1 count blocks within it.
  counter_[0] = 0;
  counter_[1] = 0;
  counter_[2] = static_cast<std::uint32_t>(stream);
  counter_[3] = static_cast<std::uint32_t>(stream >> 32);
}

void SplitRng::refill() {
  std::uint32_t c0 = counter_[0];
  std::uint32_t c1 = counter_[1];
  std::uint32_t c2 = counter_[2];
  std::uint32_t c3 = counter_[3];
  std::uint32_t k0 = key_[0];
  std::uint32_t k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  buffer_[0] = c0;
  buffer_[1] = c1;
  buffer_[2] = c2;
  buffer_[3] = c3;
  buffer_pos_ = 0;
  if (++counter_[0] == 0) {
    ++counter_[1];
  }
}

std::uint32_t SplitRng::next_u32() {
  if (buffer_pos_ == 4) {
    refill();
  }
  return buffer_[buffer_pos_++];
}

std::uint64_t SplitRng::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double SplitRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double SplitRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_gaussian_;
  }
  // u1 is shifted into (0, 1] so the logarithm stays finite.
  const double u1 =
      static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;
  const double u2 = next_double();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_gaussian_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::MatrixXd SplitRng::gaussian_matrix(Eigen::Index rows,
                                          Eigen::Index cols) {
  if (rows < 1 || cols < 1) {
    throw InvalidShape("gaussian_matrix: rows and cols must be positive");
  }
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      out(i, j) = next_gaussian();
    }
  }
  return out;
}

Eigen::MatrixXd SplitRng::unit_columns(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd out = gaussian_matrix(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    double norm = out.col(j).norm();
    while (norm < 1e-12) {
      // A Gaussian column is zero with probability zero, but redrawing keeps
      // the normalization well defined regardless.
      for (Eigen::Index i = 0; i < rows; ++i) {
        out(i, j) = next_gaussian();
      }
      norm = out.col(j).norm();
    }
    out.col(j) /= norm;
  }
  return out;
}

}  // namespace spherecode
