#pragma once

#include "ffedge/precision.hpp"

#include <cstddef>
#include <vector>

namespace ffedge {

// Radix-2 discrete Fourier transform of length M (a power of two):
// forward X_n = sum_j x_j e^{-2 pi i j n / M}, inverse without the 1/M factor.
// Real instances use the precision in force at construction.
template <class T>
class Fft {
 public:
  explicit Fft(std::size_t M);
  std::size_t size() const { return M_; }
  void run(std::vector<T>& re, std::vector<T>& im, bool inverse) const;
  // (re, im) *= (fr, fi) pointwise
  void multiply(std::vector<T>& re, std::vector<T>& im, const std::vector<T>& fr, const std::vector<T>& fi) const;

 private:
  std::size_t M_;
  std::vector<T> cos_, sin_;  // e^{2 pi i k / M}, k < M
};

}  // namespace ffedge
