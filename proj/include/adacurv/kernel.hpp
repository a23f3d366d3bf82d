#pragma once

#include <cmath>

#include "adacurv/error.hpp"

namespace adacurv {

enum class KernelFamily { TruncatedGaussian, Epanechnikov };

/// Weighting kernel with support in [0,1]: non-negative, non-increasing,
/// K(0) > 0 and K(u) = 0 for u > 1.
struct Kernel {
  KernelFamily family = KernelFamily::TruncatedGaussian;
  double bandwidth = 0.4;  // only meaningful for the truncated Gaussian

  static Kernel truncated_gaussian(double bandwidth = 0.4) {
    if (!(bandwidth > 0.0) || bandwidth > 1.0)
      fail(Errc::InvalidArgument, "kernel bandwidth must lie in (0,1]");
    return Kernel{KernelFamily::TruncatedGaussian, bandwidth};
  }

  static Kernel epanechnikov() { return Kernel{KernelFamily::Epanechnikov, 0.0}; }
};

inline double kernel_eval(const Kernel& kernel, double u) {
  if (!(u >= 0.0)) fail(Errc::InvalidArgument, "kernel_eval: argument must be >= 0");
  if (u > 1.0) return 0.0;
  switch (kernel.family) {
    case KernelFamily::TruncatedGaussian:
      return std::exp(-u * u / (2.0 * kernel.bandwidth * kernel.bandwidth));
    case KernelFamily::Epanechnikov:
      return 1.0 - u * u;
  }
  return 0.0;
}

}  // namespace adacurv
