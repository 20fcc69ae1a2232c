#include "phg/fft.hpp"

#include <unsupported/Eigen/FFT>

#include <cstdint>
#include <stdexcept>

namespace phg::detail {

void fft_nd(CArray& data, int n, int side, bool inverse) {
  std::uint64_t total = 1;
  for (int k = 0; k < n; ++k) total *= static_cast<std::uint64_t>(side);
  if (data.size() != total) throw std::invalid_argument("fft_nd: size mismatch");

  Eigen::FFT<double> fft(Eigen::default_fft_impl<double>(), Eigen::FFT<double>::Unscaled);
  CArray line(side), out(side);

  // transform along each axis; axis k has stride side^(n-1-k)
  std::uint64_t stride = total / static_cast<std::uint64_t>(side);
  for (int axis = 0; axis < n; ++axis) {
    const std::uint64_t num_lines = total / static_cast<std::uint64_t>(side);
    for (std::uint64_t line_id = 0; line_id < num_lines; ++line_id) {
      // base offset: line_id enumerated over all indices except `axis`
      const std::uint64_t block = line_id / stride;
      const std::uint64_t rem = line_id % stride;
      const std::uint64_t base = block * stride * static_cast<std::uint64_t>(side) + rem;
      for (int j = 0; j < side; ++j) line[j] = data[base + static_cast<std::uint64_t>(j) * stride];
      if (inverse)
        fft.inv(out, line);
      else
        fft.fwd(out, line);
      for (int j = 0; j < side; ++j) data[base + static_cast<std::uint64_t>(j) * stride] = out[j];
    }
    stride /= static_cast<std::uint64_t>(side);
  }
}

}  // namespace phg::detail
