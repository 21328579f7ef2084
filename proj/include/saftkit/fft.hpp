// fft.hpp - thin FFTW wrapper.
//
// FFTW's planner is not thread safe; plan creation is serialized behind a
// mutex while execution runs lock-free on caller-owned buffers. Plans use
// FFTW_ESTIMATE so results do not depend on machine timing.

#pragma once

#include <vector>

#include "saftkit/types.hpp"

namespace saftkit::fft {

/// In-place forward DFT, X_k = sum_n x_n exp(-j 2 pi k n / N). No scaling.
void forward(std::vector<Complex>& data);

/// In-place inverse DFT including the 1/N scaling.
void inverse(std::vector<Complex>& data);

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace saftkit::fft
