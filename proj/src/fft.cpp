#include "saftkit/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace saftkit::fft {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void run(std::vector<Complex>& data, int sign) {
    if (data.empty()) return;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace

void forward(std::vector<Complex>& data) { run(data, FFTW_FORWARD); }

void inverse(std::vector<Complex>& data) {
    run(data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace saftkit::fft
