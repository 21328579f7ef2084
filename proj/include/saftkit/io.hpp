// io.hpp - deterministic text serialization (CSV and file helpers).

#pragma once

#include <string>
#include <vector>

#include "saftkit/acquisition.hpp"
#include "saftkit/series.hpp"
#include "saftkit/types.hpp"

namespace saftkit::io {

/// Round-trip-exact, locale-independent double formatting ("%.17g").
std::string format_double(double value);

std::string grid_to_csv(const GridSignal& f);                 // t, re, im
std::string samples_to_csv(const SampleSet& samples);         // n, t, re, im
std::string gabor_to_csv(const GaborMeasurements& v);         // tau, omega, re, im
std::string coeffs_to_csv(const FourierCoeffs& coeffs);       // m, re, im

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace saftkit::io
