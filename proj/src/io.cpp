#include "saftkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace saftkit::io {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string grid_to_csv(const GridSignal& f) {
    std::string out = "t,re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out += format_double(f.t(i)) + ',' + format_double(f.samples[i].real()) + ',' +
               format_double(f.samples[i].imag()) + '\n';
    }
    return out;
}

std::string samples_to_csv(const SampleSet& samples) {
    std::string out = "n,t,re,im\n";
    for (std::size_t n = 0; n < samples.size(); ++n) {
        out += std::to_string(n) + ',' +
               format_double(static_cast<double>(n) * samples.delta) + ',' +
               format_double(samples.values[n].real()) + ',' +
               format_double(samples.values[n].imag()) + '\n';
    }
    return out;
}

std::string gabor_to_csv(const GaborMeasurements& v) {
    std::string out = "tau,omega,re,im\n";
    for (std::size_t it = 0; it < v.taus.size(); ++it) {
        for (std::size_t iw = 0; iw < v.omegas.size(); ++iw) {
            const Complex& z = v.at(it, iw);
            out += format_double(v.taus[it]) + ',' + format_double(v.omegas[iw]) + ',' +
                   format_double(z.real()) + ',' + format_double(z.imag()) + '\n';
        }
    }
    return out;
}

std::string coeffs_to_csv(const FourierCoeffs& coeffs) {
    std::string out = "m,re,im\n";
    for (int m = -coeffs.fc; m <= coeffs.fc; ++m) {
        const Complex& z = coeffs.at(m);
        out += std::to_string(m) + ',' + format_double(z.real()) + ',' +
               format_double(z.imag()) + '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) throw IOFailure("cannot open '" + path + "' for writing");
    stream.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!stream) throw IOFailure("short write to '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw IOFailure("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

}  // namespace saftkit::io
