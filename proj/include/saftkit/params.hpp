// params.hpp - the 2x3 parameter matrix [a b | p; c d | q] and its algebra.
//
// The LCT block [a b; c d] must satisfy ad - bc = 1. All transform-path
// operations additionally require b != 0; b = 0 matrices (time shift, scaling,
// modulation) are valid values but only usable through saft_b0_eval.

#pragma once

#include <array>
#include <string>

#include "json.hpp"
#include "saftkit/errors.hpp"
#include "saftkit/types.hpp"

namespace saftkit {

inline constexpr double kUnimodularityTol = 1e-12;

struct SaftParams {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;
    double p = 0.0;
    double q = 0.0;

    /// Construct from the full entry set; enforces |ad - bc - 1| <= 1e-12.
    static SaftParams from_matrix(double a, double b, double c, double d,
                                  double p = 0.0, double q = 0.0);

    /// Construct from {a, b, d, p, q}; c = (ad - 1)/b is forced exactly.
    static SaftParams from_abd(double a, double b, double d,
                               double p = 0.0, double q = 0.0);

    // Table presets. The last three have b = 0 and are only valid for the
    // direct-evaluation branch.
    static SaftParams fourier();
    static SaftParams offset_fourier(double p, double q);
    static SaftParams fractional(double theta);
    static SaftParams offset_fractional(double theta, double p, double q);
    static SaftParams lct(double a, double b, double d);
    static SaftParams fresnel(double b);
    static SaftParams scaling(double alpha);
    static SaftParams time_shift(double tau);
    static SaftParams freq_shift(double xi);

    bool transform_path() const { return b != 0.0; }

    /// Throws DegenerateB unless b != 0; `op` names the caller for messages.
    void require_transform_path(const char* op) const;

    double determinant() const { return a * d - b * c; }

    bool operator==(const SaftParams& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d && p == o.p && q == o.q;
    }
};

/// Quadratic-form view of the kernel exponent: U symmetric 2x2, v 2-vector,
/// plus the leading constant.
struct KernelQuadForm {
    std::array<std::array<double, 2>, 2> U;
    std::array<double, 2> v;
    Complex constant;  // K of the kernel, conjugated inside kernel_eval
};

KernelQuadForm kernel_quad_form(const SaftParams& params);

/// Inverse matrix plus the unimodular constant that makes the inverse
/// transform an exact left inverse.
struct InverseParams {
    SaftParams params;
    Complex constant;
};

InverseParams inverse_params(const SaftParams& params);

/// Composition: applying `inner` first, then `outer`. The scalar phase z0 of
/// the cascaded transform is not computed; equality of the transforms is
/// certified numerically up to one unimodular constant.
SaftParams compose_params(const SaftParams& outer, const SaftParams& inner);

/// LCT block written as M1 * Lambda_FT * M2 with modulation matrices
/// M1 = [b 0; d 1/b], M2 = [1 0; a/b 1].
struct FourierDecomposition {
    std::array<std::array<double, 2>, 2> m1;
    std::array<std::array<double, 2>, 2> m2;
};

FourierDecomposition decompose_ft(const SaftParams& params);

/// Iwasawa form: rotation(theta) * diag(gamma, 1/gamma) * [1 u; 0 1].
struct IwasawaDecomposition {
    double theta = 0.0;
    double gamma = 1.0;
    double u = 0.0;
};

IwasawaDecomposition decompose_iwasawa(const SaftParams& params);

// JSON wire format: {"a":..,"b":..,"c":..,"d":..,"p":..,"q":..}. Parsing also
// accepts {"preset": name, ...preset args}. Round trips are bit-stable for
// binary64 values.
std::string params_to_json(const SaftParams& params);
SaftParams params_from_json(const std::string& json_text);
SaftParams params_from_json_value(const nlohmann::json& j);

}  // namespace saftkit
