#include "saftkit/params.hpp"

#include <cmath>

#include "json.hpp"

namespace saftkit {

namespace {

void check_unimodular(const SaftParams& s, const char* context) {
    const double det = s.a * s.d - s.b * s.c;
    if (std::abs(det - 1.0) > kUnimodularityTol)
        throw UnimodularityViolation(std::string(context) + ": |ad - bc - 1| = " +
                                     std::to_string(std::abs(det - 1.0)));
}

}  // namespace

SaftParams SaftParams::from_matrix(double a, double b, double c, double d,
                                   double p, double q) {
    SaftParams s{a, b, c, d, p, q};
    check_unimodular(s, "from_matrix");
    return s;
}

SaftParams SaftParams::from_abd(double a, double b, double d, double p, double q) {
    if (b == 0.0) throw DegenerateB("from_abd requires b != 0 to solve for c");
    SaftParams s{a, b, (a * d - 1.0) / b, d, p, q};
    check_unimodular(s, "from_abd");
    return s;
}

SaftParams SaftParams::fourier() { return {0.0, 1.0, -1.0, 0.0, 0.0, 0.0}; }

SaftParams SaftParams::offset_fourier(double p, double q) {
    return {0.0, 1.0, -1.0, 0.0, p, q};
}

SaftParams SaftParams::fractional(double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    if (st == 0.0) throw DegenerateB("fractional(theta): sin(theta) = 0 gives b = 0");
    return {ct, st, -st, ct, 0.0, 0.0};
}

SaftParams SaftParams::offset_fractional(double theta, double p, double q) {
    SaftParams s = fractional(theta);
    s.p = p;
    s.q = q;
    return s;
}

SaftParams SaftParams::lct(double a, double b, double d) {
    return from_abd(a, b, d, 0.0, 0.0);
}

SaftParams SaftParams::fresnel(double b) {
    if (b == 0.0) throw DegenerateB("fresnel requires b != 0");
    return {1.0, b, 0.0, 1.0, 0.0, 0.0};
}

SaftParams SaftParams::scaling(double alpha) {
    if (alpha == 0.0) throw UnimodularityViolation("scaling(0) is singular");
    return {1.0 / alpha, 0.0, 0.0, alpha, 0.0, 0.0};
}

SaftParams SaftParams::time_shift(double tau) {
    return {1.0, 0.0, 0.0, 1.0, tau, 0.0};
}

SaftParams SaftParams::freq_shift(double xi) {
    return {1.0, 0.0, 0.0, 1.0, 0.0, xi};
}

void SaftParams::require_transform_path(const char* op) const {
    if (b == 0.0)
        throw DegenerateB(std::string(op) + " is undefined at b = 0; use saft_b0_eval");
}

KernelQuadForm kernel_quad_form(const SaftParams& s) {
    s.require_transform_path("kernel_quad_form");
    const double inv2b = 1.0 / (2.0 * s.b);
    KernelQuadForm f;
    f.U = {{{s.a * inv2b, -inv2b}, {-inv2b, s.d * inv2b}}};
    f.v = {s.p / s.b, (s.b * s.q - s.d * s.p) / s.b};
    f.constant = 1.0 / std::sqrt(kJ * 2.0 * kPi * s.b) *
                 std::exp(kJ * (s.d * s.p * s.p) * inv2b);
    return f;
}

InverseParams inverse_params(const SaftParams& s) {
    SaftParams inv{s.d, -s.b, -s.c, s.a,
                   s.b * s.q - s.d * s.p, s.c * s.p - s.a * s.q};
    check_unimodular(inv, "inverse_params");
    const double phase =
        0.5 * (s.c * s.d * s.p * s.p + s.a * s.b * s.q * s.q - 2.0 * s.a * s.d * s.p * s.q);
    return {inv, std::exp(kJ * phase)};
}

SaftParams compose_params(const SaftParams& outer, const SaftParams& inner) {
    // Block multiplies; offset transforms as an affine map applied after the
    // inner one, which is what makes compose(inverse(L), L) the identity.
    SaftParams s;
    s.a = outer.a * inner.a + outer.b * inner.c;
    s.b = outer.a * inner.b + outer.b * inner.d;
    s.c = outer.c * inner.a + outer.d * inner.c;
    s.d = outer.c * inner.b + outer.d * inner.d;
    s.p = outer.a * inner.p + outer.b * inner.q + outer.p;
    s.q = outer.c * inner.p + outer.d * inner.q + outer.q;
    check_unimodular(s, "compose_params");
    return s;
}

FourierDecomposition decompose_ft(const SaftParams& s) {
    s.require_transform_path("decompose_ft");
    FourierDecomposition d;
    d.m1 = {{{s.b, 0.0}, {s.d, 1.0 / s.b}}};
    d.m2 = {{{1.0, 0.0}, {s.a / s.b, 1.0}}};
    return d;
}

IwasawaDecomposition decompose_iwasawa(const SaftParams& s) {
    if (s.a == 0.0 && s.c == 0.0)
        throw DegeneratePair("decompose_iwasawa requires (a, c) != (0, 0)");
    IwasawaDecomposition d;
    d.gamma = std::hypot(s.a, s.c);
    d.u = (s.a * s.b + s.c * s.d) / (d.gamma * d.gamma);
    d.theta = std::atan2(-s.c, s.a);
    return d;
}

std::string params_to_json(const SaftParams& s) {
    nlohmann::json j;
    j["a"] = s.a;
    j["b"] = s.b;
    j["c"] = s.c;
    j["d"] = s.d;
    j["p"] = s.p;
    j["q"] = s.q;
    return j.dump();
}

SaftParams params_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid(std::string("params JSON parse failure: ") + e.what());
    }
    return params_from_json_value(j);
}

SaftParams params_from_json_value(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigInvalid("params must be a JSON object");
    if (j.contains("preset")) {
        const std::string name = j.at("preset").get<std::string>();
        auto num = [&](const char* key) { return j.at(key).get<double>(); };
        if (name == "ft") return SaftParams::fourier();
        if (name == "offset_ft") return SaftParams::offset_fourier(num("p"), num("q"));
        if (name == "frft") return SaftParams::fractional(num("theta"));
        if (name == "offset_frft")
            return SaftParams::offset_fractional(num("theta"), num("p"), num("q"));
        if (name == "lct") return SaftParams::lct(num("a"), num("b"), num("d"));
        if (name == "fresnel") return SaftParams::fresnel(num("b"));
        if (name == "scaling") return SaftParams::scaling(num("alpha"));
        if (name == "time_shift") return SaftParams::time_shift(num("tau"));
        if (name == "freq_shift") return SaftParams::freq_shift(num("xi"));
        throw ConfigInvalid("unknown params preset '" + name + "'");
    }
    for (const char* key : {"a", "b", "c", "d", "p", "q"})
        if (!j.contains(key))
            throw ConfigInvalid(std::string("params object missing field '") + key + "'");
    return SaftParams::from_matrix(j.at("a").get<double>(), j.at("b").get<double>(),
                                   j.at("c").get<double>(), j.at("d").get<double>(),
                                   j.at("p").get<double>(), j.at("q").get<double>());
}

}  // namespace saftkit
