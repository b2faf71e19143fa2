#include "rbm/model_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rbm {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ModelFile parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(ModelDefect::covariance_not_spd,
                              std::string("model JSON parse error: ") + e.what());
    }
    ModelFile out;
    if (j.contains("beta")) {
        out.is_cone = true;
        out.cone.beta = j.at("beta").get<double>();
        out.cone.delta = j.at("delta").get<double>();
        out.cone.epsilon = j.at("epsilon").get<double>();
        out.cone.theta = j.at("theta").get<double>();
        out.cone.mu_norm = j.at("mu_norm").get<double>();
        const auto z0 = j.at("z0").get<std::vector<double>>();
        out.cone.z0 = {z0.at(0), z0.at(1)};
        out.quadrant = cone_to_quadrant(out.cone);
        return out;
    }
    const auto sigma = j.at("sigma").get<std::vector<double>>();
    const auto mu = j.at("mu").get<std::vector<double>>();
    const auto refl = j.at("refl").get<std::vector<double>>();
    const auto z0 = j.at("z0").get<std::vector<double>>();
    if (sigma.size() != 3 || mu.size() != 2 || refl.size() != 4 || z0.size() != 2) {
        throw ValidationError(ModelDefect::covariance_not_spd,
                              "model JSON: sigma needs 3 numbers, mu 2, refl 4, z0 2");
    }
    out.quadrant.s11 = sigma[0];
    out.quadrant.s12 = sigma[1];
    out.quadrant.s22 = sigma[2];
    out.quadrant.mu = {mu[0], mu[1]};
    out.quadrant.refl = Mat2{refl[0], refl[1], refl[2], refl[3]};
    out.quadrant.z0 = {z0[0], z0[1]};
    validate(out.quadrant);
    out.cone = quadrant_to_cone(out.quadrant).first;
    return out;
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(ModelDefect::covariance_not_spd,
                              "cannot open model file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string quadrant_to_json(const QuadrantParams& p) {
    std::ostringstream os;
    os << "{\"sigma\": [" << fmt17(p.s11) << ", " << fmt17(p.s12) << ", " << fmt17(p.s22)
       << "], \"mu\": [" << fmt17(p.mu.x) << ", " << fmt17(p.mu.y) << "], \"refl\": ["
       << fmt17(p.refl.a11) << ", " << fmt17(p.refl.a12) << ", " << fmt17(p.refl.a21)
       << ", " << fmt17(p.refl.a22) << "], \"z0\": [" << fmt17(p.z0.x) << ", "
       << fmt17(p.z0.y) << "]}";
    return os.str();
}

std::string cone_to_json(const ConeParams& c) {
    std::ostringstream os;
    os << "{\"beta\": " << fmt17(c.beta) << ", \"delta\": " << fmt17(c.delta)
       << ", \"epsilon\": " << fmt17(c.epsilon) << ", \"theta\": " << fmt17(c.theta)
       << ", \"mu_norm\": " << fmt17(c.mu_norm) << ", \"z0\": [" << fmt17(c.z0.x) << ", "
       << fmt17(c.z0.y) << "]}";
    return os.str();
}

std::string model_hash(const QuadrantParams& p) {
    const std::string s = quadrant_to_json(p);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace rbm
