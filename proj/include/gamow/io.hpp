#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gamow/poles.hpp"
#include "gamow/profile.hpp"

namespace gamow {

using json = nlohmann::json;

// Shortest locale-independent decimal form holding 17 significant
// digits (round-trips any double).
inline std::string format_g17(double v)
{
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline json profile_to_json(const PotentialProfile& p)
{
    json segs = json::array();
    for (const auto& s : p.segments()) segs.push_back({s.x_lo, s.x_hi, s.u});
    return {{"segments", segs}, {"mass", p.display_mass()}};
}

inline PotentialProfile profile_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array())
        throw error(errc::bad_config, "profile: expected object with a 'segments' array");
    std::vector<Segment> segs;
    for (const auto& row : j["segments"]) {
        if (!row.is_array() || row.size() != 3)
            throw error(errc::bad_config, "profile: each segment must be [x_lo, x_hi, u]");
        segs.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    double mass = j.value("mass", 0.5);
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw error(errc::bad_config, "profile: mass must be positive and finite");
    for (const auto& [key, _] : j.items())
        if (key != "segments" && key != "mass")
            throw error(errc::bad_config, "profile: unknown key '" + key + "'");
    PotentialProfile p = build_profile(segs);
    p.set_display_mass(mass);
    return p;
}

inline PotentialProfile load_profile(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw error(errc::bad_config, "cannot open profile file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw error(errc::bad_config, "profile parse failure: " + std::string(e.what()));
    }
    return profile_from_json(j);
}

inline json pole_to_json(const Pole& p)
{
    return {{"label", p.label},
            {"kind", p.kind == PoleKind::resonance ? "resonance" : "bound"},
            {"re_p", p.momentum.real()},
            {"im_p", p.momentum.imag()},
            {"re_z", p.energy.real()},
            {"im_z", p.energy.imag()},
            {"residual", p.residual},
            {"atypical", p.atypical},
            {"sheet", p.sheet()}};
}

inline Pole pole_from_json(const json& j)
{
    Pole p;
    p.label = j.at("label").get<int>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "resonance") p.kind = PoleKind::resonance;
    else if (kind == "bound") p.kind = PoleKind::bound;
    else throw error(errc::bad_config, "pole: unknown kind '" + kind + "'");
    p.momentum = {j.at("re_p").get<double>(), j.at("im_p").get<double>()};
    p.energy = {j.at("re_z").get<double>(), j.at("im_z").get<double>()};
    p.residual = j.value("residual", 0.0);
    p.atypical = j.value("atypical", false);
    return p;
}

// Pole cache: the profile echo guards against applying cached poles to
// a different potential.
inline json pole_cache_to_json(const PotentialProfile& profile, const std::vector<Pole>& poles)
{
    json arr = json::array();
    for (const auto& p : poles) arr.push_back(pole_to_json(p));
    return {{"profile", profile_to_json(profile)}, {"poles", arr}};
}

inline std::vector<Pole> pole_cache_from_json(const json& j, const PotentialProfile& expected)
{
    if (!j.contains("profile") || !j.contains("poles"))
        throw error(errc::bad_config, "pole cache: expected 'profile' and 'poles'");
    PotentialProfile cached = profile_from_json(j["profile"]);
    if (!cached.same_as(expected) || cached.display_mass() != expected.display_mass())
        throw error(errc::profile_mismatch, "pole cache built for a different profile");
    std::vector<Pole> poles;
    for (const auto& pj : j["poles"]) poles.push_back(pole_from_json(pj));
    return poles;
}

inline std::string poles_to_csv(const std::vector<Pole>& poles)
{
    std::string out = "n,re_p,im_p,re_z,im_z,residual\n";
    for (const auto& p : poles) {
        out += std::to_string(p.label) + ',' + format_g17(p.momentum.real()) + ',' +
               format_g17(p.momentum.imag()) + ',' + format_g17(p.energy.real()) + ',' +
               format_g17(p.energy.imag()) + ',' + format_g17(p.residual) + '\n';
    }
    return out;
}

// JSON numeric emission with full precision: nlohmann serializes
// doubles round-trip exactly, so dump() is sufficient; this wrapper
// exists to keep call sites uniform.
inline std::string json_dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace gamow
