#pragma once
// Design reports and their serialized forms: the JSON report consumed by
// downstream tooling, the pole-locus CSV, and the frequency-response CSV.

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "wangnet/tcoil.hpp"

namespace wangnet {

/// A design together with its analysis results.
struct DesignReport {
    TCoilDesign design;
    std::complex<double> pole1, pole2;
    double pole_angle_deg = 0;
    double bw_hz = 0;
    double bwer = 0;
};

inline DesignReport make_design_report(const LoadSpec& load, const TCoilDesign& d) {
    const TransferCoeffs tc = transfer_terms(load, d);
    DesignReport r;
    r.design = d;
    std::tie(r.pole1, r.pole2) = poles(tc, d.CB);
    r.pole_angle_deg = pole_angle_deg(r.pole1);
    const Bandwidth bw = bandwidth(tc, d.CB, load);
    r.bw_hz = bw.bw_hz;
    r.bwer = bw.bwer;
    return r;
}

// ---------------------------------------------------------------------------
// JSON report
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json report_to_json(const DesignReport& r) {
    nlohmann::ordered_json j;
    const TCoilDesign& d = r.design;
    j["topology"] = to_string(d.topology);
    j["R1"] = d.R1;
    j["R2"] = d.R2;
    j["GB"] = d.GB;
    j["L1"] = d.L1;
    j["L2"] = d.L2;
    j["L3"] = d.L3;
    j["CB"] = d.CB;
    j["La"] = d.La;
    j["Lb"] = d.Lb;
    j["M"] = d.M;
    // null when the coupled form is unrealizable (k has no finite value)
    if (std::isnan(d.k))
        j["k"] = nullptr;
    else
        j["k"] = d.k;
    j["poles"] = nlohmann::ordered_json::array(
        {nlohmann::ordered_json{{"re", r.pole1.real()}, {"im", r.pole1.imag()}},
         nlohmann::ordered_json{{"re", r.pole2.real()}, {"im", r.pole2.imag()}}});
    j["pole_angle_deg"] = r.pole_angle_deg;
    j["bw_hz"] = r.bw_hz;
    j["bwer"] = r.bwer;
    j["realizable"] = d.realizable;
    return j;
}

inline std::string report_to_json_text(const DesignReport& r) {
    return report_to_json(r).dump(2) + "\n";
}

namespace detail {

inline double report_number(const nlohmann::json& j, const std::string& key,
                            bool null_ok = false) {
    if (!j.contains(key))
        throw std::invalid_argument("report: missing field '" + key + "'");
    const auto& v = j.at(key);
    if (null_ok && v.is_null())
        return std::numeric_limits<double>::quiet_NaN();
    if (!v.is_number())
        throw std::invalid_argument("report: field '" + key + "' must be a number");
    return v.get<double>();
}

}  // namespace detail

/// Parses a report produced by report_to_json_text.  Strict: every field must
/// be present, unknown fields are rejected.
inline DesignReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid report JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("report: top level must be an object");
    static const std::set<std::string> known = {
        "topology", "R1", "R2", "GB", "L1", "L2", "L3", "CB", "La", "Lb", "M",
        "k", "poles", "pole_angle_deg", "bw_hz", "bwer", "realizable"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key))
            throw std::invalid_argument("report: unknown field '" + key + "'");

    DesignReport r;
    TCoilDesign& d = r.design;
    if (!j.contains("topology") || !j.at("topology").is_string())
        throw std::invalid_argument("report: missing or non-string 'topology'");
    d.topology = parse_topology(j.at("topology").get<std::string>());
    d.R1 = detail::report_number(j, "R1");
    d.R2 = detail::report_number(j, "R2");
    d.GB = detail::report_number(j, "GB");
    d.L1 = detail::report_number(j, "L1");
    d.L2 = detail::report_number(j, "L2");
    d.L3 = detail::report_number(j, "L3");
    d.CB = detail::report_number(j, "CB");
    d.La = detail::report_number(j, "La");
    d.Lb = detail::report_number(j, "Lb");
    d.M = detail::report_number(j, "M");
    d.k = detail::report_number(j, "k", /*null_ok=*/true);
    if (!j.contains("realizable") || !j.at("realizable").is_boolean())
        throw std::invalid_argument("report: missing or non-boolean 'realizable'");
    d.realizable = j.at("realizable").get<bool>();

    if (!j.contains("poles") || !j.at("poles").is_array() || j.at("poles").size() != 2)
        throw std::invalid_argument("report: 'poles' must be an array of two entries");
    std::complex<double>* slots[2] = {&r.pole1, &r.pole2};
    for (int i = 0; i < 2; ++i) {
        const auto& p = j.at("poles").at(i);
        if (!p.is_object())
            throw std::invalid_argument("report: pole entries must be objects");
        *slots[i] = {detail::report_number(p, "re"), detail::report_number(p, "im")};
    }
    r.pole_angle_deg = detail::report_number(j, "pole_angle_deg");
    r.bw_hz = detail::report_number(j, "bw_hz");
    r.bwer = detail::report_number(j, "bwer");
    return r;
}

// ---------------------------------------------------------------------------
// CSV sweeps
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Default bridge-capacitance sweep for a locus plot: two decades either side
/// of the design value.
inline std::vector<double> default_locus_cbs(double CB) {
    return log_space(CB / 100, CB * 100, 201);
}

/// Pole positions as CB sweeps: "cb,re1,im1,re2,im2" rows.
inline std::string root_locus_csv(const TransferCoeffs& tc,
                                  const std::vector<double>& cbs) {
    std::string out = "cb,re1,im1,re2,im2\n";
    for (double cb : cbs) {
        const auto [p1, p2] = poles(tc, cb);
        out += detail::fmt_g17(cb) + "," + detail::fmt_g17(p1.real()) + "," +
               detail::fmt_g17(p1.imag()) + "," + detail::fmt_g17(p2.real()) +
               "," + detail::fmt_g17(p2.imag()) + "\n";
    }
    return out;
}

/// Default response sweep: four decades around the load corner 1/(R*C).
inline std::vector<double> default_response_omegas(const LoadSpec& load) {
    const double corner = 1.0 / (load.R * load.C);
    return log_space(corner * 1e-2, corner * 1e2, 201);
}

/// Magnitude/phase of 1 / (B0 + B1 s + B2 s^2) on the imaginary axis:
/// "omega,mag,phase_deg" rows.
inline std::string frequency_response_csv(const TransferCoeffs& tc, double CB,
                                          const std::vector<double>& omegas) {
    const double B0 = tc.B0, B1 = tc.b1(CB), B2 = tc.b2(CB);
    std::string out = "omega,mag,phase_deg\n";
    for (double w : omegas) {
        const std::complex<double> den{B0 - B2 * w * w, B1 * w};
        const std::complex<double> h = 1.0 / den;
        out += detail::fmt_g17(w) + "," + detail::fmt_g17(std::abs(h)) + "," +
               detail::fmt_g17(std::arg(h) * 180.0 / std::numbers::pi) + "\n";
    }
    return out;
}

}  // namespace wangnet
