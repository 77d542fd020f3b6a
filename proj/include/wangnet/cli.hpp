#pragma once
// Command-line front-end: netlist queries (determinants, trees, cotrees,
// impedance sweeps), T-coil design runs, and design-report verification.
//
// Exit codes: 0 success, 1 usage, 2 input validation, 3 infeasible design.
// All outputs are deterministic: identical inputs give byte-identical bytes.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wangnet/network.hpp"
#include "wangnet/tcoil.hpp"
#include "wangnet/tcoil_report.hpp"
#include "wangnet/tcoil_verify.hpp"

namespace wangnet {

/// Structural misuse detected after flag parsing (still a usage error).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace cli_detail {

/// Numeric value with optional SI suffix (p, n, u, m, k, M, G); plain and
/// scientific notation pass through unchanged.
inline double parse_si_value(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("empty numeric value");
    double mult = 1;
    std::string body = text;
    switch (text.back()) {
        case 'p': mult = 1e-12; break;
        case 'n': mult = 1e-9; break;
        case 'u': mult = 1e-6; break;
        case 'm': mult = 1e-3; break;
        case 'k': mult = 1e3; break;
        case 'M': mult = 1e6; break;
        case 'G': mult = 1e9; break;
        default: break;
    }
    if (mult != 1)
        body.pop_back();
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(body, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid numeric value '" + text + "'");
    }
    if (pos != body.size())
        throw std::invalid_argument("invalid numeric value '" + text + "'");
    return v * mult;
}

/// "START:STOP:POINTS" into a log-spaced angular-frequency grid.
inline std::vector<double> parse_sweep(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        text.find(':', c2 + 1) != std::string::npos)
        throw std::invalid_argument("sweep must be START:STOP:POINTS");
    const double start = parse_si_value(text.substr(0, c1));
    const double stop = parse_si_value(text.substr(c1 + 1, c2 - c1 - 1));
    const std::string pts = text.substr(c2 + 1);
    std::size_t pos = 0;
    long points = 0;
    try {
        points = std::stol(pts, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid sweep point count '" + pts + "'");
    }
    if (pos != pts.size() || points < 2)
        throw std::invalid_argument("sweep needs at least 2 points");
    return log_space(start, stop, static_cast<std::size_t>(points));
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::invalid_argument("cannot open output file: " + path);
    f << text;
}

/// Sends `text` to --output PATH when given, otherwise to the stream.
inline void emit(const std::string& output_path, const std::string& text,
                 std::ostream& out) {
    if (output_path.empty())
        out << text;
    else
        write_file(output_path, text);
}

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> edge_names(const Network& net,
                                           const std::vector<std::size_t>& idx) {
    std::vector<std::string> names;
    names.reserve(idx.size());
    for (std::size_t i : idx)
        names.push_back(net.edges()[i].id);
    return names;
}

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

// -- det ---------------------------------------------------------------

struct DetArgs {
    std::string netlist, mode = "node", format = "text", output;
};

inline std::string run_det(const DetArgs& a) {
    const Network net = parse_network(read_file(a.netlist));
    const StructuredSymMatrix& m = a.mode == "mesh"
                                       ? mesh_matrix(net).matrix
                                       : node_matrix(net).matrix;
    const WangPoly det = wang_det(m);
    const std::string poly = to_string(det, net.symbols());
    const std::size_t terms = det.term_count();
    if (a.format == "json") {
        nlohmann::ordered_json j;
        j["mode"] = a.mode;
        j["determinant"] = poly;
        j["terms"] = terms;
        return j.dump(2) + "\n";
    }
    if (a.format == "csv")
        return "determinant,terms\n" + poly + "," + std::to_string(terms) + "\n";
    return poly + "\nterms: " + std::to_string(terms) + "\n";
}

// -- trees / cotrees ---------------------------------------------------

struct TreesArgs {
    std::string netlist, format = "text", output;
    bool count_only = false;
    bool complement = false;  // cotrees instead of trees
};

inline std::string run_trees(const TreesArgs& a) {
    const Network net = parse_network(read_file(a.netlist));
    const char* label = a.complement ? "cotrees" : "trees";
    if (a.count_only) {
        const std::int64_t n = count_trees(net);
        if (a.format == "json") {
            nlohmann::ordered_json j;
            j["count"] = n;
            return j.dump(2) + "\n";
        }
        if (a.format == "csv")
            return "count\n" + std::to_string(n) + "\n";
        return std::to_string(n) + "\n";
    }
    const auto sets = a.complement ? cotrees(net) : spanning_trees(net);
    if (a.format == "json") {
        nlohmann::ordered_json j;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& s : sets)
            arr.push_back(edge_names(net, s));
        j[label] = std::move(arr);
        return j.dump(2) + "\n";
    }
    std::string out;
    if (a.format == "csv")
        out = a.complement ? "cotree\n" : "tree\n";
    for (const auto& s : sets)
        out += join(edge_names(net, s), " ") + "\n";
    return out;
}

// -- impedance ---------------------------------------------------------

struct ImpedanceArgs {
    std::string netlist, sweep, format = "csv", output;
};

inline std::string run_impedance(const ImpedanceArgs& a) {
    const Network net = parse_network(read_file(a.netlist));
    const RationalImpedance zin(net);
    const std::vector<double> omegas = parse_sweep(a.sweep);
    if (a.format == "json") {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (double w : omegas) {
            nlohmann::ordered_json row;
            row["omega"] = w;
            try {
                const auto z = zin.at({0.0, w});
                row["re"] = z.real();
                row["im"] = z.imag();
            } catch (const PoleError&) {
                row["pole"] = true;
            }
            rows.push_back(std::move(row));
        }
        nlohmann::ordered_json j;
        j["sweep"] = std::move(rows);
        return j.dump(2) + "\n";
    }
    // csv and text share the tabular form; poles flag their row and the
    // sweep continues.
    std::string out = "omega,re,im\n";
    for (double w : omegas) {
        try {
            const auto z = zin.at({0.0, w});
            out += fmt_g17(w) + "," + fmt_g17(z.real()) + "," + fmt_g17(z.imag()) + "\n";
        } catch (const PoleError&) {
            out += fmt_g17(w) + ",pole,pole\n";
        }
    }
    return out;
}

// -- tcoil -------------------------------------------------------------

struct TcoilArgs {
    std::string topology;
    std::string R, C, Rs, Rp, R1, cb;  // SI-suffixed numerics
    double angle = 0;
    bool has_angle = false;
    std::string locus, response;
    std::string format = "json", output;
};

inline LoadSpec load_from_flags(const std::string& R, const std::string& C,
                                const std::string& Rs, const std::string& Rp) {
    if (R.empty() || C.empty())
        throw UsageError("--R and --C are required");
    LoadSpec load;
    load.R = parse_si_value(R);
    load.C = parse_si_value(C);
    load.Rs = Rs.empty() ? 0.0 : parse_si_value(Rs);
    if (!Rp.empty()) {
        const double rp = parse_si_value(Rp);
        if (!(rp > 0))
            throw std::invalid_argument("Rp must be positive");
        load.Gp = 1.0 / rp;
    }
    load.validate();
    return load;
}

inline std::string report_to_text(const DesignReport& r) {
    const TCoilDesign& d = r.design;
    std::string out;
    out += "topology: " + to_string(d.topology) + "\n";
    out += "R1: " + fmt_g17(d.R1) + "\n";
    out += "R2: " + fmt_g17(d.R2) + "\n";
    out += "GB: " + fmt_g17(d.GB) + "\n";
    out += "L1: " + fmt_g17(d.L1) + "\n";
    out += "L2: " + fmt_g17(d.L2) + "\n";
    out += "L3: " + fmt_g17(d.L3) + "\n";
    out += "CB: " + fmt_g17(d.CB) + "\n";
    out += "La: " + fmt_g17(d.La) + "\n";
    out += "Lb: " + fmt_g17(d.Lb) + "\n";
    out += "M: " + fmt_g17(d.M) + "\n";
    out += "k: " + fmt_g17(d.k) + "\n";
    out += "pole1: " + fmt_g17(r.pole1.real()) + " " + fmt_g17(r.pole1.imag()) + "\n";
    out += "pole2: " + fmt_g17(r.pole2.real()) + " " + fmt_g17(r.pole2.imag()) + "\n";
    out += "pole_angle_deg: " + fmt_g17(r.pole_angle_deg) + "\n";
    out += "bw_hz: " + fmt_g17(r.bw_hz) + "\n";
    out += "bwer: " + fmt_g17(r.bwer) + "\n";
    out += std::string("realizable: ") + (d.realizable ? "true" : "false") + "\n";
    return out;
}

inline std::string report_to_csv(const DesignReport& r) {
    const TCoilDesign& d = r.design;
    std::string head = "topology,R1,R2,GB,L1,L2,L3,CB,La,Lb,M,k,pole1_re,pole1_im,"
                       "pole2_re,pole2_im,pole_angle_deg,bw_hz,bwer,realizable\n";
    std::vector<std::string> vals = {
        to_string(d.topology), fmt_g17(d.R1), fmt_g17(d.R2), fmt_g17(d.GB),
        fmt_g17(d.L1), fmt_g17(d.L2), fmt_g17(d.L3), fmt_g17(d.CB),
        fmt_g17(d.La), fmt_g17(d.Lb), fmt_g17(d.M), fmt_g17(d.k),
        fmt_g17(r.pole1.real()), fmt_g17(r.pole1.imag()),
        fmt_g17(r.pole2.real()), fmt_g17(r.pole2.imag()),
        fmt_g17(r.pole_angle_deg), fmt_g17(r.bw_hz), fmt_g17(r.bwer),
        d.realizable ? "true" : "false"};
    return head + join(vals, ",") + "\n";
}

inline std::string run_tcoil(const TcoilArgs& a, std::string& locus_csv,
                             std::string& response_csv) {
    const LoadSpec load = load_from_flags(a.R, a.C, a.Rs, a.Rp);
    if (a.has_angle == !a.cb.empty())
        throw UsageError("exactly one of --angle or --cb is required");
    const Topology topology = parse_topology(a.topology);
    if (topology == Topology::symmetric && !a.R1.empty())
        throw std::invalid_argument("--R1 applies to the asym topology only");
    const double r1 = a.R1.empty() ? 0.0 : parse_si_value(a.R1);

    // Coefficients do not depend on CB (only B1, B2 assembled from it do), so
    // an unequal-arm design can be probed with a placeholder bridge value.
    TransferCoeffs tc;
    if (topology == Topology::symmetric)
        tc = sym_transfer_terms(load);
    else
        tc = asym_transfer_terms(load, design_asymmetric(load, r1, load.C));
    const double cb = a.has_angle ? solve_cb_for_angle(tc, a.angle)
                                  : parse_si_value(a.cb);
    if (!(cb > 0))
        throw std::invalid_argument("CB must be positive");

    const TCoilDesign design = topology == Topology::symmetric
                                   ? design_symmetric(load, cb)
                                   : design_asymmetric(load, r1, cb);
    const DesignReport report = make_design_report(load, design);

    if (!a.locus.empty())
        locus_csv = root_locus_csv(tc, default_locus_cbs(cb));
    if (!a.response.empty())
        response_csv = frequency_response_csv(tc, cb, default_response_omegas(load));

    if (a.format == "text")
        return report_to_text(report);
    if (a.format == "csv")
        return report_to_csv(report);
    return report_to_json_text(report);
}

// -- verify ------------------------------------------------------------

struct VerifyArgs {
    std::string report;
    std::string R, C, Rs, Rp;
    std::string format = "json", output;
};

inline constexpr double kVerifyTolerance = 1e-9;
inline constexpr std::uint64_t kVerifySeed = 0x57414e47ULL;  // fixed for determinism

inline std::string run_verify(const VerifyArgs& a) {
    const DesignReport r = report_from_json(read_file(a.report));
    const LoadSpec load = load_from_flags(a.R, a.C, a.Rs, a.Rp);
    const double cdev = verify_constant_r(r.design, load);
    const double expansion =
        verify_cleared_residual_expansion(r.design.topology, load, 100, kVerifySeed);
    const bool asym = r.design.topology == Topology::asymmetric;
    double arm_res = 0, l2_rel = 0, l1_rel = 0;
    if (asym) {
        arm_res = arm_quadratic_residual(r.design, load);
        l2_rel = std::abs(l2_from_l1(r.design, load) - r.design.L2) /
                 std::max(std::abs(r.design.L2), 1e-300);
        l1_rel = std::abs(l1_from_l2(r.design, load) - r.design.L1) /
                 std::max(std::abs(r.design.L1), 1e-300);
    }
    const bool pass = cdev < kVerifyTolerance && expansion < kVerifyTolerance &&
                      (!asym || (arm_res < kVerifyTolerance &&
                                 l2_rel < kVerifyTolerance &&
                                 l1_rel < kVerifyTolerance));

    if (a.format == "json") {
        nlohmann::ordered_json j;
        j["topology"] = to_string(r.design.topology);
        j["constant_r_max_dev"] = cdev;
        j["expansion_max_residual"] = expansion;
        if (asym) {
            j["arm_quadratic_residual"] = arm_res;
            j["l2_match_rel"] = l2_rel;
            j["l1_match_rel"] = l1_rel;
        } else {
            j["arm_quadratic_residual"] = nullptr;
            j["l2_match_rel"] = nullptr;
            j["l1_match_rel"] = nullptr;
        }
        j["tolerance"] = kVerifyTolerance;
        j["pass"] = pass;
        return j.dump(2) + "\n";
    }
    auto num_or_na = [&](double v) { return asym ? fmt_g17(v) : std::string("n/a"); };
    if (a.format == "csv") {
        std::string head = "topology,constant_r_max_dev,expansion_max_residual,"
                           "arm_quadratic_residual,l2_match_rel,l1_match_rel,"
                           "tolerance,pass\n";
        std::vector<std::string> vals = {
            to_string(r.design.topology), fmt_g17(cdev), fmt_g17(expansion),
            num_or_na(arm_res), num_or_na(l2_rel), num_or_na(l1_rel),
            fmt_g17(kVerifyTolerance), pass ? "true" : "false"};
        return head + join(vals, ",") + "\n";
    }
    std::string out;
    out += "topology: " + to_string(r.design.topology) + "\n";
    out += "constant_r_max_dev: " + fmt_g17(cdev) + "\n";
    out += "expansion_max_residual: " + fmt_g17(expansion) + "\n";
    out += "arm_quadratic_residual: " + num_or_na(arm_res) + "\n";
    out += "l2_match_rel: " + num_or_na(l2_rel) + "\n";
    out += "l1_match_rel: " + num_or_na(l1_rel) + "\n";
    out += "tolerance: " + fmt_g17(kVerifyTolerance) + "\n";
    out += std::string("pass: ") + (pass ? "true" : "false") + "\n";
    return out;
}

}  // namespace cli_detail

/// Runs the tool; returns the process exit code.  Output destined for stdout
/// goes to `out`, diagnostics to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    using namespace cli_detail;
    CLI::App app{"Symbolic network analysis and constant-resistance "
                 "bridged T-coil design"};
    app.name("wangnet");
    app.require_subcommand(1);

    DetArgs det;
    auto* det_cmd = app.add_subcommand("det", "Symbolic system determinant");
    det_cmd->add_option("--netlist", det.netlist, "Netlist JSON path")->required();
    det_cmd->add_option("--mode", det.mode, "Matrix to expand")
        ->check(CLI::IsMember({"node", "mesh"}));
    det_cmd->add_option("--format", det.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    det_cmd->add_option("--output", det.output, "Write to file instead of stdout");

    TreesArgs trees;
    auto* trees_cmd = app.add_subcommand("trees", "Spanning trees of the netlist");
    trees_cmd->add_option("--netlist", trees.netlist, "Netlist JSON path")->required();
    trees_cmd->add_flag("--count", trees.count_only, "Print only the tree count");
    trees_cmd->add_option("--format", trees.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    trees_cmd->add_option("--output", trees.output, "Write to file instead of stdout");

    TreesArgs cot;
    cot.complement = true;
    auto* cot_cmd = app.add_subcommand("cotrees", "Cotrees of the netlist");
    cot_cmd->add_option("--netlist", cot.netlist, "Netlist JSON path")->required();
    cot_cmd->add_flag("--count", cot.count_only, "Print only the cotree count");
    cot_cmd->add_option("--format", cot.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cot_cmd->add_option("--output", cot.output, "Write to file instead of stdout");

    ImpedanceArgs imp;
    auto* imp_cmd =
        app.add_subcommand("impedance", "Driving-point impedance sweep");
    imp_cmd->add_option("--netlist", imp.netlist, "Netlist JSON path")->required();
    imp_cmd->add_option("--sweep", imp.sweep,
                        "START:STOP:POINTS angular-frequency sweep (log-spaced)")
        ->required();
    imp_cmd->add_option("--format", imp.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    imp_cmd->add_option("--output", imp.output, "Write to file instead of stdout");

    TcoilArgs tc;
    auto* tc_cmd = app.add_subcommand("tcoil", "Design a constant-R bridged T-coil");
    tc_cmd->add_option("--topology", tc.topology, "sym or asym")
        ->required()
        ->check(CLI::IsMember({"sym", "asym"}));
    tc_cmd->add_option("--R", tc.R, "Termination resistance (ohm)")->required();
    tc_cmd->add_option("--C", tc.C, "Load capacitance (farad)")->required();
    tc_cmd->add_option("--Rs", tc.Rs, "Load series resistance (ohm)");
    tc_cmd->add_option("--Rp", tc.Rp, "Load shunt resistance (ohm)");
    tc_cmd->add_option("--R1", tc.R1, "First arm resistance, asym only (ohm)");
    auto* angle_opt = tc_cmd->add_option("--angle", tc.angle,
                                         "Pole angle from the negative real axis (deg)");
    auto* cb_opt = tc_cmd->add_option("--cb", tc.cb, "Bridge capacitance (farad)");
    angle_opt->excludes(cb_opt);
    tc_cmd->add_option("--locus", tc.locus, "Write pole-locus CSV to this path");
    tc_cmd->add_option("--response", tc.response,
                       "Write frequency-response CSV to this path");
    tc_cmd->add_option("--format", tc.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    tc_cmd->add_option("--output", tc.output, "Write to file instead of stdout");

    VerifyArgs ver;
    auto* ver_cmd =
        app.add_subcommand("verify", "Check a design report against its load");
    ver_cmd->add_option("--report", ver.report, "Design report JSON path")->required();
    ver_cmd->add_option("--R", ver.R, "Termination resistance (ohm)");
    ver_cmd->add_option("--C", ver.C, "Load capacitance (farad)");
    ver_cmd->add_option("--Rs", ver.Rs, "Load series resistance (ohm)");
    ver_cmd->add_option("--Rp", ver.Rp, "Load shunt resistance (ohm)");
    ver_cmd->add_option("--format", ver.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    ver_cmd->add_option("--output", ver.output, "Write to file instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("wangnet");
    for (const auto& s : args)
        argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*det_cmd) {
            emit(det.output, run_det(det), out);
        } else if (*trees_cmd) {
            emit(trees.output, run_trees(trees), out);
        } else if (*cot_cmd) {
            emit(cot.output, run_trees(cot), out);
        } else if (*imp_cmd) {
            emit(imp.output, run_impedance(imp), out);
        } else if (*tc_cmd) {
            tc.has_angle = angle_opt->count() > 0;
            std::string locus_csv, response_csv;
            const std::string report = run_tcoil(tc, locus_csv, response_csv);
            if (!tc.locus.empty())
                write_file(tc.locus, locus_csv);
            if (!tc.response.empty())
                write_file(tc.response, response_csv);
            emit(tc.output, report, out);
        } else if (*ver_cmd) {
            emit(ver.output, run_verify(ver), out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DesignError& e) {
        err << "infeasible design: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

}  // namespace wangnet
