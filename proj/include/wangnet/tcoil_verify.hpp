#pragma once
// Verification suite for bridged T-coil designs.
//
// Everything here checks a design through an independent route:
//   * build_tcoil_network turns a design back into a plain netlist so the
//     symbolic network machinery (not the synthesis formulas) computes the
//     driving-point impedance;
//   * verify_constant_r sweeps that impedance and reports the worst relative
//     deviation from R;
//   * the cleared-residual polynomials are hand-expanded forms of the balance
//     constraints with the load denominator multiplied out, checked against
//     direct evaluation at random element values and complex frequencies;
//   * the arm-inductance relations tie L1 and L2 of an unequal-arm design to
//     each other through the quadratic both must satisfy.

#include <complex>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wangnet/network.hpp"
#include "wangnet/tcoil.hpp"

namespace wangnet {

// ---------------------------------------------------------------------------
// Design -> netlist
// ---------------------------------------------------------------------------

/// Builds the full circuit of a design driving its load: arms in-tap and
/// tap-out, bridge across in-out, load branch from the tap, termination R
/// from out to ground.  Zero-valued elements are omitted (their nodes merge);
/// an arm with no elements at all has no netlist representation and is
/// rejected.  Edge ids are fixed ("L1", "R1", "L2", "R2", "CB", "RB", "L3",
/// "RS", "CL", "RP", "RT") so callers can locate elements by name.
inline Network build_tcoil_network(const TCoilDesign& d, const LoadSpec& load) {
    load.validate();
    NetworkBuilder b;
    std::set<std::string> declared;
    auto node = [&](const std::string& name) {
        if (declared.insert(name).second)
            b.node(name);
    };
    node("in");
    node("gnd");
    b.input("in");
    b.reference("gnd");

    using NamedElement = std::pair<std::string, Element>;
    // Series chain from `from` to `to`; intermediate nodes get prefix + index.
    // An empty chain adds nothing and reports `from` as the reached node.
    auto chain = [&](std::string from, const std::string& to, const std::string& prefix,
                     const std::vector<NamedElement>& els) -> std::string {
        for (size_t i = 0; i < els.size(); ++i) {
            const std::string next =
                i + 1 == els.size() ? to : prefix + std::to_string(i + 1);
            node(next);
            b.edge(els[i].first, from, next, els[i].second);
            from = next;
        }
        return from;
    };

    std::vector<NamedElement> arm_a;
    if (d.L1 != 0)
        arm_a.emplace_back("L1", Element::inductor(d.L1));
    if (d.R1 > 0)
        arm_a.emplace_back("R1", Element::resistor(d.R1));
    if (arm_a.empty())
        throw DesignError("arm L1/R1 collapses to a short; no netlist form");
    chain("in", "tap", "a", arm_a);

    std::vector<NamedElement> arm_b;
    if (d.L2 != 0)
        arm_b.emplace_back("L2", Element::inductor(d.L2));
    if (d.R2 > 0)
        arm_b.emplace_back("R2", Element::resistor(d.R2));
    if (arm_b.empty())
        throw DesignError("arm L2/R2 collapses to a short; no netlist form");
    chain("tap", "out", "b", arm_b);

    if (!(d.CB > 0))
        throw DesignError("bridge capacitance must be positive");
    b.edge("CB", "in", "out", Element::capacitor(d.CB));
    if (d.GB > 0)
        b.edge("RB", "in", "out", Element::resistor(1.0 / d.GB));

    std::vector<NamedElement> branch_d;
    if (d.L3 != 0)
        branch_d.emplace_back("L3", Element::inductor(d.L3));
    if (load.Rs > 0)
        branch_d.emplace_back("RS", Element::resistor(load.Rs));
    const std::string load_node = chain("tap", "load", "d", branch_d);
    b.edge("CL", load_node, "gnd", Element::capacitor(load.C));
    if (load.Gp > 0)
        b.edge("RP", load_node, "gnd", Element::resistor(1.0 / load.Gp));

    b.edge("RT", "out", "gnd", Element::resistor(load.R));
    return b.build();
}

/// Node the load capacitor hangs from (the transfer-function output node).
inline std::string tcoil_load_node(const Network& net) {
    const Edge& cl = net.edges()[net.edge_index("CL")];
    return net.nodes()[cl.from == net.reference() ? cl.to : cl.from];
}

// ---------------------------------------------------------------------------
// Constant-resistance sweep
// ---------------------------------------------------------------------------

/// Log-spaced imaginary-axis sample points for impedance sweeps.
inline std::vector<std::complex<double>>
log_frequency_samples(double omega_lo, double omega_hi, size_t count) {
    std::vector<std::complex<double>> s;
    s.reserve(count);
    for (double w : log_space(omega_lo, omega_hi, count))
        s.emplace_back(0.0, w);
    return s;
}

inline std::vector<std::complex<double>> default_verify_samples() {
    return log_frequency_samples(1e6, 1e11, 50);
}

/// Worst relative deviation |Zin(s) - R| / R over the sample set, with Zin
/// computed from the rebuilt netlist via the symbolic tree polynomials.
inline double verify_constant_r(const TCoilDesign& d, const LoadSpec& load,
                                const std::vector<std::complex<double>>& samples) {
    const Network net = build_tcoil_network(d, load);
    const RationalImpedance zin(net);
    double worst = 0;
    for (const auto& s : samples)
        worst = std::max(worst, std::abs(zin.at(s) - load.R) / load.R);
    return worst;
}

inline double verify_constant_r(const TCoilDesign& d, const LoadSpec& load) {
    return verify_constant_r(d, load, default_verify_samples());
}

// ---------------------------------------------------------------------------
// Cleared-residual polynomial identities
// ---------------------------------------------------------------------------

/// Free element values for the residual identities (no design relations
/// assumed; the identities are algebraic in every variable).
struct ArmElements {
    double R1 = 0, R2 = 0;
    double L1 = 0, L2 = 0, L3 = 0;
    double CB = 0;
    double GB = 0;  // equal-arm bridge conductance; unused by the unequal-arm form
};

/// A polynomial evaluation together with the sum of its term magnitudes, so
/// residuals can be judged relative to the cancellation actually involved.
struct EvaluatedPoly {
    std::complex<double> value;
    double scale = 0;
};

namespace detail {

class PolyAccumulator {
public:
    explicit PolyAccumulator(std::complex<double> s) : s_(s) {}
    void add(int degree, double term) {
        coef_[degree] += term;
        mag_[degree] += std::abs(term);
    }
    EvaluatedPoly done() const {
        EvaluatedPoly out;
        std::complex<double> p = 1;
        double pm = 1;
        for (int k = 0; k < 4; ++k) {
            out.value += coef_[k] * p;
            out.scale += mag_[k] * pm;
            p *= s_;
            pm *= std::abs(s_);
        }
        return out;
    }

private:
    std::complex<double> s_;
    double coef_[4] = {0, 0, 0, 0};
    double mag_[4] = {0, 0, 0, 0};
};

}  // namespace detail

/// Equal-arm balance residual times (Gp + sC), fully expanded.  Zero (for
/// all s) exactly when the element set keeps the input resistance at R.
inline EvaluatedPoly cleared_sym_residual_poly(std::complex<double> s,
                                               const ArmElements& el,
                                               const LoadSpec& load) {
    const double R = load.R, C = load.C, Rs = load.Rs, Gp = load.Gp;
    const double R1 = el.R1, L1 = el.L1, L3 = el.L3, CB = el.CB, GB = el.GB;
    detail::PolyAccumulator p(s);
    p.add(3, -2 * C * CB * L1 * R * R);
    p.add(3, C * L1 * L1);
    p.add(3, 2 * C * L1 * L3);
    p.add(2, -2 * C * GB * L1 * R * R);
    p.add(2, -2 * CB * Gp * L1 * R * R);
    p.add(2, -2 * C * CB * R * R * R1);
    p.add(2, Gp * L1 * L1);
    p.add(2, 2 * Gp * L1 * L3);
    p.add(2, 2 * C * L1 * R1);
    p.add(2, 2 * C * L3 * R1);
    p.add(2, 2 * C * L1 * Rs);
    p.add(1, -2 * GB * Gp * L1 * R * R);
    p.add(1, -2 * C * GB * R * R * R1);
    p.add(1, -2 * CB * Gp * R * R * R1);
    p.add(1, -C * R * R);
    p.add(1, 2 * Gp * L1 * R1);
    p.add(1, 2 * Gp * L3 * R1);
    p.add(1, C * R1 * R1);
    p.add(1, 2 * Gp * L1 * Rs);
    p.add(1, 2 * C * R1 * Rs);
    p.add(1, 2 * L1);
    p.add(0, -2 * GB * Gp * R * R * R1);
    p.add(0, -Gp * R * R);
    p.add(0, Gp * R1 * R1);
    p.add(0, 2 * Gp * R1 * Rs);
    p.add(0, 2 * R1);
    return p.done();
}

/// Unequal-arm balance residual times (Gp + sC), fully expanded.
inline EvaluatedPoly cleared_asym_residual_poly(std::complex<double> s,
                                                const ArmElements& el,
                                                const LoadSpec& load) {
    const double R = load.R, C = load.C, Rs = load.Rs, Gp = load.Gp;
    const double R1 = el.R1, R2 = el.R2;
    const double L1 = el.L1, L2 = el.L2, L3 = el.L3, CB = el.CB;
    detail::PolyAccumulator p(s);
    p.add(3, -C * CB * L1 * R * R);
    p.add(3, -C * CB * L2 * R * R);
    p.add(3, C * L1 * L2);
    p.add(3, C * L1 * L3);
    p.add(3, C * L2 * L3);
    p.add(2, -CB * Gp * L1 * R * R);
    p.add(2, -CB * Gp * L2 * R * R);
    p.add(2, -C * CB * R * R * R1);
    p.add(2, -C * CB * R * R * R2);
    p.add(2, Gp * L1 * L2);
    p.add(2, Gp * L1 * L3);
    p.add(2, Gp * L2 * L3);
    p.add(2, C * L1 * R);
    p.add(2, -C * L2 * R);
    p.add(2, C * L2 * R1);
    p.add(2, C * L3 * R1);
    p.add(2, C * L1 * R2);
    p.add(2, C * L3 * R2);
    p.add(2, C * L1 * Rs);
    p.add(2, C * L2 * Rs);
    p.add(1, -CB * Gp * R * R * R1);
    p.add(1, -CB * Gp * R * R * R2);
    p.add(1, Gp * L1 * R);
    p.add(1, -Gp * L2 * R);
    p.add(1, -C * R * R);
    p.add(1, Gp * L2 * R1);
    p.add(1, Gp * L3 * R1);
    p.add(1, C * R * R1);
    p.add(1, Gp * L1 * R2);
    p.add(1, Gp * L3 * R2);
    p.add(1, -C * R * R2);
    p.add(1, C * R1 * R2);
    p.add(1, Gp * L1 * Rs);
    p.add(1, Gp * L2 * Rs);
    p.add(1, C * R1 * Rs);
    p.add(1, C * R2 * Rs);
    p.add(1, L1);
    p.add(1, L2);
    p.add(0, -Gp * R * R);
    p.add(0, Gp * R * R1);
    p.add(0, -Gp * R * R2);
    p.add(0, Gp * R1 * R2);
    p.add(0, Gp * R1 * Rs);
    p.add(0, Gp * R2 * Rs);
    p.add(0, R1);
    p.add(0, R2);
    return p.done();
}

/// Same quantities evaluated straight from the branch impedances.
inline std::complex<double> cleared_sym_residual_direct(std::complex<double> s,
                                                        const ArmElements& el,
                                                        const LoadSpec& load) {
    const std::complex<double> a = s * el.L1 + el.R1;
    const std::complex<double> bridge_y = el.GB + s * el.CB;  // 1/c
    const std::complex<double> load_y = load.Gp + s * load.C;
    const std::complex<double> d = s * el.L3 + load.Rs + 1.0 / load_y;
    const double e = load.R;
    return load_y * (2.0 * a * (d - e * e * bridge_y) + a * a - e * e);
}

inline std::complex<double> cleared_asym_residual_direct(std::complex<double> s,
                                                         const ArmElements& el,
                                                         const LoadSpec& load) {
    const std::complex<double> a = s * el.L1 + el.R1;
    const std::complex<double> b = s * el.L2 + el.R2;
    const std::complex<double> bridge_y = s * el.CB;  // 1/c
    const std::complex<double> load_y = load.Gp + s * load.C;
    const std::complex<double> d = s * el.L3 + load.Rs + 1.0 / load_y;
    const double e = load.R;
    return load_y *
           ((a + b) * (d - e * e * bridge_y) + a * b + (a - b) * e - e * e);
}

/// Worst residual between the expanded polynomial and direct evaluation over
/// random element values and complex frequencies, relative to the magnitude
/// of the terms involved.  A correct expansion stays at rounding level.
inline double verify_cleared_residual_expansion(Topology topology,
                                                const LoadSpec& load, int trials,
                                                uint64_t seed) {
    load.validate();
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
    const double R = load.R, C = load.C;
    const double lscale = R * R * C;
    double worst = 0;
    for (int t = 0; t < trials; ++t) {
        ArmElements el;
        el.L1 = lscale * uni(0.1, 2);
        el.L3 = lscale * uni(-0.5, 2);  // negative bridge-leg inductance allowed
        el.R1 = R * uni(0, 1);
        el.CB = C * uni(0.05, 2);
        if (topology == Topology::symmetric) {
            el.GB = uni(0, 2) / R;
        } else {
            el.L2 = lscale * uni(0.1, 2);
            el.R2 = R * uni(0, 1);
        }
        const std::complex<double> s{uni(-3, 3) / (R * C), uni(0.3, 3) / (R * C)};
        const EvaluatedPoly expanded =
            topology == Topology::symmetric
                ? cleared_sym_residual_poly(s, el, load)
                : cleared_asym_residual_poly(s, el, load);
        const std::complex<double> direct =
            topology == Topology::symmetric
                ? cleared_sym_residual_direct(s, el, load)
                : cleared_asym_residual_direct(s, el, load);
        const double denom = std::max(expanded.scale, 1e-300);
        worst = std::max(worst, std::abs(direct - expanded.value) / denom);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Arm-inductance relations (unequal arms)
// ---------------------------------------------------------------------------

/// Relative residual of the quadratic tying the two arm inductances:
/// L2^2 (Rs + R1 - R) + 2 L1 L2 Rs + L1^2 (Rs + R2 + R) = 0.
inline double arm_quadratic_residual(const TCoilDesign& d, const LoadSpec& load) {
    const double t1 = d.L2 * d.L2 * (load.Rs + d.R1 - load.R);
    const double t2 = 2 * d.L1 * d.L2 * load.Rs;
    const double t3 = d.L1 * d.L1 * (load.Rs + d.R2 + load.R);
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    return scale > 0 ? std::abs(t1 + t2 + t3) / scale : 0.0;
}

namespace detail {

/// (R1 + R2) / Gp, extended by continuity to (R - R1)^2 / q at Gp = 0 so the
/// arm relations stay total for lossless-shunt designs (where R1 = R2 = 0).
inline double arm_radicand(const TCoilDesign& d, const LoadSpec& load) {
    if (load.Gp > 0)
        return (d.R1 + d.R2) / load.Gp;
    const double q = 1 + (load.Rs + d.R1 - load.R) * load.Gp;
    return (load.R - d.R1) * (load.R - d.R1) / q;
}

}  // namespace detail

/// Solves the arm quadratic for L2 given L1.  The physically meaningful root
/// takes the negative branch of the radical (the positive branch flips the
/// sign of L2).
inline double l2_from_l1(const TCoilDesign& d, const LoadSpec& load) {
    const double den = load.Rs + d.R1 - load.R;
    if (den == 0)
        throw DesignError("arm quadratic degenerates: Rs + R1 = R");
    return d.L1 * (-load.Rs - std::sqrt(detail::arm_radicand(d, load))) / den;
}

/// Solves the arm quadratic for L1 given L2 (positive radical branch).
inline double l1_from_l2(const TCoilDesign& d, const LoadSpec& load) {
    const double den = load.Rs + d.R2 + load.R;
    return d.L2 * (-load.Rs + std::sqrt(detail::arm_radicand(d, load))) / den;
}

}  // namespace wangnet
