#pragma once
// Constant-resistance bridged T-coil synthesis and analysis.
//
// The bridged-T network drives a lossy capacitive load (C with series R_S and
// shunt G_P) through two coupled inductors bridged by C_B, terminated in R.
// When the branch impedances satisfy the balance constraints below, the
// driving-point impedance equals R at every frequency and the voltage
// transfer to the load capacitor collapses to second order:
//
//   V_C/V = 1 / (B0 + (D0 + D1*CB)*s + D2*CB*s^2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wangnet {

/// Requested synthesis is mathematically infeasible (out-of-range resistor
/// split, unattainable pole angle, unrealizable coupled form, ...).
struct DesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Termination-and-load description the coil is designed against.
struct LoadSpec {
    double R = 0;   // termination resistance (ohm)
    double C = 0;   // load capacitance (farad)
    double Rs = 0;  // series resistance of the load capacitor (ohm)
    double Gp = 0;  // shunt conductance across the load (siemens), 1/Rp

    void validate() const {
        if (!(std::isfinite(R) && R > 0))
            throw std::invalid_argument("load: R must be positive");
        if (!(std::isfinite(C) && C > 0))
            throw std::invalid_argument("load: C must be positive");
        if (!(std::isfinite(Rs) && Rs >= 0))
            throw std::invalid_argument("load: Rs must be >= 0");
        if (!(std::isfinite(Gp) && Gp >= 0))
            throw std::invalid_argument("load: Gp must be >= 0");
    }
};

enum class Topology { symmetric, asymmetric };

inline std::string to_string(Topology t) {
    return t == Topology::symmetric ? "sym" : "asym";
}

inline Topology parse_topology(const std::string& name) {
    if (name == "sym")
        return Topology::symmetric;
    if (name == "asym")
        return Topology::asymmetric;
    throw std::invalid_argument("unknown topology '" + name + "' (expected sym or asym)");
}

/// Logarithmically spaced grid over [lo, hi], endpoints included.
inline std::vector<double> log_space(double lo, double hi, size_t count) {
    if (!(lo > 0) || !(hi > lo) || count < 2)
        throw std::invalid_argument("log_space needs 0 < lo < hi and count >= 2");
    std::vector<double> out;
    out.reserve(count);
    const double step = std::log(hi / lo) / double(count - 1);
    for (size_t i = 0; i < count; ++i)
        out.push_back(lo * std::exp(step * double(i)));
    return out;
}

/// Complete element set of a designed coil, with its coupled-inductor
/// realization.  M keeps the sign of L3 (series-aiding vs. opposing is part
/// of the answer, not an absolute value); `realizable` reports whether the
/// coupled form is physical (La, Lb > 0 and |k| <= 1).
struct TCoilDesign {
    Topology topology = Topology::symmetric;
    double R1 = 0, R2 = 0;  // bridge-arm series resistances (ohm)
    double GB = 0;          // bridge conductance alongside CB (siemens; symmetric only)
    double L1 = 0, L2 = 0, L3 = 0;  // T-model inductances (henry)
    double CB = 0;                  // bridge capacitance (farad)
    double La = 0, Lb = 0;          // coupled-coil self-inductances (henry)
    double M = 0;                   // mutual inductance = L3 (henry, signed)
    double k = 0;                   // coupling coefficient M/sqrt(La*Lb)
    bool realizable = false;
};

/// Second-order denominator pieces: B1 and B2 depend on the bridge capacitor
/// through B1 = D0 + D1*CB and B2 = D2*CB.
struct TransferCoeffs {
    double B0 = 0, D0 = 0, D1 = 0, D2 = 0;
    double b1(double cb) const { return D0 + D1 * cb; }
    double b2(double cb) const { return D2 * cb; }
};

// ---------------------------------------------------------------------------
// Constant-resistance balance constraints and the Thevenin reduction
// ---------------------------------------------------------------------------

/// Residual of the general (asymmetric-arm) constant-resistance constraint
/// for branch impedances a, b (arms), c (bridge), d (load branch), e
/// (termination): (a+b)(d - e^2/c) + a*b + (a-b)*e - e^2.  Zero at every s
/// exactly when the bridged-T input impedance equals e.
inline std::complex<double>
constraint_residual_asym(std::complex<double> a, std::complex<double> b,
                         std::complex<double> c, std::complex<double> d,
                         std::complex<double> e) {
    if (c == std::complex<double>{})
        throw std::invalid_argument("bridge impedance c must be nonzero");
    return (a + b) * (d - e * e / c) + a * b + (a - b) * e - e * e;
}

/// Equal-arm specialization (a = b): 2a(d - e^2/c) + a^2 - e^2.
inline std::complex<double>
constraint_residual_sym(std::complex<double> a, std::complex<double> c,
                        std::complex<double> d, std::complex<double> e) {
    if (c == std::complex<double>{})
        throw std::invalid_argument("bridge impedance c must be nonzero");
    return 2.0 * a * (d - e * e / c) + a * a - e * e;
}

struct TheveninEquivalent {
    std::complex<double> Vth;
    std::complex<double> Zth;
};

/// Balanced-bridge Thevenin equivalent seen by the load branch: the source
/// carries over unchanged and Zth = (b+e)*a/(a+b).
inline TheveninEquivalent thevenin(std::complex<double> a, std::complex<double> b,
                                   std::complex<double> e, std::complex<double> V) {
    if (a + b == std::complex<double>{})
        throw std::invalid_argument("degenerate bridge arms: a + b = 0");
    return {V, (b + e) * a / (a + b)};
}

// ---------------------------------------------------------------------------
// Element synthesis
// ---------------------------------------------------------------------------

namespace detail {

/// Coupled-form fields + realizability flag, without throwing: synthesis
/// reports unrealizable coupled forms instead of failing.
inline void fill_coupled_form(TCoilDesign& d) {
    d.La = d.L1 + d.L3;
    d.Lb = d.L2 + d.L3;
    d.M = d.L3;
    if (d.La > 0 && d.Lb > 0) {
        d.k = d.M / std::sqrt(d.La * d.Lb);
        d.realizable = std::abs(d.k) <= 1.0 + 1e-12;
    } else {
        d.k = std::numeric_limits<double>::quiet_NaN();
        d.realizable = false;
    }
}

}  // namespace detail

/// Equal-arm constant-R synthesis.  The bridge needs a conductance GB
/// alongside CB to absorb the load losses; L3 trades against CB.
inline TCoilDesign design_symmetric(const LoadSpec& load, double CB) {
    load.validate();
    if (!(std::isfinite(CB) && CB > 0))
        throw std::invalid_argument("CB must be positive");
    const double R = load.R, C = load.C, Rs = load.Rs, Gp = load.Gp;
    TCoilDesign d;
    d.topology = Topology::symmetric;
    d.CB = CB;
    d.R1 = d.R2 = R * R * Gp / 2;
    d.GB = Rs / (R * R) + Gp / 4;
    d.L1 = d.L2 = R * R * C / 2;
    d.L3 = R * R * CB - d.L1 / 2;
    detail::fill_coupled_form(d);
    return d;
}

/// Transfer-denominator pieces of the equal-arm coil.
inline TransferCoeffs sym_transfer_terms(const LoadSpec& load) {
    load.validate();
    const double R = load.R, C = load.C, Rs = load.Rs, Gp = load.Gp;
    TransferCoeffs tc;
    tc.B0 = 1 + Gp * (R / 2 + R * R * Gp / 4 + Rs);
    tc.D0 = (2 * R + R * R * Gp + 4 * Rs) * C / 4;
    tc.D1 = R * R * Gp;
    tc.D2 = R * R * C;
    return tc;
}

/// Unequal-arm constant-R synthesis for a chosen R1.  R1 is feasible only
/// while the induced R2 stays nonnegative; with no shunt loss (Gp = 0) the
/// arms carry no resistance at all, so R1 must be 0.
inline TCoilDesign design_asymmetric(const LoadSpec& load, double R1, double CB) {
    load.validate();
    if (!(std::isfinite(CB) && CB > 0))
        throw std::invalid_argument("CB must be positive");
    if (!(std::isfinite(R1) && R1 >= 0))
        throw std::invalid_argument("R1 must be >= 0");
    const double R = load.R, C = load.C, Rs = load.Rs, Gp = load.Gp;
    if (Gp == 0 && R1 != 0)
        throw DesignError("with no shunt loss (Gp = 0) the only feasible split "
                          "is R1 = R2 = 0");

    const double q = 1 + (Rs + R1 - R) * Gp;
    if (!(q > 0))
        throw DesignError("degenerate arm denominator: 1 + (Rs+R1-R)*Gp = " +
                          std::to_string(q));
    const double R2 = (R * R * Gp - R1 * (1 + (Rs + R) * Gp)) / q;
    if (R2 < 0)
        throw DesignError("R1 = " + std::to_string(R1) +
                          " is beyond the feasible range (it forces R2 = " +
                          std::to_string(R2) + " < 0)");

    TCoilDesign d;
    d.topology = Topology::asymmetric;
    d.CB = CB;
    d.R1 = R1;
    d.R2 = R2;
    d.GB = 0;
    d.L1 = (R1 - R) * (R1 + Rs - R) * C / (q + std::sqrt(q));
    const double q2 = 1 + (R2 + Rs + R) * Gp;
    d.L2 = (R2 + R) * (R2 + Rs + R) * C / (q2 + std::sqrt(q2));
    const double Lt = d.L1 + d.L2;
    if (!(Lt > 0))
        throw DesignError("arm inductances sum to a nonpositive total");
    d.L3 = R * R * CB - d.L1 * d.L2 / Lt;
    detail::fill_coupled_form(d);
    return d;
}

/// Transfer-denominator pieces of an unequal-arm (or equal-arm) design,
/// expanded from the Thevenin reduction.  The bridge balance makes the
/// expansion exactly second order; that cancellation is verified on a pair
/// of sample points and its failure reported, since it is what certifies the
/// inputs really satisfy the constant-R constraints.
inline TransferCoeffs asym_transfer_terms(const LoadSpec& load, const TCoilDesign& d) {
    load.validate();
    const double R = load.R, C = load.C, Rs = load.Rs, Gp = load.Gp;
    const double Lt = d.L1 + d.L2;
    if (!(Lt > 0))
        throw std::invalid_argument("design has a nonpositive arm-inductance total");

    TransferCoeffs tc;
    // With the balance in force, (Gp + sC)*Zth loses its (Gp + sC) factor and
    // contributes the linear-in-s factor a*(b+e) scaled by C/(L1+L2); the
    // forms below stay exact in the Gp = 0 limit where R1 = R2 = 0.
    tc.B0 = 1 + Gp * Rs +
            (d.R1 + d.R2 > 0 ? Gp * d.R1 * (d.R2 + R) / (d.R1 + d.R2) : 0.0);
    tc.D0 = C * Rs - Gp * d.L1 * d.L2 / Lt +
            C * (d.L1 * (d.R2 + R) + d.L2 * d.R1) / Lt;
    tc.D1 = R * R * Gp;
    tc.D2 = R * R * C;

    // Second-order cancellation check at two generic complex frequencies.
    const double w = 1.0 / (R * C);
    for (const auto s : {std::complex<double>{0.7, 1.3} * w,
                         std::complex<double>{-0.4, 2.1} * w}) {
        const auto a = s * d.L1 + d.R1;
        const auto b = s * d.L2 + d.R2;
        const auto direct = 1.0 + (Gp + s * C) * (Rs + s * d.L3) +
                            (Gp + s * C) * (b + R) * a / (a + b);
        const auto quad = tc.B0 + tc.b1(d.CB) * s + tc.b2(d.CB) * s * s;
        if (std::abs(direct - quad) > 1e-6 * std::max(std::abs(direct), 1.0))
            throw DesignError("transfer function does not collapse to second "
                              "order; the element set violates the "
                              "constant-resistance balance");
    }
    return tc;
}

/// Coefficients for a design, via the route matching its topology.
inline TransferCoeffs transfer_terms(const LoadSpec& load, const TCoilDesign& d) {
    return d.topology == Topology::symmetric ? sym_transfer_terms(load)
                                             : asym_transfer_terms(load, d);
}

// ---------------------------------------------------------------------------
// Poles, root locus, pole-angle design, bandwidth
// ---------------------------------------------------------------------------

/// Roots of B2*s^2 + B1*s + B0 for the denominator at bridge capacitance CB.
/// Conjugate pairs come back (+imag, -imag); two real roots come back in
/// ascending order.
inline std::pair<std::complex<double>, std::complex<double>>
poles(const TransferCoeffs& tc, double CB) {
    const double B0 = tc.B0, B1 = tc.b1(CB), B2 = tc.b2(CB);
    if (!(B2 > 0))
        throw std::invalid_argument("denominator is not second order (B2 <= 0)");
    const double disc = B1 * B1 - 4 * B0 * B2;
    if (disc < 0) {
        const double re = -B1 / (2 * B2);
        const double im = std::sqrt(-disc) / (2 * B2);
        return {{re, im}, {re, -im}};
    }
    // Real roots, computed without subtractive cancellation.
    const double q = -(B1 + std::copysign(std::sqrt(disc), B1)) / 2;
    double r1 = q / B2;
    double r2 = B0 / q;
    if (r1 > r2)
        std::swap(r1, r2);
    return {{r1, 0.0}, {r2, 0.0}};
}

/// Angle of a pole measured from the negative real axis, in degrees; its
/// cosine is the damping ratio for left-half-plane conjugate pairs.
inline double pole_angle_deg(std::complex<double> pole) {
    return std::atan2(std::abs(pole.imag()), -pole.real()) * 180.0 /
           std::numbers::pi;
}

struct RootLocus {
    double center = 0;  // rad/s (on the real axis)
    double radius = 0;  // rad/s
};

/// Circle traced by the complex-pole pair as CB sweeps.
inline RootLocus root_locus(const TransferCoeffs& tc) {
    if (!(tc.D0 > 0) || !(tc.D2 > 0))
        throw std::invalid_argument("root locus needs D0 > 0 and D2 > 0");
    const double radicand = 1 - tc.D0 * tc.D1 / (tc.B0 * tc.D2);
    if (radicand < 0)
        throw DesignError("pole locus is not a circle (negative radicand); "
                          "coefficient set is not a valid design");
    return {-tc.B0 / tc.D0, tc.B0 / tc.D0 * std::sqrt(radicand)};
}

/// Bridge capacitance that places the complex poles at `theta_deg` from the
/// negative real axis (cos(theta) = damping ratio).  The defining relation is
/// quadratic in CB; when both roots are positive the smaller one is returned
/// (less bridge capacitance, wider bandwidth).  Angles whose damping falls
/// below the locus minimum have no solution.
inline double solve_cb_for_angle(const TransferCoeffs& tc, double theta_deg) {
    if (!(theta_deg > 0 && theta_deg < 90))
        throw std::invalid_argument("pole angle must lie strictly between 0 and 90 degrees");
    const double c2 = std::pow(std::cos(theta_deg * std::numbers::pi / 180.0), 2);
    const double B0 = tc.B0, D0 = tc.D0, D1 = tc.D1, D2 = tc.D2;
    if (D1 == 0)
        return D0 * D0 / (4 * B0 * D2 * c2);
    // (D0 + D1*CB)^2 = 4*B0*D2*CB*cos^2(theta)
    const double a = D1 * D1;
    const double b = 2 * D0 * D1 - 4 * B0 * D2 * c2;
    const double c = D0 * D0;
    const double disc = b * b - 4 * a * c;
    if (disc < 0)
        throw DesignError("pole angle " + std::to_string(theta_deg) +
                          " deg is outside the attainable range for this load");
    const double q = -(b + std::copysign(std::sqrt(disc), b)) / 2;
    const double r1 = q / a;
    const double r2 = c / q;
    const double lo = std::min(r1, r2);
    const double hi = std::max(r1, r2);
    if (lo > 0)
        return lo;
    if (hi > 0)
        return hi;
    throw DesignError("no positive bridge capacitance hits the requested angle");
}

struct CoupledForm {
    double La = 0, Lb = 0, M = 0, k = 0;
};

/// T-model to coupled-coil conversion; M carries the sign of L3.
inline CoupledForm to_coupled(double L1, double L2, double L3) {
    CoupledForm c;
    c.La = L1 + L3;
    c.Lb = L2 + L3;
    c.M = L3;
    if (!(c.La > 0) || !(c.Lb > 0))
        throw DesignError("coupled form unrealizable: nonpositive self-inductance");
    c.k = c.M / std::sqrt(c.La * c.Lb);
    return c;
}

struct Bandwidth {
    double bw_hz = 0;
    double bwer = 0;  // ratio to the single-pole 1/(2*pi*R*C) baseline
};

/// -3 dB bandwidth of 1/(B0 + B1 s + B2 s^2) and its ratio to the bare-RC
/// single-pole bandwidth.  Closed form from the biquadratic in omega^2, with
/// a bisection fallback for degenerate coefficient sets.
inline Bandwidth bandwidth(const TransferCoeffs& tc, double CB, const LoadSpec& load) {
    load.validate();
    const double B0 = tc.B0, B1 = tc.b1(CB), B2 = tc.b2(CB);
    if (!(B0 > 0) || !(B1 > 0) || B2 < 0)
        throw std::invalid_argument("bandwidth needs B0, B1 > 0 and B2 >= 0");
    double x;  // omega^2 at the -3 dB point
    if (B2 == 0) {
        x = (B0 / B1) * (B0 / B1);
    } else {
        // (B0 - B2 x)^2 + B1^2 x = 2 B0^2, i.e.
        // B2^2 x^2 + (B1^2 - 2 B0 B2) x - B0^2 = 0, single positive root.
        const double a = B2 * B2;
        const double b = B1 * B1 - 2 * B0 * B2;
        const double root = std::sqrt(b * b + 4 * a * B0 * B0);
        x = b > 0 ? 2 * B0 * B0 / (b + root) : (root - b) / (2 * a);
        if (!(x > 0) || !std::isfinite(x)) {
            // Bisection on |den(j w)|^2 - 2 B0^2, which is increasing in w^2.
            double lo = 0, hi = 1;
            auto f = [&](double xx) {
                const double u = B0 - B2 * xx;
                return u * u + B1 * B1 * xx - 2 * B0 * B0;
            };
            while (f(hi) < 0)
                hi *= 2;
            for (int i = 0; i < 200; ++i) {
                const double mid = (lo + hi) / 2;
                (f(mid) < 0 ? lo : hi) = mid;
            }
            x = (lo + hi) / 2;
        }
    }
    const double omega = std::sqrt(x);
    Bandwidth out;
    out.bw_hz = omega / (2 * std::numbers::pi);
    out.bwer = omega * load.R * load.C;
    return out;
}

}  // namespace wangnet
