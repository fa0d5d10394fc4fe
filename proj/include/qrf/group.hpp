#ifndef QRF_GROUP_HPP
#define QRF_GROUP_HPP

// Representation theory for U(1) and SU(2).
//
// Conventions (asserted in tests/test_conventions.cpp):
//  - Half-integer spins are stored as doubled integers (two_j, two_m).
//  - U(1) irrep of charge n acts as the phase e^{i n theta}.
//  - SU(2) axis-angle element (omega, theta, phi) is U = e^{+i omega n.J}
//    with n = (sin t cos p, sin t sin p, cos t); Euler element (a, b, c)
//    is U = e^{-i a Jz} e^{-i b Jy} e^{-i c Jz}.  Both are realized through
//    the fundamental 2x2 representation and lifted to spin j by Wigner's
//    small-d formula.
//  - irrep_matrix rows/columns are ordered by m ascending from -j.
//  - Clebsch-Gordan coefficients follow the Condon-Shortley phase.

#include <array>
#include <cstdint>
#include <variant>

#include "qrf/linalg.hpp"

namespace qrf {

enum class GroupId { U1, SU2 };

inline const char* group_name(GroupId g) { return g == GroupId::U1 ? "U1" : "SU2"; }

// A U(1) charge or an SU(2) spin (doubled).
struct IrrepLabel {
    GroupId group;
    int value;  // U1: charge n >= 0; SU2: two_j >= 0

    static IrrepLabel u1(int charge) { return {GroupId::U1, charge}; }
    static IrrepLabel su2(int two_j) { return {GroupId::SU2, two_j}; }

    friend bool operator==(const IrrepLabel& a, const IrrepLabel& b) {
        return a.group == b.group && a.value == b.value;
    }
    friend bool operator<(const IrrepLabel& a, const IrrepLabel& b) {
        return a.group != b.group ? a.group < b.group : a.value < b.value;
    }
};

struct U1Angle {
    double theta;  // [0, 2pi)
};
struct AxisAngle {
    double omega, theta, phi;  // rotation by omega about n(theta, phi)
};
struct EulerAngles {
    double alpha, beta, gamma;  // zyz, beta in [0, pi]
};

struct GroupElement {
    GroupId group;
    std::variant<U1Angle, AxisAngle, EulerAngles> param;

    static GroupElement u1(double theta) { return {GroupId::U1, U1Angle{theta}}; }
    static GroupElement axis_angle(double omega, double theta, double phi) {
        return {GroupId::SU2, AxisAngle{omega, theta, phi}};
    }
    static GroupElement euler(double a, double b, double c) {
        return {GroupId::SU2, EulerAngles{a, b, c}};
    }
    static GroupElement identity(GroupId g) {
        return g == GroupId::U1 ? u1(0.0) : euler(0.0, 0.0, 0.0);
    }

    double u1_theta() const { return std::get<U1Angle>(param).theta; }
};

struct QuadratureRule {
    std::vector<GroupElement> nodes;
    std::vector<double> weights;  // normalized Haar measure, sum to 1
};

inline int irrep_dim(const IrrepLabel& q) { return q.group == GroupId::U1 ? 1 : q.value + 1; }

// -------------------------------------------------------------------------
// factorial tables

namespace detail {

inline double log_factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(1024);
        t[0] = 0.0;
        for (size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] + std::log(double(k));
        return t;
    }();
    if (n < 0 || size_t(n) >= table.size())
        throw std::invalid_argument("log_factorial: argument out of table range");
    return table[size_t(n)];
}

}  // namespace detail

// -------------------------------------------------------------------------
// SU(2) fundamental representation and Euler extraction

// 2x2 matrix in the (m=+1/2, m=-1/2) basis.
inline Matrix su2_fundamental(const GroupElement& g) {
    if (g.group != GroupId::SU2) throw std::invalid_argument("su2_fundamental: not an SU(2) element");
    Matrix u(2, 2);
    if (const auto* aa = std::get_if<AxisAngle>(&g.param)) {
        const double c = std::cos(aa->omega / 2), s = std::sin(aa->omega / 2);
        const double nz = std::cos(aa->theta), nxy = std::sin(aa->theta);
        const cplx ip(0, 1);
        u(0, 0) = c + ip * s * nz;
        u(0, 1) = ip * s * nxy * std::exp(cplx(0, -aa->phi));
        u(1, 0) = ip * s * nxy * std::exp(cplx(0, aa->phi));
        u(1, 1) = c - ip * s * nz;
    } else {
        const auto& e = std::get<EulerAngles>(g.param);
        const double cb = std::cos(e.beta / 2), sb = std::sin(e.beta / 2);
        u(0, 0) = std::exp(cplx(0, -(e.alpha + e.gamma) / 2)) * cb;
        u(0, 1) = -std::exp(cplx(0, -(e.alpha - e.gamma) / 2)) * sb;
        u(1, 0) = std::exp(cplx(0, (e.alpha - e.gamma) / 2)) * sb;
        u(1, 1) = std::exp(cplx(0, (e.alpha + e.gamma) / 2)) * cb;
    }
    return u;
}

namespace detail {

// Euler angles of a (special) unitary 2x2, beta in [0, pi].
inline EulerAngles euler_of_fundamental(const Matrix& u) {
    const double cb = std::abs(u(0, 0)), sb = std::abs(u(1, 0));
    const double beta = 2.0 * std::atan2(sb, cb);
    double alpha = 0, gamma = 0;
    if (sb < 1e-14) {
        alpha = -2.0 * std::arg(u(0, 0));
    } else if (cb < 1e-14) {
        alpha = 2.0 * std::arg(u(1, 0));
    } else {
        alpha = std::arg(u(1, 0)) - std::arg(u(0, 0));
        gamma = -std::arg(u(1, 0)) - std::arg(u(0, 0));
    }
    return {alpha, beta, gamma};
}

inline EulerAngles euler_of(const GroupElement& g) {
    if (const auto* e = std::get_if<EulerAngles>(&g.param)) return *e;
    return euler_of_fundamental(su2_fundamental(g));
}

// Wigner small-d entry <j m'| e^{-i b Jy} |j m>, doubled arguments.
inline double wigner_small_d(int two_j, int two_mp, int two_m, double beta) {
    const double ch = std::cos(beta / 2), sh = std::sin(beta / 2);
    const int jpm = (two_j + two_m) / 2, jmm = (two_j - two_m) / 2;
    const int jpmp = (two_j + two_mp) / 2, jmmp = (two_j - two_mp) / 2;
    const double logpre = 0.5 * (log_factorial(jpmp) + log_factorial(jmmp) + log_factorial(jpm) +
                                 log_factorial(jmm));
    const int dm = (two_mp - two_m) / 2;  // m' - m
    double sum = 0;
    const int smin = std::max(0, -dm);
    const int smax = std::min(jpm, jmmp);
    for (int s = smin; s <= smax; ++s) {
        const int pc = two_j - dm - 2 * s;  // power of cos: 2j + m - m' - 2s
        const int ps = dm + 2 * s;          // power of sin: m' - m + 2s
        if (pc < 0 || ps < 0) continue;
        double term = logpre - log_factorial(jpm - s) - log_factorial(s) -
                      log_factorial(dm + s) - log_factorial(jmmp - s);
        double mag = std::exp(term);
        if (pc > 0) mag *= std::pow(ch, pc);
        if (ps > 0) mag *= std::pow(sh, ps);
        sum += (((dm + s) % 2) ? -1.0 : 1.0) * mag;
    }
    return sum;
}

}  // namespace detail

// Unitary irrep matrix, m ascending from -j (SU(2)) / the 1x1 phase (U(1)).
inline Matrix irrep_matrix(const IrrepLabel& q, const GroupElement& g) {
    if (q.group != g.group) throw std::invalid_argument("irrep_matrix: group mismatch");
    if (q.group == GroupId::U1) {
        Matrix m(1, 1);
        m(0, 0) = std::exp(cplx(0, q.value * g.u1_theta()));
        return m;
    }
    const auto e = detail::euler_of(g);
    const int two_j = q.value;
    const int d = two_j + 1;
    Matrix m(d, d);
    for (int ip = 0; ip < d; ++ip) {
        const int two_mp = -two_j + 2 * ip;
        for (int im = 0; im < d; ++im) {
            const int two_m = -two_j + 2 * im;
            const double dd = detail::wigner_small_d(two_j, two_mp, two_m, e.beta);
            m(ip, im) = std::exp(cplx(0, -(e.alpha * two_mp + e.gamma * two_m) / 2.0)) * dd;
        }
    }
    return m;
}

inline GroupElement compose(const GroupElement& a, const GroupElement& b) {
    if (a.group != b.group) throw std::invalid_argument("compose: group mismatch");
    if (a.group == GroupId::U1) return GroupElement::u1(a.u1_theta() + b.u1_theta());
    const auto e = detail::euler_of_fundamental(su2_fundamental(a) * su2_fundamental(b));
    return GroupElement::euler(e.alpha, e.beta, e.gamma);
}

inline GroupElement inverse(const GroupElement& g) {
    if (g.group == GroupId::U1) return GroupElement::u1(-g.u1_theta());
    const auto e = detail::euler_of_fundamental(su2_fundamental(g).dagger());
    return GroupElement::euler(e.alpha, e.beta, e.gamma);
}

// Character chi_q(g).  SU(2) uses the closed form sin((j+1/2)w)/sin(w/2)
// with the removable singularity handled by its L'Hopital limit.
inline cplx character(const IrrepLabel& q, const GroupElement& g) {
    if (q.group != g.group) throw std::invalid_argument("character: group mismatch");
    if (q.group == GroupId::U1) return std::exp(cplx(0, q.value * g.u1_theta()));
    double omega;
    if (const auto* aa = std::get_if<AxisAngle>(&g.param)) {
        omega = aa->omega;
    } else {
        const Matrix u = su2_fundamental(g);
        const double half_tr = std::clamp(0.5 * (u(0, 0) + u(1, 1)).real(), -1.0, 1.0);
        omega = 2.0 * std::acos(half_tr);
    }
    const double s = std::sin(omega / 2);
    const int d = q.value + 1;  // 2j+1
    if (std::abs(s) <= 1e-8)
        return cplx(d * std::cos(d * omega / 2) / std::cos(omega / 2), 0);
    return cplx(std::sin(d * omega / 2) / s, 0);
}

// Condon-Shortley Clebsch-Gordan coefficient (j1 m1; j2 m2 | J M),
// doubled arguments.  Selection-rule violations return 0.
inline double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2, int two_J,
                             int two_M) {
    using detail::log_factorial;
    if (two_j1 < 0 || two_j2 < 0 || two_J < 0) return 0.0;
    if (std::abs(two_m1) > two_j1 || std::abs(two_m2) > two_j2 || std::abs(two_M) > two_J)
        return 0.0;
    if ((two_j1 + two_m1) % 2 || (two_j2 + two_m2) % 2 || (two_J + two_M) % 2) return 0.0;
    if (two_m1 + two_m2 != two_M) return 0.0;
    if (two_J < std::abs(two_j1 - two_j2) || two_J > two_j1 + two_j2) return 0.0;
    if ((two_j1 + two_j2 + two_J) % 2) return 0.0;

    // All the following are honest integers by the parity checks above.
    const int a = (two_j1 + two_j2 - two_J) / 2;
    const int b = (two_j1 - two_j2 + two_J) / 2;
    const int c = (-two_j1 + two_j2 + two_J) / 2;
    const int j1pm1 = (two_j1 + two_m1) / 2, j1mm1 = (two_j1 - two_m1) / 2;
    const int j2pm2 = (two_j2 + two_m2) / 2, j2mm2 = (two_j2 - two_m2) / 2;
    const int JpM = (two_J + two_M) / 2, JmM = (two_J - two_M) / 2;

    const double log_delta = 0.5 * (log_factorial(a) + log_factorial(b) + log_factorial(c) -
                                    log_factorial((two_j1 + two_j2 + two_J) / 2 + 1));
    const double log_norm =
        0.5 * (std::log(double(two_J + 1)) + log_factorial(j1pm1) + log_factorial(j1mm1) +
               log_factorial(j2pm2) + log_factorial(j2mm2) + log_factorial(JpM) +
               log_factorial(JmM));

    const int t1 = (two_J - two_j2 + two_m1) / 2;  // J - j2 + m1
    const int t2 = (two_J - two_j1 - two_m2) / 2;  // J - j1 - m2
    const int kmin = std::max({0, -t1, -t2});
    const int kmax = std::min({a, j1mm1, j2pm2});
    double sum = 0;
    for (int k = kmin; k <= kmax; ++k) {
        const double term = log_delta + log_norm - log_factorial(k) - log_factorial(a - k) -
                            log_factorial(j1mm1 - k) - log_factorial(j2pm2 - k) -
                            log_factorial(t1 + k) - log_factorial(t2 + k);
        sum += ((k % 2) ? -1.0 : 1.0) * std::exp(term);
    }
    return sum;
}

// Total spins two_J reachable from two_j1 x two_j2, ascending.
inline std::vector<int> couple(int two_j1, int two_j2) {
    std::vector<int> out;
    for (int two_J = std::abs(two_j1 - two_j2); two_J <= two_j1 + two_j2; two_J += 2)
        out.push_back(two_J);
    return out;
}

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1], Newton on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) * z * p1 - k * p2) / (k + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[size_t(i)] = -z;
        x[size_t(n - 1 - i)] = z;
        w[size_t(i)] = w[size_t(n - 1 - i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

}  // namespace detail

// Default rule order making bounded-degree integrands exact up to rounding.
inline int default_quadrature_order(int max_two_j) { return 2 * max_two_j + 8; }

// U(1): `order` equally spaced angles.  SU(2): tensor rule in the axis-angle
// parametrization dOmega = (1/2pi^2) sin^2(w/2) sin(t) dp dt dw with
// Gauss-Legendre in w and cos(t) and a trapezoid rule in p.
inline QuadratureRule haar_quadrature(GroupId group, int order) {
    if (order < 1) throw std::invalid_argument("haar_quadrature: order must be >= 1");
    QuadratureRule rule;
    if (group == GroupId::U1) {
        rule.nodes.reserve(size_t(order));
        for (int k = 0; k < order; ++k)
            rule.nodes.push_back(GroupElement::u1(2.0 * M_PI * k / order));
        rule.weights.assign(size_t(order), 1.0 / order);
        return rule;
    }
    std::vector<double> xw, ww, xt, wt;
    detail::gauss_legendre(order, xw, ww);  // omega via [-1,1] -> [0,pi]
    detail::gauss_legendre(order, xt, wt);  // cos(theta)
    const int nphi = 2 * order;
    double total = 0;
    for (int i = 0; i < order; ++i) {
        const double omega = M_PI * (xw[size_t(i)] + 1.0) / 2.0;
        const double s = std::sin(omega / 2);
        const double w_omega = ww[size_t(i)] * (M_PI / 2.0) * s * s;
        for (int j = 0; j < order; ++j) {
            const double theta = std::acos(std::clamp(xt[size_t(j)], -1.0, 1.0));
            for (int k = 0; k < nphi; ++k) {
                const double phi = 2.0 * M_PI * k / nphi;
                rule.nodes.push_back(GroupElement::axis_angle(omega, theta, phi));
                const double w = w_omega * wt[size_t(j)] * (2.0 * M_PI / nphi) / (2.0 * M_PI * M_PI);
                rule.weights.push_back(w);
                total += w;
            }
        }
    }
    for (auto& w : rule.weights) w /= total;
    return rule;
}

}  // namespace qrf

#endif
