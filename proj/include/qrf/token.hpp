#ifndef QRF_TOKEN_HPP
#define QRF_TOKEN_HPP

// Reference-frame token spaces and states.
//
// A Regular token spans the irreps Q_R, each sector carrying the minimal
// multiplicity space of dimension d_q, for a total dimension
// D_R = sum d_q^2.  Its fiducial state is maximally entangled across every
// sector, |e> = sum_q sqrt(d_q/D_R) sum_m |q,m>|phi_{q,m}>, with the
// multiplicity basis |phi_{q,m}> fixed to the m-th basis vector so the
// sector component of |e> is vec(I) up to normalization.
//
// A Coherent token (SU(2) only) is a single spin-j_R space in the
// highest-weight state |j_R, m = j_R>.
//
// Canonical basis order: sectors ascending by label; within a sector,
// index = m_index * mult_dim + mult_index, m ascending from -j.

#include "qrf/channel.hpp"
#include "qrf/group.hpp"
#include "qrf/linalg.hpp"

namespace qrf {

enum class TokenKind { Regular, Coherent };

struct TokenSpec {
    GroupId group;
    TokenKind kind;
    std::vector<IrrepLabel> labels;  // Regular: Q_R, ascending, no duplicates
    int coherent_two_j = 0;          // Coherent only

    // Phase reference: charges 0..n_max.
    static TokenSpec u1_regular(int n_max) {
        if (n_max < 0) throw std::invalid_argument("u1_regular: negative charge bound");
        TokenSpec t{GroupId::U1, TokenKind::Regular, {}, 0};
        for (int n = 0; n <= n_max; ++n) t.labels.push_back(IrrepLabel::u1(n));
        return t;
    }
    // Cartesian frame: integer spins 0..j_max.
    static TokenSpec su2_regular(int j_max) {
        if (j_max < 0) throw std::invalid_argument("su2_regular: negative spin bound");
        TokenSpec t{GroupId::SU2, TokenKind::Regular, {}, 0};
        for (int j = 0; j <= j_max; ++j) t.labels.push_back(IrrepLabel::su2(2 * j));
        return t;
    }
    // Direction indicator: SU(2)-coherent state of size j_R (doubled).
    static TokenSpec su2_coherent(int two_j) {
        if (two_j < 1) throw std::invalid_argument("su2_coherent: two_j must be >= 1");
        return TokenSpec{GroupId::SU2, TokenKind::Coherent, {}, two_j};
    }

    void validate() const {
        if (kind == TokenKind::Coherent) {
            if (group != GroupId::SU2)
                throw std::invalid_argument("TokenSpec: coherent tokens are SU(2) only");
            return;
        }
        if (labels.empty()) throw std::invalid_argument("TokenSpec: empty irrep set");
        for (size_t i = 0; i < labels.size(); ++i) {
            if (labels[i].group != group)
                throw std::invalid_argument("TokenSpec: irrep group mismatch");
            if (i > 0 && !(labels[i - 1] < labels[i]))
                throw std::invalid_argument("TokenSpec: irreps must be ascending, no duplicates");
        }
    }
};

struct Sector {
    IrrepLabel label;
    int m_dim;
    int mult_dim;
    int offset;
};

struct SectorLayout {
    std::vector<Sector> sectors;
    int total_dim = 0;
};

inline SectorLayout token_layout(const TokenSpec& spec) {
    spec.validate();
    SectorLayout layout;
    if (spec.kind == TokenKind::Coherent) {
        const IrrepLabel q = IrrepLabel::su2(spec.coherent_two_j);
        layout.sectors.push_back({q, irrep_dim(q), 1, 0});
        layout.total_dim = irrep_dim(q);
        return layout;
    }
    int offset = 0;
    for (const auto& q : spec.labels) {
        const int d = irrep_dim(q);
        layout.sectors.push_back({q, d, d, offset});
        offset += d * d;
    }
    layout.total_dim = offset;
    return layout;
}

inline int token_dimension(const TokenSpec& spec) { return token_layout(spec).total_dim; }

inline int token_max_two_j(const TokenSpec& spec) {
    if (spec.kind == TokenKind::Coherent) return spec.coherent_two_j;
    int m = 0;
    for (const auto& q : spec.labels) m = std::max(m, spec.group == GroupId::U1 ? q.value : q.value);
    return m;
}

struct FiducialState {
    std::vector<cplx> vec;
    SectorLayout layout;
};

inline FiducialState fiducial_state(const TokenSpec& spec) {
    FiducialState e;
    e.layout = token_layout(spec);
    e.vec.assign(size_t(e.layout.total_dim), cplx(0));
    if (spec.kind == TokenKind::Coherent) {
        e.vec.back() = 1.0;  // m = +j_R is the last index, m ascending
        return e;
    }
    const double d_r = double(e.layout.total_dim);
    for (const auto& sec : e.layout.sectors) {
        const double amp = std::sqrt(double(sec.m_dim) / d_r);
        for (int m = 0; m < sec.m_dim; ++m)
            e.vec[size_t(sec.offset + m * sec.mult_dim + m)] = amp;
    }
    return e;
}

// U_R(g): the irrep acts on the M factor of every sector.
inline Matrix left_action(const TokenSpec& spec, const GroupElement& g) {
    if (g.group != spec.group) throw std::invalid_argument("left_action: group mismatch");
    const SectorLayout layout = token_layout(spec);
    Matrix u(layout.total_dim, layout.total_dim);
    for (const auto& sec : layout.sectors) {
        const Matrix d = irrep_matrix(sec.label, g);
        for (int m = 0; m < sec.m_dim; ++m)
            for (int mp = 0; mp < sec.m_dim; ++mp) {
                if (d(m, mp) == cplx(0)) continue;
                for (int n = 0; n < sec.mult_dim; ++n)
                    u(sec.offset + m * sec.mult_dim + n, sec.offset + mp * sec.mult_dim + n) =
                        d(m, mp);
            }
    }
    return u;
}

// V_R(h): the conjugate irrep acts on the multiplicity factor, realizing
// V_R(h)|g> = |g h^-1> on the covariant orbit.
inline Matrix right_action(const TokenSpec& spec, const GroupElement& h) {
    if (h.group != spec.group) throw std::invalid_argument("right_action: group mismatch");
    if (spec.kind == TokenKind::Coherent)
        throw unsupported_operation("right_action: coherent tokens lack multiplicity structure");
    const SectorLayout layout = token_layout(spec);
    Matrix v(layout.total_dim, layout.total_dim);
    for (const auto& sec : layout.sectors) {
        const Matrix d = irrep_matrix(sec.label, h).conjugate();
        for (int m = 0; m < sec.m_dim; ++m)
            for (int n = 0; n < sec.mult_dim; ++n)
                for (int np = 0; np < sec.mult_dim; ++np)
                    v(sec.offset + m * sec.mult_dim + n, sec.offset + m * sec.mult_dim + np) =
                        d(n, np);
    }
    return v;
}

// |g> = U_R(g)|e>, built sector by sector (cheaper than the full matrix).
inline std::vector<cplx> orbit_state(const TokenSpec& spec, const GroupElement& g) {
    if (g.group != spec.group) throw std::invalid_argument("orbit_state: group mismatch");
    const SectorLayout layout = token_layout(spec);
    std::vector<cplx> v(size_t(layout.total_dim), cplx(0));
    if (spec.kind == TokenKind::Coherent) {
        const Matrix d = irrep_matrix(layout.sectors[0].label, g);
        for (int m = 0; m < d.rows(); ++m) v[size_t(m)] = d(m, d.cols() - 1);
        return v;
    }
    const double d_r = double(layout.total_dim);
    for (const auto& sec : layout.sectors) {
        const Matrix d = irrep_matrix(sec.label, g);
        const double amp = std::sqrt(double(sec.m_dim) / d_r);
        // Sector component of |e> is amp * vec(I), so U|e> is amp * vec(D).
        for (int m = 0; m < sec.m_dim; ++m)
            for (int n = 0; n < sec.mult_dim; ++n)
                v[size_t(sec.offset + m * sec.mult_dim + n)] = amp * d(m, n);
    }
    return v;
}

// p(g) = D_R |<e|U_R(g)|e>|^2, normalized so that its Haar integral is 1.
inline double overlap_density(const TokenSpec& spec, const GroupElement& g) {
    const FiducialState e = fiducial_state(spec);
    const std::vector<cplx> v = orbit_state(spec, g);
    cplx ov = 0;
    for (size_t i = 0; i < v.size(); ++i) ov += std::conj(e.vec[i]) * v[i];
    return double(e.layout.total_dim) * std::norm(ov);
}

// Sector structure in the form twirl() expects.
inline std::vector<std::pair<IrrepLabel, int>> token_rep(const TokenSpec& spec) {
    std::vector<std::pair<IrrepLabel, int>> rep;
    for (const auto& sec : token_layout(spec).sectors) rep.emplace_back(sec.label, sec.mult_dim);
    return rep;
}

}  // namespace qrf

#endif
