#ifndef QRF_CHANNEL_HPP
#define QRF_CHANNEL_HPP

// Density operators and completely positive maps in Kraus form, with Choi
// representations, twirling superoperators and entanglement fidelity.
//
// Choi convention: choi(ch) = sum_{ij} |i><j|_in (x) ch(|i><j|)_out, an
// (in*out)-dimensional matrix with the input factor major.  Channel equality
// is tested through the trace distance of the normalized Choi states, a
// lower bound on the diamond distance.

#include <functional>
#include <optional>

#include "qrf/group.hpp"
#include "qrf/linalg.hpp"

namespace qrf {

enum class TpClass { TracePreserving, TraceDecreasing };

struct DensityOperator {
    Matrix mat;

    int dim() const { return mat.rows(); }
    double trace() const { return mat.trace().real(); }

    // Checked constructor for honest (normalized) states.
    static DensityOperator validated(Matrix m, double herm_tol = 1e-10, double psd_tol = 1e-9) {
        if (!m.is_square()) throw std::invalid_argument("DensityOperator: non-square matrix");
        if ((m - m.dagger()).max_abs() > herm_tol)
            throw std::invalid_argument("DensityOperator: not Hermitian");
        if (std::abs(m.trace().real() - 1.0) > herm_tol || std::abs(m.trace().imag()) > herm_tol)
            throw std::invalid_argument("DensityOperator: trace != 1");
        if (!assert_psd(m, psd_tol)) throw std::invalid_argument("DensityOperator: not PSD");
        return DensityOperator{std::move(m)};
    }
};

inline Matrix pure_state(const std::vector<cplx>& amps) {
    Matrix m(int(amps.size()), int(amps.size()));
    for (size_t i = 0; i < amps.size(); ++i)
        for (size_t j = 0; j < amps.size(); ++j) m(int(i), int(j)) = amps[i] * std::conj(amps[j]);
    return m;
}

struct KrausChannel {
    int in_dim = 0;
    int out_dim = 0;
    TpClass tp_class = TpClass::TracePreserving;
    std::vector<Matrix> kraus;  // each out_dim x in_dim

    static KrausChannel identity(int d) {
        return {d, d, TpClass::TracePreserving, {Matrix::identity(d)}};
    }

    Matrix kraus_sum() const {  // sum K^dag K
        Matrix s(in_dim, in_dim);
        for (const auto& k : kraus) s += k.dagger() * k;
        return s;
    }
};

inline Matrix apply(const KrausChannel& ch, const Matrix& rho) {
    if (rho.rows() != ch.in_dim || rho.cols() != ch.in_dim)
        throw std::invalid_argument("apply: state dimension does not match channel input");
    Matrix out(ch.out_dim, ch.out_dim);
    for (const auto& k : ch.kraus) out += k * rho * k.dagger();
    return out;
}

inline DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho) {
    return DensityOperator{apply(ch, rho.mat)};
}

// Kraus daggers; in/out dims swap.  Generally not trace-preserving.
inline KrausChannel adjoint_channel(const KrausChannel& ch) {
    KrausChannel adj{ch.out_dim, ch.in_dim, TpClass::TraceDecreasing, {}};
    adj.kraus.reserve(ch.kraus.size());
    for (const auto& k : ch.kraus) adj.kraus.push_back(k.dagger());
    return adj;
}

struct ChoiMatrix {
    Matrix mat;  // (in*out) x (in*out), input factor major
    int in_dim = 0;
    int out_dim = 0;
};

inline ChoiMatrix choi(const KrausChannel& ch) {
    const int di = ch.in_dim, dout = ch.out_dim;
    Matrix c(di * dout, di * dout);
    for (const auto& k : ch.kraus) {
        // vec(K) with composite index (i_in, a_out): contribution vec vec^dag.
        std::vector<cplx> v(size_t(di) * dout);
        for (int i = 0; i < di; ++i)
            for (int a = 0; a < dout; ++a) v[size_t(i) * dout + a] = k(a, i);
        for (size_t r = 0; r < v.size(); ++r) {
            if (v[r] == cplx(0)) continue;
            for (size_t s = 0; s < v.size(); ++s)
                c(int(r), int(s)) += v[r] * std::conj(v[s]);
        }
    }
    return {std::move(c), di, dout};
}

// Rebuild a Kraus set from a Choi matrix, dropping eigenvalues below cutoff.
inline KrausChannel channel_from_choi(const ChoiMatrix& c, TpClass tp, double cutoff = 1e-12) {
    auto [ev, vecs] = hermitian_eig(c.mat);
    KrausChannel ch{c.in_dim, c.out_dim, tp, {}};
    for (size_t n = 0; n < ev.size(); ++n) {
        if (ev[n] < cutoff) continue;
        const double s = std::sqrt(ev[n]);
        Matrix k(c.out_dim, c.in_dim);
        for (int i = 0; i < c.in_dim; ++i)
            for (int a = 0; a < c.out_dim; ++a) k(a, i) = s * vecs(i * c.out_dim + a, int(n));
        ch.kraus.push_back(std::move(k));
    }
    if (ch.kraus.empty()) ch.kraus.push_back(Matrix::zero(c.out_dim, c.in_dim));
    return ch;
}

// Build a channel from its action on the matrix-unit basis.
inline KrausChannel channel_from_action(const std::function<Matrix(const Matrix&)>& action,
                                        int in_dim, int out_dim,
                                        TpClass tp = TpClass::TracePreserving) {
    Matrix c(in_dim * out_dim, in_dim * out_dim);
    for (int i = 0; i < in_dim; ++i)
        for (int j = 0; j < in_dim; ++j) {
            Matrix eij(in_dim, in_dim);
            eij(i, j) = 1.0;
            const Matrix out = action(eij);
            for (int a = 0; a < out_dim; ++a)
                for (int b = 0; b < out_dim; ++b)
                    c(i * out_dim + a, j * out_dim + b) = out(a, b);
        }
    // Hermitize before the eigendecomposition; the action of a CP map on the
    // matrix-unit basis yields a Hermitian Choi up to rounding.
    Matrix h = (c + c.dagger()) * 0.5;
    return channel_from_choi({std::move(h), in_dim, out_dim}, tp);
}

inline KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
    if (first.out_dim != second.in_dim)
        throw std::invalid_argument("compose: intermediate dimensions differ");
    KrausChannel ch{first.in_dim, second.out_dim,
                    (first.tp_class == TpClass::TracePreserving &&
                     second.tp_class == TpClass::TracePreserving)
                        ? TpClass::TracePreserving
                        : TpClass::TraceDecreasing,
                    {}};
    ch.kraus.reserve(first.kraus.size() * second.kraus.size());
    for (const auto& k2 : second.kraus)
        for (const auto& k1 : first.kraus) ch.kraus.push_back(k2 * k1);
    if (int(ch.kraus.size()) > ch.in_dim * ch.out_dim)
        return channel_from_choi(choi(ch), ch.tp_class);
    return ch;
}

inline double channel_distance(const KrausChannel& a, const KrausChannel& b) {
    if (a.in_dim != b.in_dim || a.out_dim != b.out_dim)
        throw std::invalid_argument("channel_distance: dimension mismatch");
    const Matrix ca = choi(a).mat * (1.0 / a.in_dim);
    const Matrix cb = choi(b).mat * (1.0 / b.in_dim);
    return trace_distance(ca, cb);
}

// Convex mixture of two channels with the same dimensions.
inline KrausChannel mix(double wa, const KrausChannel& a, double wb, const KrausChannel& b) {
    if (a.in_dim != b.in_dim || a.out_dim != b.out_dim)
        throw std::invalid_argument("mix: dimension mismatch");
    if (wa < 0 || wb < 0) throw std::invalid_argument("mix: negative weight");
    KrausChannel ch{a.in_dim, a.out_dim, a.tp_class, {}};
    for (const auto& k : a.kraus) ch.kraus.push_back(std::sqrt(wa) * k);
    for (const auto& k : b.kraus) ch.kraus.push_back(std::sqrt(wb) * k);
    return ch;
}

// Exact twirling superoperator for a space whose sector structure, in the
// canonical basis order (sectors ascending, index = m*mult + mult_index), is
// rep = [(label, multiplicity), ...]: project onto each sector, depolarize
// the irrep factor, leave the multiplicity factor alone.
inline KrausChannel twirl(GroupId group, const std::vector<std::pair<IrrepLabel, int>>& rep) {
    if (rep.empty()) throw std::invalid_argument("twirl: empty sector list");
    int dim = 0;
    for (const auto& [label, mult] : rep) {
        if (label.group != group) throw std::invalid_argument("twirl: label group mismatch");
        if (mult <= 0) throw std::invalid_argument("twirl: nonpositive multiplicity");
        dim += irrep_dim(label) * mult;
    }
    KrausChannel ch{dim, dim, TpClass::TracePreserving, {}};
    int offset = 0;
    for (const auto& [label, mult] : rep) {
        const int d = irrep_dim(label);
        const double s = 1.0 / std::sqrt(double(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Matrix k(dim, dim);
                for (int n = 0; n < mult; ++n)
                    k(offset + i * mult + n, offset + j * mult + n) = s;
                ch.kraus.push_back(std::move(k));
            }
        offset += d * mult;
    }
    return ch;
}

// F_e with the maximally mixed reference: (1/d^2) sum_i |Tr K_i|^2.
inline double entanglement_fidelity(const KrausChannel& ch) {
    if (ch.in_dim != ch.out_dim)
        throw std::invalid_argument("entanglement_fidelity: input and output dimensions differ");
    double f = 0;
    for (const auto& k : ch.kraus) f += std::norm(k.trace());
    return f / (double(ch.in_dim) * ch.in_dim);
}

}  // namespace qrf

#endif
