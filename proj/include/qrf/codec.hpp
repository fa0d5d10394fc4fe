#ifndef QRF_CODEC_HPP
#define QRF_CODEC_HPP

// Encoding and decoding with a bounded-size reference-frame token.
//
// The encoding E(rho) = integral dg |g><g| (x) U_S(g) rho U_S(g)^dag is
// realized two ways: by Haar quadrature (encode_integral) and exactly
// through the charge-sector decomposition of the joint space
// (encode_block).  The recovery map R = D_R E^dag likewise has a
// "measure and re-orient" quadrature implementation and an exact
// "extract from the relational subsystems" implementation built on the
// per-sector intertwiners A^(q).  Sectors where A^(q) is bijective
// recover the input perfectly; the projective sector measurement turns
// that into post-selectively perfect decoding.

#include <cstdint>
#include <map>
#include <random>

#include "qrf/channel.hpp"
#include "qrf/token.hpp"

namespace qrf {

// A two-dimensional message system: an SU(2) spin-1/2 or a U(1) qubit
// spanned by charges {0, 1}.  Computational order |0>, |1> with
// |0> = m=+1/2 for spin (matching the Bloch conventions of the scenarios).
struct SystemSpec {
    GroupId group;
    std::array<IrrepLabel, 2> labels;
    std::array<int, 2> two_m;

    static SystemSpec su2_qubit() {
        return {GroupId::SU2, {IrrepLabel::su2(1), IrrepLabel::su2(1)}, {+1, -1}};
    }
    static SystemSpec u1_qubit() {
        return {GroupId::U1, {IrrepLabel::u1(0), IrrepLabel::u1(1)}, {0, 0}};
    }

    int dim() const { return 2; }

    Matrix u_matrix(const GroupElement& g) const {
        if (g.group != group) throw std::invalid_argument("SystemSpec::u_matrix: group mismatch");
        Matrix u(2, 2);
        if (group == GroupId::U1) {
            u(0, 0) = std::exp(cplx(0, labels[0].value * g.u1_theta()));
            u(1, 1) = std::exp(cplx(0, labels[1].value * g.u1_theta()));
            return u;
        }
        const Matrix d = irrep_matrix(IrrepLabel::su2(1), g);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) u(i, j) = d((two_m[i] + 1) / 2, (two_m[j] + 1) / 2);
        return u;
    }
};

// One total-irrep block of the joint token (x) system space.
struct SectorBlock {
    IrrepLabel q;    // total irrep label
    int d_q;         // dim of the collective factor M^(q)
    int rel_dim;     // dim of the relational factor
    Matrix coupled;  // joint_dim x (d_q*rel_dim); column = M_index*rel_dim + nu
    Matrix a_dag;    // rel_dim x (d_q*2), the stored intertwiner adjoint
    bool has_intertwiner = false;
    bool ok = false;  // q in Q_RS^ok: A^(q) bijective, sector decodes perfectly

    Matrix projector() const { return coupled * coupled.dagger(); }
};

struct SectorMap {
    TokenSpec token;
    SystemSpec system;
    SectorLayout layout;  // token layout
    FiducialState fid;
    int joint_dim = 0;
    int d_r = 0;
    std::vector<SectorBlock> blocks;
};

namespace detail {

inline void check_token_system(const TokenSpec& token, const SystemSpec& system) {
    if (token.group != system.group)
        throw std::invalid_argument("token and system belong to different groups");
}

inline SectorBlock make_su2_block(const SectorLayout& layout, int two_J,
                                  const std::vector<int>& branch_two_j, int joint_dim,
                                  bool exceptional) {
    SectorBlock blk;
    blk.q = IrrepLabel::su2(two_J);
    blk.d_q = two_J + 1;

    std::vector<int> branch_offset;
    int rel = 0;
    for (int two_j : branch_two_j) {
        branch_offset.push_back(rel);
        rel += two_j + 1;
    }
    blk.rel_dim = rel;

    auto sector_of = [&](int two_j) -> const Sector& {
        for (const auto& s : layout.sectors)
            if (s.label.value == two_j) return s;
        throw std::logic_error("make_su2_block: missing token sector");
    };

    // Coupled basis: |J,M; (j, mult)> = sum_{m+s=M} (j,m;1/2,s|J,M) |j,m,mult>|s>.
    blk.coupled = Matrix(joint_dim, blk.d_q * rel);
    for (int mi = 0; mi <= two_J; ++mi) {
        const int two_M = -two_J + 2 * mi;
        for (size_t bi = 0; bi < branch_two_j.size(); ++bi) {
            const int two_j = branch_two_j[bi];
            const Sector& sec = sector_of(two_j);
            for (int mult = 0; mult < sec.mult_dim; ++mult) {
                const int col = mi * rel + branch_offset[bi] + mult;
                for (int si = 0; si < 2; ++si) {
                    const int two_s = (si == 0) ? +1 : -1;
                    const int two_m = two_M - two_s;
                    if (std::abs(two_m) > two_j) continue;
                    const double cg = clebsch_gordan(two_j, two_m, 1, two_s, two_J, two_M);
                    if (cg == 0.0) continue;
                    const int m_idx = (two_m + two_j) / 2;
                    const int row = (sec.offset + m_idx * sec.mult_dim + mult) * 2 + si;
                    blk.coupled(row, col) = cg;
                }
            }
        }
    }

    // Intertwiner adjoint.  With the maximally entangled pairing of |e>,
    // expanding <J,M|(|e>|psi>) in the coupled basis forces
    //   A^dag |J,M>|1/2,s> = sum_j sqrt((2j+1)/(2J+1))
    //                        (j,M-s;1/2,s|J,M) |phi_{j,M-s}>,
    // the sum running over the token branches j = J -/+ 1/2 present in Q_R
    // (only the lower one in the exceptional sector).  This satisfies
    // A^dag A = I and E^(q)(rho) = (d_q/D_R) A^dag (I (x) rho) A exactly.
    blk.has_intertwiner = true;
    blk.a_dag = Matrix(rel, blk.d_q * 2);
    for (int mi = 0; mi <= two_J; ++mi) {
        const int two_M = -two_J + 2 * mi;
        for (int si = 0; si < 2; ++si) {
            const int two_s = (si == 0) ? +1 : -1;
            const int col = mi * 2 + si;
            const int two_mphi = two_M - two_s;
            for (size_t bi = 0; bi < branch_two_j.size(); ++bi) {
                const int two_j = branch_two_j[bi];
                if (std::abs(two_mphi) > two_j) continue;
                const double cg = clebsch_gordan(two_j, two_mphi, 1, two_s, two_J, two_M);
                if (cg == 0.0) continue;
                const int nu = branch_offset[bi] + (two_mphi + two_j) / 2;
                blk.a_dag(nu, col) =
                    std::sqrt(double(two_j + 1) / double(two_J + 1)) * cg;
            }
        }
    }
    blk.ok = !exceptional;
    return blk;
}

}  // namespace detail

// Builds the full charge-sector decomposition of token (x) system: coupled
// bases, projectors, intertwiners and the Case A/B flags.
inline SectorMap sector_map(const TokenSpec& token, const SystemSpec& system) {
    detail::check_token_system(token, system);
    SectorMap map;
    map.token = token;
    map.system = system;
    map.layout = token_layout(token);
    map.fid = fiducial_state(token);
    map.d_r = map.layout.total_dim;
    map.joint_dim = map.d_r * 2;

    if (token.group == GroupId::U1) {
        // Sectors are labeled by total charge N; the relational block holds
        // the pairs (n=N, s=0), (n=N-1, s=1) that exist, in that order.
        const int n_max = token.labels.back().value;
        for (int N = 0; N <= n_max + 1; ++N) {
            SectorBlock blk;
            blk.q = IrrepLabel::u1(N);
            blk.d_q = 1;
            std::vector<int> rows;
            for (int si = 0; si < 2; ++si) {
                const int n = N - system.labels[si].value;
                if (n < 0 || n > n_max) continue;
                rows.push_back(n * 2 + si);  // U(1) token sectors are 1-dim at offset n
            }
            blk.rel_dim = int(rows.size());
            blk.coupled = Matrix(map.joint_dim, blk.rel_dim);
            for (size_t nu = 0; nu < rows.size(); ++nu) blk.coupled(rows[nu], int(nu)) = 1.0;
            blk.has_intertwiner = true;
            blk.a_dag = Matrix(blk.rel_dim, 2);
            for (size_t nu = 0; nu < rows.size(); ++nu) blk.a_dag(int(nu), rows[nu] % 2) = 1.0;
            blk.ok = (blk.rel_dim == 2);
            map.blocks.push_back(std::move(blk));
        }
        return map;
    }

    if (token.kind == TokenKind::Regular) {
        const int two_j_max = token.labels.back().value;
        for (int two_J = 1; two_J <= two_j_max + 1; two_J += 2) {
            std::vector<int> branches;
            for (int two_j : {two_J - 1, two_J + 1})
                if (two_j >= 0 && two_j <= two_j_max) branches.push_back(two_j);
            map.blocks.push_back(detail::make_su2_block(map.layout, two_J, branches,
                                                        map.joint_dim,
                                                        /*exceptional=*/two_J == two_j_max + 1));
        }
        return map;
    }

    // Coherent token: a single spin j_R coupled to the qubit gives two
    // multiplicity-free sectors.  There is no relational subsystem and no
    // intertwiner; neither sector decodes perfectly.
    const int two_jr = token.coherent_two_j;
    for (int two_J : couple(two_jr, 1)) {
        SectorBlock blk;
        blk.q = IrrepLabel::su2(two_J);
        blk.d_q = two_J + 1;
        blk.rel_dim = 1;
        blk.coupled = Matrix(map.joint_dim, blk.d_q);
        for (int mi = 0; mi <= two_J; ++mi) {
            const int two_M = -two_J + 2 * mi;
            for (int si = 0; si < 2; ++si) {
                const int two_s = (si == 0) ? +1 : -1;
                const int two_m = two_M - two_s;
                if (std::abs(two_m) > two_jr) continue;
                const double cg = clebsch_gordan(two_jr, two_m, 1, two_s, two_J, two_M);
                if (cg == 0.0) continue;
                blk.coupled((two_m + two_jr) / 2 * 2 + si, mi) = cg;
            }
        }
        blk.has_intertwiner = false;
        blk.ok = false;
        map.blocks.push_back(std::move(blk));
    }
    return map;
}

// --------------------------------------------------------------------------
// encoding

// Quadrature evaluation of E(rho) = integral dg |g><g| (x) U_S rho U_S^dag.
inline Matrix encode_integral(const TokenSpec& token, const SystemSpec& system, const Matrix& rho,
                              const QuadratureRule& quad) {
    detail::check_token_system(token, system);
    if (rho.rows() != 2 || rho.cols() != 2)
        throw std::invalid_argument("encode_integral: system state must be 2x2");
    const SectorLayout layout = token_layout(token);
    const int dr = layout.total_dim;
    Matrix out(dr * 2, dr * 2);
    for (size_t k = 0; k < quad.nodes.size(); ++k) {
        const std::vector<cplx> g = orbit_state(token, quad.nodes[k]);
        const Matrix u = system.u_matrix(quad.nodes[k]);
        const Matrix v = u * rho * u.dagger();
        const double w = quad.weights[k];
        for (int t = 0; t < dr; ++t)
            for (int tp = 0; tp < dr; ++tp) {
                const cplx f = w * g[size_t(t)] * std::conj(g[size_t(tp)]);
                if (f == cplx(0)) continue;
                for (int s = 0; s < 2; ++s)
                    for (int sp = 0; sp < 2; ++sp) out(t * 2 + s, tp * 2 + sp) += f * v(s, sp);
            }
    }
    return out;
}

struct BlockEncoding {
    std::vector<Matrix> sector_states;  // E^(q)(rho), subnormalized, per map block
    Matrix assembled;                   // sum_q (I_M / d_q) (x) E^(q)(rho), on the joint space
};

namespace detail {

inline Matrix joint_product_state(const SectorMap& map, const Matrix& rho) {
    Matrix t(map.joint_dim, map.joint_dim);
    for (int a = 0; a < map.d_r; ++a)
        for (int b = 0; b < map.d_r; ++b) {
            const cplx f = map.fid.vec[size_t(a)] * std::conj(map.fid.vec[size_t(b)]);
            if (f == cplx(0)) continue;
            for (int s = 0; s < 2; ++s)
                for (int sp = 0; sp < 2; ++sp) t(a * 2 + s, b * 2 + sp) = f * rho(s, sp);
        }
    return t;
}

// Trace over the M factor of a coupled-block operator (M index major).
inline Matrix trace_collective(const Matrix& x, int d_q, int rel) {
    Matrix out(rel, rel);
    for (int nu = 0; nu < rel; ++nu)
        for (int np = 0; np < rel; ++np) {
            cplx s = 0;
            for (int mi = 0; mi < d_q; ++mi) s += x(mi * rel + nu, mi * rel + np);
            out(nu, np) = s;
        }
    return out;
}

// <e| Y |e> with the token indices contracted, leaving a system operator.
inline Matrix contract_token(const SectorMap& map, const Matrix& y) {
    Matrix out(2, 2);
    for (int s = 0; s < 2; ++s)
        for (int sp = 0; sp < 2; ++sp) {
            cplx acc = 0;
            for (int a = 0; a < map.d_r; ++a) {
                const cplx ea = std::conj(map.fid.vec[size_t(a)]);
                if (ea == cplx(0)) continue;
                for (int b = 0; b < map.d_r; ++b) {
                    const cplx eb = map.fid.vec[size_t(b)];
                    if (eb == cplx(0)) continue;
                    acc += ea * y(a * 2 + s, b * 2 + sp) * eb;
                }
            }
            out(s, sp) = acc;
        }
    return out;
}

}  // namespace detail

// Exact sector-by-sector evaluation of the encoding:
// E^(q)(rho) = Tr_M[ Pi^(q) (|e><e| (x) rho) Pi^(q) ].
inline BlockEncoding encode_block(const SectorMap& map, const Matrix& rho) {
    if (rho.rows() != 2 || rho.cols() != 2)
        throw std::invalid_argument("encode_block: system state must be 2x2");
    const Matrix joint = detail::joint_product_state(map, rho);
    BlockEncoding enc;
    enc.assembled = Matrix(map.joint_dim, map.joint_dim);
    for (const auto& blk : map.blocks) {
        const Matrix x = blk.coupled.dagger() * joint * blk.coupled;
        Matrix eq = detail::trace_collective(x, blk.d_q, blk.rel_dim);
        // Re-embed (I_M/d_q) (x) E^(q).
        Matrix block(blk.d_q * blk.rel_dim, blk.d_q * blk.rel_dim);
        for (int mi = 0; mi < blk.d_q; ++mi)
            for (int nu = 0; nu < blk.rel_dim; ++nu)
                for (int np = 0; np < blk.rel_dim; ++np)
                    block(mi * blk.rel_dim + nu, mi * blk.rel_dim + np) =
                        eq(nu, np) / double(blk.d_q);
        enc.assembled += blk.coupled * block * blk.coupled.dagger();
        enc.sector_states.push_back(std::move(eq));
    }
    return enc;
}

// p_q = Tr E^(q)(rho), the chance the message lands in total irrep q.
inline std::vector<std::pair<IrrepLabel, double>> irrep_probabilities(const SectorMap& map,
                                                                      const Matrix& rho) {
    const BlockEncoding enc = encode_block(map, rho);
    std::vector<std::pair<IrrepLabel, double>> probs;
    for (size_t i = 0; i < map.blocks.size(); ++i)
        probs.emplace_back(map.blocks[i].q, enc.sector_states[i].trace().real());
    return probs;
}

// --------------------------------------------------------------------------
// decoding

// R(rho_RS) = D_R integral dg (<g| (x) U_S^dag) rho_RS (|g> (x) U_S),
// evaluated by quadrature.  The node loop is blocked so the heavy part runs
// as matrix-matrix products.
inline Matrix decode_measure_reorient(const SectorMap& map, const Matrix& rho_rs,
                                      const QuadratureRule& quad) {
    if (rho_rs.rows() != map.joint_dim || rho_rs.cols() != map.joint_dim)
        throw std::invalid_argument("decode_measure_reorient: state dimension mismatch");
    const int dr = map.d_r;

    // w[s][s'] = (I (x) <s|) rho_RS (I (x) |s'>) as token-space matrices.
    std::array<std::array<Matrix, 2>, 2> w;
    for (int s = 0; s < 2; ++s)
        for (int sp = 0; sp < 2; ++sp) {
            w[size_t(s)][size_t(sp)] = Matrix(dr, dr);
            for (int t = 0; t < dr; ++t)
                for (int tp = 0; tp < dr; ++tp)
                    w[size_t(s)][size_t(sp)](t, tp) = rho_rs(t * 2 + s, tp * 2 + sp);
        }

    Matrix out(2, 2);
    const size_t n = quad.nodes.size();
    const size_t batch = 256;
    Matrix g_block(dr, int(batch));
    std::vector<Matrix> u_cache(batch);
    for (size_t k0 = 0; k0 < n; k0 += batch) {
        const size_t nb = std::min(batch, n - k0);
        for (size_t k = 0; k < nb; ++k) {
            const std::vector<cplx> g = orbit_state(map.token, quad.nodes[k0 + k]);
            for (int t = 0; t < dr; ++t) g_block(t, int(k)) = g[size_t(t)];
            u_cache[k] = map.system.u_matrix(quad.nodes[k0 + k]);
        }
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp) {
                Matrix prod(dr, int(batch));
                prod.map().leftCols(int(nb)) =
                    w[size_t(s)][size_t(sp)].map() * g_block.map().leftCols(int(nb));
                for (size_t k = 0; k < nb; ++k) {
                    cplx x = 0;
                    for (int t = 0; t < dr; ++t) x += std::conj(g_block(t, int(k))) * prod(t, int(k));
                    // out += w_k * U^dag X U accumulated entrywise.
                    const Matrix& u = u_cache[k];
                    const double wk = quad.weights[k0 + k] * map.d_r;
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            out(a, b) += wk * std::conj(u(s, a)) * x * u(sp, b);
                }
            }
    }
    return out;
}

inline Matrix decode_measure_reorient(const TokenSpec& token, const SystemSpec& system,
                                      const Matrix& rho_rs, const QuadratureRule& quad) {
    return decode_measure_reorient(sector_map(token, system), rho_rs, quad);
}

// Exact relational decoding R(rho_RS) = sum_q R^(q)(Tr_M[Pi rho_RS Pi]) with
// R^(q) = Tr_K[A (.) A^dag] where the intertwiner exists, and
// R^(q) = (D_R/d_q) <e| I_M (x) (.) |e> for the multiplicity-free sectors.
inline Matrix decode_relational(const SectorMap& map, const Matrix& rho_rs) {
    if (rho_rs.rows() != map.joint_dim || rho_rs.cols() != map.joint_dim)
        throw std::invalid_argument("decode_relational: state dimension mismatch");
    Matrix out(2, 2);
    for (const auto& blk : map.blocks) {
        const Matrix x =
            detail::trace_collective(blk.coupled.dagger() * rho_rs * blk.coupled, blk.d_q,
                                     blk.rel_dim);
        if (blk.has_intertwiner) {
            const Matrix y = blk.a_dag.dagger() * x * blk.a_dag;  // A X A^dag on K (x) S
            out += partial_trace(y, DimFactorization{blk.d_q, 2}, 1);
        } else {
            // x is 1x1 here; (I_M (x) x) embeds as x * Pi^(q).
            const Matrix s = detail::contract_token(map, blk.projector());
            out += (double(map.d_r) / blk.d_q) * x(0, 0) * s;
        }
    }
    return out;
}

struct PostselectionResult {
    IrrepLabel outcome;
    double probability = 0;
    bool perfect = false;
    Matrix state;  // conditional decoded state (normalized when probability > 0)
};

// Exact outcome table of the projective total-irrep measurement followed by
// the per-sector recovery.
inline std::vector<PostselectionResult> postselect_enumerate(const SectorMap& map,
                                                             const Matrix& rho_rs) {
    std::vector<PostselectionResult> results;
    for (const auto& blk : map.blocks) {
        const Matrix x =
            detail::trace_collective(blk.coupled.dagger() * rho_rs * blk.coupled, blk.d_q,
                                     blk.rel_dim);
        const double p = x.trace().real();
        Matrix state(2, 2);
        if (p > 1e-15) {
            if (blk.has_intertwiner) {
                const Matrix y = blk.a_dag.dagger() * x * blk.a_dag;
                state = partial_trace(y, DimFactorization{blk.d_q, 2}, 1) * (1.0 / p);
            } else {
                const Matrix s = detail::contract_token(map, blk.projector());
                state = (double(map.d_r) / blk.d_q) * (x(0, 0) / p) * s;
            }
        }
        results.push_back({blk.q, p, blk.ok, std::move(state)});
    }
    return results;
}

// One seeded sample of the irrep measurement.  The inverse-CDF draw keeps
// the sample sequence reproducible across platforms.
inline PostselectionResult decode_postselect(const SectorMap& map, const Matrix& rho_rs,
                                             std::uint64_t seed) {
    const auto outcomes = postselect_enumerate(map, rho_rs);
    std::mt19937_64 rng(seed);
    const double u = double(rng() >> 11) * 0x1.0p-53;
    double acc = 0;
    for (const auto& r : outcomes) {
        acc += r.probability;
        if (u < acc) return r;
    }
    return outcomes.back();
}

// Closed-form probability of perfect recovery, sum over good sectors of
// d_q^2 / D_R.
inline double p_perfect(const SectorMap& map) {
    double p = 0;
    for (const auto& blk : map.blocks)
        if (blk.ok) p += double(blk.d_q) * blk.d_q / map.d_r;
    return p;
}

// --------------------------------------------------------------------------
// effective channel and moment decomposition

enum class EffectiveMethod { Relational, Integral };

inline int default_decode_order(const SectorMap& map) {
    // Largest total irrep in play: the token's top sector coupled to the qubit.
    return default_quadrature_order(token_max_two_j(map.token) + 1);
}

// The composed qubit channel R o E.  `Relational` composes the two exact
// maps; `Integral` accumulates the covariant-average form
// R o E = integral dg p(g) U_S(g) (.) U_S(g)^dag node by node.
inline KrausChannel effective_channel(const SectorMap& map, EffectiveMethod method,
                                      int order = 0) {
    if (method == EffectiveMethod::Relational) {
        return channel_from_action(
            [&map](const Matrix& rho) {
                return decode_relational(map, encode_block(map, rho).assembled);
            },
            2, 2);
    }
    if (order <= 0) order = default_decode_order(map);
    const QuadratureRule quad = haar_quadrature(map.token.group, order);
    Matrix c(4, 4);
    for (size_t k = 0; k < quad.nodes.size(); ++k) {
        const std::vector<cplx> g = orbit_state(map.token, quad.nodes[k]);
        cplx ov = 0;
        for (size_t i = 0; i < g.size(); ++i) ov += std::conj(map.fid.vec[i]) * g[i];
        const double p = quad.weights[k] * map.d_r * std::norm(ov);
        if (p == 0.0) continue;
        const Matrix u = map.system.u_matrix(quad.nodes[k]);
        std::array<cplx, 4> v;  // vec(U), input index major
        for (int i = 0; i < 2; ++i)
            for (int a = 0; a < 2; ++a) v[size_t(i * 2 + a)] = u(a, i);
        for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s) c(r, s) += p * v[size_t(r)] * std::conj(v[size_t(s)]);
    }
    return channel_from_choi({std::move(c), 2, 2}, TpClass::TracePreserving);
}

// The twirling superoperator of the message system itself.
inline KrausChannel system_twirl(const SystemSpec& system) {
    if (system.group == GroupId::U1)
        return twirl(GroupId::U1, {{system.labels[0], 1}, {system.labels[1], 1}});
    return twirl(GroupId::SU2, {{IrrepLabel::su2(1), 1}});
}

struct MomentFit {
    double p = 0;          // weight on the twirl moment
    double identity_coef = 0;
    double residual = 0;   // Frobenius distance of the Choi to the fitted span
};

// Least-squares fit of ch onto span{Identity, Twirl} (each composed with an
// optional fixed pre-channel), solving the 2x2 Gram system directly.
inline MomentFit fit_moment_mixture(const KrausChannel& ch, const SystemSpec& system,
                                    const KrausChannel* pre = nullptr) {
    if (ch.in_dim != 2 || ch.out_dim != 2)
        throw std::invalid_argument("fit_moment_mixture: expects a qubit channel");
    KrausChannel b1 = KrausChannel::identity(2);
    KrausChannel b2 = system_twirl(system);
    if (pre) {
        b1 = compose(b1, *pre);
        b2 = compose(b2, *pre);
    }
    const Matrix c = choi(ch).mat;
    const Matrix c1 = choi(b1).mat;
    const Matrix c2 = choi(b2).mat;
    auto inner = [](const Matrix& a, const Matrix& b) {
        return (a.dagger() * b).trace().real();
    };
    const double g11 = inner(c1, c1), g12 = inner(c1, c2), g22 = inner(c2, c2);
    const double det = g11 * g22 - g12 * g12;
    if (std::abs(det) < 1e-12)
        throw std::logic_error("fit_moment_mixture: degenerate moment basis");
    const double r1 = inner(c1, c), r2 = inner(c2, c);
    MomentFit fit;
    fit.identity_coef = (g22 * r1 - g12 * r2) / det;
    fit.p = (g11 * r2 - g12 * r1) / det;
    fit.residual = (c - fit.identity_coef * c1 - fit.p * c2).frobenius_norm();
    return fit;
}

// --------------------------------------------------------------------------
// alternative Kraus form of the encoding

// E in Kraus form with K_{q,m,mu} = D_R^{-1/2} |q,m> (x) A^(q)dag |q,mu>,
// one operator per sector, collective index and Stinespring index.
inline KrausChannel encode_channel_kraus(const SectorMap& map) {
    KrausChannel ch{2, map.joint_dim, TpClass::TracePreserving, {}};
    const double scale = 1.0 / std::sqrt(double(map.d_r));
    for (const auto& blk : map.blocks) {
        if (!blk.has_intertwiner)
            throw unsupported_operation("encode_channel_kraus: sector lacks an intertwiner");
        for (int mi = 0; mi < blk.d_q; ++mi)
            for (int mu = 0; mu < blk.d_q; ++mu) {
                Matrix k(map.joint_dim, 2);
                for (int si = 0; si < 2; ++si) {
                    // coupled column (mi, nu) carries |q,m> (x) |nu>.
                    for (int nu = 0; nu < blk.rel_dim; ++nu) {
                        const cplx amp = blk.a_dag(nu, mu * 2 + si);
                        if (amp == cplx(0)) continue;
                        for (int row = 0; row < map.joint_dim; ++row)
                            k(row, si) += scale * amp * blk.coupled(row, mi * blk.rel_dim + nu);
                    }
                }
                ch.kraus.push_back(std::move(k));
            }
    }
    return ch;
}

}  // namespace qrf

#endif
