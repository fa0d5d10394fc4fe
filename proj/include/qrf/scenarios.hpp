#ifndef QRF_SCENARIOS_HPP
#define QRF_SCENARIOS_HPP

// Closed-form references for the three worked reference-frame scenarios:
// a phase reference (U(1)), a Cartesian frame (SU(2) regular token) and a
// direction indicator (SU(2)-coherent token).  Each reference assembles the
// known effective channel from {Identity, Twirl, Dephasing} building blocks
// and carries the sector probabilities and the perfect-recovery probability,
// serving as the oracle the generic codec is verified against.

#include <optional>
#include <sstream>

#include "qrf/codec.hpp"

namespace qrf {

struct ScenarioId {
    enum class Kind { Phase, Cartesian, Direction };
    Kind kind;
    int size;  // N_R (phase), j_R (cartesian), two_j_R (direction)

    static ScenarioId phase(int n_r) { return {Kind::Phase, n_r}; }
    static ScenarioId cartesian(int j_r) { return {Kind::Cartesian, j_r}; }
    static ScenarioId direction(int two_j_r) { return {Kind::Direction, two_j_r}; }

    std::string name() const {
        switch (kind) {
            case Kind::Phase: return "phase";
            case Kind::Cartesian: return "cartesian";
            default: return "direction";
        }
    }
};

// Sector probability as a linear form in the diagonal of the input state:
// p = w0 * rho_00 + w1 * rho_11.
struct SectorProbForm {
    double w0 = 0, w1 = 0;
    double eval(const Matrix& rho) const {
        return w0 * rho(0, 0).real() + w1 * rho(1, 1).real();
    }
};

struct ClosedFormReference {
    KrausChannel channel;  // full effective channel, pre-channel included
    double mixing_p = 0;
    std::vector<std::pair<IrrepLabel, SectorProbForm>> sector_probs;
    double p_perfect = 0;
    std::optional<KrausChannel> pre_channel;
    std::vector<std::pair<IrrepLabel, Matrix>> repreparation;  // direction only
};

inline TokenSpec scenario_token(const ScenarioId& id) {
    switch (id.kind) {
        case ScenarioId::Kind::Phase: return TokenSpec::u1_regular(id.size);
        case ScenarioId::Kind::Cartesian: return TokenSpec::su2_regular(id.size);
        default: return TokenSpec::su2_coherent(id.size);
    }
}

inline SystemSpec scenario_system(const ScenarioId& id) {
    return id.kind == ScenarioId::Kind::Phase ? SystemSpec::u1_qubit() : SystemSpec::su2_qubit();
}

// Partial dephasing: (N_R/(N_R+1)) I + (1/(N_R+1)) G with G the U(1) twirl.
inline ClosedFormReference phase_reference(int n_r) {
    if (n_r < 1) throw std::invalid_argument("phase_reference: N_R must be >= 1");
    ClosedFormReference ref;
    ref.mixing_p = 1.0 / (n_r + 1);
    ref.channel = mix(1.0 - ref.mixing_p, KrausChannel::identity(2), ref.mixing_p,
                      system_twirl(SystemSpec::u1_qubit()));
    ref.p_perfect = double(n_r) / (n_r + 1);
    const double w = 1.0 / (n_r + 1);
    ref.sector_probs.emplace_back(IrrepLabel::u1(0), SectorProbForm{w, 0});
    for (int n = 1; n <= n_r; ++n)
        ref.sector_probs.emplace_back(IrrepLabel::u1(n), SectorProbForm{w, w});
    ref.sector_probs.emplace_back(IrrepLabel::u1(n_r + 1), SectorProbForm{0, w});
    return ref;
}

// Depolarizing mixture: (j_R/(j_R+1)) I + (1/(j_R+1)) G with G the full
// SU(2) twirl; sector probabilities (2J+1)^2/D_R below the exceptional
// irrep and (2j_R+1)(j_R+1)/D_R there.
inline ClosedFormReference cartesian_frame(int j_r) {
    if (j_r < 1) throw std::invalid_argument("cartesian_frame: j_R must be a positive integer");
    ClosedFormReference ref;
    ref.mixing_p = 1.0 / (j_r + 1);
    ref.channel = mix(1.0 - ref.mixing_p, KrausChannel::identity(2), ref.mixing_p,
                      system_twirl(SystemSpec::su2_qubit()));
    ref.p_perfect = 2.0 * j_r / (2 * j_r + 3);
    const double d_r = double(2 * j_r + 1) * (2 * j_r + 3) * (j_r + 1) / 3.0;
    for (int two_J = 1; two_J <= 2 * j_r + 1; two_J += 2) {
        const double p = (two_J < 2 * j_r + 1)
                             ? double(two_J + 1) * (two_J + 1) / d_r
                             : double(2 * j_r + 1) * (j_r + 1) / d_r;
        ref.sector_probs.emplace_back(IrrepLabel::su2(two_J), SectorProbForm{p, p});
    }
    return ref;
}

// z-axis dephasing, the channel left over when only the z direction is
// shared.
inline KrausChannel z_dephasing() {
    Matrix k0(2, 2), k1(2, 2);
    k0(0, 0) = 1.0;
    k1(1, 1) = 1.0;
    return {2, 2, TpClass::TracePreserving, {k0, k1}};
}

// ((j_R/(j_R+1)) I + (1/(j_R+1)) G) o U with U the z-dephasing; the sector
// scalars and repreparation states of the relational decomposition ride
// along.
inline ClosedFormReference direction_indicator(int two_j_r) {
    if (two_j_r < 1) throw std::invalid_argument("direction_indicator: two_j_R must be >= 1");
    ClosedFormReference ref;
    const double jr = two_j_r / 2.0;
    ref.mixing_p = 1.0 / (jr + 1);
    ref.pre_channel = z_dephasing();
    ref.channel = compose(mix(1.0 - ref.mixing_p, KrausChannel::identity(2), ref.mixing_p,
                              system_twirl(SystemSpec::su2_qubit())),
                          *ref.pre_channel);
    ref.p_perfect = 0.0;

    // E^(J) maps density operators to scalars.
    const double d = two_j_r + 1;
    ref.sector_probs.emplace_back(IrrepLabel::su2(two_j_r - 1),
                                  SectorProbForm{0, two_j_r / d});
    ref.sector_probs.emplace_back(IrrepLabel::su2(two_j_r + 1), SectorProbForm{1, 1 / d});

    Matrix lower(2, 2), upper(2, 2);
    lower(1, 1) = 1.0;  // J = j_R - 1/2 reprepares |1><1|
    upper(0, 0) = (two_j_r + 1) / (two_j_r + 2.0);
    upper(1, 1) = 1.0 / (two_j_r + 2.0);
    ref.repreparation.emplace_back(IrrepLabel::su2(two_j_r - 1), lower);
    ref.repreparation.emplace_back(IrrepLabel::su2(two_j_r + 1), upper);
    return ref;
}

// The posterior-argmax decoder for the direction indicator: measure the
// total irrep on the joint space, reprepare |0><0| on the upper outcome and
// |1><1| on the lower one.
inline KrausChannel direction_optimal_decoder(int two_j_r) {
    if (two_j_r < 1) throw std::invalid_argument("direction_optimal_decoder: two_j_R must be >= 1");
    const SectorMap map = sector_map(TokenSpec::su2_coherent(two_j_r), SystemSpec::su2_qubit());
    KrausChannel ch{map.joint_dim, 2, TpClass::TracePreserving, {}};
    for (const auto& blk : map.blocks) {
        const int target = (blk.q.value == two_j_r + 1) ? 0 : 1;
        for (int col = 0; col < blk.coupled.cols(); ++col) {
            Matrix k(2, map.joint_dim);
            for (int row = 0; row < map.joint_dim; ++row)
                k(target, row) = std::conj(blk.coupled(row, col));
            ch.kraus.push_back(std::move(k));
        }
    }
    return ch;
}

// --------------------------------------------------------------------------
// Bloch picture helpers

inline std::array<Matrix, 3> pauli_matrices() {
    Matrix x(2, 2), y(2, 2), z(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    y(0, 1) = cplx(0, -1);
    y(1, 0) = cplx(0, 1);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return {x, y, z};
}

struct BlochMap {
    std::array<std::array<double, 3>, 3> scale{};  // ch(sigma_b) component on sigma_a
    std::array<double, 3> shift{};                 // ch(I) component on sigma_a
};

inline BlochMap bloch_map(const KrausChannel& ch) {
    if (ch.in_dim != 2 || ch.out_dim != 2)
        throw std::invalid_argument("bloch_map: expects a qubit channel");
    const auto sigma = pauli_matrices();
    BlochMap bm;
    for (int a = 0; a < 3; ++a) {
        bm.shift[size_t(a)] =
            0.5 * (sigma[size_t(a)] * apply(ch, Matrix::identity(2))).trace().real();
        for (int b = 0; b < 3; ++b)
            bm.scale[size_t(a)][size_t(b)] =
                0.5 * (sigma[size_t(a)] * apply(ch, sigma[size_t(b)])).trace().real();
    }
    return bm;
}

// --------------------------------------------------------------------------
// verification against the closed forms

struct VerifyCheck {
    std::string name;
    double value = 0;
    double tol = 0;
    bool pass = false;
};

struct VerifyReport {
    ScenarioId scenario;
    std::vector<VerifyCheck> checks;
    bool pass = true;

    void add(const std::string& name, double value, double tol) {
        checks.push_back({name, value, tol, value <= tol});
        pass = pass && checks.back().pass;
    }
};

inline ClosedFormReference closed_form(const ScenarioId& id) {
    switch (id.kind) {
        case ScenarioId::Kind::Phase: return phase_reference(id.size);
        case ScenarioId::Kind::Cartesian: return cartesian_frame(id.size);
        default: return direction_indicator(id.size);
    }
}

inline int scenario_integral_order(const ScenarioId& id) {
    return id.kind == ScenarioId::Kind::Direction ? 2 * id.size + 16 : 4 * id.size + 16;
}

// Runs the generic codec, both decode implementations, against the scenario's
// closed forms.
inline VerifyReport verify(const ScenarioId& id, double tol) {
    if (tol <= 0) throw std::invalid_argument("verify: tolerance must be positive");
    VerifyReport report{id, {}, true};
    const ClosedFormReference ref = closed_form(id);
    const SectorMap map = sector_map(scenario_token(id), scenario_system(id));

    const KrausChannel relational = effective_channel(map, EffectiveMethod::Relational);
    report.add("relational_channel_choi_distance", channel_distance(relational, ref.channel), tol);

    const KrausChannel integral =
        effective_channel(map, EffectiveMethod::Integral, scenario_integral_order(id));
    report.add("integral_channel_choi_distance", channel_distance(integral, ref.channel),
               std::max(tol, 1e-6));

    // Sector probabilities on a small family of states.
    std::vector<Matrix> states = {pure_state({1, 0}), pure_state({0, 1}),
                                  pure_state({M_SQRT1_2, M_SQRT1_2})};
    std::mt19937_64 rng(20090403);
    auto unit = [&rng] {
        std::normal_distribution<double> n(0, 1);
        cplx a(n(rng), n(rng)), b(n(rng), n(rng));
        const double norm = std::sqrt(std::norm(a) + std::norm(b));
        return std::vector<cplx>{a / norm, b / norm};
    };
    for (int k = 0; k < 3; ++k) states.push_back(pure_state(unit()));
    double prob_dev = 0;
    for (const auto& rho : states) {
        const auto probs = irrep_probabilities(map, rho);
        if (probs.size() != ref.sector_probs.size())
            throw std::logic_error("verify: sector count mismatch against closed form");
        for (size_t i = 0; i < probs.size(); ++i) {
            if (!(probs[i].first == ref.sector_probs[i].first))
                throw std::logic_error("verify: sector labels mismatch against closed form");
            prob_dev = std::max(prob_dev,
                                std::abs(probs[i].second - ref.sector_probs[i].second.eval(rho)));
        }
    }
    report.add("sector_probability_deviation", prob_dev, tol);

    report.add("p_perfect_deviation", std::abs(p_perfect(map) - ref.p_perfect), tol);

    // The two decode implementations must define one and the same map.
    const QuadratureRule quad = haar_quadrature(map.token.group, default_decode_order(map));
    const KrausChannel measured = channel_from_action(
        [&](const Matrix& rho) {
            return decode_measure_reorient(map, encode_block(map, rho).assembled, quad);
        },
        2, 2);
    report.add("dual_implementation_choi_distance", channel_distance(measured, relational),
               std::max(tol, 1e-6));

    const KrausChannel* pre = ref.pre_channel ? &*ref.pre_channel : nullptr;
    const MomentFit fit = fit_moment_mixture(relational, map.system, pre);
    report.add("mixing_p_deviation", std::abs(fit.p - ref.mixing_p), std::max(tol, 1e-8));
    report.add("moment_fit_residual", fit.residual, std::max(tol, 1e-8));
    return report;
}

}  // namespace qrf

#endif
