#ifndef QRF_SERIALIZE_HPP
#define QRF_SERIALIZE_HPP

// JSON wire formats.  Doubles are emitted by nlohmann::json with
// shortest-round-trip formatting, so every numeric field survives a
// serialize/parse cycle bit-exactly.
//
//   channel: {in_dim, out_dim, tp_class, kraus: [[[re,im],...],...]}
//            (row-major entries per operator)
//   token:   {group, kind, labels, two_j (coherent), vec: [[re,im],...]}
//   report:  {scenario, params, checks: [{name, value, tol, pass}]}

#include <nlohmann/json.hpp>

#include "qrf/scenarios.hpp"

namespace qrf {

using json = nlohmann::json;

inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            rows.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return rows;
}

inline Matrix matrix_from_json(const json& entries, int rows, int cols) {
    if (int(entries.size()) != rows * cols)
        throw std::invalid_argument("matrix_from_json: entry count mismatch");
    Matrix m(rows, cols);
    int k = 0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j, ++k)
            m(i, j) = cplx(entries[size_t(k)][0].get<double>(), entries[size_t(k)][1].get<double>());
    return m;
}

inline json to_json(const KrausChannel& ch) {
    json j;
    j["in_dim"] = ch.in_dim;
    j["out_dim"] = ch.out_dim;
    j["tp_class"] =
        ch.tp_class == TpClass::TracePreserving ? "trace-preserving" : "trace-decreasing";
    json ops = json::array();
    for (const auto& k : ch.kraus) ops.push_back(to_json(k));
    j["kraus"] = std::move(ops);
    return j;
}

inline KrausChannel channel_from_json(const json& j) {
    KrausChannel ch;
    ch.in_dim = j.at("in_dim").get<int>();
    ch.out_dim = j.at("out_dim").get<int>();
    const std::string tp = j.at("tp_class").get<std::string>();
    if (tp == "trace-preserving") ch.tp_class = TpClass::TracePreserving;
    else if (tp == "trace-decreasing") ch.tp_class = TpClass::TraceDecreasing;
    else throw std::invalid_argument("channel_from_json: unknown tp_class");
    for (const auto& op : j.at("kraus"))
        ch.kraus.push_back(matrix_from_json(op, ch.out_dim, ch.in_dim));
    return ch;
}

inline json to_json(const TokenSpec& spec, const FiducialState& e) {
    json j;
    j["group"] = group_name(spec.group);
    j["kind"] = spec.kind == TokenKind::Regular ? "regular" : "coherent";
    if (spec.kind == TokenKind::Regular) {
        json labels = json::array();
        for (const auto& q : spec.labels) labels.push_back(q.value);
        j["labels"] = std::move(labels);
    } else {
        j["two_j"] = spec.coherent_two_j;
    }
    json vec = json::array();
    for (const auto& a : e.vec) vec.push_back(json::array({a.real(), a.imag()}));
    j["vec"] = std::move(vec);
    return j;
}

inline json to_json(const VerifyReport& report) {
    json j;
    j["scenario"] = report.scenario.name();
    j["params"] = {{report.scenario.kind == ScenarioId::Kind::Phase      ? "nr"
                    : report.scenario.kind == ScenarioId::Kind::Cartesian ? "jr"
                                                                          : "two_jr",
                    report.scenario.size}};
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass}});
    j["checks"] = std::move(checks);
    j["pass"] = report.pass;
    return j;
}

// 17 significant digits: the shortest representation that always
// round-trips a double.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace qrf

#endif
