// qrf: build and verify the effective channels induced by communicating
// with a bounded-size quantum reference frame.
//
// Subcommands:
//   channel     write a scenario's effective channel as JSON
//   verify      run the closed-form verification grid
//   sweep       tabulate a metric against token size (CSV or JSON)
//   postselect  sample the post-selective sector measurement
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qrf/parallel.hpp"
#include "qrf/serialize.hpp"

using namespace qrf;

namespace {

struct RunConfig {
    std::string command;
    std::string scenario;
    int nr = -1;
    int jr = -1;
    int two_jr = -1;
    std::string method = "relational";
    int order = 0;  // 0: default order
    double tol = 1e-8;
    std::uint64_t seed = 12345;
    std::string out;
    std::string format = "json";
    std::string metric = "mixing_p";
    int from = 0;
    int to = 0;  // 0: scenario default grid
    long samples = 100000;
    std::string input = "random";
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw std::runtime_error("cannot open output file: " + cfg.out);
    f << text;
}

ScenarioId::Kind scenario_kind(const std::string& name) {
    if (name == "phase") return ScenarioId::Kind::Phase;
    if (name == "cartesian") return ScenarioId::Kind::Cartesian;
    if (name == "direction") return ScenarioId::Kind::Direction;
    throw UsageError("unknown scenario '" + name + "' (expected phase|cartesian|direction)");
}

int scenario_size(const RunConfig& cfg, ScenarioId::Kind kind) {
    switch (kind) {
        case ScenarioId::Kind::Phase:
            if (cfg.nr < 1) throw UsageError("phase scenario requires --nr >= 1");
            return cfg.nr;
        case ScenarioId::Kind::Cartesian:
            if (cfg.jr < 1) throw UsageError("cartesian scenario requires --jr >= 1");
            return cfg.jr;
        default:
            if (cfg.two_jr < 1) throw UsageError("direction scenario requires --two-jr >= 1");
            return cfg.two_jr;
    }
}

ScenarioId scenario_id(const RunConfig& cfg) {
    if (cfg.scenario.empty()) throw UsageError("--scenario is required");
    const auto kind = scenario_kind(cfg.scenario);
    return {kind, scenario_size(cfg, kind)};
}

std::pair<int, int> default_grid(ScenarioId::Kind kind) {
    switch (kind) {
        case ScenarioId::Kind::Phase: return {1, 8};
        case ScenarioId::Kind::Cartesian: return {1, 4};
        default: return {1, 8};
    }
}

EffectiveMethod method_of(const RunConfig& cfg) {
    if (cfg.method == "relational") return EffectiveMethod::Relational;
    if (cfg.method == "integral") return EffectiveMethod::Integral;
    throw UsageError("unknown method '" + cfg.method + "' (expected relational|integral)");
}

// ---------------------------------------------------------------------------

int cmd_channel(const RunConfig& cfg) {
    const ScenarioId id = scenario_id(cfg);
    const SectorMap map = sector_map(scenario_token(id), scenario_system(id));
    const KrausChannel ch = effective_channel(map, method_of(cfg), cfg.order);

    const ClosedFormReference ref = closed_form(id);
    const KrausChannel* pre = ref.pre_channel ? &*ref.pre_channel : nullptr;
    const MomentFit fit = fit_moment_mixture(ch, map.system, pre);
    std::cout << "mixing_p = " << format_double(fit.p) << "\n";
    std::cout << "residual = " << format_double(fit.residual) << "\n";

    json j = to_json(ch);
    j["scenario"] = id.name();
    j["size"] = id.size;
    j["method"] = cfg.method;
    write_output(cfg, j.dump(2));
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    std::vector<ScenarioId> points;
    auto add_grid = [&](ScenarioId::Kind kind, int explicit_size) {
        if (explicit_size >= 1) {
            points.push_back({kind, explicit_size});
            return;
        }
        const auto [lo, hi] = default_grid(kind);
        for (int s = lo; s <= hi; ++s) points.push_back({kind, s});
    };
    if (cfg.scenario.empty()) {
        add_grid(ScenarioId::Kind::Phase, cfg.nr);
        add_grid(ScenarioId::Kind::Cartesian, cfg.jr);
        add_grid(ScenarioId::Kind::Direction, cfg.two_jr);
    } else {
        const auto kind = scenario_kind(cfg.scenario);
        const int size = kind == ScenarioId::Kind::Phase      ? cfg.nr
                         : kind == ScenarioId::Kind::Cartesian ? cfg.jr
                                                               : cfg.two_jr;
        add_grid(kind, size);
    }

    std::vector<VerifyReport> reports(points.size());
    parallel_for(points.size(), [&](size_t i) { reports[i] = verify(points[i], cfg.tol); });

    bool all_pass = true;
    json out = json::array();
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        std::cout << "verify " << r.scenario.name() << " size=" << r.scenario.size << ": "
                  << (r.pass ? "PASS" : "FAIL") << "\n";
        out.push_back(to_json(r));
    }
    if (!cfg.out.empty()) write_output(cfg, out.dump(2));
    return all_pass ? 0 : 1;
}

double sweep_metric(const RunConfig& cfg, const ScenarioId& id) {
    const ClosedFormReference ref = closed_form(id);
    if (cfg.metric == "p_perfect") return ref.p_perfect;

    if (cfg.method == "integral") {
        const SectorMap map = sector_map(scenario_token(id), scenario_system(id));
        const KrausChannel ch = effective_channel(map, EffectiveMethod::Integral, cfg.order);
        if (cfg.metric == "entanglement_fidelity") return entanglement_fidelity(ch);
        const KrausChannel* pre = ref.pre_channel ? &*ref.pre_channel : nullptr;
        return fit_moment_mixture(ch, map.system, pre).p;
    }
    if (cfg.metric == "entanglement_fidelity") return entanglement_fidelity(ref.channel);
    if (cfg.metric == "mixing_p") return ref.mixing_p;
    throw UsageError("unknown metric '" + cfg.metric +
                     "' (expected mixing_p|entanglement_fidelity|p_perfect)");
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.scenario.empty()) throw UsageError("--scenario is required");
    const auto kind = scenario_kind(cfg.scenario);
    if (cfg.metric != "mixing_p" && cfg.metric != "entanglement_fidelity" &&
        cfg.metric != "p_perfect")
        throw UsageError("unknown metric '" + cfg.metric + "'");
    auto [lo, hi] = default_grid(kind);
    if (cfg.from >= 1) lo = cfg.from;
    if (cfg.to >= 1) hi = cfg.to;
    if (hi < lo) throw UsageError("empty sweep range");

    std::vector<int> sizes;
    for (int s = lo; s <= hi; ++s) sizes.push_back(s);
    std::vector<double> values(sizes.size());
    parallel_for(sizes.size(), [&](size_t i) {
        values[i] = sweep_metric(cfg, ScenarioId{kind, sizes[i]});
    });

    if (cfg.format == "csv") {
        std::string text = "size,metric_value\n";
        for (size_t i = 0; i < sizes.size(); ++i)
            text += std::to_string(sizes[i]) + "," + format_double(values[i]) + "\n";
        write_output(cfg, text);
    } else {
        json rows = json::array();
        for (size_t i = 0; i < sizes.size(); ++i)
            rows.push_back({{"size", sizes[i]}, {"metric_value", values[i]}});
        write_output(cfg, json{{"scenario", cfg.scenario}, {"metric", cfg.metric}, {"rows", rows}}
                              .dump(2));
    }
    return 0;
}

int cmd_postselect(const RunConfig& cfg) {
    const ScenarioId id = scenario_id(cfg);
    const SectorMap map = sector_map(scenario_token(id), scenario_system(id));

    std::mt19937_64 rng(cfg.seed);
    Matrix rho(2, 2);
    if (cfg.input == "zero") rho = pure_state({1, 0});
    else if (cfg.input == "one") rho = pure_state({0, 1});
    else if (cfg.input == "plus") rho = pure_state({M_SQRT1_2, M_SQRT1_2});
    else if (cfg.input == "random") {
        std::normal_distribution<double> n(0, 1);
        cplx a(n(rng), n(rng)), b(n(rng), n(rng));
        const double norm = std::sqrt(std::norm(a) + std::norm(b));
        rho = pure_state({a / norm, b / norm});
    } else {
        throw UsageError("unknown input '" + cfg.input + "' (expected zero|one|plus|random)");
    }

    const auto outcomes = postselect_enumerate(map, encode_block(map, rho).assembled);
    std::vector<double> cdf;
    double acc = 0;
    for (const auto& r : outcomes) cdf.push_back(acc += r.probability);

    std::vector<long> counts(outcomes.size(), 0);
    long perfect = 0;
    std::string log = "sample,outcome,perfect\n";
    const bool keep_log = !cfg.out.empty();
    for (long s = 0; s < cfg.samples; ++s) {
        const double u = double(rng() >> 11) * 0x1.0p-53;
        size_t pick = outcomes.size() - 1;
        for (size_t i = 0; i < cdf.size(); ++i)
            if (u < cdf[i]) {
                pick = i;
                break;
            }
        ++counts[pick];
        if (outcomes[pick].perfect) ++perfect;
        if (keep_log)
            log += std::to_string(s) + "," + std::to_string(outcomes[pick].outcome.value) + "," +
                   (outcomes[pick].perfect ? "1" : "0") + "\n";
    }

    const double rate = double(perfect) / double(cfg.samples);
    const double stderr_ = std::sqrt(std::max(rate * (1 - rate), 1e-300) / double(cfg.samples));
    std::cout << "samples = " << cfg.samples << "\n";
    std::cout << "empirical_perfect_rate = " << format_double(rate) << "\n";
    std::cout << "standard_error = " << format_double(stderr_) << "\n";
    std::cout << "closed_form_p_perfect = " << format_double(p_perfect(map)) << "\n";
    for (size_t i = 0; i < outcomes.size(); ++i)
        std::cout << "outcome " << outcomes[i].outcome.value << ": count = " << counts[i]
                  << ", probability = " << format_double(outcomes[i].probability) << "\n";
    if (keep_log) write_output(cfg, log);
    return 0;
}

void load_json_config(const std::string& path, RunConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open --json-config file: " + path);
    json j;
    f >> j;
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("command", cfg.command);
    get("scenario", cfg.scenario);
    get("nr", cfg.nr);
    get("jr", cfg.jr);
    get("two_jr", cfg.two_jr);
    get("method", cfg.method);
    get("order", cfg.order);
    get("tol", cfg.tol);
    get("seed", cfg.seed);
    get("out", cfg.out);
    get("format", cfg.format);
    get("metric", cfg.metric);
    get("from", cfg.from);
    get("to", cfg.to);
    get("samples", cfg.samples);
    get("input", cfg.input);
}

int dispatch(const RunConfig& cfg) {
    if (cfg.tol <= 0) throw UsageError("--tol must be positive");
    if (cfg.order < 0) throw UsageError("--order must be >= 1");
    if (cfg.samples < 1) throw UsageError("--samples must be >= 1");
    if (cfg.format != "json" && cfg.format != "csv")
        throw UsageError("unknown format '" + cfg.format + "'");
    if (cfg.command == "channel") return cmd_channel(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    if (cfg.command == "postselect") return cmd_postselect(cfg);
    throw UsageError("no subcommand given (expected channel|verify|sweep|postselect)");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string json_config;

    CLI::App app{"quantum reference frame channel toolkit"};
    app.require_subcommand(0, 1);
    app.add_option("--json-config", json_config, "read the full run configuration from a JSON file");

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--scenario", cfg.scenario, "phase|cartesian|direction");
        sub->add_option("--nr", cfg.nr, "phase token size N_R");
        sub->add_option("--jr", cfg.jr, "cartesian token size j_R (integer)");
        sub->add_option("--two-jr", cfg.two_jr, "direction token size 2 j_R");
        sub->add_option("--method", cfg.method, "relational|integral");
        sub->add_option("--order", cfg.order, "quadrature order override");
        sub->add_option("--tol", cfg.tol, "verification tolerance");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--out", cfg.out, "output file path");
        sub->add_option("--format", cfg.format, "json|csv");
    };

    CLI::App* channel = app.add_subcommand("channel", "emit a scenario's effective channel");
    add_common(channel);
    CLI::App* verify_cmd = app.add_subcommand("verify", "verify the codec against closed forms");
    add_common(verify_cmd);
    CLI::App* sweep = app.add_subcommand("sweep", "tabulate a metric against token size");
    add_common(sweep);
    sweep->add_option("--metric", cfg.metric, "mixing_p|entanglement_fidelity|p_perfect");
    sweep->add_option("--from", cfg.from, "first size");
    sweep->add_option("--to", cfg.to, "last size");
    CLI::App* post = app.add_subcommand("postselect", "sample the sector measurement");
    add_common(post);
    post->add_option("--samples", cfg.samples, "number of samples");
    post->add_option("--input", cfg.input, "zero|one|plus|random");

    try {
        app.parse(argc, argv);
        for (CLI::App* sub : {channel, verify_cmd, sweep, post})
            if (sub->parsed()) cfg.command = sub->get_name();
        if (!json_config.empty()) load_json_config(json_config, cfg);
        return dispatch(cfg);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
