#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geomtail/chernoff.hpp"
#include "geomtail/exact_oracle.hpp"
#include "geomtail/fitness_levels.hpp"
#include "geomtail/geometric_sum.hpp"
#include "geomtail/onemax.hpp"
#include "geomtail/simulator.hpp"
#include "geomtail/tail_bounds.hpp"

namespace geomtail::harness {

inline constexpr const char* kVersion = "1.0.0";

// Invalid configuration, CLI input, or spec file. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };
enum class Process { rls_onemax, level_chain, coupon_collector };
enum class Tail { upper, lower };

constexpr const char* to_string(Process p) noexcept {
    switch (p) {
        case Process::rls_onemax: return "rls-onemax";
        case Process::level_chain: return "level-chain";
        default: return "coupon-collector";
    }
}

constexpr const char* to_string(Tail t) noexcept {
    return t == Tail::upper ? "upper" : "lower";
}

inline Process process_from_string(const std::string& name) {
    if (name == "rls-onemax") return Process::rls_onemax;
    if (name == "level-chain") return Process::level_chain;
    if (name == "coupon-collector") return Process::coupon_collector;
    throw ConfigError("unknown process '" + name +
                      "' (expected rls-onemax, level-chain, or coupon-collector)");
}

inline Tail tail_from_string(const std::string& name) {
    if (name == "upper") return Tail::upper;
    if (name == "lower") return Tail::lower;
    throw ConfigError("unknown tail '" + name + "' (expected upper or lower)");
}

inline OutputFormat format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

// Round-trip-exact float rendering for CSV; %.17g preserves every double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// One simulation or verification request. Fields not applying to the chosen
// process stay at their defaults and are rejected by validate() if set.
struct ExperimentConfig {
    Process process = Process::rls_onemax;
    std::int64_t n = 0;
    std::optional<std::int64_t> init_level;  // fixed start level; empty = uniform init (rls)
    std::vector<double> level_probs;         // level-chain only
    std::int64_t start_level = 0;            // level-chain only
    std::uint64_t replications = 1;
    std::optional<std::uint64_t> master_seed;
    std::vector<double> grid;  // deviation grid for verify
    bool grid_is_r = false;    // grid entries are r; thresholds use delta = r * n
    Tail tail = Tail::upper;
    OutputFormat format = OutputFormat::csv;
    int workers = 1;
    std::uint64_t iteration_cap = kDefaultIterationCap;

    void validate(bool needs_grid) const {
        if (replications < 1) throw ConfigError("replications must be >= 1");
        if (!master_seed)
            throw ConfigError("seed not set; pass --seed or the config key \"seed\"");
        if (workers < 1) throw ConfigError("workers must be >= 1");
        if (iteration_cap < 1) throw ConfigError("cap must be >= 1");
        if (process == Process::level_chain) {
            if (level_probs.empty())
                throw ConfigError("process level-chain needs a nonempty probs list");
            if (start_level < 0) throw ConfigError("start_level must be >= 0");
            if (init_level)
                throw ConfigError("init level applies only to rls-onemax and coupon-collector");
            if (grid_is_r)
                throw ConfigError("an r grid needs a problem size n; level-chain has none");
        } else {
            if (n < 1) throw ConfigError("n must be >= 1 for process " +
                                         std::string(to_string(process)));
            if (!level_probs.empty())
                throw ConfigError("probs applies only to process level-chain");
            if (init_level && (*init_level < 0 || *init_level > n))
                throw ConfigError("init level " + std::to_string(*init_level) + " outside [0, " +
                                  std::to_string(n) + "]");
        }
        if (needs_grid) {
            if (grid.empty()) throw ConfigError("verification needs a nonempty deviation grid");
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (!(grid[i] >= 0.0))
                    throw ConfigError("grid values must be >= 0; entry " + std::to_string(i) +
                                      " is " + format_double(grid[i]));
                if (i > 0 && !(grid[i] > grid[i - 1]))
                    throw ConfigError("grid values must be strictly increasing");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Input parsing

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    for (;;) {
        const std::size_t end = text.find(sep, begin);
        parts.push_back(text.substr(begin, end - begin));
        if (end == std::string::npos) return parts;
        begin = end + 1;
    }
}

inline double parse_double(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("cannot parse ") + what + " '" + text + "' as a number");
    }
}

inline std::int64_t parse_int(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("cannot parse ") + what + " '" + text + "' as an integer");
    }
}

inline std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> values;
    for (const std::string& part : split(text, ','))
        values.push_back(parse_double(part, what));
    return values;
}

// "onemax:n:k" generator strings.
inline GeometricSumSpec onemax_spec_from_generator(const std::string& source) {
    const std::vector<std::string> parts = split(source, ':');
    if (parts.size() != 3)
        throw ConfigError("generator '" + source + "' malformed; expected onemax:n:k");
    const std::int64_t n = parse_int(parts[1], "n");
    const std::int64_t k = parse_int(parts[2], "k");
    try {
        return onemax_partition(n, k).spec();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

namespace detail_json {

using json = nlohmann::json;

inline void require_known_keys(const json& j, std::initializer_list<const char*> allowed,
                               const char* where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError(std::string(where) + ": unknown key \"" + item.key() + "\"");
    }
}

inline void require_schema_1(const json& j, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": top level must be an object");
    if (!j.contains("schema") || !j["schema"].is_number_integer() ||
        j["schema"].get<std::int64_t>() != 1)
        throw ConfigError(std::string(where) + ": missing or unsupported \"schema\" (expected 1)");
}

inline std::int64_t get_int(const json& j, const char* key, const char* where) {
    if (!j[key].is_number_integer())
        throw ConfigError(std::string(where) + ": \"" + key + "\" must be an integer");
    return j[key].get<std::int64_t>();
}

inline std::uint64_t get_uint(const json& j, const char* key, const char* where) {
    const json& v = j[key];
    if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)))
        throw ConfigError(std::string(where) + ": \"" + key +
                          "\" must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

inline std::vector<double> get_number_array(const json& j, const char* key, const char* where) {
    const json& v = j[key];
    if (!v.is_array())
        throw ConfigError(std::string(where) + ": \"" + key + "\" must be an array of numbers");
    std::vector<double> values;
    values.reserve(v.size());
    for (const auto& item : v) {
        if (!item.is_number())
            throw ConfigError(std::string(where) + ": \"" + key +
                              "\" must contain only numbers");
        values.push_back(item.get<double>());
    }
    return values;
}

inline std::string get_string(const json& j, const char* key, const char* where) {
    if (!j[key].is_string())
        throw ConfigError(std::string(where) + ": \"" + key + "\" must be a string");
    return j[key].get<std::string>();
}

inline json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace detail_json

// Spec JSON: {"schema":1,"probs":[...]} or
// {"schema":1,"generator":"onemax","n":...,"k":...}.
inline GeometricSumSpec spec_from_json(const nlohmann::json& j, const std::string& where) {
    using namespace detail_json;
    require_schema_1(j, where.c_str());
    if (j.contains("generator")) {
        require_known_keys(j, {"schema", "generator", "n", "k"}, where.c_str());
        const std::string gen = get_string(j, "generator", where.c_str());
        if (gen != "onemax")
            throw ConfigError(where + ": unknown generator \"" + gen + "\"");
        if (!j.contains("n") || !j.contains("k"))
            throw ConfigError(where + ": generator onemax needs \"n\" and \"k\"");
        try {
            return onemax_partition(get_int(j, "n", where.c_str()),
                                    get_int(j, "k", where.c_str()))
                .spec();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    require_known_keys(j, {"schema", "probs"}, where.c_str());
    if (!j.contains("probs"))
        throw ConfigError(where + ": needs \"probs\" or \"generator\"");
    try {
        return GeometricSumSpec(get_number_array(j, "probs", where.c_str()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

// A spec source is either a "onemax:n:k" generator string or a JSON file path.
inline GeometricSumSpec spec_from_source(const std::string& source) {
    if (source.rfind("onemax:", 0) == 0) return onemax_spec_from_generator(source);
    return spec_from_json(detail_json::parse_file(source), source);
}

// Experiment config JSON; every key is optional except schema and process,
// defaults match ExperimentConfig. Unknown keys are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& where) {
    using namespace detail_json;
    require_schema_1(j, where.c_str());
    require_known_keys(j,
                       {"schema", "process", "n", "init", "probs", "start_level", "replications",
                        "seed", "grid", "grid_unit", "tail", "format", "workers", "cap"},
                       where.c_str());
    if (!j.contains("process")) throw ConfigError(where + ": missing \"process\"");

    ExperimentConfig cfg;
    cfg.process = process_from_string(get_string(j, "process", where.c_str()));
    if (j.contains("n")) cfg.n = get_int(j, "n", where.c_str());
    if (j.contains("init")) {
        const auto& init = j["init"];
        if (init.is_string() && init.get<std::string>() == "uniform")
            cfg.init_level.reset();
        else if (init.is_number_integer())
            cfg.init_level = init.get<std::int64_t>();
        else
            throw ConfigError(where + ": \"init\" must be \"uniform\" or an integer level");
    }
    if (j.contains("probs")) cfg.level_probs = get_number_array(j, "probs", where.c_str());
    if (j.contains("start_level")) cfg.start_level = get_int(j, "start_level", where.c_str());
    if (j.contains("replications")) cfg.replications = get_uint(j, "replications", where.c_str());
    if (j.contains("seed")) cfg.master_seed = get_uint(j, "seed", where.c_str());
    if (j.contains("grid")) cfg.grid = get_number_array(j, "grid", where.c_str());
    if (j.contains("grid_unit")) {
        const std::string unit = get_string(j, "grid_unit", where.c_str());
        if (unit == "r")
            cfg.grid_is_r = true;
        else if (unit == "delta")
            cfg.grid_is_r = false;
        else
            throw ConfigError(where + ": \"grid_unit\" must be \"delta\" or \"r\"");
    }
    if (j.contains("tail")) cfg.tail = tail_from_string(get_string(j, "tail", where.c_str()));
    if (j.contains("format"))
        cfg.format = format_from_string(get_string(j, "format", where.c_str()));
    if (j.contains("workers")) {
        const std::int64_t w = get_int(j, "workers", where.c_str());
        if (w < 1) throw ConfigError(where + ": \"workers\" must be >= 1");
        cfg.workers = static_cast<int>(w);
    }
    if (j.contains("cap")) cfg.iteration_cap = get_uint(j, "cap", where.c_str());
    return cfg;
}

inline ExperimentConfig config_from_file(const std::string& path) {
    return config_from_json(detail_json::parse_file(path), path);
}

// ---------------------------------------------------------------------------
// bound

struct BoundRow {
    double delta;
    TailBoundResult lower;
    TailBoundResult upper;
    double chernoff_lower;
    double chernoff_upper;
};

// Closed-form bounds honor the overrides; the numeric Chernoff bounds always
// use the exact spec, since the optimization works on the true mgf.
inline std::vector<BoundRow> run_bound(const GeometricSumSpec& spec,
                                       const std::vector<double>& grid,
                                       std::optional<double> s_override = {},
                                       std::optional<double> h_override = {}) {
    if (grid.empty()) throw ConfigError("bound needs a nonempty delta grid");
    std::vector<BoundRow> rows;
    rows.reserve(grid.size());
    for (const double delta : grid) {
        try {
            BoundRow row{delta, lower_tail_bound(spec, delta, s_override),
                         upper_tail_bound(spec, delta, s_override, h_override), 1.0, 1.0};
            if (delta > 0.0) {
                row.chernoff_lower = chernoff_lower_bound(spec, delta);
                row.chernoff_upper = chernoff_upper_bound(spec, delta);
            }
            rows.push_back(row);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return rows;
}

inline std::string render_bounds(const std::vector<BoundRow>& rows, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out =
            "delta,lower_bound,lower_regime,upper_bound,upper_regime,chernoff_lower,"
            "chernoff_upper\n";
        for (const BoundRow& row : rows) {
            out += format_double(row.delta);
            out += ',';
            out += format_double(row.lower.bound);
            out += ',';
            out += to_string(row.lower.regime);
            out += ',';
            out += format_double(row.upper.bound);
            out += ',';
            out += to_string(row.upper.regime);
            out += ',';
            out += format_double(row.chernoff_lower);
            out += ',';
            out += format_double(row.chernoff_upper);
            out += '\n';
        }
        return out;
    }
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["version"] = kVersion;
    auto& rows_json = doc["rows"];
    rows_json = nlohmann::ordered_json::array();
    for (const BoundRow& row : rows) {
        nlohmann::ordered_json r;
        r["delta"] = row.delta;
        r["lower_bound"] = row.lower.bound;
        r["lower_regime"] = to_string(row.lower.regime);
        r["upper_bound"] = row.upper.bound;
        r["upper_regime"] = to_string(row.upper.regime);
        r["chernoff_lower"] = row.chernoff_lower;
        r["chernoff_upper"] = row.chernoff_upper;
        rows_json.push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// simulate

// The waiting-time spec the configured process realizes. For rls-onemax and
// coupon-collector this is the OneMax partition at the fixed init level.
inline LevelPartition partition_for(const ExperimentConfig& cfg) {
    try {
        if (cfg.process == Process::level_chain)
            return LevelPartition(cfg.level_probs, cfg.start_level, /*no_skip=*/true);
        return onemax_partition(cfg.n, cfg.init_level.value_or(0));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

inline EmpiricalDistribution run_experiment(const ExperimentConfig& cfg) {
    cfg.validate(/*needs_grid=*/false);
    const std::uint64_t seed = *cfg.master_seed;
    switch (cfg.process) {
        case Process::rls_onemax: {
            const InitPolicy init = cfg.init_level ? InitPolicy::fixed_level(*cfg.init_level)
                                                   : InitPolicy::uniform();
            const std::int64_t n = cfg.n;
            const std::uint64_t cap = cfg.iteration_cap;
            return replicate(
                [n, init, cap](std::uint64_t run_seed) {
                    return rls_run(n, run_seed, OneMaxFitness{}, init, cap);
                },
                cfg.replications, seed, cfg.workers);
        }
        case Process::level_chain: {
            const LevelPartition part = partition_for(cfg);
            const std::uint64_t cap = cfg.iteration_cap;
            return replicate(
                [&part, cap](std::uint64_t run_seed) {
                    return level_chain_run(part, run_seed, cap);
                },
                cfg.replications, seed, cfg.workers);
        }
        default: {
            const std::int64_t n = cfg.n;
            const std::int64_t prefilled = cfg.init_level.value_or(0);
            const std::uint64_t cap = cfg.iteration_cap;
            return replicate(
                [n, prefilled, cap](std::uint64_t run_seed) {
                    return coupon_collector_run(n, prefilled, run_seed, cap);
                },
                cfg.replications, seed, cfg.workers);
        }
    }
}

inline std::string render_simulation(const ExperimentConfig& cfg,
                                     const EmpiricalDistribution& dist) {
    const std::pair<const char*, double> quantiles[] = {
        {"q25", 0.25}, {"q50", 0.50}, {"q75", 0.75}, {"q90", 0.90}, {"q99", 0.99}};
    if (cfg.format == OutputFormat::csv) {
        std::string out = "kind,key,value\n";
        for (const auto& [value, count] : dist.counts()) {
            out += "count,";
            out += std::to_string(value);
            out += ',';
            out += std::to_string(count);
            out += '\n';
        }
        out += "summary,total," + std::to_string(dist.total()) + "\n";
        out += "summary,mean," + format_double(dist.mean()) + "\n";
        out += "summary,variance," + format_double(dist.variance()) + "\n";
        out += "summary,min," + std::to_string(dist.min_value()) + "\n";
        out += "summary,max," + std::to_string(dist.max_value()) + "\n";
        for (const auto& [name, q] : quantiles)
            out += std::string("summary,") + name + "," + std::to_string(dist.quantile(q)) + "\n";
        return out;
    }
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["version"] = kVersion;
    doc["process"] = to_string(cfg.process);
    if (cfg.process == Process::level_chain) {
        doc["probs"] = cfg.level_probs;
        doc["start_level"] = cfg.start_level;
    } else {
        doc["n"] = cfg.n;
        if (cfg.init_level)
            doc["init"] = *cfg.init_level;
        else
            doc["init"] = "uniform";
    }
    doc["replications"] = cfg.replications;
    doc["seed"] = *cfg.master_seed;
    auto& counts = doc["counts"];
    counts = nlohmann::ordered_json::array();
    for (const auto& [value, count] : dist.counts())
        counts.push_back({value, count});
    auto& summary = doc["summary"];
    summary["total"] = dist.total();
    summary["mean"] = dist.mean();
    summary["variance"] = dist.variance();
    summary["min"] = dist.min_value();
    summary["max"] = dist.max_value();
    for (const auto& [name, q] : quantiles) summary[name] = dist.quantile(q);
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// verify

struct VerifyRow {
    double delta_or_r;
    double closed_form_bound;
    double chernoff_bound;
    std::optional<double> exact_tail;  // empty when the oracle refused (cell budget)
    double empirical_tail;
    double empirical_se;
    bool pass;
};

struct VerificationReport {
    Tail tail;
    bool grid_is_r;
    std::uint64_t replications;
    std::uint64_t seed;
    std::vector<VerifyRow> rows;
    bool all_pass;
};

namespace detail_verify {

// a <= b with relative slack; the absolute floor covers underflow to 0.
inline bool leq_with_slack(double a, double b) {
    return a <= b * (1.0 + 1e-12) + 1e-300;
}

}  // namespace detail_verify

// Runs the experiment, then checks each grid deviation three ways: the exact
// oracle tail (when feasible) must respect exact <= chernoff <= closed form,
// and the empirical tail must not exceed the closed form by more than 3
// standard errors. `corrupt_bounds` halves the closed-form bound first; a
// healthy pipeline must then report failures (self-test).
inline VerificationReport run_verification(const ExperimentConfig& cfg,
                                           bool corrupt_bounds = false) {
    cfg.validate(/*needs_grid=*/true);
    if (cfg.process == Process::rls_onemax && !cfg.init_level)
        throw ConfigError(
            "verify needs a fixed init level for rls-onemax (pass --k): under uniform init the "
            "reference distribution is a mixture over start levels");

    const LevelPartition part = partition_for(cfg);
    const GeometricSumSpec& spec = part.spec();
    const EmpiricalDistribution dist = run_experiment(cfg);
    const double mean = spec.mean();

    VerificationReport report{cfg.tail, cfg.grid_is_r, cfg.replications, *cfg.master_seed,
                              {},       true};
    for (const double g : cfg.grid) {
        const double delta = cfg.grid_is_r ? g * static_cast<double>(cfg.n) : g;
        double closed = 1.0;
        double chernoff = 1.0;
        std::optional<double> exact;
        if (cfg.tail == Tail::upper) {
            closed = upper_tail_bound(spec, delta).bound;
            if (delta > 0.0) chernoff = chernoff_upper_bound(spec, delta);
            try {
                exact = exact_upper_tail(spec, mean + delta);
            } catch (const OracleInfeasibleError&) {
            }
        } else {
            closed = lower_tail_bound(spec, delta).bound;
            if (delta > 0.0) chernoff = chernoff_lower_bound(spec, delta);
            try {
                exact = exact_lower_tail(spec, mean - delta);
            } catch (const OracleInfeasibleError&) {
            }
        }
        if (corrupt_bounds) closed *= 0.5;

        // Hitting times count the initial step: T = X + 1, so the threshold
        // on T shifts by one and the deviation comparison is unchanged.
        const double threshold = cfg.tail == Tail::upper ? mean + delta + 1.0
                                                         : mean - delta + 1.0;
        const double empirical = cfg.tail == Tail::upper ? dist.fraction_greater(threshold)
                                                         : dist.fraction_less(threshold);
        const double se =
            std::sqrt(empirical * (1.0 - empirical) / static_cast<double>(dist.total()));

        bool pass = detail_verify::leq_with_slack(chernoff, closed);
        if (exact) pass = pass && detail_verify::leq_with_slack(*exact, chernoff);
        pass = pass && empirical <= closed + 3.0 * se;

        report.rows.push_back({g, closed, chernoff, exact, empirical, se, pass});
        report.all_pass = report.all_pass && pass;
    }
    return report;
}

inline std::string render_verification(const VerificationReport& report, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out =
            "delta_or_r,closed_form_bound,chernoff_bound,exact_tail,empirical_tail,empirical_se,"
            "verdict\n";
        for (const VerifyRow& row : report.rows) {
            out += format_double(row.delta_or_r);
            out += ',';
            out += format_double(row.closed_form_bound);
            out += ',';
            out += format_double(row.chernoff_bound);
            out += ',';
            if (row.exact_tail) out += format_double(*row.exact_tail);
            out += ',';
            out += format_double(row.empirical_tail);
            out += ',';
            out += format_double(row.empirical_se);
            out += ',';
            out += row.pass ? "pass" : "fail";
            out += '\n';
        }
        return out;
    }
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["version"] = kVersion;
    doc["tail"] = to_string(report.tail);
    doc["grid_unit"] = report.grid_is_r ? "r" : "delta";
    doc["replications"] = report.replications;
    doc["seed"] = report.seed;
    doc["all_pass"] = report.all_pass;
    auto& rows = doc["rows"];
    rows = nlohmann::ordered_json::array();
    for (const VerifyRow& row : report.rows) {
        nlohmann::ordered_json r;
        r["delta_or_r"] = row.delta_or_r;
        r["closed_form_bound"] = row.closed_form_bound;
        r["chernoff_bound"] = row.chernoff_bound;
        if (row.exact_tail)
            r["exact_tail"] = *row.exact_tail;
        else
            r["exact_tail"] = nullptr;
        r["empirical_tail"] = row.empirical_tail;
        r["empirical_se"] = row.empirical_se;
        r["verdict"] = row.pass ? "pass" : "fail";
        rows.push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// exact

inline std::string render_exact_pmf(const ExactPmf& pmf, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out = "t,mass\n";
        for (std::size_t i = 0; i < pmf.masses.size(); ++i) {
            out += std::to_string(pmf.support_start + static_cast<std::int64_t>(i));
            out += ',';
            out += format_double(pmf.masses[i]);
            out += '\n';
        }
        out += "residual," + format_double(pmf.residual) + "\n";
        return out;
    }
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["version"] = kVersion;
    doc["support_start"] = pmf.support_start;
    doc["masses"] = pmf.masses;
    doc["residual"] = pmf.residual;
    doc["residual_warning"] = pmf.residual_warning;
    return doc.dump(2) + "\n";
}

inline std::string render_exact_tail(Tail tail, double threshold, double probability,
                                     OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out = "tail,threshold,probability\n";
        out += to_string(tail);
        out += ',';
        out += format_double(threshold);
        out += ',';
        out += format_double(probability);
        out += '\n';
        return out;
    }
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["version"] = kVersion;
    doc["tail"] = to_string(tail);
    doc["threshold"] = threshold;
    doc["probability"] = probability;
    return doc.dump(2) + "\n";
}

}  // namespace geomtail::harness
