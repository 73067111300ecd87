#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geomtail/harness.hpp"

namespace {

using namespace geomtail;
namespace gh = geomtail::harness;

// Exit codes: 0 success, 1 verification failure, 2 bad configuration,
// 3 iteration cap exceeded.
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw gh::ConfigError("cannot open output file '" + out_path + "'");
    out << text;
    if (!out) throw gh::ConfigError("write to '" + out_path + "' failed");
}

GeometricSumSpec resolve_spec(const std::string& probs_csv, const std::string& source) {
    if (!probs_csv.empty() && !source.empty())
        throw gh::ConfigError("pass either --probs or --spec, not both");
    if (!probs_csv.empty()) {
        try {
            return GeometricSumSpec(gh::parse_double_list(probs_csv, "probability"));
        } catch (const std::invalid_argument& e) {
            throw gh::ConfigError(e.what());
        }
    }
    if (!source.empty()) return gh::spec_from_source(source);
    throw gh::ConfigError("a spec is required: --probs p1,p2,... or --spec FILE|onemax:n:k");
}

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::string format = "csv";
    std::string out;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
    CLI::Option* format_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    flags.seed_opt =
        cmd->add_option("--seed", flags.seed, "master seed (required for simulate/verify)");
    flags.workers_opt =
        cmd->add_option("--workers", flags.workers,
                        "worker threads; the result does not depend on it")
            ->check(CLI::PositiveNumber);
    flags.format_opt = cmd->add_option("--format", flags.format, "output format: csv or json")
                           ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", flags.out, "write output to this file instead of stdout");
}

struct ExperimentFlags {
    std::string config_path;
    std::string process = "rls-onemax";
    std::int64_t n = 0;
    std::int64_t k = 0;
    bool uniform_init = false;
    std::string probs_csv;
    std::int64_t start_level = 0;
    std::uint64_t replications = 1;
    std::uint64_t cap = kDefaultIterationCap;

    CLI::Option* process_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* k_opt = nullptr;
    CLI::Option* uniform_opt = nullptr;
    CLI::Option* probs_opt = nullptr;
    CLI::Option* start_opt = nullptr;
    CLI::Option* reps_opt = nullptr;
    CLI::Option* cap_opt = nullptr;
};

void add_experiment(CLI::App* cmd, ExperimentFlags& flags) {
    cmd->add_option("--config", flags.config_path,
                    "experiment config JSON; explicit flags override its values");
    flags.process_opt =
        cmd->add_option("--process", flags.process, "rls-onemax, level-chain, or coupon-collector")
            ->check(CLI::IsMember({"rls-onemax", "level-chain", "coupon-collector"}));
    flags.n_opt = cmd->add_option("--n", flags.n, "problem size (bits / coupon types)");
    flags.k_opt = cmd->add_option("--k", flags.k, "fixed init level / prefilled coupons");
    flags.uniform_opt = cmd->add_flag("--uniform-init", flags.uniform_init,
                                      "start rls-onemax from a uniform random string");
    flags.probs_opt =
        cmd->add_option("--probs", flags.probs_csv, "level-chain leave probabilities p1,p2,...");
    flags.start_opt = cmd->add_option("--start-level", flags.start_level,
                                      "level-chain partition start level");
    flags.reps_opt = cmd->add_option("--replications,-R", flags.replications,
                                     "number of independent runs");
    flags.cap_opt = cmd->add_option("--cap", flags.cap, "per-run iteration cap");
    flags.k_opt->excludes(flags.uniform_opt);
}

gh::ExperimentConfig build_config(const ExperimentFlags& flags, const CommonFlags& common) {
    gh::ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = gh::config_from_file(flags.config_path);
    if (*flags.process_opt) cfg.process = gh::process_from_string(flags.process);
    if (*flags.n_opt) cfg.n = flags.n;
    if (*flags.k_opt) cfg.init_level = flags.k;
    if (*flags.uniform_opt) cfg.init_level.reset();
    if (*flags.probs_opt)
        cfg.level_probs = gh::parse_double_list(flags.probs_csv, "probability");
    if (*flags.start_opt) cfg.start_level = flags.start_level;
    if (*flags.reps_opt) cfg.replications = flags.replications;
    if (*flags.cap_opt) cfg.iteration_cap = flags.cap;
    if (*common.seed_opt) cfg.master_seed = common.seed;
    if (*common.workers_opt) cfg.workers = common.workers;
    if (*common.format_opt) cfg.format = gh::format_from_string(common.format);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tail bounds for sums of independent geometric random variables"};
    app.set_version_flag("--version", std::string("geomtail ") + gh::kVersion);
    app.require_subcommand(1);

    // bound
    auto* bound_cmd =
        app.add_subcommand("bound", "closed-form and numeric Chernoff bounds over a delta grid");
    CommonFlags bound_common;
    std::string bound_probs, bound_spec, bound_delta;
    std::optional<double> s_override, h_override;
    bound_cmd->add_option("--probs", bound_probs, "success probabilities p1,p2,...");
    bound_cmd->add_option("--spec", bound_spec, "spec JSON file or onemax:n:k");
    bound_cmd->add_option("--delta", bound_delta, "deviation grid d1,d2,...")->required();
    bound_cmd->add_option("--s-override", s_override, "relaxed s >= sum 1/p_i^2");
    bound_cmd->add_option("--h-override", h_override, "relaxed h <= min p_i");
    add_common(bound_cmd, bound_common);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "run a seeded experiment; histogram + summary");
    CommonFlags sim_common;
    ExperimentFlags sim_flags;
    add_experiment(sim_cmd, sim_flags);
    add_common(sim_cmd, sim_common);

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "check closed-form, Chernoff, exact, and empirical tails against each other");
    CommonFlags verify_common;
    ExperimentFlags verify_flags;
    std::string verify_grid, verify_r_grid, verify_tail = "upper";
    bool corrupt_bounds = false;
    add_experiment(verify_cmd, verify_flags);
    auto* grid_opt = verify_cmd->add_option("--grid", verify_grid, "delta grid d1,d2,...");
    auto* r_grid_opt =
        verify_cmd->add_option("--r-grid", verify_r_grid, "r grid r1,r2,... (delta = r*n)");
    grid_opt->excludes(r_grid_opt);
    verify_cmd->add_option("--tail", verify_tail, "which tail to verify: upper or lower")
        ->check(CLI::IsMember({"upper", "lower"}));
    verify_cmd->add_flag("--corrupt-bounds", corrupt_bounds,
                         "self-test: corrupt the closed-form bound and expect failure");
    add_common(verify_cmd, verify_common);

    // exact
    auto* exact_cmd = app.add_subcommand("exact", "exact pmf or tail probability (desk scale)");
    CommonFlags exact_common;
    std::string exact_probs, exact_spec, exact_tail_dir;
    std::int64_t exact_t_max = -1;
    std::optional<double> exact_threshold;
    exact_cmd->add_option("--probs", exact_probs, "success probabilities p1,p2,...");
    exact_cmd->add_option("--spec", exact_spec, "spec JSON file or onemax:n:k");
    auto* t_max_opt = exact_cmd->add_option("--t-max", exact_t_max, "truncation point of the pmf");
    auto* tail_opt =
        exact_cmd->add_option("--tail", exact_tail_dir, "tail direction: upper or lower")
            ->check(CLI::IsMember({"upper", "lower"}));
    auto* threshold_opt =
        exact_cmd->add_option("--threshold", exact_threshold, "tail threshold on X");
    tail_opt->needs(threshold_opt);
    threshold_opt->needs(tail_opt);
    t_max_opt->excludes(tail_opt);
    add_common(exact_cmd, exact_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*bound_cmd) {
            const GeometricSumSpec spec = resolve_spec(bound_probs, bound_spec);
            const auto grid = gh::parse_double_list(bound_delta, "delta");
            const auto rows = gh::run_bound(spec, grid, s_override, h_override);
            write_output(gh::render_bounds(rows, gh::format_from_string(bound_common.format)),
                         bound_common.out);
            return 0;
        }
        if (*sim_cmd) {
            gh::ExperimentConfig cfg = build_config(sim_flags, sim_common);
            const EmpiricalDistribution dist = gh::run_experiment(cfg);
            write_output(gh::render_simulation(cfg, dist), sim_common.out);
            return 0;
        }
        if (*verify_cmd) {
            gh::ExperimentConfig cfg = build_config(verify_flags, verify_common);
            if (grid_opt->count() > 0) {
                cfg.grid = gh::parse_double_list(verify_grid, "grid");
                cfg.grid_is_r = false;
            }
            if (r_grid_opt->count() > 0) {
                cfg.grid = gh::parse_double_list(verify_r_grid, "grid");
                cfg.grid_is_r = true;
            }
            if (verify_cmd->get_option("--tail")->count() > 0)
                cfg.tail = gh::tail_from_string(verify_tail);
            const gh::VerificationReport report = gh::run_verification(cfg, corrupt_bounds);
            write_output(gh::render_verification(report, cfg.format), verify_common.out);
            return report.all_pass ? 0 : kExitVerifyFailed;
        }
        if (*exact_cmd) {
            const GeometricSumSpec spec = resolve_spec(exact_probs, exact_spec);
            const auto format = gh::format_from_string(exact_common.format);
            if (t_max_opt->count() > 0) {
                write_output(gh::render_exact_pmf(exact_pmf(spec, exact_t_max), format),
                             exact_common.out);
                return 0;
            }
            if (threshold_opt->count() > 0) {
                const gh::Tail dir = gh::tail_from_string(exact_tail_dir);
                const double prob = dir == gh::Tail::upper
                                        ? exact_upper_tail(spec, *exact_threshold)
                                        : exact_lower_tail(spec, *exact_threshold);
                write_output(gh::render_exact_tail(dir, *exact_threshold, prob, format),
                             exact_common.out);
                return 0;
            }
            throw gh::ConfigError("exact needs --t-max or --tail/--threshold");
        }
    } catch (const gh::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IterationCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const OracleInfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
