// Command-line front end: seeded market runs, batch strategy comparisons,
// correlated-equilibrium solving for game files, and LMSR price quotes.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmarket/equilibrium.hpp"
#include "pmarket/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) out.push_back(token);
    return out;
}

std::vector<pm::StrategyKind> parse_strategies(const std::string& text) {
    std::vector<pm::StrategyKind> kinds;
    for (const std::string& token : split_csv(text)) {
        const auto kind = pm::strategy_from_token(token);
        if (!kind) {
            throw std::invalid_argument("unknown strategy token: " + token +
                                        " (expected zi, zip, cp, gd, dp or ce)");
        }
        kinds.push_back(*kind);
    }
    if (kinds.empty()) throw std::invalid_argument("strategy list is empty");
    return kinds;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    for (const std::string& token : split_csv(text)) {
        out.push_back(std::stod(token));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

// The per-run seed: POSGI_SEED in the environment beats the flag/config.
void apply_seed_env(std::uint64_t& seed) {
    if (const char* env = std::getenv("POSGI_SEED")) {
        seed = std::stoull(env);
    }
}

struct MarketFlags {
    std::string config_file;
    int days = 0;
    std::string agents;
    double b = 0.0;
    std::string theta;
    std::uint64_t seed = 0;
    int outcome = -1;
    double rate = -1.0;
    double positive_prob = -1.0;
    double reliability = -1.0;
    double signal_shift = -1.0;
    int max_units = -1;
};

void add_market_flags(CLI::App* cmd, MarketFlags& f) {
    cmd->add_option("--config", f.config_file, "JSON config file; flags override its fields");
    cmd->add_option("--days", f.days, "number of trading days (horizon)")->capture_default_str();
    cmd->add_option("--b", f.b, "LMSR liquidity parameter");
    cmd->add_option("--theta", f.theta, "risk factor, single value or comma list per agent");
    cmd->add_option("--seed", f.seed, "random seed (env POSGI_SEED overrides)");
    cmd->add_option("--outcome", f.outcome, "realized security index (1 = event occurs)");
    cmd->add_option("--rate", f.rate, "information arrival rate per day");
    cmd->add_option("--positive-prob", f.positive_prob,
                    "probability an arriving signal is positive given outcome 1");
    cmd->add_option("--reliability", f.reliability, "per-agent signal observation probability");
    cmd->add_option("--signal-shift", f.signal_shift, "estimate nudge per information signal");
    cmd->add_option("--max-units", f.max_units, "state-space bound on traded quantity offsets");
}

pm::MarketConfig build_config(const CLI::App* cmd, const MarketFlags& f) {
    pm::MarketConfig config;
    if (!f.config_file.empty()) {
        config = pm::config_from_json_text(read_file(f.config_file));
    }
    if (cmd->count("--days")) config.horizon = f.days;
    if (cmd->count("--b")) config.liquidity = f.b;
    if (cmd->count("--seed")) config.seed = f.seed;
    if (cmd->count("--outcome")) config.outcome = f.outcome;
    if (cmd->count("--rate")) config.info.rate = f.rate;
    if (cmd->count("--positive-prob")) config.info.positive_prob = f.positive_prob;
    if (cmd->count("--reliability")) config.info.reliability = f.reliability;
    if (cmd->count("--signal-shift")) config.signal_shift = f.signal_shift;
    if (cmd->count("--max-units")) config.max_units = f.max_units;
    if (cmd->count("--theta")) {
        const std::vector<double> thetas = parse_doubles(f.theta);
        if (thetas.size() == 1) {
            config.thetas.assign(config.strategies.size(), thetas[0]);
        } else {
            config.thetas = thetas;
        }
    }
    apply_seed_env(config.seed);
    return config;
}

int cmd_run(const CLI::App* cmd, const MarketFlags& flags, const std::string& agents,
            const std::string& out_dir) {
    pm::MarketConfig config = build_config(cmd, flags);
    if (cmd->count("--agents")) {
        config.strategies = parse_strategies(agents);
        config.n_agents = static_cast<int>(config.strategies.size());
        if (static_cast<int>(config.thetas.size()) != config.n_agents) {
            const double t = config.thetas.empty() ? 0.0 : config.thetas[0];
            config.thetas.assign(config.strategies.size(), t);
        }
    }
    config.validate();

    const pm::RunResult result = pm::run_market(config);
    pm::export_run(result, config, out_dir);

    std::cout << "run complete: " << config.horizon << " days, final price "
              << result.prices.back() << "\n";
    for (std::size_t i = 0; i < result.cumulative_utility.size(); ++i) {
        std::cout << "agent " << i << " (" << pm::strategy_token(config.strategies[i])
                  << "): cumulative utility " << result.cumulative_utility[i] << "\n";
    }
    std::cout << "wrote " << out_dir << "/prices.csv, agents.csv, manifest.json\n";
    return kExitOk;
}

int cmd_compare(const CLI::App* cmd, const MarketFlags& flags, const std::string& baselines,
                int runs, const std::string& out_dir) {
    pm::MarketConfig base = build_config(cmd, flags);
    base.strategies = {pm::StrategyKind::ce, pm::StrategyKind::ce};
    base.n_agents = 2;
    if (base.thetas.size() != 2) {
        const double t = base.thetas.empty() ? 0.0 : base.thetas[0];
        base.thetas.assign(2, t);
    }
    base.validate();

    std::vector<pm::Pairing> pairings;
    for (pm::StrategyKind kind : parse_strategies(baselines)) {
        pairings.push_back({kind, kind});
    }
    const pm::ExperimentSummary summary = pm::run_experiment(base, pairings, runs);
    pm::export_summary(summary, base, out_dir);

    std::cout << "strategy  mean_utility  [95% CI]  fce%  final_price_error\n";
    for (const pm::StrategyRow& row : summary.rows) {
        std::cout << row.strategy << "  " << row.mean_utility << "  [" << row.ci_low << ", "
                  << row.ci_high << "]  " << row.fce_percent << "  "
                  << row.final_price_error << "\n";
    }
    std::cout << "wrote " << out_dir << "/summary.csv, manifest.json\n";
    return kExitOk;
}

int cmd_ce_solve(const std::string& game_file, bool pareto, const std::string& objective) {
    const pm::NormalFormGame game = pm::NormalFormGame::from_json_text(read_file(game_file));

    pm::CeObjective obj = pm::CeObjective::utilitarian;
    if (objective == "uniform") {
        obj = pm::CeObjective::uniform;
    } else if (objective != "utilitarian") {
        throw std::invalid_argument("objective must be utilitarian or uniform");
    }

    pm::CorrelatedEquilibrium ce;
    if (pareto) {
        if (auto restricted = pm::pareto_ce(game)) {
            ce = *restricted;
        } else {
            std::cout << "no correlated equilibrium with Pareto-only support; "
                         "reporting the unrestricted solution\n";
            ce = pm::solve_ce(game, obj);
        }
    } else {
        ce = pm::solve_ce(game, obj);
    }

    std::cout << "correlated equilibrium (" << (pareto ? "pareto" : objective) << "):\n";
    for (int phi = 0; phi < game.profile_count(); ++phi) {
        if (ce.p[phi] <= 1e-12) continue;
        const std::vector<int> actions = game.profile_actions(phi);
        std::cout << "  p(";
        for (int i = 0; i < game.n_players; ++i) {
            std::cout << (game.action_names.empty() ? std::to_string(actions[i])
                                                    : game.action_names[i][actions[i]]);
            if (i + 1 < game.n_players) std::cout << ",";
        }
        std::cout << ") = " << ce.p[phi] << "\n";
    }
    for (int i = 0; i < game.n_players; ++i) {
        std::cout << "player " << i << " expected utility: "
                  << pm::expected_utility(game, ce.p, i) << "\n";
    }
    return kExitOk;
}

int cmd_quote(const std::string& q_text, double b) {
    const pm::QuantityVector q(parse_doubles(q_text));
    const pm::Liquidity liq(b);
    const pm::PriceVector prices = pm::price(q, liq);
    for (std::size_t i = 0; i < prices.size(); ++i) {
        std::cout << "security " << i << ": " << prices[i] << "\n";
    }
    std::cout << "cost: " << pm::cost(q, liq) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POSGI prediction market simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "simulate one seeded market and write CSVs");
    MarketFlags run_flags;
    add_market_flags(run, run_flags);
    std::string run_agents = "ce,ce";
    std::string run_out = "results";
    run->add_option("--agents", run_agents, "comma list of per-agent strategies")
        ->capture_default_str();
    run->add_option("--out", run_out, "output directory")->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare", "batch comparison against the CE strategy");
    MarketFlags cmp_flags;
    add_market_flags(compare, cmp_flags);
    std::string cmp_baselines = "zi,zip,cp,gd,dp";
    int cmp_runs = 100;
    std::string cmp_out = "results";
    compare->add_option("--baselines", cmp_baselines, "comma list of baseline strategies")
        ->capture_default_str();
    compare->add_option("--runs", cmp_runs, "seeded runs per pairing")->capture_default_str();
    compare->add_option("--out", cmp_out, "output directory")->capture_default_str();

    // ce-solve
    auto* ce_solve = app.add_subcommand("ce-solve", "solve a game file for a CE");
    std::string game_file;
    bool pareto = false;
    std::string objective = "utilitarian";
    ce_solve->add_option("game", game_file, "normal-form game JSON file")->required();
    ce_solve->add_flag("--pareto", pareto, "restrict support to Pareto-optimal profiles");
    ce_solve->add_option("--objective", objective, "utilitarian or uniform")
        ->capture_default_str();

    // quote
    auto* quote = app.add_subcommand("quote", "print LMSR prices for a quantity vector");
    std::string quote_q;
    double quote_b = 100.0;
    quote->add_option("--q", quote_q, "comma list of outstanding quantities")->required();
    quote->add_option("--b", quote_b, "LMSR liquidity parameter")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run, run_flags, run_agents, run_out);
        if (compare->parsed()) {
            return cmd_compare(compare, cmp_flags, cmp_baselines, cmp_runs, cmp_out);
        }
        if (ce_solve->parsed()) return cmd_ce_solve(game_file, pareto, objective);
        if (quote->parsed()) return cmd_quote(quote_q, quote_b);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
