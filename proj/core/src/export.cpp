#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "pmarket/sim.hpp"

namespace pm {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << body;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::filesystem::path prepare_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) {
        throw std::runtime_error("cannot create directory " + p.string() + ": " + ec.message());
    }
    return p;
}

nlohmann::json config_to_json(const MarketConfig& c) {
    nlohmann::json j;
    j["horizon"] = c.horizon;
    j["n_agents"] = c.n_agents;
    j["liquidity"] = c.liquidity;
    j["max_trade"] = c.max_trade;
    j["initial_q"] = c.initial_q;
    j["traded"] = c.traded;
    j["info"] = {{"rate", c.info.rate},
                 {"positive_prob", c.info.positive_prob},
                 {"reliability", c.info.reliability}};
    nlohmann::json strategies = nlohmann::json::array();
    for (StrategyKind k : c.strategies) strategies.push_back(strategy_token(k));
    j["strategies"] = strategies;
    j["thetas"] = c.thetas;
    j["outcome"] = c.outcome;
    j["seed"] = c.seed;
    j["max_units"] = c.max_units;
    j["signal_shift"] = c.signal_shift;
    if (std::isfinite(c.inventory_floor)) {
        j["inventory_floor"] = c.inventory_floor;
    } else {
        j["inventory_floor"] = nullptr;
    }
    j["strategy_config"] = {{"zip_beta", c.strategy_config.zip_beta},
                            {"margin_init", c.strategy_config.margin_init},
                            {"cp_beta", c.strategy_config.cp_beta},
                            {"dp_grid", c.strategy_config.dp_grid},
                            {"gd_window", c.strategy_config.gd_window}};
    j["negative_reward_rule"] =
        c.negative_reward_rule == NegativeRewardRule::principal_complex ? "principal_complex"
                                                                        : "signed_power";
    j["verify_equilibria"] = c.verify_equilibria;
    j["opponent_frequency_model"] = c.opponent_frequency_model;
    j["day_seconds"] = c.day_seconds;
    return j;
}

}  // namespace

void export_run(const RunResult& result, const MarketConfig& config,
                const std::string& dir) {
    const std::filesystem::path root = prepare_dir(dir);

    std::string prices = "period,price\n";
    for (std::size_t h = 0; h < result.prices.size(); ++h) {
        prices += std::to_string(h) + "," + fmt(result.prices[h]) + "\n";
    }
    write_file(root / "prices.csv", prices);

    std::string agents = "period,agent,action,reward,utility,cumulative_utility\n";
    std::vector<double> running(result.actions.size(), 0.0);
    for (std::size_t h = 0; h < result.prices.size(); ++h) {
        for (std::size_t i = 0; i < result.actions.size(); ++i) {
            running[i] += result.utils[i][h];
            agents += std::to_string(h) + "," + std::to_string(i) + "," +
                      std::to_string(to_int(result.actions[i][h])) + "," +
                      fmt(result.rewards[i][h]) + "," + fmt(result.utils[i][h]) + "," +
                      fmt(running[i]) + "\n";
        }
    }
    write_file(root / "agents.csv", agents);

    nlohmann::json manifest;
    manifest["schema_version"] = 1;
    manifest["kind"] = "run";
    manifest["seed"] = config.seed;
    manifest["config"] = config_to_json(config);
    write_file(root / "manifest.json", manifest.dump(2) + "\n");
}

void export_summary(const ExperimentSummary& summary, const MarketConfig& base,
                    const std::string& dir) {
    const std::filesystem::path root = prepare_dir(dir);

    std::string csv = "strategy,mean_utility,ci_low,ci_high,fce_percent,final_price_error\n";
    for (const StrategyRow& row : summary.rows) {
        csv += row.strategy + "," + fmt(row.mean_utility) + "," + fmt(row.ci_low) + "," +
               fmt(row.ci_high) + "," + fmt(row.fce_percent) + "," +
               fmt(row.final_price_error) + "\n";
    }
    write_file(root / "summary.csv", csv);

    nlohmann::json manifest;
    manifest["schema_version"] = 1;
    manifest["kind"] = "summary";
    manifest["seed"] = summary.base_seed;
    manifest["n_runs"] = summary.n_runs;
    manifest["config"] = config_to_json(base);
    write_file(root / "manifest.json", manifest.dump(2) + "\n");
}

std::string config_to_json_text(const MarketConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

MarketConfig config_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    MarketConfig c;
    try {
        c.horizon = j.value("horizon", c.horizon);
        c.n_agents = j.value("n_agents", c.n_agents);
        c.liquidity = j.value("liquidity", c.liquidity);
        c.max_trade = j.value("max_trade", c.max_trade);
        c.initial_q = j.value("initial_q", c.initial_q);
        c.traded = j.value("traded", c.traded);
        if (j.contains("info")) {
            const auto& info = j.at("info");
            c.info.rate = info.value("rate", c.info.rate);
            c.info.positive_prob = info.value("positive_prob", c.info.positive_prob);
            c.info.reliability = info.value("reliability", c.info.reliability);
        }
        if (j.contains("strategies")) {
            c.strategies.clear();
            for (const auto& token : j.at("strategies")) {
                const auto kind = strategy_from_token(token.get<std::string>());
                if (!kind) {
                    throw std::invalid_argument("unknown strategy token: " +
                                                token.get<std::string>());
                }
                c.strategies.push_back(*kind);
            }
        }
        c.thetas = j.value("thetas", c.thetas);
        c.outcome = j.value("outcome", c.outcome);
        c.seed = j.value("seed", c.seed);
        c.max_units = j.value("max_units", c.max_units);
        c.signal_shift = j.value("signal_shift", c.signal_shift);
        if (j.contains("inventory_floor") && !j.at("inventory_floor").is_null()) {
            c.inventory_floor = j.at("inventory_floor").get<double>();
        }
        if (j.contains("strategy_config")) {
            const auto& sc = j.at("strategy_config");
            c.strategy_config.zip_beta = sc.value("zip_beta", c.strategy_config.zip_beta);
            c.strategy_config.margin_init =
                sc.value("margin_init", c.strategy_config.margin_init);
            c.strategy_config.cp_beta = sc.value("cp_beta", c.strategy_config.cp_beta);
            c.strategy_config.dp_grid = sc.value("dp_grid", c.strategy_config.dp_grid);
            c.strategy_config.gd_window = sc.value("gd_window", c.strategy_config.gd_window);
        }
        if (j.contains("negative_reward_rule")) {
            const std::string rule = j.at("negative_reward_rule").get<std::string>();
            if (rule == "principal_complex") {
                c.negative_reward_rule = NegativeRewardRule::principal_complex;
            } else if (rule == "signed_power") {
                c.negative_reward_rule = NegativeRewardRule::signed_power;
            } else {
                throw std::invalid_argument("unknown negative_reward_rule: " + rule);
            }
        }
        c.verify_equilibria = j.value("verify_equilibria", c.verify_equilibria);
        c.opponent_frequency_model =
            j.value("opponent_frequency_model", c.opponent_frequency_model);
        c.day_seconds = j.value("day_seconds", c.day_seconds);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad config document: ") + e.what());
    }
    return c;
}

}  // namespace pm
