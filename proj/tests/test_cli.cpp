// Subprocess checks of the command-line front end. The binary path comes
// from PMARKET_CLI (set by ctest); tests are skipped when it is absent.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

std::string cli_path() {
    const char* env = std::getenv("PMARKET_CLI");
    return env ? env : "";
}

struct CommandResult {
    int exit_code;
    std::string output;
};

CommandResult run_raw(const std::string& cmdline) {
    const std::filesystem::path out =
        std::filesystem::temp_directory_path() / "pmarket_cli_out.txt";
    const std::string cmd = cmdline + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(out);
    std::ostringstream body;
    body << in.rdbuf();
    std::filesystem::remove(out);
    return {WEXITSTATUS(raw), body.str()};
}

CommandResult run_command(const std::string& args) {
    return run_raw(cli_path() + " " + args);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kPdGame = R"({
  "players": 2,
  "actions": [["c", "d"], ["c", "d"]],
  "utilities": [[3, 3], [0, 5], [5, 0], [1, 1]]
})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run writes outputs and repeats byte-identically") {
    if (cli_path().empty()) return;
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "pmarket_cli_run";
    std::filesystem::remove_all(dir);

    const std::string flags =
        "run --days 20 --agents ce,ce --b 10 --seed 7 --out " + dir.string();
    const CommandResult first = run_command(flags);
    CHECK(first.exit_code == 0);
    const std::string prices = slurp(dir / "prices.csv");
    const std::string agents = slurp(dir / "agents.csv");
    const std::string manifest = slurp(dir / "manifest.json");
    CHECK(!prices.empty());

    const CommandResult second = run_command(flags);
    CHECK(second.exit_code == 0);
    CHECK(slurp(dir / "prices.csv") == prices);
    CHECK(slurp(dir / "agents.csv") == agents);
    CHECK(slurp(dir / "manifest.json") == manifest);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run rejects invalid flags with exit 2") {
    if (cli_path().empty()) return;
    CHECK(run_command("run --days 0").exit_code == 2);
    CHECK(run_command("run --agents zz,ce").exit_code == 2);
    CHECK(run_command("bogus-subcommand").exit_code == 2);
}

TEST_CASE("POSGI_SEED overrides the seed flag") {
    if (cli_path().empty()) return;
    const std::filesystem::path dir_a =
        std::filesystem::temp_directory_path() / "pmarket_cli_seed_a";
    const std::filesystem::path dir_b =
        std::filesystem::temp_directory_path() / "pmarket_cli_seed_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    CHECK(run_command("run --days 10 --agents zi,zi --seed 7 --out " + dir_a.string())
              .exit_code == 0);
    CHECK(run_raw("POSGI_SEED=99 " + cli_path() + " run --days 10 --agents zi,zi --seed 7 --out " +
                  dir_b.string())
              .exit_code == 0);
    const std::string manifest_b = slurp(dir_b / "manifest.json");
    CHECK(manifest_b.find("\"seed\": 99") != std::string::npos);
    CHECK(slurp(dir_a / "prices.csv") != slurp(dir_b / "prices.csv"));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("compare writes a summary row per baseline") {
    if (cli_path().empty()) return;
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "pmarket_cli_cmp";
    std::filesystem::remove_all(dir);
    const CommandResult r = run_command(
        "compare --baselines zi,zip --runs 2 --days 10 --b 10 --seed 3 --out " +
        dir.string());
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "summary.csv");
    int lines = 0;
    for (char ch : csv) {
        if (ch == '\n') ++lines;
    }
    CHECK(lines == 3);  // header + zi + zip
    CHECK(csv.find("zi,") != std::string::npos);
    CHECK(csv.find("zip,") != std::string::npos);
    std::filesystem::remove_all(dir);

    CHECK(run_command("compare --baselines xx --runs 1").exit_code == 2);
}

TEST_CASE("ce-solve reports the defect-defect point mass") {
    if (cli_path().empty()) return;
    const std::filesystem::path game =
        std::filesystem::temp_directory_path() / "pmarket_pd.json";
    std::ofstream(game) << kPdGame;
    const CommandResult r = run_command("ce-solve " + game.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("p(d,d) = 1") != std::string::npos);
    CHECK(r.output.find("player 0 expected utility: 1") != std::string::npos);

    // pareto restriction has no feasible support in the PD; it says so
    const CommandResult p = run_command("ce-solve --pareto " + game.string());
    CHECK(p.exit_code == 0);
    CHECK(p.output.find("no correlated equilibrium with Pareto-only support") !=
          std::string::npos);

    std::filesystem::remove(game);
}

TEST_CASE("ce-solve rejects malformed input") {
    if (cli_path().empty()) return;
    const std::filesystem::path bad =
        std::filesystem::temp_directory_path() / "pmarket_bad.json";
    std::ofstream(bad) << "{\"players\": 2, \"actions\": [[\"a\"]";  // truncated
    CHECK(run_command("ce-solve " + bad.string()).exit_code == 2);
    std::ofstream(bad) << "{\"players\": 2}";  // fields missing
    CHECK(run_command("ce-solve " + bad.string()).exit_code == 2);
    std::filesystem::remove(bad);
    // unreadable path is an IO failure
    CHECK(run_command("ce-solve /nonexistent/game.json").exit_code == 1);
}

TEST_CASE("quote prints prices") {
    if (cli_path().empty()) return;
    const CommandResult r = run_command("quote --q 10,0 --b 10");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0.731") != std::string::npos);
    CHECK(r.output.find("0.268") != std::string::npos);
}

TEST_CASE("help exits zero everywhere") {
    if (cli_path().empty()) return;
    CHECK(run_command("--help").exit_code == 0);
    for (const char* sub : {"run", "compare", "ce-solve", "quote"}) {
        CHECK(run_command(std::string(sub) + " --help").exit_code == 0);
    }
}

}  // TEST_SUITE
