#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
    const char* env = std::getenv("CVQKD_CLI_BIN");
    REQUIRE_MESSAGE(env != nullptr, "CVQKD_CLI_BIN must point at the cvqkd binary");
    return env;
}

int run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + cli_binary() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::current_path() / "cli_scratch" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("mi subcommand emits the homodyne closed form") {
    const fs::path dir = fresh_dir("mi_hd");
    REQUIRE(run_cli("mi --scheme hd --sigma2 2 --eta 1 --out " + dir.string()) == 0);

    const auto rows = read_csv(dir / "mi.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"scheme", "sigma2", "beta", "phi",
                                              "eta", "order", "mi_bits"});
    CHECK(rows[1][0] == "hd");
    CHECK(std::stod(rows[1][6]) == doctest::Approx(1.5849625007211561).epsilon(1e-14));

    // numeric cells round-trip through double at full precision
    for (std::size_t i = 1; i < rows[1].size(); ++i) {
        const std::string& cell = rows[1][i];
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", std::stod(cell));
        CHECK(cell == buf);
    }

    // sibling manifest names the settings
    const auto manifest = nlohmann::json::parse(slurp(dir / "mi.manifest.json"));
    CHECK(manifest["parameters"]["sigma2"] == 2.0);
    CHECK(manifest["parameters"]["order"] == 64);
    CHECK(manifest["parameters"]["tail_mass"] == 1e-10);
    CHECK(manifest["outputs"].size() == 1);
    CHECK(manifest["tool_version"].is_string());
    CHECK(manifest["timestamp"].is_string());
}

TEST_CASE("mi subcommand: dead channel and beta sweep") {
    const fs::path dir = fresh_dir("mi_pnr");
    REQUIRE(run_cli("mi --scheme pnr --sigma2 2 --eta 0 --beta 2 --out " +
                    dir.string()) == 0);
    auto rows = read_csv(dir / "mi.csv");
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(std::stod(rows[1][6])) <= 1e-9);

    REQUIRE(run_cli("mi --scheme pnr --sigma2 2 --eta 1 --order 32 "
                    "--sweep beta:0.25:4:16 --out " + dir.string()) == 0);
    rows = read_csv(dir / "mi.csv");
    REQUIRE(rows.size() == 17);
    // the photocounting curve crosses the homodyne constant exactly once,
    // from below
    const double hd = 1.5849625007211561;
    int sign_changes = 0;
    bool was_below = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const bool below = std::stod(rows[i][6]) < hd;
        if (i > 1 && below != was_below) ++sign_changes;
        was_below = below;
    }
    CHECK(std::stod(rows[1][6]) < hd);
    CHECK(std::stod(rows[16][6]) > hd);
    CHECK(sign_changes == 1);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("mi") == 2);                        // missing --scheme
    CHECK(run_cli("mi --scheme quantum") == 2);       // bad enum
    CHECK(run_cli("kgr --scheme hd") == 2);           // missing attack/direction
    CHECK(run_cli("figure 9") == 2);                  // unknown figure
    CHECK(run_cli("mi --scheme hd --sweep eta:2:1:5") == 2); // bad sweep
    CHECK(run_cli("nonsense") == 2);
}

TEST_CASE("identical flags produce identical bytes") {
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    const std::string flags = "mi --scheme pnr --sigma2 2 --eta 0.7 --beta 2 "
                              "--order 32 --sweep eta:0.2:1:5 --out ";
    REQUIRE(run_cli(flags + a.string()) == 0);
    REQUIRE(run_cli(flags + b.string(), "CVQKD_THREADS=2 ") == 0);
    CHECK(slurp(a / "mi.csv") == slurp(b / "mi.csv"));
}

TEST_CASE("threshold subcommand emits a decreasing column") {
    const fs::path dir = fresh_dir("threshold");
    REQUIRE(run_cli("threshold --order 48 --sweep sigma2:1:2:3 --out " +
                    dir.string()) == 0);
    const auto rows = read_csv(dir / "threshold.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"sigma2", "beta_th", "tol"});
    double prev = 1e9;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double bt = std::stod(rows[i][1]);
        CHECK(bt < prev);
        prev = bt;
    }
}

TEST_CASE("kgr subcommand reports the balanced-loss zero") {
    const fs::path dir = fresh_dir("kgr");
    REQUIRE(run_cli("kgr --scheme hd --attack individual --direction dr "
                    "--sigma2 2 --sweep eta:0.3:0.7:5 --out " + dir.string()) == 0);
    const auto rows = read_csv(dir / "kgr.csv");
    REQUIRE(rows.size() == 6);
    CHECK(rows[0][0] == "scheme");
    // middle sweep point is eta = 0.5
    CHECK(std::stod(rows[3][5]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(std::stod(rows[3][6])) <= 1e-14);
    // delta equals the difference of the reported components
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][6]) ==
              doctest::Approx(std::stod(rows[i][7]) - std::stod(rows[i][8]))
                  .epsilon(1e-12));
    }
}

TEST_CASE("figure 3 dataset") {
    const fs::path dir = fresh_dir("fig3");
    REQUIRE(run_cli("figure 3 --order 32 --out " + dir.string()) == 0);
    const auto rows = read_csv(dir / "figure3_beta_threshold.csv");
    REQUIRE(rows.size() == 10);
    double prev = 1e9;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double bt = std::stod(rows[i][1]);
        CHECK(bt < prev);
        prev = bt;
    }
    const auto manifest =
        nlohmann::json::parse(slurp(dir / "figure3.manifest.json"));
    CHECK(manifest["outputs"].size() == 1);
}

TEST_CASE("figure 2 dataset: three curve pairs with homodyne constants") {
    const fs::path dir = fresh_dir("fig2");
    REQUIRE(run_cli("figure 2 --order 32 --out " + dir.string()) == 0);
    const double hd_constants[3] = {1.1609640474436811, 1.5849625007211561,
                                    1.8502198590705461};
    for (int s = 1; s <= 3; ++s) {
        const auto pnr = read_csv(dir / ("figure2_pnr_sigma2_" + std::to_string(s) +
                                         ".csv"));
        const auto hd = read_csv(dir / ("figure2_hd_sigma2_" + std::to_string(s) +
                                        ".csv"));
        REQUIRE(pnr.size() == 17);
        REQUIRE(hd.size() == 17);
        for (std::size_t i = 1; i < hd.size(); ++i) {
            CHECK(std::stod(hd[i][6]) ==
                  doctest::Approx(hd_constants[s - 1]).epsilon(1e-12));
        }
        // the curve ends above the homodyne constant at beta = 4
        CHECK(std::stod(pnr[16][6]) > hd_constants[s - 1]);
    }
    const auto manifest =
        nlohmann::json::parse(slurp(dir / "figure2.manifest.json"));
    CHECK(manifest["outputs"].size() == 6);
}

TEST_CASE("figure 5 dataset: reverse reconciliation keeps the ordering") {
    const fs::path dir = fresh_dir("fig5");
    REQUIRE(run_cli("figure 5 --order 32 --out " + dir.string()) == 0);
    const auto pnr = read_csv(dir / "figure5_pnr_rr.csv");
    const auto hd = read_csv(dir / "figure5_hd_rr.csv");
    REQUIRE(pnr.size() == 21);
    REQUIRE(hd.size() == 21);
    for (std::size_t i = 1; i < pnr.size(); ++i) {
        CHECK(std::stod(pnr[i][6]) >= std::stod(hd[i][6]) - 2e-3);
    }
    // lossless endpoint: rate equals the mutual information, adversary
    // terms vanish
    CHECK(std::stod(pnr[20][8]) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("selfcheck gate is live") {
    CHECK(run_cli("selfcheck --fast") == 0);
    CHECK(run_cli("selfcheck --fast --tolerance 1e-12") == 1);
}
