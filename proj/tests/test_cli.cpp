#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Invoke the built binary with output capture.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() /
                         ("tsa_cli_out_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter));
    const fs::path err = fs::temp_directory_path() /
                         ("tsa_cli_err_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(TSA_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out);
    res.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return res;
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("tsa_cli_ws_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

const std::string kFixture = std::string(TSA_DATA_DIR) + "/open_gapped.csv";

}  // namespace

TEST_CASE("missing column exits 2 and lists the available ones", "[cli]") {
    TempDir ws;
    const auto r = run_cli("interpolate -i " + kFixture + " -c Close -o " + ws.str());
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, ContainsSubstring("Open"));
    CHECK_THAT(r.err, ContainsSubstring("Date"));
}

TEST_CASE("missing input file exits 1", "[cli]") {
    TempDir ws;
    const auto r = run_cli("adf -i /nonexistent.csv -c Open -o " + ws.str());
    CHECK(r.exit_code == 1);
}

TEST_CASE("unknown flags and bad orders exit 2", "[cli]") {
    TempDir ws;
    CHECK(run_cli("fit --not-a-flag").exit_code == 2);
    CHECK(run_cli("fit -i " + kFixture + " -c Open --order nope -o " + ws.str()).exit_code == 2);
    CHECK(run_cli("fit -i " + kFixture + " -c Open --order 11,0,0 -o " + ws.str()).exit_code ==
          2);
}

TEST_CASE("model stages refuse gapped input with exit 1", "[cli]") {
    TempDir ws;
    const auto r = run_cli("fit -i " + kFixture + " -c Open --order 1,1,0 -o " + ws.str());
    CHECK(r.exit_code == 1);
    CHECK_THAT(r.err, ContainsSubstring("interpolate"));
}

TEST_CASE("interpolate fills the fixture's known gap count", "[cli]") {
    TempDir ws;
    const auto r = run_cli("interpolate -i " + kFixture + " -c Open -o " + ws.str());
    REQUIRE(r.exit_code == 0);
    const std::string filled = slurp(ws.path / "Open_filled.csv");
    CHECK(count_lines(filled) == 4717 + 1);
    std::size_t flagged = 0;
    std::istringstream ss(filled);
    std::string line;
    std::getline(ss, line);  // header
    CHECK(line == "date,value,was_interpolated");
    while (std::getline(ss, line))
        if (line.size() >= 2 && line[line.size() - 1] == '1' && line[line.size() - 2] == ',')
            ++flagged;
    CHECK(flagged == 4717 - 3272);
    CHECK_THAT(r.out, ContainsSubstring("1445"));
}

TEST_CASE("interpolate on gapless input changes nothing", "[cli]") {
    TempDir ws;
    // build a small gapless file
    std::ofstream csv(ws.path / "in.csv");
    csv << "Date,Open\n2020-01-01,5.5\n2020-01-02,6.25\n2020-01-03,7\n";
    csv.close();
    const auto r =
        run_cli("interpolate -i " + (ws.path / "in.csv").string() + " -c Open -o " + ws.str());
    REQUIRE(r.exit_code == 0);
    const std::string filled = slurp(ws.path / "Open_filled.csv");
    CHECK(filled ==
          "date,value,was_interpolated\n"
          "2020-01-01,5.5,0\n"
          "2020-01-02,6.25,0\n"
          "2020-01-03,7,0\n");
}

TEST_CASE("spline dump has one row per interval", "[cli]") {
    TempDir ws;
    const auto dump = (ws.path / "spline.csv").string();
    const auto grid_dump = (ws.path / "grid.csv").string();
    const auto r = run_cli("interpolate -i " + kFixture + " -c Open -o " + ws.str() +
                           " --spline-dump " + dump + " --grid-dump " + grid_dump);
    REQUIRE(r.exit_code == 0);
    const std::string text = slurp(dump);
    CHECK(count_lines(text) == 3272 - 1 + 1);  // intervals + header
    CHECK_THAT(text, ContainsSubstring("interval_index,x_left,x_right,a,b,c,d"));

    // raw grid keeps missing slots as empty value fields
    const std::string grid = slurp(grid_dump);
    CHECK(count_lines(grid) == 4717 + 1);
    CHECK_THAT(grid, ContainsSubstring("date,value"));
    std::size_t empties = 0;
    std::istringstream ss(grid);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line.back() == ',') ++empties;
    CHECK(empties == 4717 - 3272);
}

TEST_CASE("adf decisions flip between level and difference", "[cli]") {
    TempDir ws;
    REQUIRE(run_cli("interpolate -i " + kFixture + " -c Open -o " + ws.str()).exit_code == 0);
    const std::string filled = (ws.path / "Open_filled.csv").string();
    const std::string common = " -i " + filled + " -c value --date-column date -o " + ws.str();

    REQUIRE(run_cli("adf --d 0 --prefix Open" + common).exit_code == 0);
    const auto level = nlohmann::json::parse(slurp(ws.path / "Open_adf.json"));
    CHECK(level["reject_unit_root_at_5pct"] == false);

    REQUIRE(run_cli("adf --d 1 --prefix Open" + common).exit_code == 0);
    const auto diffed = nlohmann::json::parse(slurp(ws.path / "Open_adf.json"));
    CHECK(diffed["reject_unit_root_at_5pct"] == true);
    CHECK(diffed["critical_values"].contains("5%"));
}

TEST_CASE("fit report carries the full coefficient table schema", "[cli]") {
    TempDir ws;
    REQUIRE(run_cli("interpolate -i " + kFixture + " -c Open -o " + ws.str()).exit_code == 0);
    const std::string filled = (ws.path / "Open_filled.csv").string();
    const auto r = run_cli("fit -i " + filled + " -c value --date-column date --prefix Open "
                           "--order 2,1,2 -o " + ws.str());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(ws.path / "Open_fit.json"));
    CHECK(j.contains("aic"));
    CHECK(j.contains("bic"));
    CHECK(j.contains("hqic"));
    CHECK(j["model"] == "ARIMA(2,1,2)");
    std::vector<std::string> names;
    for (const auto& row : j["coefficients"]) {
        names.push_back(row["name"]);
        CHECK(row.contains("coef"));
        CHECK(row.contains("std_err"));
        CHECK(row.contains("z"));
        CHECK(row.contains("p"));
        CHECK(row.contains("ci_low"));
        CHECK(row.contains("ci_high"));
    }
    CHECK(names == std::vector<std::string>{"ar.L1", "ar.L2", "ma.L1", "ma.L2", "sigma2"});
    // ljung-box table written alongside
    const std::string lb = slurp(ws.path / "Open_ljungbox.csv");
    CHECK_THAT(lb, ContainsSubstring("lag,q_stat,df,p_value"));
    CHECK(count_lines(lb) == 10 + 1);
}

TEST_CASE("backtest writes one row per test length", "[cli]") {
    TempDir ws;
    REQUIRE(run_cli("simulate --order 0,1,0 --n-days 2300 --seed 5 --column Open --output " +
                    (ws.path / "rw.csv").string() + " -o " + ws.str())
                .exit_code == 0);
    const auto r = run_cli("backtest -i " + (ws.path / "rw.csv").string() +
                           " -c Open --order 0,1,0 --test-lengths 10,100,1000 -o " + ws.str());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(ws.path / "Open_backtest.csv");
    CHECK(count_lines(csv) == 3 + 1);
    CHECK_THAT(csv, ContainsSubstring("test_length,mse,n_windows"));
}

TEST_CASE("forecast horizon 31 continues the calendar grid", "[cli]") {
    TempDir ws;
    REQUIRE(run_cli("simulate --order 1,0,0 --phi 0.6 --n-days 400 --seed 9 --column Open "
                    "--start-date 2022-11-01 --output " +
                    (ws.path / "ar.csv").string() + " -o " + ws.str())
                .exit_code == 0);
    const auto r = run_cli("forecast -i " + (ws.path / "ar.csv").string() +
                           " -c Open --order 1,0,0 --horizon 31 -o " + ws.str());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(ws.path / "Open_forecast.csv");
    REQUIRE(count_lines(csv) == 31 + 1);
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "date,point,stderr,ci_low,ci_high");
    // last input day is 2022-11-01 + 399 days = 2023-12-05; forecasts start next day
    std::getline(ss, line);
    CHECK_THAT(line, ContainsSubstring("2023-12-06,"));
    std::string last_line;
    while (std::getline(ss, line))
        if (!line.empty()) last_line = line;
    CHECK_THAT(last_line, ContainsSubstring("2024-01-05,"));
}

TEST_CASE("simulate is deterministic per seed", "[cli]") {
    TempDir ws;
    const std::string base = "simulate --order 1,1,0 --phi 0.5 --n-days 300 --rows 220 --seed 77 "
                             "--column Open --output ";
    REQUIRE(run_cli(base + (ws.path / "a.csv").string() + " -o " + ws.str()).exit_code == 0);
    REQUIRE(run_cli(base + (ws.path / "b.csv").string() + " -o " + ws.str()).exit_code == 0);
    CHECK(slurp(ws.path / "a.csv") == slurp(ws.path / "b.csv"));
    CHECK(count_lines(slurp(ws.path / "a.csv")) == 221);
}

TEST_CASE("auto on a stationary fixture selects d = 0", "[cli]") {
    TempDir ws;
    REQUIRE(run_cli("simulate --order 0,0,0 --sigma 1 --constant 10 --n-days 600 --seed 13 "
                    "--column Open --output " +
                    (ws.path / "wn.csv").string() + " -o " + ws.str())
                .exit_code == 0);
    const auto r = run_cli("auto -i " + (ws.path / "wn.csv").string() + " -c Open --p-max 2 "
                           "--q-max 2 -o " + ws.str());
    REQUIRE(r.exit_code == 0);
    const auto adf = nlohmann::json::parse(slurp(ws.path / "Open_adf.json"));
    CHECK(adf["selected_d"] == 0);
    CHECK(adf["tests"].size() == 1);
}

TEST_CASE("auto artifacts equal the stage-by-stage pipeline", "[cli]") {
    TempDir ws;
    const std::string fixture = (ws.path / "sim.csv").string();
    REQUIRE(run_cli("simulate --order 1,1,0 --phi 0.5 --n-days 900 --rows 640 --seed 21 "
                    "--column Open --start-value 80 --output " +
                    fixture + " -o " + ws.str())
                .exit_code == 0);

    const fs::path dir_a = ws.path / "auto";
    const fs::path dir_b = ws.path / "stages";
    const auto r = run_cli("auto -i " + fixture + " -c Open --p-max 3 --q-max 3 -o " +
                           dir_a.string());
    REQUIRE(r.exit_code == 0);

    // read auto's own selections, then replay them stage by stage
    const auto adf = nlohmann::json::parse(slurp(dir_a / "Open_adf.json"));
    const int d = adf["selected_d"];
    const auto fitj = nlohmann::json::parse(slurp(dir_a / "Open_fit.json"));
    const std::string model = fitj["model"];  // "ARIMA(p,d,q)"
    const std::string order = model.substr(6, model.size() - 7);

    REQUIRE(run_cli("interpolate -i " + fixture + " -c Open -o " + dir_b.string()).exit_code ==
            0);
    const std::string filled = (dir_b / "Open_filled.csv").string();
    const std::string common =
        " -i " + filled + " -c value --date-column date --prefix Open -o " + dir_b.string();
    REQUIRE(run_cli("adf --auto-d" + common).exit_code == 0);
    REQUIRE(run_cli("acf --d " + std::to_string(d) + " --max-lag 40" + common).exit_code == 0);
    REQUIRE(run_cli("grid --d " + std::to_string(d) + " --p-max 3 --q-max 3" + common)
                .exit_code == 0);
    REQUIRE(run_cli("fit --order " + order + common).exit_code == 0);
    REQUIRE(run_cli("forecast --order " + order + " --horizon 31" + common).exit_code == 0);

    for (const char* name :
         {"Open_filled.csv", "Open_adf.json", "Open_acf.csv", "Open_pacf.csv", "Open_grid.csv",
          "Open_fit.json", "Open_ljungbox.csv", "Open_forecast.csv"}) {
        INFO(name);
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }
}

TEST_CASE("config file sets defaults and flags override it", "[cli]") {
    TempDir ws;
    REQUIRE(run_cli("simulate --order 0,0,0 --n-days 400 --seed 31 --column Open --output " +
                    (ws.path / "wn.csv").string() + " -o " + ws.str())
                .exit_code == 0);
    std::ofstream cfg(ws.path / "pipeline.cfg");
    cfg << "# test config\n";
    cfg << "input_path = " << (ws.path / "wn.csv").string() << "\n";
    cfg << "value_column = Open\n";
    cfg << "p_max = 2\n";
    cfg << "q_max = 0\n";
    cfg << "output_dir = " << ws.str() << "\n";
    cfg.close();

    REQUIRE(run_cli("grid --config " + (ws.path / "pipeline.cfg").string() + " --d 0")
                .exit_code == 0);
    std::string grid = slurp(ws.path / "Open_grid.csv");
    CHECK(count_lines(grid) == 3 + 1);  // p in 0..2, q = 0

    // flag beats file
    REQUIRE(run_cli("grid --config " + (ws.path / "pipeline.cfg").string() + " --d 0 --p-max 1")
                .exit_code == 0);
    grid = slurp(ws.path / "Open_grid.csv");
    CHECK(count_lines(grid) == 2 + 1);

    // unknown keys are a usage error
    std::ofstream bad(ws.path / "bad.cfg");
    bad << "p_mox = 3\n";
    bad.close();
    CHECK(run_cli("grid --config " + (ws.path / "bad.cfg").string()).exit_code == 2);
}
