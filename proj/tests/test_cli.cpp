#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d(PORTMANTEAU_TEST_DIR);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

/// Runs the CLI with `args`, stdout to `out_file`; returns the exit status.
int run(const std::string& args, const std::string& out_file = "out.txt",
        const std::string& env = "") {
    const std::string cmd = env + " '" + std::string(PORTMANTEAU_CLI) + "' " + args + " > '" +
                            path_of(out_file) + "' 2> '" + path_of("err.txt") + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& name) {
    std::ifstream in(path_of(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

const char* kArch = R"('{"process":"garch","omega":0.1,"alpha":[0.6]}')";

}  // namespace

TEST_CASE("simulate then test") {
    const std::string series = path_of("arch.csv");
    REQUIRE(run(std::string("simulate --model ") + kArch + " --n 300 --seed 5 --out '" + series + "'") == 0);
    REQUIRE(run("test '" + series + "' --fit arch:3 --lags 5,10", "test.csv") == 0);
    const auto rows = lines(slurp("test.csv"));
    REQUIRE(!rows.empty());
    CHECK(rows.front() == "statistic,m,value,p_value,null");
    CHECK(rows.size() == 1 + 8 * 2);
    bool has_lb = false;
    for (const auto& r : rows) has_lb = has_lb || r.rfind("Lb,", 0) == 0;
    CHECK(has_lb);

    REQUIRE(run("fit '" + series + "' --fit arch:1", "fit.json") == 0);
    const auto fit = nlohmann::json::parse(slurp("fit.json"));
    CHECK(fit.contains("alpha"));

    REQUIRE(run("test '" + series + "' --fit none --zero-mean --lags 4 --stats Cm --format json",
                "test.json") == 0);
    CHECK(nlohmann::json::parse(slurp("test.json")).dump().find("Cm") != std::string::npos);
}

TEST_CASE("simulation is reproducible and honours the seed variable") {
    const std::string model = R"('{"process":"arma","ar":[0.5]}')";
    REQUIRE(run("simulate --model " + model + " --n 50 --seed 1", "a.csv") == 0);
    REQUIRE(run("simulate --model " + model + " --n 50 --seed 1", "b.csv") == 0);
    REQUIRE(run("simulate --model " + model + " --n 50 --seed 2", "c.csv") == 0);
    REQUIRE(run("simulate --model " + model + " --n 50 --seed 2", "d.csv", "PORTMANTEAU_SEED=1") == 0);
    CHECK(slurp("a.csv") == slurp("b.csv"));
    CHECK(slurp("a.csv") != slurp("c.csv"));
    CHECK(slurp("a.csv") == slurp("d.csv"));
    CHECK(lines(slurp("a.csv")).size() == 51);
}

TEST_CASE("exit codes") {
    {
        std::ofstream f(path_of("neg.csv"));
        f << "date,price\n2024-01-02,100\n2024-01-03,-1\n";
    }
    CHECK(run("test '" + path_of("neg.csv") + "' --fit none") == 2);
    CHECK(slurp("err.txt").find("line 3") != std::string::npos);

    {
        std::ofstream f(path_of("flat.csv"));
        f << "value\n";
        for (int i = 0; i < 100; ++i) f << "1.0\n";
    }
    CHECK(run("fit '" + path_of("flat.csv") + "' --fit ar:1") == 3);
    CHECK(run("fit '" + path_of("flat.csv") + "' --fit bogus") == 1);
    CHECK(run("mc --config '{\"schema_version\":1,\"extra\":0}'") == 1);
    CHECK(run("no-such-command") != 0);
}

TEST_CASE("mc writes parseable tables") {
    const std::string config = R"('{"schema_version":1,"generator":{"process":"arma","ar":[0.5]},)"
                               R"("fitter":{"kind":"true_model"},"n":[100],"m":[5],"levels":[0.05],)"
                               R"("replications":30,"statistics":["Cm","Q22"],"master_seed":9}')";
    const std::string one = path_of("mc1");
    const std::string two = path_of("mc2");
    REQUIRE(run("mc --config " + config + " --workers 1 --quiet --out '" + one + "'") == 0);
    REQUIRE(run("mc --config " + config + " --workers 2 --quiet --out '" + two + "'") == 0);
    const auto csv1 = slurp("mc1.csv");
    CHECK(csv1 == slurp("mc2.csv"));
    CHECK(lines(csv1).size() == 3);
    const auto j = nlohmann::json::parse(slurp("mc1.json"));
    CHECK(j.contains("cells"));
    CHECK(lines(slurp("mc1_plot.csv")).front() == "statistic,n,level,m,frequency");

    REQUIRE(run("mc --config " + config + " --workers 1 --quiet --out '" + path_of("mc3") + "'",
                "out.txt", "PORTMANTEAU_SEED=10") == 0);
    CHECK(slurp("mc3.csv") != csv1);
}
