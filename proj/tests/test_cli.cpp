#include "doctest.h"

#include "cli.hpp"
#include "oracles.hpp"
#include "satfarey/saturated_set.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "satfarey");
    std::ostringstream out, err;
    const int code = satfarey::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);)
        out.push_back(line);
    return out;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("satfarey_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("phi subcommand reproduces the table")
{
    const auto r = run({"phi", "--from", "3", "--to", "20"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 19);
    CHECK(l[0] == "Q,phi,S");
    CHECK(l[1] == "3,1,1");
    CHECK(l[8] == "10,4,12");
    CHECK(l[16] == "18,4,32");
    CHECK(l[17] == "19,4,36");
    CHECK(l[18] == "20,5,41");
}

TEST_CASE("generate matches the scan oracle byte for byte")
{
    for (const char* method : {"filter", "incremental", "both"}) {
        const auto r = run({"generate", "--q", "40", "--method", method});
        REQUIRE(r.code == 0);
        std::ostringstream expected;
        expected << "Q,idx,a,q,inv,h\n";
        const auto ref = oracle::saturated_scan(40);
        for (std::size_t i = 0; i < ref.size(); ++i)
            expected << "40," << i + 1 << ',' << ref[i].a << ',' << ref[i].q << ',' << ref[i].inv << ',' << ref[i].h
                     << '\n';
        CHECK(r.out == expected.str());
    }
}

TEST_CASE("pairs has one row per consecutive pair")
{
    const auto r = run({"pairs", "--q", "100"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    CHECK(l[0] == "Q,q1,q2,r,mediant_pos,cell,wcell");
    CHECK(l.size() - 1 == satfarey::build_filter(100).size() - 1);
    CHECK(std::find(l.begin(), l.end(), "100,27,14,9,4,V3,W9_4") != l.end());
    for (std::size_t i = 1; i < l.size(); ++i) {
        CHECK(l[i].find(",outside,") == std::string::npos);
        if (l[i].find(",1,0,") != std::string::npos)
            CHECK(l[i].find(",W1") != std::string::npos);
    }
}

TEST_CASE("delta lists each insertion with its vanished pair")
{
    const auto r = run({"delta", "--q", "20"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 1 + 3 * 5);
    CHECK(l[0] == "Q,kind,a,q");
    CHECK(std::find(l.begin(), l.end(), "20,inserted,4,9") != l.end());
    for (std::size_t i = 1; i < l.size(); i += 3) {
        CHECK(l[i].find(",inserted,") != std::string::npos);
        CHECK(l[i + 1].find(",vanished_left,") != std::string::npos);
        CHECK(l[i + 2].find(",vanished_right,") != std::string::npos);
    }
    const auto range = run({"delta", "--from", "4", "--to", "20"});
    REQUIRE(range.code == 0);
    CHECK(lines(range.out).size() == 1 + 3 * (41 - 1));
}

TEST_CASE("index-sum, count, regions, farey-baseline")
{
    const auto isum = run({"index-sum", "--from", "3", "--to", "30"});
    CHECK(isum.code == 0);
    CHECK(lines(isum.out).size() == 29);
    CHECK(lines(isum.out)[18] == "20,41,122,122,true");

    const auto count = run({"count", "--q", "200", "--beta", "0,0.5,1"});
    REQUIRE(count.code == 0);
    const auto cl = lines(count.out);
    REQUIRE(cl.size() == 4);
    CHECK(cl[1].rfind("200,0,0,0,", 0) == 0);

    const auto pt = run({"regions", "--q", "100", "--q1", "75", "--q2", "60"});
    REQUIRE(pt.code == 0);
    CHECK(lines(pt.out)[1] == "75,60,100,1,1,0,0,V1");

    const auto tab = run({"regions", "--q", "200"});
    REQUIRE(tab.code == 0);
    CHECK(tab.out.find("outside") == std::string::npos);

    const auto list = run({"regions", "--list"});
    REQUIRE(list.code == 0);
    CHECK(lines(list.out).size() == 1 + 15);

    const auto base = run({"farey-baseline", "--q", "500"});
    REQUIRE(base.code == 0);
    CHECK(base.out.find("# fitted_constant,") != std::string::npos);
}

TEST_CASE("density emits the JSON report")
{
    const auto r = run({"density", "--q", "300", "--box", "0.6,0.7,0.45,0.55", "--box", "1/5,3/10,2/5,3/5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["q"] == 300);
    REQUIRE(j["entries"].size() == 2);
    CHECK(j["entries"][1]["cell"] == 2);
    CHECK(j["entries"][1]["box"][0].get<double>() == 0.2);
    CHECK(j.contains("fitted_constant"));

    const auto bad = run({"density", "--q", "300", "--box", "0.4,0.6,0.3,0.5", "--box", "0.6,0.7,0.45,0.55"});
    CHECK(bad.code == 2);
}

TEST_CASE("verify passes on a small range")
{
    const auto r = run({"verify", "--q-max", "80"});
    CHECK(r.code == 0);
    const auto l = lines(r.out);
    CHECK(l.size() == 9);
    for (const auto& line : l)
        CHECK(line.rfind("ok ", 0) == 0);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"generate"}).code == 2);
    CHECK(run({"generate", "--q", "2"}).code == 2);
    CHECK(run({"generate", "--q", "x"}).code == 2);
    CHECK(run({"generate", "--q", "10", "--method", "magic"}).code == 2);
    CHECK(run({"pairs", "--q", "3"}).code == 2);
    CHECK(run({"phi", "--from", "10", "--to", "5"}).code == 2);
    CHECK(run({"index-sum"}).code == 2);
    CHECK(run({"count", "--q", "50", "--beta", "2"}).code == 2);
    CHECK(run({"density", "--q", "300", "--box", "0.6,0.7,0.45,0.55"}).code == 2);
    CHECK(run({"generate", "--q", "10", "--out", "/nonexistent/dir/x.csv"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("thread count from the environment")
{
    ::setenv("SATFAREY_THREADS", "3", 1);
    const auto three = run({"generate", "--q", "300"});
    ::setenv("SATFAREY_THREADS", "zero", 1);
    const auto bad = run({"generate", "--q", "300"});
    ::unsetenv("SATFAREY_THREADS");
    const auto one = run({"generate", "--q", "300"});
    CHECK(three.code == 0);
    CHECK(bad.code == 2);
    CHECK(three.out == one.out);
}

TEST_CASE("file output is byte-identical across runs")
{
    TempDir dir;
    const std::vector<std::vector<std::string>> commands{
        {"generate", "--q", "150"},
        {"pairs", "--q", "150"},
        {"phi", "--from", "3", "--to", "150"},
        {"delta", "--q", "150"},
        {"density", "--q", "400"},
    };
    int n = 0;
    for (auto cmd : commands) {
        const fs::path a = dir.path / ("a" + std::to_string(n) + ".out");
        const fs::path b = dir.path / ("b" + std::to_string(n) + ".out");
        ++n;
        auto ca = cmd, cb = cmd;
        ca.insert(ca.end(), {"--out", a.string()});
        cb.insert(cb.end(), {"--out", b.string()});
        REQUIRE(run(ca).code == 0);
        REQUIRE(run(cb).code == 0);
        const std::string sa = slurp(a);
        CHECK(!sa.empty());
        CHECK(sa == slurp(b));
    }
}
