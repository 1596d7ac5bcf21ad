#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
    std::string cmd = std::string(LHDL_BIN) + " " + args + " >/dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string tmp(const std::string& leaf)
{
    fs::path p = fs::path(LHDL_TMP) / leaf;
    fs::remove_all(p);
    fs::create_directories(p.parent_path());
    return p.string();
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("usage errors exit with 2")
{
    CHECK(run("") == 2);
    CHECK(run("no-such-command") == 2);
    std::string cfg = tmp("bad.cfg");
    std::ofstream(cfg) << "[model]\nname = \"pm1\"\ncolour = 3\n";
    CHECK(run("validate --config " + cfg + " --out " + tmp("bad")) == 2);
    CHECK(run("validate --model nosuchmodel --out " + tmp("bad2")) == 2);
}

TEST_CASE("validate succeeds on the built-ins")
{
    CHECK(run("validate --model pm1 --out " + tmp("v1")) == 0);
    CHECK(fs::exists(fs::path(LHDL_TMP) / "v1" / "conditions.txt"));
    CHECK(fs::exists(fs::path(LHDL_TMP) / "v1" / "manifest.cfg"));
    CHECK(run("validate --model two-lane --gamma 1.5 --out " + tmp("v2")) == 0);
}

TEST_CASE("a manifest replays solve-pde bit for bit")
{
    std::string a = tmp("pde_a"), b = tmp("pde_b");
    REQUIRE(run("solve-pde --m 64 --t-end 0.05 --out " + a) == 0);
    REQUIRE(run("solve-pde --config " + a + "/manifest.cfg --out " + b) == 0);
    CHECK(slurp(a + "/pde.csv") == slurp(b + "/pde.csv"));
    CHECK(!slurp(a + "/pde.csv").empty());
}

TEST_CASE("a manifest replays simulate including the seed")
{
    std::string a = tmp("sim_a"), b = tmp("sim_b");
    REQUIRE(run("simulate --n 128 --t-end 0.02 --seed 77 --out " + a) == 0);
    REQUIRE(run("simulate --config " + a + "/manifest.cfg --out " + b) == 0);
    CHECK(slurp(a + "/snapshots.csv") == slurp(b + "/snapshots.csv"));
    CHECK(slurp(a + "/final_state.bin") == slurp(b + "/final_state.bin"));
    // a manifest from another command is refused
    CHECK(run("validate --config " + a + "/manifest.cfg --out " + tmp("wrong")) == 2);
}
