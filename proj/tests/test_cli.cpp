#include "gpfsum/cli.hpp"
#include "gpfsum/dd.hpp"
#include "gpfsum/error.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.status = gpfsum::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "gpfsum_test_cli";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove(p);
    return p;
}

} // namespace

TEST_CASE("argument errors exit with 2") {
    CHECK(cli({}).status == gpfsum::kExitInvalidArgs);
    CHECK(cli({"frobnicate"}).status == 2);
    CHECK(cli({"sb", "--bogus"}).status == 2);
    CHECK(cli({"sb", "--threads", "0"}).status == 2);
    CHECK(cli({"sb", "--threads", "many"}).status == 2);
    CHECK(cli({"sb", "--format", "xml"}).status == 2);
    CHECK(cli({"sb", "--mode", "fast"}).status == 2);
    CHECK(cli({"sb", "--segment-size", "3"}).status == 2);
    CHECK(cli({"sb", "--resume"}).status == 2);
    CHECK(cli({"sb", "--digits", "40"}).status == 2);
    CHECK(cli({"pz", "--s", "1.5"}).status == 2);
    CHECK(cli({"pz", "--s", "two"}).status == 2);
    CHECK(cli({"pz", "--order", "3"}).status == 2);
    CHECK(cli({"check-bounds", "--from", "60000000", "--to", "59000000"}).status == 2);
    CHECK(cli({"oracle", "--max-n", "200000000"}).status == 2);

    const Run r = cli({"sb", "--bogus"});
    CHECK(r.out.empty());
    CHECK(r.err.find("--bogus") != std::string::npos);
}

TEST_CASE("the thread-count environment variable is validated") {
    ::setenv(gpfsum::kThreadsEnv, "zero", 1);
    CHECK(cli({"pz", "--s", "3"}).status == 2);
    ::setenv(gpfsum::kThreadsEnv, "0", 1);
    CHECK(cli({"pz", "--s", "3"}).status == 2);
    ::setenv(gpfsum::kThreadsEnv, "3", 1);
    const Run r = cli({"pz", "--s", "3", "--format", "structured"});
    CHECK(r.status == 0);
    CHECK(ordered_json::parse(r.out)["execution"]["threads"] == 3);
    ::unsetenv(gpfsum::kThreadsEnv);
}

TEST_CASE("help exits cleanly") {
    const Run r = cli({"--help"});
    CHECK(r.status == 0);
    CHECK(r.out.find("check-bounds") != std::string::npos);
    CHECK(cli({"sb", "--help"}).status == 0);
}

TEST_CASE("accelerated runs below the proven range exit with 3") {
    const Run r = cli({"sb", "--x", "1000"});
    CHECK(r.status == gpfsum::kExitPrecondition);
    CHECK(r.err.find("51841229") != std::string::npos);
    CHECK(cli({"sa", "--x", "51841228"}).status == 3);
    CHECK(cli({"check-bounds", "--from", "1000", "--to", "2000"}).status == 3);
}

TEST_CASE("checkpoint trouble exits with 4") {
    CHECK(cli({"sb", "--x", "60000000", "--checkpoint", "/nonexistent/dir/cp.json"}).status == gpfsum::kExitIo);

    const fs::path bad = scratch("garbage.json");
    {
        std::ofstream f(bad);
        f << "not a checkpoint\n";
    }
    CHECK(cli({"sb", "--x", "60000000", "--checkpoint", bad.string(), "--resume"}).status == 4);
}

TEST_CASE("oracle cap is a computation error") {
    const Run r = cli({"oracle", "--n", "20000000"});
    CHECK(r.status == gpfsum::kExitComputation);
    CHECK(r.err.find("raise the cap") != std::string::npos);
}

TEST_CASE("pz prints the tabulated second derivative") {
    const Run r = cli({"pz", "--order", "2", "--s", "4"});
    CHECK(r.status == 0);
    CHECK(r.out.find("0.05152913498770698528430538816473") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);

    const Run k = cli({"pz", "--order", "1", "--s", "2", "--constants"});
    CHECK(k.status == 0);
    CHECK(k.out.find("FAIL") == std::string::npos);
}

TEST_CASE("structured reports round trip byte for byte") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"pz", "--s", "2.5", "--order", "1", "--format", "structured"},
             {"sa", "--mode", "raw", "--x", "1000", "--format", "structured"},
             {"oracle", "--n", "10000", "--format", "structured"},
             {"check-bounds", "--from", "51841373", "--to", "51900000", "--format", "structured"}}) {
        const Run r = cli(args);
        CAPTURE(args[0]);
        CHECK(r.status == 0);
        CHECK(gpfsum::rerender_report(r.out) == r.out);
        const auto j = ordered_json::parse(r.out);
        CHECK(j["schema_version"] == gpfsum::kReportSchemaVersion);
        CHECK(j["command"] == args[0]);
        CHECK(j.contains("execution"));
        CHECK(r.out.find("\"execution\"") != std::string::npos);
        CHECK(gpfsum::strip_execution(r.out).find("elapsed_ms") == std::string::npos);
    }
    CHECK_THROWS_AS(gpfsum::rerender_report("{"), gpfsum::InvalidArgument);
}

TEST_CASE("structured numbers carry exact bit patterns") {
    const Run r = cli({"sa", "--mode", "raw", "--x", "1000", "--format", "structured"});
    const auto j = ordered_json::parse(r.out);
    const auto& partial = j["result"]["partial"];
    const double hi = gpfsum::from_hex_bits(partial["hi"].get<std::string>());
    const double lo = gpfsum::from_hex_bits(partial["lo"].get<std::string>());
    CHECK(hi + lo < 8.115653111459);
    CHECK(hi > 8.0);
    CHECK(partial["decimal"].get<std::string>().rfind("8.06566934838671337", 0) == 0);
    CHECK(j["result"]["enclosure"]["hi"]["decimal"] == "inf");
    CHECK(j["status"] == "PASS");
}

TEST_CASE("threads and segment sizes leave numerical fields unchanged") {
    const std::vector<std::string> base = {"sb", "--x", "60000000", "--format", "structured"};
    auto with = [&](std::vector<std::string> extra) {
        std::vector<std::string> a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        const Run r = cli(a);
        REQUIRE(r.status == 0);
        return r.out;
    };
    const std::string one = with({"--threads", "1"});
    const std::string reference = gpfsum::strip_execution(one);
    CHECK(reference == gpfsum::strip_execution(with({"--threads", "3", "--segment-size", "65536"})));
    CHECK(reference == gpfsum::strip_execution(with({"--threads", "2", "--segment-size", "4194304"})));
    CHECK(one != with({"--threads", "2"}));  // the execution section does record the difference

    const auto j = ordered_json::parse(one);
    CHECK(j["result"]["certified_digits"].get<std::string>().rfind("2.2544353595", 0) == 0);
}

TEST_CASE("stop, then resume through the command line") {
    const fs::path cp = scratch("sb_resume.json");
    const std::vector<std::string> base = {"sb", "--x", "60000000", "--format", "structured",
                                           "--checkpoint", cp.string()};
    auto args = base;
    args.insert(args.end(), {"--stop-after-blocks", "2", "--checkpoint-every", "1"});
    const Run first = cli(args);
    REQUIRE(first.status == 0);
    const auto partial = ordered_json::parse(first.out);
    CHECK(partial["result"]["complete"] == false);
    CHECK(partial["result"]["enclosure"].is_null());
    CHECK(fs::exists(cp));

    auto resume = base;
    resume.push_back("--resume");
    const Run second = cli(resume);
    REQUIRE(second.status == 0);
    CHECK(ordered_json::parse(second.out)["execution"]["resumed"] == true);

    const Run fresh = cli({"sb", "--x", "60000000", "--format", "structured"});
    auto strip_path = [](const std::string& s) { return gpfsum::strip_execution(s); };
    CHECK(strip_path(second.out) == strip_path(fresh.out));

    // A checkpoint for another x is refused.
    CHECK(cli({"sb", "--x", "61000000", "--checkpoint", cp.string(), "--resume"}).status == 4);
}

TEST_CASE("check-bounds and oracle report pass and fail through the exit status") {
    const Run clean = cli({"check-bounds", "--from", "51841373", "--to", "51900000"});
    CHECK(clean.status == 0);
    CHECK(clean.out.find("violations          0") != std::string::npos);

    const Run dirty = cli({"check-bounds", "--from", "51841229", "--to", "51900000"});
    CHECK(dirty.status == gpfsum::kExitCheckFailed);
    CHECK(dirty.out.find("upper side at x = 51841271") != std::string::npos);

    const Run small = cli({"oracle", "--n", "10000"});
    CHECK(small.status == 0);
    CHECK(small.out.find("4.8165071963") != std::string::npos);
}
