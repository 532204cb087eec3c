// Exercises the installed CLI binary end to end: exit-code contract,
// JSON determinism, describe output.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "aqec/json_io.hpp"

namespace {

int failures = 0;

int run(const std::string& args) {
    const std::string cmd = std::string(AQEC_BIN) + " " + args;
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

void expect(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main() {
    expect(run("describe bitflip3 > /tmp/aqec_desc.txt") == 0, "describe bitflip3 exits 0");
    {
        const std::string text = slurp("/tmp/aqec_desc.txt");
        expect(text.find("d_a=2") != std::string::npos && text.find("d_h=8") != std::string::npos &&
                   text.find("kraus=4") != std::string::npos,
               "describe bitflip3 prints dimensions and Kraus count");
    }
    expect(run("describe b_scrambling > /tmp/aqec_desc2.txt") == 0, "describe b_scrambling exits 0");
    {
        const std::string text = slurp("/tmp/aqec_desc2.txt");
        expect(text.find("delta") != std::string::npos, "describe b_scrambling states the bound");
    }
    expect(run("describe nonsense 2>/dev/null") == 1, "describe with an unknown name exits 1");

    expect(run("run --code bitflip3 --noise bitflip3 --scenario perfect_check --format human "
               "> /dev/null") == 0,
           "perfect_check on bitflip3 exits 0");

    // ad4 is not perfectly correctable: perfect_check reports a violated
    // bound, which is exit code 2 (distinct from usage errors).
    expect(run("run --code ad4 --noise ad4 --scenario perfect_check --restarts 8 "
               "> /dev/null") == 2,
           "perfect_check on ad4 exits 2 (violated bound)");

    expect(run("run --code bitflip3 --noise bitflip3 --scenario b_scrambling 2>/dev/null") == 1,
           "inapplicable scenario is a usage error (exit 1)");
    expect(run("run --code missing.json --noise bitflip3 2>/dev/null") == 1,
           "missing code file exits 1");
    expect(run("run --code bitflip3 --noise gauge422 2>/dev/null") == 1,
           "dimension mismatch between sources exits 1");

    expect(run("run --code ad4 --noise ad4 --scenario subspace --seed 7 --restarts 8 "
               "--format json --out /tmp/aqec_run1.json") == 0,
           "subspace scenario on ad4 exits 0");
    expect(run("run --code ad4 --noise ad4 --scenario subspace --seed 7 --restarts 8 "
               "--format json --out /tmp/aqec_run2.json") == 0,
           "second identical run exits 0");
    {
        auto j1 = nlohmann::ordered_json::parse(slurp("/tmp/aqec_run1.json"));
        auto j2 = nlohmann::ordered_json::parse(slurp("/tmp/aqec_run2.json"));
        j1.erase("timestamp");
        j2.erase("timestamp");
        expect(j1 == j2, "same config and seed give byte-identical reports modulo timestamp");
        expect(j1["reports"].size() == 3, "subspace run emits three reports");
    }

    // run_all on a gauge pair marks inapplicable scenarios as skipped.
    expect(run("run --code gauge422 --noise gauge422 --scenario all --seed 3 --restarts 8 "
               "--format json --out /tmp/aqec_all.json") == 0,
           "scenario all on gauge422 exits 0");
    {
        auto j = nlohmann::ordered_json::parse(slurp("/tmp/aqec_all.json"));
        bool skipped_subspace = false;
        for (const auto& s : j["skipped"])
            if (s["scenario"] == "subspace") skipped_subspace = true;
        expect(skipped_subspace, "subspace is skipped with a reason for gauge codes");
    }

    // Round trip a channel and code through files.
    {
        using namespace aqec;
        const GalleryEntry g = gallery("bitflip3");
        write_text_file("/tmp/aqec_code.json", code_to_json(g.code).dump());
        write_text_file("/tmp/aqec_noise.json", channel_to_json(g.noise).dump());
        expect(run("run --code /tmp/aqec_code.json --noise /tmp/aqec_noise.json "
                   "--scenario perfect_check > /dev/null") == 0,
               "file-based code and channel inputs run");
    }

    // AQEC_SEED is the fallback seed when --seed is absent.
    {
        const int st = std::system(("AQEC_SEED=7 " + std::string(AQEC_BIN) +
                                    " run --code ad4 --noise ad4 --scenario subspace --restarts 8"
                                    " --format json --out /tmp/aqec_env.json")
                                       .c_str());
        expect(st != -1 && WEXITSTATUS(st) == 0, "env-seeded run exits 0");
    }
    {
        auto je = nlohmann::ordered_json::parse(slurp("/tmp/aqec_env.json"));
        auto j1 = nlohmann::ordered_json::parse(slurp("/tmp/aqec_run1.json"));
        je.erase("timestamp");
        j1.erase("timestamp");
        expect(je == j1, "AQEC_SEED=7 reproduces the --seed 7 run");
    }

    expect(run("run --code bitflip3 --noise bitflip3 --scenario perfect_check --format csv "
               "--out /tmp/aqec_run.csv") == 0,
           "csv output run exits 0");
    {
        const std::string csv = slurp("/tmp/aqec_run.csv");
        expect(csv.rfind("name,lhs,rhs", 0) == 0 && csv.find("perfect_form_a") != std::string::npos,
               "csv output has a header and one row per bound");
    }

    // Config file provides values, flags override.
    {
        aqec::write_text_file("/tmp/aqec_cfg.json", R"({"seed": 7, "restarts": 8})");
        expect(run("run --code ad4 --noise ad4 --scenario subspace --config /tmp/aqec_cfg.json "
                   "--format json --out /tmp/aqec_run3.json") == 0,
               "config file run exits 0");
        auto j1 = nlohmann::ordered_json::parse(slurp("/tmp/aqec_run1.json"));
        auto j3 = nlohmann::ordered_json::parse(slurp("/tmp/aqec_run3.json"));
        j1.erase("timestamp");
        j3.erase("timestamp");
        expect(j1 == j3, "config file seed/restarts reproduce the flag-based run");
    }

    if (failures == 0) std::printf("cli tests passed\n");
    return failures == 0 ? 0 : 1;
}
