// End-to-end checks of the rulemc binary: exit codes, verdict wording,
// file outputs. Takes the path to the binary as argv[1].
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAILED: " << what << '\n';
    }
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Harness {
public:
    explicit Harness(std::string binary) : binary_(std::move(binary)) {
        dir_ = fs::temp_directory_path() / ("rulemc_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    ~Harness() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }

    fs::path write(const std::string& name, const std::string& content) {
        fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

    const fs::path& dir() const { return dir_; }

    RunResult run(const std::string& args) {
        const fs::path out = dir_ / "stdout.txt";
        const fs::path err = dir_ / "stderr.txt";
        const std::string cmd =
            binary_ + " " + args + " > " + out.string() + " 2> " + err.string();
        const int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

private:
    std::string binary_;
    fs::path dir_;
};

const char* kExampleRules =
    "r0: p0 -> p1 & p4\n"
    "r1: p1 -> ~p4\n"
    "r2: ~p2 -> p0 & p1\n"
    "r3: p0 | p3 -> p4\n"
    "r4: p4 -> p3\n";

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: rulemc_cli_tests <path-to-rulemc>\n";
        return 2;
    }
    Harness h(argv[1]);
    const fs::path example = h.write("example.rules", kExampleRules);
    const fs::path clean = h.write("clean.rules", "r0: p0 -> p1\nr1: p1 -> p2\n");
    const fs::path broken = h.write("broken.rules", "r0: p0 -> p1 | p2\n");

    {  // check: findings -> exit 1, text output names them
        RunResult r = h.run("check " + example.string());
        check(r.exit_code == 1, "check example exits 1, got " + std::to_string(r.exit_code));
        check(r.out.find("CONFLICT") != std::string::npos, "check text mentions the conflict");
        check(r.out.find("r2: UNREACHABLE") != std::string::npos, "check text flags r2");
    }
    {  // check: clean base -> exit 0
        RunResult r = h.run("check " + clean.string());
        check(r.exit_code == 0, "check clean exits 0, got " + std::to_string(r.exit_code));
    }
    {  // check --format json matches the schema and parses
        RunResult r = h.run("check --format json " + example.string());
        check(r.exit_code == 1, "json check exits 1");
        auto j = nlohmann::json::parse(r.out, nullptr, false);
        check(!j.is_discarded(), "json output parses");
        if (!j.is_discarded()) {
            check(j["rules"] == 5, "json rules count");
            check(j["all_rules_used"] == false, "json all_rules_used");
            check(j["conflicts"].size() == 2, "json conflicts size");
            check(j["stats"]["location_pairs"] == 49, "json location pairs");
        }
    }
    {  // text and json report the same findings
        RunResult text = h.run("check " + example.string());
        RunResult json = h.run("check --format json " + example.string());
        check(text.exit_code == json.exit_code, "text and json formats agree on exit code");

        auto j = nlohmann::json::parse(json.out, nullptr, false);
        if (!j.is_discarded()) {
            int confirmed = 0;
            for (const auto& c : j["conflicts"])
                if (c["confirmed"] == true) ++confirmed;
            int unreachable = 0;
            for (const auto& f : j["reachability"])
                if (f["reachable"] == false) ++unreachable;

            auto count_in = [](const std::string& haystack, const std::string& needle) {
                int n = 0;
                for (size_t pos = haystack.find(needle); pos != std::string::npos;
                     pos = haystack.find(needle, pos + needle.size()))
                    ++n;
                return n;
            };
            check(count_in(text.out, "CONFLICT") == confirmed,
                  "text lists the same confirmed conflicts as json");
            check(count_in(text.out, "UNREACHABLE") == unreachable,
                  "text lists the same unreachable rules as json");
        }
    }
    {  // parse error -> exit 2 with location
        RunResult r = h.run("check " + broken.string());
        check(r.exit_code == 2, "parse error exits 2, got " + std::to_string(r.exit_code));
        check(r.err.find("1:14") != std::string::npos, "parse error carries line:column");
    }
    {  // missing file -> exit 2
        RunResult r = h.run("check " + (h.dir() / "nope.rules").string());
        check(r.exit_code == 2, "missing file exits 2");
    }
    {  // query wording matches the verifier phrasing
        RunResult sat = h.run("query " + example.string() + " \"E<> es1.r0 and es2.r1\"");
        check(sat.exit_code == 0, "satisfied query exits 0");
        check(sat.out == "property is satisfied\n", "satisfied wording");

        RunResult unsat = h.run("query " + example.string() + " \"E<> es1.r2\"");
        check(unsat.exit_code == 1, "unsatisfied query exits 1");
        check(unsat.out == "property is not satisfied\n", "unsatisfied wording");

        RunResult ag = h.run("query " + example.string() + " \"A[] not es1.r2\"");
        check(ag.exit_code == 0, "A[] dual satisfied");
        check(ag.out == "property is satisfied\n", "A[] wording");

        RunResult bad = h.run("query " + example.string() + " \"E<> es1.r9\"");
        check(bad.exit_code == 2, "bad query exits 2");
    }
    {  // query --witness prints a replayable-looking trace
        RunResult r = h.run("query --witness " + example.string() + " \"E<> es1.r0 and es2.r1\"");
        check(r.exit_code == 0, "witness query exits 0");
        check(r.out.find("witness:") != std::string::npos, "witness header printed");
        check(r.out.find("step 4") != std::string::npos, "four steps printed");
        check(r.out.find("initp()") != std::string::npos, "init step labelled");
    }
    {  // export writes the three files
        const fs::path base = h.dir() / "example_export";
        RunResult r = h.run("export --out " + base.string() + " " + example.string());
        check(r.exit_code == 0, "export exits 0");
        check(fs::exists(base.string() + ".xml"), "model file written");
        check(fs::exists(base.string() + ".q"), "queries file written");
        check(fs::exists(base.string() + ".manifest.json"), "manifest written");
        const std::string q = slurp(base.string() + ".q");
        check(q.find("E<> es1.r0 and es2.r1\n") != std::string::npos, "conflict query verbatim");
        check(q.find("E<> forall (i:typem) r[i]==true\n") != std::string::npos,
              "all-used query verbatim");
    }
    {  // export into a missing directory -> exit 2
        RunResult r =
            h.run("export --out " + (h.dir() / "no_such_dir" / "x").string() + " " + example.string());
        check(r.exit_code == 2, "export I/O error exits 2");
    }
    {  // stats prints the bound next to the measured pairs
        RunResult r = h.run("stats " + example.string());
        check(r.exit_code == 0, "stats exits 0");
        check(r.out.find("states: 706") != std::string::npos, "stats states");
        check(r.out.find("location pairs: 49") != std::string::npos, "stats pairs");
        check(r.out.find("64") != std::string::npos, "stats bound");

        RunResult js = h.run("stats --format json " + example.string());
        auto j = nlohmann::json::parse(js.out, nullptr, false);
        check(!j.is_discarded() && j["states"] == 706 && j["location_pairs"] == 49 &&
                  j["location_pair_bound"] == 64,
              "stats json fields");
    }
    {  // --seed selects the LHS to seed from
        RunResult r = h.run("query --seed 3 " + example.string() + " \"E<> es1.r4\"");
        check(r.exit_code == 0, "seeded query runs");
    }
    {  // --cap surfaces the resource limit as exit 3
        RunResult r = h.run("check --cap 3 " + example.string());
        check(r.exit_code == 3, "cap hit exits 3, got " + std::to_string(r.exit_code));
        check(r.err.find("state cap") != std::string::npos, "cap error message");
    }

    if (failures == 0) {
        std::cout << "cli tests: all passed\n";
        return 0;
    }
    std::cerr << "cli tests: " << failures << " failure(s)\n";
    return 1;
}
