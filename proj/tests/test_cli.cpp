#include "doctest.h"

#include <regex>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "support.hpp"
#include "vu/serialize.hpp"

using namespace vu;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run vu_cli(const std::string& args) {
    std::string cmd = std::string("\"") + VU_CLI_PATH + "\" " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 64") {
    CHECK(vu_cli("").code == 64);
    CHECK(vu_cli("frobnicate").code == 64);
    CHECK(vu_cli("report pie --study x").code == 64);
    CHECK(vu_cli("--help").code == 0);
}

TEST_CASE("validate: pass, failure naming the bound, unreadable file") {
    testing::TempDir dir;
    auto def = testing::small_study(2);
    write_file(dir.path / "ok.json", json(def).dump());
    auto ok = vu_cli("validate " + q(dir.path / "ok.json"));
    CHECK(ok.code == 0);
    CHECK(ok.out.find("PASSED") != std::string::npos);

    def.sequences[1].denoising_strength = 0.7;
    write_file(dir.path / "bad.json", json(def).dump());
    auto bad = vu_cli("validate " + q(dir.path / "bad.json"));
    CHECK(bad.code == 2);
    CHECK(bad.out.find("0.68") != std::string::npos);
    CHECK(vu_cli("validate --lenient " + q(dir.path / "bad.json")).code == 0);

    auto as_json = vu_cli("validate --format json " + q(dir.path / "bad.json"));
    CHECK(as_json.code == 2);
    CHECK(json::parse(as_json.out)["passed"] == false);

    write_file(dir.path / "junk.json", "{nope");
    CHECK(vu_cli("validate " + q(dir.path / "junk.json")).code == 2);
    CHECK(vu_cli("validate " + q(dir.path / "absent.json")).code == 3);
}

TEST_CASE("fixture, ingest, report and export") {
    testing::TempDir dir;
    auto data = "--data-dir " + q(dir.path / "data") + " ";
    auto fx = dir.path / "fx";
    REQUIRE(vu_cli("fixture --out " + q(fx)).code == 0);

    auto ingest = vu_cli(data + "ingest --study tokyo-pilot --definition " + q(fx / "study.json") +
                         " --participants " + q(fx / "participants.csv") + " --responses " +
                         q(fx / "responses.csv"));
    REQUIRE(ingest.code == 0);
    auto summary = json::parse(ingest.out);
    CHECK(summary["participants"]["accepted"] == 36);
    CHECK(summary["responses"]["accepted"] == 324);

    // a second ingest of the same rows is rejected row by row
    auto again = vu_cli(data + "ingest --study tokyo-pilot --responses " + q(fx / "responses.jsonl") +
                        " --format jsonl");
    CHECK(again.code == 3);

    auto a = vu_cli(data + "report metrics --study tokyo-pilot");
    auto b = vu_cli(data + "report metrics --study tokyo-pilot");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out)["status"] == "ok");

    auto text = vu_cli(data + "report metrics --study tokyo-pilot --group general --format text");
    CHECK(std::regex_search(text.out, std::regex("Shibuya +83 ▼")));
    CHECK(std::regex_search(text.out, std::regex("Shimokitazawa +86 ▲")));

    auto out_file = dir.path / "sem.csv";
    CHECK(vu_cli(data + "report semantic --study tokyo-pilot --k 3 --format csv --out " + q(out_file)).code == 0);
    CHECK(std::filesystem::file_size(out_file) > 0);
    CHECK(vu_cli(data + "report metrics --study tokyo-pilot --lexicon " + q(fx / "lexicon.csv")).code == 0);

    auto exported = vu_cli(data + "export --study tokyo-pilot responses --format csv");
    CHECK(exported.code == 0);
    CHECK(std::count(exported.out.begin(), exported.out.end(), '\n') >= 325);

    CHECK(vu_cli(data + "report metrics --study nothing-here").code == 3);
}

TEST_CASE("ingest with rejected rows exits 3") {
    testing::TempDir dir;
    auto data = "--data-dir " + q(dir.path / "data") + " ";
    write_file(dir.path / "study.json", json(testing::small_study(2)).dump());
    write_file(dir.path / "r.csv",
               "participant_id,group,sequence_id,guessed_area_id,q2,q3,q4,q5\n"
               "P1,local,s1,a1,,,,\n"
               "P1,local,s2,shibya,,,,\n");
    auto r = vu_cli(data + "ingest --study demo --definition " + q(dir.path / "study.json") + " --responses " +
                    q(dir.path / "r.csv"));
    CHECK(r.code == 3);
    CHECK(r.out.find("unknown area") != std::string::npos);

    auto other = testing::small_study(3);
    write_file(dir.path / "other.json", json(other).dump());
    CHECK(vu_cli(data + "ingest --study demo --definition " + q(dir.path / "other.json")).code == 3);
}

}
