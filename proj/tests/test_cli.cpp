#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "totalimage/cli.hpp"
#include "totalimage/corpus.hpp"
#include "totalimage/mapfile.hpp"

using namespace totalimage;

namespace {

const char *kCremonaFile = "domain-vars: x0 x1 x2\n"
                           "target-vars: y0 y1 y2\n"
                           "flavor: projective\n"
                           "map: y0 = x1*x2; y1 = x0*x2; y2 = x0*x1\n";

const char *kWhitneyFile = "# Whitney umbrella\n"
                           "domain-vars: u v\n"
                           "target-vars: x y z\n"
                           "flavor: affine\n"
                           "map: x = u*v; y = u\n"
                           "map: z = v^2\n";

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string &name, const std::string &text) {
  auto p = std::filesystem::temp_directory_path() / ("totalimage_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

int parse_error_line(const std::string &text) {
  try {
    parse_map_file(text);
  } catch (const ParseError &e) {
    return e.line;
  }
  return -1;
}

} // namespace

TEST(MapFile, ParsesCremona) {
  RationalMap f = parse_map_file(kCremonaFile);
  EXPECT_EQ(f.flavor, Flavor::projective);
  EXPECT_EQ(f.target->vars, (std::vector<std::string>{"y0", "y1", "y2"}));
  EXPECT_EQ(f.coords[0].to_string(), "x1*x2");
}

TEST(MapFile, CommentsAndSplitMapLines) {
  RationalMap f = parse_map_file(kWhitneyFile);
  EXPECT_EQ(f.flavor, Flavor::affine);
  EXPECT_EQ(f.coords[2].to_string(), "v^2");
}

TEST(MapFile, DefaultsToProjective) {
  RationalMap f = parse_map_file("domain-vars: x y\ntarget-vars: a b\nmap: a = x; b = y\n");
  EXPECT_EQ(f.flavor, Flavor::projective);
}

TEST(MapFile, DomainIdeal) {
  RationalMap f = parse_map_file("domain-vars: x y z\ntarget-vars: a b\ndomain-ideal: x*y - z^2; x - y\n"
                                 "map: a = x; b = z\n");
  EXPECT_EQ(f.domain_ideal.gens().size(), 2u);
}

TEST(MapFile, UndeclaredVariableReportsPosition) {
  try {
    parse_map_file("domain-vars: x y\ntarget-vars: a b\nmap: a = x; b = w\n");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line, 3);
    EXPECT_EQ(e.column, 17);
  }
}

TEST(MapFile, SemanticErrors) {
  EXPECT_EQ(parse_error_line("domain-vars: x y\ntarget-vars: a b\nmap: a = x^2; b = y\n"), 3); // inhomogeneous
  EXPECT_EQ(parse_error_line("domain-vars: x y\ntarget-vars: a b\nmap: a = x\n"), 3);          // missing b
  EXPECT_EQ(parse_error_line("domain-vars: x y\ntarget-vars: a b\nmap: a = x; a = y\n"), 3);   // duplicate
  EXPECT_EQ(parse_error_line("domain-vars: x y\ntarget-vars: a b\nmap: c = x\n"), 3);          // unknown target
  EXPECT_EQ(parse_error_line("domain-vars: x x\n"), 1);
  EXPECT_EQ(parse_error_line("domain-vars: x\ncolour: red\n"), 2);
  EXPECT_EQ(parse_error_line("domain-vars: x\ntarget-vars: a\nflavor: weird\n"), 3);
  EXPECT_EQ(parse_error_line("domain-vars: x\ntarget-vars: a\n"), 3);
  EXPECT_EQ(parse_error_line("domain-vars: x\ntarget-vars: x\nmap: x = x\n"), 2);
  EXPECT_EQ(parse_error_line("domain-vars: x\nno colon here\n"), 2);
}

TEST(MapFile, CorpusRoundTrip) {
  for (auto &nm : corpus_maps()) {
    std::string text = emit_map_file(nm.map);
    RationalMap back = parse_map_file(text);
    EXPECT_EQ(back.flavor, nm.map.flavor) << nm.name;
    EXPECT_EQ(back.domain->vars, nm.map.domain->vars) << nm.name;
    EXPECT_EQ(back.target->vars, nm.map.target->vars) << nm.name;
    ASSERT_EQ(back.coords.size(), nm.map.coords.size());
    for (std::size_t j = 0; j < back.coords.size(); ++j)
      EXPECT_EQ(back.coords[j].to_string(), nm.map.coords[j].to_string()) << nm.name;
    EXPECT_EQ(emit_map_file(back), text) << nm.name;
  }
}

TEST(Cli, ImageCremonaText) {
  CliRun r = cli({"image", write_temp("cremona.map", kCremonaFile)});
  EXPECT_EQ(r.code, 0) << r.err;
  int lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 10);
  EXPECT_EQ(r.out.substr(0, 15), "   (2) ideal()\n");
}

TEST(Cli, ImageJson) {
  CliRun r = cli({"image", write_temp("cremona.map", kCremonaFile), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["dim"], 2);
  EXPECT_EQ(j["children"].size(), 3u);
}

TEST(Cli, ClosureWhitney) {
  CliRun r = cli({"closure", write_temp("whitney.map", kWhitneyFile)});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "(2) ideal(y^2*z-x^2)\n");
}

TEST(Cli, ClosureModular) {
  CliRun r = cli({"closure", write_temp("whitney.map", kWhitneyFile), "--char", "32003"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "(2) ideal(y^2*z-x^2)\n");
  EXPECT_EQ(cli({"closure", write_temp("whitney.map", kWhitneyFile), "--char", "12"}).code, 2);
}

TEST(Cli, CharOnlyForClosure) {
  EXPECT_EQ(cli({"image", write_temp("whitney.map", kWhitneyFile), "--char", "32003"}).code, 2);
}

TEST(Cli, Member) {
  std::string file = write_temp("cremona.map", kCremonaFile);
  CliRun a = cli({"member", file, "--point", "1,1,0"});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, "not-in-image\n");
  CliRun b = cli({"member", file, "--point", "1/2,0,0"});
  EXPECT_EQ(b.out, "in-image\n");
  EXPECT_EQ(cli({"member", file, "--point", "1,1"}).code, 2);
  EXPECT_EQ(cli({"member", file, "--point", "1,x,0"}).code, 2);
  EXPECT_EQ(cli({"member", file, "--point", "0,0,0"}).code, 2);
}

TEST(Cli, ParseErrorExitCode) {
  CliRun r = cli({"image", write_temp("bad.map", "domain-vars: x y\ntarget-vars: a b\nmap: a = x; b = w\n")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("3:17"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"image", "/nonexistent/file.map"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
}

TEST(Cli, ComputationLimitExitCode) {
  CliRun r = cli({"image", write_temp("cremona.map", kCremonaFile), "--max-pairs", "1"});
  EXPECT_EQ(r.code, 3) << r.out;
  CliRun d = cli({"image", write_temp("cremona.map", kCremonaFile), "--max-depth", "0"});
  EXPECT_EQ(d.code, 3);
  EXPECT_NE(d.err.find("partial tree"), std::string::npos);
  // The guard does not leak into later runs.
  EXPECT_EQ(cli({"image", write_temp("cremona.map", kCremonaFile)}).code, 0);
}

TEST(Cli, Corpus) {
  CliRun l = cli({"corpus", "list"});
  EXPECT_EQ(l.code, 0);
  EXPECT_NE(l.out.find("cremona\n"), std::string::npos);
  EXPECT_NE(l.out.find("imps223\n"), std::string::npos);
  CliRun e = cli({"corpus", "emit", "whitney"});
  EXPECT_EQ(e.code, 0);
  EXPECT_EQ(parse_map_file(e.out).flavor, Flavor::affine);
  EXPECT_EQ(cli({"corpus", "emit", "nope"}).code, 2);
}

TEST(Cli, SeedFromEnvironment) {
  std::string file = write_temp("cremona.map", kCremonaFile);
  CliRun a = cli({"image", file, "--seed", "7"});
  setenv("TOTALIMAGE_SEED", "7", 1);
  CliRun b = cli({"image", file});
  setenv("TOTALIMAGE_SEED", "not a number", 1);
  CliRun c = cli({"image", file});
  unsetenv("TOTALIMAGE_SEED");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(c.code, 2);
}
