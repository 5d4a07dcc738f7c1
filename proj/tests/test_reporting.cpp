#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "primecorr/report.hpp"

using namespace primecorr;

TEST_CASE("float formatting uses 12 significant digits") {
  CHECK(fmt_sig(1.0 / 3.0) == "0.333333333333");
  CHECK(fmt_sig(1320323.63943) == "1320323.63943");
  CHECK(fmt_sig(0.0) == "0");
  CHECK(fmt_sig(-2.5e-9) == "-2.5e-09");
}

TEST_CASE("csv and json emission") {
  report_row a;
  a.str("command", "demo");
  a.num("x", static_cast<i64>(42));
  a.num("value", 0.5);
  a.str("rational", "-1/5");
  report_row b = a;
  std::string csv = to_csv({a, b});
  CHECK(csv == "command,x,value,rational\ndemo,42,0.5,-1/5\ndemo,42,0.5,-1/5\n");
  std::string json = to_json({a});
  CHECK(json.find("\"command\": \"demo\"") != std::string::npos);
  CHECK(json.find("\"x\": 42") != std::string::npos);
  CHECK(json.find("\"rational\": \"-1/5\"") != std::string::npos);

  report_row ragged;
  ragged.num("x", static_cast<i64>(1));
  CHECK_THROWS_AS(to_csv({a, ragged}), validation_error);
}

TEST_CASE("run configuration round trips losslessly") {
  splitmix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    run_config c;
    c.set("command", "twin");
    int keys = 1 + static_cast<int>(rng.below(8));
    for (int k = 0; k < keys; ++k) {
      std::string key = "key" + std::to_string(k);
      std::string val = std::to_string(rng.below(1000000)) + "." +
                        std::to_string(rng.below(1000));
      c.set(key, val);
    }
    run_config back = config_parse(config_to_text(c));
    REQUIRE(back == c);
  }

  run_config manual = config_parse(
      "# a comment\n"
      "x = 100  # trailing comment\n"
      "  h =  2\n"
      "\n"
      "format = csv\n");
  CHECK(*manual.get("x") == "100");
  CHECK(*manual.get("h") == "2");
  CHECK(*manual.get("format") == "csv");
  CHECK(manual.get("missing") == nullptr);
}

TEST_CASE("atomic writes land complete, no temp residue") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "primecorr_report_test";
  fs::remove_all(dir);
  std::string target = (dir / "nested" / "out.csv").string();
  atomic_write(target, "a,b\n1,2\n");
  std::ifstream f(target);
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  CHECK(text == "a,b\n1,2\n");
  CHECK_FALSE(fs::exists(target + ".tmp"));
  atomic_write(target, "x\n");  // overwrite path
  std::ifstream f2(target);
  std::string text2((std::istreambuf_iterator<char>(f2)),
                    std::istreambuf_iterator<char>());
  CHECK(text2 == "x\n");
  fs::remove_all(dir);
}

TEST_CASE("report rows from comparisons") {
  corr_report degenerate = compare_twin(100, 7);
  report_row row = to_row(degenerate);
  REQUIRE(row.cells.size() == 14);
  CHECK(row.cells[0].key == "command");
  CHECK(row.cells[9].key == "ratio");
  CHECK(row.cells[9].text == "degenerate");
  CHECK(row.cells[13].key == "runtime_ms");

  corr_report fine = compare_twin(1000, 2);
  report_row row2 = to_row(fine);
  CHECK(row2.cells[9].text != "degenerate");
}
