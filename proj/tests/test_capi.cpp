/*
 *   Copyright 2026 the nomarelay authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nomarelay/nomarelay.h"

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const std::string& path) {
  Csv out;
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  std::stringstream hs(line);
  std::string tok;
  while (std::getline(hs, tok, ',')) out.header.push_back(tok);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream rs(line);
    while (std::getline(rs, tok, ',')) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      row.push_back((end && *end == '\0') ? v : std::nan(""));
    }
    out.rows.push_back(row);
  }
  return out;
}

int column(const Csv& c, const std::string& name) {
  for (size_t i = 0; i < c.header.size(); ++i)
    if (c.header[i] == name) return (int)i;
  return -1;
}

struct Handle {
  noma_params* p;
  explicit Handle(noma_params* q) : p(q) {}
  ~Handle() { noma_params_free(p); }
};

}  // namespace

TEST_CASE("version and defaults") {
  CHECK(std::strlen(noma_version()) > 0);
  Handle h(noma_params_create());
  REQUIRE(h.p);
  CHECK(noma_params_validate(h.p) == NOMA_OK);
  CHECK(noma_params_get(h.p, "K") == 2.0);
  CHECK(noma_params_get(h.p, "a2") == 0.7);
  CHECK(std::isnan(noma_params_get(h.p, "not_a_key")));
}

TEST_CASE("set, validate and error reporting") {
  Handle h(noma_params_create());
  CHECK(noma_params_set(h.p, "rho", "316.23") == NOMA_OK);
  CHECK(noma_params_set(h.p, "bogus", "1") == NOMA_ERR_CONFIG);
  CHECK(std::strstr(noma_last_error(), "bogus") != nullptr);
  CHECK(noma_params_set(h.p, "a1", "0.6") == NOMA_OK);
  CHECK(noma_params_set(h.p, "a2", "0.4") == NOMA_OK);
  CHECK(noma_params_validate(h.p) == NOMA_ERR_CONFIG);
  CHECK(std::strstr(noma_last_error(), "a2 > a1") != nullptr);
}

TEST_CASE("config file loading through the C surface") {
  const char* path = "capi_config.tmp";
  {
    std::ofstream out(path);
    out << "K = 3\nrho = 100\nseed = 9\nn_trials = 123456\n";
  }
  Handle h(noma_params_load(path));
  REQUIRE(h.p);
  CHECK(noma_params_get(h.p, "K") == 3.0);
  CHECK(noma_params_get(h.p, "n_trials") == 123456.0);
  std::remove(path);
  CHECK(noma_params_load("nonexistent.cfg") == nullptr);
  CHECK(std::strlen(noma_last_error()) > 0);
}

TEST_CASE("point evaluations agree across the boundary") {
  Handle h(noma_params_create());
  double o1 = -1, o2 = -1, r1 = -1, r2 = -1, tau = -1, asy = -1;
  CHECK(noma_outage_analytic(h.p, NOMA_CSI_IMPERFECT, NOMA_USER_1, &o1) == NOMA_OK);
  CHECK(noma_outage_analytic(h.p, NOMA_CSI_IMPERFECT, NOMA_USER_2, &o2) == NOMA_OK);
  CHECK(noma_rate_analytic(h.p, NOMA_CSI_IMPERFECT, NOMA_USER_1, &r1) == NOMA_OK);
  CHECK(noma_rate_analytic(h.p, NOMA_CSI_PERFECT, NOMA_USER_2, &r2) == NOMA_OK);
  CHECK(noma_throughput_analytic(h.p, NOMA_CSI_IMPERFECT, &tau) == NOMA_OK);
  CHECK(noma_outage_asymptotic(h.p, NOMA_CSI_IMPERFECT, NOMA_USER_1, &asy) == NOMA_OK);
  CHECK(o1 > 0.0);
  CHECK(o1 < 1.0);
  CHECK(o2 > o1);  // weak user suffers more at the defaults
  CHECK(r1 > 0.0);
  CHECK(r2 > 0.0);
  CHECK(tau > 0.0);
  CHECK(asy == doctest::Approx(0.0387283048377).epsilon(1e-9));
  // throughput must equal its definition from the outage pair
  const double alpha = noma_params_get(h.p, "alpha");
  const double expect = (1.0 - o1) * 0.5 * 0.5 * (1.0 - alpha) +
                        (1.0 - o2) * 0.5 * 0.5 * (1.0 - alpha);
  CHECK(tau == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("monte-carlo estimates through the C surface") {
  Handle h(noma_params_create());
  noma_params_set(h.p, "n_trials", "200000");
  noma_params_set(h.p, "seed", "31");
  noma_estimate u1{}, u2{};
  REQUIRE(noma_mc_outage(h.p, NOMA_CSI_IMPERFECT, &u1, &u2) == NOMA_OK);
  CHECK(u1.n == 200000);
  double o1 = 0;
  noma_outage_analytic(h.p, NOMA_CSI_IMPERFECT, NOMA_USER_1, &o1);
  CHECK(std::fabs(u1.mean - o1) < std::max(0.005, 3.0 * u1.half_width));
  noma_estimate t{};
  REQUIRE(noma_mc_throughput(h.p, NOMA_CSI_IMPERFECT, &t) == NOMA_OK);
  CHECK(t.mean > 0.0);
  CHECK(t.mean < 0.325);
}

TEST_CASE("invalid parameters are rejected with config status") {
  Handle h(noma_params_create());
  noma_params_set(h.p, "alpha", "1.5");
  double out = 0;
  CHECK(noma_outage_analytic(h.p, NOMA_CSI_IMPERFECT, NOMA_USER_1, &out) ==
        NOMA_ERR_CONFIG);
  noma_estimate e{};
  CHECK(noma_mc_outage(h.p, NOMA_CSI_IMPERFECT, &e, &e) == NOMA_ERR_CONFIG);
}

TEST_CASE("sweep writes the documented CSV layout and round-trips") {
  Handle h(noma_params_create());
  noma_params_set(h.p, "n_trials", "50000");
  const double grid[] = {0.0, 10.0, 20.0, 30.0};
  noma_sweep_spec spec{};
  spec.variable = "rho_db";
  spec.grid = grid;
  spec.grid_len = 4;
  spec.quantities = "outage_u1,outage_u2,rate_u1,sum_rate,throughput,outage_u2_asy";
  spec.mode = "both";
  spec.csi = "imperfect";
  const char* path = "capi_sweep.tmp.csv";
  REQUIRE(noma_run_sweep(h.p, &spec, path) == NOMA_OK);
  const Csv csv = read_csv(path);
  CHECK(csv.header.front() == "rho_db");
  for (const char* name :
       {"outage_u1_analytic", "outage_u1_mc", "outage_u1_mc_ci",
        "rate_u1_analytic", "rate_u1_mc", "rate_u1_mc_ci",
        "sum_rate_analytic", "throughput_analytic", "throughput_mc",
        "outage_u2_asy_analytic"}) {
    CAPTURE(name);
    CHECK(column(csv, name) >= 0);
  }
  REQUIRE(csv.rows.size() == 4);
  for (const auto& row : csv.rows) CHECK(row.size() == csv.header.size());
  CHECK(csv.rows[2][0] == 20.0);

  // 17-significant-digit serialisation recovers the analytic value exactly
  double o1 = 0;
  Handle h20(noma_params_create());
  noma_params_set(h20.p, "rho", "100");
  noma_outage_analytic(h20.p, NOMA_CSI_IMPERFECT, NOMA_USER_1, &o1);
  CHECK(csv.rows[2][column(csv, "outage_u1_analytic")] == o1);
  std::remove(path);
}

TEST_CASE("sweep input validation maps to config errors") {
  Handle h(noma_params_create());
  noma_sweep_spec spec{};
  const double grid[] = {10.0, 5.0};
  spec.variable = "rho_db";
  spec.grid = grid;
  spec.grid_len = 2;
  spec.quantities = "outage_u1";
  spec.mode = "analytic";
  spec.csi = "imperfect";
  CHECK(noma_run_sweep(h.p, &spec, "x.csv") == NOMA_ERR_CONFIG);  // not increasing
  spec.grid_len = 0;
  CHECK(noma_run_sweep(h.p, &spec, "x.csv") == NOMA_ERR_CONFIG);  // empty grid
  spec.grid_len = 2;
  spec.quantities = "outage_u1,nope";
  CHECK(noma_run_sweep(h.p, &spec, "x.csv") == NOMA_ERR_CONFIG);
  spec.quantities = "outage_u1";
  spec.mode = "sometimes";
  CHECK(noma_run_sweep(h.p, &spec, "x.csv") == NOMA_ERR_CONFIG);
  // alpha grid leaving (0,1) violates the parameter invariants
  spec.mode = "analytic";
  spec.variable = "alpha";
  const double bad_alpha[] = {0.5, 1.5};
  spec.grid = bad_alpha;
  CHECK(noma_run_sweep(h.p, &spec, "x.csv") == NOMA_ERR_CONFIG);
  // unwritable output path maps to the I/O status
  spec.variable = "rho_db";
  const double g2[] = {0.0, 5.0};
  spec.grid = g2;
  CHECK(noma_run_sweep(h.p, &spec, "/nonexistent-dir/x.csv") == NOMA_ERR_IO);
}

TEST_CASE("validate passes normally and fails under the corruption hook") {
  Handle h(noma_params_create());
  noma_params_set(h.p, "n_trials", "400000");
  noma_params_set(h.p, "seed", "606");
  const double grid[] = {10.0, 20.0};
  const char* path = "capi_validate.tmp.csv";
  REQUIRE(noma_run_validate(h.p, NOMA_CSI_IMPERFECT, grid, 2, 1.0, path) == NOMA_OK);
  Csv csv = read_csv(path);
  const int pass_col = column(csv, "pass");
  REQUIRE(pass_col >= 0);
  for (const auto& row : csv.rows) CHECK(row[pass_col] == 1.0);

  // negative control: corrupt the analytic U1 constants
  CHECK(noma_run_validate(h.p, NOMA_CSI_IMPERFECT, grid, 2, 1.8, path) ==
        NOMA_ERR_NUMERIC);
  bool u1_failed = false, u2_failed = false;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header: ...,abs_error,pass,note
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) fields.push_back(tok);
    REQUIRE(fields.size() >= 8);
    const bool fail_row = fields[7] == "0";
    if (fields[1] == "outage_u1" && fail_row) u1_failed = true;
    if (fields[1] == "outage_u2" && fail_row) u2_failed = true;
  }
  CHECK(u1_failed);
  CHECK(!u2_failed);
  std::remove(path);
}

TEST_CASE("too few trials warns that the CI is too wide") {
  Handle h(noma_params_create());
  noma_params_set(h.p, "n_trials", "1000");
  const double grid[] = {20.0};
  const char* path = "capi_validate_warn.tmp.csv";
  const int rc = noma_run_validate(h.p, NOMA_CSI_IMPERFECT, grid, 1, 1.0, path);
  // with 1e3 trials the run may pass or fail, but the width warning must show
  if (rc == NOMA_OK) CHECK(std::strstr(noma_last_error(), "CI wider") != nullptr);
  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  CHECK(all.find("ci_too_wide") != std::string::npos);
  std::remove(path);
}

TEST_CASE("optimizer command writes a non-decreasing trace") {
  Handle h(noma_params_create());
  const char* path = "capi_opt.tmp.csv";
  noma_pso_summary s{};
  REQUIRE(noma_run_optimize(h.p, NOMA_BACKEND_ANALYTIC, NOMA_CSI_IMPERFECT, 5,
                            path, &s) == NOMA_OK);
  CHECK(s.best_alpha > 0.0);
  CHECK(s.best_alpha < 1.0);
  const Csv csv = read_csv(path);
  REQUIRE(csv.header.size() == 2);
  CHECK(csv.header[0] == "iteration");
  CHECK(csv.header[1] == "best_objective");
  REQUIRE(csv.rows.size() == 21);  // init + 20 iterations
  for (size_t i = 1; i < csv.rows.size(); ++i)
    CHECK(csv.rows[i][1] >= csv.rows[i - 1][1]);
  CHECK(csv.rows.back()[1] == s.best_objective);

  // byte-identical rerun under the same seed
  std::ifstream a(path);
  std::string first((std::istreambuf_iterator<char>(a)),
                    std::istreambuf_iterator<char>());
  REQUIRE(noma_run_optimize(h.p, NOMA_BACKEND_ANALYTIC, NOMA_CSI_IMPERFECT, 5,
                            path, &s) == NOMA_OK);
  std::ifstream b(path);
  std::string second((std::istreambuf_iterator<char>(b)),
                     std::istreambuf_iterator<char>());
  CHECK(first == second);
  std::remove(path);
}

TEST_CASE("pso trace buffer through the raw optimizer entry point") {
  Handle h(noma_params_create());
  noma_pso_summary s{};
  double trace[64];
  size_t trace_len = 0;
  REQUIRE(noma_optimize_alpha(h.p, NOMA_BACKEND_ANALYTIC, NOMA_CSI_IMPERFECT,
                              12, 6, 3, 1, &s, trace, 64, &trace_len) == NOMA_OK);
  REQUIRE(trace_len == 7);
  for (size_t i = 1; i < trace_len; ++i) CHECK(trace[i] >= trace[i - 1]);
  CHECK(trace[trace_len - 1] == s.best_objective);
}
