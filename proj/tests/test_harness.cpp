#include <algorithm>
#include <cmath>
#include <sstream>

#include "apstag/harness.hpp"
#include "doctest.h"

using namespace apstag;
using namespace apstag::harness;

namespace {

ConservedState line_state(std::vector<double> rho) {
  ConservedState s;
  s.grid = FieldGrid::line(static_cast<int>(rho.size()), 0.0, 1.0);
  s.m1.assign(rho.size(), 0.0);
  s.rho = std::move(rho);
  return s;
}

std::string fields_text(const RunReport& r) {
  std::ostringstream os;
  write_fields_csv(os, r.final_state(), r.spec);
  write_monitors_csv(os, r.monitors);
  return os.str();
}

}  // namespace

TEST_CASE("every catalog id resolves to a valid initial state") {
  for (const auto& c : catalog()) {
    Overrides o;
    o.n = 16;
    const CaseSpec spec = make_case(c.id, o);
    CHECK(spec.gas.eps > 0.0);
    const ConservedState s = initial_state(spec);
    CHECK_NOTHROW(s.validate());
    CHECK(s.has_energy() == !spec.gas.is_isentropic());
  }
  CHECK_THROWS_AS(make_case("no-such-case"), std::invalid_argument);
  Overrides bad;
  bad.order = 3;
  CHECK_THROWS_AS(make_case("riemann", bad), std::invalid_argument);
}

TEST_CASE("EOC of exact halvings is two") {
  const auto o = eoc_from_errors({1.0, 0.25, 0.0625});
  CHECK(std::isnan(o[0]));
  CHECK(o[1] == doctest::Approx(2.0));
  CHECK(o[2] == doctest::Approx(2.0));
}

TEST_CASE("compare_l1 restricts the reference conservatively") {
  const GasModel gas = GasModel::isentropic(2.0, 1.0);
  const ConservedState a = line_state({1.0, 2.0});
  CHECK(compare_l1(a, a, gas, "rho") == 0.0);
  // fine pairs average to 1.0 and 2.0 in the first case; then shift one pair
  CHECK(compare_l1(a, line_state({0.5, 1.5, 2.0, 2.0}), gas, "rho") == 0.0);
  // |1 - 1.5| + |2 - 2| over |1.5| + |2|
  CHECK(compare_l1(a, line_state({1.0, 2.0, 2.0, 2.0}), gas, "rho") ==
        doctest::Approx(0.5 / 3.5));
  // 2D: four children
  const Field r = restrict_to({1, 2, 5, 6, 3, 4, 7, 8, 9, 9, 0, 0, 9, 9, 0, 0}, 4, 4, 2, 2);
  CHECK(r == Field{2.5, 6.5, 9.0, 0.0});
  CHECK_THROWS_AS(restrict_to(Field(6), 6, 1, 4, 1), std::invalid_argument);
}

TEST_CASE("constant case stays constant and ends on the starting parity") {
  const RunReport r = run_case(make_case("constant"));
  REQUIRE(r.ok);
  CHECK(r.steps % 2 == 0);
  CHECK(r.final_state().t == r.spec.cfg.t_final);
  CHECK(r.final_state().grid.parity == Parity::Integer);
  CHECK(r.monitors.t.size() == static_cast<std::size_t>(r.steps));
  for (std::size_t c = 0; c < r.final_state().rho.size(); ++c) {
    CHECK(r.final_state().rho[c] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.final_state().m1[c] == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("fixed step recipe takes an even number of equal steps") {
  CaseSpec spec = make_case("constant");
  spec.fixed_dt = 0.0301;
  const RunReport r = run_case(spec);
  CHECK(r.steps == 4);
  CHECK(r.monitors.dt[0] == doctest::Approx(0.025));
}

TEST_CASE("conservation drift stays below 1e-11 on periodic catalog cases") {
  for (const auto& c : catalog()) {
    Overrides o;
    o.n = c.id.find("2d") != std::string::npos || c.id.rfind("shear", 0) == 0 ? 16 : 64;
    CaseSpec spec = make_case(c.id, o);
    spec.cfg.t_final = spec.cfg.t_final / 10;
    const RunReport r = run_case(spec);
    REQUIRE(r.ok);
    for (std::size_t k = 0; k < r.monitors.t.size(); ++k) {
      CHECK(r.monitors.mass_drift[k] <= 1e-11);
      CHECK(r.monitors.momentum_drift[k] <= 1e-11);
      CHECK(r.monitors.energy_drift[k] <= 1e-11);
    }
  }
}

TEST_CASE("identical specs give byte-identical CSV") {
  Overrides o;
  o.n = 50;
  const CaseSpec spec = make_case("riemann", o);
  CHECK(fields_text(run_case(spec)) == fields_text(run_case(spec)));
}

TEST_CASE("CSV layout") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  Overrides o;
  o.n = 4;
  const CaseSpec spec = make_case("euler-2d", o);
  RunReport r;
  r.spec = spec;
  r.snapshots.push_back(initial_state(spec));
  std::ostringstream os;
  write_fields_csv(os, r.final_state(), spec);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,y,rho,m1,m2,E,p,u,v");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
  }
  CHECK(rows == 16);

  std::ostringstream e;
  write_eoc_csv(e, {{10, {0.4}, {std::nan("")}}, {20, {0.1}, {2.0}}}, {"rho"});
  CHECK(e.str() == "n,error_rho,eoc_rho\n10,0.40000000000000002,\n20,0.10000000000000001,2\n");

  // the mirrored tube only reports its physical half
  const CaseSpec sod = make_case("sod");
  std::ostringstream f;
  write_fields_csv(f, initial_state(sod), sod);
  const std::string text = f.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 201);
}

TEST_CASE("INI config parsing") {
  std::istringstream is("# comment\n[run]\ncase = sod ; trailing\n--n=128\n\ncfl = 0.3\n");
  const auto m = parse_ini(is);
  CHECK(m.at("case") == "sod");
  CHECK(m.at("n") == "128");
  CHECK(m.at("cfl") == "0.3");
  std::istringstream bad("just words\n");
  CHECK_THROWS_AS(parse_ini(bad), std::invalid_argument);
}

TEST_CASE("Sod run matches the exact wave positions") {
  const CaseSpec spec = make_case("sod");
  const RunReport r = run_case(spec);
  REQUIRE(r.ok);
  const ShockTubeMetrics m = shock_tube_metrics(r.final_state(), spec);
  CHECK(m.max_position_error() <= 2 * m.dx);
  CHECK(m.overshoot <= 0.05);
  // the detectors see the true discontinuities in the exact averages
  CHECK(m.shock_exact == doctest::Approx(0.5 + 1.75216 * 0.18).epsilon(1e-3));
  CHECK(m.contact_exact == doctest::Approx(0.5 + 0.92745 * 0.18).epsilon(1e-3));
}
