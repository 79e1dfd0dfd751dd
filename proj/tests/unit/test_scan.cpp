#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "cavisteady/errors.hpp"
#include "cavisteady/scan.hpp"

using namespace cavisteady;

namespace {
ScanConfig fig1(int steps) {
  ScanConfig c;
  c.base.u = 6;
  c.base.omega = 0.5;
  c.base.j = 0.3;
  c.base.n_cavities = 4;
  c.base.n_max = 2;
  c.scan = ScanRange{ScanParameter::kJ, 0.0, 1.0, steps};
  c.methods = {Method::kExact, Method::kPert2};
  c.threads = 1;
  return c;
}

std::string csv(const ScanConfig& c) {
  std::ostringstream os;
  write_csv(run_scan(c), c, os);
  return os.str();
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoFailure;
}
}  // namespace

TEST_CASE("scan ranges") {
  const auto r = parse_scan_range("j:0:1:11");
  CHECK(r.parameter == ScanParameter::kJ);
  CHECK(r.steps == 11);
  const auto pts = scan_points(r);
  REQUIRE(pts.size() == 11);
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
  CHECK(pts[5] == doctest::Approx(0.5));
  CHECK(scan_points({ScanParameter::kDelta, 2.0, 3.0, 1}) == std::vector<double>{2.0});
  CHECK(parse_scan_range("nthermal:0:2:3").parameter == ScanParameter::kNThermal);
  CHECK(code_of([] { (void)parse_scan_range("j:0:1"); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { (void)parse_scan_range("zeta:0:1:2"); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { (void)parse_scan_range("j:a:1:2"); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("observable lists") {
  const auto o = parse_observables("n_a,nn");
  CHECK(o.n_a);
  CHECK_FALSE(o.g2);
  CHECK(o.nn);
  CHECK(code_of([] { (void)parse_observables("n_a,bogus"); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("a J scan yields one row per point and method, parameter-major") {
  const auto c = fig1(11);
  const auto rows = run_scan(c);
  REQUIRE(rows.size() == 22);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].param_name == "j");
    CHECK(rows[k].method == (k % 2 == 0 ? Method::kExact : Method::kPert2));
    CHECK(rows[k].param_value == doctest::Approx(0.1 * static_cast<double>(k / 2)));
    CHECK(rows[k].n_a);
    CHECK((rows[k].g2 || rows[k].error.find("PopulationTooSmall") != std::string::npos));
    CHECK(rows[k].nn.has_value() == (rows[k].method == Method::kExact));
  }
  CHECK_FALSE(rows.back().g2);
  CHECK(*rows[0].n_a == doctest::Approx(*rows[1].n_a).epsilon(1e-13));
}

TEST_CASE("CSV output is deterministic across runs and thread counts") {
  auto c = fig1(6);
  const auto one = csv(c);
  CHECK(one == csv(c));
  c.threads = 4;
  CHECK(one == csv(c));
  std::istringstream is(one);
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("# cavisteady", 0) == 0);
  std::getline(is, line);
  CHECK(line == "param_name,param_value,method,n_a,g2,re_nn,im_nn,residual,error");
  int data = 0;
  while (std::getline(is, line)) ++data;
  CHECK(data == 12);
}

TEST_CASE("laser offset is stored as a negated detuning") {
  ScanConfig c;
  c.base.u = 6;
  c.base.omega = 0.3;
  c.scan = ScanRange{ScanParameter::kLaserOffset, 0.25, 0.5, 2};
  c.threads = 1;
  const auto rows = run_scan(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].param_name == "delta");
  CHECK(rows[0].param_value == -0.25);
  CHECK(rows[1].param_value == -0.5);

  ScanConfig d = c;
  d.scan = ScanRange{ScanParameter::kDelta, -0.25, -0.25, 1};
  const auto direct = run_scan(d);
  CHECK(*direct[0].n_a == doctest::Approx(*rows[0].n_a).epsilon(1e-14));
}

TEST_CASE("solver failures land in the error column") {
  ScanConfig c;
  c.base.n_cavities = 2;
  c.base.u = 6;
  c.base.omega = 0.3;
  c.methods = {Method::kExact, Method::kPert2};
  c.threads = 1;
  const auto rows = run_scan(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].param_name == "none");
  CHECK(rows[0].error.empty());
  CHECK(rows[1].error.find("UnsupportedN") != std::string::npos);
  CHECK_FALSE(rows[1].n_a);
}

TEST_CASE("oracle rows agree with the exact solve") {
  ScanConfig c;
  c.base.n_cavities = 2;
  c.base.n_max = 5;
  c.base.u = 6;
  c.base.omega = 0.2;
  c.base.j = 0.2;
  c.methods = {Method::kExact, Method::kOracle};
  c.threads = 1;
  const auto rows = run_scan(c);
  CHECK(*rows[1].n_a == doctest::Approx(*rows[0].n_a).epsilon(1e-3));
}

TEST_CASE("JSON configuration") {
  const auto c = config_from_json(
      R"({"n": 4, "nmax": 2, "u": 6, "omega": 0.5, "j": 0.3, "methods": ["exact", "pert1"],
          "scan": "delta:-1:1:5", "observables": "n_a,g2", "format": "json", "threads": 2})");
  CHECK(c.base.n_cavities == 4);
  CHECK(c.base.u == 6);
  CHECK(c.methods == std::vector<Method>{Method::kExact, Method::kPert1});
  CHECK(c.scan->parameter == ScanParameter::kDelta);
  CHECK_FALSE(c.observables.nn);
  CHECK(c.format == OutputFormat::kJson);
  CHECK(config_from_json(R"({"method": "pert0,pert2"})").methods ==
        std::vector<Method>{Method::kPert0, Method::kPert2});
}

TEST_CASE("invalid configurations") {
  CHECK(code_of([] { (void)config_from_json("{not json"); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { (void)config_from_json("[1, 2]"); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { (void)config_from_json(R"({"methods": ["pert9"]})"); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { (void)config_from_json(R"({"n": "four"})"); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { (void)config_from_json(R"({"format": "xml"})"); }) == ErrorCode::kInvalidConfig);

  ScanConfig c;
  c.methods.clear();
  CHECK(code_of([&] { validate_config(c); }) == ErrorCode::kInvalidConfig);
  c = {};
  c.scan = ScanRange{ScanParameter::kJ, 1.0, 0.0, 3};
  CHECK(code_of([&] { validate_config(c); }) == ErrorCode::kInvalidConfig);
  c = {};
  c.base.n_max = 1;
  CHECK(code_of([&] { validate_config(c); }) == ErrorCode::kInvalidConfig);
  c = {};
  c.base.gamma0 = 0;
  CHECK(code_of([&] { validate_config(c); }) == ErrorCode::kNonPositiveGamma0);
  c = {};
  c.base.n_cavities = 4;
  c.methods = {Method::kOracle};
  c.method_options.oracle_cut = 6;
  CHECK(code_of([&] { validate_config(c); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("JSON output parses") {
  auto c = fig1(3);
  std::ostringstream os;
  write_json(run_scan(c), c, os);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc["rows"].size() == 6);
  CHECK(doc["rows"][0]["method"] == "exact");
  CHECK(doc["rows"][0]["param_name"] == "j");
  CHECK(doc.contains("units"));
}

TEST_CASE("unwritable output path") {
  auto c = fig1(1);
  c.out_path = "/nonexistent-dir/out.csv";
  std::ostringstream fallback;
  CHECK(code_of([&] { write_results(run_scan(c), c, fallback); }) == ErrorCode::kIoFailure);
}
