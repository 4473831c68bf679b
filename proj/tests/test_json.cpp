#include "masep/json.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace masep;
using testing_support::RatSource;
using testing_support::with_rates;

namespace {

template <typename T>
T round_trip(const T& value) {
  return Json::parse(Json(value).dump()).get<T>();
}

}  // namespace

TEST_CASE("rationals are strings") {
  CHECK(Json(Rat(-3, 4)) == Json("-3/4"));
  CHECK(round_trip(Rat(7, 9)) == Rat(7, 9));
  CHECK_THROWS_AS(Json(0.5).get<Rat>(), Error);
  CHECK_THROWS_AS(Json("0.5").get<Rat>(), Error);
}

TEST_CASE("boundary specs") {
  RatSource src(61);
  for (int n = 2; n <= 5; ++n) {
    for (const auto& base : enumerate_specs(n)) {
      const auto s = with_rates(base, src.positive(), src.positive(), n % 2 ? Side::Left : Side::Right);
      CHECK(round_trip(s) == s);
    }
  }
  const Json j = BoundarySpec::make(Side::Right, Rat(1, 2), Rat(3), 1, 1, 3, 3, Variant::Decaying, 3);
  CHECK(j.at("side") == "right");
  CHECK(j.at("a") == "1/2");
  CHECK(j.at("variant") == "decaying");
  CHECK(j.at("n_species") == 3);
  Json broken = j;
  broken["f1"] = 7;
  CHECK_THROWS_AS(broken.get<BoundarySpec>(), Error);
}

TEST_CASE("transitions and matrices") {
  for (const auto& t : boundary_transitions(enumerate_specs(4)[4], Rat(2))) CHECK(round_trip(t) == t);
  RatSource src(62);
  const QMat m = src.matrix(3, 4);
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK(matrix_from_json(Json::array()).size() == 0);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"([["1","2"],["3"]])")), Error);
}

TEST_CASE("check reports") {
  CheckReport r;
  r.check = "ybe";
  r.params = {{"N", "3"}, {"q", "1/2"}};
  r.seed = 12;
  r.samples = {{Rat(1, 2), Rat(3)}, {Rat(5, 7), Rat(2)}};
  r.notes = {"a note"};
  CHECK(round_trip(r) == r);
  CHECK(Json(r).at("witness").is_null());
  CHECK(Json(r).at("passed") == true);
  r.status = CheckStatus::Failed;
  r.witness = Witness{1, 2, Rat(1, 3), Rat(0), "somewhere"};
  CHECK(round_trip(r) == r);
  CHECK(Json(r).at("passed") == false);
  CHECK(Json(r).at("status") == "failed");

  const auto real = check_boundary_algebra(enumerate_specs(3)[2], Rat(3, 2));
  CHECK(round_trip(real) == real);
}

TEST_CASE("stationary results") {
  StationaryResult s;
  s.irreducible = true;
  s.kernel_dimension = 1;
  s.distribution = {Rat(2, 3), Rat(1, 3)};
  CHECK(round_trip(s) == s);
  const Json j = s;
  CHECK(j.at("distribution") == Json::parse(R"(["2/3","1/3"])"));
  s.distribution.clear();
  s.kernel_dimension = 2;
  s.basis = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  CHECK(round_trip(s) == s);
}

TEST_CASE("simulation reports") {
  LatticeModel m;
  m.n_species = 2;
  m.sites = 2;
  m.q = Rat(1, 2);
  m.left = enumerate_specs(2)[0];
  m.right = with_rates(m.left, Rat(1), Rat(1), Side::Right);
  SimConfig c;
  c.seed = 4;
  c.total_events = 30000;
  c.burn_in_events = 1000;
  c.record_stride = 1000;
  c.track_transitions = true;
  const SimReport r = simulate(m, c);
  // doubles survive the text form exactly
  CHECK(round_trip(r) == r);
  Divergence d{0.125, 0.0625, 1.5e-3, 2};
  CHECK(round_trip(d) == d);
  CHECK(round_trip(CurrentEstimate{0.1, 0.01, 5}) == CurrentEstimate{0.1, 0.01, 5});
}

TEST_CASE("envelope") {
  const Json e = make_envelope("check ybe", {{"n", "2"}}, Json::array({1, 2}));
  CHECK(e.at("tool_version") == kToolVersion);
  CHECK(e.at("command") == "check ybe");
  CHECK(e.at("config").at("n") == "2");
  CHECK(e.at("reports").size() == 2);
}
