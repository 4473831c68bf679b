#include "masep/json.hpp"

namespace masep {

void to_json(Json& j, const Rat& r) { j = r.str(); }

void from_json(const Json& j, Rat& r) {
  if (!j.is_string()) throw Error(ErrorKind::InvalidRational, "rational must be a \"p/q\" string");
  r = Rat::parse(j.get<std::string>());
}

void to_json(Json& j, const BoundarySpec& s) {
  j = Json{{"side", to_string(s.side)}, {"a", s.rate_a},      {"c", s.rate_c},
           {"s1", s.s1},                {"s2", s.s2},          {"f2", s.f2},
           {"f1", s.f1},                {"variant", to_string(s.variant)}, {"n_species", s.n_species}};
}

void from_json(const Json& j, BoundarySpec& s) {
  s = BoundarySpec::make(parse_side(j.at("side").get<std::string>()), j.at("a").get<Rat>(),
                         j.at("c").get<Rat>(), j.at("s1").get<int>(), j.at("s2").get<int>(),
                         j.at("f2").get<int>(), j.at("f1").get<int>(),
                         parse_variant(j.at("variant").get<std::string>()), j.at("n_species").get<int>());
}

void to_json(Json& j, const Transition& t) {
  j = Json{{"from", t.from}, {"to", t.to}, {"symbol", to_string(t.symbol)}, {"rate", t.rate}};
}

void from_json(const Json& j, Transition& t) {
  t.from = j.at("from").get<int>();
  t.to = j.at("to").get<int>();
  t.symbol = parse_rate_symbol(j.at("symbol").get<std::string>());
  t.rate = j.at("rate").get<Rat>();
}

void to_json(Json& j, const Witness& w) {
  j = Json{{"row", w.row}, {"col", w.col}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"where", w.where}};
}

void from_json(const Json& j, Witness& w) {
  w.row = j.at("row").get<Index>();
  w.col = j.at("col").get<Index>();
  w.lhs = j.at("lhs").get<Rat>();
  w.rhs = j.at("rhs").get<Rat>();
  w.where = j.at("where").get<std::string>();
}

void to_json(Json& j, const CheckReport& r) {
  j = Json{{"check", r.check},   {"params", r.params},           {"seed", r.seed},
           {"samples", r.samples}, {"status", to_string(r.status)}, {"notes", r.notes},
           {"passed", r.passed()}};
  j["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
}

void from_json(const Json& j, CheckReport& r) {
  r.check = j.at("check").get<std::string>();
  r.params = j.at("params").get<std::map<std::string, std::string>>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.samples = j.at("samples").get<std::vector<std::vector<Rat>>>();
  r.status = parse_check_status(j.at("status").get<std::string>());
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.witness.reset();
  if (!j.at("witness").is_null()) r.witness = j.at("witness").get<Witness>();
}

void to_json(Json& j, const StationaryResult& r) {
  j = Json{{"irreducible", r.irreducible},
           {"kernel_dimension", r.kernel_dimension},
           {"distribution", r.distribution},
           {"basis", r.basis}};
}

void from_json(const Json& j, StationaryResult& r) {
  r.irreducible = j.at("irreducible").get<bool>();
  r.kernel_dimension = j.at("kernel_dimension").get<int>();
  r.distribution = j.at("distribution").get<std::vector<Rat>>();
  r.basis = j.at("basis").get<std::vector<std::vector<Rat>>>();
}

void to_json(Json& j, const CurrentEstimate& e) {
  j = Json{{"mean", e.mean}, {"std_error", e.std_error}, {"batches", e.batches}};
}

void from_json(const Json& j, CurrentEstimate& e) {
  e.mean = j.at("mean").get<double>();
  e.std_error = j.at("std_error").get<double>();
  e.batches = j.at("batches").get<std::int64_t>();
}

void to_json(Json& j, const TransitionCount& t) {
  j = Json{{"from", t.from}, {"to", t.to}, {"count", t.count}};
}

void from_json(const Json& j, TransitionCount& t) {
  t.from = j.at("from").get<Index>();
  t.to = j.at("to").get<Index>();
  t.count = j.at("count").get<std::int64_t>();
}

void to_json(Json& j, const SimReport& r) {
  j = Json{{"generator", r.generator},
           {"seed", r.seed},
           {"replicas", r.replicas},
           {"n_species", r.n_species},
           {"sites", r.sites},
           {"events", r.events},
           {"burn_in_events", r.burn_in_events},
           {"model_time", r.model_time},
           {"absorbing", r.absorbing},
           {"empirical_distribution", r.empirical_distribution},
           {"site_densities", r.site_densities},
           {"left_current", r.left_current},
           {"right_current", r.right_current},
           {"transitions", r.transitions}};
}

void from_json(const Json& j, SimReport& r) {
  r.generator = j.at("generator").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.replicas = j.at("replicas").get<int>();
  r.n_species = j.at("n_species").get<int>();
  r.sites = j.at("sites").get<int>();
  r.events = j.at("events").get<std::int64_t>();
  r.burn_in_events = j.at("burn_in_events").get<std::int64_t>();
  r.model_time = j.at("model_time").get<double>();
  r.absorbing = j.at("absorbing").get<bool>();
  r.empirical_distribution = j.at("empirical_distribution").get<std::vector<double>>();
  r.site_densities = j.at("site_densities").get<std::vector<std::vector<double>>>();
  r.left_current = j.at("left_current").get<std::vector<CurrentEstimate>>();
  r.right_current = j.at("right_current").get<std::vector<CurrentEstimate>>();
  r.transitions = j.at("transitions").get<std::vector<TransitionCount>>();
}

void to_json(Json& j, const Divergence& d) {
  j = Json{{"total_variation", d.total_variation},
           {"max_deviation", d.max_deviation},
           {"chi_square", d.chi_square},
           {"unsupported", d.unsupported}};
}

void from_json(const Json& j, Divergence& d) {
  d.total_variation = j.at("total_variation").get<double>();
  d.max_deviation = j.at("max_deviation").get<double>();
  d.chi_square = j.at("chi_square").get<double>();
  d.unsupported = j.at("unsupported").get<std::int64_t>();
}

Json matrix_to_json(const QMat& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

QMat matrix_from_json(const Json& j) {
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(j.at(0).size());
  QMat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Index>(row.size()) != cols) throw Error(ErrorKind::InvalidDimension, "ragged matrix");
    for (Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<Rat>();
  }
  return m;
}

Json make_envelope(const std::string& command, const std::map<std::string, std::string>& config,
                   Json reports) {
  return Json{{"tool_version", kToolVersion},
              {"command", command},
              {"config", config},
              {"reports", std::move(reports)}};
}

}  // namespace masep
