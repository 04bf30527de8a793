#include "bincap/report_io.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

namespace bincap {

namespace {

std::string json_array(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += json_number(v[i]);
  }
  return s + "]";
}

const char* json_bool(bool b) { return b ? "true" : "false"; }

std::string cell(double v) { return std::isfinite(v) ? fmt::format("{:.17g}", v) : json_number(v); }

void write_flags(std::ostream& os, const KktSummary& s, const char* indent) {
  fmt::print(os, "{{\n");
  fmt::print(os, "{}  \"kkt_inequality\": {},\n", indent, json_bool(s.kkt_inequality));
  fmt::print(os, "{}  \"kkt_equality\": {},\n", indent, json_bool(s.kkt_equality));
  fmt::print(os, "{}  \"endpoints_in_support\": {},\n", indent, json_bool(s.endpoints_in_support));
  fmt::print(os, "{}  \"capacity_identity\": {},\n", indent, json_bool(s.capacity_identity));
  fmt::print(os, "{}  \"capacity_identity_defect\": {},\n", indent, json_number(s.capacity_identity_defect));
  fmt::print(os, "{}  \"edge_intervals\": {},\n", indent, json_bool(s.edge_intervals));
  fmt::print(os, "{}  \"symmetric\": {},\n", indent, json_bool(s.symmetric));
  fmt::print(os, "{}  \"symmetry_defect\": {},\n", indent, json_number(s.symmetry_defect));
  fmt::print(os, "{}  \"active_set_bound\": {}\n", indent, json_bool(s.active_set_bound));
  fmt::print(os, "{}}}", indent);
}

void write_bounds_object(std::ostream& os, const BoundsReport& b, const char* indent) {
  fmt::print(os, "{}{{\n", indent);
  fmt::print(os, "{}  \"n\": {},\n", indent, b.n);
  fmt::print(os, "{}  \"cap_lower\": {},\n", indent, json_number(b.cap_lower));
  fmt::print(os, "{}  \"cap_upper\": {},\n", indent, json_number(b.cap_upper));
  fmt::print(os, "{}  \"card_lower\": {},\n", indent, json_number(b.card_lower));
  fmt::print(os, "{}  \"card_upper\": {},\n", indent, b.card_upper);
  fmt::print(os, "{}  \"witsenhausen\": {}\n", indent, b.witsenhausen);
  fmt::print(os, "{}}}", indent);
}

std::vector<double> required_array(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw std::invalid_argument(std::string("input distribution: missing array \"") + key + "\"");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw std::invalid_argument(std::string("input distribution: \"") + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string json_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return fmt::format("{:.17g}", v);
}

void write_json(std::ostream& os, const SolveReport& r, const KktSummary& flags) {
  fmt::print(os, "{{\n");
  fmt::print(os, "  \"n\": {},\n", r.n);
  fmt::print(os, "  \"capacity_nats\": {},\n", json_number(r.capacity_nats));
  fmt::print(os, "  \"kkt_slack\": {},\n", json_number(r.kkt_slack));
  fmt::print(os, "  \"support\": {},\n", json_array(r.input.points()));
  fmt::print(os, "  \"weights\": {},\n", json_array(r.input.weights()));
  fmt::print(os, "  \"output_pmf\": {},\n", json_array(r.output.probs()));
  fmt::print(os, "  \"flags\": ");
  write_flags(os, flags, "  ");
  fmt::print(os, ",\n");
  fmt::print(os, "  \"iterations\": {},\n", r.iterations);
  fmt::print(os, "  \"converged\": {},\n", json_bool(r.converged));
  fmt::print(os, "  \"equality_defect\": {},\n", json_number(r.equality_defect));
  fmt::print(os, "  \"support_size\": {},\n", r.support_size);
  fmt::print(os, "  \"active_set\": {}\n", json_array(r.active_set_estimate));
  fmt::print(os, "}}\n");
}

void write_json(std::ostream& os, const KktSummary& s, int n, double capacity_nats) {
  fmt::print(os, "{{\n");
  fmt::print(os, "  \"n\": {},\n", n);
  fmt::print(os, "  \"capacity_nats\": {},\n", json_number(capacity_nats));
  fmt::print(os, "  \"kkt_slack\": {},\n", json_number(s.slack));
  fmt::print(os, "  \"equality_defect\": {},\n", json_number(s.equality_defect));
  fmt::print(os, "  \"grid_points\": {},\n", s.grid_points);
  fmt::print(os, "  \"active_set\": {},\n", json_array(s.active_set));
  fmt::print(os, "  \"flags\": ");
  write_flags(os, s, "  ");
  fmt::print(os, ",\n  \"all_pass\": {}\n}}\n", json_bool(s.all_pass()));
}

void write_json(std::ostream& os, const BoundsReport& b) {
  write_bounds_object(os, b, "");
  os << '\n';
}

void write_json(std::ostream& os, const std::vector<BoundsReport>& rows) {
  fmt::print(os, "[\n");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    write_bounds_object(os, rows[i], "  ");
    fmt::print(os, "{}\n", i + 1 < rows.size() ? "," : "");
  }
  fmt::print(os, "]\n");
}

void write_json(std::ostream& os, const std::vector<ExactSolution>& fixtures) {
  fmt::print(os, "[\n");
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto& f = fixtures[i];
    const DiscreteInput in = f.input();
    std::vector<double> out;
    for (const auto& r : f.output) out.push_back(r.value());
    auto rationals = [](const std::vector<Rational>& v) {
      std::string s = "[";
      for (std::size_t k = 0; k < v.size(); ++k) {
        s += fmt::format("{}\"{}/{}\"", k > 0 ? ", " : "", v[k].num, v[k].den);
      }
      return s + "]";
    };
    fmt::print(os, "  {{\n");
    fmt::print(os, "    \"n\": {},\n", f.n);
    fmt::print(os, "    \"capacity_nats\": {},\n", json_number(f.capacity_nats()));
    fmt::print(os, "    \"capacity_exp\": \"{}/{}\",\n", f.capacity_exp.num, f.capacity_exp.den);
    fmt::print(os, "    \"support\": {},\n", json_array(in.points()));
    fmt::print(os, "    \"weights\": {},\n", json_array(in.weights()));
    fmt::print(os, "    \"output_pmf\": {},\n", json_array(out));
    fmt::print(os, "    \"weights_exact\": {},\n", rationals(f.weights));
    fmt::print(os, "    \"output_pmf_exact\": {}\n", rationals(f.output));
    fmt::print(os, "  }}{}\n", i + 1 < fixtures.size() ? "," : "");
  }
  fmt::print(os, "]\n");
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "n,cap_lower,capacity_nats,cap_upper,card_lower,support_size,card_upper,kkt_slack,converged\n";
  for (const auto& r : rows) {
    fmt::print(os, "{},{},{},{},{},{},{},{},{}\n", r.bounds.n, cell(r.bounds.cap_lower), cell(r.capacity_nats),
               cell(r.bounds.cap_upper), cell(r.bounds.card_lower), r.support_size, r.bounds.card_upper,
               cell(r.kkt_slack), r.converged ? 1 : 0);
  }
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundsReport>& rows) {
  os << "n,cap_lower,cap_upper,card_lower,card_upper,witsenhausen\n";
  for (const auto& b : rows) {
    fmt::print(os, "{},{},{},{},{},{}\n", b.n, cell(b.cap_lower), cell(b.cap_upper), cell(b.card_lower),
               b.card_upper, b.witsenhausen);
  }
}

void write_crest_curves_csv(std::ostream& os, int n, const std::vector<double>& grid) {
  os << "x,lb1,lb2\n";
  for (double x : grid) {
    if (!(x > 0.0 && x < 1.0)) continue;
    const std::string lb2 = x == 0.5 ? std::string() : cell(crest_factor_lb2(n, x));
    fmt::print(os, "{},{},{}\n", cell(x), cell(crest_factor_lb1(n, x)), lb2);
  }
}

void write_entropy_csv(std::ostream& os, const ChannelSpec& spec, const std::vector<double>& grid) {
  os << "x,lower,exact,upper\n";
  for (double x : grid) {
    fmt::print(os, "{},{},{},{}\n", cell(x), cell(binomial_entropy_lower(spec, x)),
               cell(binomial_entropy_exact(spec, x)), cell(binomial_entropy_upper(spec, x)));
  }
}

DiscreteInput read_input_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("input distribution: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("input distribution: top level must be an object");
  const char* key = j.contains("points") ? "points" : "support";
  return DiscreteInput(required_array(j, key), required_array(j, "weights"));
}

}  // namespace bincap
