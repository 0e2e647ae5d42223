#include "hoq/io.hpp"

#include "hoq/error.hpp"

#include <fstream>

namespace hoq::io {

Json to_json(const HermOp& op) {
  Json rows = Json::array();
  const Matrix& m = op.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return Json{{"dims", op.dims()}, {"matrix", std::move(rows)}};
}

HermOp hermop_from_json(const Json& j, double herm_tol) {
  try {
    const FactorProfile dims = j.at("dims").get<FactorProfile>();
    const Json& rows = j.at("matrix");
    if (!rows.is_array()) throw InvalidArgument("\"matrix\" must be an array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
        throw DimensionError("matrix row " + std::to_string(r) + " does not have " + std::to_string(n) + " entries");
      for (Eigen::Index c = 0; c < n; ++c) {
        const Json& e = row[static_cast<std::size_t>(c)];
        if (e.is_number()) {
          m(r, c) = {e.get<double>(), 0.0};
        } else if (e.is_array() && e.size() == 2) {
          m(r, c) = {e[0].get<double>(), e[1].get<double>()};
        } else {
          throw InvalidArgument("matrix entries must be numbers or [re, im] pairs");
        }
      }
    }
    return HermOp(dims, std::move(m), herm_tol);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed matrix JSON: ") + e.what());
  }
}

Json to_json(const StringSet& s) { return Json(s.to_strings()); }

StringSet stringset_from_json(const Json& j, std::optional<std::size_t> length) {
  try {
    const Json* list = &j;
    if (j.is_object()) {
      if (j.contains("delta"))
        list = &j.at("delta");
      else
        list = &j.at("strings");
      if (j.contains("dims")) {
        const auto n = j.at("dims").size();
        if (length && *length != n) throw DimensionError("string set dims do not match the expected factor count");
        length = n;
      }
    }
    const auto strings = list->get<std::vector<std::string>>();
    if (!length) {
      if (strings.empty()) throw InvalidArgument("cannot infer the length of an empty string set; add \"dims\"");
      length = strings.front().size();
    }
    return StringSet::from_strings(strings, *length);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed string set JSON: ") + e.what());
  }
}

Json integer_json(const Integer& v) {
  if (v >= 0 && v <= (Integer(1) << 53)) return Json(v.convert_to<std::uint64_t>());
  return Json(v.str());
}

Json to_json(const TypeSemantics& sem) {
  return Json{{"lambda", to_string(sem.lambda)},
              {"dims", sem.dims},
              {"delta", to_json(sem.delta)},
              {"total_dim", integer_json(sem.total_dim)}};
}

Json to_json(const MembershipReport& rep) {
  return Json{{"verdict", rep.verdict},
              {"lambda_measured", rep.lambda_measured},
              {"lambda_expected", to_string(rep.lambda_expected)},
              {"min_eigenvalue", rep.min_eigenvalue},
              {"hermiticity_residual", rep.hermiticity_residual},
              {"residual_outside_delta", rep.residual_outside_delta},
              {"tolerance", rep.tolerance}};
}

Json to_json(const FeasibilityReport& rep) {
  return Json{{"feasible", rep.feasible == Feasibility::Yes ? "yes" : "no_certificate"},
              {"witness", rep.witness ? to_json(*rep.witness) : Json(nullptr)},
              {"iterations", rep.iterations},
              {"final_distance", rep.final_distance},
              {"rejected_at_precheck", rep.rejected_at_precheck},
              {"trace_bound_violated", rep.trace_bound_violated},
              {"tolerance", rep.tolerance}};
}

Json to_json(const SearchResult& res) {
  return Json{{"matches", res.matches},
              {"exhausted", res.exhausted},
              {"total", res.total},
              {"checked", res.checked},
              {"pruned_count", res.pruned_count}};
}

Json to_json(const Permutation& p) { return Json(std::vector<std::size_t>(p.begin(), p.end())); }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace hoq::io
