#include "hoq/cli.hpp"

#include "hoq/choi_numeric.hpp"
#include "hoq/comb_toolkit.hpp"
#include "hoq/error.hpp"
#include "hoq/inverse_search.hpp"
#include "hoq/io.hpp"
#include "hoq/semantics.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <sstream>

namespace hoq::cli {

namespace {

using io::Json;

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidArgument("'" + text + "' is not a comma-separated list of non-negative integers");
    out.push_back(static_cast<std::size_t>(std::stoull(item)));
  }
  return out;
}

FactorProfile parse_dims_list(const std::string& text) {
  FactorProfile out;
  for (auto v : parse_index_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render(const Json& doc, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << doc.dump(2) << '\n';
    return;
  }
  if (!doc.is_object()) {
    out << scalar_text(doc) << '\n';
    return;
  }
  for (const auto& [key, value] : doc.items()) out << key << ": " << scalar_text(value) << '\n';
}

Json membership_json(const std::string& type, const MembershipReport& rep) {
  Json j{{"type", type}};
  j.update(io::to_json(rep));
  return j;
}

struct Outcome {
  Json doc;
  int code = kOk;
};

bool comb_agrees(const CombSpec& spec) {
  return comb_delta_closed(spec) == delta_of_type(spec.derived());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Types, Choi operators and combs for higher-order quantum maps", "hoq"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  // parse / sem
  std::string type_text;
  auto* parse_cmd = app.add_subcommand("parse", "Parse a type and print its canonical form");
  parse_cmd->add_option("type", type_text, "Type expression")->required();
  auto* sem_cmd = app.add_subcommand("sem", "Identity coefficient and Δ index set of a type");
  sem_cmd->add_option("type", type_text, "Type expression")->required();

  // equiv
  std::string type_y;
  std::string perm_text;
  bool search = false;
  auto* equiv_cmd = app.add_subcommand("equiv", "Decide equivalence of two types");
  equiv_cmd->add_option("x", type_text, "First type")->required();
  equiv_cmd->add_option("y", type_y, "Second type")->required();
  auto* perm_opt = equiv_cmd->add_option("--perm", perm_text, "Scatter permutation i,j,... of x's factors");
  equiv_cmd->add_flag("--search", search, "Search factor alignments (identity first)")->excludes(perm_opt);

  // membership
  std::string matrix_path;
  double tol = 0;
  int max_iter = kDykstraMaxIter;
  auto* det_cmd = app.add_subcommand("check-det", "Deterministic-event membership");
  det_cmd->add_option("--type", type_text)->required();
  det_cmd->add_option("--matrix", matrix_path)->required();
  det_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);

  auto* adm_cmd = app.add_subcommand("check-adm", "Admissible-event feasibility");
  adm_cmd->add_option("--type", type_text)->required();
  adm_cmd->add_option("--matrix", matrix_path)->required();
  adm_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);
  adm_cmd->add_option("--max-iter", max_iter)->check(CLI::NonNegativeNumber);

  std::uint64_t seed = 0;
  double spread = 1.0;
  auto* sample_cmd = app.add_subcommand("sample-det", "Sample a deterministic event");
  sample_cmd->add_option("--type", type_text)->required();
  sample_cmd->add_option("--seed", seed);
  sample_cmd->add_option("--spread", spread)->check(CLI::Range(0.0, 1.0));

  int samples = 100;
  auto* oracle_cmd = app.add_subcommand("oracle-det", "Sampling test that a Choi operator maps Evd(x) into Evd(y)");
  oracle_cmd->add_option("--type", type_text)->required();
  oracle_cmd->add_option("--cotype", type_y)->required();
  oracle_cmd->add_option("--matrix", matrix_path)->required();
  oracle_cmd->add_option("--samples", samples)->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--seed", seed);
  oracle_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);

  // comb
  std::string comb_action;
  std::string base_text = "A->B";
  std::size_t comb_n = 1;
  auto* comb_cmd = app.add_subcommand("comb", "Closed forms and checks for n-combs");
  comb_cmd->add_option("action", comb_action)->required()->check(CLI::IsMember({"delta", "lambda", "norm", "equiv-perm"}));
  comb_cmd->add_option("--base", base_text, "Base tooth type; labels get the tooth index appended");
  comb_cmd->add_option("--n", comb_n)->required()->check(CLI::Range(1, 64));
  comb_cmd->add_option("--matrix", matrix_path);
  comb_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);

  // inverse
  std::string dims_text;
  std::string delta_path;
  std::string lambda_text;
  SearchSpec sspec;
  bool no_prune = false;
  auto* inv_cmd = app.add_subcommand("inverse", "Bounded search for types with a given Δ");
  inv_cmd->add_option("--dims", dims_text, "Factor dims d1,d2,...")->required();
  inv_cmd->add_option("--delta", delta_path, "JSON string-set file")->required();
  inv_cmd->add_option("--max-depth", sspec.max_depth)->check(CLI::PositiveNumber);
  inv_cmd->add_option("--trivial-leaves", sspec.max_trivial_leaves)->check(CLI::NonNegativeNumber);
  inv_cmd->add_flag("--perms", sspec.allow_permutations, "Match up to factor reordering");
  inv_cmd->add_option("--lambda", lambda_text, "Required identity coefficient p/q");
  inv_cmd->add_flag("--no-prune", no_prune, "Disable dimension pruning");
  inv_cmd->add_option("--cap", sspec.enumeration_cap, "Enumeration cap");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  auto tol_or = [&](double fallback) { return tol > 0 ? tol : fallback; };

  try {
    Outcome res;
    if (parse_cmd->parsed()) {
      const TypeExpr x = parse_type(type_text);
      Json factors = Json::array();
      for (const auto& a : factor_atoms(x)) factors.push_back(Json{{"label", a.label}, {"dim", a.dim}});
      res.doc = Json{{"canonical", print_canonical(x)},
                     {"depth", depth(x)},
                     {"structure", natural_structure(x).to_string()},
                     {"factors", std::move(factors)},
                     {"k_exponents", k_exponents(x)}};
    } else if (sem_cmd->parsed()) {
      const TypeExpr x = parse_type(type_text);
      res.doc = Json{{"type", print_canonical(x)}};
      res.doc.update(io::to_json(upsilon(x)));
    } else if (equiv_cmd->parsed()) {
      const TypeExpr x = parse_type(type_text), y = parse_type(type_y);
      const TypeSemantics sx = upsilon(x), sy = upsilon(y);
      EquivalenceVerdict v;
      std::string mode;
      if (!perm_text.empty()) {
        mode = "explicit";
        v = check_equiv(sx, sy, parse_index_list(perm_text));
      } else if (search) {
        mode = "search";
        v = check_equiv(sx, sy);
      } else {
        mode = "identity";
        Permutation id(sx.dims.size());
        for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
        if (sx.dims.size() == sy.dims.size()) v = check_equiv(sx, sy, id);
      }
      res.doc = Json{{"x", print_canonical(x)},
                     {"y", print_canonical(y)},
                     {"mode", mode},
                     {"lambda_x", to_string(sx.lambda)},
                     {"lambda_y", to_string(sy.lambda)},
                     {"equivalent", v.equivalent},
                     {"permutation", v.permutation ? io::to_json(*v.permutation) : Json(nullptr)}};
      res.code = v.equivalent ? kOk : kFalse;
    } else if (det_cmd->parsed()) {
      const TypeExpr x = parse_type(type_text);
      const HermOp r = io::hermop_from_json(io::read_json_file(matrix_path));
      const auto rep = check_deterministic(r, x, tol_or(kMembershipTol));
      res.doc = membership_json(print_canonical(x), rep);
      res.code = rep.verdict ? kOk : kFalse;
    } else if (adm_cmd->parsed()) {
      const TypeExpr x = parse_type(type_text);
      const HermOp m = io::hermop_from_json(io::read_json_file(matrix_path));
      const auto rep = check_admissible(m, x, tol_or(kDykstraTol), max_iter);
      res.doc = Json{{"type", print_canonical(x)}};
      res.doc.update(io::to_json(rep));
      if (rep.feasible == Feasibility::Yes)
        res.code = kOk;
      else if (rep.rejected_at_precheck || rep.trace_bound_violated)
        res.code = kFalse;  // a necessary condition fails outright
      else
        res.code = kNoCertificate;
    } else if (sample_cmd->parsed()) {
      const TypeExpr x = parse_type(type_text);
      res.doc = Json{{"type", print_canonical(x)}, {"seed", seed}, {"spread", spread}};
      res.doc.update(io::to_json(sample_deterministic(x, seed, spread)));
    } else if (oracle_cmd->parsed()) {
      const TypeExpr x = parse_type(type_text), y = parse_type(type_y);
      const HermOp m = io::hermop_from_json(io::read_json_file(matrix_path));
      const bool ok = oracle_deterministic(m, x, y, samples, seed, tol_or(kMembershipTol));
      res.doc = Json{{"type", print_canonical(x)}, {"cotype", print_canonical(y)}, {"samples", samples},
                     {"seed", seed},                {"verdict", ok}};
      res.code = ok ? kOk : kFalse;
    } else if (comb_cmd->parsed()) {
      if (comb_action == "equiv-perm") {
        res.doc = Json{{"n", comb_n}, {"permutation", io::to_json(comb_equiv_permutation(comb_n))}};
      } else {
        const TypeExpr base = parse_type(base_text);
        const CombSpec spec = comb_over(base, comb_n);
        const TypeExpr comb = spec.derived();
        res.doc = Json{{"base", print_canonical(base)}, {"n", comb_n}, {"type", print_canonical(comb)}};
        if (comb_action == "delta") {
          const StringSet closed = comb_delta_closed(spec);
          const bool agrees = comb_agrees(spec);
          const ReducedSet reduced = normal_form(closed, factor_dims(comb));
          res.doc["dims"] = reduced.dims;
          res.doc["delta"] = io::to_json(reduced.set);
          res.doc["agrees_with_recursion"] = agrees;
          res.code = agrees ? kOk : kFalse;
        } else if (comb_action == "lambda") {
          const Rational closed = comb_lambda_closed(spec);
          const bool agrees = closed == lambda_recursive(comb);
          res.doc["lambda"] = to_string(closed);
          res.doc["agrees_with_recursion"] = agrees;
          res.code = agrees ? kOk : kFalse;
        } else {  // norm
          if (matrix_path.empty()) throw InvalidArgument("comb norm needs --matrix");
          const HermOp r = io::hermop_from_json(io::read_json_file(matrix_path));
          const double t = tol_or(1e-8);
          bool ok = false;
          if (base.is_elementary()) {
            ok = check_comb_normalization(r, spec, t);
            res.doc["layout"] = "teeth";
          } else {
            // Matrix given in the comb's own factor order; move it to the elementary layout.
            const CombSpec e = comb_elementary_layout(spec);
            const HermOp rn = HermOp::trusted(strip_trivial(r.dims()), r.matrix());
            ok = check_comb_normalization(reorder_factors(rn, comb_equiv_permutation(comb_n)), e, t);
            res.doc["layout"] = "reordered";
          }
          res.doc["tolerance"] = t;
          res.doc["verdict"] = ok;
          res.code = ok ? kOk : kFalse;
        }
      }
    } else if (inv_cmd->parsed()) {
      sspec.dims = parse_dims_list(dims_text);
      sspec.target = io::stringset_from_json(io::read_json_file(delta_path), sspec.dims.size());
      sspec.prune = !no_prune;
      if (!lambda_text.empty()) sspec.target_lambda = parse_rational(lambda_text);
      const auto result = inverse_search(sspec, [&](std::uint64_t done, std::uint64_t total) {
        err << "inverse: checked " << done << "/" << total << '\n';
      });
      res.doc = Json{{"dims", sspec.dims}, {"target", io::to_json(sspec.target)}};
      res.doc.update(io::to_json(result));
      res.code = result.matches.empty() ? kFalse : kOk;
    }
    render(res.doc, format, out);
    return res.code;
  } catch (const Error& e) {
    err << "hoq: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "hoq: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace hoq::cli
