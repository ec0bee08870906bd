// dsim: simulate, verify, bracket and invariants subcommands.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dsim/api.hpp"
#include "dsim/config.hpp"
#include "dsim/verify.hpp"

using namespace dsim;

namespace {

void emit(const Json& j, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << dump(j);
  else
    write_json_file(out, j);
}

// Empty means "absent"; otherwise inline JSON or @file.
Json optional_json(const std::string& arg) { return arg.empty() ? Json() : parse_json_arg(arg); }

struct SimulateArgs {
  std::string space, form, family, hamiltonian, variant = "su", point, out, csv;
  std::size_t n = 2, stride = 1;
  double t_max = 1.0, dt = 1e-3;
  std::uint64_t seed = 0;
  bool no_restore = false;
};

int run_simulate(const SimulateArgs& a) {
  SimulateRequest req;
  req.space = a.space;
  req.form = a.form;
  req.family = a.family;
  req.hamiltonian = parse_json_arg(a.hamiltonian);
  req.point = optional_json(a.point);
  req.n = a.n;
  req.variant = a.variant;
  req.t_max = a.t_max;
  req.dt = a.dt;
  req.stride = a.stride;
  req.seed = a.seed;
  req.restore = !a.no_restore;
  const Json j = simulate(req);
  emit(j, a.out);
  if (!a.csv.empty()) {
    std::ofstream csv(a.csv);
    if (!csv) throw Error(ErrorCode::Usage, "cannot write " + a.csv);
    csv << trajectory_csv(trajectory_from_json(j));
  }
  return j.at("completed").get<bool>() ? 0 : 1;
}

int run_verify(const std::string& suite, std::uint64_t seed, const std::string& out, bool list) {
  if (list) {
    Json j = Json::array();
    for (const auto& p : property_catalog())
      j.push_back(Json{{"name", p.name}, {"suite", p.suite}, {"about", p.about}, {"samples", p.default_samples},
                       {"tolerance", p.tolerance}, {"comparison", p.comparison}});
    emit(j, out);
    return 0;
  }
  const VerifyReport rep = run_suite(suite, seed);
  emit(to_json(rep), out);
  return rep.all_pass() ? 0 : 1;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Master integrable systems on the doubles of SU(n) and U(n)"};
  app.require_subcommand(1);
  std::string tolerance_file;
  app.add_option("--tolerances", tolerance_file, "JSON file overriding numerical tolerances");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "integrate a pullback Hamiltonian and write a trajectory");
  simulate->add_option("--space", sim.space, "phase space, e.g. cotangent or red_cot_1")->required();
  simulate->add_option("--form", sim.form, "unreduced (exact flow) or reduced (RK4 on a slice); inferred from --space");
  simulate->add_option("--family", sim.family, "pi1 or pi2; checked against the hamiltonian");
  simulate->add_option("--hamiltonian", sim.hamiltonian, "word JSON, or @file")->required();
  simulate->add_option("--n", sim.n, "matrix size");
  simulate->add_option("--variant", sim.variant, "su or u");
  simulate->add_option("--point", sim.point, "initial point JSON or @file (random from --seed otherwise)");
  simulate->add_option("--t-max", sim.t_max, "final time");
  simulate->add_option("--dt", sim.dt, "step");
  simulate->add_option("--stride", sim.stride, "record every stride-th step");
  simulate->add_option("--seed", sim.seed, "seed for the random initial point");
  simulate->add_flag("--no-restore", sim.no_restore, "disable structure restoration");
  simulate->add_option("--out", sim.out, "trajectory JSON path (stdout by default)");
  simulate->add_option("--csv", sim.csv, "also write t,hamiltonian,structure_residual as CSV");

  std::string suite = "all", vout;
  std::uint64_t vseed = 0;
  bool list = false;
  auto* verify = app.add_subcommand("verify", "run property suites and print a report");
  verify->add_option("--suite", suite, "cxmat lie doubles observables rmatrix brackets flows conserved all");
  auto* seed_opt = verify->add_option("--seed", vseed, "seed (required)");
  verify->add_flag("--list", list, "list the registered properties instead of running them");
  verify->add_option("--out", vout, "report path (stdout by default)");

  std::string bkind, bf, bh, bpoint, bvariant = "su", bout;
  std::size_t bn = 2;
  std::uint64_t bseed = 0;
  auto* br = app.add_subcommand("bracket", "evaluate a bracket of two word observables at a point");
  br->add_option("--kind", bkind, "bracket kind, e.g. qpb or red_heis_2")->required();
  br->add_option("--f1", bf, "first observable, word JSON or @file")->required();
  br->add_option("--f2", bh, "second observable, word JSON or @file")->required();
  br->add_option("--point", bpoint, "point JSON or @file (random from --seed otherwise)");
  br->add_option("--n", bn, "matrix size for a random point");
  br->add_option("--variant", bvariant, "su or u for a random point");
  br->add_option("--seed", bseed, "seed for a random point");
  br->add_option("--out", bout, "output path (stdout by default)");

  std::string ipath, ikinds, iout;
  auto* inv = app.add_subcommand("invariants", "drift report of the constants of motion along a trajectory");
  inv->add_option("--trajectory", ipath, "trajectory JSON written by simulate")->required();
  inv->add_option("--kinds", ikinds, "comma-separated subset, e.g. psi1,psi2 (default: all that apply)");
  inv->add_option("--out", iout, "output path (stdout by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    apply_tolerance_env();
    if (!tolerance_file.empty()) set_tolerances(load_tolerances(tolerance_file));
    if (simulate->parsed()) return run_simulate(sim);
    if (verify->parsed()) {
      if (!list && seed_opt->count() == 0) throw Error(ErrorCode::Usage, "verify needs --seed");
      return run_verify(suite, vseed, vout, list);
    }
    if (br->parsed()) {
      emit(evaluate_bracket(bkind, parse_json_arg(bf), parse_json_arg(bh), optional_json(bpoint), bn, bvariant, bseed),
           bout);
      return 0;
    }
    if (inv->parsed()) {
      emit(invariants_report(read_json_file(ipath), split_commas(ikinds)), iout);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "dsim: " << e.what() << "\n";
    return (e.code() == ErrorCode::Usage || e.code() == ErrorCode::Schema) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "dsim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
