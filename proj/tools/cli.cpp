#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gaussent/cm_json.hpp"
#include "gaussent/multimode.hpp"
#include "gaussent/sharing.hpp"
#include "gaussent/teleport.hpp"
#include "gaussent/twomode.hpp"
#include "report.hpp"

namespace gaussent::cli {

namespace {

// Input that cannot be interpreted at all (unreadable file, bad document).
struct MalformedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CovarianceMatrix load_cm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return cm_from_json(text.str());
  } catch (const FormatError& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

void emit(std::ostream& out, const AnalysisReport& report) { out << report.to_json().dump(2) << '\n'; }

Json contangle_json(const ContangleValue& c) {
  return Json{{"value", c.value}, {"method", to_string(c.method)}, {"converged", c.converged}};
}

Json monogamy_json(const MonogamyReport& m) {
  Json pairs = Json::array();
  for (std::size_t k = 0; k < m.partners.size(); ++k) {
    Json p = contangle_json(m.pairwise[k]);
    p["partner"] = m.partners[k];
    pairs.push_back(std::move(p));
  }
  return Json{{"focus_mode", m.focus_mode},
              {"one_vs_rest", contangle_json(m.one_vs_rest)},
              {"pairwise", std::move(pairs)},
              {"residual", m.residual}};
}

void note_convergence(AnalysisReport& report, const ContangleValue& c, const std::string& what) {
  if (!c.converged) report.warnings.push_back(what + ": optimizer restarts disagree; best feasible value reported");
}

Json invariants_json(const TwoModeInvariants& inv) {
  return Json{{"mu1", inv.mu1}, {"mu2", inv.mu2}, {"mu", inv.mu}, {"delta", inv.delta}};
}

Json extremal_json(const ExtremalEntanglement& e) {
  return Json{{"e_max", e.e_max}, {"e_min", e.e_min}, {"e_avg", e.e_avg}, {"rel_error", e.rel_error}};
}

Json thresholds_json(const PurityThresholds& t) {
  return Json{{"lower", t.lower}, {"separable", t.separable}, {"coexistence", t.coexistence}, {"upper", t.upper}};
}

// ---------------------------------------------------------------------------
// Commands

struct Options {
  std::string cm_path;
  double mu1 = 1.0, mu2 = 1.0, mu = 1.0;
  std::size_t modes = 2;
  double squeezing = 0.0;
  std::optional<double> mixedness;
  double noise = 1.0;
  std::string output;
  std::size_t split = 1;
  std::size_t traced = 0;
  std::size_t focus = 0;
  std::uint64_t seed = RoofOptions{}.seed;
  double b_min = 1.0, b_max = 2.0;
  std::size_t steps = 11;
  std::size_t parties = 3;
  std::size_t parties_max = 50;
  double r_bar = 1.0;
  std::vector<std::size_t> transpose_modes;
};

AnalysisReport new_report(std::string command, std::string digest) {
  AnalysisReport r;
  r.command = std::move(command);
  r.input_digest = std::move(digest);
  return r;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const CovarianceMatrix cm = load_cm(o.cm_path);
  const ValidationReport v = validate_cm(cm);
  AnalysisReport r = new_report("validate", cm_digest(cm));
  r.results = Json{{"n_modes", cm.n_modes()}, {"symmetric", v.symmetric}, {"physical", v.physical},
                   {"nu_min", v.nu_min}, {"tolerance", v.tolerance}};
  emit(out, r);
  if (!v.physical) {
    err << "Unphysical: covariance matrix violates the uncertainty relation\n";
    return kDomainError;
  }
  return kOk;
}

int cmd_spectrum(const Options& o, std::ostream& out, std::ostream&) {
  const CovarianceMatrix cm = load_cm(o.cm_path);
  require_physical(cm);
  AnalysisReport r = new_report("spectrum", cm_digest(cm));
  r.results["symplectic_eigenvalues"] = symplectic_spectrum(cm).values;
  r.results["purity"] = purity(cm);
  if (!o.transpose_modes.empty()) {
    const ModeSet side(o.transpose_modes.begin(), o.transpose_modes.end());
    r.results["transposed_modes"] = side;
    r.results["partially_transposed_eigenvalues"] = partial_transpose_spectrum(cm, side).values;
    ModeSet rest;
    for (Mode m = 0; m < cm.n_modes(); ++m) {
      if (std::find(side.begin(), side.end(), m) == side.end()) rest.push_back(m);
    }
    r.results["log_negativity"] = log_negativity(cm, Bipartition{side, rest});
  }
  emit(out, r);
  return kOk;
}

int cmd_analyze_two_mode(const Options& o, std::ostream& out, std::ostream&) {
  const CovarianceMatrix cm = load_cm(o.cm_path);
  const TwoModeInvariants inv = invariants_from_cm(cm);
  const TwoModeStandardForm sf = standard_form_from_cm(cm);
  const PptPair ppt = ppt_eigenvalues(inv);
  AnalysisReport r = new_report("analyze-two-mode", cm_digest(cm));
  r.results["invariants"] = invariants_json(inv);
  r.results["standard_form"] = Json{{"a", sf.a}, {"b", sf.b}, {"c_plus", sf.c_plus}, {"c_minus", sf.c_minus}};
  r.results["ppt"] = Json{{"nu_tilde_minus", ppt.nu_tilde_minus}, {"nu_tilde_plus", ppt.nu_tilde_plus},
                          {"delta_tilde", ppt.delta_tilde}};
  r.results["log_negativity"] = log_negativity_two_mode(inv);
  r.results["classification"] = to_string(classify_by_purities(inv.mu1, inv.mu2, inv.mu));
  r.results["extremal"] = extremal_json(extremal_entanglement(inv.mu1, inv.mu2, inv.mu));
  if (std::abs(inv.mu1 - inv.mu2) <= 1e-6 * std::max(inv.mu1, inv.mu2)) {
    r.results["entanglement_of_formation"] = eof_symmetric(inv);
  } else {
    r.warnings.push_back("entanglement of formation omitted: state is not symmetric");
  }
  emit(out, r);
  return kOk;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream&) {
  const EntanglementClass c = classify_by_purities(o.mu1, o.mu2, o.mu);
  AnalysisReport r = new_report("classify", "");
  r.results = Json{{"mu1", o.mu1}, {"mu2", o.mu2}, {"mu", o.mu}, {"class", to_string(c)},
                   {"thresholds", thresholds_json(purity_thresholds(o.mu1, o.mu2))}};
  emit(out, r);
  return kOk;
}

int cmd_extremal(const Options& o, std::ostream& out, std::ostream&) {
  AnalysisReport r = new_report("extremal", "");
  r.results = extremal_json(extremal_entanglement(o.mu1, o.mu2, o.mu));
  emit(out, r);
  return kOk;
}

int cmd_make_ghz(const Options& o, std::ostream& out, std::ostream&) {
  GhzTypeSpec spec{o.modes, o.squeezing, o.noise};
  if (o.mixedness) spec.squeezing = ghz_squeezing_for_mixedness(o.modes, *o.mixedness, o.noise);
  const CovarianceMatrix cm = ghz_type_state(spec);
  if (o.output.empty()) {
    out << cm_to_json(cm, 2) << '\n';
  } else {
    write_cm_file(o.output, cm);
  }
  return kOk;
}

int cmd_localize(const Options& o, std::ostream& out, std::ostream&) {
  const CovarianceMatrix cm = load_cm(o.cm_path);
  const Localization loc = unitary_localization(cm, o.split);
  const SpectralDegeneracy deg = spectral_degeneracy(cm, o.split);
  ModeSet a(o.split);
  std::iota(a.begin(), a.end(), Mode{0});
  ModeSet b;
  for (Mode m = o.split; m < cm.n_modes(); ++m) b.push_back(m);
  AnalysisReport r = new_report("localize", cm_digest(cm));
  Json residual = Json::array();
  for (const CovarianceMatrix& m : loc.residual_modes) residual.push_back(matrix_json(m.matrix()));
  r.results["split"] = Json{{"m", o.split}, {"n", cm.n_modes() - o.split}};
  r.results["eq_two_mode"] = matrix_json(loc.eq_two_mode.matrix());
  r.results["residual_modes"] = std::move(residual);
  r.results["log_negativity_block"] = log_negativity(cm, Bipartition{a, b});
  r.results["log_negativity_localized"] = log_negativity(loc.eq_two_mode, Bipartition::split_after(1, 2));
  r.results["degeneracy"] = Json{{"nu_alpha_minus", deg.nu_alpha_minus}, {"mult_alpha", deg.mult_alpha},
                                 {"nu_beta_minus", deg.nu_beta_minus}, {"mult_beta", deg.mult_beta},
                                 {"verified", deg.verified}};
  if (!deg.verified) r.warnings.push_back("degenerate eigenvalues not found in the global spectrum");
  emit(out, r);
  return kOk;
}

int cmd_block_scan(const Options& o, std::ostream& out, std::ostream&) {
  if (o.modes < 2 || o.modes % 2 != 0) throw Error(ErrorKind::InvalidArgument, "--modes must be even and >= 2");
  double r = o.squeezing;
  if (o.mixedness) r = ghz_squeezing_for_mixedness(o.modes + o.traced, *o.mixedness);
  const CovarianceMatrix cm = traced_ghz_state(o.modes, o.traced, r);
  out << "k,log_negativity\n";
  for (std::size_t k = 1; k <= o.modes / 2; ++k) out << k << ',' << number(block_log_negativity(cm, k)) << '\n';
  return kOk;
}

int cmd_contangle(const Options& o, std::ostream& out, std::ostream&) {
  const CovarianceMatrix cm = load_cm(o.cm_path);
  const ContangleValue c = contangle_1_vs_rest(cm, o.focus, RoofOptions{o.seed});
  AnalysisReport r = new_report("contangle", cm_digest(cm));
  r.results = contangle_json(c);
  r.results["focus_mode"] = o.focus;
  r.results["seed"] = o.seed;
  note_convergence(r, c, "contangle");
  emit(out, r);
  return kOk;
}

int cmd_monogamy(const Options& o, std::ostream& out, std::ostream&) {
  const CovarianceMatrix cm = load_cm(o.cm_path);
  const RoofOptions opts{o.seed};
  AnalysisReport r = new_report("monogamy", cm_digest(cm));
  std::vector<MonogamyReport> reports;
  double minimum = 0.0;
  if (cm.n_modes() == 3) {
    ResidualContangle rc = residual_contangle(cm, opts);
    reports = std::move(rc.per_focus);
    minimum = rc.minimum;
  } else {
    for (Mode f = 0; f < cm.n_modes(); ++f) reports.push_back(monogamy_check(cm, f, opts));
    minimum = reports.front().residual;
    for (const auto& m : reports) minimum = std::min(minimum, m.residual);
  }
  Json foci = Json::array();
  for (const auto& m : reports) {
    foci.push_back(monogamy_json(m));
    note_convergence(r, m.one_vs_rest, "one-vs-rest contangle of mode " + std::to_string(m.focus_mode));
    for (std::size_t k = 0; k < m.partners.size(); ++k) {
      note_convergence(r, m.pairwise[k], "pair contangle (" + std::to_string(m.focus_mode) + ", " +
                                             std::to_string(m.partners[k]) + ")");
    }
  }
  r.results["per_focus"] = std::move(foci);
  r.results["minimum_residual"] = minimum;
  r.results["seed"] = o.seed;
  emit(out, r);
  return kOk;
}

int cmd_promiscuity_scan(const Options& o, std::ostream& out, std::ostream&) {
  if (o.steps < 1 || !(o.b_min >= 1.0) || !(o.b_max >= o.b_min)) {
    throw Error(ErrorKind::InvalidArgument, "need 1 <= b-min <= b-max and at least one step");
  }
  out << "b,pairwise,residual\n";
  for (std::size_t i = 0; i < o.steps; ++i) {
    const double b = o.steps == 1 ? o.b_min
                                  : o.b_min + (o.b_max - o.b_min) * static_cast<double>(i) /
                                                  static_cast<double>(o.steps - 1);
    const Promiscuity p = promiscuity_report(b, RoofOptions{o.seed});
    out << number(b) << ',' << number(p.pairwise_contangle) << ',' << number(p.residual) << '\n';
  }
  return kOk;
}

Json fidelity_json(const FidelityResult& f) {
  return Json{{"fidelity", f.fidelity}, {"e_t", f.e_t}, {"optimal_bias", f.optimal_bias}, {"converged", f.converged}};
}

int cmd_teleport_optimize(const Options& o, std::ostream& out, std::ostream&) {
  const FidelityResult f = optimal_fidelity(o.parties, o.r_bar, o.noise);
  AnalysisReport r = new_report("teleport optimize", "");
  r.results = fidelity_json(f);
  r.results["parties"] = o.parties;
  r.results["r_bar"] = o.r_bar;
  r.results["noise"] = o.noise;
  if (!f.converged) r.warnings.push_back("fidelity maximum on the edge of the bias interval");
  emit(out, r);
  return kOk;
}

int cmd_teleport_sweep(const Options& o, std::ostream& out, std::ostream&) {
  if (o.parties_max < 2) throw Error(ErrorKind::InvalidArgument, "--parties-max must be >= 2");
  out << "N,F_opt,E_T\n";
  for (std::size_t n = 2; n <= o.parties_max; ++n) {
    const FidelityResult f = optimal_fidelity(n, o.r_bar, o.noise);
    out << n << ',' << number(f.fidelity) << ',' << number(f.e_t) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement analysis of Gaussian covariance matrices", "gaussent"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&, std::ostream&, std::ostream&)> handler;

  auto bind = [&](CLI::App* sub, auto fn) { sub->callback([&handler, fn] { handler = fn; }); };
  auto add_cm = [&](CLI::App* sub) { sub->add_option("cm,--cm", o.cm_path, "Covariance matrix JSON file")->required(); };
  auto add_purities = [&](CLI::App* sub) {
    sub->add_option("--mu1", o.mu1, "Purity of the first mode")->required();
    sub->add_option("--mu2", o.mu2, "Purity of the second mode")->required();
    sub->add_option("--mu", o.mu, "Global purity")->required();
  };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Seed for optimizer restarts"); };

  auto* validate = app.add_subcommand("validate", "Check symmetry and the uncertainty relation");
  add_cm(validate);
  bind(validate, cmd_validate);

  auto* spectrum = app.add_subcommand("spectrum", "Symplectic spectrum, purity, optional partial transpose");
  add_cm(spectrum);
  spectrum->add_option("--transpose", o.transpose_modes, "Modes to partially transpose");
  bind(spectrum, cmd_spectrum);

  auto* analyze = app.add_subcommand("analyze-two-mode", "Invariants, standard form and entanglement of a two-mode state");
  add_cm(analyze);
  bind(analyze, cmd_analyze_two_mode);

  auto* classify = app.add_subcommand("classify", "Entanglement class from the three purities");
  add_purities(classify);
  bind(classify, cmd_classify);

  auto* extremal = app.add_subcommand("extremal", "Log-negativity bounds from the three purities");
  add_purities(extremal);
  bind(extremal, cmd_extremal);

  auto* make = app.add_subcommand("make", "Construct states");
  make->require_subcommand(1);
  auto* ghz = make->add_subcommand("ghz", "Fully symmetric GHZ-type state");
  ghz->add_option("--modes", o.modes, "Number of modes")->required();
  auto* sq = ghz->add_option("--squeezing", o.squeezing, "Squeezing r of every input");
  ghz->add_option("--mixedness", o.mixedness, "Local mixedness b instead of r")->excludes(sq);
  ghz->add_option("--noise", o.noise, "Thermal factor of the inputs");
  ghz->add_option("--output,-o", o.output, "Write to a file instead of stdout");
  bind(ghz, cmd_make_ghz);

  auto* localize = app.add_subcommand("localize", "Concentrate the block entanglement of a bisymmetric state");
  add_cm(localize);
  localize->add_option("--split", o.split, "Size of the first block")->required();
  bind(localize, cmd_localize);

  auto* block = app.add_subcommand("block-scan", "CSV k,log_negativity over K x (2N-K) splits");
  block->add_option("--modes", o.modes, "Total number of modes 2N")->required();
  auto* bsq = block->add_option("--squeezing", o.squeezing, "Squeezing of the underlying pure state");
  block->add_option("--mixedness", o.mixedness, "Local mixedness b of the pure state instead of r")->excludes(bsq);
  block->add_option("--traced", o.traced, "Extra modes traced out of the pure state");
  bind(block, cmd_block_scan);

  auto* contangle = app.add_subcommand("contangle", "Contangle of one mode against the rest");
  add_cm(contangle);
  contangle->add_option("--focus", o.focus, "Focus mode");
  add_seed(contangle);
  bind(contangle, cmd_contangle);

  auto* monogamy = app.add_subcommand("monogamy", "Monogamy residuals for every focus mode");
  add_cm(monogamy);
  add_seed(monogamy);
  bind(monogamy, cmd_monogamy);

  auto* promiscuity = app.add_subcommand("promiscuity-scan", "CSV b,pairwise,residual for symmetric three-mode states");
  promiscuity->add_option("--b-min", o.b_min, "Smallest local mixedness");
  promiscuity->add_option("--b-max", o.b_max, "Largest local mixedness");
  promiscuity->add_option("--steps", o.steps, "Number of grid points");
  add_seed(promiscuity);
  bind(promiscuity, cmd_promiscuity_scan);

  auto* teleport = app.add_subcommand("teleport", "Teleportation networks");
  teleport->require_subcommand(1);
  auto* optimize = teleport->add_subcommand("optimize", "Optimal fidelity over the squeezing bias");
  optimize->add_option("--parties", o.parties, "Number of parties N")->required();
  optimize->add_option("--rbar", o.r_bar, "Mean squeezing")->required();
  optimize->add_option("--noise", o.noise, "Thermal factor of the inputs");
  bind(optimize, cmd_teleport_optimize);
  auto* sweep = teleport->add_subcommand("sweep", "CSV N,F_opt,E_T for N = 2..parties-max");
  sweep->add_option("--parties-max", o.parties_max, "Largest N");
  sweep->add_option("--rbar", o.r_bar, "Mean squeezing")->required();
  sweep->add_option("--noise", o.noise, "Thermal factor of the inputs");
  bind(sweep, cmd_teleport_sweep);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kMalformedInput;
  }

  try {
    return handler(o, out, err);
  } catch (const MalformedInput& e) {
    err << "MalformedInput: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "MalformedInput: " << e.what() << '\n';
    return kMalformedInput;
  }
}

}  // namespace gaussent::cli
