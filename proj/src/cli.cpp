#include "wcont/cli.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wcont/discrete_ic.hpp"
#include "wcont/gic.hpp"
#include "wcont/infomeasures.hpp"
#include "wcont/io.hpp"
#include "wcont/regularity.hpp"
#include "wcont/transport.hpp"
#include "wcont/verify.hpp"

namespace wcont {

namespace {

/// Non-zero exit that still carries a message, raised after output is written.
struct ExitWith {
  int code;
  std::string message;
};

struct Globals {
  std::string base = "bits";
  std::uint64_t seed = 0;
  std::string out_path;
  bool quiet = false;
};

class Context {
 public:
  Context(Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  LogBase base() const { return parse_log_base(g_.base); }
  double info(double nats) const { return to_base(nats, base()); }
  std::uint64_t seed() const { return g_.seed; }

  void emit(const std::string& text) const {
    if (g_.out_path.empty()) {
      out_ << text;
    } else {
      io::write_text(g_.out_path, text);
      note("wrote " + g_.out_path);
    }
  }
  void emit(const nlohmann::json& j) const { emit(j.dump(2) + "\n"); }
  void note(const std::string& text) const {
    if (!g_.quiet) err_ << text << '\n';
  }

 private:
  Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
};

nlohmann::json estimate_json(const Estimate& e, const std::function<double(double)>& unit) {
  return {{"value", unit(e.value)}, {"error", unit(e.error)}, {"certified", e.certified}};
}

void require_certified(const Estimate& e, const std::string& what) {
  if (!e.certified) throw ExitWith{kExitNumeric, what + " not certified (error " + io::format_float(e.error) + ")"};
}

void add_gic_options(CLI::App* cmd, GicParams& p) {
  cmd->add_option("--a", p.a, "cross gain into receiver 1")->required();
  cmd->add_option("--b", p.b, "cross gain into receiver 2")->default_val(0.0);
  cmd->add_option("--p1", p.p1, "power of user 1")->required();
  cmd->add_option("--p2", p.p2, "power of user 2")->required();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wasserstein continuity toolkit: transport distances, entropy bounds, interference corner points"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--base", g.base, "unit for information quantities")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->default_val("bits");
  app.add_option("--seed", g.seed, "seed for randomized commands")->default_val(0);
  app.add_option("--out", g.out_path, "write the result here instead of standard output");
  app.add_flag("--quiet", g.quiet, "suppress progress notes on standard error");

  Context ctx(g, out, err);
  std::function<void()> action;

  // region gic
  auto* region = app.add_subcommand("region", "capacity region curves")->require_subcommand(1);
  GicParams region_p;
  std::string constraint = "as";
  std::size_t region_grid = 200;
  auto* region_gic = region->add_subcommand("gic", "outer bound and inner curve as CSV (R1,R2,kind,base)");
  add_gic_options(region_gic, region_p);
  region_gic->add_option("--constraint", constraint, "power constraint: as or avg")
      ->check(CLI::IsMember({"as", "avg"}))
      ->default_val("as");
  region_gic->add_option("--grid", region_grid, "points per curve")->default_val(200)->check(CLI::Range(2, 100000));
  region_gic->callback([&] {
    action = [&] {
      region_p.constraint = parse_power_constraint(constraint);
      const RegionCurve curves[] = {outer_curve(region_p, region_grid), hk_inner_curve(region_p, region_grid)};
      ctx.emit(io::region_csv(curves, ctx.base()));
    };
  });

  // corners
  GicParams corner_p;
  auto* corners_cmd = app.add_subcommand("corners", "corner-point capacities as JSON");
  add_gic_options(corners_cmd, corner_p);
  corners_cmd->callback([&] {
    action = [&] {
      const CornerReport r = corners(corner_p);
      ctx.emit(nlohmann::json{{"base", to_string(ctx.base())},
                              {"c1", ctx.info(r.c1)},
                              {"c2", ctx.info(r.c2)},
                              {"c2_tilde", ctx.info(r.c2_tilde)},
                              {"c1_prime", ctx.info(r.c1_prime)},
                              {"c2_prime", ctx.info(r.c2_prime)},
                              {"c1_prime_case", r.c1_prime_case},
                              {"c2_prime_case", r.c2_prime_case}});
    };
  });

  // fc
  std::string channel_a_path;
  std::string channel_b_path;
  std::size_t fc_grid = 200;
  auto* fc_cmd = app.add_subcommand("fc", "concave envelope F_c of a chain X -> A -> B as CSV (t,Fc,grid_err)");
  fc_cmd->add_option("--channel-a", channel_a_path, "channel P_A|X (JSON)")->required();
  fc_cmd->add_option("--channel-b", channel_b_path, "channel P_B|A (JSON)")->required();
  fc_cmd->add_option("--grid", fc_grid, "grid resolution over the input simplex")->default_val(200);
  fc_cmd->callback([&] {
    action = [&] {
      const FcCurve curve = fc_envelope(io::load_channel(channel_a_path), io::load_channel(channel_b_path), fc_grid);
      std::ostringstream csv;
      csv << "t,Fc,grid_err\n";
      for (const FcKnot& k : curve.knots) {
        csv << io::format_float(ctx.info(k.t)) << ',' << io::format_float(ctx.info(k.fc)) << ','
            << io::format_float(ctx.info(curve.grid_err)) << '\n';
      }
      ctx.emit(csv.str());
      ctx.note(std::string("strict1 ") + (curve.strict1 ? "holds" : "fails") + ", strict2 " +
               (curve.strict2 ? "holds" : "fails"));
    };
  });

  // discrete-corner
  std::string p2_path;
  auto* dc_cmd = app.add_subcommand("discrete-corner", "corner point of the ternary additive channel as JSON");
  dc_cmd->add_option("--p2", p2_path, "noise pmf on {0,1,2} (JSON)")->required();
  dc_cmd->callback([&] {
    action = [&] {
      const DiscreteCornerReport r = discrete_corner(io::load_pmf(p2_path));
      nlohmann::json j{{"base", to_string(ctx.base())},
                       {"c2", ctx.info(r.c2)},
                       {"c1_prime", ctx.info(r.c1_prime)},
                       {"q_star", r.q_star},
                       {"p3", std::vector<double>(r.p3.probs().begin(), r.p3.probs().end())},
                       {"theorem_applies", r.theorem_applies},
                       {"fallback_grid", r.fallback_grid},
                       {"note", r.note}};
      ctx.emit(j);
      if (!r.theorem_applies) throw ExitWith{kExitInvariant, "uniform P2: " + r.note};
    };
  });

  // verify
  std::string family_name;
  std::size_t trials = 100;
  std::size_t threads = 0;
  auto* verify_cmd = app.add_subcommand("verify", "randomized inequality verification; report JSON in nats");
  verify_cmd->add_option("--family", family_name, "check family")->required();
  verify_cmd->add_option("--trials", trials, "number of trials")->default_val(100)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--threads", threads, "worker threads (0 = hardware)")->default_val(0);
  verify_cmd->callback([&] {
    action = [&] {
      TrialConfig config;
      config.family = parse_family(family_name);
      config.seed = ctx.seed();
      config.trials = trials;
      config.threads = threads;
      const VerifyReport report = run_family(config);
      ctx.emit(report_text(report));
      if (!report.failures.empty()) {
        throw ExitWith{kExitNumeric, std::to_string(report.failures.size()) + " check failure(s) in family " +
                                         family_name};
      }
      if (!report.certified) throw ExitWith{kExitNumeric, "report not certified"};
    };
  });

  // w2
  std::string p_path;
  std::string q_path;
  int order = 2;
  auto* w2_cmd = app.add_subcommand("w2", "Wasserstein distance between two 1-D Gaussian mixtures");
  w2_cmd->add_option("--p", p_path, "mixture JSON")->required();
  w2_cmd->add_option("--q", q_path, "mixture JSON")->required();
  w2_cmd->add_option("--order", order, "transport order (1 or 2)")->default_val(2)->check(CLI::IsMember({1, 2}));
  w2_cmd->callback([&] {
    action = [&] {
      const Estimate e = wp_quantile_1d(io::load_mixture(p_path), io::load_mixture(q_path), order);
      ctx.emit(nlohmann::json{{"order", order}, {"w", estimate_json(e, [](double v) { return v; })}});
      require_certified(e, "transport distance");
    };
  });

  // dbar, tv
  auto* dbar_cmd = app.add_subcommand("dbar", "normalized-Hamming transport distance between pmfs on X^n");
  dbar_cmd->add_option("--p", p_path, "pmf JSON")->required();
  dbar_cmd->add_option("--q", q_path, "pmf JSON")->required();
  dbar_cmd->callback([&] {
    action = [&] { ctx.emit(nlohmann::json{{"dbar", dbar(io::load_pmf(p_path), io::load_pmf(q_path))}}); };
  });
  auto* tv_cmd = app.add_subcommand("tv", "total variation distance between pmfs");
  tv_cmd->add_option("--p", p_path, "pmf JSON")->required();
  tv_cmd->add_option("--q", q_path, "pmf JSON")->required();
  tv_cmd->callback([&] {
    action = [&] { ctx.emit(nlohmann::json{{"tv", tv(io::load_pmf(p_path), io::load_pmf(q_path))}}); };
  });

  // entropy, kl, mi, dentropy
  auto* entropy_cmd = app.add_subcommand("entropy", "Shannon entropy of a pmf");
  entropy_cmd->add_option("--p", p_path, "pmf JSON")->required();
  entropy_cmd->callback([&] {
    action = [&] {
      ctx.emit(nlohmann::json{{"base", to_string(ctx.base())},
                              {"entropy", ctx.info(shannon_entropy(io::load_pmf(p_path)))}});
    };
  });
  auto* kl_cmd = app.add_subcommand("kl", "relative entropy D(P||Q) of pmfs");
  kl_cmd->add_option("--p", p_path, "pmf JSON")->required();
  kl_cmd->add_option("--q", q_path, "pmf JSON")->required();
  kl_cmd->callback([&] {
    action = [&] {
      const double d = kl_discrete(io::load_pmf(p_path), io::load_pmf(q_path));
      ctx.emit(nlohmann::json{{"base", to_string(ctx.base())},
                              {"kl", std::isfinite(d) ? nlohmann::json(ctx.info(d)) : nlohmann::json("inf")}});
    };
  });
  std::string channel_path;
  auto* mi_cmd = app.add_subcommand("mi", "mutual information of an input pmf and a channel");
  mi_cmd->add_option("--input", p_path, "input pmf JSON")->required();
  mi_cmd->add_option("--channel", channel_path, "channel JSON")->required();
  mi_cmd->callback([&] {
    action = [&] {
      const double i = mutual_info_discrete(io::load_pmf(p_path), io::load_channel(channel_path));
      ctx.emit(nlohmann::json{{"base", to_string(ctx.base())}, {"mi", ctx.info(i)}});
    };
  });
  auto* dentropy_cmd = app.add_subcommand("dentropy", "differential entropy of a 1-D Gaussian mixture");
  dentropy_cmd->add_option("--mixture", p_path, "mixture JSON")->required();
  dentropy_cmd->callback([&] {
    action = [&] {
      const Estimate e = diff_entropy_1d(io::load_mixture(p_path));
      ctx.emit(nlohmann::json{{"base", to_string(ctx.base())},
                              {"dentropy", estimate_json(e, [&](double v) { return ctx.info(v); })}});
      require_certified(e, "differential entropy");
    };
  });

  // eta
  std::string two_input_path;
  std::string p0_path;
  std::size_t eta_grid = 100;
  auto* eta_cmd = app.add_subcommand("eta", "contraction coefficients of a two-input channel");
  eta_cmd->add_option("--two-input", two_input_path, "two-input channel JSON")->required();
  eta_cmd->add_option("--p0", p0_path, "reference pmf on A (default uniform)");
  eta_cmd->add_option("--grid", eta_grid, "simplex grid resolution for the KL search")->default_val(100);
  eta_cmd->callback([&] {
    action = [&] {
      const TwoInputChannel w = io::load_two_input(two_input_path);
      const Pmf p0 = p0_path.empty() ? Pmf::uniform(w.a_size()) : io::load_pmf(p0_path);
      const EtaKlEstimate kl = eta_kl_two_input(w, p0, eta_grid);
      ctx.emit(nlohmann::json{{"eta_tv", eta_tv_two_input(w)},
                              {"eta_kl_grid", kl.value},
                              {"eta_kl_x", kl.x},
                              {"eta_kl_q0", kl.q0},
                              {"eta_kl_grid_lower_bound", kl.grid_lower_bound}});
    };
  });

  // bounds regularity
  auto* bounds_cmd = app.add_subcommand("bounds", "entropy-continuity bound constants")->require_subcommand(1);
  std::string b_path;
  std::string u_path;
  double sigma_sq = 1.0;
  double power = -1.0;
  bool as_json = true;
  auto* reg_cmd = bounds_cmd->add_subcommand(
      "regularity", "constants and deltas for V = B + N(0, sigma^2) against a mixture U (JSON output)");
  reg_cmd->add_option("--b", b_path, "law of B as a mixture JSON of atoms (var 0)")->required();
  reg_cmd->add_option("--sigma-sq", sigma_sq, "smoothing variance")->default_val(1.0)->check(CLI::PositiveNumber);
  reg_cmd->add_option("--u", u_path, "mixture JSON for U")->required();
  reg_cmd->add_option("--power", power, "second-moment cap P for the W2-Lipschitz delta (omit to skip)");
  reg_cmd->add_flag("--json", as_json, "JSON output (the only format)");
  reg_cmd->callback([&] {
    action = [&] {
      const GaussianMixture1D b = io::load_mixture(b_path);
      if (!b.all_atoms()) throw InvalidArgument("--b must consist of atoms (var 0)");
      const GaussianMixture1D v = b.convolve_gaussian(sigma_sq);
      const GaussianMixture1D u = io::load_mixture(u_path);
      const RegularityParams reg = gaussian_smoothing_regularity(sigma_sq, b.first_abs_moment());
      const GradientCertificate cert = certify_regularity(v, reg, regularity_grid_half_width(sigma_sq, b));
      const Estimate w2 = wp_quantile_1d(u, v, 2);
      const Estimate w1 = wp_quantile_1d(u, v, 1);
      const double m2u = u.second_moment();
      const double m2v = v.second_moment();
      auto info = [&](double x) { return ctx.info(x); };
      nlohmann::json j{{"base", to_string(ctx.base())},
                       {"c1", reg.c1},
                       {"c2", reg.c2},
                       {"gradient_max_excess", cert.max_excess},
                       {"m2_u", m2u},
                       {"m2_v", m2v},
                       {"sup_norm_b", b.max_abs_mean()},
                       {"w2", estimate_json(w2, [](double x) { return x; })},
                       {"w1", estimate_json(w1, [](double x) { return x; })},
                       {"delta_ppr", info(delta_ppr(reg, m2u, m2v, w2.value))},
                       {"symmetric_kl_bound", info(symmetric_kl_bound(reg, m2u, m2v, w2.value))},
                       {"best_bound", info(best_bound(sigma_sq, b.max_abs_mean(), m2u, m2v, w1.value))}};
      if (power >= 0.0) j["w2lip_delta"] = info(w2lip_delta(sigma_sq, power, 1, w2.value));
      ctx.emit(j);
      require_certified(w2, "W2");
      require_certified(w1, "W1");
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "E1: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    parse_log_base(g.base);
    if (action) action();
    return kExitOk;
  } catch (const ExitWith& e) {
    err << 'E' << e.code << ": " << e.message << '\n';
    return e.code;
  } catch (const InvalidArgument& e) {
    err << "E1: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "E3: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const NumericFailure& e) {
    err << "E2: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "E3: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace wcont
