#include "advcol/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace advcol::cli {

namespace fs = std::filesystem;
using nlohmann::json;

Settings default_settings(const std::string& problem) {
  Settings s;
  s.problem = problem;
  auto& t = s.train;
  t.eval_every = 50;
  if (problem == "expdecay" || problem == "expdecay-ode") {
    t.n_points = 30;
    t.target_loss = 1e-6;
    t.max_iters = 20000;
  } else if (problem == "logistic") {
    t.n_points = 20;
    t.target_loss = 1e-6;
    t.max_iters = 20000;
    t.sampler.lambda = 0.01;
  } else if (problem == "hatom-n1" || problem == "hatom-n2") {
    t.n_points = 30;
    t.target_loss = 1e-4;
    t.max_iters = 30000;
  } else if (problem == "laplace") {
    t.n_points = 256;
    t.target_loss = 1e-4;
    t.max_iters = 30000;
  }
  return s;
}

namespace {

double parse_target(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string()) {
    const auto str = v.get<std::string>();
    if (str == "none" || str == "inf") return std::numeric_limits<double>::infinity();
    return std::stod(str);
  }
  return v.get<double>();
}

double parse_target(const std::string& v) {
  if (v == "none" || v == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double d = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("target loss must be a number or 'none'");
  return d;
}

void apply_adam(AdamConfig& a, const std::string& key, const json& v, bool& handled) {
  handled = true;
  if (key == "lr") a.lr = v.get<double>();
  else if (key == "beta1") a.beta1 = v.get<double>();
  else if (key == "beta2") a.beta2 = v.get<double>();
  else if (key == "eps") a.eps = v.get<double>();
  else handled = false;
}

[[noreturn]] void unknown_key(const std::string& where, const std::string& key) {
  throw std::invalid_argument("config: unknown key '" + where + key + "'");
}

std::vector<Scheme> parse_schemes(const std::string& list) {
  std::vector<Scheme> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_scheme(item));
  if (out.empty()) throw std::invalid_argument("--schemes: no scheme given");
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

void apply_config(Settings& s, const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
  auto& t = s.train;
  for (const auto& [key, v] : doc.items()) {
    if (key == "problem") s.problem = v.get<std::string>();
    else if (key == "problem_params") {
      if (!v.is_object()) throw std::invalid_argument("config: problem_params must be an object");
      s.problem_params = v;
    } else if (key == "scheme") t.scheme = parse_scheme(v.get<std::string>());
    else if (key == "schemes") {
      s.schemes.clear();
      for (const auto& x : v) s.schemes.push_back(parse_scheme(x.get<std::string>()));
    } else if (key == "n_points") t.n_points = v.get<int>();
    else if (key == "max_iters") t.max_iters = v.get<std::int64_t>();
    else if (key == "target_loss") t.target_loss = parse_target(v);
    else if (key == "loss_type") t.loss_type = parse_loss_type(v.get<std::string>());
    else if (key == "eval_every") t.eval_every = v.get<int>();
    else if (key == "seed") t.seed = v.get<std::uint64_t>();
    else if (key == "noise_std") t.noise_std = v.is_null() ? -1.0 : v.get<double>();
    else if (key == "mse_grid") t.mse_grid = v.get<int>();
    else if (key == "trials") s.trials = v.get<int>();
    else if (key == "jobs") s.jobs = v.get<int>();
    else if (key == "snapshot_every") s.snapshot_every = v.get<int>();
    else if (key == "grid_n") s.grid_n = v.get<int>();
    else if (key == "out") s.out = v.get<std::string>();
    else if (key == "wall_time") s.wall_time = v.get<bool>();
    else if (key == "solver") {
      for (const auto& [k2, v2] : v.items()) {
        bool handled = false;
        apply_adam(t.solver_adam, k2, v2, handled);
        if (handled) continue;
        if (k2 == "hidden") t.solver_hidden = v2.get<std::vector<int>>();
        else if (k2 == "activation") t.solver_activation = parse_activation(v2.get<std::string>());
        else unknown_key("solver.", k2);
      }
    } else if (key == "sampler") {
      for (const auto& [k2, v2] : v.items()) {
        bool handled = false;
        apply_adam(t.sampler_adam, k2, v2, handled);
        if (handled) continue;
        auto& sc = t.sampler;
        if (k2 == "hidden") sc.hidden = v2.get<std::vector<int>>();
        else if (k2 == "activation") sc.activation = parse_activation(v2.get<std::string>());
        else if (k2 == "z_dim") sc.z_dim = v2.get<int>();
        else if (k2 == "k") sc.k = v2.get<int>();
        else if (k2 == "lambda") sc.lambda = v2.get<double>();
        else if (k2 == "eps_dist") sc.eps_dist = v2.get<double>();
        else unknown_key("sampler.", k2);
      }
    } else {
      unknown_key("", key);
    }
  }
}

std::string config_reference() {
  const Settings d;
  std::ostringstream o;
  o << "Config file (JSON; flags override file values, file overrides defaults):\n"
       "  problem          expdecay | logistic | hatom-n1 | hatom-n2 | laplace | expdecay-ode\n"
       "  problem_params   object: gamma M n l lambda x0 y0 slope0 beta boundary_points\n"
       "                   normalize_inputs x_floor domain_lo domain_hi trial loss_type boundary\n"
       "                   (laplace: boundary \"sin-y\" selects the literal condition, soft trial)\n"
       "  scheme           adversarial | uniform | linspace | noisy-linspace   [adversarial]\n"
       "  schemes          list of schemes for compare        [adversarial, noisy-linspace]\n"
       "  n_points         points per batch     [expdecay 30, logistic 20, hatom 30, laplace 256]\n"
       "  max_iters        iteration budget     [20000 ODEs, 30000 hatom and laplace]\n"
       "  target_loss      number or \"none\"     [1e-6 ODEs, 1e-4 hatom and laplace]\n"
       "  loss_type        MSE | VAL            [VAL for laplace, MSE otherwise]\n"
       "  eval_every       iterations between stopping checks     [50]\n"
       "  seed             base seed            [0]\n"
       "  trials, jobs     compare only         [10, cores]\n"
       "  snapshot_every, grid_n   trace only   [1, 512]\n"
       "  noise_std        noisy-linspace sigma, null = half the grid spacing [null]\n"
       "  mse_grid         points of the MSE grid                  [1000]\n"
       "  wall_time        false writes 0 for all timings          [true]\n"
       "  solver           {hidden [32,32], activation tanh|sin, lr 1e-3, beta1 0.9,\n"
       "                    beta2 0.999, eps 1e-8}\n"
       "  sampler          {hidden [32,32], activation, z_dim 8, k 2,\n"
       "                    lambda 1.0 (logistic 0.01), eps_dist 1e-12, lr, beta1,\n"
       "                    beta2, eps}\n"
       "Losses are sums over the batch, so lambda trades off against n points.\n";
  return o.str();
}

Problem settings_problem(const Settings& s) { return make_problem(s.problem, s.problem_params); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace

json report_to_json(const RunReport& r, bool wall_time) {
  json j;
  j["problem"] = r.problem;
  j["scheme"] = r.scheme;
  j["seed"] = r.seed;
  j["iterations"] = r.iterations;
  j["stop_reason"] = std::string(stop_reason_name(r.stop_reason));
  j["wall_time_s"] = wall_time ? r.wall_time_s : 0.0;
  j["final_loss"] = finite_or_null(r.final_loss);
  j["loss_type"] = std::string(loss_type_name(r.loss_type));
  if (!r.error.empty()) j["error"] = r.error;
  auto trace = json::array();
  for (const auto& m : r.trace) {
    trace.push_back({{"iteration", m.iteration},
                     {"solver_loss", m.solver_loss},
                     {"sampler_loss", optional_number(m.sampler_loss)},
                     {"entropy", optional_number(m.entropy)},
                     {"wall_ms", wall_time ? m.wall_ms : 0.0},
                     {"eval_loss", optional_number(m.eval_loss)}});
  }
  j["trace"] = trace;
  return j;
}

json summary_to_json(const ComparisonSummary& c, bool wall_time) {
  json j;
  j["problem"] = c.problem;
  j["loss_type"] = std::string(loss_type_name(c.loss_type));
  auto schemes = json::array();
  for (const auto& s : c.schemes) {
    json e;
    e["scheme"] = s.scheme;
    e["avg_time_s"] = wall_time ? s.avg_time_s : 0.0;
    e["avg_loss"] = finite_or_null(s.avg_loss);
    e["completed"] = s.completed;
    e["aborted"] = s.aborted;
    auto trials = json::array();
    for (const auto& r : s.trials) {
      json t = report_to_json(r, wall_time);
      t.erase("trace");
      trials.push_back(t);
    }
    e["trials"] = trials;
    schemes.push_back(e);
  }
  j["schemes"] = schemes;
  return j;
}

std::string metrics_csv(const RunReport& r) {
  std::ostringstream o;
  o << "iteration,solver_loss,sampler_loss,entropy,eval_loss\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& m : r.trace)
    o << m.iteration << ',' << format_number(m.solver_loss) << ',' << opt(m.sampler_loss) << ','
      << opt(m.entropy) << ',' << opt(m.eval_loss) << '\n';
  return o.str();
}

std::string compare_csv(const ComparisonSummary& c, bool wall_time) {
  std::ostringstream o;
  o << "scheme,trial,seed,iterations,stop_reason,time_s,final_loss\n";
  for (const auto& s : c.schemes)
    for (std::size_t t = 0; t < s.trials.size(); ++t) {
      const auto& r = s.trials[t];
      o << s.scheme << ',' << t << ',' << r.seed << ',' << r.iterations << ','
        << stop_reason_name(r.stop_reason) << ',' << format_number(wall_time ? r.wall_time_s : 0.0)
        << ',' << format_number(r.final_loss) << '\n';
    }
  return o.str();
}

std::string compare_table(const ComparisonSummary& c) {
  std::ostringstream o;
  o << "problem " << c.problem << " (loss " << loss_type_name(c.loss_type) << ")\n";
  o << std::left << std::setw(16) << "scheme" << std::setw(14) << "avg time (s)" << std::setw(16)
    << "avg loss" << "trials\n";
  for (const auto& s : c.schemes) {
    std::ostringstream t, l;
    t << std::fixed << std::setprecision(3) << s.avg_time_s;
    l << std::scientific << std::setprecision(3) << s.avg_loss;
    o << std::setw(16) << s.scheme << std::setw(14) << t.str() << std::setw(16) << l.str()
      << s.completed;
    if (s.aborted) o << " (" << s.aborted << " aborted)";
    o << '\n';
  }
  return o.str();
}

std::string trace_csv(const std::vector<TraceSnapshot>& snapshots) {
  std::ostringstream o;
  o << "iteration,kind,x,value\n";
  for (const auto& s : snapshots) {
    auto rows = [&](const char* kind, const std::vector<double>& xs, const std::vector<double>& vs) {
      for (std::size_t i = 0; i < vs.size(); ++i)
        o << s.iteration << ',' << kind << ',' << format_number(xs[i]) << ','
          << format_number(vs[i]) << '\n';
    };
    rows("sample", s.samples, s.sample_predictions);
    rows("prediction", s.grid, s.prediction);
    rows("analytic", s.grid, s.analytic);
    rows("residual", s.grid, s.residual);
  }
  return o.str();
}

namespace {

int report_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
  return 1;
}

void print_summary(std::ostream& out, const RunReport& r, bool wall_time) {
  out << r.problem << ' ' << r.scheme << " iterations=" << r.iterations
      << " stop=" << stop_reason_name(r.stop_reason) << " final_loss=" << format_number(r.final_loss)
      << " (" << loss_type_name(r.loss_type) << ") time_s="
      << format_number(wall_time ? r.wall_time_s : 0.0) << '\n';
}

}  // namespace

int cmd_solve(const Settings& s, std::ostream& out, std::ostream& err) {
  try {
    const Problem problem = settings_problem(s);
    const RunReport r = run(problem, s.train);
    fs::create_directories(s.out);
    write_file(s.out / "report.json", dump(report_to_json(r, s.wall_time)));
    write_file(s.out / "solver.json", dump(to_json(r.solver)));
    write_file(s.out / "metrics.csv", metrics_csv(r));
    print_summary(out, r, s.wall_time);
    if (r.stop_reason == StopReason::aborted) {
      err << "error: run aborted: " << r.error << '\n';
      return 1;
    }
    return r.stop_reason == StopReason::target ? 0 : 2;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

int cmd_compare(const Settings& s, std::ostream& out, std::ostream& err) {
  try {
    const Problem problem = settings_problem(s);
    const ComparisonSummary c = compare(problem, s.schemes, s.train, s.trials, s.jobs);
    fs::create_directories(s.out);
    write_file(s.out / "compare.json", dump(summary_to_json(c, s.wall_time)));
    write_file(s.out / "compare.csv", compare_csv(c, s.wall_time));
    out << compare_table(c);
    return 0;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

int cmd_trace(const Settings& s, std::ostream& out, std::ostream& err) {
  try {
    const Problem problem = settings_problem(s);
    if (problem.dim() != 1)
      throw std::invalid_argument("trace supports 1-D problems only; '" + problem.name +
                                  "' is 2-D");
    if (s.snapshot_every < 1) throw std::invalid_argument("--snapshot-every must be at least 1");
    if (s.grid_n < 2) throw std::invalid_argument("--grid-n must be at least 2");
    std::vector<TraceSnapshot> snaps;
    const RunReport r = run(problem, s.train,
                            [&](const TrainState& state, const SampleBatch& batch,
                                const IterationMetrics& m) {
                              if (m.iteration % s.snapshot_every == 0)
                                snaps.push_back(
                                    snapshot(state.solver, problem, batch, m.iteration, s.grid_n));
                            });
    fs::create_directories(s.out);
    write_file(s.out / "trace.csv", trace_csv(snaps));
    print_summary(out, r, s.wall_time);
    if (r.stop_reason == StopReason::aborted) {
      err << "error: run aborted: " << r.error << '\n';
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neural ODE/PDE solver with adversarially sampled collocation points"};
  app.footer(config_reference());
  app.require_subcommand(1);

  struct Flags {
    std::string problem, scheme, target, config, out, schemes;
    int n_points = 0, eval_every = 0, trials = 0, jobs = 0, snapshot_every = 0, grid_n = 0;
    std::int64_t max_iters = 0;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    bool no_wall_time = false;
  } f;

  std::vector<CLI::App*> subs;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", f.problem, "problem name");
    sub->add_option("--scheme", f.scheme, "sampling scheme");
    sub->add_option("--n-points", f.n_points, "points per batch");
    sub->add_option("--target-loss", f.target, "target evaluation loss, or 'none'");
    sub->add_option("--max-iters", f.max_iters, "iteration budget");
    sub->add_option("--seed", f.seed, "base seed");
    sub->add_option("--eval-every", f.eval_every, "iterations between stopping checks");
    sub->add_option("--lambda", f.lambda, "entropy penalty weight");
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--out", f.out, "output directory");
    sub->add_flag("--no-wall-time", f.no_wall_time, "write 0 for all timing fields");
    subs.push_back(sub);
  };
  auto* solve = app.add_subcommand("solve", "train one solver, write report.json and solver.json");
  add_common(solve);
  auto* cmp = app.add_subcommand("compare", "paired multi-trial comparison of sampling schemes");
  add_common(cmp);
  cmp->add_option("--schemes", f.schemes, "comma-separated schemes");
  cmp->add_option("--trials", f.trials, "trials per scheme");
  cmp->add_option("--jobs", f.jobs, "concurrent runs (0 = cores)");
  auto* trace = app.add_subcommand("trace", "per-iteration samples, prediction and residuals");
  add_common(trace);
  trace->add_option("--snapshot-every", f.snapshot_every, "iterations between snapshots");
  trace->add_option("--grid-n", f.grid_n, "dense grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = solve->parsed() ? solve : cmp->parsed() ? cmp : trace;
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  try {
    json doc = json::object();
    if (given("--config")) {
      std::ifstream in(f.config);
      if (!in) throw std::runtime_error("cannot read config file " + f.config);
      doc = json::parse(in);
    }
    std::string problem = "expdecay";
    if (doc.is_object() && doc.contains("problem")) problem = doc["problem"].get<std::string>();
    if (given("--problem")) problem = f.problem;
    make_problem(problem);  // reject unknown names before anything else
    Settings s = default_settings(problem);
    apply_config(s, doc);
    s.problem = problem;
    auto& t = s.train;
    if (given("--scheme")) t.scheme = parse_scheme(f.scheme);
    if (given("--n-points")) t.n_points = f.n_points;
    if (given("--target-loss")) t.target_loss = parse_target(f.target);
    if (given("--max-iters")) t.max_iters = f.max_iters;
    if (given("--seed")) t.seed = f.seed;
    if (given("--eval-every")) t.eval_every = f.eval_every;
    if (given("--lambda")) t.sampler.lambda = f.lambda;
    if (given("--out")) s.out = f.out;
    if (f.no_wall_time) s.wall_time = false;
    if (sub == cmp) {
      if (given("--schemes")) s.schemes = parse_schemes(f.schemes);
      if (given("--trials")) s.trials = f.trials;
      if (given("--jobs")) s.jobs = f.jobs;
    }
    if (sub == trace) {
      if (given("--snapshot-every")) s.snapshot_every = f.snapshot_every;
      if (given("--grid-n")) s.grid_n = f.grid_n;
    }
    if (sub == solve) return cmd_solve(s, out, err);
    if (sub == cmp) return cmd_compare(s, out, err);
    return cmd_trace(s, out, err);
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

}  // namespace advcol::cli
