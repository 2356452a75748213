#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qguess/bounds.hpp"
#include "qguess/entropy.hpp"
#include "qguess/harness.hpp"
#include "qguess/io.hpp"
#include "qguess/minimax.hpp"
#include "qguess/strategy.hpp"

namespace {

using namespace qguess;

constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerify = 4;
constexpr int kExitNonConvergence = 5;

// Raised for malformed or invalid input documents.
struct InputError {
  std::string message;
};

template <typename Fn>
auto load(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
}

struct Options {
  int digits = 12;
  bool bits = false;
  std::string out;
};

std::string format(double v, const Options& o) {
  if (o.bits) v /= std::log(2.0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.*g", o.digits, v);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError{"cannot write " + path};
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError{"--grid expects start:stop:count"};
    }
  }
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]))
    throw InputError{"--grid expects start:stop:count"};
  const int n = static_cast<int>(parts[2]);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (n - 1));
  return out;
}

struct EntropyArgs {
  std::vector<std::string> files;
  std::string measure = "shannon";
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> q;
  std::optional<double> rho;
  std::string grid;
};

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw InputError{std::string("missing ") + flag};
  return *v;
}

double near(double a, double b) { return std::abs(a - b) <= kLimitThreshold * std::max(1.0, std::abs(a)); }

// Orders: --alpha/--beta, or --q/--rho meaning (q/(1+rho), q).
AlphaBeta orders(const EntropyArgs& a, std::optional<double> alpha_override) {
  if (a.q && a.rho) {
    const NEParams p(*a.q, *a.rho);
    return AlphaBeta(alpha_override.value_or(p.alpha()), p.q);
  }
  return AlphaBeta(alpha_override ? *alpha_override : require(a.alpha, "--alpha"), require(a.beta, "--beta"));
}

double entropy_value(const EntropyArgs& a, const std::vector<io::Json>& docs, std::optional<double> alpha) {
  const std::string& m = a.measure;
  const auto need = [&](std::size_t n) {
    if (docs.size() != n) throw InputError{"measure " + m + " takes " + std::to_string(n) + " input file(s)"};
  };
  if (m == "shannon") {
    need(1);
    return shannon(load([&] { return io::pmf_from_json(docs[0]); }));
  }
  if (m == "renyi") {
    need(1);
    return renyi(load([&] { return io::pmf_from_json(docs[0]); }), alpha ? *alpha : require(a.alpha, "--alpha"));
  }
  if (m == "lne") {
    need(1);
    const auto p = load([&] { return io::pmf_from_json(docs[0]); });
    const auto ab = orders(a, alpha);
    return near(ab.alpha, ab.beta) ? lne_diag(p, ab.alpha) : lne(p, ab);
  }
  if (m == "clne") {
    need(1);
    const auto j = load([&] { return io::source_from_json(docs[0]); });
    const auto ab = orders(a, alpha);
    return near(ab.alpha, ab.beta) ? clne_diag(j, ab.alpha) : clne(j, ab);
  }
  if (m == "kl") {
    need(2);
    return kl(load([&] { return io::pmf_from_json(docs[0]); }), load([&] { return io::pmf_from_json(docs[1]); }));
  }
  if (m == "relab") {
    need(2);
    return relative_ab(load([&] { return io::pmf_from_json(docs[0]); }), load([&] { return io::pmf_from_json(docs[1]); }),
                       orders(a, alpha));
  }
  if (m == "relab-cond") {
    need(2);
    return relative_ab_cond(load([&] { return io::source_from_json(docs[0]); }),
                            load([&] { return io::source_from_json(docs[1]); }), orders(a, alpha));
  }
  throw InputError{"unknown measure " + m};
}

int cmd_entropy(const EntropyArgs& a, const Options& o) {
  std::vector<io::Json> docs;
  for (const auto& f : a.files) docs.push_back(load([&] { return io::read_json_file(f); }));
  Output out(o.out);
  if (a.grid.empty()) {
    out.stream() << format(entropy_value(a, docs, std::nullopt), o) << '\n';
    return 0;
  }
  const auto alphas = parse_grid(a.grid);
  out.stream() << "alpha,value\n";
  for (double alpha : alphas) out.stream() << format(alpha, {17, false, {}}) << ',' << format(entropy_value(a, docs, alpha), o) << '\n';
  return 0;
}

struct GuessArgs {
  std::string file;
  std::string strategy;
  std::string reference;
  std::string theorem = "auto";
  double q = 1.0;
  double rho = 1.0;
};

JointPmf source(const std::string& path) {
  return load([&] { return io::source_from_json(io::read_json_file(path)); });
}

GuessingStrategy strategy_for(const GuessArgs& a, const JointPmf& j) {
  if (a.strategy.empty()) return optimal_strategy(j, a.q);
  return load([&] {
    auto doc = io::read_json_file(a.strategy);
    if (!doc.contains("y_labels") && j.y_size() == 1) doc["y_labels"] = j.y_labels();
    return io::strategy_from_json(doc, j.x_labels());
  });
}

int cmd_guess(const GuessArgs& a, const Options& o) {
  const auto j = source(a.file);
  Output(o.out).stream() << io::to_json(optimal_strategy(j, a.q)).dump() << '\n';
  return 0;
}

int cmd_moment(const GuessArgs& a, const Options& o) {
  const auto j = source(a.file);
  const NEParams params(a.q, a.rho);
  Output(o.out).stream() << format(q_moment(strategy_for(a, j), j, params), o) << '\n';
  return 0;
}

int cmd_redundancy(const GuessArgs& a, const Options& o) {
  const auto j = source(a.file);
  const NEParams params(a.q, a.rho);
  if (a.strategy.empty()) throw InputError{"redundancy needs --strategy"};
  Output(o.out).stream() << format(redundancy(j, strategy_for(a, j), params), o) << '\n';
  return 0;
}

int cmd_bound(const GuessArgs& a, const Options& o) {
  const auto j = source(a.file);
  const NEParams params(a.q, a.rho);
  std::vector<BoundReport> rows;
  std::string t = a.theorem;
  if (t == "auto") t = !a.reference.empty() ? "M2" : (a.strategy.empty() ? "T3" : (j.y_size() == 1 ? "T1" : "T2"));
  if (t == "T1") {
    if (j.y_size() != 1) throw InputError{"T1 needs an unconditional pmf"};
    rows.push_back(check_theorem1(conditional_given_y(j, Eigen::Index{0}), strategy_for(a, j), params));
  } else if (t == "T2") {
    rows.push_back(check_theorem2(j, strategy_for(a, j), params));
  } else if (t == "T3") {
    rows.push_back(check_theorem3(j, params));
  } else if (t == "M2") {
    if (a.reference.empty()) throw InputError{"M2 needs --ref"};
    rows.push_back(check_mismatch_sandwich(j, source(a.reference), params));
  } else if (t == "M3") {
    if (a.strategy.empty()) throw InputError{"M3 needs --strategy"};
    rows.push_back(check_mismatch3(j, strategy_for(a, j), params));
  } else {
    throw InputError{"unknown theorem " + t};
  }
  Output out(o.out);
  harness::write_csv_header(out.stream());
  for (const auto& r : rows) harness::write_csv_row(out.stream(), {r, 0});
  return 0;
}

struct MinimaxArgs {
  std::string file;
  double q = 1.0;
  double rho = 1.0;
  SolverConfig solver;
};

int cmd_minimax(const MinimaxArgs& a, const Options& o) {
  const auto family = load([&] { return io::family_from_json(io::read_json_file(a.file)); });
  const NEParams params(a.q, a.rho);
  const auto robust = robust_strategy(family, params, a.solver);
  io::Json j = io::to_json(robust.minimax);
  j["robust_strategy"] = io::to_json(robust.strategy);
  j["worst_redundancy"] = robust.report.moment;
  j["best_worst_redundancy"] = robust.best_worst_redundancy;
  j["exhaustive"] = robust.exhaustive;
  Output(o.out).stream() << j.dump(2) << '\n';
  if (!robust.minimax.converged) {
    std::cerr << "error: " << error_name(ErrorCode::NonConvergence) << ": solver stopped at the iteration cap\n";
    return kExitNonConvergence;
  }
  return 0;
}

struct VerifyArgs {
  std::string config;
  std::string csv;
  std::string summary;
};

int cmd_verify(const VerifyArgs& a, const Options& o) {
  const auto config = load([&] { return harness::sweep_config_from_json(io::read_json_file(a.config)); });
  const auto report = harness::run_sweep(config);
  if (!a.csv.empty()) {
    Output csv(a.csv);
    report.write_csv(csv.stream());
  }
  const auto summary = report.summary().dump(2);
  if (!a.summary.empty()) Output(a.summary).stream() << summary << '\n';
  Output(o.out).stream() << summary << '\n';
  return report.failures() == 0 ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guessing moments, bounds and minimax redundancy under escort weighting"};
  app.require_subcommand(1, 1);
  Options opts;
  app.add_option("--digits", opts.digits, "Significant digits for printed values")->check(CLI::Range(1, 17));
  app.add_flag("--bits", opts.bits, "Report entropies and log-values in bits");
  app.add_option("-o,--out", opts.out, "Output file (default stdout)");

  EntropyArgs ent;
  auto* entropy = app.add_subcommand("entropy", "Entropy and divergence measures");
  entropy->add_option("files", ent.files, "pmf or joint JSON (two for divergences)")->required()->check(CLI::ExistingFile);
  entropy->add_option("-m,--measure", ent.measure)
      ->check(CLI::IsMember({"shannon", "renyi", "lne", "clne", "kl", "relab", "relab-cond"}));
  entropy->add_option("--alpha", ent.alpha);
  entropy->add_option("--beta", ent.beta);
  entropy->add_option("--q", ent.q);
  entropy->add_option("--rho", ent.rho);
  entropy->add_option("--grid", ent.grid, "Sweep alpha over start:stop:count, CSV out");

  GuessArgs guess_args;
  const auto guess_like = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", guess_args.file, "pmf or joint JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--q", guess_args.q);
    sub->add_option("--rho", guess_args.rho);
    return sub;
  };
  auto* guess = guess_like("guess", "Optimal rank table");
  auto* moment = guess_like("moment", "E_q[G^rho]");
  auto* bound = guess_like("bound", "Bound report rows as CSV");
  auto* redund = guess_like("redundancy", "Redundancy of a strategy");
  for (auto* sub : {moment, bound, redund})
    sub->add_option("-s,--strategy", guess_args.strategy, "Strategy JSON")->check(CLI::ExistingFile);
  bound->add_option("--ref", guess_args.reference, "Mismatched reference pmf")->check(CLI::ExistingFile);
  bound->add_option("--theorem", guess_args.theorem)->check(CLI::IsMember({"auto", "T1", "T2", "T3", "M2", "M3"}));

  MinimaxArgs mm;
  auto* minimax = app.add_subcommand("minimax", "Minimax redundancy and robust strategy");
  minimax->add_option("file", mm.file, "Family JSON")->required()->check(CLI::ExistingFile);
  minimax->add_option("--q", mm.q);
  minimax->add_option("--rho", mm.rho);
  minimax->add_option("--restarts", mm.solver.restarts);
  minimax->add_option("--tol", mm.solver.tol);
  minimax->add_option("--max-iter", mm.solver.max_iterations);
  minimax->add_option("--seed", mm.solver.seed);

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run the property sweep");
  verify->add_option("config", ver.config, "SweepConfig JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--csv", ver.csv, "Write bound rows");
  verify->add_option("--summary", ver.summary, "Write summary JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*entropy) return cmd_entropy(ent, opts);
    if (*guess) return cmd_guess(guess_args, opts);
    if (*moment) return cmd_moment(guess_args, opts);
    if (*bound) return cmd_bound(guess_args, opts);
    if (*redund) return cmd_redundancy(guess_args, opts);
    if (*minimax) return cmd_minimax(mm, opts);
    if (*verify) return cmd_verify(ver, opts);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::NonConvergence ? kExitNonConvergence : kExitDomain;
  }
  return kExitParse;
}
