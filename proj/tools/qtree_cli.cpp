// qtree: enumeration, forward maps, spectra, scattering data and shape recovery.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qtree/bcf.hpp"
#include "qtree/checks.hpp"
#include "qtree/error.hpp"
#include "qtree/inverse.hpp"
#include "qtree/io.hpp"
#include "qtree/pencil.hpp"
#include "qtree/scattering.hpp"
#include "qtree/spectral.hpp"

using namespace qtree;

namespace {

struct Config {
  std::string tree;
  std::string potential = "zero";
  double ell = 1.0;
  std::string range;
  std::vector<int> n_schedule{16, 32, 64, 128, 256};
  double tol = 1e-6;
  std::string out;
  std::string p_range;
  std::string record;
  std::string problem = "both";
  std::string s_trace;
  double window = 100.0;
  double margin = 0.25;
  int jobs = 0;
  bool absorb = false;
};

// Output sink opened before any computation so a bad path fails early.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("io", "cannot write " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

std::pair<int, int> parse_p_range(const std::string& s) {
  if (s.empty()) throw Error("usage", "--p is required");
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      int p = std::stoi(s);
      return {p, p};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw Error("usage", "--p expects A..B or a single integer");
  }
}

std::pair<double, double> parse_range(const std::string& s, std::pair<double, double> dflt) {
  if (s.empty()) return dflt;
  auto colon = s.find(':');
  if (colon == std::string::npos) throw Error("usage", "--range expects A:B");
  try {
    double a = std::stod(s.substr(0, colon)), b = std::stod(s.substr(colon + 1));
    if (!(a < b)) throw Error("usage", "--range needs A < B");
    return {a, b};
  } catch (const std::logic_error&) {
    throw Error("usage", "--range expects A:B");
  }
}

RootedTree load_tree(const Config& c) {
  if (c.tree.empty()) throw Error("usage", "--tree is required");
  if (c.tree.front() == '(') return from_code(c.tree);
  json j = read_json_file(c.tree);
  if (j.is_string()) return from_code(j.get<std::string>());
  return tree_from_json(j);
}

Potential load_potential(const Config& c) {
  if (!(c.ell > 0)) throw Error("usage", "--ell must be positive");
  return parse_potential_spec(c.potential, c.ell);
}

ScatterOptions scatter_options(const Config& c) {
  if (!(c.tol > 0)) throw Error("usage", "--tol must be positive");
  ScatterOptions o;
  o.n_schedule = c.n_schedule;
  o.tol = c.tol;
  o.window = c.window;
  return o;
}

void cmd_enum(const Config& c) {
  auto [lo, hi] = parse_p_range(c.p_range);
  Sink sink(c.out);
  for (int p = lo; p <= hi; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      json j = tree_to_json(t);
      j["code"] = canonical_code(t);
      sink.os() << j.dump() << '\n';
    }
}

json forward_row(const RootedTree& t) {
  Poly a = psi(t), b = psi_hat(t);
  std::string ratio = bcf_text(bcf_expand(t));
  return {{"code", canonical_code(t)}, {"tree", tree_to_json(t)}, {"psi", poly_to_json(a)},
          {"psi_hat", poly_to_json(b)}, {"bcf", ratio},
          {"row", {{"p", t.p()}, {"psi", a.str()}, {"psi_hat", b.str()}, {"ratio", ratio}}}};
}

void cmd_forward(const Config& c) {
  if (!c.p_range.empty() && c.tree.empty()) {
    auto [lo, hi] = parse_p_range(c.p_range);
    Sink sink(c.out);
    for (int p = std::max(lo, 2); p <= hi; ++p)
      for (const auto& t : enumerate_rooted_trees(p)) sink.os() << forward_row(t).dump() << '\n';
    return;
  }
  RootedTree t = load_tree(c);
  Sink sink(c.out);
  sink.os() << forward_row(t).dump(2) << '\n';
}

void cmd_spectrum(const Config& c) {
  RootedTree t = load_tree(c);
  Potential pot = load_potential(c);
  auto [a, b] = parse_range(c.range, {0.0, 100.0});
  if (c.problem != "D" && c.problem != "N" && c.problem != "both")
    throw Error("usage", "--problem must be D, N or both");
  Sink sink(c.out);
  CharEvaluator ev(t, pot);
  struct Row {
    double lambda;
    int mult;
    char problem;
  };
  std::vector<Row> rows;
  for (char which : {'D', 'N'}) {
    if (c.problem != "both" && c.problem[0] != which) continue;
    for (const auto& e : eigenvalues_in_interval(ev, which == 'D' ? Problem::D : Problem::N, a, b))
      rows.push_back({e.lambda, e.multiplicity, which});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.lambda < y.lambda; });
  sink.os() << "lambda,multiplicity,problem\n";
  for (const auto& r : rows) sink.os() << csv_number(r.lambda) << ',' << r.mult << ',' << r.problem << '\n';
}

void cmd_scatter(const Config& c) {
  RootedTree t = load_tree(c);
  if (c.absorb) t = absorb_pendant_root(t);
  Potential pot = load_potential(c);
  ScatterOptions opt = scatter_options(c);
  Sink sink(c.out);
  std::unique_ptr<std::ofstream> trace;
  if (!c.s_trace.empty()) {
    trace = std::make_unique<std::ofstream>(c.s_trace);
    if (!*trace) throw Error("io", "cannot write " + c.s_trace);
  }
  ScatteringRecord rec = scattering_info(t, pot, opt);
  sink.os() << record_to_json(rec).dump(2) << '\n';
  if (trace) {
    auto [k0, k1] = parse_range(c.range, {0.05, 20.0});
    *trace << "sqrt_lambda,re_S,im_S,abs_S\n";
    for (const auto& pt : s_trace(CharEvaluator(t, pot), k0, k1, 400))
      *trace << csv_number(pt.k) << ',' << csv_number(pt.S.real()) << ',' << csv_number(pt.S.imag()) << ','
             << csv_number(std::abs(pt.S)) << '\n';
  }
}

void cmd_invert(const Config& c) {
  if (c.record.empty()) throw Error("usage", "--record is required");
  json in = read_json_file(c.record);
  Sink sink(c.out);
  json out;
  if (in.contains("num") && in.contains("den")) {
    RecoveryResult r = recover_shape_ratio(poly_from_json(in["num"]), poly_from_json(in["den"]),
                                           in.at("p").get<int>());
    out = recovery_to_json(r);
  } else {
    Poly a, b;
    if (in.contains("f")) {
      std::tie(a, b) = interpolate_polynomials(record_from_json(in), c.margin);
    } else if (in.contains("psi") && in.contains("psi_hat")) {
      a = poly_from_json(in["psi"]);
      b = poly_from_json(in["psi_hat"]);
    } else {
      throw Error("bad_json", "input must be a scattering record, {psi, psi_hat} or {num, den, p}");
    }
    out = recovery_to_json(recover_shape(a, b));
    out["psi"] = poly_to_json(a);
    out["psi_hat"] = poly_to_json(b);
  }
  sink.os() << out.dump(2) << '\n';
}

struct AuditRow {
  std::string code;
  int p = 0;
  int recovered = 0;
  bool match = false;
  bool extras_consistent = true;
  double seconds = 0;
  std::string error;
};

AuditRow audit_one(const RootedTree& t, const Potential& pot, const ScatterOptions& opt, double margin) {
  AuditRow row;
  row.code = canonical_code(t);
  row.p = t.p();
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto [a, b] = interpolate_polynomials(scattering_info(t, pot, opt), margin);
    RecoveryResult r = recover_shape(a, b);
    row.recovered = static_cast<int>(r.shapes.size());
    Poly ta = psi(t), tb = psi_hat(t);
    for (const auto& s : r.shapes) {
      if (canonical_code(s) == row.code) row.match = true;
      else if (!(psi(s) == ta && psi_hat(s) == tb)) row.extras_consistent = false;
    }
  } catch (const Error& e) {
    row.error = e.kind();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

int cmd_roundtrip(const Config& c) {
  auto [lo, hi] = parse_p_range(c.p_range);
  if (lo < 2 || hi > 12 || lo > hi) throw Error("usage", "--p must lie in 2..12");
  Potential pot = load_potential(c);
  ScatterOptions opt = scatter_options(c);
  Sink sink(c.out);
  std::vector<RootedTree> trees;
  for (int p = lo; p <= hi; ++p)
    for (auto& t : enumerate_rooted_trees(p)) trees.push_back(std::move(t));

  int jobs = c.jobs > 0 ? c.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(trees.size()));
  std::vector<AuditRow> rows(trees.size());
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < trees.size();) rows[i] = audit_one(trees[i], pot, opt, c.margin);
    });
  for (auto& th : pool) th.join();

  bool ok = true;
  sink.os() << "code,p,recovered,match,extras_consistent,seconds,error\n";
  for (const auto& r : rows) {
    ok = ok && r.match && r.extras_consistent;
    sink.os() << r.code << ',' << r.p << ',' << r.recovered << ',' << (r.match ? "true" : "false") << ','
              << (r.extras_consistent ? "true" : "false") << ',' << csv_number(r.seconds) << ',' << r.error
              << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_check(const Config& c) {
  Sink sink(c.out);
  bool ok = true;
  for (const auto& r : run_identity_suites()) {
    ok = ok && r.pass;
    json j = {{"suite", r.name}, {"samples", r.samples}, {"max_residual", r.max_residual},
              {"tolerance", r.tolerance}, {"pass", r.pass}};
    if (!r.note.empty()) j["note"] = r.note;
    sink.os() << j.dump() << '\n';
  }
  return ok ? 0 : 1;
}

void report(const std::string& kind, const std::string& msg) {
  std::cerr << json{{"error", msg}, {"kind", kind}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-tree shapes from spectral and scattering data"};
  app.require_subcommand(1);
  Config c;

  auto tree_opt = [&](CLI::App* s) {
    s->add_option("--tree", c.tree, "tree JSON file or parenthesis code");
  };
  auto pot_opts = [&](CLI::App* s) {
    s->add_option("--potential", c.potential, "zero | const:Q | sampled:FILE");
    s->add_option("--ell", c.ell, "edge length");
  };
  auto sched_opts = [&](CLI::App* s) {
    s->add_option("--n", c.n_schedule, "increasing n schedule")->delimiter(',');
    s->add_option("--tol", c.tol, "extrapolation tolerance");
    s->add_option("--window", c.window, "upper end of the common-eigenvalue search");
  };
  auto out_opt = [&](CLI::App* s) { s->add_option("--out", c.out, "output file (default stdout)"); };

  auto* en = app.add_subcommand("enum", "rooted trees as JSON lines");
  en->add_option("--p", c.p_range, "A..B or a single p")->required();
  out_opt(en);

  auto* fw = app.add_subcommand("forward", "psi, psi_hat and branched fraction");
  tree_opt(fw);
  fw->add_option("--p", c.p_range, "all trees with p in A..B");
  out_opt(fw);

  auto* sp = app.add_subcommand("spectrum", "eigenvalues as CSV");
  tree_opt(sp);
  pot_opts(sp);
  sp->add_option("--range", c.range, "A:B in lambda");
  sp->add_option("--problem", c.problem, "D, N or both");
  out_opt(sp);

  auto* sc = app.add_subcommand("scatter", "scattering record as JSON");
  tree_opt(sc);
  pot_opts(sc);
  sched_opts(sc);
  sc->add_flag("--absorb-pendant-root", c.absorb, "merge a pendant root into the lead first");
  sc->add_option("--s-trace", c.s_trace, "also write S(k) samples as CSV");
  sc->add_option("--range", c.range, "k range A:B for --s-trace");
  out_opt(sc);

  auto* iv = app.add_subcommand("invert", "recover shapes from a record");
  iv->add_option("--record", c.record, "scattering record, {psi, psi_hat} or {num, den, p}");
  iv->add_option("--margin", c.margin, "largest accepted distance to an integer");
  out_opt(iv);

  auto* rt = app.add_subcommand("roundtrip", "simulate and invert every tree; audit CSV");
  rt->add_option("--p", c.p_range, "A..B")->required();
  pot_opts(rt);
  sched_opts(rt);
  rt->add_option("--margin", c.margin, "largest accepted distance to an integer");
  rt->add_option("--jobs", c.jobs, "worker threads (default: hardware)");
  out_opt(rt);

  auto* ck = app.add_subcommand("check", "run every identity suite");
  out_opt(ck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("usage", e.what());
    return 2;
  }

  try {
    if (*en) cmd_enum(c);
    else if (*fw) cmd_forward(c);
    else if (*sp) cmd_spectrum(c);
    else if (*sc) cmd_scatter(c);
    else if (*iv) cmd_invert(c);
    else if (*rt) return cmd_roundtrip(c);
    else if (*ck) return cmd_check(c);
  } catch (const Error& e) {
    report(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    report("internal", e.what());
    return 1;
  }
  return 0;
}
