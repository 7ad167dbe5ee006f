#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "eprod/parse.hpp"

namespace eprod::cli {

using nlohmann::json;

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "text") return Format::Text;
  throw std::invalid_argument("unknown format '" + s + "' (json, csv, text)");
}

// ------------------------------------------------------------------ config

namespace {

Rational rational_field(const json& v, const std::string& key) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) {
    std::ostringstream s;
    s << std::setprecision(17) << v.get<double>();
    return parse_rational(s.str());
  }
  throw std::invalid_argument("config key '" + key + "' must be a number or a decimal string");
}

template <typename T>
T unsigned_field(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0))
    throw std::invalid_argument("config key '" + key + "' must be a nonnegative integer");
  return v.get<T>();
}

}  // namespace

SummationConfig apply_json(SummationConfig cfg, const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "digits") cfg.digits = unsigned_field<unsigned>(v, key);
    else if (key == "max_terms") cfg.max_terms = unsigned_field<unsigned long>(v, key);
    else if (key == "tolerance") cfg.tolerance = rational_field(v, key);
    else if (key == "abel_levels") cfg.abel_levels = unsigned_field<unsigned>(v, key);
    else if (key == "extrapolation_depth") cfg.extrapolation_depth = unsigned_field<unsigned>(v, key);
    else if (key == "divergence_margin") cfg.divergence_margin = rational_field(v, key);
    else if (key == "partial_sum_cap") cfg.partial_sum_cap = rational_field(v, key);
    else if (key == "wynn_terms") cfg.wynn_terms = unsigned_field<unsigned>(v, key);
    else if (key == "abel_term_budget") cfg.abel_term_budget = unsigned_field<unsigned long>(v, key);
    else if (key == "guard_digits") cfg.guard_digits = unsigned_field<unsigned>(v, key);
    else if (key == "threads") cfg.threads = unsigned_field<unsigned>(v, key);
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return cfg;
}

SummationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file '" + path + "': " + e.what());
  }
  return apply_json(SummationConfig{}, j);
}

json to_json(const SummationConfig& cfg) {
  const Rational tol = sgn(cfg.tolerance) > 0 ? cfg.tolerance : Rational(1, mpz_class("1" + std::string(2 * cfg.digits / 5, '0')));
  return json{{"digits", cfg.digits},
              {"max_terms", cfg.max_terms},
              {"tolerance", rational_to_string(tol)},
              {"abel_levels", cfg.abel_levels},
              {"extrapolation_depth", cfg.extrapolation_depth},
              {"divergence_margin", rational_to_string(cfg.divergence_margin)},
              {"partial_sum_cap", rational_to_string(cfg.partial_sum_cap)},
              {"wynn_terms", cfg.wynn_terms},
              {"abel_term_budget", cfg.abel_term_budget},
              {"guard_digits", cfg.guard_digits}};
}

// ----------------------------------------------------------------- reports

std::string decimal(const Real& x, unsigned digits) { return x.to_string(digits); }

json to_json(const Complex& z, unsigned digits) { return json{{"re", decimal(z.re, digits)}, {"im", decimal(z.im, digits)}}; }

json to_json(const EProductResult& r, unsigned digits) {
  const Diagnostics& d = r.diagnostics;
  json diag;
  diag["certificate"] = d.certificate;
  diag["low_confidence"] = d.low_confidence;
  diag["ratio_estimate"] = d.ratio_estimate ? json(decimal(*d.ratio_estimate, 10)) : json(nullptr);
  diag["raabe_estimate"] = d.raabe_estimate ? json(decimal(*d.raabe_estimate, 10)) : json(nullptr);
  diag["wynn_estimate"] = d.wynn_estimate ? to_json(*d.wynn_estimate, digits) : json(nullptr);
  diag["domination_constant"] = d.domination_constant ? json(decimal(*d.domination_constant, 10)) : json(nullptr);
  diag["working_digits"] = d.working_digits;
  json trace = json::array();
  for (const auto& e : d.abel_trace)
    trace.push_back(json{{"r", decimal(e.r, 10)},
                         {"value", to_json(e.value, digits)},
                         {"extrapolant", to_json(e.extrapolant, digits)}});
  diag["abel_trace"] = trace;
  diag["partial_sums_count"] = d.partial_sums.size();
  json tail = json::array();
  const std::size_t from = d.partial_sums.size() > 5 ? d.partial_sums.size() - 5 : 0;
  for (std::size_t k = from; k < d.partial_sums.size(); ++k)
    tail.push_back(json{{"k", k}, {"sum", to_json(d.partial_sums[k], digits)}});
  diag["partial_sums_tail"] = tail;
  diag["notes"] = d.notes;

  json j;
  j["status"] = to_string(r.status);
  j["value"] = r.value ? to_json(*r.value, digits) : json(nullptr);
  j["exact_value"] = r.exact_value ? json(r.exact_value->to_string()) : json(nullptr);
  j["n_terms_used"] = d.terms_used;
  j["diagnostics"] = diag;
  return j;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message,
                 std::optional<std::size_t> position) {
  json e{{"kind", kind}, {"message", message}};
  if (position) e["position"] = *position;
  err << json{{"error", e}}.dump() << "\n";
}

namespace {

int exit_code(Status s) { return s == Status::Inconclusive ? kExitInconclusive : kExitOk; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out + "\n";
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Parse errors carry a position; everything else from the core is a usage error.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    write_error(err, dynamic_cast<const UnknownSymbol*>(&e) ? "unknown_symbol" : "parse", e.what(), e.position());
  } catch (const UnsupportedVariant& e) {
    write_error(err, "unsupported", e.what());
  } catch (const std::invalid_argument& e) {
    write_error(err, "usage", e.what());
  } catch (const std::exception& e) {
    write_error(err, "internal", e.what());
  }
  return kExitFailure;
}

}  // namespace

// ----------------------------------------------------------------- compute

int cmd_compute(const ComputeArgs& args, const SummationConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Distribution left = parse_distribution(args.left);
    const Distribution right = parse_distribution(args.right);
    const EProductResult r = classify_and_sum(left, right, cfg);
    const double ms = elapsed_ms(start);

    std::ostringstream report;
    if (args.format == Format::Json) {
      json j = to_json(r, cfg.digits);
      j["schema"] = kSchemaVersion;
      j["command"] = "compute";
      j["inputs"] = json{{"left", print(left)}, {"right", print(right)}};
      j["config"] = to_json(cfg);
      j["wall_time_ms"] = ms;
      report << j.dump(2) << "\n";
    } else if (args.format == Format::Csv) {
      report << csv_line({"left", "right", "status", "value_re", "value_im", "n_terms_used", "certificate"});
      report << csv_line({print(left), print(right), to_string(r.status), r.value ? decimal(r.value->re, cfg.digits) : "",
                          r.value ? decimal(r.value->im, cfg.digits) : "", std::to_string(r.diagnostics.terms_used),
                          r.diagnostics.certificate});
    } else {
      report << "<" << print(left) << ", " << print(right) << ">_e\n";
      report << "status:      " << to_string(r.status) << (r.diagnostics.low_confidence ? " (low confidence)" : "")
             << "\n";
      if (r.value) report << "value:       " << decimal(r.value->re, cfg.digits) << " + " << decimal(r.value->im, cfg.digits) << " i\n";
      if (r.exact_value) report << "exact:       " << r.exact_value->to_string() << "\n";
      report << "certificate: " << r.diagnostics.certificate << "\n";
      report << "terms used:  " << r.diagnostics.terms_used << "\n";
      if (r.diagnostics.ratio_estimate) report << "ratio:       " << decimal(*r.diagnostics.ratio_estimate, 10) << "\n";
      if (r.diagnostics.raabe_estimate) report << "raabe:       " << decimal(*r.diagnostics.raabe_estimate, 10) << "\n";
      for (const auto& e : r.diagnostics.abel_trace)
        report << "abel r=" << decimal(e.r, 8) << "  A(r)=" << decimal(e.value.re, 20)
               << "  extrapolant=" << decimal(e.extrapolant.re, 20) << "\n";
      for (const auto& n : r.diagnostics.notes) report << "note:        " << n << "\n";
    }
    if (!args.out_file.empty()) {
      std::ofstream f(args.out_file);
      if (!f) throw std::invalid_argument("cannot write '" + args.out_file + "'");
      f << report.str();
    }
    out << report.str();
    return exit_code(r.status);
  });
}

// ------------------------------------------------------------------ coeffs

int cmd_coeffs(const CoeffsArgs& args, const SummationConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const Distribution d = parse_distribution(args.distribution);
    if (args.exact && !has_exact_coefficients(d))
      throw std::invalid_argument("no exact coefficients for " + print(d));
    const CoeffSequence s = coeff_sequence(d, cfg.bits());
    json rows = json::array();
    std::ostringstream text;
    if (args.format == Format::Csv) text << csv_line({"n", "re", "im", "exact"});
    for (unsigned long n = 0; n <= args.n_max; ++n) {
      const Complex c = s.at(n);
      const std::string exact = args.exact ? coeff_exact(d, n)->to_string() : "";
      if (args.format == Format::Json) {
        json row{{"n", n}, {"value", to_json(c, cfg.digits)}};
        if (args.exact) row["exact"] = exact;
        rows.push_back(row);
      } else if (args.format == Format::Csv) {
        text << csv_line({std::to_string(n), decimal(c.re, cfg.digits), decimal(c.im, cfg.digits), exact});
      } else {
        text << std::setw(4) << n << "  " << decimal(c.re, cfg.digits) << " + " << decimal(c.im, cfg.digits) << " i"
             << (args.exact ? "  = " + exact : "") << "\n";
      }
    }
    if (args.format == Format::Json) {
      out << json{{"schema", kSchemaVersion},
                  {"command", "coeffs"},
                  {"input", print(d)},
                  {"parity", to_string(parity(d))},
                  {"config", to_json(cfg)},
                  {"coefficients", rows}}
                 .dump(2)
          << "\n";
    } else {
      out << text.str();
    }
    return kExitOk;
  });
}

// --------------------------------------------------------------- reproduce

int cmd_reproduce(const std::string& id, Format format, const SummationConfig& cfg, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const std::vector<Row> rows = reproduce_rows(id, cfg);
    bool all = true;
    for (const auto& r : rows) all = all && r.pass;
    if (format == Format::Json) {
      json j = json::array();
      for (const auto& r : rows)
        j.push_back(json{{"identity", r.identity},
                         {"expected", r.expected},
                         {"got", r.got},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass}});
      out << json{{"schema", kSchemaVersion}, {"command", "reproduce"}, {"id", id}, {"config", to_json(cfg)}, {"rows", j}, {"pass", all}}
                 .dump(2)
          << "\n";
    } else if (format == Format::Csv) {
      out << csv_line({"identity", "expected", "got", "tolerance", "pass"});
      for (const auto& r : rows) out << csv_line({r.identity, r.expected, r.got, r.tolerance, r.pass ? "true" : "false"});
    } else {
      for (const auto& r : rows)
        out << (r.pass ? "PASS  " : "FAIL  ") << r.identity << "\n      expected " << r.expected << ", got " << r.got
            << " (tolerance " << r.tolerance << ")\n";
    }
    return all ? kExitOk : kExitFailure;
  });
}

// ------------------------------------------------------------------- sweep

std::pair<unsigned long, unsigned long> parse_range(const std::string& s) {
  auto number = [&](const std::string& t) {
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed range '" + s + "'");
    return std::stoul(t);
  };
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    const unsigned long v = number(s);
    return {v, v};
  }
  const unsigned long a = number(s.substr(0, colon));
  const unsigned long b = number(s.substr(colon + 1));
  if (b < a) throw std::invalid_argument("empty range '" + s + "'");
  return {a, b};
}

std::string family_member(const std::string& family, unsigned long n) {
  const std::string k = std::to_string(n);
  if (family == "phi") return "phi(" + k + ")";
  if (family == "psi") return "psi(" + k + ")";
  if (family == "e") return "e(" + k + ")";
  if (family == "delta") return "delta^(" + k + ")";
  if (family == "x") return "x^" + k;
  throw std::invalid_argument("unknown family '" + family + "' (phi, psi, e, delta, x)");
}

int cmd_sweep(const SweepArgs& args, const SummationConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const unsigned long rows = args.n_last - args.n_first + 1;
    const unsigned long cols = args.m_last - args.m_first + 1;
    if (rows > args.cap || cols > args.cap)
      throw std::invalid_argument("sweep range exceeds the cap of " + std::to_string(args.cap) + " per axis");

    struct Cell {
      unsigned long n, m;
      std::string left, right;
      std::optional<EProductResult> result;
      std::string error;
    };
    std::vector<Cell> cells;
    for (unsigned long n = args.n_first; n <= args.n_last; ++n)
      for (unsigned long m = args.m_first; m <= args.m_last; ++m)
        cells.push_back(Cell{n, m, family_member(args.left_family, n), family_member(args.right_family, m), {}, {}});

    // Cells run concurrently; output keeps row-major order.
    SummationConfig inner = cfg;
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.worker_count(), static_cast<unsigned>(cells.size())));
    if (workers > 1) inner.threads = 1;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
        try {
          cells[i].result = classify_and_sum(parse_distribution(cells[i].left), parse_distribution(cells[i].right), inner);
        } catch (const std::exception& e) {
          cells[i].error = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool inconclusive = false;
    for (const auto& c : cells) {
      if (!c.error.empty()) throw std::runtime_error(c.left + " x " + c.right + ": " + c.error);
      inconclusive = inconclusive || c.result->status == Status::Inconclusive;
    }

    if (args.format == Format::Json) {
      json j = json::array();
      for (const auto& c : cells)
        j.push_back(json{{"n", c.n},
                         {"m", c.m},
                         {"left", c.left},
                         {"right", c.right},
                         {"status", to_string(c.result->status)},
                         {"value", c.result->value ? to_json(*c.result->value, cfg.digits) : json(nullptr)},
                         {"certificate", c.result->diagnostics.certificate}});
      out << json{{"schema", kSchemaVersion},
                  {"command", "sweep"},
                  {"left_family", args.left_family},
                  {"right_family", args.right_family},
                  {"config", to_json(cfg)},
                  {"cells", j}}
                 .dump(2)
          << "\n";
    } else if (args.format == Format::Csv) {
      out << csv_line({"n", "m", "left", "right", "status", "value_re", "value_im"});
      for (const auto& c : cells)
        out << csv_line({std::to_string(c.n), std::to_string(c.m), c.left, c.right, to_string(c.result->status),
                         c.result->value ? decimal(c.result->value->re, cfg.digits) : "",
                         c.result->value ? decimal(c.result->value->im, cfg.digits) : ""});
    } else {
      for (const auto& c : cells) {
        out << "<" << c.left << ", " << c.right << ">_e  " << to_string(c.result->status);
        if (c.result->value) out << "  " << decimal(c.result->value->re, 20);
        out << "\n";
      }
    }
    return inconclusive ? kExitInconclusive : kExitOk;
  });
}

// --------------------------------------------------------------------- run

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"e-products of tempered distributions in the Hermite basis", "eprod"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "eprod 0.1.0");

  struct Common {
    std::string config;
    std::optional<unsigned> digits;
    std::optional<unsigned long> terms;
    std::string tol;
    std::optional<unsigned> abel_levels;
    std::optional<unsigned> threads;
    std::string format = "json";
  };
  Common common;
  auto add_common = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--config", common.config, "JSON config file (default: $" + std::string(kConfigEnv) + ")");
    sub->add_option("--digits", common.digits, "significant decimal digits D");
    sub->add_option("--terms", common.terms, "terms inspected before regularization");
    sub->add_option("--tol", common.tol, "relative tolerance, e.g. 1e-24");
    sub->add_option("--abel-levels", common.abel_levels, "largest Abel level K (r_k = 1 - 2^-k, k = 4..K)");
    sub->add_option("--threads", common.threads, "worker threads (0: hardware)");
    if (with_format) sub->add_option("--format", common.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  };

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "classify and sum <L, R>_e");
  c->add_option("left", compute.left, "left distribution")->required();
  c->add_option("right", compute.right, "right distribution")->required();
  c->add_option("--out", compute.out_file, "also write the report to FILE");
  add_common(c, true);

  CoeffsArgs coeffs;
  auto* k = app.add_subcommand("coeffs", "Hermite coefficients <e_n, F>");
  k->add_option("distribution", coeffs.distribution, "distribution")->required();
  k->add_option("--n-max", coeffs.n_max, "largest index");
  k->add_flag("--exact", coeffs.exact, "also print exact closed forms");
  add_common(k, true);

  std::string reproduce_id;
  auto* r = app.add_subcommand("reproduce", "rerun the worked examples");
  r->add_option("id", reproduce_id, "ex1, ex2, ex3, ex4, ex5 or adjoint")
      ->required()
      ->check(CLI::IsMember({"ex1", "ex2", "ex3", "ex4", "ex5", "adjoint"}));
  add_common(r, true);
  common.format = "json";

  SweepArgs sweep;
  std::string n_range = "0:3";
  std::string m_range = "0:3";
  auto* s = app.add_subcommand("sweep", "grid of e-products between two families");
  s->add_option("left_family", sweep.left_family, "phi, psi, e, delta or x")->required();
  s->add_option("right_family", sweep.right_family, "phi, psi, e, delta or x")->required();
  s->add_option("--n-range", n_range, "left indices a:b");
  s->add_option("--m-range", m_range, "right indices a:b");
  s->add_option("--cap", sweep.cap, "largest number of indices per axis");
  add_common(s, true);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "eprod 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return kExitFailure;
  }

  SummationConfig cfg;
  Format format = Format::Json;
  const int setup = guarded(err, [&] {
    std::string path = common.config;
    if (path.empty())
      if (const char* env = std::getenv(kConfigEnv); env && *env) path = env;
    if (!path.empty()) cfg = load_config(path);
    if (common.digits) cfg.digits = *common.digits;
    if (common.terms) cfg.max_terms = *common.terms;
    if (!common.tol.empty()) cfg.tolerance = parse_rational(common.tol);
    if (common.abel_levels) cfg.abel_levels = *common.abel_levels;
    if (common.threads) cfg.threads = *common.threads;
    format = parse_format(common.format);
    cfg.validate();
    return kExitOk;
  });
  if (setup != kExitOk) return setup;

  if (c->parsed()) {
    compute.format = format;
    return cmd_compute(compute, cfg, out, err);
  }
  if (k->parsed()) {
    coeffs.format = format;
    return cmd_coeffs(coeffs, cfg, out, err);
  }
  if (r->parsed()) return cmd_reproduce(reproduce_id, format, cfg, out, err);
  return guarded(err, [&] {
    std::tie(sweep.n_first, sweep.n_last) = parse_range(n_range);
    std::tie(sweep.m_first, sweep.m_last) = parse_range(m_range);
    sweep.format = format;
    return cmd_sweep(sweep, cfg, out, err);
  });
}

}  // namespace eprod::cli
