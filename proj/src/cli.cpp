#include "erae/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "erae/config.hpp"
#include "erae/error.hpp"
#include "erae/pure_entropy.hpp"
#include "erae/roof_oracle.hpp"
#include "erae/symmetric.hpp"
#include "erae/two_qubit.hpp"

namespace erae::cli {

using json = nlohmann::json;

namespace {

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError("series field " + key + " is not a number: " + text);
  return v;
}

std::size_t parse_dim(const std::string& text) {
  const double v = parse_number("d", text);
  if (v < 1.0 || v != std::floor(v)) throw UsageError("series field d must be a positive integer");
  return static_cast<std::size_t>(v);
}

Alpha alpha_from(double a) { return Alpha::of(a); }

double series_value(const SeriesSpec& s, double param, Alpha alpha) {
  switch (s.kind) {
    case SeriesKind::Pure:
      return omega(param, alpha);
    case SeriesKind::Werner:
      return erae_werner(make_werner_spec(s.d, param), alpha);
    case SeriesKind::Isotropic:
      return erae_isotropic(make_isotropic_spec(s.d, param), alpha);
  }
  return 0.0;
}

const char* family_name(SeriesKind k) {
  switch (k) {
    case SeriesKind::Pure: return "pure";
    case SeriesKind::Werner: return "werner";
    case SeriesKind::Isotropic: return "isotropic";
  }
  return "";
}

struct Common {
  std::string log_base;
  std::string format = "json";
};

LogBase resolve_log_base(const std::string& flag) {
  std::string text = flag;
  if (text.empty()) {
    const char* env = std::getenv("ERAE_LOG_BASE");
    text = env != nullptr ? env : "2";
  }
  const auto base = parse_log_base(text);
  if (!base) throw UsageError("log base must be 2 or e, got '" + text + "'");
  return *base;
}

const char* base_name(LogBase b) { return b == LogBase::Two ? "2" : "e"; }

// Series labels may contain commas.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string family;
  double alpha = 0.0;
  std::size_t d = 2;
  std::optional<double> F;
  std::optional<double> concurrence;
  std::vector<double> schmidt;
  std::string matrix_file;
};

void cmd_eval(const EvalArgs& a, LogBase base, std::ostream& out) {
  const Alpha alpha = alpha_from(a.alpha);
  json doc{{"command", "eval"}, {"family", a.family}, {"alpha", a.alpha}, {"log_base", base_name(base)}};
  double bits = 0.0;
  if (a.family == "pure") {
    if (a.concurrence.has_value() == !a.schmidt.empty())
      throw UsageError("pure needs exactly one of --concurrence or --schmidt");
    if (a.concurrence) {
      bits = omega(*a.concurrence, alpha);
      doc["concurrence"] = *a.concurrence;
    } else {
      bits = renyi_pure(SchmidtSpectrum(a.schmidt), alpha);
      doc["schmidt"] = a.schmidt;
    }
  } else if (a.family == "two-qubit") {
    if (a.matrix_file.empty()) throw UsageError("two-qubit needs --matrix-file");
    const TwoQubitState state(load_matrix_file(a.matrix_file));
    const ConcurrenceResult c = concurrence_mixed(state);
    doc["concurrence"] = c.concurrence;
    bits = erae_closed_form(state, alpha);
  } else if (a.family == "werner" || a.family == "isotropic") {
    if (!a.F) throw UsageError(a.family + " needs --F");
    doc["d"] = a.d;
    doc["F"] = *a.F;
    bits = a.family == "werner" ? erae_werner(make_werner_spec(a.d, *a.F), alpha)
                                : erae_isotropic(make_isotropic_spec(a.d, *a.F), alpha);
  } else {
    throw UsageError("unknown family " + a.family);
  }
  doc["value"] = rescale_bits(bits, base);
  emit(out, doc);
}

// ---- curve -----------------------------------------------------------------

struct CurveArgs {
  std::vector<std::string> series;
  std::vector<double> concurrences;
  std::string axis = "alpha";
  double alpha_min = 0.01;
  double alpha_max = 1.0;
  std::size_t points = 200;
  std::optional<double> x_min;
  std::optional<double> x_max;
  bool find_crossing = false;
};

void cmd_curve(const CurveArgs& a, LogBase base, const std::string& format, std::ostream& out, std::ostream& err) {
  std::vector<SeriesSpec> specs;
  for (const std::string& s : a.series) specs.push_back(parse_series(s));
  for (double c : a.concurrences) {
    std::ostringstream label;
    label << "pure:C=" << c;
    specs.push_back(parse_series(label.str()));
  }
  if (specs.empty() || specs.size() > 4) throw UsageError("curve takes 1 to 4 series");
  if (a.points < 2) throw UsageError("--points must be at least 2");
  if (a.find_crossing && specs.size() != 2) throw UsageError("--find-crossing needs exactly two series");

  CurveTable table;
  table.axis = a.axis;
  std::function<double(const SeriesSpec&, double)> value;
  if (a.axis == "alpha") {
    for (const auto& s : specs)
      if (s.alpha) throw UsageError("series on the alpha axis must not fix alpha: " + s.label);
    if (!(a.alpha_min > 0.0 && a.alpha_max > a.alpha_min))
      throw UsageError("alpha range needs 0 < alpha-min < alpha-max");
    table.xs = log_grid(a.alpha_min, a.alpha_max, a.points);
    value = [](const SeriesSpec& s, double x) { return series_value(s, s.param, alpha_from(x)); };
  } else if (a.axis == "F") {
    for (const auto& s : specs)
      if (!s.alpha) throw UsageError("series on the F axis need alpha=...: " + s.label);
    const double lo = a.x_min.value_or(0.0);
    const double hi = a.x_max.value_or(1.0);
    if (!(hi > lo)) throw UsageError("F range needs x-min < x-max");
    for (std::size_t i = 0; i < a.points; ++i)
      table.xs.push_back(i + 1 == a.points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(a.points - 1));
    value = [](const SeriesSpec& s, double x) { return series_value(s, x, alpha_from(*s.alpha)); };
  } else {
    throw UsageError("--axis must be alpha or F");
  }

  for (const auto& s : specs) {
    table.labels.push_back(s.label);
    std::vector<double> col;
    col.reserve(table.xs.size());
    for (double x : table.xs) {
      const double v = value(s, x);
      if (!std::isfinite(v)) throw Error(ErrorCode::NumericalFailure, "non-finite curve value for " + s.label);
      col.push_back(rescale_bits(v, base));
    }
    table.columns.push_back(std::move(col));
  }

  std::vector<double> crossings;
  if (a.find_crossing) {
    const SeriesSpec s0 = specs[0];
    const SeriesSpec s1 = specs[1];
    crossings = find_crossings([&](double x) { return value(s0, x) - value(s1, x); }, table.xs);
  }

  if (format == "csv") {
    out << std::setprecision(17) << table.axis;
    for (const auto& l : table.labels) out << ',' << csv_field(l);
    out << '\n';
    for (std::size_t i = 0; i < table.xs.size(); ++i) {
      out << table.xs[i];
      for (const auto& col : table.columns) out << ',' << col[i];
      out << '\n';
    }
    if (a.find_crossing) {
      err << "crossings:";
      for (double c : crossings) err << ' ' << std::setprecision(12) << c;
      err << '\n';
    }
    return;
  }
  json doc{{"command", "curve"}, {"axis", table.axis}, {"log_base", base_name(base)}, {"series", table.labels}};
  json rows = json::array();
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    json row = json::array({table.xs[i]});
    for (const auto& col : table.columns) row.push_back(col[i]);
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  if (a.find_crossing) doc["crossings"] = crossings;
  emit(out, doc);
}

// ---- oracle ----------------------------------------------------------------

struct OracleArgs {
  std::string family;
  std::size_t d = 2;
  std::optional<double> F;
  std::string matrix_file;
  double alpha = 1.0;
  OracleConfig cfg;
  bool emit_ensemble = false;
};

void cmd_oracle(const OracleArgs& a, LogBase base, std::ostream& out) {
  if (a.family.empty() == a.matrix_file.empty())
    throw UsageError("oracle needs exactly one of --family or --matrix-file");
  const Alpha alpha = alpha_from(a.alpha);
  json doc{{"command", "oracle"}, {"alpha", a.alpha}, {"log_base", base_name(base)}};
  std::optional<DensityMatrix> rho;
  if (!a.matrix_file.empty()) {
    rho.emplace(load_matrix_file(a.matrix_file));
    doc["source"] = a.matrix_file;
  } else {
    if (!a.F) throw UsageError("--family needs --F");
    if (a.family == "werner") {
      rho.emplace(werner_density(make_werner_spec(a.d, *a.F)));
    } else if (a.family == "isotropic") {
      rho.emplace(isotropic_density(make_isotropic_spec(a.d, *a.F)));
    } else {
      throw UsageError("oracle family must be werner or isotropic");
    }
    doc["family"] = a.family;
    doc["d"] = a.d;
    doc["F"] = *a.F;
  }
  const OracleResult r = minimize_roof(*rho, alpha, a.cfg);
  doc["value"] = rescale_bits(r.value, base);
  doc["spread"] = rescale_bits(r.spread, base);
  doc["converged"] = r.converged;
  doc["restarts"] = a.cfg.restarts;
  doc["seed"] = a.cfg.seed;
  doc["members"] = r.best.weights.size();
  if (a.emit_ensemble) {
    json members = json::array();
    for (std::size_t k = 0; k < r.best.weights.size(); ++k) {
      json re = json::array();
      json im = json::array();
      for (const cplx& z : r.best.states[k]) {
        re.push_back(z.real());
        im.push_back(z.imag());
      }
      members.push_back({{"weight", r.best.weights[k]}, {"re", std::move(re)}, {"im", std::move(im)}});
    }
    doc["ensemble"] = std::move(members);
  }
  emit(out, doc);
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const std::vector<std::string>& wanted, std::ostream& out, std::ostream& err) {
  const std::vector<std::string>& known = suite_names();
  std::vector<std::string> selected = wanted.empty() ? known : wanted;
  for (const auto& s : selected)
    if (std::find(known.begin(), known.end(), s) == known.end()) throw UsageError("unknown suite " + s);
  json suites = json::array();
  bool all = true;
  for (const auto& name : selected) {
    const SuiteReport rep = run_suite(name);
    all = all && rep.passed;
    for (const auto& f : rep.failures) err << "FAIL " << name << ": " << f << '\n';
    suites.push_back({{"name", rep.name}, {"passed", rep.passed}, {"failures", rep.failures}, {"notes", rep.notes}});
  }
  emit(out, json{{"command", "verify"}, {"passed", all}, {"suites", std::move(suites)}});
  return all ? kOk : kVerifyFailed;
}

void emit_error(std::ostream& out, const std::string& code, const std::string& message) {
  emit(out, json{{"error", {{"code", code}, {"message", message}}}});
}

}  // namespace

SeriesSpec parse_series(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("series needs kind:fields, got '" + text + "'");
  SeriesSpec s;
  s.label = text;
  const std::string kind = text.substr(0, colon);
  if (kind == "pure") {
    s.kind = SeriesKind::Pure;
  } else if (kind == "werner") {
    s.kind = SeriesKind::Werner;
  } else if (kind == "iso" || kind == "isotropic") {
    s.kind = SeriesKind::Isotropic;
  } else {
    throw UsageError("unknown series kind '" + kind + "'");
  }
  bool have_param = false;
  std::stringstream fields(text.substr(colon + 1));
  std::string field;
  while (std::getline(fields, field, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw UsageError("series field needs key=value: '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "d") {
      s.d = parse_dim(val);
    } else if (key == "alpha") {
      s.alpha = parse_number(key, val);
    } else if ((key == "C" && s.kind == SeriesKind::Pure) || (key == "F" && s.kind != SeriesKind::Pure)) {
      s.param = parse_number(key, val);
      have_param = true;
    } else {
      throw UsageError("unexpected series field '" + key + "' for " + family_name(s.kind));
    }
  }
  if (!have_param && !s.alpha) throw UsageError("series '" + text + "' fixes neither its parameter nor alpha");
  if (have_param && s.alpha) throw UsageError("series '" + text + "' fixes both its parameter and alpha");
  if (s.kind == SeriesKind::Pure && s.d != 2) throw UsageError("pure series are two-qubit (d=2)");
  return s;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw UsageError("log grid needs 0 < lo < hi and >= 2 points");
  std::vector<double> xs(points);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < points; ++i)
    xs[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(points - 1));
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

std::vector<double> find_crossings(const std::function<double(double)>& diff, const std::vector<double>& grid,
                                   double tol) {
  const auto sign = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
  std::vector<double> out;
  std::size_t last = grid.size();  // index of the last nonzero sample
  int last_sign = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int s = sign(diff(grid[i]));
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      if (i == last + 1) {
        double lo = grid[last];
        double hi = grid[i];
        while (hi - lo > tol) {
          const double mid = 0.5 * (lo + hi);
          if (sign(diff(mid)) == last_sign) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        out.push_back(0.5 * (lo + hi));
      } else {
        // Exact zeros in between: report the middle of the zero run.
        out.push_back(0.5 * (grid[last + 1] + grid[i - 1]));
      }
    }
    last = i;
    last_sign = s;
  }
  return out;
}

DensityMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FileError(path + ": " + e.what());
  }
  try {
    const std::size_t da = doc.at("dimA").get<std::size_t>();
    const std::size_t db = doc.at("dimB").get<std::size_t>();
    if (da == 0 || db == 0) throw FileError(path + ": dimA and dimB must be positive");
    if (da > kMaxLocalDim || db > kMaxLocalDim)
      throw Error(ErrorCode::DimensionTooLarge, "local dimension above 16");
    const std::size_t n = da * db;
    const auto re = doc.at("re").get<std::vector<std::vector<double>>>();
    std::vector<std::vector<double>> im;
    if (doc.contains("im")) {
      im = doc.at("im").get<std::vector<std::vector<double>>>();
    } else {
      im.assign(n, std::vector<double>(n, 0.0));
    }
    const auto square = [n](const std::vector<std::vector<double>>& m) {
      return m.size() == n && std::all_of(m.begin(), m.end(), [n](const auto& row) { return row.size() == n; });
    };
    if (!square(re) || !square(im)) throw FileError(path + ": re/im must be (dimA*dimB) x (dimA*dimB)");
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(re[i][j], im[i][j]);
    return DensityMatrix(std::move(m), da, db);
  } catch (const json::exception& e) {
    throw FileError(path + ": " + e.what());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement Renyi alpha-entropy: closed forms, hulls and a convex-roof minimizer", "erae"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--log-base", common.log_base, "Entropy unit: 2 (bits) or e (nats); env ERAE_LOG_BASE");
  app.add_option("--format", common.format, "json or csv (curve only)")->check(CLI::IsMember({"json", "csv"}));

  EvalArgs ev;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate one state");
  eval->add_option("--family", ev.family, "pure | two-qubit | werner | isotropic")
      ->required()
      ->check(CLI::IsMember({"pure", "two-qubit", "werner", "isotropic"}));
  eval->add_option("--alpha", ev.alpha, "Renyi order (0 and 1 select the limits)")->required();
  eval->add_option("--d", ev.d, "Local dimension");
  eval->add_option("--F", ev.F, "Family parameter");
  eval->add_option("--concurrence", ev.concurrence, "Two-qubit pure state by concurrence");
  eval->add_option("--schmidt", ev.schmidt, "Pure state by Schmidt coefficients")->delimiter(',');
  eval->add_option("--matrix-file", ev.matrix_file, "JSON density matrix");

  CurveArgs cv;
  CLI::App* curve = app.add_subcommand("curve", "Tabulate series over alpha or F");
  curve->add_option("--series", cv.series, "kind:key=value,... (repeatable)");
  curve->add_option("--concurrence", cv.concurrences, "Add a two-qubit pure series with this concurrence");
  curve->add_option("--axis", cv.axis, "alpha or F")->check(CLI::IsMember({"alpha", "F"}));
  curve->add_option("--alpha-min", cv.alpha_min, "Smallest alpha (log grid)");
  curve->add_option("--alpha-max", cv.alpha_max, "Largest alpha");
  curve->add_option("--points", cv.points, "Grid points");
  curve->add_option("--x-min", cv.x_min, "F axis start");
  curve->add_option("--x-max", cv.x_max, "F axis end");
  curve->add_flag("--find-crossing", cv.find_crossing, "Report where the two series cross");

  OracleArgs oa;
  CLI::App* oracle = app.add_subcommand("oracle", "Numerical convex-roof minimization");
  oracle->add_option("--family", oa.family, "werner | isotropic");
  oracle->add_option("--d", oa.d, "Local dimension");
  oracle->add_option("--F", oa.F, "Family parameter");
  oracle->add_option("--matrix-file", oa.matrix_file, "JSON density matrix");
  oracle->add_option("--alpha", oa.alpha, "Renyi order")->required();
  oracle->add_option("--restarts", oa.cfg.restarts, "Independent random starts");
  oracle->add_option("--seed", oa.cfg.seed, "Seed");
  oracle->add_option("--ensemble-size", oa.cfg.ensemble_size, "Members (0 = rank^2)");
  oracle->add_option("--max-iters", oa.cfg.max_iters, "Sweep budget per stage");
  oracle->add_option("--conv-tol", oa.cfg.conv_tol, "Relative stopping tolerance");
  oracle->add_flag("--emit-ensemble", oa.emit_ensemble, "Include the best ensemble");

  std::vector<std::string> suites;
  CLI::App* verify = app.add_subcommand("verify", "Run property suites");
  verify->add_option("--suite", suites, "Suite name (repeatable; default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const LogBase base = resolve_log_base(common.log_base);
    if (common.format == "csv" && !curve->parsed()) throw UsageError("--format csv applies to curve only");
    if (eval->parsed()) cmd_eval(ev, base, out);
    if (curve->parsed()) cmd_curve(cv, base, common.format, out, err);
    if (oracle->parsed()) cmd_oracle(oa, base, out);
    if (verify->parsed()) return cmd_verify(suites, out, err);
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const FileError& e) {
    err << "file error: " << e.what() << '\n';
    emit_error(out, "FileParse", e.what());
    return kFileParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    emit_error(out, std::string(to_string(e.code())), e.what());
    return kDomain;
  }
}

}  // namespace erae::cli
