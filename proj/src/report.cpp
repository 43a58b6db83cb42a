#include "fbms/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unistd.h>

#include "fbms/spectra.hpp"

namespace fbms {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kProblems{"robin",  "dirichlet", "steklov-laplacian",
                                         "steklov-jacobi", "radial-l0", "radial-l1"};

int parse_int(const std::string& text, const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string("invalid ") + what + ": '" + text + "'");
  }
  if (used != text.size()) throw ConfigError(std::string("invalid ") + what + ": '" + text + "'");
  return value;
}

std::string fmt(double x, int digits = 12) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::vector<int> mode_list(const RunConfig& c) {
  std::vector<int> modes(static_cast<std::size_t>(c.mode_hi - c.mode_lo + 1));
  std::iota(modes.begin(), modes.end(), c.mode_lo);
  return modes;
}

SpectralOptions options_of(const RunConfig& c) {
  SpectralOptions o;
  o.grids = c.grids;
  o.threads = c.threads;
  return o;
}

ResultRow row_from_series(const std::string& problem, const ModeSeries& s) {
  ResultRow row;
  row.problem = problem;
  row.mode = s.mode;
  row.eigenvalues = s.per_grid.back().eigenvalues;
  row.multiplicity.assign(row.eigenvalues.size(), s.multiplicity);
  row.extrapolated = s.extrapolated;
  row.order = s.order;
  return row;
}

// Groups equal values (within 1e-9 relative) of a combined spectrum into
// multiplets with their mode labels.
std::string describe_combined(const SpectrumResult& combined, std::size_t limit) {
  std::ostringstream os;
  std::size_t shown = 0;
  for (std::size_t i = 0; i < combined.eigenvalues.size() && shown < limit; ++shown) {
    const double v = combined.eigenvalues[i];
    std::size_t j = i;
    std::vector<int> labels;
    while (j < combined.eigenvalues.size() &&
           std::abs(combined.eigenvalues[j] - v) <= 1e-9 * (1.0 + std::abs(v))) {
      labels.push_back(combined.modes[j]);
      ++j;
    }
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    os << "  " << fmt(v) << "  x" << (j - i) << "  mode";
    for (int m : labels) os << ' ' << m;
    os << '\n';
    i = j;
  }
  return os.str();
}

void spectrum_command(const SurfaceModel& surface, const RunConfig& c, RunReport& out) {
  std::ostringstream os;
  if (c.problem == "robin" || c.problem == "dirichlet") {
    const auto modes = mode_list(c);
    const AggregateSpectrum spec = c.problem == "robin"
                                       ? robin_spectrum(surface, modes, options_of(c))
                                       : dirichlet_spectrum(surface, modes, options_of(c));
    const IndexReport idx = classify_against(spec, c.threshold, c.guard);
    for (const auto& s : spec.modes) {
      ResultRow row = row_from_series(c.problem, s);
      row.certified = idx.count_certified;
      out.results.push_back(std::move(row));
    }
    os << c.problem << " spectrum (" << to_string(c.surface) << ", extrapolated)\n";
    os << describe_combined(spec.combined, 24);
    os << "below " << fmt(c.threshold) << ": " << idx.index << ", within guard: " << idx.nullity
       << (idx.count_certified ? " (certified)" : " (NOT certified)") << '\n';
    if (!idx.count_certified) out.exit_code = 3;
  } else if (c.problem == "radial-l0" || c.problem == "radial-l1") {
    const RadialOperator op = c.problem == "radial-l0" ? RadialOperator::L0 : RadialOperator::L1;
    const AggregateSpectrum spec = radial_robin_spectrum(surface, op, options_of(c));
    const IndexReport idx = classify_against(spec, c.threshold, c.guard);
    ResultRow row = row_from_series(c.problem, spec.modes.front());
    row.certified = idx.count_certified;
    out.results.push_back(std::move(row));
    os << c.problem << " spectrum (extrapolated)\n" << describe_combined(spec.combined, 12);
    os << "below " << fmt(c.threshold) << ": " << idx.index
       << (idx.count_certified ? " (certified)" : " (NOT certified)") << '\n';
    if (!idx.count_certified) out.exit_code = 3;
  } else {
    const SteklovOperator op =
        c.problem == "steklov-jacobi" ? SteklovOperator::jacobi : SteklovOperator::laplacian;
    const SteklovSpectrum spec = steklov_spectrum(surface, op, mode_list(c), c.grids.back());
    for (const auto& m : spec.modes) {
      ResultRow row;
      row.problem = c.problem;
      row.mode = m.mode;
      row.eigenvalues = m.sigma;
      row.multiplicity.assign(m.sigma.size(), m.multiplicity);
      row.extrapolated = m.sigma;
      row.order.assign(m.sigma.size(), kNaN);
      out.results.push_back(std::move(row));
    }
    os << c.problem << " spectrum (" << to_string(c.surface) << ", n=" << c.grids.back() << ")\n";
    os << describe_combined(spec.combined, 24);
    if (op == SteklovOperator::jacobi) {
      os << "min Q(u)/int_bdry u^2 = " << fmt(spec.min_boundary_quotient) << '\n';
    }
  }
  out.summary = os.str();
}

void index_command(const SurfaceModel& surface, const RunConfig& c, RunReport& out) {
  const IndexReport idx = morse_index(surface, c.mmax, options_of(c), c.guard, c.threshold);
  for (const auto& s : idx.spectrum.modes) {
    ResultRow row = row_from_series("robin", s);
    row.certified = idx.certified;
    out.results.push_back(std::move(row));
  }
  std::ostringstream os;
  os << "surface " << to_string(c.surface) << ", modes 0.." << c.mmax << ", threshold "
     << fmt(c.threshold) << '\n';
  os << "index " << idx.index << ", nullity " << idx.nullity << '\n';
  os << "count " << (idx.count_certified ? "certified" : "NOT certified") << ", tail "
     << (idx.tail_certified ? "certified" : "NOT certified") << '\n';
  out.summary = os.str();
  if (!idx.certified) out.exit_code = 3;
}

void nonlocal_command(const SurfaceModel& surface, const RunConfig& c, RunReport& out) {
  const NonlocalSpectrum spec = nonlocal_spectrum(surface, c.mmax, c.grids.back(), c.threads);
  // Tail: per-mode minima of the last three modes positive and increasing.
  bool tail = c.mmax >= 2;
  if (tail) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int m = c.mmax - 2; m <= c.mmax; ++m) {
      const double low = spec.mode(m).spectrum.eigenvalues.front();
      if (!(low > c.guard) || !(low > prev)) tail = false;
      prev = low;
    }
  }
  for (const auto& m : spec.modes) {
    ResultRow row;
    row.problem = "nonlocal";
    row.mode = m.mode;
    row.eigenvalues = m.spectrum.eigenvalues;
    row.multiplicity.assign(row.eigenvalues.size(), m.multiplicity);
    row.extrapolated = row.eigenvalues;
    row.order.assign(row.eigenvalues.size(), kNaN);
    row.certified = tail;
    out.results.push_back(std::move(row));
  }
  std::ostringstream os;
  os << "non-local spectrum (" << to_string(c.surface) << ", modes 0.." << c.mmax
     << ", n=" << c.grids.back() << ")\n";
  os << describe_combined(spec.combined, 12);
  os << "tail " << (tail ? "certified" : "NOT certified") << '\n';
  out.summary = os.str();
  if (!tail) out.exit_code = 3;
}

struct Tolerance {
  double value;
  bool relative;
};

Tolerance tolerance_for(const std::string& name) {
  if (name.rfind("ipp", 0) == 0) return {1e-4, true};
  if (name.rfind("coordinate[", 0) == 0) return {1e-5, true};
  if (name.rfind("int xi", 0) == 0) return {1e-8, false};
  if (name.rfind("fsn", 0) == 0) return {1e-6, true};
  return {1e-6, false};
}

void verify_command(const SurfaceModel& surface, const RunConfig& c, RunReport& out) {
  const int n = c.grids.back();
  const std::array<std::pair<const char*, Vec3>, 3> vectors{
      {{"e_x", kUnitX}, {"e_y", kUnitY}, {"e_z", kUnitZ}}};
  auto& ids = out.identities;
  for (const auto& [label, v] : vectors) {
    IdentityReport r = check_fsn(surface, v, n);
    r.name += std::string("[") + label + "]";
    ids.push_back(std::move(r));
  }
  const auto interior = interior_samples(surface, 50);
  const auto boundary = boundary_samples(surface, 50);
  for (auto& r : check_pointwise_identities(surface, interior, boundary, kUnitX)) ids.push_back(std::move(r));
  for (const auto& [label, v] : vectors) {
    IdentityReport r = check_xi_orthogonality(surface, v, n);
    r.name += std::string("[") + label + "]";
    ids.push_back(std::move(r));
  }
  if (surface.is_catenoid()) {
    const auto corpus = test_function_corpus(c.seed);
    for (const auto& w : corpus) {
      for (const auto& [label, v] : vectors) {
        ids.push_back(check_ipp(surface, v, w.field(), n, std::string(label) + "; " + w.label));
      }
    }
    ids.push_back(check_q1xi(surface, n));
    ids.push_back(check_xi_conormal(surface, boundary));
    for (auto& r : check_coordinate_fields(surface, c.mmax, n)) ids.push_back(std::move(r));
  }
  std::ostringstream os;
  int failures = 0;
  for (const auto& r : ids) {
    const Tolerance tol = tolerance_for(r.name);
    const double res = tol.relative ? r.rel_residual : r.abs_residual;
    const bool ok = res <= tol.value;
    if (!ok) ++failures;
    os << (ok ? "ok   " : "FAIL ") << r.name << ": lhs " << fmt(r.lhs) << ", rhs " << fmt(r.rhs)
       << ", residual " << fmt(res, 3) << (tol.relative ? " (rel)" : "") << ", order "
       << fmt(r.order, 3) << '\n';
  }
  os << ids.size() - failures << " of " << ids.size() << " identities within tolerance\n";
  out.summary = os.str();
  if (failures > 0) out.exit_code = 3;
}

void convergence_command(const SurfaceModel& surface, const RunConfig& c, RunReport& out) {
  if (c.grids.size() < 3) throw ConfigError("convergence needs at least three grids");
  const auto modes = mode_list(c);
  const AggregateSpectrum spec = c.problem == "dirichlet"
                                     ? dirichlet_spectrum(surface, modes, options_of(c))
                                     : robin_spectrum(surface, modes, options_of(c));
  std::ostringstream os;
  os << "lowest " << c.problem << " eigenvalue per mode on grids";
  for (int g : c.grids) os << ' ' << g;
  os << '\n';
  bool all_ok = true;
  for (const auto& s : spec.modes) {
    ResultRow row;
    row.problem = c.problem;
    row.mode = s.mode;
    for (const auto& r : s.per_grid) row.eigenvalues.push_back(r.eigenvalues.front());
    row.multiplicity.assign(row.eigenvalues.size(), s.multiplicity);
    row.extrapolated = {s.extrapolated.front()};
    row.order = {s.order.front()};
    // A sequence already converged to round-off has no meaningful order.
    const auto [lo, hi] = std::minmax_element(row.eigenvalues.begin(), row.eigenvalues.end());
    const bool flat = *hi - *lo <= 1e-8 * (1.0 + std::abs(*hi));
    row.certified = flat || s.order.front() >= 1.9;
    all_ok = all_ok && row.certified;
    os << "  mode " << s.mode << ":";
    for (double v : row.eigenvalues) os << ' ' << fmt(v);
    os << "  -> " << fmt(s.extrapolated.front()) << "  order " << fmt(s.order.front(), 4) << '\n';
    out.results.push_back(std::move(row));
  }
  out.summary = os.str();
  if (!all_ok) out.exit_code = 3;
}

nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::json numbers(const std::vector<double>& xs) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

}  // namespace

std::pair<int, int> parse_modes(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int m = parse_int(text, "mode range");
    return {m, m};
  }
  return {parse_int(text.substr(0, dots), "mode range"),
          parse_int(text.substr(dots + 2), "mode range")};
}

std::vector<int> parse_grids(const std::string& text) {
  std::vector<int> grids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) grids.push_back(parse_int(item, "grid list"));
  if (grids.empty()) throw ConfigError("empty grid list");
  return grids;
}

SurfaceKind parse_surface(const std::string& text) {
  if (text == "catenoid") return SurfaceKind::catenoid;
  if (text == "disk") return SurfaceKind::disk;
  throw ConfigError("unknown surface '" + text + "'");
}

void validate(const RunConfig& c, const std::string& command) {
  if (std::find(kProblems.begin(), kProblems.end(), c.problem) == kProblems.end()) {
    throw ConfigError("unknown problem '" + c.problem + "'");
  }
  if (c.mode_lo < 0 || c.mode_hi < c.mode_lo) throw ConfigError("invalid mode range");
  if (c.grids.empty()) throw ConfigError("at least one grid size is required");
  for (std::size_t i = 0; i < c.grids.size(); ++i) {
    if (c.grids[i] < 16) throw ConfigError("grid sizes must be >= 16");
    if (i > 0 && c.grids[i] <= c.grids[i - 1]) {
      throw ConfigError("grid sizes must be strictly increasing");
    }
    if (i > 0 && c.grids[i] != 2 * c.grids[i - 1]) {
      throw ConfigError("grid sizes must be successive doublings (Richardson extrapolation)");
    }
  }
  if (!(c.guard > 0.0) || !std::isfinite(c.guard)) throw ConfigError("guard must be positive");
  if (c.format != "text" && c.format != "json" && c.format != "csv") {
    throw ConfigError("format must be text, json or csv");
  }
  if (c.mmax < 2) throw ConfigError("mmax must be >= 2");
  const bool radial = c.problem == "radial-l0" || c.problem == "radial-l1";
  if (radial && c.surface != SurfaceKind::catenoid) {
    throw ConfigError("radial problems are defined on the catenoid only");
  }
  if (c.problem.rfind("steklov", 0) == 0 && c.grids.back() % 2 != 0) {
    throw ConfigError("Steklov problems need an even grid size");
  }
  if (command == "verify" && (c.grids.back() % 2 != 0 || c.grids.back() < 32)) {
    throw ConfigError("verify needs an even grid size >= 32");
  }
  if (command == "nonlocal" && c.grids.back() % 2 != 0) {
    throw ConfigError("nonlocal needs an even grid size");
  }
  if (command == "convergence" && c.problem != "robin" && c.problem != "dirichlet") {
    throw ConfigError("convergence supports the robin and dirichlet problems");
  }
}

int threads_from_env() {
  const char* env = std::getenv("FBMS_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || value < 1) return 1;
  return static_cast<int>(std::min<long>(value, 256));
}

RunReport run_command(const std::string& command, const RunConfig& config) {
  validate(config, command);
  RunReport out;
  out.command = command;
  out.config = config;
  const SurfaceModel surface = config.surface == SurfaceKind::catenoid ? SurfaceModel::catenoid()
                                                                       : SurfaceModel::disk();
  if (command == "spectrum") {
    spectrum_command(surface, config, out);
  } else if (command == "index") {
    index_command(surface, config, out);
  } else if (command == "nonlocal") {
    nonlocal_command(surface, config, out);
  } else if (command == "verify") {
    verify_command(surface, config, out);
  } else if (command == "convergence") {
    convergence_command(surface, config, out);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  out.timestamp = iso8601_now();
  return out;
}

std::string to_json(const RunReport& report) {
  using nlohmann::json;
  const RunConfig& c = report.config;
  json doc;
  doc["command"] = report.command;
  doc["config"] = {{"surface", to_string(c.surface)},
                   {"problem", c.problem},
                   {"modes", {c.mode_lo, c.mode_hi}},
                   {"grids", c.grids},
                   {"guard", c.guard},
                   {"threshold", c.threshold},
                   {"format", c.format},
                   {"seed", c.seed},
                   {"mmax", c.mmax}};
  json results = json::array();
  for (const auto& r : report.results) {
    results.push_back({{"problem", r.problem},
                       {"mode", r.mode},
                       {"eigenvalues", numbers(r.eigenvalues)},
                       {"multiplicity", r.multiplicity},
                       {"extrapolated", numbers(r.extrapolated)},
                       {"order", numbers(r.order)},
                       {"certified", r.certified}});
  }
  doc["results"] = std::move(results);
  json ids = json::array();
  for (const auto& r : report.identities) {
    json terms = json::object();
    for (const auto& [k, v] : r.terms) terms[k] = number(v);
    ids.push_back({{"name", r.name},
                   {"lhs", number(r.lhs)},
                   {"rhs", number(r.rhs)},
                   {"abs_residual", number(r.abs_residual)},
                   {"rel_residual", number(r.rel_residual)},
                   {"n", r.n},
                   {"order", std::isinf(r.order) && r.order > 0 ? json("inf") : number(r.order)},
                   {"terms", std::move(terms)}});
  }
  doc["identities"] = std::move(ids);
  doc["exit_code"] = report.exit_code;
  doc["timestamp"] = report.timestamp;
  return doc.dump(2) + "\n";
}

std::string to_csv(const RunReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "problem,mode,index,value,extrapolated,order\n";
  auto cell = [&](double x) {
    if (std::isfinite(x)) os << x;
  };
  for (const auto& r : report.results) {
    const std::size_t rows = std::max(r.eigenvalues.size(), r.extrapolated.size());
    for (std::size_t i = 0; i < rows; ++i) {
      os << r.problem << ',' << r.mode << ',' << i << ',';
      if (i < r.eigenvalues.size()) cell(r.eigenvalues[i]);
      os << ',';
      if (i < r.extrapolated.size()) cell(r.extrapolated[i]);
      os << ',';
      if (i < r.order.size()) cell(r.order[i]);
      os << '\n';
    }
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

std::string iso8601_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace fbms
