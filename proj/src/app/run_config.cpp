#include "invscat/app/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "invscat/csv.hpp"
#include "invscat/errors.hpp"

namespace invscat::app {

namespace {

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = csv::trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw ValidationError("config: '" + std::string(key) + "' expects a number, got '" + t + "'");
  }
  return value;
}

int parse_int(std::string_view key, std::string_view text) {
  const std::string t = csv::trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ValidationError("config: '" + std::string(key) + "' expects an integer, got '" + t + "'");
  }
  return value;
}

const char* kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Exponential: return "exp";
    case PotentialKind::SquareWell: return "well";
    case PotentialKind::Table: return "table";
  }
  return "exp";
}

}  // namespace

int RunConfig::n() const { return static_cast<int>(std::lround(range / h)); }

void RunConfig::validate() const {
  if (!(h > 0.0)) throw ValidationError("config: h must be > 0");
  if (!(range > 0.0)) throw ValidationError("config: R must be > 0");
  const double ratio = range / h;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError("config: R / h must be an integer");
  }
  if (n() < 2) throw ValidationError("config: R / h must be at least 2");
  if (!(q_edge > 0.0)) throw ValidationError("config: q_edge must be > 0");
  if (q_points < 3) throw ValidationError("config: q_points must be >= 3");
  if (!(forward_step > 0.0)) throw ValidationError("config: forward_step must be > 0");
  if (!(window_lo < window_hi)) throw ValidationError("config: window needs lo < hi");
  if (potential.kind == PotentialKind::Table && potential.table.empty()) {
    throw ValidationError("config: potential=table requires a table file");
  }
}

std::vector<double> RunConfig::q_grid() const {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(q_points));
  for (int i = 1; i <= q_points; ++i) {
    grid.push_back(i == q_points ? q_edge : q_edge * i / q_points);
  }
  return grid;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  if (key == "h") {
    c.h = parse_double(key, value);
  } else if (key == "R") {
    c.range = parse_double(key, value);
  } else if (key == "q_edge") {
    c.q_edge = parse_double(key, value);
  } else if (key == "q_points") {
    c.q_points = parse_int(key, value);
  } else if (key == "forward_step") {
    c.forward_step = parse_double(key, value);
  } else if (key == "window") {
    const auto parts = csv::split(value);
    if (parts.size() != 2) throw ValidationError("config: window expects 'lo,hi'");
    c.window_lo = parse_double(key, parts[0]);
    c.window_hi = parse_double(key, parts[1]);
  } else if (key == "out") {
    c.out = csv::trim(value);
  } else if (key == "potential") {
    const auto v = csv::trim(value);
    if (v == "exp") {
      c.potential.kind = PotentialKind::Exponential;
    } else if (v == "well") {
      c.potential.kind = PotentialKind::SquareWell;
    } else if (v == "table") {
      c.potential.kind = PotentialKind::Table;
    } else {
      throw ValidationError("config: potential must be exp, well or table, got '" + v + "'");
    }
  } else if (key == "depth") {
    c.potential.depth = parse_double(key, value);
  } else if (key == "rate") {
    c.potential.rate = parse_double(key, value);
  } else if (key == "radius") {
    c.potential.radius = parse_double(key, value);
  } else if (key == "cutoff") {
    const auto v = csv::trim(value);
    if (v.empty() || v == "default") {
      c.potential.cutoff.reset();
    } else {
      c.potential.cutoff = parse_double(key, v);
    }
  } else if (key == "table") {
    c.potential.table = csv::trim(value);
  } else {
    throw ValidationError("config: unknown key '" + std::string(key) + "'");
  }
}

RunConfig read_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string t = csv::trim(std::string_view(raw).substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(line) + ": expected key = value");
    }
    try {
      apply_setting(base, csv::trim(std::string_view(t).substr(0, eq)),
                    std::string_view(t).substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  return base;
}

std::string to_text(const RunConfig& c) {
  using csv::format_number;
  std::ostringstream out;
  out << "h = " << format_number(c.h) << '\n'
      << "R = " << format_number(c.range) << '\n'
      << "q_edge = " << format_number(c.q_edge) << '\n'
      << "q_points = " << c.q_points << '\n'
      << "forward_step = " << format_number(c.forward_step) << '\n'
      << "window = " << format_number(c.window_lo) << ',' << format_number(c.window_hi) << '\n'
      << "out = " << c.out.string() << '\n'
      << "potential = " << kind_name(c.potential.kind) << '\n'
      << "depth = " << format_number(c.potential.depth) << '\n'
      << "rate = " << format_number(c.potential.rate) << '\n'
      << "radius = " << format_number(c.potential.radius) << '\n'
      << "cutoff = " << (c.potential.cutoff ? format_number(*c.potential.cutoff) : "default")
      << '\n'
      << "table = " << c.potential.table.string() << '\n';
  return out.str();
}

void write_config_snapshot(const RunConfig& config, const std::filesystem::path& dir) {
  std::ofstream out(dir / "config");
  if (!out) throw ValidationError("cannot write " + (dir / "config").string());
  out << to_text(config);
}

Potential make_potential(const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::Exponential:
      return Potential::exponential(spec.depth, spec.rate, spec.cutoff);
    case PotentialKind::SquareWell:
      if (spec.cutoff) throw ValidationError("well potential: cutoff is its radius");
      return Potential::square_well(spec.depth, spec.radius);
    case PotentialKind::Table: {
      const auto table = csv::read_table(spec.table);
      if (table.header.size() != 2 || table.header[0] != "r" || table.header[1] != "V") {
        throw ValidationError(spec.table.string() + ": expected header 'r,V'");
      }
      std::vector<double> r, v;
      for (const auto& row : table.rows) {
        r.push_back(row[0]);
        v.push_back(row[1]);
      }
      if (spec.cutoff) {
        throw ValidationError("table potential: cutoff is the last tabulated radius");
      }
      return Potential::tabulated(std::move(r), std::move(v));
    }
  }
  throw ValidationError("unknown potential kind");
}

}  // namespace invscat::app
