#include "invscat/scattering_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "invscat/csv.hpp"
#include "invscat/errors.hpp"

namespace invscat {

namespace {

using namespace std::complex_literals;

std::complex<double> tail_s(double a, double q) {
  return std::polar(1.0, -2.0 * a / q);
}

std::complex<double> pole_terms(std::span<const BoundState> states, double q) {
  std::complex<double> sum = 0.0;
  for (const auto& b : states) {
    sum += b.m * b.m / (q - 1i * b.kappa);
  }
  return -1i * sum;
}

}  // namespace

ScatteringData::ScatteringData(std::vector<SMatrixSample> samples,
                               std::vector<BoundState> bound_states, double a,
                               double unitarity_tolerance)
    : samples_(std::move(samples)), bound_states_(std::move(bound_states)), a_(a) {
  if (samples_.empty()) throw ValidationError("ScatteringData: no S-matrix samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.q) || !(s.q > 0.0)) {
      throw ValidationError("ScatteringData: q must be finite and > 0 (sample " +
                            std::to_string(i) + ")");
    }
    if (i > 0 && !(s.q > samples_[i - 1].q)) {
      throw ValidationError("ScatteringData: q not strictly increasing at sample " +
                            std::to_string(i));
    }
    if (!(std::abs(std::abs(s.s) - 1.0) <= unitarity_tolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "ScatteringData: |S| = " << std::abs(s.s) << " at q = " << s.q
          << " violates unitarity";
      throw ValidationError(msg.str());
    }
  }
  for (std::size_t i = 0; i < bound_states_.size(); ++i) {
    const auto& b = bound_states_[i];
    if (!(b.kappa > 0.0) || !(b.m > 0.0) || !std::isfinite(b.kappa) ||
        !std::isfinite(b.m)) {
      throw ValidationError("ScatteringData: bound state needs kappa > 0 and M > 0");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (bound_states_[j].kappa == b.kappa) {
        throw ValidationError("ScatteringData: duplicate bound-state kappa");
      }
    }
  }
  if (!std::isfinite(a_)) throw ValidationError("ScatteringData: A is not finite");
  const auto& edge = samples_.back();
  const double seam = std::abs(tail_s(a_, edge.q) - edge.s);
  if (!(seam <= std::max(1e-9, unitarity_tolerance))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ScatteringData: tail exp(-2iA/q) misses S(q_edge) by " << seam;
    throw ValidationError(msg.str());
  }
}

ScatteringData ScatteringData::from_table(const PhaseShiftTable& table,
                                          std::vector<BoundState> bound_states) {
  if (table.size() == 0) throw ValidationError("from_table: empty table");
  std::vector<SMatrixSample> samples;
  samples.reserve(table.size());
  for (const auto& e : table.entries()) samples.push_back({e.q, e.s});
  const double q_edge = table.entries().back().q;
  return ScatteringData(std::move(samples), std::move(bound_states),
                        asymptotic_constant(table, q_edge));
}

YEvaluator::Interpolated YEvaluator::interpolate(const ScatteringData& data) {
  const auto samples = data.samples();
  if (samples.size() < 3) {
    throw ValidationError("build_y_evaluator: need at least 3 S samples");
  }
  std::vector<double> q, re, im;
  for (const auto& s : samples) {
    q.push_back(s.q);
    re.push_back(s.s.real());
    im.push_back(s.s.imag());
  }
  return Interpolated{numerics::QuadraticSpline(q, re), numerics::QuadraticSpline(q, im),
                      data.q_edge(), data.a(),
                      std::vector<BoundState>(data.bound_states().begin(),
                                              data.bound_states().end())};
}

YEvaluator::YEvaluator(const ScatteringData& data) : source_(interpolate(data)) {
  const auto knots = std::get<Interpolated>(source_).re.knots();
  breakpoints_.assign(knots.begin(), knots.end());
}

YEvaluator::YEvaluator(Function y, std::vector<double> breakpoints)
    : source_(std::move(y)), breakpoints_(std::move(breakpoints)) {
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

YEvaluator YEvaluator::analytic(Function y, std::vector<double> breakpoints) {
  if (!y) throw ValidationError("YEvaluator::analytic: empty function");
  return YEvaluator(std::move(y), std::move(breakpoints));
}

const YEvaluator::Interpolated& YEvaluator::interpolated() const {
  const auto* p = std::get_if<Interpolated>(&source_);
  if (!p) throw ValidationError("YEvaluator: not built from scattering data");
  return *p;
}

std::complex<double> YEvaluator::s_from_spline(double q) const {
  const auto& d = interpolated();
  return {d.re.extrapolate(q), d.im.extrapolate(q)};
}

std::complex<double> YEvaluator::s_from_tail(double q) const {
  return tail_s(interpolated().a, q);
}

std::optional<double> YEvaluator::q_edge() const {
  if (const auto* p = std::get_if<Interpolated>(&source_)) return p->q_edge;
  return std::nullopt;
}

std::complex<double> YEvaluator::operator()(double q) const {
  if (!(q > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "y_at: q must be > 0, got " << q;
    throw ValidationError(msg.str());
  }
  if (const auto* fn = std::get_if<Function>(&source_)) return (*fn)(q);
  const auto& d = std::get<Interpolated>(source_);
  const std::complex<double> s =
      (q <= d.q_edge) ? std::complex<double>(d.re.extrapolate(q), d.im.extrapolate(q))
                      : tail_s(d.a, q);
  return 1.0 - s + pole_terms(d.bound_states, q);
}

YEvaluator build_y_evaluator(const ScatteringData& data) { return YEvaluator(data); }

std::complex<double> y_at(const YEvaluator& evaluator, double q) { return evaluator(q); }

void save_scattering_csv(const ScatteringData& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  using csv::format_number;
  out << "q,re_s,im_s\n";
  for (const auto& s : data.samples()) {
    out << format_number(s.q) << ',' << format_number(s.s.real()) << ','
        << format_number(s.s.imag()) << '\n';
  }
  if (!data.bound_states().empty()) {
    out << "# bound_states\nkappa,M\n";
    for (const auto& b : data.bound_states()) {
      out << format_number(b.kappa) << ',' << format_number(b.m) << '\n';
    }
  }
  out << "# q_edge=" << format_number(data.q_edge()) << " A=" << format_number(data.a())
      << '\n';
  if (!out) throw ValidationError("write failed: " + path.string());
}

ScatteringData load_scattering_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());

  enum class Section { Header, Samples, BoundStates };
  Section section = Section::Header;
  std::vector<SMatrixSample> samples;
  std::vector<BoundState> states;
  std::optional<double> q_edge, a;
  std::optional<std::size_t> edge_line;

  auto fail = [](std::size_t line, const std::string& what) {
    throw CsvError(line, "line " + std::to_string(line) + ": " + what);
  };

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string t = csv::trim(raw);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const std::string body = csv::trim(std::string_view(t).substr(1));
      if (body == "bound_states") {
        section = Section::BoundStates;
      } else if (body.rfind("q_edge=", 0) == 0) {
        std::istringstream fields(body);
        std::string token;
        while (fields >> token) {
          const auto eq = token.find('=');
          if (eq == std::string::npos) fail(line, "malformed metadata '" + token + "'");
          const auto key = token.substr(0, eq);
          const double value = csv::parse_number(token.substr(eq + 1), line);
          if (key == "q_edge") {
            q_edge = value;
          } else if (key == "A") {
            a = value;
          } else {
            fail(line, "unknown metadata key '" + key + "'");
          }
        }
        edge_line = line;
      }
      continue;
    }
    const auto fields = csv::split(t);
    switch (section) {
      case Section::Header:
        if (fields.size() != 3 || csv::trim(fields[0]) != "q" ||
            csv::trim(fields[1]) != "re_s" || csv::trim(fields[2]) != "im_s") {
          fail(line, "expected header 'q,re_s,im_s'");
        }
        section = Section::Samples;
        break;
      case Section::Samples: {
        if (fields.size() != 3) fail(line, "expected 3 fields q,re_s,im_s");
        const double q = csv::parse_number(fields[0], line);
        const std::complex<double> s(csv::parse_number(fields[1], line),
                                     csv::parse_number(fields[2], line));
        if (!(q > 0.0)) fail(line, "q must be > 0");
        if (!samples.empty() && !(q > samples.back().q)) {
          fail(line, "q not strictly increasing");
        }
        if (!(std::abs(std::abs(s) - 1.0) <= kFileUnitarityTolerance)) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "|S| = " << std::abs(s) << " is not unitary";
          fail(line, msg.str());
        }
        samples.push_back({q, s});
        break;
      }
      case Section::BoundStates: {
        if (csv::trim(fields[0]) == "kappa") continue;
        if (fields.size() != 2) fail(line, "expected 2 fields kappa,M");
        const BoundState b{csv::parse_number(fields[0], line),
                           csv::parse_number(fields[1], line)};
        if (!(b.kappa > 0.0) || !(b.m > 0.0)) fail(line, "bound state needs kappa > 0, M > 0");
        states.push_back(b);
        break;
      }
    }
  }
  if (samples.empty()) throw ValidationError(path.string() + ": no S-matrix rows");
  if (q_edge && *q_edge != samples.back().q) {
    fail(*edge_line, "q_edge does not equal the last sample momentum");
  }
  const auto& edge = samples.back();
  const double tail_a = a.value_or(-0.5 * edge.q * std::arg(edge.s));
  try {
    return ScatteringData(std::move(samples), std::move(states), tail_a,
                          kFileUnitarityTolerance);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace invscat
