#include "vilenkin/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "vilenkin/error.hpp"

namespace vilenkin::io {
namespace {

constexpr char kMagic[4] = {'V', 'L', 'K', '1'};

static_assert(std::endian::native == std::endian::little,
              "binary I/O assumes a little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError("truncated binary payload");
  return v;
}

std::string json_number_or_null(double v) { return std::isfinite(v) ? fixed12(v) : "nan"; }

}  // namespace

std::string fixed12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& out, const detail::ResolvedArray& values) {
  out << "index,re,im\n";
  for (Index i = 0; i < values.size(); ++i)
    out << i << ',' << fixed12(values[i].real()) << ',' << fixed12(values[i].imag()) << '\n';
}

std::vector<Complex> read_csv_values(std::istream& in) {
  std::vector<Complex> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.rfind("index", 0) == 0) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw ParseError("line " + std::to_string(lineno) + ": expected index,re,im");
    try {
      std::size_t used = 0;
      const auto idx = std::stoull(a, &used);
      if (used != a.size() || idx != out.size())
        throw ParseError("line " + std::to_string(lineno) + ": index out of sequence");
      out.emplace_back(std::stod(b), std::stod(c));
    } catch (const std::logic_error&) {
      throw ParseError("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

void write_binary(std::ostream& out, const detail::ResolvedArray& values) {
  out.write(kMagic, 4);
  const auto N = values.resolution();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(N));
  for (std::size_t k = 0; k < N; ++k) put<std::uint32_t>(out, values.generators().radix(k));
  for (const Complex& v : values.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
}

BinaryPayload read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError("not a VLK1 binary file");
  const auto N = get<std::uint32_t>(in);
  if (N > 64) throw ParseError("binary header resolution too large");
  BinaryPayload out;
  Index size = 1;
  for (std::uint32_t k = 0; k < N; ++k) {
    out.radices.push_back(get<std::uint32_t>(in));
    if (out.radices.back() < 2) throw ParseError("binary header radix < 2");
    size *= out.radices.back();
    if (size > kMaxGridPoints) throw ParseError("binary payload exceeds the grid cap");
  }
  out.values.reserve(size);
  for (Index i = 0; i < size; ++i) {
    const double re = get<double>(in);
    out.values.emplace_back(re, get<double>(in));
  }
  return out;
}

GridFunction read_grid_function(std::istream& in, bool binary, const GeneratorSequence& m,
                                std::size_t N) {
  check_resolution(m, N);
  if (binary) {
    BinaryPayload payload = read_binary(in);
    if (payload.radices.size() != N ||
        !std::equal(payload.radices.begin(), payload.radices.end(), m.radices().begin()))
      throw ParseError("binary header does not match the requested generators and resolution");
    return GridFunction(m, N, std::move(payload.values));
  }
  auto values = read_csv_values(in);
  if (values.size() != m.scaled_base(N))
    throw ParseError("expected " + std::to_string(m.scaled_base(N)) + " rows, got " +
                     std::to_string(values.size()));
  return GridFunction(m, N, std::move(values));
}

nlohmann::json to_json(const MartingaleSpec& spec) {
  return {{"m", spec.generators.text()},
          {"N", spec.resolution},
          {"p", spec.p},
          {"alphas", spec.alphas},
          {"lambdas", spec.lambdas},
          {"rule", std::string(to_string(spec.rule))},
          {"phi", spec.phi.to_string()},
          {"lambda_max", spec.lambda_max}};
}

MartingaleSpec spec_from_json(const nlohmann::json& j) {
  try {
    const auto m = GeneratorSequence::parse(j.at("m").get<std::string>());
    return assemble_counterexample(m, j.at("p").get<double>(), j.at("alphas").get<std::vector<Index>>(),
                                   j.at("lambdas").get<std::vector<double>>(),
                                   parse_lambda_rule(j.at("rule").get<std::string>()),
                                   PhiSequence::parse(j.at("phi").get<std::string>()),
                                   j.at("N").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("martingale spec: ") + e.what());
  }
}

nlohmann::json to_json(const ScenarioResult& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["parameters"] = r.parameters;
  j["seed"] = r.seed;
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  j["constants"] = r.constants;
  j["trace"] = r.trace;
  j["verdict"] = std::string(to_string(r.verdict));
  j["notes"] = r.notes;
  return j;
}

void write_csv(std::ostream& out, const ScenarioResult& r) {
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fixed12(row[i]);
    out << '\n';
  }
}

void write_svg(std::ostream& out, const ScenarioResult& r) {
  constexpr double W = 640, H = 400, pad = 48;
  std::vector<std::pair<std::size_t, double>> pts;
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    if (r.trace[i] > 0 && std::isfinite(r.trace[i])) pts.emplace_back(i, std::log10(r.trace[i]));

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << pad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << r.scenario << " (" << to_string(r.verdict) << ", log10 y)</text>\n"
      << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\""
      << H - pad << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
      << "\" stroke=\"black\"/>\n";
  if (!pts.empty()) {
    double lo = pts[0].second, hi = pts[0].second;
    for (auto& [i, y] : pts) lo = std::min(lo, y), hi = std::max(hi, y);
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double xspan = std::max<double>(1, static_cast<double>(r.trace.size() - 1));
    auto sx = [&](std::size_t i) { return pad + (W - 2 * pad) * static_cast<double>(i) / xspan; };
    auto sy = [&](double y) { return H - pad - (H - 2 * pad) * (y - lo) / (hi - lo); };
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (auto& [i, y] : pts) out << fixed12(sx(i)) << ',' << fixed12(sy(y)) << ' ';
    out << "\"/>\n";
    out << "<text x=\"4\" y=\"" << pad << "\" font-size=\"11\">" << fixed12(hi) << "</text>\n"
        << "<text x=\"4\" y=\"" << H - pad << "\" font-size=\"11\">" << fixed12(lo) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_csv(std::ostream& out, std::span<const NormReport> rows) {
  out << "n,N,p,kind,value,lower_bound,upper_bound\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.resolution << ',' << fixed12(r.p) << ',' << to_string(r.kind) << ','
        << json_number_or_null(r.value) << ','
        << (r.lower_bound ? fixed12(*r.lower_bound) : std::string()) << ','
        << (r.upper_bound ? fixed12(*r.upper_bound) : std::string()) << '\n';
  }
}

NormReport to_norm_report(const LebesgueReport& r) {
  NormReport out;
  out.n = r.n;
  out.resolution = r.resolution;
  out.p = 1;
  out.kind = NormKind::Lp;
  out.value = r.value;
  out.lower_bound = r.bounds.lower;
  out.upper_bound = r.bounds.upper;
  return out;
}

}  // namespace vilenkin::io
