#pragma once

// Text and binary artifact formats.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "vilenkin/experiments.hpp"
#include "vilenkin/martingale.hpp"
#include "vilenkin/norms.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin::io {

/// %.12g, the fixed CSV precision.
std::string fixed12(double v);

/// "index,re,im" rows.
void write_csv(std::ostream& out, const detail::ResolvedArray& values);

/// Reads "index,re,im" rows; indices must be 0..M_N-1 in order. Lines starting
/// with '#' and a header row are skipped.
std::vector<Complex> read_csv_values(std::istream& in);

/// "VLK1", uint32 N, N uint32 radices, then M_N (re, im) float64 pairs, all little-endian.
void write_binary(std::ostream& out, const detail::ResolvedArray& values);

struct BinaryPayload {
  std::vector<Radix> radices;
  std::vector<Complex> values;
};

BinaryPayload read_binary(std::istream& in);

GridFunction read_grid_function(std::istream& in, bool binary, const GeneratorSequence& m,
                                std::size_t N);

nlohmann::json to_json(const MartingaleSpec& spec);
MartingaleSpec spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScenarioResult& r);

/// The rows table, with a header line.
void write_csv(std::ostream& out, const ScenarioResult& r);

/// Trace as a polyline on a log-scale y axis.
void write_svg(std::ostream& out, const ScenarioResult& r);

void write_csv(std::ostream& out, std::span<const NormReport> rows);

NormReport to_norm_report(const LebesgueReport& r);

}  // namespace vilenkin::io
