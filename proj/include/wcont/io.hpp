#ifndef WCONT_IO_HPP
#define WCONT_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wcont/core.hpp"

namespace wcont::io {

// JSON schemas:
//   pmf                {"alphabet_size": int, "n": int, "probs": [float]}
//   channel            {"input_size": int, "output_size": int, "rows": [[float]]}
//   two-input channel  {"x_size": int, "a_size": int, "y_size": int, "entries": [[[float]]]}  ([x][a][y])
//   mixture            {"components": [{"w": float, "mean": float, "var": float}]}
// Malformed documents and invariant breaches raise InvariantViolation with the
// offending field named in the message.

Pmf pmf_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Pmf& p);
Channel channel_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Channel& c);
TwoInputChannel two_input_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TwoInputChannel& w);
GaussianMixture1D mixture_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GaussianMixture1D& m);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

Pmf load_pmf(const std::filesystem::path& path);
void save_pmf(const std::filesystem::path& path, const Pmf& p);
Channel load_channel(const std::filesystem::path& path);
void save_channel(const std::filesystem::path& path, const Channel& c);
TwoInputChannel load_two_input(const std::filesystem::path& path);
GaussianMixture1D load_mixture(const std::filesystem::path& path);

/// Fixed 12-significant-digit rendering, '.' separator, locale independent.
std::string format_float(double v);

/// Region CSV: header "R1,R2,kind,base", one row per sampled point.
std::string region_csv(std::span<const RegionCurve> curves, LogBase base);
void save_region(const std::filesystem::path& path, std::span<const RegionCurve> curves, LogBase base);

}  // namespace wcont::io

#endif  // WCONT_IO_HPP
