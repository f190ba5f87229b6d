#include "wcont/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wcont::io {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw InvariantViolation("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw InvariantViolation(std::string("missing field '") + name + "'");
  return *it;
}

std::size_t positive_int(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw InvariantViolation(std::string("field '") + name + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> number_array(const json& v, const std::string& name) {
  if (!v.is_array()) throw InvariantViolation("field '" + name + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw InvariantViolation("field '" + name + "' must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

template <class F>
auto rethrow_with_field(const char* name, F&& f) {
  try {
    return f();
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

Pmf pmf_from_json(const json& j) {
  const std::size_t k = positive_int(j, "alphabet_size");
  const std::size_t n = positive_int(j, "n");
  auto probs = number_array(field(j, "probs"), "probs");
  return rethrow_with_field("probs", [&] { return Pmf(std::move(probs), k, n); });
}

json to_json(const Pmf& p) {
  return {{"alphabet_size", p.alphabet_size()},
          {"n", p.block_length()},
          {"probs", std::vector<double>(p.probs().begin(), p.probs().end())}};
}

Channel channel_from_json(const json& j) {
  const std::size_t nin = positive_int(j, "input_size");
  const std::size_t nout = positive_int(j, "output_size");
  const json& rows = field(j, "rows");
  if (!rows.is_array() || rows.size() != nin) throw InvariantViolation("field 'rows' must hold input_size rows");
  std::vector<std::vector<double>> m;
  for (const auto& r : rows) {
    m.push_back(number_array(r, "rows"));
    if (m.back().size() != nout) throw InvariantViolation("field 'rows': each row must hold output_size entries");
  }
  return rethrow_with_field("rows", [&] { return Channel(std::move(m)); });
}

json to_json(const Channel& c) {
  return {{"input_size", c.input_size()}, {"output_size", c.output_size()}, {"rows", c.rows()}};
}

TwoInputChannel two_input_from_json(const json& j) {
  const std::size_t nx = positive_int(j, "x_size");
  const std::size_t na = positive_int(j, "a_size");
  const std::size_t ny = positive_int(j, "y_size");
  const json& e = field(j, "entries");
  if (!e.is_array() || e.size() != nx) throw InvariantViolation("field 'entries' must have x_size blocks");
  std::vector<std::vector<std::vector<double>>> w;
  for (const auto& block : e) {
    if (!block.is_array() || block.size() != na) throw InvariantViolation("field 'entries' blocks must have a_size rows");
    auto& xb = w.emplace_back();
    for (const auto& r : block) {
      xb.push_back(number_array(r, "entries"));
      if (xb.back().size() != ny) throw InvariantViolation("field 'entries' rows must have y_size entries");
    }
  }
  return rethrow_with_field("entries", [&] { return TwoInputChannel(std::move(w)); });
}

json to_json(const TwoInputChannel& w) {
  return {{"x_size", w.x_size()}, {"a_size", w.a_size()}, {"y_size", w.y_size()}, {"entries", w.entries()}};
}

GaussianMixture1D mixture_from_json(const json& j) {
  const json& comps = field(j, "components");
  if (!comps.is_array()) throw InvariantViolation("field 'components' must be an array");
  std::vector<MixtureComponent> out;
  for (const auto& c : comps) {
    auto num = [&](const char* name) {
      const json& v = field(c, name);
      if (!v.is_number()) throw InvariantViolation(std::string("field '") + name + "' must be a number");
      return v.get<double>();
    };
    out.push_back({num("w"), num("mean"), num("var")});
  }
  return rethrow_with_field("components", [&] { return GaussianMixture1D(std::move(out)); });
}

json to_json(const GaussianMixture1D& m) {
  json comps = json::array();
  for (const auto& c : m.components()) comps.push_back({{"w", c.weight}, {"mean", c.mean}, {"var", c.variance}});
  return {{"components", comps}};
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvariantViolation("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvariantViolation("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
}

Pmf load_pmf(const std::filesystem::path& path) { return pmf_from_json(read_json(path)); }
void save_pmf(const std::filesystem::path& path, const Pmf& p) { write_text(path, to_json(p).dump(2) + "\n"); }
Channel load_channel(const std::filesystem::path& path) { return channel_from_json(read_json(path)); }
void save_channel(const std::filesystem::path& path, const Channel& c) { write_text(path, to_json(c).dump(2) + "\n"); }
TwoInputChannel load_two_input(const std::filesystem::path& path) { return two_input_from_json(read_json(path)); }
GaussianMixture1D load_mixture(const std::filesystem::path& path) { return mixture_from_json(read_json(path)); }

std::string format_float(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  if (ec != std::errc{}) throw NumericFailure("format_float: conversion failed");
  return std::string(buf, end);
}

std::string region_csv(std::span<const RegionCurve> curves, LogBase base) {
  std::ostringstream out;
  out << "R1,R2,kind,base\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      out << format_float(to_base(p.r1, base)) << ',' << format_float(to_base(p.r2, base)) << ','
          << to_string(curve.kind) << ',' << to_string(base) << '\n';
    }
  }
  return out.str();
}

void save_region(const std::filesystem::path& path, std::span<const RegionCurve> curves, LogBase base) {
  write_text(path, region_csv(curves, base));
}

}  // namespace wcont::io
