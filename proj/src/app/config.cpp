#include "ghostsim/app/config.hpp"

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ghostsim/errors.hpp"

namespace ghostsim::app {
namespace {

enum class Kind { Length, Angle, Number, Count, Choice, Flag, Coefficients, Text, CutAngle };

struct Value {
  double number = 0.0;
  long count = 0;
  std::string word;
  bool flag = false;
  std::array<double, 4> coeffs{};
  bool automatic = false;
};

struct Key {
  Key(std::string n, Kind k) : name(std::move(n)), kind(k) {}

  std::string name;  // section.name
  Kind kind;
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
  bool strict_lo = false;
  std::vector<std::string> choices;
  std::function<void(RunConfig&, const Value&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::map<std::string, double>& length_units() {
  static const std::map<std::string, double> u{{"nm", 1e9}, {"um", 1e6}, {"\xC2\xB5m", 1e6}, {"mm", 1e3}, {"m", 1.0}};
  return u;
}

const std::map<std::string, double>& angle_units() {
  static const std::map<std::string, double> u{{"mrad", 1e3}, {"rad", 1.0}};
  return u;
}

double parse_number(const std::string& text, std::string& rest, int line, const std::string& key) {
  const std::string t = trim(text);
  if (t.empty()) throw ParseError(key + ": missing value", line);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError(key + ": '" + t + "' is not a number", line);
  }
  rest = trim(std::string(end));
  return v;
}

// Divides by the unit scale so "1.5 mm" gives exactly the double nearest 1.5e-3.
double with_unit(double v, const std::string& unit, Kind kind, int line, const std::string& key) {
  if (unit.empty()) throw ParseError(key + ": missing unit", line);
  if (kind == Kind::Length) {
    const auto it = length_units().find(unit);
    if (it == length_units().end()) throw ParseError(key + ": unknown length unit '" + unit + "'", line);
    return v / it->second;
  }
  if (unit == "deg") return v * std::numbers::pi / 180.0;
  const auto it = angle_units().find(unit);
  if (it == angle_units().end()) throw ParseError(key + ": unknown angle unit '" + unit + "'", line);
  return v / it->second;
}

void check_range(const Key& k, double v, int line) {
  const bool ok = (k.strict_lo ? v > k.lo : v >= k.lo) && v <= k.hi;
  if (!ok) {
    std::ostringstream os;
    os << k.name << ": value " << g17(v) << " out of range (" << (k.strict_lo ? "> " : ">= ") << g17(k.lo);
    if (std::isfinite(k.hi)) os << ", <= " << g17(k.hi);
    os << ")";
    throw ParseError(os.str(), line);
  }
}

Key length_key(std::string name, double lo, bool strict, std::function<double&(RunConfig&)> ref) {
  Key k{std::move(name), Kind::Length};
  k.lo = lo;
  k.strict_lo = strict;
  k.set = [ref](RunConfig& c, const Value& v) { ref(c) = v.number; };
  k.get = [ref](const RunConfig& c) { return g17(ref(const_cast<RunConfig&>(c))) + " m"; };
  return k;
}

Key angle_key(std::string name, std::function<double&(RunConfig&)> ref) {
  Key k{std::move(name), Kind::Angle};
  k.set = [ref](RunConfig& c, const Value& v) { ref(c) = v.number; };
  k.get = [ref](const RunConfig& c) { return g17(ref(const_cast<RunConfig&>(c))) + " rad"; };
  return k;
}

Key number_key(std::string name, double lo, bool strict, std::function<double&(RunConfig&)> ref) {
  Key k{std::move(name), Kind::Number};
  k.lo = lo;
  k.strict_lo = strict;
  k.set = [ref](RunConfig& c, const Value& v) { ref(c) = v.number; };
  k.get = [ref](const RunConfig& c) { return g17(ref(const_cast<RunConfig&>(c))); };
  return k;
}

template <class Int>
Key count_key(std::string name, double lo, double hi, std::function<Int&(RunConfig&)> ref) {
  Key k{std::move(name), Kind::Count};
  k.lo = lo;
  k.hi = hi;
  k.set = [ref](RunConfig& c, const Value& v) { ref(c) = static_cast<Int>(v.count); };
  k.get = [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); };
  return k;
}

Key flag_key(std::string name, std::function<bool&(RunConfig&)> ref) {
  Key k{std::move(name), Kind::Flag};
  k.set = [ref](RunConfig& c, const Value& v) { ref(c) = v.flag; };
  k.get = [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)) ? std::string("true") : "false"; };
  return k;
}

template <class Enum>
Key choice_key(std::string name, std::vector<std::string> names, std::vector<Enum> values,
               std::function<Enum&(RunConfig&)> ref) {
  Key k{std::move(name), Kind::Choice};
  k.choices = names;
  k.set = [=](RunConfig& c, const Value& v) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == v.word) ref(c) = values[i];
    }
  };
  k.get = [=](const RunConfig& c) {
    const Enum cur = ref(const_cast<RunConfig&>(c));
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == cur) return names[i];
    }
    return names.front();
  };
  return k;
}

Key coeff_key(std::string name, std::function<SellmeierCoefficients&(RunConfig&)> ref) {
  Key k{std::move(name), Kind::Coefficients};
  k.set = [ref](RunConfig& c, const Value& v) { ref(c) = {v.coeffs[0], v.coeffs[1], v.coeffs[2], v.coeffs[3]}; };
  k.get = [ref](const RunConfig& c) {
    const SellmeierCoefficients& s = ref(const_cast<RunConfig&>(c));
    return g17(s.a) + " " + g17(s.b) + " " + g17(s.c) + " " + g17(s.d);
  };
  return k;
}

Key wavelength_key(std::string name, std::function<Wavelength&(RunConfig&)> ref) {
  Key k{std::move(name), Kind::Length};
  k.lo = 0.0;
  k.strict_lo = true;
  k.set = [ref](RunConfig& c, const Value& v) { ref(c) = Wavelength(v.number); };
  k.get = [ref](const RunConfig& c) { return g17(ref(const_cast<RunConfig&>(c)).meters()) + " m"; };
  return k;
}

const std::vector<Key>& registry() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> r;
    Key material{"crystal.material", Kind::Text};
    material.set = [](RunConfig& c, const Value& v) { c.phasematch.crystal.material = v.word; };
    material.get = [](const RunConfig& c) { return c.phasematch.crystal.material; };
    r.push_back(material);
    r.push_back(length_key("crystal.length", 0.0, true, [](RunConfig& c) -> double& { return c.phasematch.crystal.length; }));
    Key cut{"crystal.cut_angle", Kind::CutAngle};
    cut.lo = 0.0;
    cut.hi = std::numbers::pi / 2;
    cut.strict_lo = true;
    cut.set = [](RunConfig& c, const Value& v) {
      c.auto_cut_angle = v.automatic;
      c.phasematch.crystal.cut_angle = v.automatic ? 0.0 : v.number;
    };
    cut.get = [](const RunConfig& c) {
      return c.auto_cut_angle ? std::string("auto") : g17(c.phasematch.crystal.cut_angle) + " rad";
    };
    r.push_back(cut);
    r.push_back(coeff_key("crystal.sellmeier_o", [](RunConfig& c) -> SellmeierCoefficients& { return c.phasematch.crystal.ordinary; }));
    r.push_back(coeff_key("crystal.sellmeier_e", [](RunConfig& c) -> SellmeierCoefficients& { return c.phasematch.crystal.extraordinary; }));
    r.push_back(length_key("crystal.valid_min", 0.0, true, [](RunConfig& c) -> double& { return c.phasematch.crystal.valid_min; }));
    r.push_back(length_key("crystal.valid_max", 0.0, true, [](RunConfig& c) -> double& { return c.phasematch.crystal.valid_max; }));
    r.push_back(wavelength_key("pump.wavelength", [](RunConfig& c) -> Wavelength& { return c.phasematch.pump; }));
    r.push_back(choice_key<InteractionType>("phasematch.type", {"type2", "type1"},
                                            {InteractionType::TypeII, InteractionType::TypeI},
                                            [](RunConfig& c) -> InteractionType& { return c.phasematch.type; }));
    r.push_back(choice_key<Approximation>("phasematch.approximation", {"full", "linear"},
                                          {Approximation::Full, Approximation::LinearDominant},
                                          [](RunConfig& c) -> Approximation& { return c.phasematch.approximation; }));
    r.push_back(length_key("geometry.pump_radius", 0.0, true, [](RunConfig& c) -> double& { return c.geometry.pump_radius; }));
    r.push_back(length_key("geometry.d2", 0.0, true, [](RunConfig& c) -> double& { return c.geometry.distance; }));
    r.push_back(length_key("geometry.slit_width", 0.0, false, [](RunConfig& c) -> double& { return c.geometry.slit_width; }));
    r.push_back(length_key("geometry.slit_center", -HUGE_VAL, false, [](RunConfig& c) -> double& { return c.geometry.slit_center; }));
    Key plane{"geometry.slit_plane", Kind::Text};
    plane.set = [](RunConfig& c, const Value& v) { c.geometry.slit_plane_tag = v.word; };
    plane.get = [](const RunConfig& c) { return c.geometry.slit_plane_tag; };
    r.push_back(plane);
    r.push_back(wavelength_key("band.center", [](RunConfig& c) -> Wavelength& { return c.band.center; }));
    r.push_back(length_key("band.width", 0.0, true, [](RunConfig& c) -> double& { return c.band.width; }));
    r.push_back(choice_key<BandShape>("band.shape", {"tophat", "gaussian"}, {BandShape::TopHat, BandShape::Gaussian},
                                      [](RunConfig& c) -> BandShape& { return c.band.shape; }));
    r.push_back(count_key<int>("band.samples", 1, 100001, [](RunConfig& c) -> int& { return c.band.samples; }));
    r.push_back(choice_key<DetectorMode>("detector.mode", {"slow", "fast"}, {DetectorMode::Slow, DetectorMode::Fast},
                                         [](RunConfig& c) -> DetectorMode& { return c.detector.mode; }));
    r.push_back(wavelength_key("signal.wavelength", [](RunConfig& c) -> Wavelength& { return c.signal; }));
    r.push_back(length_key("grid.x_min", -HUGE_VAL, false, [](RunConfig& c) -> double& { return c.x_grid.min; }));
    r.push_back(length_key("grid.x_max", -HUGE_VAL, false, [](RunConfig& c) -> double& { return c.x_grid.max; }));
    r.push_back(count_key<Eigen::Index>("grid.x_points", 16, 1 << 20, [](RunConfig& c) -> Eigen::Index& { return c.x_grid.points; }));
    r.push_back(angle_key("grid.angle_min", [](RunConfig& c) -> double& { return c.angle_grid.min; }));
    r.push_back(angle_key("grid.angle_max", [](RunConfig& c) -> double& { return c.angle_grid.max; }));
    r.push_back(count_key<Eigen::Index>("grid.angle_points", 256, 1 << 20, [](RunConfig& c) -> Eigen::Index& { return c.angle_grid.points; }));
    r.push_back(angle_key("grid.map_min", [](RunConfig& c) -> double& { return c.map_grid.min; }));
    r.push_back(angle_key("grid.map_max", [](RunConfig& c) -> double& { return c.map_grid.max; }));
    r.push_back(count_key<Eigen::Index>("grid.map_points", 16, 4096, [](RunConfig& c) -> Eigen::Index& { return c.map_grid.points; }));
    r.push_back(number_key("numerics.target", 0.0, true, [](RunConfig& c) -> double& { return c.imaging.quadrature.target_rel_error; }));
    r.push_back(count_key<int>("numerics.max_refinements", 1, 24, [](RunConfig& c) -> int& { return c.imaging.quadrature.max_refinements; }));
    r.push_back(choice_key<ImagingRoute>("numerics.route", {"factored", "direct"}, {ImagingRoute::Factored, ImagingRoute::Direct},
                                         [](RunConfig& c) -> ImagingRoute& { return c.imaging.route; }));
    r.push_back(choice_key<FactoredForm>("numerics.factored_form", {"coupled", "printed"},
                                         {FactoredForm::Coupled, FactoredForm::Printed},
                                         [](RunConfig& c) -> FactoredForm& { return c.imaging.factored_form; }));
    r.push_back(flag_key("numerics.include_fresnel", [](RunConfig& c) -> bool& { return c.imaging.include_fresnel; }));
    r.push_back(flag_key("numerics.raw", [](RunConfig& c) -> bool& { return c.imaging.raw; }));
    r.push_back(number_key("numerics.sampling_scale", 0.0, true, [](RunConfig& c) -> double& { return c.imaging.sampling_scale; }));
    r.push_back(number_key("numerics.envelope_radii", 2.0, false, [](RunConfig& c) -> double& { return c.imaging.envelope_radii; }));
    r.push_back(number_key("numerics.kappa_sinc_zeros", 0.0, true, [](RunConfig& c) -> double& { return c.imaging.kappa_sinc_zeros; }));
    r.push_back(number_key("numerics.kappa_na_multiples", 0.0, true, [](RunConfig& c) -> double& { return c.imaging.kappa_na_multiples; }));
    r.push_back(number_key("numerics.kappa_aperture_radii", 0.0, true, [](RunConfig& c) -> double& { return c.imaging.kappa_aperture_radii; }));
    r.push_back(count_key<int>("numerics.gauss_points", 2, 32, [](RunConfig& c) -> int& { return c.imaging.gauss_points; }));
    return r;
  }();
  return keys;
}

const std::vector<std::string>& sections() {
  static const std::vector<std::string> s{"crystal", "pump", "phasematch", "geometry", "band",
                                          "detector", "signal", "grid", "numerics"};
  return s;
}

const Key& find_key(const std::string& section, const std::string& name, int line) {
  const std::string full = section.empty() ? name : section + "." + name;
  const Key* hit = nullptr;
  int matches = 0;
  for (const Key& k : registry()) {
    if (k.name == full) return k;
    if (section.empty() && name.find('.') == std::string::npos) {
      const auto dot = k.name.find('.');
      if (k.name.substr(dot + 1) == name) {
        hit = &k;
        ++matches;
      }
    }
  }
  if (matches == 1) return *hit;
  if (matches > 1) throw ParseError("ambiguous key '" + name + "'; qualify it with a section", line);
  throw ParseError("unknown key '" + full + "'", line);
}

Value parse_value(const Key& k, const std::string& text, int line) {
  Value v;
  std::string rest;
  const std::string t = trim(text);
  switch (k.kind) {
    case Kind::CutAngle:
      if (t == "auto") {
        v.automatic = true;
        return v;
      }
      [[fallthrough]];
    case Kind::Length:
    case Kind::Angle: {
      const double raw = parse_number(t, rest, line, k.name);
      v.number = with_unit(raw, rest, k.kind == Kind::Length ? Kind::Length : Kind::Angle, line, k.name);
      check_range(k, v.number, line);
      return v;
    }
    case Kind::Number:
      v.number = parse_number(t, rest, line, k.name);
      if (!rest.empty()) throw ParseError(k.name + ": dimensionless value takes no unit", line);
      check_range(k, v.number, line);
      return v;
    case Kind::Count: {
      const double raw = parse_number(t, rest, line, k.name);
      if (!rest.empty()) throw ParseError(k.name + ": count takes no unit", line);
      if (raw != std::floor(raw)) throw ParseError(k.name + ": expected an integer", line);
      check_range(k, raw, line);
      if (k.name == "band.samples" && static_cast<long>(raw) % 2 == 0) {
        throw ParseError(k.name + ": sample count must be odd", line);
      }
      v.count = static_cast<long>(raw);
      return v;
    }
    case Kind::Choice:
      for (const std::string& c : k.choices) {
        if (c == t) {
          v.word = t;
          return v;
        }
      }
      {
        std::string list;
        for (const std::string& c : k.choices) list += (list.empty() ? "" : ", ") + c;
        throw ParseError(k.name + ": '" + t + "' is not one of " + list, line);
      }
    case Kind::Flag:
      if (t == "true" || t == "yes" || t == "on") {
        v.flag = true;
      } else if (t != "false" && t != "no" && t != "off") {
        throw ParseError(k.name + ": expected true or false", line);
      }
      return v;
    case Kind::Coefficients: {
      std::istringstream is(t);
      for (double& c : v.coeffs) {
        std::string tok;
        if (!(is >> tok)) throw ParseError(k.name + ": expected four Sellmeier coefficients", line);
        std::string tail;
        c = parse_number(tok, tail, line, k.name);
        if (!tail.empty()) throw ParseError(k.name + ": coefficients are dimensionless", line);
      }
      std::string extra;
      if (is >> extra) throw ParseError(k.name + ": expected four Sellmeier coefficients", line);
      return v;
    }
    case Kind::Text:
      if (t.empty()) throw ParseError(k.name + ": missing value", line);
      v.word = t;
      return v;
  }
  return v;
}

void apply_in_section(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value,
                      int line) {
  const Key& k = find_key(section, trim(key), line);
  k.set(cfg, parse_value(k, value, line));
}

}  // namespace

RunConfig::RunConfig() {
  phasematch.crystal = bbo(3e-3);
  phasematch.pump = nanometers(405.0);
}

RunConfig RunConfig::resolved() const {
  RunConfig r = *this;
  if (r.auto_cut_angle) {
    r.phasematch.crystal.cut_angle = solve_cut_angle(r.phasematch.crystal, r.phasematch.pump, r.phasematch.type);
  }
  r.phasematch.validate();
  r.geometry.validate();
  r.band.validate();
  r.imaging.validate();
  r.x_grid.validate();
  r.angle_grid.validate();
  r.map_grid.validate();
  if (!(r.signal.meters() > r.phasematch.pump.meters()) || !(r.band.center.meters() > r.phasematch.pump.meters())) {
    throw DomainError("signal and band center must be longer than the pump wavelength");
  }
  return r;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
  apply_in_section(cfg, "", key, value, line);
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("malformed section header", line);
      section = trim(s.substr(1, s.size() - 2));
      bool known = false;
      for (const std::string& name : sections()) known = known || name == section;
      if (!known) throw ParseError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    apply_in_section(cfg, section, s.substr(0, eq), s.substr(eq + 1), line);
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  apply_config_text(cfg, text);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Key& k : registry()) out.push_back(k.name);
  return out;
}

bool is_numeric_key(const std::string& key) {
  const Key& k = find_key("", key, 0);
  return k.kind == Kind::Length || k.kind == Kind::Angle || k.kind == Kind::Number || k.kind == Kind::Count ||
         k.kind == Kind::CutAngle;
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : registry()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

std::string write_config(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& [name, value] : config_entries(cfg)) {
    const auto dot = name.find('.');
    const std::string sec = name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << "\n";
      os << "[" << sec << "]\n";
      section = sec;
    }
    os << name.substr(dot + 1) << " = " << value << "\n";
  }
  return os.str();
}

}  // namespace ghostsim::app
