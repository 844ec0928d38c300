#include "ghostsim/app/output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ghostsim/errors.hpp"

namespace ghostsim::app {
namespace {

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double axis_scale(ProfileAxis axis) { return axis == ProfileAxis::Position ? 1e6 : 1e3; }

const char* axis_column(ProfileAxis axis) {
  return axis == ProfileAxis::Position ? "x2s_um" : "angle_mrad_exterior";
}

void write_header(std::ostringstream& os, const HeaderEntries& header) {
  for (const auto& [k, v] : header) os << "# " << k << " = " << v << "\n";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_profile_csv(const Profile& p, const HeaderEntries& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "# profile = " << p.label << "\n";
  os << "# normalized = " << (p.normalized ? "true" : "false") << "\n";
  os << "# normalization = " << g12(p.normalization) << "\n";
  for (const auto& [k, v] : p.metadata) os << "# " << k << " = " << v << "\n";
  os << axis_column(p.axis) << ",intensity\n";
  const double s = axis_scale(p.axis);
  for (Eigen::Index i = 0; i < p.grid.size(); ++i) os << g12(p.grid(i) * s) << "," << g12(p.values(i)) << "\n";
  return os.str();
}

std::string format_map_csv(const AngleMap& map, const HeaderEntries& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "angle_x_mrad,angle_y_mrad,intensity\n";
  for (Eigen::Index i = 0; i < map.angle_x.size(); ++i) {
    for (Eigen::Index j = 0; j < map.angle_y.size(); ++j) {
      os << g12(map.angle_x(i) * 1e3) << "," << g12(map.angle_y(j) * 1e3) << "," << g12(map.intensity(i, j)) << "\n";
    }
  }
  return os.str();
}

std::string format_metrics_csv(const std::vector<std::pair<std::string, ProfileMetrics>>& rows, ProfileAxis axis) {
  std::ostringstream os;
  const bool pos = axis == ProfileAxis::Position;
  const double s = axis_scale(axis);
  const char* u = pos ? "um" : "mrad";
  os << "artifact,fwhm_" << u << ",centroid_" << u << ",edge_width_10_90_" << u << ",peak,peak_position_" << u << "\n";
  for (const auto& [name, m] : rows) {
    os << name << "," << g12(m.fwhm * s) << "," << g12(m.centroid * s) << "," << g12(m.edge_width_10_90 * s) << ","
       << g12(m.peak) << "," << g12(m.peak_position * s) << "\n";
  }
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string format_svg(const std::vector<Profile>& profiles, const SvgStyle& style) {
  if (profiles.empty()) throw ArgumentError("SVG plot needs at least one profile");
  const ProfileAxis axis = profiles.front().axis;
  for (const Profile& p : profiles) {
    if (p.axis != axis) throw ArgumentError("SVG plot profiles must share axis units");
    if (p.grid.size() == 0) throw ArgumentError("SVG plot profile is empty");
  }
  const double s = axis_scale(axis);
  double x0 = profiles.front().grid(0) * s, x1 = x0, y1 = 0.0;
  for (const Profile& p : profiles) {
    x0 = std::min(x0, p.grid.minCoeff() * s);
    x1 = std::max(x1, p.grid.maxCoeff() * s);
    y1 = std::max(y1, p.values.maxCoeff());
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 <= 0.0) y1 = 1.0;

  const double left = 70, right = 160, top = 40, bottom = 60;
  const double w = style.width, h = style.height;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - y / y1 * ph; };
  static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#000000", "#9467bd", "#ff7f0e"};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width << "\" height=\""
     << style.height << "\" viewBox=\"0 0 " << style.width << " " << style.height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"16\">" << escape(style.title) << "</text>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y1 * i / 4.0;
    os << "<text x=\"" << g12(px(xv)) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << g12(xv) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << g12(py(yv) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << g12(yv) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 16
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << (axis == ProfileAxis::Position ? "x2s (um)" : "exterior angle (mrad)") << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">intensity</text>\n";

  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const Profile& p = profiles[k];
    const char* color = colors[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < p.grid.size(); ++i) {
      os << (i ? " " : "") << g12(px(p.grid(i) * s)) << "," << g12(py(p.values(i)));
    }
    os << "\"/>\n";
    const double ly = top + 16 + 20.0 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 30 << "\" y2=\""
       << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(p.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg(const std::vector<Profile>& profiles, const SvgStyle& style, const std::filesystem::path& path) {
  write_text(path, format_svg(profiles, style));
}

}  // namespace ghostsim::app
