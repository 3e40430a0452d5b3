#ifndef OA_CONSTRAINTS_HPP
#define OA_CONSTRAINTS_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "oa/errors.hpp"
#include "oa/fragments.hpp"
#include "oa/model.hpp"
#include "oa/uuid.hpp"

namespace oa::constraints {

struct Point {
  double x = 0, y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct SvgRect {
  double x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const SvgRect&, const SvgRect&) = default;
};

struct SvgPolygon {
  std::vector<Point> points;
  friend bool operator==(const SvgPolygon&, const SvgPolygon&) = default;
};

// Absolute commands only. M/L use x and y, H uses x, V uses y, Z uses neither.
struct PathCommand {
  char op = 'M';
  double x = 0, y = 0;
  friend bool operator==(const PathCommand&, const PathCommand&) = default;
};

struct SvgPath {
  std::vector<PathCommand> commands;
  bool closed() const { return !commands.empty() && commands.back().op == 'Z'; }
  friend bool operator==(const SvgPath&, const SvgPath&) = default;
};

using SvgShape = std::variant<SvgRect, SvgPolygon, SvgPath>;

struct SvgRegion {
  SvgShape shape;
  fragments::Rect bbox;
  friend bool operator==(const SvgRegion&, const SvgRegion&) = default;
};

/// Every coordinate the shape passes through. H and V commands reuse the
/// current point for the missing axis.
inline std::vector<Point> vertices(const SvgShape& shape) {
  std::vector<Point> out;
  if (auto r = std::get_if<SvgRect>(&shape)) {
    out = {{r->x, r->y}, {r->x + r->w, r->y}, {r->x + r->w, r->y + r->h}, {r->x, r->y + r->h}};
  } else if (auto p = std::get_if<SvgPolygon>(&shape)) {
    out = p->points;
  } else {
    Point current, subpath_start;
    for (const auto& c : std::get<SvgPath>(shape).commands) {
      switch (c.op) {
        case 'M':
          current = subpath_start = {c.x, c.y};
          break;
        case 'L': current = {c.x, c.y}; break;
        case 'H': current.x = c.x; break;
        case 'V': current.y = c.y; break;
        case 'Z': current = subpath_start; continue;
      }
      out.push_back(current);
    }
  }
  return out;
}

inline fragments::Rect bounding_box(const SvgShape& shape) {
  const auto pts = vertices(shape);
  if (pts.empty()) return {};
  double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

namespace detail {

using boost::property_tree::ptree;

inline std::string_view local_name(std::string_view tag) {
  const auto colon = tag.find(':');
  return colon == std::string_view::npos ? tag : tag.substr(colon + 1);
}

inline bool is_space_or_comma(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',';
}

inline double number(std::string_view s, const char* what) {
  double v = 0;
  const char* begin = s.data();
  if (!s.empty() && s.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw MalformedSvg(std::string("invalid number '") + std::string(s) + "' in " + what);
  }
  return v;
}

inline std::vector<double> number_list(std::string_view s, const char* what) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space_or_comma(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space_or_comma(s[i])) ++i;
    if (i > start) out.push_back(number(s.substr(start, i - start), what));
  }
  return out;
}

inline double attribute(const ptree& element, const char* name, std::optional<double> fallback) {
  auto v = element.get_optional<std::string>(std::string("<xmlattr>.") + name);
  if (!v) {
    if (fallback) return *fallback;
    throw MalformedSvg(std::string("missing attribute '") + name + "'");
  }
  std::string_view text(*v);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return number(text, name);
}

inline SvgPath parse_path_data(std::string_view d) {
  SvgPath path;
  std::size_t i = 0;
  char op = 0;
  auto skip = [&] {
    while (i < d.size() && is_space_or_comma(d[i])) ++i;
  };
  auto read_number = [&]() -> double {
    skip();
    const std::size_t start = i;
    if (i < d.size() && (d[i] == '-' || d[i] == '+')) ++i;
    while (i < d.size() && (std::isdigit(static_cast<unsigned char>(d[i])) || d[i] == '.' ||
                            d[i] == 'e' || d[i] == 'E' ||
                            ((d[i] == '-' || d[i] == '+') && (d[i - 1] == 'e' || d[i - 1] == 'E')))) {
      ++i;
    }
    if (i == start) throw MalformedSvg("path data: expected a coordinate");
    return number(d.substr(start, i - start), "path data");
  };
  while (true) {
    skip();
    if (i >= d.size()) break;
    const char c = d[i];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      if (c == 'm' || c == 'l' || c == 'h' || c == 'v' || c == 'z') {
        throw UnsupportedSvg(std::string("relative path command '") + c + "'");
      }
      if (c != 'M' && c != 'L' && c != 'H' && c != 'V' && c != 'Z') {
        throw UnsupportedSvg(std::string("path command '") + c + "' is outside the M/L/H/V/Z subset");
      }
      if (path.commands.empty() && c != 'M') throw MalformedSvg("path data must begin with M");
      op = c;
      ++i;
      if (op == 'Z') {
        path.commands.push_back({'Z', 0, 0});
        continue;
      }
    } else if (op == 0 || op == 'Z') {
      throw MalformedSvg("path data: coordinate without a command");
    }
    switch (op) {
      case 'M':
      case 'L': {
        const double x = read_number();
        const double y = read_number();
        path.commands.push_back({op, x, y});
        if (op == 'M') op = 'L';  // further pairs after M are implicit lineto
        break;
      }
      case 'H': path.commands.push_back({'H', read_number(), 0}); break;
      case 'V': path.commands.push_back({'V', 0, read_number()}); break;
    }
  }
  if (path.commands.empty()) throw MalformedSvg("empty path data");
  return path;
}

inline void collect_shapes(const ptree& node, std::vector<SvgShape>& shapes) {
  for (const auto& [tag, child] : node) {
    const auto name = local_name(tag);
    if (tag == "<xmlattr>" || tag == "<xmlcomment>" || name == "title" || name == "desc" ||
        name == "metadata") {
      continue;
    }
    if (name == "rect") {
      SvgRect r{attribute(child, "x", 0.0), attribute(child, "y", 0.0),
                attribute(child, "width", std::nullopt), attribute(child, "height", std::nullopt)};
      if (r.w < 0 || r.h < 0) throw MalformedSvg("rect width and height must be >= 0");
      shapes.emplace_back(r);
    } else if (name == "polygon") {
      const auto values = number_list(child.get<std::string>("<xmlattr>.points", ""), "points");
      if (values.size() % 2 != 0) throw MalformedSvg("polygon points need x,y pairs");
      SvgPolygon poly;
      for (std::size_t k = 0; k < values.size(); k += 2) poly.points.push_back({values[k], values[k + 1]});
      if (poly.points.size() < 3) throw MalformedSvg("polygon needs at least three vertices");
      shapes.emplace_back(std::move(poly));
    } else if (name == "path") {
      auto d = child.get_optional<std::string>("<xmlattr>.d");
      if (!d) throw MalformedSvg("path without d attribute");
      shapes.emplace_back(parse_path_data(*d));
    } else if (name == "g") {
      if (child.get_optional<std::string>("<xmlattr>.transform")) {
        throw UnsupportedSvg("transformed groups are not supported");
      }
      collect_shapes(child, shapes);
    } else {
      throw UnsupportedSvg("element <" + std::string(name) + "> is outside the rect/polygon/path subset");
    }
  }
}

}  // namespace detail

/// Extracts the single shape of an SVG constraint document.
inline SvgRegion parse_svg_constraint(std::string_view payload) {
  detail::ptree doc;
  try {
    std::istringstream in{std::string(payload)};
    boost::property_tree::read_xml(in, doc);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw MalformedSvg(std::string("XML error: ") + e.what());
  }
  const detail::ptree* root = nullptr;
  for (const auto& [tag, child] : doc) {
    if (tag == "<xmlcomment>") continue;
    if (detail::local_name(tag) != "svg" || root) throw MalformedSvg("document root must be <svg>");
    root = &child;
  }
  if (!root) throw MalformedSvg("document root must be <svg>");
  std::vector<SvgShape> shapes;
  detail::collect_shapes(*root, shapes);
  if (shapes.size() != 1) {
    throw UnsupportedSvg("expected exactly one shape element, found " + std::to_string(shapes.size()));
  }
  return SvgRegion{shapes.front(), bounding_box(shapes.front())};
}

/// Standalone SVG document for a shape, in the form parse_svg_constraint reads.
inline std::string svg_document(const SvgShape& shape) {
  using fragments::detail::format_number;
  std::string body;
  if (auto r = std::get_if<SvgRect>(&shape)) {
    body = "<rect x=\"" + format_number(r->x) + "\" y=\"" + format_number(r->y) + "\" width=\"" +
           format_number(r->w) + "\" height=\"" + format_number(r->h) + "\"/>";
  } else if (auto p = std::get_if<SvgPolygon>(&shape)) {
    body = "<polygon points=\"";
    for (std::size_t i = 0; i < p->points.size(); ++i) {
      if (i) body += ' ';
      body += format_number(p->points[i].x) + "," + format_number(p->points[i].y);
    }
    body += "\"/>";
  } else {
    body = "<path d=\"";
    bool first = true;
    for (const auto& c : std::get<SvgPath>(shape).commands) {
      if (!first) body += ' ';
      first = false;
      body += c.op;
      if (c.op == 'M' || c.op == 'L') body += " " + format_number(c.x) + " " + format_number(c.y);
      if (c.op == 'H') body += " " + format_number(c.x);
      if (c.op == 'V') body += " " + format_number(c.y);
    }
    body += "\"/>";
  }
  return "<svg xmlns=\"http://www.w3.org/2000/svg\">" + body + "</svg>";
}

// --- constraint construction ------------------------------------------------------

/// Mints the constrained target that stands for the segment of `full`
/// described by `c`.
inline ConstrainedTarget make_constrained_target(const Iri& full, Constraint c, UuidGenerator& gen) {
  oa::detail::check_constraint(c);
  ConstrainedTarget ct{gen.next(), full, std::move(c)};
  if (ct.uri == ct.constrains) ct.uri = gen.next();
  return ct;
}

inline ConstrainedBody make_constrained_body(const Iri& full, Constraint c, UuidGenerator& gen) {
  return make_constrained_target(full, std::move(c), gen);
}

/// An SVG document published at its own URI (the constraint is the document).
inline Constraint remote_svg_constraint(const Iri& document) {
  return Constraint{document, ConstraintKind::Svg, std::string(kSvgMediaType), document,
                    std::nullopt};
}

/// A time-anchoring constraint used by annotations whose body and targets are
/// considered at different moments.
inline Constraint web_time_constraint(const DateTime& when, UuidGenerator& gen) {
  return Constraint{gen.next(), ConstraintKind::WebTime, std::nullopt, std::monostate{}, when};
}

inline Constraint fragment_to_constraint(const fragments::Spatial& s, UuidGenerator& gen) {
  if (s.unit != fragments::SpatialUnit::Pixel) {
    throw PercentNotConvertible("percent regions need the image dimensions; resolve them first");
  }
  InlineContent content{svg_document(SvgRect{s.x, s.y, s.w, s.h}), "utf-8", ContentKind::Xml};
  return Constraint{gen.next(), ConstraintKind::Svg, std::string(kSvgMediaType),
                    std::move(content), std::nullopt};
}

inline bool looks_like_svg(std::string_view chars) {
  const auto svg = chars.find("<svg");
  if (svg == std::string_view::npos) return false;
  for (std::size_t i = 0; i < svg; ++i) {
    if (!std::isspace(static_cast<unsigned char>(chars[i]))) {
      return chars.substr(i, 5) == "<?xml" || chars.substr(i, 4) == "<!--";
    }
  }
  return true;
}

/// Carries the constraint text inside the annotation document under a fresh
/// urn:uuid. SVG payloads become Svg constraints, anything else Generic.
inline Constraint inline_constraint(InlineContent content, UuidGenerator& gen) {
  const bool svg = looks_like_svg(content.chars);
  return Constraint{gen.next(), svg ? ConstraintKind::Svg : ConstraintKind::Generic,
                    svg ? std::optional<std::string>(std::string(kSvgMediaType)) : std::nullopt,
                    std::move(content), std::nullopt};
}

/// The region of an SVG constraint when its payload is carried inline.
inline std::optional<SvgRegion> inline_region(const Constraint& c) {
  if (c.kind != ConstraintKind::Svg) return std::nullopt;
  auto content = std::get_if<InlineContent>(&c.payload);
  if (!content) return std::nullopt;
  return parse_svg_constraint(content->chars);
}

}  // namespace oa::constraints

#endif  // OA_CONSTRAINTS_HPP
