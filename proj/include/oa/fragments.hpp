#ifndef OA_FRAGMENTS_HPP
#define OA_FRAGMENTS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oa/errors.hpp"
#include "oa/rdf.hpp"

// Fragment URIs for four grammar families:
//   media fragments  (t, xywh, track, id)      images, audio, video
//   RFC 5147         (char=, line=)            plain text
//   RFC 3778         (page=, viewrect=)        PDF
//   named anchors    (#name)                   HTML/XML
namespace oa::fragments {

using rdf::Iri;

enum class SpatialUnit { Pixel, Percent };

struct Rect {
  double x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Spatial {
  SpatialUnit unit = SpatialUnit::Pixel;
  double x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const Spatial&, const Spatial&) = default;
};

// Normal play time, in seconds.
struct Temporal {
  std::optional<double> start;
  std::optional<double> end;
  friend bool operator==(const Temporal&, const Temporal&) = default;
};

struct Track {
  std::string name;
  friend bool operator==(const Track&, const Track&) = default;
};

struct NamedId {
  std::string name;
  friend bool operator==(const NamedId&, const NamedId&) = default;
};

// Integrity checks (`length=`, `md5=`) are kept verbatim and never verified.
struct TextChar {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::string integrity;
  friend bool operator==(const TextChar&, const TextChar&) = default;
};

struct TextLine {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::string integrity;
  friend bool operator==(const TextLine&, const TextLine&) = default;
};

// viewrect is stored as written: left, top, width, height.
struct PdfView {
  std::int64_t page = 1;
  std::optional<Rect> viewrect;
  friend bool operator==(const PdfView&, const PdfView&) = default;
};

struct NamedAnchor {
  std::string name;
  friend bool operator==(const NamedAnchor&, const NamedAnchor&) = default;
};

using FragmentSelector =
    std::variant<Spatial, Temporal, Track, NamedId, TextChar, TextLine, PdfView, NamedAnchor>;

struct FragmentUri {
  Iri base;  // never carries a fragment
  std::vector<FragmentSelector> selectors;
  friend bool operator==(const FragmentUri&, const FragmentUri&) = default;
};

enum class Family { Media, Text, Pdf, Anchor };

inline Family family_of(const FragmentSelector& s) {
  switch (s.index()) {
    case 0:
    case 1:
    case 2:
    case 3: return Family::Media;
    case 4:
    case 5: return Family::Text;
    case 6: return Family::Pdf;
    default: return Family::Anchor;
  }
}

inline const char* selector_kind_name(const FragmentSelector& s) {
  static constexpr const char* kNames[] = {"spatial", "temporal", "track", "id",
                                           "char",    "line",     "pdf",   "anchor"};
  return kNames[s.index()];
}

/// Picks a grammar family from a media type; nullopt when the type does not
/// decide it.
inline std::optional<Family> family_for_media_type(std::string_view media_type) {
  auto starts = [&](std::string_view p) { return media_type.substr(0, p.size()) == p; };
  if (starts("image/") || starts("video/") || starts("audio/")) return Family::Media;
  if (media_type == "text/plain") return Family::Text;
  if (media_type == "application/pdf") return Family::Pdf;
  if (media_type == "text/html" || media_type == "application/xhtml+xml" ||
      media_type == "application/xml" || media_type == "text/xml") {
    return Family::Anchor;
  }
  return std::nullopt;
}

// --- number and name codecs --------------------------------------------------------

namespace detail {

inline std::string format_number(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc{}) throw InvalidSelector("number cannot be rendered");
  return std::string(buf, ptr);
}

inline bool name_safe(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '.' || c == '_' || c == '~' || c == '!' || c == '$' || c == '\'' || c == '(' ||
         c == ')' || c == '*' || c == '+' || c == ':' || c == '@' || c == '/' || c == '?';
}

inline std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (name_safe(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

// Parses one fragment; `origin` is the offset of the fragment within the URI
// so errors point at the original text.
class FragmentParser {
public:
  FragmentParser(std::string_view fragment, std::size_t origin)
      : frag_(fragment), origin_(origin) {}

  std::vector<FragmentSelector> parse(std::optional<Family> hint) {
    const Family family = hint ? *hint : detect();
    switch (family) {
      case Family::Media: return parse_media();
      case Family::Text: return {parse_text()};
      case Family::Pdf: return {parse_pdf()};
      case Family::Anchor: break;
    }
    return {NamedAnchor{decode(frag_, 0)}};
  }

private:
  struct Pair {
    std::string_view name;
    std::string_view value;
    std::size_t name_offset;   // within the fragment
    std::size_t value_offset;
    bool has_equals;
  };

  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    throw FragmentParseError(origin_ + at, what);
  }

  std::vector<Pair> pairs() const {
    std::vector<Pair> out;
    std::size_t start = 0;
    while (start <= frag_.size()) {
      std::size_t end = frag_.find('&', start);
      if (end == std::string_view::npos) end = frag_.size();
      std::string_view item = frag_.substr(start, end - start);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        out.push_back({item, {}, start, start, false});
      } else {
        out.push_back({item.substr(0, eq), item.substr(eq + 1), start, start + eq + 1, true});
      }
      start = end + 1;
    }
    return out;
  }

  Family detect() const {
    static const std::set<std::string_view> kMedia{"t", "xywh", "track", "id"};
    static const std::set<std::string_view> kPdf{"page", "viewrect"};
    static const std::set<std::string_view> kText{"char", "line"};
    std::set<Family> seen;
    bool unknown = false;
    for (const auto& p : pairs()) {
      if (!p.has_equals) unknown = true;
      else if (kMedia.count(p.name)) seen.insert(Family::Media);
      else if (kPdf.count(p.name)) seen.insert(Family::Pdf);
      else if (kText.count(p.name)) seen.insert(Family::Text);
      else unknown = true;
    }
    if (seen.size() > 1) {
      throw AmbiguousFragment("fragment '" + std::string(frag_) +
                              "' mixes keys from several grammars; supply a media type");
    }
    if (seen.empty() || unknown) return Family::Anchor;
    return *seen.begin();
  }

  std::string decode(std::string_view s, std::size_t at) const {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '%') {
        out.push_back(s[i]);
        continue;
      }
      auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
      };
      if (i + 2 >= s.size()) fail(at + i, "truncated percent escape");
      const int hi = hex(s[i + 1]);
      const int lo = hex(s[i + 2]);
      if (hi < 0 || lo < 0) fail(at + i, "invalid percent escape");
      out.push_back(static_cast<char>(hi * 16 + lo));
      i += 2;
    }
    return out;
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  double decimal(std::string_view s, std::size_t at) const {
    std::size_t i = 0;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i == 0) fail(at, "expected a non-negative decimal");
    if (i < s.size() && s[i] == '.') {
      ++i;
      while (i < s.size() && is_digit(s[i])) ++i;
    }
    if (i != s.size()) fail(at + i, "unexpected character in number");
    double v = 0;
    std::string digits(s);
    if (digits.back() == '.') digits.pop_back();
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || !std::isfinite(v)) fail(at, "number out of range");
    return v;
  }

  std::int64_t integer(std::string_view s, std::size_t at) const {
    if (s.empty() || !std::all_of(s.begin(), s.end(), is_digit)) fail(at, "expected an integer");
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{}) fail(at, "integer out of range");
    return v;
  }

  // npt-sec | npt-mmss | npt-hhmmss
  double npt_time(std::string_view s, std::size_t at) const {
    const auto colons = std::count(s.begin(), s.end(), ':');
    if (colons == 0) return decimal(s, at);
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      auto c = s.find(':', start);
      parts.push_back(s.substr(start, c == std::string_view::npos ? c : c - start));
      if (c == std::string_view::npos) break;
      start = c + 1;
    }
    if (parts.size() > 3) fail(at, "too many ':' in time value");
    double hours = 0;
    std::size_t offset = 0;
    if (parts.size() == 3) {
      hours = static_cast<double>(integer(parts[0], at));
      offset = parts[0].size() + 1;
    }
    const auto& mm = parts[parts.size() - 2];
    const auto& ss = parts[parts.size() - 1];
    if (mm.size() != 2) fail(at + offset, "minutes must have two digits");
    const auto minutes = integer(mm, at + offset);
    const std::size_t ss_at = at + offset + 3;
    if (ss.size() < 2 || !is_digit(ss[0]) || !is_digit(ss[1]) || (ss.size() > 2 && ss[2] != '.')) {
      fail(ss_at, "seconds must have two digits");
    }
    const double seconds = decimal(ss, ss_at);
    if (minutes > 59 || seconds >= 60) fail(at, "minutes/seconds out of range");
    return hours * 3600 + static_cast<double>(minutes) * 60 + seconds;
  }

  Temporal temporal(std::string_view v, std::size_t at) const {
    if (v.substr(0, 4) == "npt:") {
      v.remove_prefix(4);
      at += 4;
    } else if (auto colon = v.find(':');
               colon != std::string_view::npos && v.find(',') > colon &&
               !std::all_of(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(colon), is_digit)) {
      fail(at, "unsupported time scheme '" + std::string(v.substr(0, colon)) + "'");
    }
    Temporal t;
    const auto comma = v.find(',');
    std::string_view first = v.substr(0, comma);
    if (!first.empty()) t.start = npt_time(first, at);
    if (comma != std::string_view::npos) {
      std::string_view second = v.substr(comma + 1);
      if (second.empty()) fail(at + comma + 1, "missing end time after ','");
      t.end = npt_time(second, at + comma + 1);
    }
    if (!t.start && !t.end) fail(at, "temporal fragment needs a start or an end");
    if (t.start && t.end && !(*t.start < *t.end)) fail(at, "start must be before end");
    return t;
  }

  std::vector<double> numbers(std::string_view v, std::size_t at, std::size_t count) const {
    std::vector<double> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < count; ++i) {
      auto comma = v.find(',', start);
      if ((comma == std::string_view::npos) != (i + 1 == count)) {
        fail(at + start, "expected " + std::to_string(count) + " comma-separated numbers");
      }
      out.push_back(decimal(v.substr(start, comma - start), at + start));
      start = comma + 1;
    }
    return out;
  }

  Spatial spatial(std::string_view v, std::size_t at) const {
    Spatial s;
    if (v.substr(0, 6) == "pixel:") {
      v.remove_prefix(6);
      at += 6;
    } else if (v.substr(0, 8) == "percent:") {
      s.unit = SpatialUnit::Percent;
      v.remove_prefix(8);
      at += 8;
    }
    const auto n = numbers(v, at, 4);
    s.x = n[0];
    s.y = n[1];
    s.w = n[2];
    s.h = n[3];
    if (s.unit == SpatialUnit::Percent &&
        std::any_of(n.begin(), n.end(), [](double d) { return d > 100; })) {
      fail(at, "percent values must not exceed 100");
    }
    return s;
  }

  std::vector<FragmentSelector> parse_media() const {
    std::optional<Temporal> t;
    std::optional<Spatial> xywh;
    std::optional<Track> track;
    std::optional<NamedId> id;
    for (const auto& p : pairs()) {
      if (!p.has_equals) fail(p.name_offset, "expected name=value");
      const std::string name = decode(p.name, p.name_offset);
      const std::size_t at = p.value_offset;
      auto once = [&](bool present) {
        if (present) fail(at, "dimension '" + name + "' given twice");
      };
      if (name == "t") {
        once(t.has_value());
        t = temporal(decode(p.value, at), at);
      } else if (name == "xywh") {
        once(xywh.has_value());
        xywh = spatial(decode(p.value, at), at);
      } else if (name == "track") {
        once(track.has_value());
        track = Track{decode(p.value, at)};
        if (track->name.empty()) fail(at, "empty track name");
      } else if (name == "id") {
        once(id.has_value());
        id = NamedId{decode(p.value, at)};
        if (id->name.empty()) fail(at, "empty id name");
      } else {
        fail(at, "unknown media fragment dimension '" + name + "'");
      }
    }
    std::vector<FragmentSelector> out;
    if (t) out.emplace_back(*t);
    if (xywh) out.emplace_back(*xywh);
    if (track) out.emplace_back(*track);
    if (id) out.emplace_back(*id);
    return out;
  }

  FragmentSelector parse_text() const {
    const auto semi = frag_.find(';');
    std::string_view scheme = frag_.substr(0, semi);
    std::string integrity(semi == std::string_view::npos ? std::string_view{}
                                                         : frag_.substr(semi + 1));
    const auto eq = scheme.find('=');
    if (eq == std::string_view::npos) fail(0, "expected char= or line=");
    std::string_view name = scheme.substr(0, eq);
    if (name != "char" && name != "line") fail(0, "expected char= or line=");
    std::string_view v = scheme.substr(eq + 1);
    const std::size_t at = eq + 1;
    std::int64_t start = 0, end = 0;
    const auto comma = v.find(',');
    if (comma == std::string_view::npos) {
      start = end = integer(v, at);
    } else {
      if (comma + 1 == v.size()) fail(at + comma + 1, "open-ended ranges need the resource length");
      start = comma == 0 ? 0 : integer(v.substr(0, comma), at);
      end = integer(v.substr(comma + 1), at + comma + 1);
    }
    if (end < start) fail(at, "range end precedes start");
    if (name == "char") return TextChar{start, end, integrity};
    return TextLine{start, end, integrity};
  }

  FragmentSelector parse_pdf() const {
    std::optional<std::int64_t> page;
    std::optional<Rect> rect;
    for (const auto& p : pairs()) {
      const std::size_t at = p.value_offset;
      if (!p.has_equals) fail(at, "expected name=value");
      if (p.name == "page") {
        if (page) fail(at, "page given twice");
        page = integer(p.value, at);
        if (*page < 1) fail(at, "page numbers start at 1");
      } else if (p.name == "viewrect") {
        if (rect) fail(at, "viewrect given twice");
        const auto n = numbers(p.value, at, 4);
        rect = Rect{n[0], n[1], n[2], n[3]};
      } else {
        fail(at, "unsupported PDF open parameter '" + std::string(p.name) + "'");
      }
    }
    if (!page) fail(0, "PDF fragment needs page=");
    return PdfView{*page, rect};
  }

  std::string_view frag_;
  std::size_t origin_;
};

// Canonical output order: t before xywh, then track, id; other families are single.
inline int dimension_rank(const FragmentSelector& s) {
  if (s.index() == 0) return 1;
  if (s.index() == 1) return 0;
  return static_cast<int>(s.index());
}

}  // namespace detail

/// Validates the invariants of a fragment URI; throws InvalidSelector.
inline void check(const FragmentUri& f) {
  if (f.base.has_fragment()) throw InvalidSelector("base IRI must not carry a fragment");
  std::set<std::size_t> dims;
  std::set<Family> families;
  for (const auto& s : f.selectors) {
    if (!dims.insert(s.index()).second) throw InvalidSelector("one selector per dimension");
    families.insert(family_of(s));
    if (auto sp = std::get_if<Spatial>(&s)) {
      for (double v : {sp->x, sp->y, sp->w, sp->h}) {
        if (!(v >= 0) || !std::isfinite(v)) throw InvalidSelector("spatial values must be >= 0");
        if (sp->unit == SpatialUnit::Percent && v > 100) {
          throw InvalidSelector("percent values must not exceed 100");
        }
      }
    } else if (auto t = std::get_if<Temporal>(&s)) {
      if (!t->start && !t->end) throw InvalidSelector("temporal selector needs start or end");
      if (t->start && !(*t->start >= 0)) throw InvalidSelector("start must be >= 0");
      if (t->end && !(*t->end >= 0)) throw InvalidSelector("end must be >= 0");
      if (t->start && t->end && !(*t->start < *t->end)) {
        throw InvalidSelector("start must be before end");
      }
    } else if (auto c = std::get_if<TextChar>(&s)) {
      if (c->start < 0 || c->end < c->start) throw InvalidSelector("bad char range");
    } else if (auto l = std::get_if<TextLine>(&s)) {
      if (l->start < 0 || l->end < l->start) throw InvalidSelector("bad line range");
    } else if (auto p = std::get_if<PdfView>(&s)) {
      if (p->page < 1) throw InvalidSelector("page numbers start at 1");
    } else if (auto a = std::get_if<NamedAnchor>(&s); a && a->name.empty()) {
      throw InvalidSelector("empty anchor name");
    }
  }
  if (families.size() > 1) throw InvalidSelector("selectors from different grammar families");
  if (families.size() == 1 && *families.begin() != Family::Media && f.selectors.size() > 1) {
    throw InvalidSelector("only media fragments combine several dimensions");
  }
}

/// Splits `uri` at '#' and decodes the fragment. A media type hint selects the
/// grammar outright; otherwise media fragments, RFC 5147, PDF and named anchors
/// are tried in that order of specificity.
inline FragmentUri parse_fragment(const Iri& uri, std::optional<std::string_view> media_hint = {}) {
  const auto& text = uri.str();
  const auto hash = text.find('#');
  FragmentUri out{uri.without_fragment(), {}};
  if (hash == std::string::npos || hash + 1 == text.size()) return out;
  std::optional<Family> hint;
  if (media_hint) hint = family_for_media_type(*media_hint);
  out.selectors =
      detail::FragmentParser(std::string_view(text).substr(hash + 1), hash + 1).parse(hint);
  return out;
}

/// The canonical fragment text (without '#').
inline std::string format_fragment(const std::vector<FragmentSelector>& selectors) {
  using detail::format_number;
  auto ordered = selectors;
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return detail::dimension_rank(a) < detail::dimension_rank(b);
  });
  std::string out;
  for (const auto& s : ordered) {
    if (!out.empty()) out += '&';
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, Temporal>) {
            out += "t=npt:";
            if (v.start) out += format_number(*v.start);
            if (v.end) out += "," + format_number(*v.end);
          } else if constexpr (std::is_same_v<V, Spatial>) {
            out += "xywh=";
            if (v.unit == SpatialUnit::Percent) out += "percent:";
            out += format_number(v.x) + "," + format_number(v.y) + "," + format_number(v.w) + "," +
                   format_number(v.h);
          } else if constexpr (std::is_same_v<V, Track>) {
            out += "track=" + detail::percent_encode(v.name);
          } else if constexpr (std::is_same_v<V, NamedId>) {
            out += "id=" + detail::percent_encode(v.name);
          } else if constexpr (std::is_same_v<V, TextChar> || std::is_same_v<V, TextLine>) {
            out += std::is_same_v<V, TextChar> ? "char=" : "line=";
            out += std::to_string(v.start);
            if (v.end != v.start) out += "," + std::to_string(v.end);
            if (!v.integrity.empty()) out += ";" + v.integrity;
          } else if constexpr (std::is_same_v<V, PdfView>) {
            out += "page=" + std::to_string(v.page);
            if (v.viewrect) {
              out += "&viewrect=" + format_number(v.viewrect->x) + "," +
                     format_number(v.viewrect->y) + "," + format_number(v.viewrect->w) + "," +
                     format_number(v.viewrect->h);
            }
          } else {
            out += detail::percent_encode(v.name);
          }
        },
        s);
  }
  return out;
}

inline Iri serialize_fragment(const FragmentUri& f) {
  if (f.selectors.empty()) return f.base;
  return Iri(f.base.str() + "#" + format_fragment(f.selectors));
}

inline std::optional<std::string_view> media_type_of(Family f) {
  switch (f) {
    case Family::Media: return "video/mp4";
    case Family::Text: return "text/plain";
    case Family::Pdf: return "application/pdf";
    case Family::Anchor: return "text/html";
  }
  return std::nullopt;
}

/// Numeric normalization by a trip through the canonical text form; idempotent.
inline FragmentSelector canonicalize(const FragmentSelector& s) {
  static const Iri kBase("urn:x-canonical:s");
  const Iri uri(kBase.str() + "#" + format_fragment({s}));
  auto parsed = parse_fragment(uri, media_type_of(family_of(s))).selectors;
  if (parsed.size() != 1) throw InvalidSelector("selector does not survive canonicalization");
  return parsed.front();
}

// --- evaluation ----------------------------------------------------------------------

/// Resolves a spatial selector to pixels on a width x height image, clipped
/// to the image bounds. Zero-area results are allowed.
inline Rect spatial_region(const Spatial& s, double width, double height) {
  if (!(width > 0) || !(height > 0)) throw InvalidSelector("image dimensions must be positive");
  Rect r{s.x, s.y, s.w, s.h};
  if (s.unit == SpatialUnit::Percent) {
    r = Rect{s.x * width / 100, s.y * height / 100, s.w * width / 100, s.h * height / 100};
  }
  const double x0 = std::min(r.x, width);
  const double y0 = std::min(r.y, height);
  const double x1 = std::min(r.x + r.w, width);
  const double y1 = std::min(r.y + r.h, height);
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

struct Interval {
  double start = 0;
  double end = 0;  // exclusive
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Half-open playback interval of a temporal selector within [0, duration).
inline Interval temporal_interval(const Temporal& s, double duration) {
  if (!(duration > 0)) throw InvalidSelector("duration must be positive");
  const double start = s.start.value_or(0);
  const double end = std::min(s.end.value_or(duration), duration);
  if (start >= duration) throw EmptyInterval("interval starts at or after the end of the media");
  return Interval{start, end};
}

struct OverlapContext {
  std::optional<double> width;
  std::optional<double> height;
  std::optional<double> duration;
};

namespace detail {

inline bool rects_overlap(const Rect& a, const Rect& b) {
  const double w = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double h = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  return w > 0 && h > 0;
}

template <typename Range>
bool ranges_overlap(const Range& a, const Range& b) {
  return std::max(a.start, b.start) < std::min(a.end, b.end);
}

}  // namespace detail

/// True iff both selectors pick out a common part of positive measure.
/// Named selectors compare by name.
inline bool selectors_overlap(const FragmentSelector& a, const FragmentSelector& b,
                              const OverlapContext& ctx = {}) {
  if (a.index() != b.index()) {
    throw FamilyMismatch(std::string("cannot compare ") + selector_kind_name(a) + " with " +
                         selector_kind_name(b));
  }
  return std::visit(
      [&](const auto& x) -> bool {
        using V = std::decay_t<decltype(x)>;
        const auto& y = std::get<V>(b);
        if constexpr (std::is_same_v<V, Spatial>) {
          if (ctx.width && ctx.height) {
            return detail::rects_overlap(spatial_region(x, *ctx.width, *ctx.height),
                                         spatial_region(y, *ctx.width, *ctx.height));
          }
          if (x.unit != y.unit) {
            throw InvalidSelector("mixed pixel/percent comparison needs image dimensions");
          }
          return detail::rects_overlap(Rect{x.x, x.y, x.w, x.h}, Rect{y.x, y.y, y.w, y.h});
        } else if constexpr (std::is_same_v<V, Temporal>) {
          const double inf = std::numeric_limits<double>::infinity();
          const double limit = ctx.duration.value_or(inf);
          const Interval ix{x.start.value_or(0), std::min(x.end.value_or(inf), limit)};
          const Interval iy{y.start.value_or(0), std::min(y.end.value_or(inf), limit)};
          return detail::ranges_overlap(ix, iy);
        } else if constexpr (std::is_same_v<V, TextChar> || std::is_same_v<V, TextLine>) {
          return detail::ranges_overlap(x, y);
        } else if constexpr (std::is_same_v<V, PdfView>) {
          if (x.page != y.page) return false;
          if (!x.viewrect || !y.viewrect) return true;
          return detail::rects_overlap(*x.viewrect, *y.viewrect);
        } else {
          return x.name == y.name;
        }
      },
      a);
}

}  // namespace oa::fragments

#endif  // OA_FRAGMENTS_HPP
