#ifndef OA_CLI_HPP
#define OA_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oa/constraints.hpp"
#include "oa/errors.hpp"
#include "oa/fragments.hpp"
#include "oa/model.hpp"
#include "oa/rdf.hpp"
#include "oa/server.hpp"
#include "oa/temporal.hpp"
#include "oa/uuid.hpp"
#include "oa/validation.hpp"

// oatool: validate, convert, frag, new, temporal and serve.
//
// Exit status: 0 success, 1 the input or the built annotation has Error
// findings, 2 usage errors, unreadable or unparsable input.
namespace oa::cli {

inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;
inline constexpr int kUsage = 2;

namespace detail {

using json = nlohmann::ordered_json;

// Raised inside a subcommand to stop with a diagnostic and an exit status.
struct Exit {
  int code;
  std::string message;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool json = false;
};

inline std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Exit{kUsage, "cannot read " + path};
  buf << file.rdbuf();
  return buf.str();
}

inline rdf::Graph read_graph(const std::string& path, std::istream& in) {
  const std::string text = read_input(path, in);
  try {
    return rdf::parse_ntriples(text);
  } catch (const ParseError& e) {
    throw Exit{kUsage, (path == "-" ? std::string("<stdin>") : path) + ":" + e.what()};
  } catch (const InvalidIri& e) {
    throw Exit{kUsage, path + ": " + e.what()};
  }
}

inline Iri parse_iri(const std::string& text, const char* what) {
  try {
    return Iri(text);
  } catch (const InvalidIri& e) {
    throw Exit{kUsage, std::string(what) + ": " + e.what()};
  }
}

// ISO 8601 first, then the HTTP date form.
inline DateTime parse_datetime(const std::string& text, const char* what) {
  try {
    return DateTime::parse_iso8601(text);
  } catch (const InvalidDateTime&) {
  }
  try {
    return DateTime::parse_rfc1123(text);
  } catch (const InvalidDateTime& e) {
    throw Exit{kUsage, std::string(what) + ": " + e.what()};
  }
}

inline std::string number(double v) { return fragments::detail::format_number(v); }

inline std::string describe_selector(const fragments::FragmentSelector& s) {
  using namespace fragments;
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Spatial>) {
          return std::string("spatial ") + (v.unit == SpatialUnit::Pixel ? "pixel " : "percent ") +
                 number(v.x) + " " + number(v.y) + " " + number(v.w) + " " + number(v.h);
        } else if constexpr (std::is_same_v<V, Temporal>) {
          return "temporal npt " + (v.start ? number(*v.start) : "-") + " " +
                 (v.end ? number(*v.end) : "-");
        } else if constexpr (std::is_same_v<V, Track>) {
          return "track " + v.name;
        } else if constexpr (std::is_same_v<V, NamedId>) {
          return "id " + v.name;
        } else if constexpr (std::is_same_v<V, TextChar> || std::is_same_v<V, TextLine>) {
          std::string out = std::is_same_v<V, TextChar> ? "char " : "line ";
          out += std::to_string(v.start) + " " + std::to_string(v.end);
          if (!v.integrity.empty()) out += " " + v.integrity;
          return out;
        } else if constexpr (std::is_same_v<V, PdfView>) {
          std::string out = "pdf page " + std::to_string(v.page);
          if (v.viewrect) {
            out += " viewrect " + number(v.viewrect->x) + " " + number(v.viewrect->y) + " " +
                   number(v.viewrect->w) + " " + number(v.viewrect->h);
          }
          return out;
        } else {
          return "anchor " + v.name;
        }
      },
      s);
}

inline json selector_json(const fragments::FragmentSelector& s) {
  using namespace fragments;
  json j{{"kind", selector_kind_name(s)}};
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Spatial>) {
          j["unit"] = v.unit == SpatialUnit::Pixel ? "pixel" : "percent";
          j["x"] = v.x;
          j["y"] = v.y;
          j["w"] = v.w;
          j["h"] = v.h;
        } else if constexpr (std::is_same_v<V, Temporal>) {
          j["start"] = v.start ? json(*v.start) : json(nullptr);
          j["end"] = v.end ? json(*v.end) : json(nullptr);
        } else if constexpr (std::is_same_v<V, TextChar> || std::is_same_v<V, TextLine>) {
          j["start"] = v.start;
          j["end"] = v.end;
          if (!v.integrity.empty()) j["integrity"] = v.integrity;
        } else if constexpr (std::is_same_v<V, PdfView>) {
          j["page"] = v.page;
          if (v.viewrect) {
            j["viewrect"] = {v.viewrect->x, v.viewrect->y, v.viewrect->w, v.viewrect->h};
          }
        } else {
          j["name"] = v.name;
        }
      },
      s);
  return j;
}

inline fragments::FragmentUri parse_fragment_arg(const std::string& text,
                                                 const std::optional<std::string>& media_type) {
  const Iri uri = parse_iri(text, "uri");
  try {
    if (media_type) return fragments::parse_fragment(uri, std::string_view(*media_type));
    return fragments::parse_fragment(uri);
  } catch (const Error& e) {
    throw Exit{kUsage, text + ": " + e.what()};
  }
}

inline std::string serialize(const rdf::Graph& g, const std::string& format) {
  if (format == "turtle") return rdf::serialize_turtle(g);
  try {
    return rdf::serialize_ntriples_canonical(g);
  } catch (const BlankNodeNotAllowed& e) {
    throw Exit{kUsage, std::string(e.what()) + " (use --to turtle for graphs with blank nodes)"};
  }
}

// --- validate ---------------------------------------------------------------------

struct ValidateArgs {
  std::string path;
  std::string format = "text";
};

inline int cmd_validate(const ValidateArgs& a, Io& io) {
  const auto report = validation::validate(read_graph(a.path, io.in));
  const auto errors = report.count(validation::Severity::Error);
  const auto warnings = report.count(validation::Severity::Warning);
  if (io.json || a.format == "json") {
    json doc{{"checked", report.checked_annotations},
             {"errors", errors},
             {"warnings", warnings},
             {"findings", report.to_json()}};
    io.out << doc.dump(2) << "\n";
  } else {
    io.out << report.to_text() << report.checked_annotations << " annotation(s) checked, "
           << errors << " error(s), " << warnings << " warning(s)\n";
  }
  return report.has_errors() ? kFindings : kOk;
}

// --- convert ------------------------------------------------------------------------

struct ConvertArgs {
  std::string path;
  std::string to = "ntriples";
};

inline int cmd_convert(const ConvertArgs& a, Io& io) {
  const std::string text = serialize(read_graph(a.path, io.in), a.to);
  if (io.json) {
    io.out << json{{"format", a.to}, {"document", text}}.dump(2) << "\n";
  } else {
    io.out << text;
  }
  return kOk;
}

// --- frag ----------------------------------------------------------------------------

struct FragParseArgs {
  std::string uri;
  std::optional<std::string> media_type;
};

inline int cmd_frag_parse(const FragParseArgs& a, Io& io) {
  const auto f = parse_fragment_arg(a.uri, a.media_type);
  if (io.json) {
    json doc{{"base", f.base.str()}, {"selectors", json::array()}};
    for (const auto& s : f.selectors) doc["selectors"].push_back(selector_json(s));
    io.out << doc.dump(2) << "\n";
    return kOk;
  }
  if (f.selectors.empty()) io.out << "whole " << f.base.str() << "\n";
  for (const auto& s : f.selectors) io.out << describe_selector(s) << "\n";
  return kOk;
}

struct FragMakeArgs {
  std::string base;
  std::optional<std::string> xywh, t, track, id, chars, lines, page, viewrect, anchor;
  bool percent = false;
};

inline int cmd_frag_make(const FragMakeArgs& a, Io& io) {
  const Iri base = parse_iri(a.base, "base");
  if (base.has_fragment()) throw Exit{kUsage, "base must not carry a fragment"};

  // Assemble the raw fragment and let the grammar check it.
  std::vector<std::string> parts;
  std::optional<std::string> media;
  auto add = [&](const std::optional<std::string>& v, const std::string& key, const char* type) {
    if (!v) return;
    parts.push_back(key + "=" + *v);
    media = type;
  };
  if (a.xywh) {
    parts.push_back("xywh=" + std::string(a.percent ? "percent:" : "") + *a.xywh);
    media = "video/mp4";
  }
  add(a.t, "t", "video/mp4");
  add(a.track, "track", "video/mp4");
  add(a.id, "id", "video/mp4");
  add(a.chars, "char", "text/plain");
  add(a.lines, "line", "text/plain");
  add(a.page, "page", "application/pdf");
  add(a.viewrect, "viewrect", "application/pdf");
  if (a.anchor) {
    parts.push_back(fragments::detail::percent_encode(*a.anchor));
    media = "text/html";
  }
  if (parts.empty()) throw Exit{kUsage, "give at least one selector flag"};
  if (a.anchor && parts.size() > 1) throw Exit{kUsage, "--anchor cannot be combined"};

  std::string fragment;
  for (const auto& p : parts) fragment += (fragment.empty() ? "" : "&") + p;
  std::optional<fragments::FragmentUri> f;
  try {
    f = fragments::parse_fragment(Iri(base.str() + "#" + fragment),
                                  a.anchor ? std::optional<std::string_view>(*media)
                                           : std::optional<std::string_view>());
    fragments::check(*f);
  } catch (const Error& e) {
    throw Exit{kUsage, "#" + fragment + ": " + e.what()};
  }
  const std::string uri = fragments::serialize_fragment(*f).str();
  if (io.json) {
    io.out << json{{"uri", uri}}.dump(2) << "\n";
  } else {
    io.out << uri << "\n";
  }
  return kOk;
}

struct FragOverlapArgs {
  std::string a, b;
  std::optional<std::string> media_type;
  std::optional<double> width, height, duration;
};

// True when the two URIs share at least one dimension and every shared
// dimension overlaps.
inline int cmd_frag_overlap(const FragOverlapArgs& a, Io& io) {
  const auto fa = parse_fragment_arg(a.a, a.media_type);
  const auto fb = parse_fragment_arg(a.b, a.media_type);
  if (fa.selectors.empty() || fb.selectors.empty()) {
    throw Exit{kUsage, "both URIs need a fragment"};
  }
  const fragments::OverlapContext ctx{a.width, a.height, a.duration};
  bool shared = false;
  bool overlap = true;
  try {
    for (const auto& x : fa.selectors) {
      for (const auto& y : fb.selectors) {
        if (x.index() != y.index()) continue;
        shared = true;
        overlap = fragments::selectors_overlap(x, y, ctx) && overlap;
      }
    }
  } catch (const Error& e) {
    throw Exit{kUsage, e.what()};
  }
  if (!shared) {
    throw Exit{kUsage, "the fragments share no dimension (" +
                           std::string(fragments::selector_kind_name(fa.selectors.front())) +
                           " vs " + fragments::selector_kind_name(fb.selectors.front()) + ")"};
  }
  if (fa.base != fb.base) overlap = false;
  if (io.json) {
    io.out << json{{"overlap", overlap}}.dump(2) << "\n";
  } else {
    io.out << (overlap ? "true" : "false") << "\n";
  }
  return kOk;
}

// --- new --------------------------------------------------------------------------------

struct NewArgs {
  std::optional<std::string> uri;
  std::optional<std::string> body;
  std::optional<std::string> inline_body;
  std::vector<std::string> targets;
  std::optional<std::string> created, creator, title, when;
  std::optional<std::string> http_base;
  std::optional<std::uint64_t> seed;
  std::string to = "ntriples";
};

inline int cmd_new(const NewArgs& a, Io& io) {
  if (a.targets.empty()) throw Exit{kUsage, "at least one --target is required"};
  if (a.body && a.inline_body) throw Exit{kUsage, "--body and --inline-body are exclusive"};
  UuidGenerator gen = a.seed ? UuidGenerator(*a.seed) : UuidGenerator::from_entropy();

  const Iri uri = a.uri ? parse_iri(*a.uri, "--uri") : gen.next();
  std::optional<BodyRef> body;
  if (a.body) body = BodyRef::remote(parse_iri(*a.body, "--body"));
  if (a.inline_body) body = BodyRef::inline_content(InlineContent{*a.inline_body}, gen.next());
  std::vector<TargetRef> targets;
  for (const auto& t : a.targets) targets.push_back(TargetRef::segment(parse_iri(t, "--target")));

  AnnotationMeta meta;
  if (a.created) meta.created = parse_datetime(*a.created, "--created");
  if (a.creator) meta.creator = parse_iri(*a.creator, "--creator");
  if (a.title) meta.title = *a.title;
  if (a.when) meta.when = parse_datetime(*a.when, "--when");

  std::optional<Annotation> built;
  try {
    built = build_annotation(uri, std::move(body), std::move(targets), std::move(meta));
    if (a.http_base) built = assign_http_equivalence(std::move(*built), parse_iri(*a.http_base, "--http-base"));
  } catch (const Exit&) {
    throw;
  } catch (const Error& e) {
    throw Exit{kUsage, e.what()};
  }
  const Annotation& ann = *built;

  const auto report = validation::validate_annotation(ann);
  io.err << report.to_text();
  if (report.has_errors()) return kFindings;
  const std::string text = serialize(to_graph(ann), a.to);
  if (io.json) {
    io.out << json{{"uri", ann.uri.str()}, {"format", a.to}, {"document", text}}.dump(2) << "\n";
  } else {
    io.out << text;
  }
  return kOk;
}

// --- temporal ------------------------------------------------------------------------------

inline Annotation pick_annotation(const rdf::Graph& g, const std::optional<std::string>& uri) {
  Iri chosen("urn:x:none");
  if (uri) {
    chosen = parse_iri(*uri, "--uri");
  } else {
    const auto nodes = annotation_nodes(g);
    if (nodes.empty()) throw Exit{kUsage, "no oac:Annotation in the input"};
    if (nodes.size() > 1) {
      std::string list;
      for (const auto& n : nodes) list += "\n  " + n.str();
      throw Exit{kUsage, "several annotations; pick one with --uri:" + list};
    }
    chosen = nodes.front();
  }
  try {
    return from_graph(g, chosen);
  } catch (const Error& e) {
    throw Exit{kUsage, e.what()};
  }
}

struct ClassifyArgs {
  std::string path;
  std::optional<std::string> uri;
};

inline int cmd_temporal_classify(const ClassifyArgs& a, Io& io) {
  const Annotation ann = pick_annotation(read_graph(a.path, io.in), a.uri);
  temporal::TemporalClass cls;
  try {
    cls = temporal::classify(ann);
  } catch (const ConflictingTemporalMarks& e) {
    throw Exit{kFindings, std::string("E201 ") + e.what()};
  }
  if (io.json) {
    json doc{{"uri", ann.uri.str()}};
    if (std::holds_alternative<temporal::Timeless>(cls)) {
      doc["class"] = "Timeless";
    } else if (auto u = std::get_if<temporal::UniformTime>(&cls)) {
      doc["class"] = "UniformTime";
      doc["when"] = u->when.iso8601();
    } else {
      doc["class"] = "VariedTime";
      json marks = json::array();
      for (const auto& [key, when] : std::get<temporal::VariedTime>(cls).marks) {
        marks.push_back({{"role", key.role == temporal::Role::Body ? "body" : "target"},
                         {"index", key.index},
                         {"when", when.iso8601()}});
      }
      doc["marks"] = std::move(marks);
    }
    io.out << doc.dump(2) << "\n";
  } else {
    io.out << temporal::describe(cls) << "\n";
  }
  return kOk;
}

inline temporal::ArchiveIndex load_index(const std::string& path, std::istream& in) {
  try {
    return temporal::ArchiveIndex::from_json(read_input(path, in));
  } catch (const InvalidArchiveIndex& e) {
    throw Exit{kUsage, path + ": " + e.what()};
  }
}

struct ResolveArgs {
  std::string original;
  std::string index;
  std::string at;
};

inline int cmd_temporal_resolve(const ResolveArgs& a, Io& io) {
  const auto idx = load_index(a.index, io.in);
  const Iri original = parse_iri(a.original, "original");
  const DateTime at = parse_datetime(a.at, "--at");
  temporal::Memento m{at, original};
  try {
    m = temporal::resolve_memento(idx, original, at);
  } catch (const UnknownOriginal& e) {
    throw Exit{kUsage, e.what()};
  }
  if (io.json) {
    io.out << json{{"original", original.str()},
                   {"at", at.iso8601()},
                   {"snapshot", m.snapshot.str()},
                   {"datetime", m.datetime.iso8601()}}
                  .dump(2)
           << "\n";
  } else {
    io.out << m.snapshot.str() << "\n";
  }
  return kOk;
}

struct ReconstructArgs {
  std::string path;
  std::string index;
  std::optional<std::string> uri;
  std::string to = "ntriples";
};

inline int cmd_temporal_reconstruct(const ReconstructArgs& a, Io& io) {
  const auto idx = load_index(a.index, io.in);
  const Annotation ann = pick_annotation(read_graph(a.path, io.in), a.uri);
  std::optional<Annotation> rebuilt;
  try {
    rebuilt = temporal::reconstruct(ann, idx);
  } catch (const ConflictingTemporalMarks& e) {
    throw Exit{kFindings, std::string("E201 ") + e.what()};
  } catch (const Error& e) {
    throw Exit{kUsage, e.what()};
  }
  const Annotation& out = *rebuilt;
  const std::string text = serialize(to_graph(out), a.to);
  if (io.json) {
    io.out << json{{"uri", out.uri.str()}, {"format", a.to}, {"document", text}}.dump(2) << "\n";
  } else {
    io.out << text;
  }
  return kOk;
}

// --- serve -------------------------------------------------------------------------------------

inline int cmd_serve(const std::string& config_path, Io& io) {
  try {
    server::serve(server::Config::load(config_path), io.err);
  } catch (const ConfigError& e) {
    throw Exit{kUsage, e.what()};
  } catch (const InvalidArchiveIndex& e) {
    throw Exit{kUsage, e.what()};
  }
  return kOk;
}

}  // namespace detail

/// Runs oatool with `args` (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  using namespace detail;
  CLI::App app{"Open Annotation toolkit", "oatool"};
  app.require_subcommand(1);
  Io io{in, out, err};
  app.add_flag("--json", io.json, "Machine-readable output");

  std::function<int()> action;

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Report finding codes for every annotation in a graph");
  v->add_option("path", validate.path, "N-Triples file, or - for stdin")->required();
  v->add_option("--format", validate.format)->check(CLI::IsMember({"text", "json"}));
  v->callback([&] { action = [&] { return cmd_validate(validate, io); }; });

  ConvertArgs convert;
  auto* c = app.add_subcommand("convert", "Re-serialize an N-Triples graph");
  c->add_option("path", convert.path, "N-Triples file, or - for stdin")->required();
  c->add_option("--to", convert.to)->check(CLI::IsMember({"ntriples", "turtle"}));
  c->callback([&] { action = [&] { return cmd_convert(convert, io); }; });

  auto* frag = app.add_subcommand("frag", "Fragment URI tooling");
  frag->require_subcommand(1);
  FragParseArgs fparse;
  auto* fp = frag->add_subcommand("parse", "Show the selectors of a fragment URI");
  fp->add_option("uri", fparse.uri)->required();
  fp->add_option("--media-type", fparse.media_type, "Pick the grammar by media type");
  fp->callback([&] { action = [&] { return cmd_frag_parse(fparse, io); }; });

  FragMakeArgs fmake;
  auto* fm = frag->add_subcommand("make", "Build a canonical fragment URI");
  fm->add_option("base", fmake.base)->required();
  fm->add_option("--xywh", fmake.xywh, "x,y,w,h");
  fm->add_flag("--percent", fmake.percent, "xywh in percent");
  fm->add_option("--t", fmake.t, "start,end in seconds (npt)");
  fm->add_option("--track", fmake.track);
  fm->add_option("--id", fmake.id);
  fm->add_option("--char", fmake.chars, "start[,end]");
  fm->add_option("--line", fmake.lines, "start[,end]");
  fm->add_option("--page", fmake.page);
  fm->add_option("--viewrect", fmake.viewrect, "left,top,width,height");
  fm->add_option("--anchor", fmake.anchor);
  fm->callback([&] { action = [&] { return cmd_frag_make(fmake, io); }; });

  FragOverlapArgs foverlap;
  auto* fo = frag->add_subcommand("overlap", "Do two fragment URIs overlap?");
  fo->add_option("a", foverlap.a)->required();
  fo->add_option("b", foverlap.b)->required();
  fo->add_option("--media-type", foverlap.media_type);
  fo->add_option("--width", foverlap.width);
  fo->add_option("--height", foverlap.height);
  fo->add_option("--duration", foverlap.duration);
  fo->callback([&] { action = [&] { return cmd_frag_overlap(foverlap, io); }; });

  NewArgs mint;
  auto* n = app.add_subcommand("new", "Build an annotation graph");
  n->add_option("--uri", mint.uri, "Annotation IRI (default: a minted urn:uuid)");
  n->add_option("--body", mint.body, "Remote body IRI");
  n->add_option("--inline-body", mint.inline_body, "Body text carried inline");
  n->add_option("--target", mint.targets, "Target IRI, repeatable");
  n->add_option("--created", mint.created);
  n->add_option("--creator", mint.creator);
  n->add_option("--title", mint.title);
  n->add_option("--when", mint.when);
  n->add_option("--http-base", mint.http_base, "Give a URN body an HTTP IRI under this base");
  n->add_option("--seed", mint.seed, "Seed for URN minting");
  n->add_option("--to", mint.to)->check(CLI::IsMember({"ntriples", "turtle"}));
  n->callback([&] { action = [&] { return cmd_new(mint, io); }; });

  auto* tmp = app.add_subcommand("temporal", "Temporal classes and memento resolution");
  tmp->require_subcommand(1);
  ClassifyArgs classify;
  auto* tc = tmp->add_subcommand("classify", "Timeless, UniformTime or VariedTime");
  tc->add_option("path", classify.path)->required();
  tc->add_option("--uri", classify.uri);
  tc->callback([&] { action = [&] { return cmd_temporal_classify(classify, io); }; });

  ResolveArgs resolve;
  auto* tr = tmp->add_subcommand("resolve", "Snapshot nearest a datetime");
  tr->add_option("original", resolve.original)->required();
  tr->add_option("--index", resolve.index, "Archive index JSON")->required();
  tr->add_option("--at", resolve.at, "ISO 8601 or RFC 1123 datetime")->required();
  tr->callback([&] { action = [&] { return cmd_temporal_resolve(resolve, io); }; });

  ReconstructArgs rebuild;
  auto* trc = tmp->add_subcommand("reconstruct", "Point an annotation at archived snapshots");
  trc->add_option("path", rebuild.path)->required();
  trc->add_option("--index", rebuild.index)->required();
  trc->add_option("--uri", rebuild.uri);
  trc->add_option("--to", rebuild.to)->check(CLI::IsMember({"ntriples", "turtle"}));
  trc->callback([&] { action = [&] { return cmd_temporal_reconstruct(rebuild, io); }; });

  std::string config_path;
  auto* s = app.add_subcommand("serve", "Run the HTTP server");
  s->add_option("--config", config_path, "JSON config")->required();
  s->callback([&] { action = [&] { return cmd_serve(config_path, io); }; });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  try {
    return action();
  } catch (const Exit& e) {
    err << "oatool: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    err << "oatool: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace oa::cli

#endif  // OA_CLI_HPP
