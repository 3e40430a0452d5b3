#ifndef OA_MODEL_HPP
#define OA_MODEL_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "oa/datetime.hpp"
#include "oa/errors.hpp"
#include "oa/rdf.hpp"
#include "oa/uuid.hpp"
#include "oa/vocab.hpp"

namespace oa {

using rdf::Iri;

// --- inline content ----------------------------------------------------------

enum class ContentKind { Text, Base64, Xml };

inline const char* content_class(ContentKind kind) {
  switch (kind) {
    case ContentKind::Text: return "ContentAsText";
    case ContentKind::Base64: return "ContentAsBase64";
    case ContentKind::Xml: return "ContentAsXML";
  }
  return "ContentAsText";
}

/// A representation carried inside the annotation document.
struct InlineContent {
  std::string chars;
  std::string character_encoding = "utf-8";
  ContentKind kind = ContentKind::Text;

  friend bool operator==(const InlineContent&, const InlineContent&) = default;
};

inline bool is_valid_base64(std::string_view s) {
  if (s.size() % 4 != 0) return false;
  std::size_t padding = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '=') {
      ++padding;
      if (i < s.size() - 2) return false;
      continue;
    }
    if (padding > 0) return false;
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '+' || c == '/';
    if (!ok) return false;
  }
  return padding <= 2;
}

// --- constraints and constrained resources ------------------------------------

enum class ConstraintKind { Svg, WebTime, Generic };

inline constexpr std::string_view kSvgMediaType = "image/svg+xml";

/// Describes a segment that a fragment URI cannot express.
///
/// Payload rules: WebTime constraints carry no payload and a `when`; Svg and
/// Generic constraints carry either an inline representation or a remote
/// document. A remote payload equal to `uri` means the constraint resource is
/// itself the dereferenceable document.
struct Constraint {
  Iri uri;
  ConstraintKind kind = ConstraintKind::Generic;
  std::optional<std::string> format;
  std::variant<std::monostate, Iri, InlineContent> payload;
  std::optional<DateTime> when;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// A minted resource standing for "the segment of `constrains` described by
/// `constraint`". Used on the target side and, mirrored, on the body side.
struct ConstrainedResource {
  Iri uri;
  Iri constrains;
  Constraint constraint;

  friend bool operator==(const ConstrainedResource&, const ConstrainedResource&) = default;
};

using ConstrainedTarget = ConstrainedResource;
using ConstrainedBody = ConstrainedResource;

// --- bodies and targets --------------------------------------------------------

struct RemoteBody {
  Iri uri;
  friend bool operator==(const RemoteBody&, const RemoteBody&) = default;
};

struct InlineBody {
  InlineContent content;
  Iri urn;
  friend bool operator==(const InlineBody&, const InlineBody&) = default;
};

struct BodyRef {
  std::variant<RemoteBody, InlineBody, ConstrainedBody> value;
  std::optional<Iri> equivalent_http;

  static BodyRef remote(Iri uri) { return BodyRef{RemoteBody{std::move(uri)}, std::nullopt}; }
  static BodyRef inline_content(InlineContent content, Iri urn) {
    return BodyRef{InlineBody{std::move(content), std::move(urn)}, std::nullopt};
  }
  static BodyRef constrained(ConstrainedBody cb) { return BodyRef{std::move(cb), std::nullopt}; }

  // The IRI of the node that is the object of oac:hasBody.
  const Iri& node() const {
    return std::visit(
        [](const auto& v) -> const Iri& {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, RemoteBody>) return v.uri;
          else if constexpr (std::is_same_v<V, InlineBody>) return v.urn;
          else return v.uri;
        },
        value);
  }

  friend bool operator==(const BodyRef&, const BodyRef&) = default;
};

struct DirectTarget {
  Iri uri;
  friend bool operator==(const DirectTarget&, const DirectTarget&) = default;
};

struct TargetRef {
  std::variant<DirectTarget, ConstrainedTarget> value;
  std::optional<Iri> is_part_of;

  static TargetRef direct(Iri uri, std::optional<Iri> is_part_of = std::nullopt) {
    return TargetRef{DirectTarget{std::move(uri)}, std::move(is_part_of)};
  }
  // Direct target that also records the full resource when the IRI has a fragment.
  static TargetRef segment(Iri uri) {
    std::optional<Iri> whole;
    if (uri.has_fragment()) whole = uri.without_fragment();
    return direct(std::move(uri), std::move(whole));
  }
  static TargetRef constrained(ConstrainedTarget ct) { return TargetRef{std::move(ct), std::nullopt}; }

  const Iri& node() const {
    return std::visit(
        [](const auto& v) -> const Iri& {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, DirectTarget>) return v.uri;
          else return v.uri;
        },
        value);
  }

  friend bool operator==(const TargetRef&, const TargetRef&) = default;
};

// --- annotation ----------------------------------------------------------------

struct Annotation {
  Iri uri;
  std::optional<BodyRef> body;
  std::vector<TargetRef> targets;  // ordered by node IRI
  std::optional<DateTime> created;
  std::optional<Iri> creator;
  std::optional<std::string> title;
  std::optional<DateTime> when;
  std::set<Iri> types;
  rdf::Graph extra;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Optional provenance and extension data for build_annotation.
struct AnnotationMeta {
  std::optional<DateTime> created;
  std::optional<Iri> creator;
  std::optional<std::string> title;
  std::optional<DateTime> when;
  std::set<Iri> types;  // additional subclasses of oac:Annotation
  rdf::Graph extra;
};

inline bool is_reply(const Annotation& a) { return a.types.count(vocab::oac("Reply")) > 0; }

namespace detail {

inline void check_constraint(const Constraint& c) {
  switch (c.kind) {
    case ConstraintKind::Svg:
      if (c.format != std::string(kSvgMediaType)) {
        throw InvalidAnnotation("SVG constraint " + c.uri.str() + " must have format image/svg+xml");
      }
      if (std::holds_alternative<std::monostate>(c.payload)) {
        throw InvalidAnnotation("SVG constraint " + c.uri.str() + " has no payload");
      }
      break;
    case ConstraintKind::WebTime:
      if (!c.when) throw InvalidAnnotation("WebTime constraint " + c.uri.str() + " has no when");
      if (!std::holds_alternative<std::monostate>(c.payload)) {
        throw InvalidAnnotation("WebTime constraint " + c.uri.str() + " carries a payload");
      }
      break;
    case ConstraintKind::Generic:
      if (std::holds_alternative<std::monostate>(c.payload)) {
        throw InvalidAnnotation("constraint " + c.uri.str() + " has no payload");
      }
      break;
  }
  if (c.when && c.kind != ConstraintKind::WebTime) {
    throw InvalidAnnotation("only WebTime constraints carry oac:when");
  }
  if (auto content = std::get_if<InlineContent>(&c.payload);
      content && content->kind == ContentKind::Base64 && !is_valid_base64(content->chars)) {
    throw InvalidAnnotation("constraint payload is not valid base64");
  }
}

inline void check_constrained(const ConstrainedResource& cr) {
  if (cr.uri == cr.constrains) {
    throw InvalidAnnotation("constrained resource " + cr.uri.str() + " constrains itself");
  }
  check_constraint(cr.constraint);
}

inline bool has_web_time(const ConstrainedResource& cr) {
  return cr.constraint.kind == ConstraintKind::WebTime;
}

}  // namespace detail

/// Checks the structural invariants of an annotation value. Throws
/// CardinalityError or InvalidAnnotation.
inline void check_annotation(const Annotation& a) {
  if (a.targets.empty()) throw CardinalityError("annotation needs at least one target");
  if (!a.types.count(vocab::oac("Annotation"))) {
    throw InvalidAnnotation("annotation types must include oac:Annotation");
  }
  bool web_time = false;
  if (a.body) {
    const auto& b = *a.body;
    if (auto ib = std::get_if<InlineBody>(&b.value)) {
      if (!is_urn_uuid(ib->urn)) throw InvalidAnnotation("inline body must use a urn:uuid IRI");
      if (ib->content.kind == ContentKind::Base64 && !is_valid_base64(ib->content.chars)) {
        throw InvalidAnnotation("inline body is not valid base64");
      }
    }
    if (auto cb = std::get_if<ConstrainedBody>(&b.value)) {
      detail::check_constrained(*cb);
      web_time = web_time || detail::has_web_time(*cb);
    }
    if (b.equivalent_http && !is_http(*b.equivalent_http)) {
      throw InvalidAnnotation("body equivalence must be an http(s) IRI");
    }
  }
  std::set<Iri> seen;
  for (const auto& t : a.targets) {
    if (!seen.insert(t.node()).second) {
      throw InvalidAnnotation("target " + t.node().str() + " listed twice");
    }
    if (auto ct = std::get_if<ConstrainedTarget>(&t.value)) {
      detail::check_constrained(*ct);
      web_time = web_time || detail::has_web_time(*ct);
    }
  }
  if (a.when && web_time) {
    throw InvalidAnnotation("annotation-level when cannot be combined with WebTime constraints");
  }
}

inline Annotation build_annotation(Iri uri, std::vector<BodyRef> bodies,
                                   std::vector<TargetRef> targets, AnnotationMeta meta = {}) {
  if (bodies.size() > 1) {
    throw CardinalityError("an annotation has at most one body, got " +
                           std::to_string(bodies.size()));
  }
  if (targets.empty()) throw CardinalityError("an annotation needs at least one target");
  std::sort(targets.begin(), targets.end(),
            [](const TargetRef& x, const TargetRef& y) { return x.node() < y.node(); });
  meta.types.insert(vocab::oac("Annotation"));
  Annotation a{std::move(uri),
               bodies.empty() ? std::nullopt : std::optional<BodyRef>(std::move(bodies.front())),
               std::move(targets),
               std::move(meta.created),
               std::move(meta.creator),
               std::move(meta.title),
               std::move(meta.when),
               std::move(meta.types),
               std::move(meta.extra)};
  check_annotation(a);
  return a;
}

inline Annotation build_annotation(Iri uri, std::optional<BodyRef> body,
                                   std::vector<TargetRef> targets, AnnotationMeta meta = {}) {
  std::vector<BodyRef> bodies;
  if (body) bodies.push_back(std::move(*body));
  return build_annotation(std::move(uri), std::move(bodies), std::move(targets), std::move(meta));
}

/// A reply is an annotation whose single target is another annotation.
inline Annotation make_reply(const Annotation& parent, std::optional<BodyRef> body, Iri uri,
                             AnnotationMeta meta = {}) {
  meta.types.insert(vocab::oac("Reply"));
  return build_annotation(std::move(uri), std::move(body), {TargetRef::direct(parent.uri)},
                          std::move(meta));
}

// --- graph mapping ---------------------------------------------------------------

inline rdf::Literal datetime_literal(const DateTime& dt) {
  return rdf::Literal(dt.iso8601(), vocab::xsd("dateTime"));
}

namespace detail {

inline void emit_content(rdf::Graph& g, const Iri& node, const InlineContent& c) {
  g.insert(node, vocab::rdf_type(), vocab::cnt(content_class(c.kind)));
  g.insert(node, vocab::cnt("chars"), rdf::Literal(c.chars));
  if (!c.character_encoding.empty()) {
    g.insert(node, vocab::cnt("characterEncoding"), rdf::Literal(c.character_encoding));
  }
}

inline void emit_constraint(rdf::Graph& g, const Constraint& c) {
  g.insert(c.uri, vocab::rdf_type(), vocab::oac("Constraint"));
  if (c.kind == ConstraintKind::Svg) g.insert(c.uri, vocab::rdf_type(), vocab::oac("SvgConstraint"));
  if (c.kind == ConstraintKind::WebTime) {
    g.insert(c.uri, vocab::rdf_type(), vocab::oac("WebTimeConstraint"));
  }
  if (c.format) g.insert(c.uri, vocab::dc("format"), rdf::Literal(*c.format));
  if (auto remote = std::get_if<Iri>(&c.payload); remote && *remote != c.uri) {
    g.insert(c.uri, vocab::dcterms("source"), *remote);
  }
  if (auto content = std::get_if<InlineContent>(&c.payload)) emit_content(g, c.uri, *content);
  if (c.when) g.insert(c.uri, vocab::oac("when"), datetime_literal(*c.when));
}

inline void emit_constrained(rdf::Graph& g, const ConstrainedResource& cr, std::string_view type) {
  g.insert(cr.uri, vocab::rdf_type(), vocab::oac(type));
  g.insert(cr.uri, vocab::oac("constrains"), cr.constrains);
  g.insert(cr.uri, vocab::oac("hasConstraint"), cr.constraint.uri);
  emit_constraint(g, cr.constraint);
}

}  // namespace detail

/// Graph form of a constrained target on its own (no annotation node).
inline rdf::Graph to_graph(const ConstrainedTarget& ct) {
  rdf::Graph g;
  detail::emit_constrained(g, ct, "ConstrainedTarget");
  return g;
}

inline rdf::Graph to_graph(const Annotation& a) {
  rdf::Graph g;
  for (const auto& type : a.types) g.insert(a.uri, vocab::rdf_type(), type);
  if (a.body) {
    const auto& b = *a.body;
    g.insert(a.uri, vocab::oac("hasBody"), b.node());
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, RemoteBody>) {
            g.insert(v.uri, vocab::rdf_type(), vocab::oac("Body"));
          } else if constexpr (std::is_same_v<V, InlineBody>) {
            g.insert(v.urn, vocab::rdf_type(), vocab::oac("Body"));
            detail::emit_content(g, v.urn, v.content);
          } else {
            detail::emit_constrained(g, v, "ConstrainedBody");
          }
        },
        b.value);
    if (b.equivalent_http) g.insert(*b.equivalent_http, vocab::owl("sameAs"), b.node());
  }
  for (const auto& t : a.targets) {
    g.insert(a.uri, vocab::oac("hasTarget"), t.node());
    if (auto dt = std::get_if<DirectTarget>(&t.value)) {
      g.insert(dt->uri, vocab::rdf_type(), vocab::oac("Target"));
    } else {
      detail::emit_constrained(g, std::get<ConstrainedTarget>(t.value), "ConstrainedTarget");
    }
    if (t.is_part_of) g.insert(t.node(), vocab::dcterms("isPartOf"), *t.is_part_of);
  }
  if (a.created) g.insert(a.uri, vocab::dcterms("created"), datetime_literal(*a.created));
  if (a.creator) g.insert(a.uri, vocab::dcterms("creator"), *a.creator);
  if (a.title) g.insert(a.uri, vocab::dc("title"), rdf::Literal(*a.title));
  if (a.when) g.insert(a.uri, vocab::oac("when"), datetime_literal(*a.when));
  g.insert_all(a.extra);
  return g;
}

namespace detail {

// Reads the recognized vocabulary of one annotation and remembers every
// triple it consumed so the rest can be passed through as `extra`.
class AnnotationReader {
public:
  AnnotationReader(const rdf::Graph& g, const Iri& uri) : g_(g), uri_(uri) {}

  Annotation read() {
    if (!g_.has(uri_, vocab::rdf_type(), vocab::oac("Annotation"))) {
      throw NotAnAnnotation(uri_.str() + " is not typed oac:Annotation");
    }
    const auto bodies = g_.objects(uri_, vocab::oac("hasBody"));
    const auto targets = g_.objects(uri_, vocab::oac("hasTarget"));
    std::vector<std::string> codes;
    if (bodies.size() > 1) codes.push_back("E001");
    if (targets.empty()) codes.push_back("E002");
    if (!codes.empty()) {
      throw ModelViolation(codes, uri_.str() + " breaks the body/target cardinalities");
    }

    std::set<Iri> types;
    for (const auto& t : g_.objects(uri_, vocab::rdf_type())) {
      if (auto iri = rdf::as_iri(t)) {
        types.insert(*iri);
        consume(uri_, vocab::rdf_type(), t);
      }
    }
    known_.insert(uri_);

    std::optional<BodyRef> body;
    if (!bodies.empty()) {
      consume(uri_, vocab::oac("hasBody"), bodies.front());
      body = read_body(node_iri(bodies.front(), "body"));
    }
    std::vector<TargetRef> target_refs;
    for (const auto& t : targets) {
      consume(uri_, vocab::oac("hasTarget"), t);
      target_refs.push_back(read_target(node_iri(t, "target")));
    }
    std::sort(target_refs.begin(), target_refs.end(),
              [](const TargetRef& x, const TargetRef& y) { return x.node() < y.node(); });

    Annotation a{uri_, std::move(body), std::move(target_refs), std::nullopt, std::nullopt,
                 std::nullopt, std::nullopt, std::move(types), {}};
    a.created = single_datetime(uri_, vocab::dcterms("created"));
    a.when = single_datetime(uri_, vocab::oac("when"));
    if (auto creator = single_iri(uri_, vocab::dcterms("creator"))) {
      a.creator = *creator;
      known_.insert(*creator);
    }
    a.title = single_plain(uri_, vocab::dc("title"));
    a.extra = collect_extra();
    return a;
  }

private:
  Iri node_iri(const rdf::Term& t, const char* role) const {
    if (auto iri = rdf::as_iri(t)) return *iri;
    throw InvalidAnnotation(std::string(role) + " of " + uri_.str() + " must be an IRI");
  }

  void consume(const Iri& s, const Iri& p, const rdf::Term& o) {
    consumed_.insert(rdf::Triple{s, p, o});
  }

  bool typed(const Iri& node, std::string_view cls) const {
    return g_.has(node, vocab::rdf_type(), vocab::oac(cls));
  }

  void consume_type(const Iri& node, const Iri& cls) {
    if (g_.has(node, vocab::rdf_type(), cls)) consume(node, vocab::rdf_type(), cls);
  }

  std::optional<Iri> single_iri(const Iri& s, const Iri& p) {
    const auto objs = g_.objects(s, p);
    if (objs.size() != 1 || !rdf::as_iri(objs.front())) return std::nullopt;
    consume(s, p, objs.front());
    return *rdf::as_iri(objs.front());
  }

  std::optional<std::string> single_plain(const Iri& s, const Iri& p) {
    const auto objs = g_.objects(s, p);
    if (objs.size() != 1) return std::nullopt;
    auto lit = rdf::as_literal(objs.front());
    if (!lit || !lit->is_plain()) return std::nullopt;
    consume(s, p, objs.front());
    return lit->lexical();
  }

  std::optional<DateTime> single_datetime(const Iri& s, const Iri& p) {
    const auto objs = g_.objects(s, p);
    if (objs.size() != 1) return std::nullopt;
    auto lit = rdf::as_literal(objs.front());
    if (!lit || lit->datatype() != vocab::xsd("dateTime")) return std::nullopt;
    try {
      auto dt = DateTime::parse_iso8601(lit->lexical());
      consume(s, p, objs.front());
      return dt;
    } catch (const InvalidDateTime&) {
      return std::nullopt;
    }
  }

  std::optional<InlineContent> read_content(const Iri& node) {
    auto chars = single_plain(node, vocab::cnt("chars"));
    if (!chars) return std::nullopt;
    InlineContent c;
    c.chars = *chars;
    if (auto enc = single_plain(node, vocab::cnt("characterEncoding"))) {
      c.character_encoding = *enc;
    } else {
      c.character_encoding.clear();
    }
    for (ContentKind kind : {ContentKind::Text, ContentKind::Base64, ContentKind::Xml}) {
      if (g_.has(node, vocab::rdf_type(), vocab::cnt(content_class(kind)))) {
        c.kind = kind;
        consume_type(node, vocab::cnt(content_class(kind)));
        break;
      }
    }
    return c;
  }

  bool is_constrained(const Iri& node) const {
    return typed(node, "ConstrainedTarget") || typed(node, "ConstrainedBody") ||
           !g_.objects(node, vocab::oac("constrains")).empty() ||
           !g_.objects(node, vocab::oac("hasConstraint")).empty();
  }

  Constraint read_constraint(const Iri& c) {
    known_.insert(c);
    Constraint out{c, ConstraintKind::Generic, std::nullopt, std::monostate{}, std::nullopt};
    consume_type(c, vocab::oac("Constraint"));
    if (typed(c, "SvgConstraint")) {
      out.kind = ConstraintKind::Svg;
      consume_type(c, vocab::oac("SvgConstraint"));
    } else if (typed(c, "WebTimeConstraint")) {
      out.kind = ConstraintKind::WebTime;
      consume_type(c, vocab::oac("WebTimeConstraint"));
    }
    out.format = single_plain(c, vocab::dc("format"));
    out.when = single_datetime(c, vocab::oac("when"));
    if (auto content = read_content(c)) {
      out.payload = std::move(*content);
    } else if (auto source = single_iri(c, vocab::dcterms("source"))) {
      out.payload = *source;
    } else if (out.kind != ConstraintKind::WebTime) {
      out.payload = c;
    }
    return out;
  }

  ConstrainedResource read_constrained(const Iri& node, std::string_view type) {
    consume_type(node, vocab::oac(type));
    const auto full = g_.objects(node, vocab::oac("constrains"));
    const auto constraints = g_.objects(node, vocab::oac("hasConstraint"));
    std::vector<std::string> codes;
    if (full.size() != 1 || !rdf::as_iri(full.front())) codes.push_back("E101");
    if (constraints.size() != 1 || !rdf::as_iri(constraints.front())) codes.push_back("E102");
    if (!codes.empty()) {
      throw ModelViolation(codes, node.str() + " is not a well-formed constrained resource");
    }
    consume(node, vocab::oac("constrains"), full.front());
    consume(node, vocab::oac("hasConstraint"), constraints.front());
    known_.insert(*rdf::as_iri(full.front()));  // its own triples ride along in extra
    return ConstrainedResource{node, *rdf::as_iri(full.front()),
                               read_constraint(*rdf::as_iri(constraints.front()))};
  }

  BodyRef read_body(const Iri& node) {
    known_.insert(node);
    BodyRef body = BodyRef::remote(node);
    if (is_constrained(node)) {
      body = BodyRef::constrained(read_constrained(node, "ConstrainedBody"));
    } else {
      consume_type(node, vocab::oac("Body"));
      if (auto content = read_content(node)) body = BodyRef::inline_content(*content, node);
    }
    std::vector<Iri> equivalents;
    for (const auto& s : g_.subjects(vocab::owl("sameAs"), node)) {
      if (auto iri = rdf::as_iri(s); iri && is_http(*iri)) equivalents.push_back(*iri);
    }
    if (equivalents.size() == 1) {
      body.equivalent_http = equivalents.front();
      consume(equivalents.front(), vocab::owl("sameAs"), node);
      known_.insert(equivalents.front());
    }
    return body;
  }

  TargetRef read_target(const Iri& node) {
    known_.insert(node);
    TargetRef target = TargetRef::direct(node);
    if (is_constrained(node)) {
      target = TargetRef::constrained(read_constrained(node, "ConstrainedTarget"));
    } else {
      consume_type(node, vocab::oac("Target"));
    }
    target.is_part_of = single_iri(node, vocab::dcterms("isPartOf"));
    return target;
  }

  rdf::Graph collect_extra() const {
    rdf::Graph extra;
    for (const auto& node : known_) {
      // another annotation in the same document keeps its own triples
      if (node != uri_ && typed(node, "Annotation")) continue;
      for (const auto& t : g_.about(rdf::Subject{node})) {
        if (!consumed_.count(t)) extra.insert(t);
      }
    }
    return extra;
  }

  const rdf::Graph& g_;
  const Iri& uri_;
  std::set<rdf::Triple> consumed_;
  std::set<Iri> known_;
};

}  // namespace detail

/// Inverse of to_graph on the recognized vocabulary. Triples about the
/// annotation's own nodes that are not recognized land in `extra`.
inline Annotation from_graph(const rdf::Graph& g, const Iri& annotation_uri) {
  return detail::AnnotationReader(g, annotation_uri).read();
}

/// Every IRI typed oac:Annotation in the graph, in IRI order.
inline std::vector<Iri> annotation_nodes(const rdf::Graph& g) {
  std::vector<Iri> out;
  for (const auto& s : g.subjects(vocab::rdf_type(), vocab::oac("Annotation"))) {
    if (auto iri = rdf::as_iri(s)) out.push_back(*iri);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Gives a URN-identified body an HTTP IRI under `base`, recorded as an
/// owl:sameAs link. Calling it again is a no-op.
inline Annotation assign_http_equivalence(Annotation a, const Iri& base) {
  if (!a.body) throw NoUrnBody(a.uri.str() + " has no body");
  auto& body = *a.body;
  if (body.equivalent_http) return a;
  const Iri* urn = nullptr;
  if (auto ib = std::get_if<InlineBody>(&body.value)) urn = &ib->urn;
  if (auto rb = std::get_if<RemoteBody>(&body.value); rb && is_urn(rb->uri)) urn = &rb->uri;
  if (!urn) throw NoUrnBody(a.uri.str() + " body is not identified by a URN");

  std::string_view nss(urn->str());
  nss.remove_prefix(is_urn_uuid(*urn) ? 9 : 4);
  std::string id;
  for (char c : nss) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '.' || c == '_' || c == '~';
    id.push_back(keep ? c : '-');
  }
  std::string prefix = base.str();
  if (prefix.back() != '/') prefix.push_back('/');
  body.equivalent_http = Iri(prefix + id);
  return a;
}

}  // namespace oa

#endif  // OA_MODEL_HPP
