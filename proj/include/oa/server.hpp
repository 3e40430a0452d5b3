#ifndef OA_SERVER_HPP
#define OA_SERVER_HPP

#include <atomic>
#include <charconv>
#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <pthread.h>

#include <httplib.h>
#include <json.hpp>

#include "oa/constraints.hpp"
#include "oa/errors.hpp"
#include "oa/fragments.hpp"
#include "oa/model.hpp"
#include "oa/rdf.hpp"
#include "oa/temporal.hpp"
#include "oa/uuid.hpp"
#include "oa/validation.hpp"

namespace oa::server {

inline constexpr std::string_view kNTriples = "application/n-triples";
inline constexpr std::string_view kTurtle = "text/turtle";
inline constexpr std::string_view kJson = "application/json";
inline constexpr std::size_t kSearchCap = 1000;

// --- configuration -------------------------------------------------------------

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  Iri base_uri{"http://127.0.0.1:8080/"};
  std::optional<std::filesystem::path> archive_index;
  std::optional<std::filesystem::path> snapshot;

  // {"listen": "host:port", "base_uri": "...", "archive_index": "...", "snapshot": "..."}
  // Relative paths are taken relative to `dir`.
  static Config from_json(std::string_view text, const std::filesystem::path& dir = {}) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config is not JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key != "listen" && key != "base_uri" && key != "archive_index" && key != "snapshot") {
        throw ConfigError("unknown config key \"" + key + "\"");
      }
      if (!value.is_string()) throw ConfigError("config key \"" + key + "\" must be a string");
    }
    Config c;
    if (doc.contains("listen")) {
      const auto listen = doc["listen"].get<std::string>();
      const auto colon = listen.rfind(':');
      if (colon == std::string::npos || colon == 0) {
        throw ConfigError("listen must look like host:port, got \"" + listen + "\"");
      }
      c.host = listen.substr(0, colon);
      const std::string_view port(listen.data() + colon + 1, listen.size() - colon - 1);
      auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), c.port);
      if (ec != std::errc{} || ptr != port.data() + port.size() || c.port < 0 || c.port > 65535) {
        throw ConfigError("bad port in listen \"" + listen + "\"");
      }
    }
    if (doc.contains("base_uri")) {
      try {
        c.base_uri = Iri(doc["base_uri"].get<std::string>());
      } catch (const InvalidIri& e) {
        throw ConfigError(std::string("base_uri: ") + e.what());
      }
      if (!is_http(c.base_uri)) throw ConfigError("base_uri must be an http(s) IRI");
    } else {
      c.base_uri = Iri("http://" + c.host + ":" + std::to_string(c.port) + "/");
    }
    auto path = [&](const char* key) -> std::optional<std::filesystem::path> {
      if (!doc.contains(key)) return std::nullopt;
      std::filesystem::path p = doc[key].get<std::string>();
      if (p.is_relative() && !dir.empty()) p = dir / p;
      return p;
    };
    c.archive_index = path("archive_index");
    c.snapshot = path("snapshot");
    return c;
  }

  static Config load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str(), file.parent_path());
  }

  // Where locally identified annotations live: <base>annotations/
  std::string annotation_prefix() const {
    std::string p = base_uri.str();
    if (p.back() != '/') p.push_back('/');
    return p + "annotations/";
  }
};

// --- transport-independent request/response ------------------------------------------

struct Request {
  std::string method;
  std::string target;  // raw path and query, still percent-encoded
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;

  std::optional<std::string> header(std::string_view name) const {
    auto it = headers.find(std::string(name));
    if (it == headers.end()) return std::nullopt;
    return it->second;
  }
};

struct Response {
  int status = 200;
  std::string content_type;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  std::optional<std::string> header(std::string_view name) const {
    for (const auto& [k, v] : headers) {
      if (k == name) return v;
    }
    return std::nullopt;
  }
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// "type/subtype; param" -> "type/subtype"
inline std::string media_type(std::string_view value) {
  return lower(trim(value.substr(0, value.find(';'))));
}

inline std::string decode(std::string_view s, bool plus_is_space) {
  return httplib::detail::decode_url(std::string(s), plus_is_space);
}

inline std::map<std::string, std::string> parse_query(std::string_view q) {
  std::map<std::string, std::string> out;
  while (!q.empty()) {
    const auto amp = q.find('&');
    const auto pair = q.substr(0, amp);
    const auto eq = pair.find('=');
    if (!pair.empty()) {
      out[decode(pair.substr(0, eq), true)] =
          eq == std::string_view::npos ? "" : decode(pair.substr(eq + 1), true);
    }
    if (amp == std::string_view::npos) break;
    q.remove_prefix(amp + 1);
  }
  return out;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kHex[v & 0xF];
  return out;
}

// FNV-1a; stable across platforms unlike std::hash.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline bool id_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '.' || c == '_' || c == '~';
}

inline Response json_response(int status, const nlohmann::ordered_json& doc) {
  return Response{status, std::string(kJson), {}, doc.dump(2) + "\n"};
}

inline Response error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

}  // namespace detail

/// Picks the first of `supported` with the highest q value under `accept`.
/// Each supported type takes the q of its most specific matching range.
inline std::optional<std::string> negotiate(std::optional<std::string_view> accept,
                                            const std::vector<std::string>& supported) {
  if (supported.empty()) return std::nullopt;
  if (!accept || detail::trim(*accept).empty()) return supported.front();

  struct Range {
    std::string type;
    double q;
  };
  std::vector<Range> ranges;
  std::string_view rest = *accept;
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    Range r{detail::media_type(item), 1.0};
    for (auto semi = item.find(';'); semi != std::string_view::npos; semi = item.find(';')) {
      item.remove_prefix(semi + 1);
      auto param = detail::trim(item.substr(0, item.find(';')));
      if (param.size() > 2 && (param[0] == 'q' || param[0] == 'Q') && param[1] == '=') {
        param.remove_prefix(2);
        double q = 0;
        auto [ptr, ec] = std::from_chars(param.data(), param.data() + param.size(), q);
        r.q = (ec == std::errc{} && ptr == param.data() + param.size() && q >= 0 && q <= 1) ? q : 0;
      }
    }
    if (!r.type.empty()) ranges.push_back(std::move(r));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }

  std::optional<std::string> best;
  double best_q = 0;
  for (const auto& type : supported) {
    const auto major = type.substr(0, type.find('/'));
    int specificity = -1;
    double q = 0;
    for (const auto& r : ranges) {
      int s = -1;
      if (r.type == type) s = 2;
      else if (r.type == major + "/*") s = 1;
      else if (r.type == "*/*") s = 0;
      if (s > specificity) {
        specificity = s;
        q = r.q;
      }
    }
    if (q > best_q) {
      best_q = q;
      best = type;
    }
  }
  return best;
}

// --- store -----------------------------------------------------------------------

/// Immutable-once-written annotation store. One writer at a time; readers
/// share the lock, so nobody sees half of an ingested batch.
class AnnotationStore {
public:
  enum class PutResult { Stored, Unchanged, Conflict };

  // Commits every entry under one exclusive lock.
  std::vector<PutResult> put_all(const std::vector<std::pair<std::string, Annotation>>& batch) {
    std::unique_lock lock(mu_);
    std::vector<PutResult> out;
    for (const auto& [id, a] : batch) {
      if (auto it = annotations_.find(a.uri); it != annotations_.end()) {
        out.push_back(it->second == a ? PutResult::Unchanged : PutResult::Conflict);
        continue;
      }
      if (auto it = ids_.find(id); it != ids_.end()) {
        out.push_back(PutResult::Conflict);
        continue;
      }
      annotations_.emplace(a.uri, a);
      ids_.emplace(id, a.uri);
      for (const auto& t : a.targets) target_index_[indexed_target(t)].insert(a.uri);
      out.push_back(PutResult::Stored);
    }
    return out;
  }

  std::optional<Annotation> get(std::string_view id) const {
    std::shared_lock lock(mu_);
    auto it = ids_.find(std::string(id));
    if (it == ids_.end()) return std::nullopt;
    return annotations_.at(it->second);
  }

  std::optional<Annotation> get_by_uri(const Iri& uri) const {
    std::shared_lock lock(mu_);
    auto it = annotations_.find(uri);
    if (it == annotations_.end()) return std::nullopt;
    return it->second;
  }

  // Annotations with a target on `whole`, ascending by URI.
  std::vector<Annotation> by_target(const Iri& whole) const {
    std::shared_lock lock(mu_);
    std::vector<Annotation> out;
    auto it = target_index_.find(whole);
    if (it == target_index_.end()) return out;
    for (const auto& uri : it->second) out.push_back(annotations_.at(uri));
    return out;
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return annotations_.size();
  }

  std::vector<Annotation> all() const {
    std::shared_lock lock(mu_);
    std::vector<Annotation> out;
    for (const auto& [uri, a] : annotations_) out.push_back(a);
    return out;
  }

  rdf::Graph dump() const {
    std::shared_lock lock(mu_);
    rdf::Graph g;
    for (const auto& [uri, a] : annotations_) g.insert_all(to_graph(a));
    return g;
  }

  // Every indexed pair refers to a stored annotation that has that target.
  bool consistent() const {
    std::shared_lock lock(mu_);
    for (const auto& [target, uris] : target_index_) {
      for (const auto& uri : uris) {
        auto it = annotations_.find(uri);
        if (it == annotations_.end()) return false;
        bool found = false;
        for (const auto& t : it->second.targets) found = found || indexed_target(t) == target;
        if (!found) return false;
      }
    }
    return true;
  }

  static Iri indexed_target(const TargetRef& t) {
    if (auto dt = std::get_if<DirectTarget>(&t.value)) return dt->uri.without_fragment();
    return std::get<ConstrainedTarget>(t.value).constrains.without_fragment();
  }

private:
  mutable std::shared_mutex mu_;
  std::map<Iri, Annotation> annotations_;
  std::map<std::string, Iri> ids_;
  std::map<Iri, std::set<Iri>> target_index_;
};

// --- target selection ---------------------------------------------------------------

namespace detail {

// Selectors describing the part of `whole` a target covers; empty when the
// target covers the whole resource (or a region we cannot see, such as a
// remote SVG document).
inline std::optional<std::vector<fragments::FragmentSelector>> target_selectors(
    const TargetRef& t, const Iri& whole) {
  if (AnnotationStore::indexed_target(t) != whole) return std::nullopt;
  std::vector<fragments::FragmentSelector> out;
  const Iri& uri = std::holds_alternative<DirectTarget>(t.value)
                       ? std::get<DirectTarget>(t.value).uri
                       : std::get<ConstrainedTarget>(t.value).constrains;
  if (uri.has_fragment()) {
    try {
      out = fragments::parse_fragment(uri).selectors;
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  if (auto ct = std::get_if<ConstrainedTarget>(&t.value)) {
    try {
      if (auto region = constraints::inline_region(ct->constraint)) {
        const auto& b = region->bbox;
        out.push_back(fragments::Spatial{fragments::SpatialUnit::Pixel, b.x, b.y, b.w, b.h});
      }
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return out;
}

// Every dimension the query and the stored target share must overlap, and
// they must share at least one. A whole-resource target always matches.
inline bool selection_matches(const std::vector<fragments::FragmentSelector>& stored,
                              const std::vector<fragments::FragmentSelector>& query) {
  if (stored.empty()) return true;
  bool shared = false;
  for (const auto& q : query) {
    for (const auto& s : stored) {
      if (q.index() != s.index()) continue;
      shared = true;
      try {
        if (!fragments::selectors_overlap(q, s, {})) return false;
      } catch (const Error&) {
        return false;
      }
    }
  }
  return shared;
}

}  // namespace detail

// --- service ------------------------------------------------------------------------

struct Rejection {
  std::string subject;
  std::string reason;
  std::vector<validation::Finding> findings;  // errors only
  bool conflict = false;
};

struct IngestResult {
  int status = 201;
  std::vector<Iri> stored;
  std::vector<Rejection> rejected;
  std::string error;  // set for 4xx outcomes that reject the whole request
};

struct SearchResult {
  std::vector<Iri> results;
  bool truncated = false;
};

/// Request handling over a store and an optional archive index. Handlers do
/// not depend on the HTTP library, so tests can drive them directly.
class Service {
public:
  static constexpr std::string_view kSnapshotMarker = "# annotation ";

  explicit Service(Config config, std::optional<temporal::ArchiveIndex> index = std::nullopt,
                   std::uint64_t seed = 0)
      : config_(std::move(config)),
        index_(std::move(index)),
        gen_(seed == 0 ? UuidGenerator::from_entropy() : UuidGenerator(seed)) {}

  const Config& config() const noexcept { return config_; }
  const AnnotationStore& store() const noexcept { return store_; }

  /// Local id under <base>annotations/ for a stored annotation URI.
  std::string local_id(const Iri& uri) const {
    const std::string prefix = config_.annotation_prefix();
    const std::string& s = uri.str();
    if (s.size() > prefix.size() && s.compare(0, prefix.size(), prefix) == 0) {
      const std::string rest = s.substr(prefix.size());
      bool plain = true;
      for (char c : rest) plain = plain && detail::id_char(c);
      if (plain) return rest;
    }
    return detail::hex64(detail::fnv1a(s));
  }

  std::string location_of(const Iri& uri) const { return config_.annotation_prefix() + local_id(uri); }

  // urn:uuid:X -> <base>annotations/X; other URNs keep their sanitized NSS.
  Iri mint_for_urn(const Iri& urn) const {
    std::string_view nss(urn.str());
    nss.remove_prefix(is_urn_uuid(urn) ? 9 : 4);
    std::string id;
    for (char c : nss) id.push_back(detail::id_char(c) ? c : '-');
    return Iri(config_.annotation_prefix() + id);
  }

  IngestResult ingest(std::string_view body, std::string_view format) {
    IngestResult out;
    if (detail::media_type(format) != kNTriples) {
      out.status = 415;
      out.error = "unsupported format \"" + std::string(format) + "\"; send " + std::string(kNTriples);
      return out;
    }
    rdf::Graph g;
    try {
      g = rdf::parse_ntriples(body);
    } catch (const ParseError& e) {
      out.status = 400;
      out.error = e.what();
      return out;
    } catch (const InvalidIri& e) {
      out.status = 400;
      out.error = e.what();
      return out;
    }

    std::lock_guard writer(ingest_mu_);

    std::set<rdf::Subject> nodes;
    for (const auto& s : g.subjects(vocab::rdf_type(), vocab::oac("Annotation"))) nodes.insert(s);
    if (nodes.empty()) {
      out.status = 422;
      out.error = "no node typed oac:Annotation";
      return out;
    }

    std::vector<Iri> accepted;
    for (const auto& node : nodes) {
      const auto report = validation::validate_node(g, node);
      if (!report.has_errors()) {
        accepted.push_back(std::get<Iri>(node));
        continue;
      }
      Rejection r{rdf::render_term(node), "validation errors", {}, false};
      if (auto iri = rdf::as_iri(node)) r.subject = iri->str();
      for (const auto& f : report.findings) {
        if (f.severity == validation::Severity::Error) r.findings.push_back(f);
      }
      out.rejected.push_back(std::move(r));
    }

    // Blank nodes cannot be dereferenced; URN-named annotations get an
    // HTTP IRI under our base with an owl:sameAs back to the URN.
    rdf::Graph ground = skolemize(g, gen_);
    std::map<Iri, Iri> renamed;
    for (const auto& uri : accepted) {
      if (is_urn(uri)) renamed.emplace(uri, mint_for_urn(uri));
    }
    if (!renamed.empty()) ground = rename(ground, renamed);

    std::vector<std::pair<std::string, Annotation>> batch;
    for (const auto& original : accepted) {
      auto it = renamed.find(original);
      const Iri uri = it == renamed.end() ? original : it->second;
      try {
        Annotation a = from_graph(ground, uri);
        if (it != renamed.end()) a.extra.insert(uri, vocab::owl("sameAs"), original);
        batch.emplace_back(local_id(uri), std::move(a));
      } catch (const Error& e) {
        out.rejected.push_back(Rejection{original.str(), e.what(), {}, false});
      }
    }

    const auto results = store_.put_all(batch);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (results[i] == AnnotationStore::PutResult::Conflict) {
        out.rejected.push_back(Rejection{batch[i].second.uri.str(),
                                         "a different annotation is already stored at this URI",
                                         {}, true});
      } else {
        out.stored.push_back(batch[i].second.uri);
      }
    }

    if (!out.stored.empty()) {
      out.status = 201;
    } else {
      bool all_conflicts = !out.rejected.empty();
      for (const auto& r : out.rejected) all_conflicts = all_conflicts && r.conflict;
      out.status = all_conflicts ? 409 : 422;
    }
    return out;
  }

  SearchResult search(const Iri& target, const std::optional<std::string>& selector) const {
    const Iri whole = target.without_fragment();
    std::optional<std::vector<fragments::FragmentSelector>> query;
    if (selector && !selector->empty()) {
      // throws FragmentParseError / AmbiguousFragment / InvalidSelector
      query = fragments::parse_fragment(Iri(whole.str() + "#" + *selector)).selectors;
    }
    SearchResult out;
    for (const auto& a : store_.by_target(whole)) {
      bool match = false;
      for (const auto& t : a.targets) {
        auto stored = detail::target_selectors(t, whole);
        if (!stored) continue;
        if (!query || detail::selection_matches(*stored, *query)) {
          match = true;
          break;
        }
      }
      if (!match) continue;
      if (out.results.size() == kSearchCap) {
        out.truncated = true;
        break;
      }
      out.results.push_back(a.uri);
    }
    return out;
  }

  Response handle(const Request& req) {
    const auto q = req.target.find('?');
    const std::string_view path(req.target.data(), q == std::string::npos ? req.target.size() : q);
    const std::string_view query =
        q == std::string::npos ? std::string_view{} : std::string_view(req.target).substr(q + 1);

    auto only = [&](std::string_view method) -> std::optional<Response> {
      if (req.method == method) return std::nullopt;
      Response r = detail::error_response(405, "method not allowed");
      r.headers.emplace_back("Allow", std::string(method));
      return r;
    };

    if (path == "/annotations") {
      if (auto r = only("POST")) return *r;
      return post_annotations(req);
    }
    if (path.rfind("/annotations/", 0) == 0 && path.size() > 13) {
      if (auto r = only("GET")) return *r;
      return get_annotation(detail::decode(path.substr(13), false), req.header("accept"));
    }
    if (path == "/search") {
      if (auto r = only("GET")) return *r;
      return get_search(detail::parse_query(query));
    }
    if (path.rfind("/timegate/", 0) == 0 && path.size() > 10) {
      if (auto r = only("GET")) return *r;
      return get_timegate(detail::decode(path.substr(10), false), req.header("accept-datetime"));
    }
    return detail::error_response(404, "no such resource");
  }

  Response post_annotations(const Request& req) {
    const auto result = ingest(req.body, req.header("content-type").value_or(""));
    if (!result.error.empty()) return detail::error_response(result.status, result.error);
    nlohmann::ordered_json doc;
    doc["stored"] = nlohmann::ordered_json::array();
    for (const auto& uri : result.stored) {
      doc["stored"].push_back({{"uri", uri.str()}, {"location", location_of(uri)}});
    }
    doc["rejected"] = nlohmann::ordered_json::array();
    for (const auto& r : result.rejected) {
      nlohmann::ordered_json findings = nlohmann::ordered_json::array();
      for (const auto& f : r.findings) {
        findings.push_back({{"code", f.code}, {"subject", rdf::render_term(f.subject)},
                            {"message", f.message}});
      }
      doc["rejected"].push_back(
          {{"subject", r.subject}, {"reason", r.reason}, {"findings", std::move(findings)}});
    }
    Response res = detail::json_response(result.status, doc);
    if (result.stored.size() == 1) res.headers.emplace_back("Location", location_of(result.stored[0]));
    return res;
  }

  Response get_annotation(const std::string& id, std::optional<std::string> accept) const {
    const auto a = store_.get(id);
    if (!a) return detail::error_response(404, "no annotation with id \"" + id + "\"");
    static const std::vector<std::string> kSupported{std::string(kNTriples), std::string(kTurtle)};
    const auto chosen = negotiate(accept, kSupported);
    if (!chosen) {
      return detail::json_response(
          406, {{"error", "no acceptable representation"}, {"supported", kSupported}});
    }
    const rdf::Graph g = to_graph(*a);
    Response res{200, *chosen, {{"Vary", "Accept"}}, ""};
    res.body = *chosen == kTurtle ? rdf::serialize_turtle(g) : rdf::serialize_ntriples_canonical(g);
    return res;
  }

  Response get_search(const std::map<std::string, std::string>& params) const {
    auto it = params.find("target");
    if (it == params.end() || it->second.empty()) {
      return detail::error_response(400, "missing target parameter");
    }
    std::optional<Iri> target;
    try {
      target = Iri(it->second);
    } catch (const InvalidIri& e) {
      return detail::error_response(400, e.what());
    }
    std::optional<std::string> selector;
    if (auto s = params.find("selector"); s != params.end()) selector = s->second;
    SearchResult found;
    try {
      found = search(*target, selector);
    } catch (const Error& e) {
      return detail::error_response(400, std::string("bad selector: ") + e.what());
    }
    nlohmann::ordered_json doc;
    doc["target"] = target->without_fragment().str();
    if (selector) doc["selector"] = *selector;
    doc["results"] = nlohmann::ordered_json::array();
    for (const auto& uri : found.results) doc["results"].push_back(uri.str());
    doc["truncated"] = found.truncated;
    doc["cap"] = kSearchCap;
    return detail::json_response(200, doc);
  }

  Response get_timegate(const std::string& original, std::optional<std::string> accept_datetime) const {
    std::optional<Iri> uri;
    try {
      uri = Iri(original).without_fragment();
    } catch (const InvalidIri& e) {
      return detail::error_response(400, e.what());
    }
    if (!index_) return detail::error_response(404, "no archive index is loaded");
    const auto* list = index_->find(*uri);
    if (!list) return detail::error_response(404, "no mementos for " + uri->str());
    temporal::Memento m = list->back();
    if (accept_datetime) {
      try {
        m = temporal::resolve_memento(*index_, *uri, DateTime::parse_rfc1123(*accept_datetime));
      } catch (const InvalidDateTime& e) {
        return detail::error_response(400, e.what());
      }
    }
    Response res{302, "", {}, ""};
    res.headers = {
        {"Location", m.snapshot.str()},
        {"Memento-Datetime", m.datetime.rfc1123()},
        {"Vary", "accept-datetime"},
        {"Link", "<" + uri->str() + ">; rel=\"original\", <" + m.snapshot.str() +
                     ">; rel=\"memento\"; datetime=\"" + m.datetime.rfc1123() + "\""}};
    return res;
  }

  // Reloads a dump written by save_snapshot; a missing file is not an error.
  // Each "# annotation" block is ingested on its own, so triples about a node
  // two annotations share stay with the annotation that wrote them.
  void load_snapshot(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return;
    std::vector<std::string> blocks(1);
    for (std::string line; std::getline(in, line);) {
      if (line.rfind(kSnapshotMarker, 0) == 0) blocks.emplace_back();
      blocks.back() += line + "\n";
    }
    for (const auto& block : blocks) {
      if (block.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      const auto result = ingest(block, kNTriples);
      if (!result.error.empty()) throw ConfigError("snapshot " + file.string() + ": " + result.error);
    }
  }

  void save_snapshot(const std::filesystem::path& file) const {
    const auto tmp = std::filesystem::path(file.string() + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write snapshot " + tmp.string());
      for (const auto& a : store_.all()) {
        out << kSnapshotMarker << a.uri.str() << "\n" << rdf::serialize_ntriples_canonical(to_graph(a));
      }
    }
    std::filesystem::rename(tmp, file);
  }

private:
  static rdf::Graph rename(const rdf::Graph& g, const std::map<Iri, Iri>& to) {
    auto swap = [&](const auto& term) {
      using T = std::decay_t<decltype(term)>;
      if (auto iri = std::get_if<Iri>(&term)) {
        if (auto it = to.find(*iri); it != to.end()) return T{it->second};
      }
      return term;
    };
    rdf::Graph out;
    for (const auto& t : g) out.insert(swap(t.subject), t.predicate, swap(t.object));
    return out;
  }

  Config config_;
  std::optional<temporal::ArchiveIndex> index_;
  AnnotationStore store_;
  UuidGenerator gen_;
  std::mutex ingest_mu_;
};

// --- HTTP binding -------------------------------------------------------------------

/// Routes every request through `svc` and logs one line per request to `log`.
inline void mount(httplib::Server& http, Service& svc, std::ostream& log) {
  auto adapt = [&svc](const httplib::Request& req, httplib::Response& res) {
    Request r{req.method, req.target, {}, req.body};
    for (const auto& [name, value] : req.headers) r.headers[detail::lower(name)] = value;
    const Response out = svc.handle(r);
    res.status = out.status;
    for (const auto& [name, value] : out.headers) res.set_header(name, value);
    if (!out.content_type.empty()) res.set_content(out.body, out.content_type);
  };
  http.Get(".*", adapt);
  http.Post(".*", adapt);
  http.Put(".*", adapt);
  http.Delete(".*", adapt);
  http.Patch(".*", adapt);
  auto log_mu = std::make_shared<std::mutex>();
  http.set_logger([&log, log_mu](const httplib::Request& req, const httplib::Response& res) {
    std::string line = req.remote_addr + " \"" + req.method + " " + req.target + "\" " +
                       std::to_string(res.status) + " " + std::to_string(res.body.size()) + "\n";
    std::lock_guard lock(*log_mu);
    log << line << std::flush;
  });
}

/// Builds a service from `config`: loads the archive index and any snapshot.
inline std::unique_ptr<Service> make_service(const Config& config) {
  std::optional<temporal::ArchiveIndex> index;
  if (config.archive_index) {
    try {
      index = temporal::ArchiveIndex::load(*config.archive_index);
    } catch (const InvalidArchiveIndex& e) {
      throw ConfigError(e.what());
    }
  }
  auto svc = std::make_unique<Service>(config, std::move(index));
  if (config.snapshot) svc->load_snapshot(*config.snapshot);
  return svc;
}

/// Serves until SIGINT or SIGTERM, then writes the snapshot. Throws
/// ConfigError when the address cannot be bound.
inline void serve(const Config& config, std::ostream& log) {
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  const auto owned = make_service(config);
  Service& svc = *owned;
  httplib::Server http;
  mount(http, svc, log);
  if (!http.bind_to_port(config.host, config.port)) {
    throw ConfigError("cannot bind " + config.host + ":" + std::to_string(config.port));
  }
  log << "serving " << config.base_uri.str() << " on " << config.host << ":" << config.port
      << " (" << svc.store().size() << " annotations)\n"
      << std::flush;

  std::atomic<bool> signalled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    signalled = true;
    http.stop();
  });
  http.listen_after_bind();
  if (!signalled) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();

  if (config.snapshot) {
    svc.save_snapshot(*config.snapshot);
    log << "wrote " << svc.store().size() << " annotations to " << config.snapshot->string() << "\n";
  }
}

}  // namespace oa::server

#endif  // OA_SERVER_HPP
