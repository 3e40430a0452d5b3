#ifndef OA_VALIDATION_HPP
#define OA_VALIDATION_HPP

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "oa/model.hpp"
#include "oa/rdf.hpp"
#include "oa/vocab.hpp"

namespace oa::validation {

enum class Severity { Error, Warning };

struct CodeInfo {
  std::string_view code;
  Severity severity;
  std::string_view summary;
};

// Cardinality rules are errors; recommendations are warnings.
inline constexpr std::array<CodeInfo, 12> kCodes{{
    {"E001", Severity::Error, "annotation has more than one body"},
    {"E002", Severity::Error, "annotation has no target"},
    {"E003", Severity::Error, "annotation node is not an IRI"},
    {"E101", Severity::Error, "constrained resource lacks exactly one oac:constrains"},
    {"E102", Severity::Error, "constrained resource lacks exactly one constraint"},
    {"E201", Severity::Error, "oac:when on both the annotation and its constraints"},
    {"W001", Severity::Warning, "annotation has no dcterms:created"},
    {"W002", Severity::Warning, "annotation has no dcterms:creator"},
    {"W101", Severity::Warning, "fragment target without dcterms:isPartOf the full resource"},
    {"W102", Severity::Warning, "URN body without an HTTP equivalent"},
    {"W103", Severity::Warning, "inline payload without cnt:characterEncoding"},
    {"W104", Severity::Warning, "inline constraint with an empty payload"},
}};

inline const CodeInfo& code_info(std::string_view code) {
  for (const auto& c : kCodes) {
    if (c.code == code) return c;
  }
  throw Error("unregistered finding code " + std::string(code));
}

struct Finding {
  std::string code;
  Severity severity;
  rdf::Subject subject;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;  // ordered by subject, then code
  std::size_t checked_annotations = 0;

  std::size_t count(Severity s) const {
    return static_cast<std::size_t>(std::count_if(
        findings.begin(), findings.end(), [&](const Finding& f) { return f.severity == s; }));
  }
  bool has_errors() const { return count(Severity::Error) > 0; }

  std::vector<std::string> codes() const {
    std::vector<std::string> out;
    for (const auto& f : findings) out.push_back(f.code);
    return out;
  }

  // One `SEVERITY CODE <subject> message` line per finding.
  std::string to_text() const {
    std::string out;
    for (const auto& f : findings) {
      out += f.severity == Severity::Error ? "ERROR " : "WARNING ";
      out += f.code + " " + rdf::render_term(f.subject) + " " + f.message + "\n";
    }
    return out;
  }

  nlohmann::ordered_json to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
      const auto* iri = rdf::as_iri(f.subject);
      arr.push_back({{"severity", f.severity == Severity::Error ? "error" : "warning"},
                     {"code", f.code},
                     {"subject", iri ? iri->str() : rdf::render_term(f.subject)},
                     {"message", f.message}});
    }
    return arr;
  }
};

namespace detail {

class Checker {
public:
  explicit Checker(const rdf::Graph& g) : g_(g) {}

  void check_annotation(const rdf::Subject& node) {
    ++checked_;
    if (!rdf::as_iri(node)) add("E003", node, "annotation is a blank node; mint an HTTP IRI");

    const auto bodies = g_.objects(node, vocab::oac("hasBody"));
    const auto targets = g_.objects(node, vocab::oac("hasTarget"));
    if (bodies.size() > 1) {
      add("E001", node, "has " + std::to_string(bodies.size()) + " oac:hasBody objects");
    }
    if (targets.empty()) add("E002", node, "has no oac:hasTarget");
    if (g_.objects(node, vocab::dcterms("created")).empty()) {
      add("W001", node, "recommended dcterms:created is missing");
    }
    if (g_.objects(node, vocab::dcterms("creator")).empty()) {
      add("W002", node, "recommended dcterms:creator is missing");
    }

    bool constraint_when = false;
    for (const auto& b : bodies) {
      auto s = rdf::to_subject(b);
      if (!s) continue;
      if (constrained(*s)) {
        constraint_when = check_constrained(*s) || constraint_when;
        continue;
      }
      check_content(*s);
      if (auto iri = rdf::as_iri(*s); iri && is_urn(*iri) && !has_http_equivalent(*iri)) {
        add("W102", *s, "URN body has no owl:sameAs HTTP IRI");
      }
    }
    for (const auto& t : targets) {
      auto s = rdf::to_subject(t);
      if (!s) continue;
      if (constrained(*s)) {
        constraint_when = check_constrained(*s) || constraint_when;
        continue;
      }
      check_content(*s);
      auto iri = rdf::as_iri(*s);
      if (iri && !iri->fragment().empty() &&
          !g_.has(*s, vocab::dcterms("isPartOf"), iri->without_fragment())) {
        add("W101", *s, "fragment target should have dcterms:isPartOf <" +
                            iri->without_fragment().str() + ">");
      }
    }
    if (constraint_when && !g_.objects(node, vocab::oac("when")).empty()) {
      add("E201", node, "oac:when appears on the annotation and on a constraint");
    }
  }

  ValidationReport report() && {
    std::sort(findings_.begin(), findings_.end(), [](const Finding& a, const Finding& b) {
      return std::tie(a.subject, a.code, a.message) < std::tie(b.subject, b.code, b.message);
    });
    return ValidationReport{std::move(findings_), checked_};
  }

private:
  void add(std::string_view code, const rdf::Subject& subject, std::string message) {
    if (!seen_.insert({std::string(code), subject}).second) return;
    findings_.push_back(
        Finding{std::string(code), code_info(code).severity, subject, std::move(message)});
  }

  bool typed(const rdf::Subject& s, std::string_view cls) const {
    return g_.has(s, vocab::rdf_type(), vocab::oac(cls));
  }

  bool constrained(const rdf::Subject& s) const {
    return typed(s, "ConstrainedTarget") || typed(s, "ConstrainedBody") ||
           !g_.objects(s, vocab::oac("constrains")).empty() ||
           !g_.objects(s, vocab::oac("hasConstraint")).empty();
  }

  bool has_http_equivalent(const Iri& node) const {
    for (const auto& s : g_.subjects(vocab::owl("sameAs"), node)) {
      if (auto iri = rdf::as_iri(s); iri && is_http(*iri)) return true;
    }
    for (const auto& o : g_.objects(node, vocab::owl("sameAs"))) {
      if (auto iri = rdf::as_iri(o); iri && is_http(*iri)) return true;
    }
    return false;
  }

  void check_content(const rdf::Subject& s) {
    if (!g_.objects(s, vocab::cnt("chars")).empty() &&
        g_.objects(s, vocab::cnt("characterEncoding")).empty()) {
      add("W103", s, "cnt:chars without cnt:characterEncoding");
    }
  }

  // Returns whether any attached constraint carries oac:when.
  bool check_constrained(const rdf::Subject& s) {
    const auto full = g_.objects(s, vocab::oac("constrains"));
    const auto constraints = g_.objects(s, vocab::oac("hasConstraint"));
    if (full.size() != 1) {
      add("E101", s, "has " + std::to_string(full.size()) + " oac:constrains objects");
    }
    if (constraints.size() != 1) {
      add("E102", s, "has " + std::to_string(constraints.size()) + " constraints");
    }
    bool when = false;
    for (const auto& c : constraints) {
      auto cs = rdf::to_subject(c);
      if (!cs) continue;
      check_content(*cs);
      for (const auto& chars : g_.objects(*cs, vocab::cnt("chars"))) {
        if (auto lit = rdf::as_literal(chars); lit && lit->lexical().empty()) {
          add("W104", *cs, "inline constraint payload is empty");
        }
      }
      when = when || !g_.objects(*cs, vocab::oac("when")).empty();
    }
    return when;
  }

  const rdf::Graph& g_;
  std::vector<Finding> findings_;
  std::set<std::pair<std::string, rdf::Subject>> seen_;
  std::size_t checked_ = 0;
};

}  // namespace detail

/// Checks every node typed oac:Annotation. Malformed data yields findings,
/// never exceptions; unknown vocabulary is ignored.
inline ValidationReport validate(const rdf::Graph& g) {
  detail::Checker checker(g);
  std::set<rdf::Subject> nodes;
  for (const auto& s : g.subjects(vocab::rdf_type(), vocab::oac("Annotation"))) nodes.insert(s);
  for (const auto& n : nodes) checker.check_annotation(n);
  return std::move(checker).report();
}

/// Findings for a single annotation node of a larger graph.
inline ValidationReport validate_node(const rdf::Graph& g, const rdf::Subject& node) {
  detail::Checker checker(g);
  checker.check_annotation(node);
  return std::move(checker).report();
}

/// Findings for one annotation, from its graph form.
inline ValidationReport validate_annotation(const Annotation& a) {
  const rdf::Graph g = to_graph(a);
  detail::Checker checker(g);
  checker.check_annotation(a.uri);
  return std::move(checker).report();
}

}  // namespace oa::validation

#endif  // OA_VALIDATION_HPP
