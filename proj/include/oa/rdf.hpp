#ifndef OA_RDF_HPP
#define OA_RDF_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "oa/errors.hpp"

namespace oa::rdf {

/// An absolute IRI. Construction checks for a scheme and rejects characters
/// that cannot appear inside an N-Triples IRIREF.
class Iri {
public:
  explicit Iri(std::string value) : value_(std::move(value)) {
    if (!is_absolute(value_)) throw InvalidIri("not an absolute IRI: '" + value_ + "'");
  }

  static bool is_absolute(std::string_view v) {
    if (v.empty() || !is_alpha(v[0])) return false;
    std::size_t i = 1;
    while (i < v.size() && (is_alpha(v[i]) || (v[i] >= '0' && v[i] <= '9') || v[i] == '+' ||
                            v[i] == '-' || v[i] == '.')) {
      ++i;
    }
    if (i >= v.size() || v[i] != ':') return false;
    for (unsigned char c : v) {
      if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`' || c == '\\') {
        return false;
      }
    }
    return true;
  }

  const std::string& str() const noexcept { return value_; }

  std::string_view scheme() const { return std::string_view(value_).substr(0, value_.find(':')); }

  bool has_fragment() const { return value_.find('#') != std::string::npos; }

  // Text after the first '#', verbatim. Empty when there is no fragment.
  std::string_view fragment() const {
    auto pos = value_.find('#');
    return pos == std::string::npos ? std::string_view{} : std::string_view(value_).substr(pos + 1);
  }

  Iri without_fragment() const {
    auto pos = value_.find('#');
    return pos == std::string::npos ? *this : Iri(value_.substr(0, pos));
  }

  friend auto operator<=>(const Iri&, const Iri&) = default;
  friend bool operator==(const Iri&, const Iri&) = default;

private:
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

  std::string value_;
};

struct BlankNode {
  std::string label;

  friend auto operator<=>(const BlankNode&, const BlankNode&) = default;
  friend bool operator==(const BlankNode&, const BlankNode&) = default;
};

class Literal {
public:
  explicit Literal(std::string lexical) : lexical_(std::move(lexical)) {}
  Literal(std::string lexical, Iri datatype)
      : lexical_(std::move(lexical)), datatype_(std::move(datatype)) {}

  static Literal with_language(std::string lexical, std::string language) {
    if (!valid_language(language)) throw Error("invalid language tag '" + language + "'");
    Literal lit(std::move(lexical));
    lit.language_ = std::move(language);
    return lit;
  }

  static bool valid_language(std::string_view tag) {
    std::size_t i = 0;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    while (i < tag.size() && alpha(tag[i])) ++i;
    if (i == 0) return false;
    while (i < tag.size()) {
      if (tag[i] != '-') return false;
      const std::size_t start = ++i;
      while (i < tag.size() && (alpha(tag[i]) || (tag[i] >= '0' && tag[i] <= '9'))) ++i;
      if (i == start) return false;
    }
    return true;
  }

  const std::string& lexical() const noexcept { return lexical_; }
  const std::optional<Iri>& datatype() const noexcept { return datatype_; }
  const std::optional<std::string>& language() const noexcept { return language_; }
  bool is_plain() const noexcept { return !datatype_ && !language_; }

  friend auto operator<=>(const Literal&, const Literal&) = default;
  friend bool operator==(const Literal&, const Literal&) = default;

private:
  std::string lexical_;
  std::optional<Iri> datatype_;
  std::optional<std::string> language_;
};

using Subject = std::variant<Iri, BlankNode>;
using Term = std::variant<Iri, BlankNode, Literal>;

inline Term to_term(const Subject& s) {
  return std::visit([](const auto& v) -> Term { return v; }, s);
}

inline const Iri* as_iri(const Term& t) { return std::get_if<Iri>(&t); }
inline const Iri* as_iri(const Subject& s) { return std::get_if<Iri>(&s); }
inline const Literal* as_literal(const Term& t) { return std::get_if<Literal>(&t); }

inline std::optional<Subject> to_subject(const Term& t) {
  if (auto iri = std::get_if<Iri>(&t)) return Subject{*iri};
  if (auto bn = std::get_if<BlankNode>(&t)) return Subject{*bn};
  return std::nullopt;
}

struct Triple {
  Subject subject;
  Iri predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

namespace detail {

struct SubjectKey {
  const Subject* subject;
};
struct SubjectPredicateKey {
  const Subject* subject;
  const Iri* predicate;
};

// Orders triples and allows range lookups by subject or (subject, predicate).
struct TripleOrder {
  using is_transparent = void;

  bool operator()(const Triple& a, const Triple& b) const { return a < b; }

  bool operator()(const Triple& a, const SubjectKey& k) const { return a.subject < *k.subject; }
  bool operator()(const SubjectKey& k, const Triple& a) const { return *k.subject < a.subject; }

  bool operator()(const Triple& a, const SubjectPredicateKey& k) const {
    if (a.subject != *k.subject) return a.subject < *k.subject;
    return a.predicate < *k.predicate;
  }
  bool operator()(const SubjectPredicateKey& k, const Triple& a) const {
    if (a.subject != *k.subject) return *k.subject < a.subject;
    return *k.predicate < a.predicate;
  }
};

}  // namespace detail

/// A set of triples. Iteration order is the triple ordering (subject,
/// predicate, object), which several serializers rely on.
class Graph {
public:
  using container = std::set<Triple, detail::TripleOrder>;
  using const_iterator = container::const_iterator;

  Graph() = default;
  Graph(std::initializer_list<Triple> triples) : triples_(triples) {}

  bool insert(Triple t) { return triples_.insert(std::move(t)).second; }
  bool insert(Subject s, Iri p, Term o) {
    return insert(Triple{std::move(s), std::move(p), std::move(o)});
  }
  void insert_all(const Graph& other) { triples_.insert(other.begin(), other.end()); }
  bool erase(const Triple& t) { return triples_.erase(t) > 0; }

  bool contains(const Triple& t) const { return triples_.count(t) > 0; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  const_iterator begin() const { return triples_.begin(); }
  const_iterator end() const { return triples_.end(); }

  const std::optional<Iri>& base() const noexcept { return base_; }
  void set_base(std::optional<Iri> base) { base_ = std::move(base); }

  std::vector<Term> objects(const Subject& s, const Iri& p) const {
    std::vector<Term> out;
    auto [lo, hi] = triples_.equal_range(detail::SubjectPredicateKey{&s, &p});
    for (auto it = lo; it != hi; ++it) out.push_back(it->object);
    return out;
  }

  std::vector<Triple> about(const Subject& s) const {
    auto [lo, hi] = triples_.equal_range(detail::SubjectKey{&s});
    return {lo, hi};
  }

  std::vector<Subject> subjects(const Iri& p, const Term& o) const {
    std::vector<Subject> out;
    for (const auto& t : triples_) {
      if (t.predicate == p && t.object == o) out.push_back(t.subject);
    }
    return out;
  }

  bool has(const Subject& s, const Iri& p, const Term& o) const {
    return contains(Triple{s, p, o});
  }

  std::set<std::string> blank_labels() const {
    std::set<std::string> labels;
    for (const auto& t : triples_) {
      if (auto bn = std::get_if<BlankNode>(&t.subject)) labels.insert(bn->label);
      if (auto bn = std::get_if<BlankNode>(&t.object)) labels.insert(bn->label);
    }
    return labels;
  }

  // Set equality; the base IRI is not part of graph identity.
  friend bool operator==(const Graph& a, const Graph& b) { return a.triples_ == b.triples_; }

private:
  container triples_;
  std::optional<Iri> base_;
};

// --- N-Triples ---------------------------------------------------------------

namespace detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class LineParser {
public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  // Returns nullopt for blank and comment-only lines.
  std::optional<Triple> statement() {
    skip_ws();
    if (at_end() || peek() == '#') return std::nullopt;
    Subject subject = parse_subject();
    skip_ws();
    if (at_end() || peek() != '<') fail("expected predicate IRI");
    Iri predicate = parse_iri();
    skip_ws();
    Term object = parse_object();
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' to end the statement");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected text after '.'");
    return Triple{std::move(subject), std::move(predicate), std::move(object)};
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_no_, what + " (column " + std::to_string(pos_ + 1) + ")");
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  std::uint32_t read_hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated \\u escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = s_[pos_ + i];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("invalid hex digit in escape");
    }
    pos_ += digits;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape is not a Unicode scalar");
    return cp;
  }

  void read_uchar(std::string& out) {
    // positioned after the backslash
    const char kind = peek();
    ++pos_;
    append_utf8(out, read_hex(kind == 'u' ? 4 : 8));
  }

  Subject parse_subject() {
    if (at_end()) fail("expected subject");
    if (peek() == '<') return parse_iri();
    if (peek() == '_') return parse_blank();
    fail("subject must be an IRI or blank node");
  }

  Term parse_object() {
    if (at_end()) fail("expected object");
    if (peek() == '<') return parse_iri();
    if (peek() == '_') return parse_blank();
    if (peek() == '"') return parse_literal();
    fail("object must be an IRI, blank node or literal");
  }

  Iri parse_iri() {
    ++pos_;  // '<'
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const unsigned char c = static_cast<unsigned char>(peek());
      if (c == '>') break;
      if (c == '\\') {
        ++pos_;
        if (at_end() || (peek() != 'u' && peek() != 'U')) fail("only \\u escapes allowed in IRIs");
        read_uchar(value);
        continue;
      }
      if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`') {
        fail("character not allowed in IRI");
      }
      value.push_back(static_cast<char>(c));
      ++pos_;
    }
    ++pos_;  // '>'
    if (!Iri::is_absolute(value)) fail("relative or invalid IRI <" + value + ">");
    return Iri(std::move(value));
  }

  static bool label_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.' || c >= 0x80;
  }

  BlankNode parse_blank() {
    if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != ':') fail("expected '_:' blank node");
    pos_ += 2;
    const std::size_t start = pos_;
    while (!at_end() && label_char(static_cast<unsigned char>(peek()))) ++pos_;
    // a trailing '.' terminates the statement, not the label
    while (pos_ > start && s_[pos_ - 1] == '.') --pos_;
    if (pos_ == start || s_[start] == '-' || s_[start] == '.') fail("invalid blank node label");
    return BlankNode{std::string(s_.substr(start, pos_ - start))};
  }

  Literal parse_literal() {
    ++pos_;  // opening quote
    std::string lexical;
    while (true) {
      if (at_end()) fail("unterminated string literal");
      const char c = peek();
      if (c == '"') break;
      if (c == '\n' || c == '\r') fail("raw line break in literal");
      if (c == '\\') {
        ++pos_;
        if (at_end()) fail("dangling backslash");
        switch (peek()) {
          case 't': lexical.push_back('\t'); break;
          case 'b': lexical.push_back('\b'); break;
          case 'n': lexical.push_back('\n'); break;
          case 'r': lexical.push_back('\r'); break;
          case 'f': lexical.push_back('\f'); break;
          case '"': lexical.push_back('"'); break;
          case '\'': lexical.push_back('\''); break;
          case '\\': lexical.push_back('\\'); break;
          case 'u':
          case 'U': read_uchar(lexical); continue;
          default: fail("unknown escape sequence");
        }
        ++pos_;
        continue;
      }
      lexical.push_back(c);
      ++pos_;
    }
    ++pos_;  // closing quote
    if (!at_end() && peek() == '@') {
      ++pos_;
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) {
        ++pos_;
      }
      std::string tag(s_.substr(start, pos_ - start));
      if (!Literal::valid_language(tag)) fail("invalid language tag");
      return Literal::with_language(std::move(lexical), std::move(tag));
    }
    if (pos_ + 1 < s_.size() && peek() == '^' && s_[pos_ + 1] == '^') {
      pos_ += 2;
      if (at_end() || peek() != '<') fail("expected datatype IRI after '^^'");
      return Literal(std::move(lexical), parse_iri());
    }
    return Literal(std::move(lexical));
  }

  std::string_view s_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

inline void escape_string(std::string& out, std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          out += "\\u00";
          out.push_back(kHex[c >> 4]);
          out.push_back(kHex[c & 0xF]);
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
}

}  // namespace detail

inline Graph parse_ntriples(std::string_view text) {
  Graph g;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (auto t = detail::LineParser(line, line_no).statement()) g.insert(std::move(*t));
    start = end + 1;
  }
  return g;
}

inline std::string render_term(const Term& t) {
  std::string out;
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Iri>) {
          out += '<';
          out += v.str();
          out += '>';
        } else if constexpr (std::is_same_v<V, BlankNode>) {
          out += "_:";
          out += v.label;
        } else {
          out += '"';
          detail::escape_string(out, v.lexical());
          out += '"';
          if (v.language()) {
            out += '@';
            out += *v.language();
          } else if (v.datatype()) {
            out += "^^<";
            out += v.datatype()->str();
            out += '>';
          }
        }
      },
      t);
  return out;
}

inline std::string render_term(const Subject& s) { return render_term(to_term(s)); }

inline std::string render_triple(const Triple& t) {
  return render_term(t.subject) + " " + render_term(Term{t.predicate}) + " " +
         render_term(t.object) + " .";
}

/// One line per triple, sorted by code point, LF-terminated. Blank nodes are
/// rejected: callers must mint IRIs for every node first.
inline std::string serialize_ntriples_canonical(const Graph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.size());
  for (const auto& t : g) {
    if (std::holds_alternative<BlankNode>(t.subject) ||
        std::holds_alternative<BlankNode>(t.object)) {
      throw BlankNodeNotAllowed("canonical N-Triples cannot contain blank nodes: " +
                                render_triple(t));
    }
    lines.push_back(render_triple(t));
  }
  // UTF-8 byte order is code point order, and char_traits<char> compares unsigned.
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

// --- Turtle output -----------------------------------------------------------

using PrefixMap = std::map<std::string, Iri>;

inline PrefixMap default_prefixes() {
  return {
      {"cnt", Iri("http://www.w3.org/2008/content#")},
      {"dc", Iri("http://purl.org/dc/elements/1.1/")},
      {"dcterms", Iri("http://purl.org/dc/terms/")},
      {"foaf", Iri("http://xmlns.com/foaf/0.1/")},
      {"oac", Iri("http://www.openannotation.org/ns/")},
      {"rdf", Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#")},
      {"xsd", Iri("http://www.w3.org/2001/XMLSchema#")},
  };
}

namespace detail {

inline bool valid_local_name(std::string_view local) {
  if (local.empty()) return true;
  auto word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  if (!word(local.front()) || local.back() == '.') return false;
  return std::all_of(local.begin(), local.end(),
                     [&](char c) { return word(c) || c == '-' || c == '.'; });
}

class TurtleWriter {
public:
  explicit TurtleWriter(const PrefixMap& prefixes) : prefixes_(prefixes) {}

  std::string iri(const Iri& v) const {
    const std::string* best_prefix = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, ns] : prefixes_) {
      const auto& n = ns.str();
      if (n.size() > best_len && v.str().compare(0, n.size(), n) == 0 &&
          valid_local_name(std::string_view(v.str()).substr(n.size()))) {
        best_prefix = &prefix;
        best_len = n.size();
      }
    }
    if (best_prefix) return *best_prefix + ":" + v.str().substr(best_len);
    return "<" + v.str() + ">";
  }

  std::string term(const Term& t) const {
    if (auto v = std::get_if<Iri>(&t)) return iri(*v);
    if (auto lit = std::get_if<Literal>(&t); lit && lit->datatype() && !lit->language()) {
      std::string out = "\"";
      escape_string(out, lit->lexical());
      return out + "\"^^" + iri(*lit->datatype());
    }
    return render_term(t);
  }

private:
  const PrefixMap& prefixes_;
};

}  // namespace detail

/// Pretty Turtle: prefix header, subjects grouped with `;`, repeated objects
/// joined with `,`, and `a` for rdf:type (listed first).
inline std::string serialize_turtle(const Graph& g, const PrefixMap& prefixes = default_prefixes()) {
  static const Iri kRdfType("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
  detail::TurtleWriter w(prefixes);
  std::string out;
  for (const auto& [prefix, ns] : prefixes) {
    out += "@prefix " + prefix + ": <" + ns.str() + "> .\n";
  }

  auto it = g.begin();
  while (it != g.end()) {
    const Subject& subject = it->subject;
    auto block_end = it;
    std::map<Iri, std::vector<Term>> by_predicate;
    std::vector<Term> types;
    for (; block_end != g.end() && block_end->subject == subject; ++block_end) {
      if (block_end->predicate == kRdfType) types.push_back(block_end->object);
      else by_predicate[block_end->predicate].push_back(block_end->object);
    }

    out += '\n';
    out += w.term(to_term(subject));
    bool first = true;
    auto emit = [&](const std::string& pred, const std::vector<Term>& objects) {
      out += first ? " " : " ;\n    ";
      first = false;
      out += pred;
      for (std::size_t i = 0; i < objects.size(); ++i) {
        out += i == 0 ? " " : " , ";
        out += w.term(objects[i]);
      }
    };
    if (!types.empty()) emit("a", types);
    for (const auto& [pred, objects] : by_predicate) emit(w.iri(pred), objects);
    out += " .\n";
    it = block_end;
  }
  return out;
}

// --- isomorphism -------------------------------------------------------------

namespace detail {

class IsoSearch {
public:
  IsoSearch(const Graph& a, const Graph& b) : b_(b) {
    for (const auto& t : a) {
      if (has_blank(t)) a_open_.push_back(t);
    }
    const auto la = a.blank_labels();
    const auto lb = b.blank_labels();
    a_labels_.assign(la.begin(), la.end());
    b_labels_.assign(lb.begin(), lb.end());
    for (const auto& l : a_labels_) sig_a_[l] = signature(a, l);
    for (const auto& l : b_labels_) sig_b_[l] = signature(b, l);
    // Most constrained labels first.
    std::sort(a_labels_.begin(), a_labels_.end(), [&](const auto& x, const auto& y) {
      return sig_a_[x].size() > sig_a_[y].size() || (sig_a_[x].size() == sig_a_[y].size() && x < y);
    });
  }

  bool run() { return assign(0); }

private:
  static bool has_blank(const Triple& t) {
    return std::holds_alternative<BlankNode>(t.subject) ||
           std::holds_alternative<BlankNode>(t.object);
  }

  // Describes every edge touching the label, with other blank nodes masked.
  static std::vector<std::string> signature(const Graph& g, const std::string& label) {
    std::vector<std::string> sig;
    for (const auto& t : g) {
      const auto* s = std::get_if<BlankNode>(&t.subject);
      const auto* o = std::get_if<BlankNode>(&t.object);
      const bool s_hit = s && s->label == label;
      const bool o_hit = o && o->label == label;
      if (!s_hit && !o_hit) continue;
      std::string subj = s_hit ? "@" : (s ? "_" : render_term(t.subject));
      std::string obj = o_hit ? "@" : (o ? "_" : render_term(t.object));
      sig.push_back(subj + " " + t.predicate.str() + " " + obj);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
  }

  Subject map_subject(const Subject& s) const {
    if (auto bn = std::get_if<BlankNode>(&s)) return BlankNode{mapping_.at(bn->label)};
    return s;
  }
  Term map_object(const Term& o) const {
    if (auto bn = std::get_if<BlankNode>(&o)) return BlankNode{mapping_.at(bn->label)};
    return o;
  }

  bool mapped(const Term& t) const {
    auto bn = std::get_if<BlankNode>(&t);
    return !bn || mapping_.count(bn->label);
  }

  bool consistent(const std::string& label) const {
    for (const auto& t : a_open_) {
      const auto* s = std::get_if<BlankNode>(&t.subject);
      const auto* o = std::get_if<BlankNode>(&t.object);
      if (!(s && s->label == label) && !(o && o->label == label)) continue;
      if (!mapped(to_term(t.subject)) || !mapped(t.object)) continue;
      if (!b_.contains(Triple{map_subject(t.subject), t.predicate, map_object(t.object)})) {
        return false;
      }
    }
    return true;
  }

  bool assign(std::size_t i) {
    if (i == a_labels_.size()) return true;
    const auto& label = a_labels_[i];
    for (const auto& candidate : b_labels_) {
      if (used_.count(candidate) || sig_a_[label] != sig_b_[candidate]) continue;
      mapping_[label] = candidate;
      used_.insert(candidate);
      if (consistent(label) && assign(i + 1)) return true;
      mapping_.erase(label);
      used_.erase(candidate);
    }
    return false;
  }

  const Graph& b_;
  std::vector<Triple> a_open_;
  std::vector<std::string> a_labels_, b_labels_;
  std::map<std::string, std::vector<std::string>> sig_a_, sig_b_;
  std::map<std::string, std::string> mapping_;
  std::set<std::string> used_;
};

}  // namespace detail

inline constexpr std::size_t kMaxIsomorphismBlankNodes = 20;

/// True iff some bijection between blank node labels maps `a` onto `b`.
/// Each graph may hold at most kMaxIsomorphismBlankNodes blank nodes.
inline bool graph_isomorphic(const Graph& a, const Graph& b) {
  const auto la = a.blank_labels();
  const auto lb = b.blank_labels();
  if (la.size() > kMaxIsomorphismBlankNodes || lb.size() > kMaxIsomorphismBlankNodes) {
    throw IsomorphismBoundExceeded("isomorphism check limited to " +
                                   std::to_string(kMaxIsomorphismBlankNodes) + " blank nodes");
  }
  if (a.size() != b.size() || la.size() != lb.size()) return false;
  for (const auto& t : a) {
    const bool ground = !std::holds_alternative<BlankNode>(t.subject) &&
                        !std::holds_alternative<BlankNode>(t.object);
    if (ground && !b.contains(t)) return false;
  }
  if (la.empty()) return true;
  return detail::IsoSearch(a, b).run();
}

}  // namespace oa::rdf

#endif  // OA_RDF_HPP
